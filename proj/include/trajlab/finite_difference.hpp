#pragma once

#include "trajlab/manifold.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace trajlab::fd {

// Step for the 5-point central stencil in coordinate k. The stencil error is
// O(h^4) truncation plus O(eps/h) rounding, balanced at h ~ eps^(1/5).
inline double step(double coordinate) {
  static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.2);
  const double h = base * std::max(1.0, std::abs(coordinate));
  // Make x + h exactly representable so the abscissae are symmetric.
  volatile double shifted = coordinate + h;
  return shifted - coordinate;
}

// Per-coordinate stencil half-width (2h) at x; used for interior checks.
Vector stencil_reach(const Vector& x);

// d/dx_k of a field at x using the 5-point central stencil.
template <class Fn>
auto partial(const Fn& fn, const Vector& x, int k) -> decltype(fn(x)) {
  const double h = step(x[k]);
  Vector p = x;
  p[k] = x[k] + 2 * h;
  auto f2 = fn(p);
  p[k] = x[k] + h;
  auto f1 = fn(p);
  p[k] = x[k] - h;
  auto m1 = fn(p);
  p[k] = x[k] - 2 * h;
  auto m2 = fn(p);
  return (m2 - 8.0 * m1 + 8.0 * f1 - f2) / (12.0 * h);
}

// Five-point stencil along a uniformly sampled sequence. Interior samples use
// the centered stencil; the first and last two use shifted one-sided ones.
struct SampleStencil {
  int first = 0;                 // index of the first sample used
  std::array<double, 5> weight;  // multiply by 1/spacing
  bool one_sided = false;
};

SampleStencil sample_stencil(int index, int count);

// Derivative of a uniformly sampled scalar sequence at every sample.
std::vector<double> differentiate(std::span<const double> values, double spacing);

// Derivative of a uniformly sampled vector sequence at one sample.
Vector differentiate_at(std::span<const Vector> values, int index, double spacing);

}  // namespace trajlab::fd
