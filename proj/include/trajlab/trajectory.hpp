#pragma once

#include "trajlab/curve.hpp"
#include "trajlab/errors.hpp"
#include "trajlab/manifold.hpp"

#include <random>
#include <vector>

namespace trajlab {

// a^k = −Γ^k_{ij} v^i v^j − q f^k_j v^j
Vector lorentz_acceleration(const ManifoldModel& model, const Vector& x, const Vector& v,
                            double q);

// Raised when integration stops early; carries the samples computed so far.
class IntegrationError : public Error {
 public:
  IntegrationError(ErrorCode code, const std::string& message, Trajectory partial)
      : Error(code, message), partial_(std::move(partial)) {}

  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultEndTime = 10.0;

// Classical RK4 on (x', v') = (v, a), no renormalization. Produces
// ceil(t_end/h) + 1 samples with t_i = i h.
Trajectory integrate_trajectory(const ManifoldModel& model, const Vector& x0, const Vector& v0,
                                double q, double t_end = kDefaultEndTime,
                                double h = kDefaultStep);

// (v − Σ η_i(v) ξ_i) scaled to unit g-norm.
TangentVector legendre_project(const ManifoldModel& model, const Vector& x, const Vector& v);

// Projection of a uniformly distributed Euclidean unit vector.
TangentVector random_legendre_direction(const ManifoldModel& model, const Vector& x,
                                        std::mt19937_64& rng);

// Unit vector along v in the metric at x.
Vector unit_vector(const ManifoldModel& model, const Vector& x, const Vector& v);

struct DiagnosticsTable {
  std::vector<double> t;
  std::vector<double> speed;
  std::vector<Vector> eta;    // η_i(T) per sample
  std::vector<Vector> theta;  // contact angles per sample, in [0, π]
  double speed_drift = 0.0;       // max |speed − 1|
  double legendre_defect = 0.0;   // max |η_i(T)|
};

DiagnosticsTable diagnostics(const ManifoldModel& model, const Trajectory& curve);

}  // namespace trajlab
