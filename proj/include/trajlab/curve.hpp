#pragma once

#include "trajlab/manifold.hpp"

#include <string>
#include <vector>

namespace trajlab {

// Uniformly sampled unit-speed curve: t_i = t0 + i*h.
struct Trajectory {
  double q = 0.0;
  double h = 0.0;
  std::vector<double> t;
  std::vector<Vector> position;
  std::vector<Vector> velocity;
  std::string model_name;

  int size() const { return static_cast<int>(t.size()); }
  bool empty() const { return t.empty(); }
};

}  // namespace trajlab
