#pragma once

#include "trajlab/curve.hpp"
#include "trajlab/manifold.hpp"

#include <string>
#include <vector>

namespace trajlab {

struct FrenetApparatus {
  int order = 1;  // osculating order r
  // frames[j][i] is E_{j+1} at sample i (j < order).
  std::vector<std::vector<Vector>> frames;
  // curvatures[j][i] is κ_{j+1} at sample i (j < order − 1).
  std::vector<std::vector<double>> curvatures;
  double rank_tol = 0.0;
  // Max over j of the g-norm defect of the j-th Frenet equation.
  std::vector<double> residual;
  std::vector<double> t;
  double h = 0.0;

  int size() const { return static_cast<int>(t.size()); }
  // Samples excluded at each end when taking suprema.
  static constexpr int kBoundary = 2;
  int window_begin() const { return kBoundary; }
  int window_end() const { return size() - kBoundary; }  // exclusive

  // κ_j (1-based) at every sample; zeros when j ≥ order.
  std::vector<double> kappa(int j) const;
  // E_j (1-based) at sample i; the zero vector when j > order.
  Vector frame(int j, int i) const;
};

// 1e-4 · max(1, |q|)
double default_rank_tol(double q);

// Iterated covariant differentiation with double Gram-Schmidt. The order is
// the first j whose κ_j stays below rank_tol on the whole window; a κ_j that
// is below rank_tol on only part of the window raises kVariableOrder.
FrenetApparatus compute_frenet(const ManifoldModel& model, const Trajectory& curve,
                               double rank_tol);

enum class CurveKind { kGeodesic, kCircle, kHelix, kGeneric };

struct CurveClassification {
  CurveKind kind = CurveKind::kGeneric;
  int order = 1;
  std::string label;
};

CurveClassification classify_curve(const FrenetApparatus& apparatus, double const_tol);

// Recomputes the Frenet-equation defect per sample using the apparatus's
// frames and curvatures.
std::vector<double> frenet_residual(const ManifoldModel& model, const FrenetApparatus& apparatus,
                                    const Trajectory& curve);

}  // namespace trajlab
