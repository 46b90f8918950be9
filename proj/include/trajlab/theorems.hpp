#pragma once

#include "trajlab/curve.hpp"
#include "trajlab/frenet.hpp"
#include "trajlab/manifold.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trajlab {

enum class Verdict { kHolds, kFails, kNotApplicable };

std::string to_string(Verdict v);

// One quantitative condition. Most conditions pass when value < tolerance;
// lower-bound conditions (non-vanishing λ, nonexistence certificates) pass
// when value > tolerance.
struct Condition {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;
  bool evaluable = true;
  bool pass = false;
  std::string note;
};

struct TheoremReport {
  std::string theorem;
  Verdict verdict = Verdict::kNotApplicable;
  std::string failing_condition;
  std::string note;
  std::vector<std::string> flags;
  std::vector<Condition> conditions;
  std::optional<int> delta;
  std::vector<double> c;  // constants c_i
  std::map<std::string, double> scalars;
  // Extracted functions on the checked sample window; "t" holds the times.
  std::map<std::string, std::vector<double>> series;

  bool holds() const { return verdict == Verdict::kHolds; }
  const Condition* condition(const std::string& name) const;
};

enum class Bundle { kTangent, kNormal };

// Samples trimmed from each end of the curve before checking.
inline constexpr int kTheoremMargin = 4;

// Legendre trajectory classification: κ₁ = |q|, fT = δE₂, β = 0,
// κ₂ = √Σα², E₃ = δΣαξ/√Σα², κ₃ from the c_i' formula, constant c_i.
TheoremReport check_legendre_trajectory(const ManifoldModel& model, const Trajectory& curve,
                                        const FrenetApparatus& apparatus, double q, double tol);

TheoremReport c_parallel_check(const ManifoldModel& model, const Trajectory& curve,
                               const FrenetApparatus& apparatus, Bundle bundle, double tol);

TheoremReport c_proper_check(const ManifoldModel& model, const Trajectory& curve,
                             const FrenetApparatus& apparatus, Bundle bundle, double tol);

// Σξ = √s·m·(cos w E₂ + sin w cos φ E₃ + sin w sin φ E₄) over the frame span
// E₂..E_{min(r, max_frame)}. With E₃ the last frame used, w = atan2(c₃, c₂) is
// signed and unwrapped and φ ≡ 0; with E₄ available w ∈ [0, π], φ ∈ (−π, π].
struct XiDecomposition {
  int span_end = 2;  // last frame index used
  std::vector<double> w;
  std::vector<double> phi;
  std::vector<double> magnitude;  // |projection| / √s
  std::vector<double> residual;   // ‖Σξ − projection‖_g
};

XiDecomposition decompose_xi_sum(const ManifoldModel& model, const Trajectory& curve,
                                 const FrenetApparatus& apparatus, int max_frame = 4);

}  // namespace trajlab
