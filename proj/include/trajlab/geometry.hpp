#pragma once

#include "trajlab/curve.hpp"
#include "trajlab/manifold.hpp"

#include <span>
#include <string>
#include <vector>

namespace trajlab {

// Levi-Civita connection coefficients at a point: gamma[k](i, j) = Γ^k_{ij}.
struct Christoffel {
  std::vector<Matrix> gamma;

  int dim() const { return static_cast<int>(gamma.size()); }
  double operator()(int k, int i, int j) const { return gamma[k](i, j); }
  // Γ^k_{ij} v^i w^j for every k.
  Vector contract(const Vector& v, const Vector& w) const;
};

// Throws kDomain when x lies outside the chart.
void require_in_domain(const ManifoldModel& model, const Vector& x);
// Throws kDomain when the finite-difference stencil around x leaves the chart.
void require_interior(const ManifoldModel& model, const Vector& x);

// Inverse metric; throws kDegenerateMetric when g(x) is not positive definite.
Matrix inverse_metric(const Matrix& G);

// Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij}), with metric partials
// from 5-point central differences. Exactly symmetric in (i, j).
Christoffel christoffel(const ManifoldModel& model, const Vector& point);

// (∇_T W)^k = dW^k/dt + Γ^k_{ij} T^i W^j.
Vector covariant_derivative(const Christoffel& gamma, const Vector& tangent,
                            const Vector& field, const Vector& field_rate);

// Covariant derivative of a field sampled along a uniformly sampled curve.
// The first and last two samples use one-sided stencils (see fd::sample_stencil).
TangentVector covariant_derivative_along(const ManifoldModel& model, const Trajectory& curve,
                                         std::span<const Vector> field, int index);

// ---------------------------------------------------------------------------
// Structure identities

struct AxiomResidual {
  std::string axiom;
  double residual = 0.0;
  bool pass = false;
};

struct StructureReport {
  double tolerance = 0.0;
  std::vector<Vector> sample_points;
  std::vector<AxiomResidual> axioms;

  bool all_pass() const;
  const AxiomResidual& axiom(const std::string& name) const;
};

// Sup over the sample points of the defect of each framed metric f-structure
// axiom (max-abs entry norm). Positive definiteness reports 0 when the
// smallest metric eigenvalue is positive, and 1 - λ_min otherwise.
StructureReport check_framed_structure(const ManifoldModel& model,
                                       std::span<const Vector> sample_points,
                                       double tolerance = 1e-8);

// nabla_f[a](k, b) = ((∇_{∂a} f) ∂b)^k.
std::vector<Matrix> covariant_derivative_of_f(const ManifoldModel& model, const Vector& x,
                                              const Christoffel& gamma);

// Column a of entry i holds ∇_{∂a} ξ_i.
std::vector<Matrix> covariant_derivative_of_xi(const ManifoldModel& model, const Vector& x,
                                               const Christoffel& gamma);

struct StructureFunctions {
  Vector alpha;
  Vector beta;
  double residual = 0.0;
};

// Max over coordinate pairs (a, b) of the g-norm of
//   (∇_a f)∂b − Σ_i [α_i{g(f∂a, f∂b)ξ_i + η_i(∂b) f²∂a} + β_i{g(f∂a, ∂b)ξ_i − η_i(∂b) f∂a}].
double trans_s_defect(const ManifoldModel& model, const Vector& x, const Vector& alpha,
                      const Vector& beta);

// Least-squares fit of α, β to the defining identity over all dim² coordinate
// pairs. Throws kStructure if the framed axioms fail at x and kUnderdetermined
// when the fit is rank deficient.
StructureFunctions extract_alpha_beta(const ManifoldModel& model, const Vector& point);

// Stored α, β when the model has them, otherwise the fitted values.
StructureFunctions structure_functions(const ManifoldModel& model, const Vector& point);

// max_{a,i} ‖∇_{∂a} ξ_i + α_i f∂a + β_i f²∂a‖_g.
double check_xi_derivative(const ManifoldModel& model, const Vector& point);

// Ω(X, Y) = g(X, fY).
double fundamental_two_form(const ManifoldModel& model, const Vector& point, const Vector& X,
                            const Vector& Y);

// max over coordinate triples of |dΩ − 2 Ω∧Σβ_iη_i|, both sides in the
// cyclic-sum convention dΩ(a,b,c) = ∂aΩ_bc + ∂bΩ_ca + ∂cΩ_ab.
double check_d_omega(const ManifoldModel& model, const Vector& point);

struct NormalityResidual {
  // [f,f] + 2Σ dη_i⊗ξ_i − Σ_{i,j}[η_j(∇_Xξ_i)η_j(Y) − η_j(∇_Yξ_i)η_j(X)]ξ_i
  double identity = 0.0;
  // [f,f] + 2Σ dη_i⊗ξ_i (S-structure condition)
  double s_structure = 0.0;
};

// dη(X, Y) = ½(Xη(Y) − Yη(X) − η([X, Y])).
NormalityResidual check_normality(const ManifoldModel& model, const Vector& point);

}  // namespace trajlab
