#include "trajlab/geometry.hpp"

#include "trajlab/errors.hpp"
#include "trajlab/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace trajlab {

namespace {

std::string format_point(const Vector& x) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
  os << ')';
  return os.str();
}

// A_a(k, l) = Γ^k_{a l}: the connection acting on components along ∂a.
Matrix connection_matrix(const Christoffel& gamma, int a) {
  const int d = gamma.dim();
  Matrix A(d, d);
  for (int k = 0; k < d; ++k) A.row(k) = gamma.gamma[k].row(a);
  return A;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

// ---------------------------------------------------------------------------
// ManifoldModel / Box helpers

Box Box::cube(int dim, double half_width) {
  return Box{std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width)};
}

bool Box::contains(const Vector& x) const {
  if (x.size() != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    if (!(x[k] >= lo[k] && x[k] <= hi[k])) return false;
  }
  return true;
}

bool Box::contains_with_margin(const Vector& x, const Vector& margin) const {
  if (x.size() != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    if (!(x[k] - margin[k] >= lo[k] && x[k] + margin[k] <= hi[k])) return false;
  }
  return true;
}

Vector Box::center() const {
  Vector c(dim());
  for (int k = 0; k < dim(); ++k) c[k] = 0.5 * (lo[k] + hi[k]);
  return c;
}

Matrix ManifoldModel::xi_matrix(const Vector& x) const {
  Matrix m(dim(), s);
  for (int i = 0; i < s; ++i) m.col(i) = xi[i](x);
  return m;
}

Matrix ManifoldModel::eta_matrix(const Vector& x) const {
  Matrix m(s, dim());
  for (int i = 0; i < s; ++i) m.row(i) = eta[i](x).transpose();
  return m;
}

Vector ManifoldModel::xi_sum(const Vector& x) const {
  Vector sum = Vector::Zero(dim());
  for (int i = 0; i < s; ++i) sum += xi[i](x);
  return sum;
}

// ---------------------------------------------------------------------------
// Connection

Vector Christoffel::contract(const Vector& v, const Vector& w) const {
  Vector out(dim());
  for (int k = 0; k < dim(); ++k) out[k] = v.dot(gamma[k] * w);
  return out;
}

void require_in_domain(const ManifoldModel& model, const Vector& x) {
  if (!model.domain.contains(x)) {
    throw Error(ErrorCode::kDomain, "point " + format_point(x) + " outside chart domain");
  }
}

void require_interior(const ManifoldModel& model, const Vector& x) {
  require_in_domain(model, x);
  if (!model.domain.contains_with_margin(x, fd::stencil_reach(x))) {
    throw Error(ErrorCode::kDomain,
                "finite-difference stencil at " + format_point(x) + " leaves chart domain");
  }
}

Matrix inverse_metric(const Matrix& G) {
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerateMetric, "degenerate metric: not positive definite");
  }
  Matrix inv = llt.solve(Matrix::Identity(G.rows(), G.cols()));
  if (!inv.allFinite()) throw Error(ErrorCode::kDegenerateMetric, "degenerate metric");
  return inv;
}

Christoffel christoffel(const ManifoldModel& model, const Vector& point) {
  require_in_domain(model, point);
  const int d = model.dim();
  const Matrix G = model.metric(point);
  const Matrix Ginv = inverse_metric(G);

  std::vector<Matrix> dg(d);
  for (int l = 0; l < d; ++l) dg[l] = fd::partial(model.metric, point, l);

  // First kind: first[l](i, j) = ½(∂i g_jl + ∂j g_il − ∂l g_ij), i <= j.
  std::vector<Matrix> first(d, Matrix::Zero(d, d));
  for (int l = 0; l < d; ++l) {
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        first[l](i, j) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      }
    }
  }

  Christoffel out;
  out.gamma.assign(d, Matrix::Zero(d, d));
  for (int k = 0; k < d; ++k) {
    Matrix& gk = out.gamma[k];
    for (int l = 0; l < d; ++l) {
      const double w = Ginv(k, l);
      if (w == 0.0) continue;
      for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) gk(i, j) += w * first[l](i, j);
      }
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) gk(j, i) = gk(i, j);
    }
  }
  return out;
}

Vector covariant_derivative(const Christoffel& gamma, const Vector& tangent, const Vector& field,
                            const Vector& field_rate) {
  return field_rate + gamma.contract(tangent, field);
}

TangentVector covariant_derivative_along(const ManifoldModel& model, const Trajectory& curve,
                                         std::span<const Vector> field, int index) {
  if (curve.size() < 5) {
    throw Error(ErrorCode::kInsufficientSamples,
                "insufficient samples: need at least 5, have " + std::to_string(curve.size()));
  }
  if (static_cast<int>(field.size()) != curve.size()) {
    throw Error(ErrorCode::kInvalidArgument, "field length does not match curve samples");
  }
  const Vector& x = curve.position.at(index);
  const Christoffel gamma = christoffel(model, x);
  const Vector rate = fd::differentiate_at(field, index, curve.h);
  return {x, covariant_derivative(gamma, curve.velocity[index], field[index], rate)};
}

// ---------------------------------------------------------------------------
// Framed structure

bool StructureReport::all_pass() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResidual& a) { return a.pass; });
}

const AxiomResidual& StructureReport::axiom(const std::string& name) const {
  for (const auto& a : axioms) {
    if (a.axiom == name) return a;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown axiom: " + name);
}

StructureReport check_framed_structure(const ManifoldModel& model,
                                       std::span<const Vector> sample_points, double tolerance) {
  if (sample_points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "check_framed_structure needs at least one point");
  }
  const int d = model.dim();
  const int s = model.s;
  const char* names[] = {"f_squared",          "eta_xi_duality",    "f_xi_zero",
                         "eta_f_zero",         "metric_compatible", "eta_metric_dual",
                         "xi_orthonormal",     "metric_symmetric",  "metric_positive_definite"};
  constexpr int kAxioms = 9;
  double worst[kAxioms] = {};

  const Matrix Id = Matrix::Identity(d, d);
  const Matrix Is = Matrix::Identity(s, s);
  for (const Vector& x : sample_points) {
    require_in_domain(model, x);
    const Matrix G = model.metric(x);
    const Matrix F = model.f_tensor(x);
    const Matrix Xi = model.xi_matrix(x);
    const Matrix Eta = model.eta_matrix(x);

    const double r[kAxioms] = {
        max_abs(F * F + Id - Xi * Eta),
        max_abs(Eta * Xi - Is),
        max_abs(F * Xi),
        max_abs(Eta * F),
        max_abs(F.transpose() * G * F - G + Eta.transpose() * Eta),
        max_abs(Eta - (G * Xi).transpose()),
        max_abs(Xi.transpose() * G * Xi - Is),
        max_abs(G - G.transpose()),
        [&] {
          Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (G + G.transpose()),
                                                    Eigen::EigenvaluesOnly);
          const double lmin = eig.eigenvalues().minCoeff();
          return lmin > 0.0 ? 0.0 : 1.0 - lmin;
        }(),
    };
    for (int a = 0; a < kAxioms; ++a) {
      // NaN defects must not pass.
      worst[a] = std::isnan(r[a]) ? std::numeric_limits<double>::infinity()
                                  : std::max(worst[a], r[a]);
    }
  }

  StructureReport report;
  report.tolerance = tolerance;
  report.sample_points.assign(sample_points.begin(), sample_points.end());
  for (int a = 0; a < kAxioms; ++a) {
    report.axioms.push_back({names[a], worst[a], worst[a] < tolerance});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Trans-S identities

std::vector<Matrix> covariant_derivative_of_f(const ManifoldModel& model, const Vector& x,
                                              const Christoffel& gamma) {
  const int d = model.dim();
  const Matrix F = model.f_tensor(x);
  std::vector<Matrix> out(d);
  for (int a = 0; a < d; ++a) {
    const Matrix A = connection_matrix(gamma, a);
    out[a] = fd::partial(model.f_tensor, x, a) + A * F - F * A;
  }
  return out;
}

std::vector<Matrix> covariant_derivative_of_xi(const ManifoldModel& model, const Vector& x,
                                               const Christoffel& gamma) {
  const int d = model.dim();
  std::vector<Matrix> out(model.s, Matrix(d, d));
  for (int a = 0; a < d; ++a) {
    const Matrix A = connection_matrix(gamma, a);
    for (int i = 0; i < model.s; ++i) {
      out[i].col(a) = fd::partial(model.xi[i], x, a) + A * model.xi[i](x);
    }
  }
  return out;
}

namespace {

// Basis vectors of the identity's right side for one coordinate pair (a, b):
// column i is the α_i term, column s + i the β_i term.
struct IdentityTerms {
  Matrix G, F, F2, Xi, Eta, FtGF, FtG;
};

IdentityTerms identity_terms(const ManifoldModel& model, const Vector& x) {
  IdentityTerms t;
  t.G = model.metric(x);
  t.F = model.f_tensor(x);
  t.F2 = t.F * t.F;
  t.Xi = model.xi_matrix(x);
  t.Eta = model.eta_matrix(x);
  t.FtG = t.F.transpose() * t.G;
  t.FtGF = t.FtG * t.F;
  return t;
}

Matrix identity_columns(const IdentityTerms& t, int s, int a, int b) {
  const int d = static_cast<int>(t.G.rows());
  Matrix cols(d, 2 * s);
  for (int i = 0; i < s; ++i) {
    cols.col(i) = t.FtGF(a, b) * t.Xi.col(i) + t.Eta(i, b) * t.F2.col(a);
    cols.col(s + i) = t.FtG(a, b) * t.Xi.col(i) - t.Eta(i, b) * t.F.col(a);
  }
  return cols;
}

double defect_with(const ManifoldModel& model, const IdentityTerms& t,
                   const std::vector<Matrix>& nabla_f, const Vector& coeffs) {
  const int d = model.dim();
  double worst = 0.0;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const Vector defect = nabla_f[a].col(b) - identity_columns(t, model.s, a, b) * coeffs;
      worst = std::max(worst, norm(t.G, defect));
    }
  }
  return worst;
}

}  // namespace

double trans_s_defect(const ManifoldModel& model, const Vector& x, const Vector& alpha,
                      const Vector& beta) {
  if (alpha.size() != model.s || beta.size() != model.s) {
    throw Error(ErrorCode::kInvalidArgument, "alpha/beta must have s entries");
  }
  const Christoffel gamma = christoffel(model, x);
  const auto nabla_f = covariant_derivative_of_f(model, x, gamma);
  Vector coeffs(2 * model.s);
  coeffs << alpha, beta;
  return defect_with(model, identity_terms(model, x), nabla_f, coeffs);
}

StructureFunctions extract_alpha_beta(const ManifoldModel& model, const Vector& point) {
  const Vector pts[] = {point};
  const StructureReport structure = check_framed_structure(model, pts, 1e-8);
  if (!structure.all_pass()) {
    std::string failing;
    for (const auto& a : structure.axioms) {
      if (!a.pass) failing += (failing.empty() ? "" : ", ") + a.axiom;
    }
    throw Error(ErrorCode::kStructure, "framed structure axioms fail at point: " + failing);
  }

  const int d = model.dim();
  const int s = model.s;
  const Christoffel gamma = christoffel(model, point);
  const auto nabla_f = covariant_derivative_of_f(model, point, gamma);
  const IdentityTerms terms = identity_terms(model, point);

  // Weight each block by L^T (G = L L^T) so the fit minimizes g-norms.
  const Matrix Lt = Eigen::LLT<Matrix>(terms.G).matrixU();
  Matrix design(d * d * d, 2 * s);
  Vector rhs(d * d * d);
  int row = 0;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      design.middleRows(row, d) = Lt * identity_columns(terms, s, a, b);
      rhs.segment(row, d) = Lt * nabla_f[a].col(b);
      row += d;
    }
  }

  Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0 || sv[sv.size() - 1] < 1e-10 * sv[0]) {
    throw Error(ErrorCode::kUnderdetermined, "underdetermined at point " + format_point(point));
  }
  const Vector coeffs = svd.solve(rhs);

  StructureFunctions out;
  out.alpha = coeffs.head(s);
  out.beta = coeffs.tail(s);
  out.residual = defect_with(model, terms, nabla_f, coeffs);
  return out;
}

StructureFunctions structure_functions(const ManifoldModel& model, const Vector& point) {
  if (!model.has_structure_functions()) return extract_alpha_beta(model, point);
  StructureFunctions out;
  out.alpha.resize(model.s);
  out.beta.resize(model.s);
  for (int i = 0; i < model.s; ++i) {
    out.alpha[i] = (*model.alpha)[i](point);
    out.beta[i] = (*model.beta)[i](point);
  }
  out.residual = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double check_xi_derivative(const ManifoldModel& model, const Vector& point) {
  const StructureFunctions ab = structure_functions(model, point);
  const Christoffel gamma = christoffel(model, point);
  const auto nabla_xi = covariant_derivative_of_xi(model, point, gamma);
  const Matrix G = model.metric(point);
  const Matrix F = model.f_tensor(point);
  const Matrix F2 = F * F;
  double worst = 0.0;
  for (int i = 0; i < model.s; ++i) {
    for (int a = 0; a < model.dim(); ++a) {
      const Vector defect = nabla_xi[i].col(a) + ab.alpha[i] * F.col(a) + ab.beta[i] * F2.col(a);
      worst = std::max(worst, norm(G, defect));
    }
  }
  return worst;
}

double fundamental_two_form(const ManifoldModel& model, const Vector& point, const Vector& X,
                            const Vector& Y) {
  require_in_domain(model, point);
  return X.dot(model.metric(point) * (model.f_tensor(point) * Y));
}

double check_d_omega(const ManifoldModel& model, const Vector& point) {
  require_interior(model, point);
  const int d = model.dim();
  auto omega = [&model](const Vector& x) -> Matrix {
    return model.metric(x) * model.f_tensor(x);
  };
  const Matrix Om = omega(point);
  std::vector<Matrix> dOm(d);
  for (int c = 0; c < d; ++c) dOm[c] = fd::partial(omega, point, c);

  const StructureFunctions ab = structure_functions(model, point);
  const Vector theta = model.eta_matrix(point).transpose() * ab.beta;

  double worst = 0.0;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      for (int c = b + 1; c < d; ++c) {
        const double lhs = dOm[a](b, c) + dOm[b](c, a) + dOm[c](a, b);
        const double rhs = 2.0 * (Om(a, b) * theta[c] + Om(b, c) * theta[a] + Om(c, a) * theta[b]);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

NormalityResidual check_normality(const ManifoldModel& model, const Vector& point) {
  require_interior(model, point);
  const int d = model.dim();
  const int s = model.s;
  const Matrix G = model.metric(point);
  const Matrix F = model.f_tensor(point);
  const Matrix Xi = model.xi_matrix(point);
  const Matrix Eta = model.eta_matrix(point);

  std::vector<Matrix> dF(d), dEta(d);
  auto eta_fn = [&model](const Vector& x) -> Matrix { return model.eta_matrix(x); };
  for (int l = 0; l < d; ++l) {
    dF[l] = fd::partial(model.f_tensor, point, l);
    dEta[l] = fd::partial(eta_fn, point, l);
  }

  const Christoffel gamma = christoffel(model, point);
  const auto nabla_xi = covariant_derivative_of_xi(model, point, gamma);
  // eta_nabla_xi[i](j, a) = η_j(∇_{∂a} ξ_i)
  std::vector<Matrix> eta_nabla_xi(s);
  for (int i = 0; i < s; ++i) eta_nabla_xi[i] = Eta * nabla_xi[i];

  NormalityResidual out;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      // [f,f](∂a,∂b) = [f∂a, f∂b] − f[f∂a, ∂b] − f[∂a, f∂b]
      Vector nijenhuis = Vector::Zero(d);
      for (int l = 0; l < d; ++l) {
        nijenhuis += F(l, a) * dF[l].col(b) - F(l, b) * dF[l].col(a);
      }
      nijenhuis += F * dF[b].col(a) - F * dF[a].col(b);

      Vector s_defect = nijenhuis;
      Vector rhs = Vector::Zero(d);
      for (int i = 0; i < s; ++i) {
        const double d_eta = 0.5 * (dEta[a](i, b) - dEta[b](i, a));
        s_defect += 2.0 * d_eta * Xi.col(i);
        double coeff = 0.0;
        for (int j = 0; j < s; ++j) {
          coeff += eta_nabla_xi[i](j, a) * Eta(j, b) - eta_nabla_xi[i](j, b) * Eta(j, a);
        }
        rhs += coeff * Xi.col(i);
      }
      out.s_structure = std::max(out.s_structure, norm(G, s_defect));
      out.identity = std::max(out.identity, norm(G, s_defect - rhs));
    }
  }
  return out;
}

}  // namespace trajlab
