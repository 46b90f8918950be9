#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace trajlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarField = std::function<double(const Vector&)>;
using VectorField = std::function<Vector(const Vector&)>;
using MatrixField = std::function<Matrix(const Vector&)>;

// Axis-aligned coordinate box, closed on both ends.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int dim, double half_width);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vector& x) const;
  // True when every coordinate stays at least `margin[k]` away from the faces.
  bool contains_with_margin(const Vector& x, const Vector& margin) const;
  Vector center() const;
};

struct ModelSpec;

// Coordinate-chart description of a framed metric f-manifold of dimension
// 2n+s. Matrices act on coordinate component columns: (fX)^i = f^i_j X^j,
// and eta[i] returns the covector components (eta_i)_k.
struct ManifoldModel {
  std::string name;
  int n = 0;
  int s = 0;
  MatrixField metric;
  MatrixField f_tensor;
  std::vector<VectorField> xi;
  std::vector<VectorField> eta;
  // Structure functions alpha_i, beta_i when they are known in closed form.
  std::optional<std::vector<ScalarField>> alpha;
  std::optional<std::vector<ScalarField>> beta;
  Box domain;
  // Textual source, present for models compiled from a ModelSpec.
  std::shared_ptr<const ModelSpec> source;

  int dim() const { return 2 * n + s; }
  bool has_structure_functions() const { return alpha.has_value() && beta.has_value(); }

  // dim x s matrix whose columns are xi_1..xi_s at x.
  Matrix xi_matrix(const Vector& x) const;
  // s x dim matrix whose rows are eta_1..eta_s at x.
  Matrix eta_matrix(const Vector& x) const;
  // Sum of the characteristic fields at x.
  Vector xi_sum(const Vector& x) const;
};

struct TangentVector {
  Vector base_point;
  Vector components;
};

// g(X, Y) for component vectors at a point with metric matrix G.
inline double inner(const Matrix& G, const Vector& X, const Vector& Y) {
  return X.dot(G * Y);
}

inline double norm(const Matrix& G, const Vector& X) {
  return std::sqrt(std::max(0.0, inner(G, X, X)));
}

}  // namespace trajlab
