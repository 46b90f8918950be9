#pragma once

#include "trajlab/geometry.hpp"
#include "trajlab/manifold.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trajlab {

// Textual model description; every component is an expression in x1..x{dim}.
struct ModelSpec {
  std::string name;
  int n = 0;
  int s = 0;
  Box domain;
  std::vector<std::vector<std::string>> g;    // dim x dim
  std::vector<std::vector<std::string>> f;    // dim x dim, f[i][j] = f^i_j
  std::vector<std::vector<std::string>> xi;   // s x dim
  std::vector<std::vector<std::string>> eta;  // s x dim
  std::optional<std::vector<std::string>> alpha;
  std::optional<std::vector<std::string>> beta;
  std::vector<Vector> sample_points;

  int dim() const { return 2 * n + s; }
};

// Compiles the expressions without certification. Throws SyntaxError (message
// names the component) or kMissingComponent / kParameter on shape problems.
ManifoldModel compile_model(const ModelSpec& spec);

// Parses the JSON model document. Throws kSyntax with line/column for
// malformed JSON and kMissingComponent for absent fields.
ModelSpec parse_model_spec(std::string_view json_text);

// Parse, compile and certify (check_framed_structure at the declared sample
// points). Certification failures throw kCertification with a residual table.
ManifoldModel parse_model(std::string_view json_text, double certification_tol = 1e-8);

// Certification gate shared by parse_model and the command-line tools.
void certify_model(const ManifoldModel& model, std::span<const Vector> points, double tol);

// Domain centre followed by `count` seeded uniform points.
std::vector<Vector> default_sample_points(const Box& domain, int count, unsigned seed = 7);

// Deterministic JSON document accepted by parse_model_spec.
std::string serialize_model(const ModelSpec& spec);

// Catalog. Coordinates are ordered (x_1..x_n, y_1..y_n, z_1..z_s).

// η_a = ½(dz_a − Σ y_i dx_i), ξ_a = 2∂z_a, g = Σ η_a⊗η_a + ¼Σ(dx_i² + dy_i²),
// f∂x_i = −∂y_i, f∂y_i = ∂x_i + y_i Σ_a ∂z_a. Stored α_a = 1, β_a = 0.
ModelSpec standard_s_space_spec(int n, int s, double half_width = 100.0);
ManifoldModel standard_s_space(int n, int s, double half_width = 100.0);

// Flat R^{2n} x R^s with the block complex structure; α = β = 0.
ModelSpec c_space_spec(int n, int s, double half_width = 100.0);
ManifoldModel c_space(int n, int s, double half_width = 100.0);

// g = dz² + e^{2σ(z)} Σ(dx_i² + dy_i²), ξ = ∂z; α = 0, β = σ'(z). The warping
// exponent may name the last coordinate as z, t or x{2n+1}.
struct WarpedDomain {
  double fiber_half_width = 10.0;
  double z_lo = -3.0;
  double z_hi = 3.0;
};
ModelSpec kenmotsu_warped_spec(int n, std::string_view sigma, WarpedDomain domain = {});
ManifoldModel kenmotsu_warped(int n, std::string_view sigma, WarpedDomain domain = {});

// Resolves "sspace:N:S", "cspace:N:S", "kenmotsu:N:SIGMA" or a path to a
// model file.
ModelSpec resolve_model_spec(const std::string& source);

}  // namespace trajlab
