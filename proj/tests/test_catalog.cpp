#include "trajlab/errors.hpp"
#include "trajlab/geometry.hpp"
#include "trajlab/model_catalog.hpp"
#include "trajlab/report_io.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace trajlab;

namespace {

std::string data_file(const std::string& name) {
  return read_text_file(std::string(TRAJLAB_TEST_DATA) + "/" + name);
}

Vector random_point(const Box& box, double cap, std::mt19937_64& rng) {
  Vector x(box.dim());
  for (int k = 0; k < box.dim(); ++k) {
    const double lo = std::max(box.lo[k], -cap), hi = std::min(box.hi[k], cap);
    x[k] = std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  return x;
}

double field_gap(const ManifoldModel& a, const ManifoldModel& b, const Vector& x) {
  double gap = (a.metric(x) - b.metric(x)).cwiseAbs().maxCoeff();
  gap = std::max(gap, (a.f_tensor(x) - b.f_tensor(x)).cwiseAbs().maxCoeff());
  gap = std::max(gap, (a.xi_matrix(x) - b.xi_matrix(x)).cwiseAbs().maxCoeff());
  gap = std::max(gap, (a.eta_matrix(x) - b.eta_matrix(x)).cwiseAbs().maxCoeff());
  if (a.has_structure_functions() && b.has_structure_functions()) {
    for (int i = 0; i < a.s; ++i) {
      gap = std::max(gap, std::abs((*a.alpha)[i](x) - (*b.alpha)[i](x)));
      gap = std::max(gap, std::abs((*a.beta)[i](x) - (*b.beta)[i](x)));
    }
  }
  return gap;
}

ErrorCode error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("standard S-space") {
    const ManifoldModel m = standard_s_space(1, 2);
    CHECK(m.dim() == 4);
    CHECK(m.name == "standard_s_space(n=1, s=2)");
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
      const Vector x = random_point(m.domain, 3.0, rng);
      CHECK((*m.alpha)[0](x) == 1.0);
      CHECK((*m.alpha)[1](x) == 1.0);
      CHECK((*m.beta)[1](x) == 0.0);
      // ξ_a = 2∂z_a, η_a(ξ_b) = δ_ab
      CHECK((m.eta_matrix(x) * m.xi_matrix(x) - Matrix::Identity(2, 2)).norm() < 1e-15);
      CHECK(m.xi[0](x)[2] == 2.0);
    }
    CHECK(error_code([] { (void)standard_s_space(0, 1); }) == ErrorCode::kParameter);
    CHECK(error_code([] { (void)c_space(1, 0); }) == ErrorCode::kParameter);
  }

  TEST_CASE("c_space is flat with vanishing structure functions") {
    const ManifoldModel m = c_space(2, 3);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 10; ++i) {
      const Vector x = random_point(m.domain, 100.0, rng);
      for (const auto& g : christoffel(m, x).gamma) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
      const StructureFunctions sf = extract_alpha_beta(m, x);
      CHECK(sf.residual < 1e-10);
      CHECK(sf.alpha.cwiseAbs().maxCoeff() < 1e-10);
      CHECK(check_d_omega(m, x) < 1e-12);
    }
  }

  TEST_CASE("kenmotsu warped products") {
    std::mt19937_64 rng(3);
    const ManifoldModel lin = kenmotsu_warped(1, "z");
    const ManifoldModel quad = kenmotsu_warped(1, "t^2/2");
    const ManifoldModel flat = kenmotsu_warped(1, "0");
    const ManifoldModel cs = c_space(1, 1);
    CHECK(lin.name == "kenmotsu_warped(n=1, sigma=x3)");
    for (int i = 0; i < 20; ++i) {
      const Vector x = random_point(lin.domain, 10.0, rng);
      const StructureFunctions a = extract_alpha_beta(lin, x);
      CHECK(std::abs(a.alpha[0]) < 1e-6);
      CHECK(std::abs(a.beta[0] - 1.0) < 1e-6);
      const StructureFunctions b = extract_alpha_beta(quad, x);
      CHECK(std::abs(b.beta[0] - x[2]) < 1e-6);
      CHECK((*quad.beta)[0](x) == doctest::Approx(x[2]).epsilon(1e-15));
      CHECK(field_gap(flat, cs, x) < 1e-15);
    }
    CHECK(error_code([] { (void)kenmotsu_warped(1, "x1 + z"); }) == ErrorCode::kParameter);
    CHECK(error_code([] { (void)kenmotsu_warped(1, "z +"); }) == ErrorCode::kSyntax);
    CHECK(error_code([] { (void)kenmotsu_warped(1, "z", {10.0, 1.0, -1.0}); }) ==
          ErrorCode::kParameter);
  }

  TEST_CASE("catalog models pass every identity") {
    std::mt19937_64 rng(4);
    for (const ManifoldModel& m : {standard_s_space(1, 1), standard_s_space(2, 2), c_space(1, 2),
                                   kenmotsu_warped(2, "z"), kenmotsu_warped(1, "sin(z)")}) {
      INFO(m.name);
      std::vector<Vector> pts;
      for (int i = 0; i < 100; ++i) pts.push_back(random_point(m.domain, 3.0, rng));
      CHECK(check_framed_structure(m, pts, 1e-8).all_pass());
      for (int i = 0; i < 10; ++i) {
        CHECK(check_xi_derivative(m, pts[i]) < 1e-6);
        CHECK(check_d_omega(m, pts[i]) < 1e-6);
        CHECK(check_normality(m, pts[i]).identity < 1e-6);
      }
    }
  }

  TEST_CASE("model file equals the built-in c_space") {
    const ManifoldModel file = parse_model(data_file("c_space_1_1.json"));
    const ManifoldModel built = c_space(1, 1);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      CHECK(field_gap(file, built, random_point(built.domain, 100.0, rng)) < 1e-12);
    }
  }

  TEST_CASE("serialization round trip") {
    std::mt19937_64 rng(6);
    for (const ModelSpec& spec : {standard_s_space_spec(2, 3), c_space_spec(1, 2),
                                  kenmotsu_warped_spec(1, "z^2/2 + sin(z)")}) {
      const std::string text = serialize_model(spec);
      const ModelSpec back = parse_model_spec(text);
      CHECK(serialize_model(back) == text);
      const ManifoldModel a = compile_model(spec);
      const ManifoldModel b = compile_model(back);
      CHECK(b.name == a.name);
      CHECK(back.sample_points.size() == spec.sample_points.size());
      for (int i = 0; i < 20; ++i) CHECK(field_gap(a, b, random_point(a.domain, 5.0, rng)) < 1e-12);
    }
  }

  TEST_CASE("mis-scaled eta fails certification") {
    try {
      (void)parse_model(data_file("misscaled_eta.json"));
      FAIL("expected certification failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCertification);
      CHECK(std::string(e.what()).find("eta_xi_duality") != std::string::npos);
    }
  }

  TEST_CASE("expression errors name the component") {
    try {
      (void)parse_model(data_file("bad_expression.json"));
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.column() == 4);
      CHECK(std::string(e.what()).rfind("g[0][0]: ", 0) == 0);
    }
  }

  TEST_CASE("malformed and incomplete files") {
    try {
      (void)parse_model(data_file("malformed.json"));
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }
    try {
      (void)parse_model(data_file("missing_metric.json"));
      FAIL("expected a missing component");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kMissingComponent);
      CHECK(std::string(e.what()).find("'g'") != std::string::npos);
    }
    ModelSpec spec = c_space_spec(1, 1);
    spec.xi.pop_back();
    CHECK(error_code([&] { (void)compile_model(spec); }) == ErrorCode::kMissingComponent);
    spec = c_space_spec(1, 1);
    spec.g[0][0] = "x4";
    CHECK(error_code([&] { (void)compile_model(spec); }) == ErrorCode::kParameter);
    spec = c_space_spec(1, 1);
    spec.beta.reset();
    CHECK(error_code([&] { (void)compile_model(spec); }) == ErrorCode::kMissingComponent);
  }

  TEST_CASE("warped product with two characteristic fields") {
    const ManifoldModel m = parse_model(data_file("warped_s2.json"));
    CHECK(m.s == 2);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10; ++i) {
      const Vector x = random_point(m.domain, 2.0, rng);
      const StructureFunctions sf = extract_alpha_beta(m, x);
      CHECK(sf.alpha.cwiseAbs().maxCoeff() < 1e-6);
      CHECK(std::abs(sf.beta[0] - x[2]) < 1e-6);
      CHECK(std::abs(sf.beta[1] - x[3]) < 1e-6);
      CHECK(check_xi_derivative(m, x) < 1e-6);
    }
  }

  TEST_CASE("model sources") {
    CHECK(resolve_model_spec("sspace:1:2").name == "standard_s_space(n=1, s=2)");
    CHECK(resolve_model_spec("cspace:2:1").s == 1);
    CHECK(resolve_model_spec("kenmotsu:1:z^2").beta.has_value());
    CHECK(error_code([] { (void)resolve_model_spec("sspace:x:2"); }) ==
          ErrorCode::kInvalidArgument);
    CHECK(error_code([] { (void)resolve_model_spec("/nonexistent/model.json"); }) ==
          ErrorCode::kIo);
    const ModelSpec spec = resolve_model_spec(std::string(TRAJLAB_TEST_DATA) + "/warped_s2.json");
    CHECK(spec.sample_points.size() == 11);
  }
}
