#include "trajlab/errors.hpp"
#include "trajlab/frenet.hpp"
#include "trajlab/geometry.hpp"
#include "trajlab/model_catalog.hpp"
#include "trajlab/trajectory.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace trajlab;

namespace {

struct Run {
  ManifoldModel model;
  Trajectory curve;
  FrenetApparatus app;
};

Run legendre_run(ManifoldModel m, double q, double t_end, unsigned seed = 1) {
  std::mt19937_64 rng(seed);
  const Vector x0 = m.domain.center();
  const Vector v0 = random_legendre_direction(m, x0, rng).components;
  Trajectory c = integrate_trajectory(m, x0, v0, q, t_end);
  FrenetApparatus app = compute_frenet(m, c, default_rank_tol(q));
  return {std::move(m), std::move(c), std::move(app)};
}

double window_max_error(const FrenetApparatus& app, int j, double target) {
  const auto k = app.kappa(j);
  double worst = 0.0;
  for (int i = app.window_begin(); i < app.window_end(); ++i) {
    worst = std::max(worst, std::abs(k[i] - target));
  }
  return worst;
}

FrenetApparatus constant_apparatus(int order, std::vector<double> kappas, int samples = 50) {
  FrenetApparatus app;
  app.order = order;
  app.h = 0.01;
  app.rank_tol = 1e-4;
  for (int i = 0; i < samples; ++i) app.t.push_back(i * 0.01);
  for (double k : kappas) app.curvatures.push_back(std::vector<double>(samples, k));
  app.frames.assign(order, std::vector<Vector>(samples, Vector::Zero(3)));
  return app;
}

}  // namespace

TEST_SUITE("frenet") {
  TEST_CASE("straight line is a geodesic") {
    const ManifoldModel m = c_space(1, 1);
    const Trajectory c = integrate_trajectory(m, Vector::Zero(3), Vector::Unit(3, 0), 0.0, 1.0);
    const FrenetApparatus app = compute_frenet(m, c, default_rank_tol(0.0));
    CHECK(app.order == 1);
    CHECK(*std::max_element(app.residual.begin(), app.residual.end()) < 1e-8);
    CHECK(classify_curve(app, 1e-3).kind == CurveKind::kGeodesic);
    CHECK(classify_curve(app, 1e-3).label == "geodesic");
    CHECK(app.kappa(1) == std::vector<double>(c.size(), 0.0));
    CHECK(app.frame(2, 0).norm() == 0.0);
  }

  TEST_CASE("circle of radius one half") {
    const ManifoldModel m = c_space(1, 1);
    const Trajectory c = integrate_trajectory(m, Vector::Zero(3), Vector::Unit(3, 0), 2.0, 4.0);
    const FrenetApparatus app = compute_frenet(m, c, default_rank_tol(2.0));
    CHECK(app.order == 2);
    CHECK(window_max_error(app, 1, 2.0) < 1e-4);
    CHECK(classify_curve(app, 1e-3).kind == CurveKind::kCircle);
    CHECK(*std::max_element(app.residual.begin() + 2, app.residual.end() - 2) < 1e-4);
  }

  TEST_CASE("Legendre helix on the S-space") {
    const Run r = legendre_run(standard_s_space(1, 2), 2.0, 3.0);
    CHECK(r.app.order == 3);
    CHECK(window_max_error(r.app, 1, 2.0) < 1e-3);
    CHECK(window_max_error(r.app, 2, std::sqrt(2.0)) < 1e-3);
    const CurveClassification cls = classify_curve(r.app, 1e-3);
    CHECK(cls.kind == CurveKind::kHelix);
    CHECK(cls.label == "helix of order 3");

    for (int i = r.app.window_begin(); i < r.app.window_end(); i += 97) {
      const Matrix G = r.model.metric(r.curve.position[i]);
      // Orthonormal frame.
      for (int a = 1; a <= 3; ++a) {
        for (int b = 1; b <= 3; ++b) {
          const double expected = a == b ? 1.0 : 0.0;
          CHECK(std::abs(inner(G, r.app.frame(a, i), r.app.frame(b, i)) - expected) < 1e-6);
        }
      }
      // E₂ is the direction of ∇_T T, and ∇_T T = −q fT.
      const Vector acc = covariant_derivative_along(r.model, r.curve, r.curve.velocity, i).components;
      CHECK(inner(G, acc, r.app.frame(2, i)) == doctest::Approx(r.app.kappa(1)[i]).epsilon(1e-6));
      CHECK(norm(G, acc + 2.0 * r.model.f_tensor(r.curve.position[i]) * r.curve.velocity[i]) <
            1e-4);
    }

    // ∇_T(fT) = Σα ξ + κ₁ fE₂ along the Legendre curve.
    std::vector<Vector> fT;
    std::vector<Vector> fE2;
    for (int i = 0; i < r.curve.size(); ++i) {
      const Matrix F = r.model.f_tensor(r.curve.position[i]);
      fT.push_back(F * r.curve.velocity[i]);
      fE2.push_back(F * r.app.frame(2, i));
    }
    for (int i = r.app.window_begin(); i < r.app.window_end(); i += 131) {
      const Vector lhs = covariant_derivative_along(r.model, r.curve, fT, i).components;
      const Vector rhs = r.model.xi_sum(r.curve.position[i]) + r.app.kappa(1)[i] * fE2[i];
      CHECK(norm(r.model.metric(r.curve.position[i]), lhs - rhs) < 1e-3);
    }
  }

  TEST_CASE("frenet residual detects wrong curvatures") {
    Run r = legendre_run(standard_s_space(1, 1), 1.0, 1.0);
    const std::vector<double> good = frenet_residual(r.model, r.app, r.curve);
    for (int i = r.app.window_begin(); i < r.app.window_end(); ++i) CHECK(good[i] < 1e-4);
    const int mid = r.app.size() / 2;
    const double k1 = r.app.kappa(1)[mid];
    for (auto& k : r.app.curvatures[0]) k *= 1.5;
    const std::vector<double> bad = frenet_residual(r.model, r.app, r.curve);
    CHECK(bad[mid] >= 0.5 * k1 - 1e-6);
  }

  TEST_CASE("too few samples") {
    const ManifoldModel m = c_space(1, 1);
    Trajectory c = integrate_trajectory(m, Vector::Zero(3), Vector::Unit(3, 0), 0.0, 0.1, 0.01);
    c.t.resize(8);
    c.position.resize(8);
    c.velocity.resize(8);
    try {
      (void)compute_frenet(m, c, 1e-4);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInsufficientSamples);
    }
  }

  TEST_CASE("curvature crossing the rank tolerance") {
    // Planar curve in flat space with κ₁ = max(0, t − 1)³.
    const ManifoldModel m = c_space(1, 1);
    Trajectory c;
    c.h = 1e-3;
    Vector x = Vector::Zero(3);
    for (int i = 0; i <= 2000; ++i) {
      const double t = i * c.h;
      const double theta = t > 1.0 ? std::pow(t - 1.0, 4) / 4.0 : 0.0;
      Vector v(3);
      v << std::cos(theta), std::sin(theta), 0.0;
      c.t.push_back(t);
      c.position.push_back(x);
      c.velocity.push_back(v);
      x += c.h * v;
    }
    try {
      (void)compute_frenet(m, c, 1e-4);
      FAIL("expected a variable order");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kVariableOrder);
    }
  }

  TEST_CASE("classification labels") {
    CHECK(classify_curve(constant_apparatus(1, {}), 1e-3).label == "geodesic");
    CHECK(classify_curve(constant_apparatus(2, {2.0}), 1e-3).kind == CurveKind::kCircle);
    CHECK(classify_curve(constant_apparatus(4, {1.0, 0.5, 0.2}), 1e-3).label ==
          "helix of order 4");
    FrenetApparatus varying = constant_apparatus(3, {1.0, 2.0});
    for (int i = 0; i < varying.size(); ++i) varying.curvatures[1][i] = 2.0 + 0.1 * i;
    const CurveClassification cls = classify_curve(varying, 1e-3);
    CHECK(cls.kind == CurveKind::kGeneric);
    CHECK(cls.label == "generic Frenet curve of order 3");
    CHECK(default_rank_tol(0.5) == 1e-4);
    CHECK(default_rank_tol(-3.0) == doctest::Approx(3e-4));
  }
}
