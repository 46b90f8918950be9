#include "trajlab/errors.hpp"
#include "trajlab/finite_difference.hpp"
#include "trajlab/geometry.hpp"
#include "trajlab/model_catalog.hpp"
#include "trajlab/trajectory.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace trajlab;

namespace {

ErrorCode integration_code(const ManifoldModel& m, const Vector& x0, const Vector& v0, double q,
                           double t_end, double h) {
  try {
    (void)integrate_trajectory(m, x0, v0, q, t_end, h);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

Vector legendre_start(const ManifoldModel& m, unsigned seed) {
  std::mt19937_64 rng(seed);
  return random_legendre_direction(m, m.domain.center(), rng).components;
}

}  // namespace

TEST_SUITE("trajectory") {
  TEST_CASE("Lorentz acceleration") {
    // f ≡ 0 along ξ: only the geodesic term remains, and it vanishes on flat space.
    const ManifoldModel flat = c_space(1, 1);
    const Vector x = Vector::Zero(3);
    CHECK(lorentz_acceleration(flat, x, Vector::Unit(3, 2), 7.0).norm() == 0.0);
    // On flat space with v = ∂x: a = −q f∂x = q ∂y.
    const Vector a = lorentz_acceleration(flat, x, Vector::Unit(3, 0), 3.0);
    CHECK(a[1] == doctest::Approx(3.0));
    // S-space, unit Legendre v: the Lorentz term has g-norm |q|.
    const ManifoldModel m = standard_s_space(1, 2);
    const Vector v = legendre_start(m, 4);
    const Vector p = m.domain.center();
    const Vector lorentz = lorentz_acceleration(m, p, v, 2.0) - lorentz_acceleration(m, p, v, 0.0);
    CHECK(norm(m.metric(p), lorentz) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("straight lines in c_space are exact") {
    const ManifoldModel m = c_space(1, 1);
    const Vector x0 = Vector::Zero(3);
    const Vector v0 = Vector(Vector::Ones(3)).normalized();
    const Trajectory c = integrate_trajectory(m, x0, v0, 0.0, 1.0, 1e-3);
    CHECK(c.size() == 1001);
    CHECK(c.t.back() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((c.position.back() - (x0 + v0)).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("sample count rounds up a partial final step") {
    const ManifoldModel m = c_space(1, 1);
    const Trajectory c = integrate_trajectory(m, Vector::Zero(3), Vector::Unit(3, 0), 0.0, 0.105,
                                              0.01);
    CHECK(c.size() == 12);
  }

  TEST_CASE("preconditions") {
    const ManifoldModel m = c_space(1, 1);
    const Vector x0 = Vector::Zero(3);
    const Vector v0 = Vector::Unit(3, 0);
    CHECK(integration_code(m, x0, 2.0 * v0, 0.0, 1.0, 1e-3) == ErrorCode::kInvalidArgument);
    CHECK(integration_code(m, x0, v0, 0.0, 1.0, 0.0) == ErrorCode::kInvalidArgument);
    CHECK(integration_code(m, x0, v0, 0.0, 1e-3, 1e-3) == ErrorCode::kInvalidArgument);
    CHECK(integration_code(m, x0, v0, NAN, 1.0, 1e-3) == ErrorCode::kInvalidArgument);
    CHECK(integration_code(m, Vector::Constant(3, 1e3), v0, 0.0, 1.0, 1e-3) ==
          ErrorCode::kDomain);
  }

  TEST_CASE("leaving the chart returns the partial curve") {
    const ManifoldModel m = c_space(1, 1, 1.0);
    try {
      (void)integrate_trajectory(m, Vector::Zero(3), Vector::Unit(3, 0), 0.0, 2.0, 0.01);
      FAIL("expected the curve to leave the domain");
    } catch (const IntegrationError& e) {
      CHECK(e.code() == ErrorCode::kLeftDomain);
      CHECK(std::string(e.what()).find("t=") != std::string::npos);
      CHECK(e.partial().size() >= 99);
      CHECK(e.partial().size() <= 101);
      CHECK(e.partial().position.back()[0] <= 1.0);
    }
  }

  TEST_CASE("blow-up is reported") {
    const ManifoldModel m = c_space(1, 1, 1e308);
    try {
      (void)integrate_trajectory(m, Vector::Zero(3), Vector::Unit(3, 0), 1e300, 1.0, 1e-3);
      FAIL("expected a blow-up");
    } catch (const IntegrationError& e) {
      CHECK(e.code() == ErrorCode::kBlowUp);
    }
  }

  TEST_CASE("Legendre projection") {
    const ManifoldModel m = standard_s_space(2, 2);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      Vector x(6);
      for (int k = 0; k < 6; ++k) x[k] = std::uniform_real_distribution<double>(-3, 3)(rng);
      const TangentVector t = random_legendre_direction(m, x, rng);
      const Matrix G = m.metric(x);
      CHECK(norm(G, t.components) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK((m.eta_matrix(x) * t.components).cwiseAbs().maxCoeff() < 1e-12);
      const TangentVector again = legendre_project(m, x, t.components);
      CHECK((again.components - t.components).cwiseAbs().maxCoeff() < 1e-14);
    }
    try {
      (void)legendre_project(m, Vector::Zero(6), m.xi_sum(Vector::Zero(6)));
      FAIL("expected no Legendre direction");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoLegendreDirection);
    }
  }

  TEST_CASE("diagnostics and conservation") {
    const ManifoldModel m = standard_s_space(1, 2);
    const Trajectory c =
        integrate_trajectory(m, m.domain.center(), legendre_start(m, 1), 1.0, kDefaultEndTime);
    const DiagnosticsTable d = diagnostics(m, c);
    CHECK(d.speed_drift < 1e-8);
    CHECK(d.legendre_defect < 1e-6);
    for (std::size_t i = 0; i < d.t.size(); i += 500) {
      for (int a = 0; a < 2; ++a) {
        CHECK(std::abs(d.theta[i][a] - std::numbers::pi / 2) < 1e-6);
      }
    }
    // Motion along ξ in c_space: contact angle 0 throughout.
    const ManifoldModel cs = c_space(1, 1);
    const Trajectory z = integrate_trajectory(cs, Vector::Zero(3), Vector::Unit(3, 2), 2.0, 1.0);
    const DiagnosticsTable dz = diagnostics(cs, z);
    for (const auto& th : dz.theta) CHECK(th[0] < 1e-7);
    CHECK(dz.legendre_defect == doctest::Approx(1.0));
  }

  TEST_CASE("Legendre condition persists when beta vanishes") {
    const ManifoldModel cs = c_space(2, 1);
    const Trajectory c =
        integrate_trajectory(cs, cs.domain.center(), legendre_start(cs, 3), -1.5, kDefaultEndTime);
    CHECK(diagnostics(cs, c).legendre_defect < 1e-6);
  }

  TEST_CASE("beta obstructs the Legendre condition") {
    // d/dt η(T) = β(1 − η(T)²) on the warped product; at t = 0 with η(T) = 0
    // it equals β = 1 for σ = z.
    const ManifoldModel m = kenmotsu_warped(1, "z");
    const Trajectory c = integrate_trajectory(m, m.domain.center(), legendre_start(m, 2), 1.0, 0.1);
    const DiagnosticsTable d = diagnostics(m, c);
    std::vector<double> eta;
    for (const auto& e : d.eta) eta.push_back(e[0]);
    const std::vector<double> rate = fd::differentiate(eta, c.h);
    CHECK(rate.front() == doctest::Approx(1.0).epsilon(0.05));
    CHECK(d.legendre_defect > 0.05);
  }

  TEST_CASE("reversing q mirrors the curve in c_space") {
    // f anticommutes with the reflection y ↦ −y, so q ↦ −q maps the curve
    // through (x, y, z) ↦ (x, −y, z) when v0 has no y component.
    const ManifoldModel m = c_space(1, 1);
    const Vector v0 = Vector(Vector::Unit(3, 0) + 0.5 * Vector::Unit(3, 2)).normalized();
    const Trajectory a = integrate_trajectory(m, Vector::Zero(3), v0, 1.3, 2.0);
    const Trajectory b = integrate_trajectory(m, Vector::Zero(3), v0, -1.3, 2.0);
    Vector flip(3);
    flip << 1, -1, 1;
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i) {
      worst = std::max(worst, (a.position[i] - flip.asDiagonal() * b.position[i]).norm());
    }
    CHECK(worst < 1e-8);
  }

  TEST_CASE("RK4 is fourth order") {
    const ManifoldModel m = standard_s_space(1, 2);
    const Vector x0 = m.domain.center();
    const Vector v0 = legendre_start(m, 9);
    const double h = 1.0 / 16.0;
    auto run = [&](double step) { return integrate_trajectory(m, x0, v0, 1.0, 4.0, step); };
    const Trajectory ref = run(h / 8);
    const Trajectory coarse = run(h);
    const Trajectory fine = run(h / 2);
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < coarse.size(); ++i) {
      e1 = std::max(e1, (coarse.position[i] - ref.position[8 * i]).norm());
    }
    for (int i = 0; i < fine.size(); ++i) {
      e2 = std::max(e2, (fine.position[i] - ref.position[4 * i]).norm());
    }
    const double ratio = e1 / e2;
    INFO("ratio ", ratio);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }
}
