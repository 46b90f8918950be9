#include "trajlab/trajectory.hpp"

#include "trajlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace trajlab {

namespace {

std::string format_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

long sample_steps(double t_end, double h) {
  const double ratio = t_end / h;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(ratio));
}

}  // namespace

Vector lorentz_acceleration(const ManifoldModel& model, const Vector& x, const Vector& v,
                            double q) {
  const Christoffel gamma = christoffel(model, x);
  Vector a = -gamma.contract(v, v);
  if (q != 0.0) a -= q * (model.f_tensor(x) * v);
  return a;
}

Trajectory integrate_trajectory(const ManifoldModel& model, const Vector& x0, const Vector& v0,
                                double q, double t_end, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::kInvalidArgument, "step h must be positive");
  }
  if (!std::isfinite(q)) throw Error(ErrorCode::kInvalidArgument, "q must be finite");
  if (!(t_end >= 10.0 * h)) throw Error(ErrorCode::kInvalidArgument, "t_end must be at least 10 h");
  if (x0.size() != model.dim() || v0.size() != model.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "initial data has the wrong dimension");
  }
  require_in_domain(model, x0);
  const double speed = norm(model.metric(x0), v0);
  if (std::abs(speed - 1.0) > 1e-10) {
    throw Error(ErrorCode::kInvalidArgument,
                "initial velocity must have unit g-norm (got " + format_time(speed) + ")");
  }

  const long steps = sample_steps(t_end, h);
  Trajectory out;
  out.q = q;
  out.h = h;
  out.model_name = model.name;
  out.t.reserve(steps + 1);
  out.position.reserve(steps + 1);
  out.velocity.reserve(steps + 1);
  out.t.push_back(0.0);
  out.position.push_back(x0);
  out.velocity.push_back(v0);

  Vector x = x0;
  Vector v = v0;
  double t = 0.0;
  auto fail = [&](ErrorCode code) {
    const char* what = code == ErrorCode::kBlowUp ? "blow-up at t=" : "left chart domain at t=";
    return IntegrationError(code, what + format_time(t), out);
  };
  // Non-finite stage data or a failed evaluation inside the chart is a
  // blow-up; a stage point outside the chart means the curve left the domain.
  auto accel = [&](const Vector& p, const Vector& w) -> Vector {
    if (!p.allFinite() || !w.allFinite()) throw fail(ErrorCode::kBlowUp);
    try {
      Vector a = lorentz_acceleration(model, p, w, q);
      if (!a.allFinite()) throw fail(ErrorCode::kBlowUp);
      return a;
    } catch (const IntegrationError&) {
      throw;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDomain) throw;
      throw fail(model.domain.contains(p) ? ErrorCode::kBlowUp : ErrorCode::kLeftDomain);
    }
  };
  for (long i = 1; i <= steps; ++i) {
    t = static_cast<double>(i) * h;
    const Vector k1x = v;
    const Vector k1v = accel(x, v);
    const Vector k2x = v + 0.5 * h * k1v;
    const Vector k2v = accel(x + 0.5 * h * k1x, k2x);
    const Vector k3x = v + 0.5 * h * k2v;
    const Vector k3v = accel(x + 0.5 * h * k2x, k3x);
    const Vector k4x = v + h * k3v;
    const Vector k4v = accel(x + h * k3x, k4x);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!x.allFinite() || !v.allFinite()) throw fail(ErrorCode::kBlowUp);
    if (!model.domain.contains(x)) throw fail(ErrorCode::kLeftDomain);
    out.t.push_back(t);
    out.position.push_back(x);
    out.velocity.push_back(v);
  }
  return out;
}

TangentVector legendre_project(const ManifoldModel& model, const Vector& x, const Vector& v) {
  require_in_domain(model, x);
  Vector u = v;
  for (int a = 0; a < model.s; ++a) u -= model.eta[a](x).dot(v) * model.xi[a](x);
  const double len = norm(model.metric(x), u);
  if (len < 1e-10) {
    throw Error(ErrorCode::kNoLegendreDirection, "no Legendre direction: v lies in span(xi)");
  }
  return {x, u / len};
}

TangentVector random_legendre_direction(const ManifoldModel& model, const Vector& x,
                                        std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vector v(model.dim());
    for (int k = 0; k < model.dim(); ++k) v[k] = normal(rng);
    const double len = v.norm();
    if (len == 0.0) continue;
    try {
      return legendre_project(model, x, v / len);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoLegendreDirection) throw;
    }
  }
  throw Error(ErrorCode::kNoLegendreDirection, "no Legendre direction found");
}

Vector unit_vector(const ManifoldModel& model, const Vector& x, const Vector& v) {
  const double len = norm(model.metric(x), v);
  if (!(len > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero vector has no direction");
  return v / len;
}

DiagnosticsTable diagnostics(const ManifoldModel& model, const Trajectory& curve) {
  DiagnosticsTable d;
  d.t = curve.t;
  for (int i = 0; i < curve.size(); ++i) {
    const Vector& x = curve.position[i];
    const Vector& v = curve.velocity[i];
    const Matrix G = model.metric(x);
    const double speed = norm(G, v);
    Vector eta(model.s);
    Vector theta(model.s);
    for (int a = 0; a < model.s; ++a) {
      eta[a] = model.eta[a](x).dot(v);
      const double c = inner(G, v, model.xi[a](x));
      theta[a] = std::acos(std::clamp(c, -1.0, 1.0));
      d.legendre_defect = std::max(d.legendre_defect, std::abs(eta[a]));
    }
    d.speed_drift = std::max(d.speed_drift, std::abs(speed - 1.0));
    d.speed.push_back(speed);
    d.eta.push_back(std::move(eta));
    d.theta.push_back(std::move(theta));
  }
  return d;
}

}  // namespace trajlab
