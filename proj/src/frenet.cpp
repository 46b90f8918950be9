#include "trajlab/frenet.hpp"

#include "trajlab/errors.hpp"
#include "trajlab/finite_difference.hpp"
#include "trajlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace trajlab {

namespace {

struct SampleGeometry {
  std::vector<Matrix> metric;
  std::vector<Christoffel> gamma;
};

SampleGeometry sample_geometry(const ManifoldModel& model, const Trajectory& curve) {
  SampleGeometry out;
  out.metric.reserve(curve.size());
  out.gamma.reserve(curve.size());
  for (const Vector& x : curve.position) {
    out.metric.push_back(model.metric(x));
    out.gamma.push_back(christoffel(model, x));
  }
  return out;
}

// ∇_T E at every sample.
std::vector<Vector> derivative_along(const SampleGeometry& geo, const Trajectory& curve,
                                     const std::vector<Vector>& field) {
  std::vector<Vector> out(field.size());
  for (int i = 0; i < curve.size(); ++i) {
    const Vector rate = fd::differentiate_at(field, i, curve.h);
    out[i] = covariant_derivative(geo.gamma[i], curve.velocity[i], field[i], rate);
  }
  return out;
}

std::string crossing_times(const std::vector<double>& kappa, const std::vector<double>& t,
                           int begin, int end, double tol) {
  std::string out;
  int listed = 0;
  for (int i = begin + 1; i < end; ++i) {
    if ((kappa[i - 1] < tol) != (kappa[i] < tol)) {
      if (listed == 8) {
        out += ", ...";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%s%.6g", listed ? ", " : "", t[i]);
      out += buf;
      ++listed;
    }
  }
  return out;
}

std::vector<double> residual_from(const SampleGeometry& geo, const FrenetApparatus& app,
                                  const std::vector<std::vector<Vector>>& nabla) {
  std::vector<double> res(app.size(), 0.0);
  for (int j = 0; j < app.order; ++j) {
    for (int i = 0; i < app.size(); ++i) {
      Vector defect = nabla[j][i];
      if (j > 0) defect += app.curvatures[j - 1][i] * app.frames[j - 1][i];
      if (j + 1 < app.order) defect -= app.curvatures[j][i] * app.frames[j + 1][i];
      res[i] = std::max(res[i], norm(geo.metric[i], defect));
    }
  }
  return res;
}

}  // namespace

std::vector<double> FrenetApparatus::kappa(int j) const {
  if (j >= 1 && j < order) return curvatures[j - 1];
  return std::vector<double>(t.size(), 0.0);
}

Vector FrenetApparatus::frame(int j, int i) const {
  if (j >= 1 && j <= order) return frames[j - 1][i];
  return Vector::Zero(frames.front()[i].size());
}

double default_rank_tol(double q) { return 1e-4 * std::max(1.0, std::abs(q)); }

FrenetApparatus compute_frenet(const ManifoldModel& model, const Trajectory& curve,
                               double rank_tol) {
  if (curve.size() < 9) {
    throw Error(ErrorCode::kInsufficientSamples,
                "insufficient samples: need at least 9, have " + std::to_string(curve.size()));
  }
  if (!(rank_tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rank_tol must be positive");

  const SampleGeometry geo = sample_geometry(model, curve);
  const int count = curve.size();
  const int dim = model.dim();

  FrenetApparatus app;
  app.rank_tol = rank_tol;
  app.t = curve.t;
  app.h = curve.h;
  app.frames.push_back(curve.velocity);
  std::vector<std::vector<Vector>> nabla;

  for (int j = 1;; ++j) {
    nabla.push_back(derivative_along(geo, curve, app.frames[j - 1]));
    if (j == dim) {
      app.order = dim;
      break;
    }
    std::vector<Vector> next(count);
    std::vector<double> kappa(count);
    for (int i = 0; i < count; ++i) {
      const Matrix& G = geo.metric[i];
      Vector v = nabla[j - 1][i];
      if (j > 1) v += app.curvatures[j - 2][i] * app.frames[j - 2][i];
      for (int pass = 0; pass < 2; ++pass) {
        for (int m = 0; m < j; ++m) {
          const Vector& e = app.frames[m][i];
          v -= (inner(G, v, e) / inner(G, e, e)) * e;
        }
      }
      kappa[i] = norm(G, v);
      next[i] = kappa[i] > 0.0 ? Vector(v / kappa[i]) : v;
    }
    const auto first = kappa.begin() + app.window_begin();
    const auto last = kappa.begin() + app.window_end();
    const double sup = *std::max_element(first, last);
    const double inf = *std::min_element(first, last);
    if (sup < rank_tol) {
      app.order = j;
      break;
    }
    if (inf < rank_tol) {
      throw Error(ErrorCode::kVariableOrder,
                  "variable osculating order: kappa" + std::to_string(j) +
                      " crosses rank_tol at t = " +
                      crossing_times(kappa, curve.t, app.window_begin(), app.window_end(),
                                     rank_tol));
    }
    app.curvatures.push_back(std::move(kappa));
    app.frames.push_back(std::move(next));
  }
  app.residual = residual_from(geo, app, nabla);
  return app;
}

CurveClassification classify_curve(const FrenetApparatus& app, double const_tol) {
  CurveClassification out;
  out.order = app.order;
  auto constant = [&](const std::vector<double>& k) {
    const int b = app.window_begin();
    const int e = app.window_end();
    if (e <= b) return true;
    double mean = 0.0;
    for (int i = b; i < e; ++i) mean += k[i];
    mean /= (e - b);
    double dev = 0.0;
    for (int i = b; i < e; ++i) dev = std::max(dev, std::abs(k[i] - mean));
    return dev < const_tol;
  };
  const std::string r = std::to_string(app.order);
  if (app.order == 1) {
    out.kind = CurveKind::kGeodesic;
    out.label = "geodesic";
    return out;
  }
  bool all_constant = true;
  for (const auto& k : app.curvatures) all_constant = all_constant && constant(k);
  if (app.order == 2 && all_constant) {
    out.kind = CurveKind::kCircle;
    out.label = "circle";
  } else if (app.order >= 3 && all_constant) {
    out.kind = CurveKind::kHelix;
    out.label = "helix of order " + r;
  } else {
    out.kind = CurveKind::kGeneric;
    out.label = "generic Frenet curve of order " + r;
  }
  return out;
}

std::vector<double> frenet_residual(const ManifoldModel& model, const FrenetApparatus& app,
                                    const Trajectory& curve) {
  if (curve.size() != app.size()) {
    throw Error(ErrorCode::kInvalidArgument, "apparatus and trajectory sample counts differ");
  }
  const SampleGeometry geo = sample_geometry(model, curve);
  std::vector<std::vector<Vector>> nabla;
  for (int j = 0; j < app.order; ++j) nabla.push_back(derivative_along(geo, curve, app.frames[j]));
  return residual_from(geo, app, nabla);
}

}  // namespace trajlab
