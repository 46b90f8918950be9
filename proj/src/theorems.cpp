#include "trajlab/theorems.hpp"

#include "trajlab/errors.hpp"
#include "trajlab/finite_difference.hpp"
#include "trajlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace trajlab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Quantities along the curve shared by every check.
struct Context {
  const ManifoldModel& model;
  const Trajectory& curve;
  const FrenetApparatus& app;
  int begin = 0;
  int end = 0;
  int s = 0;
  double sqrt_s = 0.0;
  std::vector<Matrix> G;
  std::vector<Matrix> F;
  std::vector<Vector> xi_sum;
  std::vector<Vector> alpha;
  std::vector<Vector> beta;
  std::vector<double> kappa1, kappa2, kappa3;

  Context(const ManifoldModel& m, const Trajectory& c, const FrenetApparatus& a)
      : model(m), curve(c), app(a) {
    const int n = curve.size();
    if (app.size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "apparatus and trajectory sample counts differ");
    }
    if (n < 2 * kTheoremMargin + 5) {
      throw Error(ErrorCode::kInsufficientSamples,
                  "insufficient samples: theorem checks need at least " +
                      std::to_string(2 * kTheoremMargin + 5));
    }
    begin = kTheoremMargin;
    end = n - kTheoremMargin;
    s = model.s;
    sqrt_s = std::sqrt(static_cast<double>(s));
    G.reserve(n);
    F.reserve(n);
    for (int i = 0; i < n; ++i) {
      const Vector& x = curve.position[i];
      G.push_back(model.metric(x));
      F.push_back(model.f_tensor(x));
      xi_sum.push_back(model.xi_sum(x));
      StructureFunctions sf = structure_functions(model, x);
      alpha.push_back(std::move(sf.alpha));
      beta.push_back(std::move(sf.beta));
    }
    kappa1 = app.kappa(1);
    kappa2 = app.kappa(2);
    kappa3 = app.kappa(3);
  }

  int size() const { return curve.size(); }
  const Vector& T(int i) const { return curve.velocity[i]; }
  Vector E(int j, int i) const { return app.frame(j, i); }
  Vector fT(int i) const { return F[i] * curve.velocity[i]; }
  double gnorm(int i, const Vector& v) const { return norm(G[i], v); }
  double g(int i, const Vector& a, const Vector& b) const { return inner(G[i], a, b); }

  double sup(const std::function<double(int)>& fn) const {
    double out = 0.0;
    for (int i = begin; i < end; ++i) out = std::max(out, fn(i));
    return out;
  }
  double inf(const std::function<double(int)>& fn) const {
    double out = INFINITY;
    for (int i = begin; i < end; ++i) out = std::min(out, fn(i));
    return out;
  }
  double mean(const std::vector<double>& v) const {
    double acc = 0.0;
    for (int i = begin; i < end; ++i) acc += v[i];
    return acc / (end - begin);
  }
  std::vector<double> window(const std::vector<double>& v) const {
    return std::vector<double>(v.begin() + begin, v.begin() + end);
  }
  std::vector<double> derivative(const std::vector<double>& v) const {
    return fd::differentiate(v, curve.h);
  }

  std::vector<double> sum_of(const std::vector<Vector>& v) const {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].sum();
    return out;
  }

  double legendre_defect() const {
    return sup([&](int i) {
      double m = 0.0;
      for (int a = 0; a < s; ++a) m = std::max(m, std::abs(model.eta[a](curve.position[i]).dot(T(i))));
      return m;
    });
  }
};

void add(TheoremReport& r, const std::string& name, double value, double tol,
         bool lower_bound = false, const std::string& note = {}) {
  Condition c;
  c.name = name;
  c.value = value;
  c.tolerance = tol;
  c.lower_bound = lower_bound;
  c.pass = std::isfinite(value) && (lower_bound ? value > tol : value < tol);
  c.note = note;
  r.conditions.push_back(std::move(c));
}

void add_not_evaluable(TheoremReport& r, const std::string& name, double tol,
                       const std::string& note) {
  Condition c;
  c.name = name;
  c.value = NAN;
  c.tolerance = tol;
  c.evaluable = false;
  c.note = note;
  r.conditions.push_back(std::move(c));
}

void finalize(TheoremReport& r) {
  r.verdict = Verdict::kHolds;
  for (const auto& c : r.conditions) {
    if (c.evaluable && !c.pass) {
      r.verdict = Verdict::kFails;
      r.failing_condition = c.name;
      return;
    }
  }
}

TheoremReport not_applicable(TheoremReport r, const std::string& why) {
  r.verdict = Verdict::kNotApplicable;
  r.note = "not-applicable: " + why;
  return r;
}

// Min over the sign choice of the sup defect; stores the chosen sign.
double signed_fit(TheoremReport& r, const std::string& key,
                  const std::function<double(double)>& sup_for_sign) {
  const double plus = sup_for_sign(1.0);
  const double minus = sup_for_sign(-1.0);
  r.scalars[key] = plus <= minus ? 1.0 : -1.0;
  return std::min(plus, minus);
}

struct LambdaFit {
  std::vector<double> lambda;
  std::vector<double> residual;
};

LambdaFit fit_lambda(const Context& ctx, const std::function<Vector(int)>& lhs) {
  LambdaFit fit;
  fit.lambda.assign(ctx.size(), 0.0);
  fit.residual.assign(ctx.size(), 0.0);
  for (int i = ctx.begin; i < ctx.end; ++i) {
    const Vector L = lhs(i);
    const Vector& X = ctx.xi_sum[i];
    const double lam = ctx.g(i, L, X) / ctx.g(i, X, X);
    fit.lambda[i] = lam;
    fit.residual[i] = ctx.gnorm(i, L - lam * X);
  }
  return fit;
}

void report_lambda(TheoremReport& r, const Context& ctx, const LambdaFit& fit, double fit_tol,
                   double tol) {
  add(r, "lambda_fit", ctx.sup([&](int i) { return fit.residual[i]; }), fit_tol);
  const double min_abs = ctx.inf([&](int i) { return std::abs(fit.lambda[i]); });
  std::string zeros;
  int listed = 0;
  bool previous = false;
  for (int i = ctx.begin; i < ctx.end && listed < 8; ++i) {
    const bool zero = std::abs(fit.lambda[i]) <= tol;
    if (zero && !previous) zeros += (listed++ ? ", " : "") + fmt(ctx.curve.t[i]);
    previous = zero;
  }
  add(r, "lambda_nonvanishing", min_abs, tol, true,
      zeros.empty() ? std::string{} : "lambda vanishes near t = " + zeros);
  r.series["lambda"] = ctx.window(fit.lambda);
  r.series["lambda_fit_residual"] = ctx.window(fit.residual);
}

std::vector<double> beta_mean(const Context& ctx) {
  std::vector<double> out(ctx.size());
  for (int i = 0; i < ctx.size(); ++i) out[i] = ctx.beta[i].mean();
  return out;
}

// Shared r = 2 relations: equal β_i, Σξ = ε√s E₂, κ₁ = −ε√s β.
void order_two_relations(TheoremReport& r, const Context& ctx, double tol) {
  const std::vector<double> beta = beta_mean(ctx);
  add(r, "beta_equal",
      ctx.sup([&](int i) { return ctx.beta[i].maxCoeff() - ctx.beta[i].minCoeff(); }), tol);
  double orient = 0.0;
  for (int i = ctx.begin; i < ctx.end; ++i) orient += ctx.g(i, ctx.xi_sum[i], ctx.E(2, i));
  const double eps = orient >= 0.0 ? 1.0 : -1.0;
  r.scalars["epsilon"] = eps;
  add(r, "xi_sum_along_E2",
      ctx.sup([&](int i) { return ctx.gnorm(i, ctx.xi_sum[i] - eps * ctx.sqrt_s * ctx.E(2, i)); }),
      tol);
  add(r, "kappa1_beta",
      ctx.sup([&](int i) { return std::abs(ctx.kappa1[i] + eps * ctx.sqrt_s * beta[i]); }), tol);
  r.series["beta"] = ctx.window(beta);
}

// Shared r ≥ 3 relations with Σξ = √s(cos w E₂ + sin w E₃).
XiDecomposition order_three_relations(TheoremReport& r, const Context& ctx, double tol) {
  XiDecomposition dec = decompose_xi_sum(ctx.model, ctx.curve, ctx.app, 3);
  add(r, "xi_sum_in_span_E2_E3", ctx.sup([&](int i) { return dec.residual[i]; }), tol);
  const std::vector<double> sum_beta = ctx.sum_of(ctx.beta);
  const std::vector<double> sum_alpha = ctx.sum_of(ctx.alpha);
  add(r, "sum_beta_cos_w", ctx.sup([&](int i) {
        return std::abs(sum_beta[i] + ctx.sqrt_s * ctx.kappa1[i] * std::cos(dec.w[i]));
      }),
      tol);
  const std::vector<double> dw = ctx.derivative(dec.w);
  add(r, "kappa2_w", signed_fit(r, "kappa2_sign", [&](double sign) {
        return ctx.sup([&](int i) {
          return std::abs(ctx.kappa2[i] - (sign * sum_alpha[i] / ctx.sqrt_s - dw[i]));
        });
      }),
      tol);
  add(r, "fT_w", signed_fit(r, "fT_sign", [&](double sign) {
        return ctx.sup([&](int i) {
          const Vector rhs =
              sign * (std::sin(dec.w[i]) * ctx.E(2, i) - std::cos(dec.w[i]) * ctx.E(3, i));
          return ctx.gnorm(i, ctx.fT(i) - rhs);
        });
      }),
      tol);
  r.series["w"] = ctx.window(dec.w);
  return dec;
}

// λ = expected(i) where Σβ does not vanish on the window.
void lambda_relation(TheoremReport& r, const Context& ctx, const LambdaFit& fit,
                     const std::function<double(int, double)>& expected, double tol) {
  const std::vector<double> sum_beta = ctx.sum_of(ctx.beta);
  const double min_beta = ctx.inf([&](int i) { return std::abs(sum_beta[i]); });
  if (!(min_beta > tol)) {
    add_not_evaluable(r, "lambda_relation", tol, "sum of beta vanishes on the window");
    return;
  }
  add(r, "lambda_relation", ctx.sup([&](int i) {
        return std::abs(fit.lambda[i] - expected(i, sum_beta[i]));
      }),
      tol);
}

void kappa1_constant(TheoremReport& r, const Context& ctx, double tol) {
  const double m = ctx.mean(ctx.kappa1);
  add(r, "kappa1_constant", ctx.sup([&](int i) { return std::abs(ctx.kappa1[i] - m); }), tol);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kFails: return "fails";
    case Verdict::kNotApplicable: return "not-applicable";
  }
  return "unknown";
}

const Condition* TheoremReport::condition(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------

TheoremReport check_legendre_trajectory(const ManifoldModel& model, const Trajectory& curve,
                                        const FrenetApparatus& app, double q, double tol) {
  TheoremReport r;
  r.theorem = "classification";
  const Context ctx(model, curve, app);
  r.scalars["q"] = q;
  r.scalars["rank_tol"] = app.rank_tol;
  r.scalars["order"] = app.order;
  r.series["t"] = ctx.window(curve.t);
  r.series["kappa1"] = ctx.window(ctx.kappa1);
  r.series["kappa2"] = ctx.window(ctx.kappa2);

  const double defect = ctx.legendre_defect();
  r.scalars["legendre_defect"] = defect;
  const double lorentz = ctx.sup([&](int i) {
    return ctx.gnorm(i, ctx.kappa1[i] * ctx.E(2, i) + q * ctx.fT(i));
  });
  r.scalars["lorentz_residual"] = lorentz;
  if (q == 0.0) return not_applicable(r, "q = 0 gives geodesics");
  if (!(defect < tol)) return not_applicable(r, "curve is not Legendre (defect " + fmt(defect) + ")");
  if (!(lorentz < tol)) {
    return not_applicable(r, "curve is not a q-trajectory (Lorentz residual " + fmt(lorentz) + ")");
  }

  const int delta = q < 0.0 ? 1 : -1;
  r.delta = delta;
  const double aq = std::abs(q);
  add(r, "kappa1_abs_q", ctx.sup([&](int i) { return std::abs(ctx.kappa1[i] - aq); }), tol);
  add(r, "fT_delta_E2",
      ctx.sup([&](int i) { return ctx.gnorm(i, ctx.fT(i) - delta * ctx.E(2, i)); }), tol);
  add(r, "beta_zero", ctx.sup([&](int i) { return ctx.beta[i].cwiseAbs().maxCoeff(); }), tol);

  std::vector<double> alpha_norm(ctx.size());
  for (int i = 0; i < ctx.size(); ++i) alpha_norm[i] = ctx.alpha[i].norm();
  add(r, "kappa2_alpha_norm",
      ctx.sup([&](int i) { return std::abs(ctx.kappa2[i] - alpha_norm[i]); }), tol);

  const double alpha_sup = ctx.sup([&](int i) { return alpha_norm[i]; });
  if (!(alpha_sup > app.rank_tol)) {
    r.scalars["branch"] = 1;
    r.note = "Legendre circle with frame {T, delta fT}";
    add(r, "circle_order", std::abs(app.order - 2.0), 0.5);
    finalize(r);
    return r;
  }

  r.scalars["branch"] = 2;
  r.note = "Legendre curve of osculating order " + std::to_string(app.order);
  add(r, "order_at_least_3", app.order >= 3 ? 0.0 : 1.0, 0.5);
  if (app.order >= 3) {
    add(r, "E3_direction", ctx.sup([&](int i) {
          Vector u = Vector::Zero(model.dim());
          for (int a = 0; a < ctx.s; ++a) u += ctx.alpha[i][a] * model.xi[a](curve.position[i]);
          u *= delta / alpha_norm[i];
          return 2.0 * std::asin(std::min(1.0, ctx.gnorm(i, ctx.E(3, i) - u) / 2.0));
        }),
        tol);
  } else {
    add_not_evaluable(r, "E3_direction", tol, "no E3 below order 3");
  }

  std::vector<std::vector<double>> c(ctx.s, std::vector<double>(ctx.size()));
  for (int a = 0; a < ctx.s; ++a) {
    for (int i = 0; i < ctx.size(); ++i) c[a][i] = ctx.alpha[i][a] / alpha_norm[i];
  }
  std::vector<double> k3_formula(ctx.size(), 0.0);
  for (int a = 0; a < ctx.s; ++a) {
    const std::vector<double> dc = ctx.derivative(c[a]);
    for (int i = 0; i < ctx.size(); ++i) k3_formula[i] += dc[i] * dc[i];
  }
  for (double& v : k3_formula) v = std::sqrt(v);
  add(r, "kappa3_formula",
      ctx.sup([&](int i) { return std::abs(ctx.kappa3[i] - k3_formula[i]); }), 10.0 * tol);
  r.series["kappa3"] = ctx.window(ctx.kappa3);

  const double kappa3_sup = ctx.sup([&](int i) { return ctx.kappa3[i]; });
  if (kappa3_sup < app.rank_tol) {
    double spread = 0.0;
    double unit = 0.0;
    for (int a = 0; a < ctx.s; ++a) {
      const double m = ctx.mean(c[a]);
      r.c.push_back(m);
      unit += m * m;
      spread = std::max(spread, ctx.sup([&](int i) { return std::abs(c[a][i] - m); }));
    }
    add(r, "c_constant", spread, tol);
    add(r, "c_unit", std::abs(unit - 1.0), tol);
  }
  finalize(r);
  return r;
}

TheoremReport c_parallel_check(const ManifoldModel& model, const Trajectory& curve,
                               const FrenetApparatus& app, Bundle bundle, double tol) {
  TheoremReport r;
  r.theorem = bundle == Bundle::kTangent ? "cparallel-t" : "cparallel-n";
  const Context ctx(model, curve, app);
  const std::vector<double> dk1 = ctx.derivative(ctx.kappa1);
  r.scalars["order"] = app.order;
  r.series["t"] = ctx.window(curve.t);
  r.series["kappa1"] = ctx.window(ctx.kappa1);

  const LambdaFit fit = fit_lambda(ctx, [&](int i) {
    Vector L = dk1[i] * ctx.E(2, i) + ctx.kappa1[i] * ctx.kappa2[i] * ctx.E(3, i);
    if (bundle == Bundle::kTangent) L -= ctx.kappa1[i] * ctx.kappa1[i] * ctx.T(i);
    return L;
  });
  report_lambda(r, ctx, fit, tol, tol);

  const double defect = ctx.legendre_defect();
  r.scalars["legendre_defect"] = defect;
  const bool legendre = defect < tol;
  if (!legendre) r.note = "curve is not Legendre: Legendre-specific relations skipped";

  if (bundle == Bundle::kTangent) {
    if (legendre && ctx.sup([&](int i) { return ctx.kappa1[i]; }) > app.rank_tol) {
      const double ratio = ctx.inf([&](int i) {
        return fit.residual[i] / (ctx.kappa1[i] * ctx.kappa1[i]);
      });
      add(r, "nonexistence_certificate", ratio, 1.0 - tol, true);
      if (r.conditions.back().pass) r.note = "nonexistence confirmed";
    }
    finalize(r);
    return r;
  }

  if (legendre && app.order == 2) {
    order_two_relations(r, ctx, tol);
    const std::vector<double> dbeta = ctx.derivative(beta_mean(ctx));
    add(r, "lambda_minus_dbeta",
        ctx.sup([&](int i) { return std::abs(fit.lambda[i] + dbeta[i]); }), tol);
  } else if (legendre && app.order >= 3) {
    order_three_relations(r, ctx, tol);
    lambda_relation(r, ctx, fit,
                    [&](int i, double sum_beta) { return -ctx.kappa1[i] * dk1[i] / sum_beta; },
                    tol);
  }
  finalize(r);
  return r;
}

TheoremReport c_proper_check(const ManifoldModel& model, const Trajectory& curve,
                             const FrenetApparatus& app, Bundle bundle, double tol) {
  TheoremReport r;
  const bool tangent = bundle == Bundle::kTangent;
  r.theorem = tangent ? "cproper-t" : "cproper-n";
  if (!tangent) r.flags.push_back("derived-by-analogy");
  const Context ctx(model, curve, app);
  const std::vector<double>& k1 = ctx.kappa1;
  const std::vector<double>& k2 = ctx.kappa2;
  const std::vector<double>& k3 = ctx.kappa3;
  const std::vector<double> dk1 = ctx.derivative(k1);
  const std::vector<double> ddk1 = ctx.derivative(dk1);
  const std::vector<double> dk2 = ctx.derivative(k2);
  const double loose = 10.0 * tol;
  r.scalars["order"] = app.order;
  r.series["t"] = ctx.window(curve.t);
  r.series["kappa1"] = ctx.window(k1);

  const LambdaFit fit = fit_lambda(ctx, [&](int i) {
    Vector L = (k1[i] * k2[i] * k2[i] - ddk1[i]) * ctx.E(2, i) -
               (2.0 * dk1[i] * k2[i] + k1[i] * dk2[i]) * ctx.E(3, i) -
               k1[i] * k2[i] * k3[i] * ctx.E(4, i);
    if (tangent) L += 3.0 * k1[i] * dk1[i] * ctx.T(i) + k1[i] * k1[i] * k1[i] * ctx.E(2, i);
    return L;
  });
  report_lambda(r, ctx, fit, loose, tol);

  const double defect = ctx.legendre_defect();
  r.scalars["legendre_defect"] = defect;
  if (!(defect < tol)) {
    r.note = "curve is not Legendre: Legendre-specific relations skipped";
    finalize(r);
    return r;
  }
  if (tangent) kappa1_constant(r, ctx, tol);

  const std::vector<double> sum_alpha = ctx.sum_of(ctx.alpha);
  if (app.order == 2) {
    order_two_relations(r, ctx, tol);
    const std::vector<double> beta = beta_mean(ctx);
    add(r, "sum_alpha_zero", ctx.sup([&](int i) { return std::abs(sum_alpha[i]); }), tol);
    if (tangent) {
      const double s = ctx.s;
      add(r, "lambda_minus_s_beta_cubed", ctx.sup([&](int i) {
            return std::abs(fit.lambda[i] + s * beta[i] * beta[i] * beta[i]);
          }),
          loose);
      const double m = ctx.mean(fit.lambda);
      add(r, "lambda_constant", ctx.sup([&](int i) { return std::abs(fit.lambda[i] - m); }),
          loose);
    } else {
      const std::vector<double> ddbeta = ctx.derivative(ctx.derivative(beta));
      add(r, "lambda_ddbeta",
          ctx.sup([&](int i) { return std::abs(fit.lambda[i] - ddbeta[i]); }), loose);
    }
  } else if (app.order == 3) {
    order_three_relations(r, ctx, tol);
    lambda_relation(r, ctx, fit,
                    [&](int i, double sum_beta) {
                      return tangent ? -k1[i] * k1[i] * (k1[i] * k1[i] + k2[i] * k2[i]) / sum_beta
                                     : -k1[i] * (k1[i] * k2[i] * k2[i] - ddk1[i]) / sum_beta;
                    },
                    loose);
  } else if (app.order >= 4) {
    const XiDecomposition dec = decompose_xi_sum(model, curve, app, 4);
    add(r, "xi_sum_in_span_E2_E3_E4", ctx.sup([&](int i) { return dec.residual[i]; }), tol);
    const std::vector<double> sum_beta = ctx.sum_of(ctx.beta);
    add(r, "sum_beta_cos_w", ctx.sup([&](int i) {
          return std::abs(sum_beta[i] + ctx.sqrt_s * k1[i] * std::cos(dec.w[i]));
        }),
        tol);
    add(r, "lambda_cos_w", ctx.sup([&](int i) {
          const double rhs =
              tangent ? k1[i] * (k1[i] * k1[i] + k2[i] * k2[i]) : k1[i] * k2[i] * k2[i] - ddk1[i];
          return std::abs(fit.lambda[i] * ctx.sqrt_s * std::cos(dec.w[i]) - rhs);
        }),
        loose);
    add(r, "lambda_sin_w_cos_phi", ctx.sup([&](int i) {
          const double rhs = tangent ? -k1[i] * dk2[i] : -(2.0 * dk1[i] * k2[i] + k1[i] * dk2[i]);
          return std::abs(fit.lambda[i] * ctx.sqrt_s * std::sin(dec.w[i]) * std::cos(dec.phi[i]) -
                          rhs);
        }),
        loose);
    add(r, "lambda_sin_w_sin_phi", ctx.sup([&](int i) {
          return std::abs(fit.lambda[i] * ctx.sqrt_s * std::sin(dec.w[i]) * std::sin(dec.phi[i]) +
                          k1[i] * k2[i] * k3[i]);
        }),
        loose);
    if (app.order < 5) {
      add_not_evaluable(r, "kappa4_relation", tol, "not evaluable: r < 5 leaves g(fT, E5) undefined");
    } else {
      const double min_den = ctx.inf([&](int i) {
        return std::abs(ctx.sqrt_s * std::sin(dec.w[i]) * std::sin(dec.phi[i]));
      });
      if (!(min_den > tol)) {
        add_not_evaluable(r, "kappa4_relation", tol, "not evaluable: sin w sin phi vanishes");
      } else {
        const std::vector<double> k4 = app.kappa(4);
        add(r, "kappa4_relation", ctx.sup([&](int i) {
              const double rhs = -sum_alpha[i] * ctx.g(i, ctx.fT(i), ctx.E(5, i)) /
                                 (ctx.sqrt_s * std::sin(dec.w[i]) * std::sin(dec.phi[i]));
              return std::abs(k4[i] - rhs);
            }),
            tol);
      }
    }
    r.series["w"] = ctx.window(dec.w);
    r.series["phi"] = ctx.window(dec.phi);
  }
  finalize(r);
  return r;
}

XiDecomposition decompose_xi_sum(const ManifoldModel& model, const Trajectory& curve,
                                 const FrenetApparatus& app, int max_frame) {
  if (app.order < 2) {
    throw Error(ErrorCode::kInvalidArgument, "decomposition needs osculating order >= 2");
  }
  if (app.size() != curve.size()) {
    throw Error(ErrorCode::kInvalidArgument, "apparatus and trajectory sample counts differ");
  }
  XiDecomposition out;
  out.span_end = std::max(2, std::min({app.order, max_frame, 4}));
  const double sqrt_s = std::sqrt(static_cast<double>(model.s));
  const int n = curve.size();
  out.w.resize(n);
  out.phi.assign(n, 0.0);
  out.magnitude.resize(n);
  out.residual.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vector& x = curve.position[i];
    const Matrix G = model.metric(x);
    const Vector X = model.xi_sum(x);
    Vector proj = Vector::Zero(X.size());
    double c[5] = {0, 0, 0, 0, 0};
    for (int k = 2; k <= out.span_end; ++k) {
      const Vector& e = app.frames[k - 1][i];
      const double gx = inner(G, X, e);
      c[k] = gx / sqrt_s;
      proj += gx * e;
    }
    out.residual[i] = norm(G, X - proj);
    out.magnitude[i] = std::sqrt(c[2] * c[2] + c[3] * c[3] + c[4] * c[4]);
    if (out.span_end == 4) {
      out.w[i] = std::atan2(std::hypot(c[3], c[4]), c[2]);
      out.phi[i] = std::atan2(c[4], c[3]);
    } else {
      out.w[i] = std::atan2(c[3], c[2]);
      if (i > 0) {
        const double jump = out.w[i] - out.w[i - 1];
        out.w[i] -= 2.0 * std::numbers::pi * std::round(jump / (2.0 * std::numbers::pi));
      }
    }
  }
  return out;
}

}  // namespace trajlab
