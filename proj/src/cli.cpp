#include "trajlab/cli.hpp"

#include "trajlab/errors.hpp"
#include "trajlab/frenet.hpp"
#include "trajlab/geometry.hpp"
#include "trajlab/model_catalog.hpp"
#include "trajlab/report_io.hpp"
#include "trajlab/theorems.hpp"
#include "trajlab/trajectory.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <future>
#include <random>
#include <sstream>

namespace trajlab {

namespace {

using json = nlohmann::json;

struct RunConfig {
  std::string model;
  std::string trajectory_path;
  double q = 0.0;
  double t_end = kDefaultEndTime;
  double h = kDefaultStep;
  std::string x0;
  std::string v0;
  bool legendre = false;
  double tol = 1e-3;
  double rank_tol = 0.0;  // 0 selects default_rank_tol(q)
  double const_tol = 1e-3;
  double certification_tol = 1e-8;
  int points = 100;
  std::string theorem = "classification";
  std::string q_list;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
};

const std::vector<std::string> kTheorems = {"classification", "cparallel-t", "cparallel-n",
                                            "cproper-t", "cproper-n"};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("bad number '") + item + "' in " + what);
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, std::string("empty ") + what);
  return out;
}

Vector parse_point(const std::string& text, int dim, const char* what) {
  const std::vector<double> v = parse_list(text, what);
  if (static_cast<int>(v.size()) != dim) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " needs " +
                                                 std::to_string(dim) + " components");
  }
  return Eigen::Map<const Vector>(v.data(), dim);
}

struct LoadedModel {
  ModelSpec spec;
  ManifoldModel model;
};

LoadedModel load_model(const RunConfig& cfg) {
  ModelSpec spec = resolve_model_spec(cfg.model);
  ManifoldModel model = compile_model(spec);
  certify_model(model, spec.sample_points, cfg.certification_tol);
  return {std::move(spec), std::move(model)};
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

double rank_tol_for(const RunConfig& cfg, double q) {
  return cfg.rank_tol > 0.0 ? cfg.rank_tol : default_rank_tol(q);
}

struct InitialData {
  Vector x0;
  Vector v0;
};

InitialData initial_data(const ManifoldModel& model, const RunConfig& cfg, bool legendre) {
  InitialData d;
  d.x0 = cfg.x0.empty() ? model.domain.center() : parse_point(cfg.x0, model.dim(), "--x0");
  if (cfg.v0.empty()) {
    std::mt19937_64 rng(cfg.seed);
    if (legendre) {
      d.v0 = random_legendre_direction(model, d.x0, rng).components;
    } else {
      std::normal_distribution<double> normal;
      Vector v(model.dim());
      for (int k = 0; k < model.dim(); ++k) v[k] = normal(rng);
      d.v0 = unit_vector(model, d.x0, v);
    }
  } else {
    const Vector v = parse_point(cfg.v0, model.dim(), "--v0");
    d.v0 = legendre ? legendre_project(model, d.x0, v).components : unit_vector(model, d.x0, v);
  }
  return d;
}

std::vector<std::string> requested_theorems(const std::string& name) {
  if (name == "all") return kTheorems;
  if (std::find(kTheorems.begin(), kTheorems.end(), name) == kTheorems.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown theorem '" + name + "'");
  }
  return {name};
}

TheoremReport run_theorem(const std::string& name, const ManifoldModel& model,
                          const Trajectory& curve, const FrenetApparatus& app, double q,
                          double tol) {
  if (name == "classification") return check_legendre_trajectory(model, curve, app, q, tol);
  if (name == "cparallel-t") return c_parallel_check(model, curve, app, Bundle::kTangent, tol);
  if (name == "cparallel-n") return c_parallel_check(model, curve, app, Bundle::kNormal, tol);
  if (name == "cproper-t") return c_proper_check(model, curve, app, Bundle::kTangent, tol);
  return c_proper_check(model, curve, app, Bundle::kNormal, tol);
}

std::string summary_line(const TheoremReport& r) {
  std::string line = r.theorem + ": " + to_string(r.verdict);
  if (!r.failing_condition.empty()) line += " (failing: " + r.failing_condition + ")";
  if (!r.note.empty()) line += " - " + r.note;
  return line;
}

double window_mean(const std::vector<double>& v) {
  const int b = kTheoremMargin;
  const int e = static_cast<int>(v.size()) - kTheoremMargin;
  if (e <= b) return 0.0;
  double acc = 0.0;
  for (int i = b; i < e; ++i) acc += v[i];
  return acc / (e - b);
}

// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const ModelSpec spec = resolve_model_spec(cfg.model);
  const ManifoldModel model = compile_model(spec);
  std::vector<Vector> points = spec.sample_points;
  if (cfg.points > 0) {
    std::vector<Vector> extra =
        default_sample_points(model.domain, cfg.points, static_cast<unsigned>(cfg.seed));
    points.insert(points.end(), extra.begin() + 1, extra.end());
  }
  const StructureReport report = check_framed_structure(model, points, cfg.certification_tol);
  json doc = {{"model", model.name},
              {"seed", cfg.seed},
              {"structure", to_json(report)}};
  write_text_file(out_path(cfg, "validate.json"), dump_json(doc));
  out << "model " << model.name << " (seed " << cfg.seed << ")\n" << structure_table(report);
  return report.all_pass() ? 0 : 1;
}

int cmd_integrate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LoadedModel lm = load_model(cfg);
  const InitialData init = initial_data(lm.model, cfg, cfg.legendre);
  Trajectory curve;
  int code = 0;
  try {
    curve = integrate_trajectory(lm.model, init.x0, init.v0, cfg.q, cfg.t_end, cfg.h);
  } catch (const IntegrationError& e) {
    err << "error: " << e.what() << " (partial trajectory written)\n";
    curve = e.partial();
    code = 2;
  }
  const DiagnosticsTable diag = diagnostics(lm.model, curve);
  write_text_file(out_path(cfg, "trajectory.csv"), trajectory_csv(curve));
  write_text_file(out_path(cfg, "diagnostics.csv"), diagnostics_csv(diag));
  out << "model " << lm.model.name << ", q=" << format_double(cfg.q) << ", seed " << cfg.seed
      << "\nsamples " << curve.size() << ", speed drift " << format_double(diag.speed_drift)
      << ", legendre defect " << format_double(diag.legendre_defect) << "\n";
  return code;
}

int cmd_frenet(const RunConfig& cfg, std::ostream& out) {
  const LoadedModel lm = load_model(cfg);
  Trajectory curve = parse_trajectory_csv(read_text_file(cfg.trajectory_path));
  curve.q = cfg.q;
  curve.model_name = lm.model.name;
  const FrenetApparatus app = compute_frenet(lm.model, curve, rank_tol_for(cfg, cfg.q));
  write_text_file(out_path(cfg, "apparatus.csv"), apparatus_csv(app));
  const CurveClassification cls = classify_curve(app, cfg.const_tol);
  out << "order " << app.order << ": " << cls.label << "\n";
  for (int j = 1; j < app.order; ++j) {
    out << "mean kappa" << j << " " << format_double(window_mean(app.kappa(j))) << "\n";
  }
  return 0;
}

struct LegendreRun {
  Trajectory curve;
  FrenetApparatus app;
};

LegendreRun legendre_run(const ManifoldModel& model, const RunConfig& cfg, double q) {
  const InitialData init = initial_data(model, cfg, true);
  LegendreRun run;
  run.curve = integrate_trajectory(model, init.x0, init.v0, q, cfg.t_end, cfg.h);
  run.app = compute_frenet(model, run.curve, rank_tol_for(cfg, q));
  return run;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const LoadedModel lm = load_model(cfg);
  const std::vector<std::string> names = requested_theorems(cfg.theorem);
  const LegendreRun run = legendre_run(lm.model, cfg, cfg.q);
  json reports = json::array();
  bool all_hold = true;
  for (const auto& name : names) {
    const TheoremReport r = run_theorem(name, lm.model, run.curve, run.app, cfg.q, cfg.tol);
    all_hold = all_hold && r.holds();
    out << summary_line(r) << "\n";
    reports.push_back(to_json(r));
  }
  json doc = {{"model", lm.model.name},
              {"seed", cfg.seed},
              {"q", cfg.q},
              {"h", cfg.h},
              {"t_end", cfg.t_end},
              {"tolerance", cfg.tol},
              {"order", run.app.order},
              {"classification", classify_curve(run.app, cfg.const_tol).label},
              {"reports", reports}};
  write_text_file(out_path(cfg, "check_report.json"), dump_json(doc));
  return all_hold ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const LoadedModel lm = load_model(cfg);
  const std::vector<double> qs = parse_list(cfg.q_list, "--q-list");
  const std::vector<std::string> names = requested_theorems(cfg.theorem);

  struct Row {
    double q;
    double kappa[3];
    int delta;
    int order;
    std::vector<std::string> verdicts;
  };
  std::vector<std::future<Row>> jobs;
  for (double q : qs) {
    jobs.push_back(std::async(std::launch::async, [&, q] {
      const LegendreRun run = legendre_run(lm.model, cfg, q);
      Row row{q, {0, 0, 0}, 0, run.app.order, {}};
      for (int j = 1; j <= 3; ++j) row.kappa[j - 1] = window_mean(run.app.kappa(j));
      for (const auto& name : names) {
        const TheoremReport r = run_theorem(name, lm.model, run.curve, run.app, q, cfg.tol);
        if (r.delta) row.delta = *r.delta;
        row.verdicts.push_back(to_string(r.verdict));
      }
      return row;
    }));
  }
  std::string csv = "q,kappa1,kappa2,kappa3,delta,order,seed";
  for (const auto& name : names) csv += "," + name;
  csv += "\n";
  bool all_hold = true;
  for (auto& job : jobs) {
    const Row row = job.get();
    csv += format_double(row.q) + "," + format_double(row.kappa[0]) + "," +
           format_double(row.kappa[1]) + "," + format_double(row.kappa[2]) + "," +
           std::to_string(row.delta) + "," + std::to_string(row.order) + "," +
           std::to_string(cfg.seed);
    for (const auto& v : row.verdicts) {
      csv += "," + v;
      all_hold = all_hold && v == "holds";
    }
    csv += "\n";
  }
  write_text_file(out_path(cfg, "sweep.csv"), csv);
  out << csv;
  return all_hold ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Numerical laboratory for trans-S-manifolds and Lorentz trajectories", "trajlab"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "Output directory");
    sub->add_option("--seed", cfg.seed, "Seed for random directions and sample points");
    sub->add_option("--cert-tol", cfg.certification_tol, "Model certification tolerance")
        ->check(CLI::PositiveNumber);
  };
  auto run_options = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "Magnetic strength");
    sub->add_option("--t-end", cfg.t_end, "Integration end time")->check(CLI::PositiveNumber);
    sub->add_option("--h", cfg.h, "RK4 step")->check(CLI::PositiveNumber);
    sub->add_option("--x0", cfg.x0, "Initial point, comma separated (default: domain centre)");
    sub->add_option("--v0", cfg.v0, "Initial direction, comma separated (default: random)");
    sub->add_option("--rank-tol", cfg.rank_tol, "Frenet rank tolerance (default 1e-4 max(1,|q|))");
    sub->add_option("--const-tol", cfg.const_tol, "Curvature constancy tolerance");
  };

  CLI::App* validate = app.add_subcommand("validate", "Certify a model's framed f-structure");
  validate->add_option("model", cfg.model, "Catalog name or model file")->required();
  validate->add_option("--points", cfg.points, "Extra seeded random sample points");
  common(validate);

  CLI::App* integrate = app.add_subcommand("integrate", "Integrate a Lorentz trajectory");
  integrate->add_option("model", cfg.model, "Catalog name or model file")->required();
  run_options(integrate);
  integrate->add_flag("--legendre", cfg.legendre, "Project v0 onto the Legendre directions");
  common(integrate);

  CLI::App* frenet = app.add_subcommand("frenet", "Frenet apparatus of a trajectory CSV");
  frenet->add_option("trajectory", cfg.trajectory_path, "Trajectory CSV")->required();
  frenet->add_option("--model", cfg.model, "Model the trajectory lives on")->required();
  frenet->add_option("--q", cfg.q, "Magnetic strength used for the default rank tolerance");
  frenet->add_option("--rank-tol", cfg.rank_tol, "Frenet rank tolerance");
  frenet->add_option("--const-tol", cfg.const_tol, "Curvature constancy tolerance");
  common(frenet);

  CLI::App* check = app.add_subcommand("check", "Run theorem checks on a Legendre trajectory");
  check->add_option("model", cfg.model, "Catalog name or model file")->required();
  run_options(check);
  check->add_option("--theorem", cfg.theorem,
                    "classification|cparallel-t|cparallel-n|cproper-t|cproper-n|all");
  check->add_option("--tol", cfg.tol, "Theorem tolerance")->check(CLI::PositiveNumber);
  common(check);

  CLI::App* sweep = app.add_subcommand("sweep", "Theorem checks over a list of q values");
  sweep->add_option("model", cfg.model, "Catalog name or model file")->required();
  sweep->add_option("--q-list", cfg.q_list, "Comma separated q values")->required();
  run_options(sweep);
  sweep->add_option("--theorem", cfg.theorem, "Theorem to evaluate per q");
  sweep->add_option("--tol", cfg.tol, "Theorem tolerance")->check(CLI::PositiveNumber);
  common(sweep);

  std::vector<std::string> argv_storage{"trajlab"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(cfg, out);
    if (*integrate) return cmd_integrate(cfg, out, err);
    if (*frenet) return cmd_frenet(cfg, out);
    if (*check) return cmd_check(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::kCertification ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace trajlab
