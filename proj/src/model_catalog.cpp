#include "trajlab/model_catalog.hpp"

#include "trajlab/errors.hpp"
#include "trajlab/expression.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace trajlab {

namespace {

using Table = std::vector<std::vector<std::string>>;
using json = nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string var(int index) { return "x" + std::to_string(index + 1); }

Table zeros(int rows, int cols) { return Table(rows, std::vector<std::string>(cols, "0")); }

void require_shape(const Table& t, int rows, int cols, const char* what) {
  bool ok = static_cast<int>(t.size()) == rows;
  for (const auto& row : t) ok = ok && static_cast<int>(row.size()) == cols;
  if (!ok) {
    throw Error(ErrorCode::kMissingComponent, std::string("component '") + what + "' must be " +
                                                  std::to_string(rows) + "x" +
                                                  std::to_string(cols));
  }
}

expr::Expression compile_entry(const std::string& text, const std::string& where, int dim) {
  expr::Expression e;
  try {
    e = expr::parse(text);
  } catch (const SyntaxError& err) {
    throw SyntaxError(where + ": " + err.what(), err.column());
  }
  if (e.max_variable() >= dim) {
    throw Error(ErrorCode::kParameter, where + ": references " + var(e.max_variable()) +
                                           " beyond dimension " + std::to_string(dim));
  }
  return e;
}

using Compiled = std::shared_ptr<const std::vector<expr::Expression>>;

Compiled compile_table(const Table& t, const char* what, int dim) {
  auto out = std::make_shared<std::vector<expr::Expression>>();
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      out->push_back(compile_entry(
          t[i][j], std::string(what) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]",
          dim));
    }
  }
  return out;
}

MatrixField matrix_field(Compiled c, int rows, int cols) {
  return [c = std::move(c), rows, cols](const Vector& x) {
    Matrix m(rows, cols);
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = (*c)[i * cols + j].evaluate(xs);
    }
    return m;
  };
}

VectorField row_field(Compiled c, int row, int cols) {
  return [c = std::move(c), row, cols](const Vector& x) {
    Vector v(cols);
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    for (int j = 0; j < cols; ++j) v(j) = (*c)[row * cols + j].evaluate(xs);
    return v;
  };
}

std::vector<ScalarField> scalar_fields(const std::vector<std::string>& texts, const char* what,
                                       int dim) {
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto e = std::make_shared<const expr::Expression>(
        compile_entry(texts[i], std::string(what) + "[" + std::to_string(i) + "]", dim));
    out.push_back([e](const Vector& x) {
      return e->evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    });
  }
  return out;
}

void require_catalog_params(int n, int s) {
  if (n < 1 || s < 1) {
    throw Error(ErrorCode::kParameter, "catalog models need n >= 1 and s >= 1 (got n=" +
                                           std::to_string(n) + ", s=" + std::to_string(s) + ")");
  }
}

// Block complex structure: f∂x_j = −∂y_j, f∂y_j = ∂x_j (+ extra z terms set by caller).
void complex_block(Table& f, int n) {
  for (int j = 0; j < n; ++j) {
    f[n + j][j] = "-1";
    f[j][n + j] = "1";
  }
}

// ---------------------------------------------------------------------------
// JSON helpers

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorCode::kMissingComponent, std::string("missing component '") + key + "'");
  }
  return *it;
}

std::string entry_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return fmt(v.get<double>());
  throw Error(ErrorCode::kSyntax, where + ": expected an expression string or number");
}

std::vector<std::string> string_row(const json& v, const std::string& where) {
  if (!v.is_array()) throw Error(ErrorCode::kSyntax, where + ": expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(entry_text(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Table string_table(const json& v, const std::string& where) {
  if (!v.is_array()) throw Error(ErrorCode::kSyntax, where + ": expected an array of rows");
  Table out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(string_row(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

double number_of(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::kSyntax, where + ": expected a number");
  return v.get<double>();
}

int int_of(const json& v, const char* where) {
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kSyntax, std::string(where) + ": expected an integer");
  }
  return v.get<int>();
}

std::string certification_table(const StructureReport& report) {
  std::ostringstream os;
  os << "certification failed (tolerance " << fmt(report.tolerance) << ")\n";
  for (const auto& a : report.axioms) {
    os << "  " << a.axiom << "  " << fmt(a.residual) << "  " << (a.pass ? "pass" : "FAIL")
       << "\n";
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

ManifoldModel compile_model(const ModelSpec& spec) {
  if (spec.n < 0 || spec.s < 1) {
    throw Error(ErrorCode::kParameter, "model needs n >= 0 and s >= 1");
  }
  const int d = spec.dim();
  if (spec.domain.dim() != d || static_cast<int>(spec.domain.hi.size()) != d) {
    throw Error(ErrorCode::kMissingComponent,
                "component 'domain' must list " + std::to_string(d) + " intervals");
  }
  for (int k = 0; k < d; ++k) {
    if (!(spec.domain.lo[k] < spec.domain.hi[k])) {
      throw Error(ErrorCode::kParameter, "domain interval " + std::to_string(k) + " is empty");
    }
  }
  require_shape(spec.g, d, d, "g");
  require_shape(spec.f, d, d, "f");
  require_shape(spec.xi, spec.s, d, "xi");
  require_shape(spec.eta, spec.s, d, "eta");
  if (spec.alpha.has_value() != spec.beta.has_value()) {
    throw Error(ErrorCode::kMissingComponent, "alpha and beta must be given together");
  }
  if (spec.alpha && (static_cast<int>(spec.alpha->size()) != spec.s ||
                     static_cast<int>(spec.beta->size()) != spec.s)) {
    throw Error(ErrorCode::kMissingComponent, "alpha and beta need s entries each");
  }
  for (const auto& p : spec.sample_points) {
    if (p.size() != d) {
      throw Error(ErrorCode::kParameter, "sample point has the wrong dimension");
    }
  }

  ManifoldModel m;
  m.name = spec.name;
  m.n = spec.n;
  m.s = spec.s;
  m.domain = spec.domain;
  m.metric = matrix_field(compile_table(spec.g, "g", d), d, d);
  m.f_tensor = matrix_field(compile_table(spec.f, "f", d), d, d);
  Compiled xi = compile_table(spec.xi, "xi", d);
  Compiled eta = compile_table(spec.eta, "eta", d);
  for (int a = 0; a < spec.s; ++a) {
    m.xi.push_back(row_field(xi, a, d));
    m.eta.push_back(row_field(eta, a, d));
  }
  if (spec.alpha) {
    m.alpha = scalar_fields(*spec.alpha, "alpha", d);
    m.beta = scalar_fields(*spec.beta, "beta", d);
  }
  m.source = std::make_shared<const ModelSpec>(spec);
  return m;
}

ModelSpec parse_model_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(json_text, e.byte == 0 ? 0 : e.byte - 1);
    throw SyntaxError("model file syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(column),
                      column);
  }
  if (!doc.is_object()) throw Error(ErrorCode::kSyntax, "model file must be a JSON object");

  ModelSpec spec;
  spec.name = doc.contains("name") ? doc["name"].get<std::string>() : "model";
  spec.n = int_of(field(doc, "n"), "n");
  spec.s = int_of(field(doc, "s"), "s");
  const json& dom = field(doc, "domain");
  if (!dom.is_array()) throw Error(ErrorCode::kSyntax, "domain: expected an array of [lo, hi]");
  for (std::size_t k = 0; k < dom.size(); ++k) {
    const std::string where = "domain[" + std::to_string(k) + "]";
    if (!dom[k].is_array() || dom[k].size() != 2) {
      throw Error(ErrorCode::kSyntax, where + ": expected [lo, hi]");
    }
    spec.domain.lo.push_back(number_of(dom[k][0], where));
    spec.domain.hi.push_back(number_of(dom[k][1], where));
  }
  spec.g = string_table(field(doc, "g"), "g");
  spec.f = string_table(field(doc, "f"), "f");
  spec.xi = string_table(field(doc, "xi"), "xi");
  spec.eta = string_table(field(doc, "eta"), "eta");
  if (doc.contains("alpha")) spec.alpha = string_row(doc["alpha"], "alpha");
  if (doc.contains("beta")) spec.beta = string_row(doc["beta"], "beta");
  if (doc.contains("sample_points")) {
    const json& pts = doc["sample_points"];
    if (!pts.is_array()) throw Error(ErrorCode::kSyntax, "sample_points: expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string where = "sample_points[" + std::to_string(i) + "]";
      if (!pts[i].is_array()) throw Error(ErrorCode::kSyntax, where + ": expected an array");
      Vector p(static_cast<Eigen::Index>(pts[i].size()));
      for (std::size_t k = 0; k < pts[i].size(); ++k) p(k) = number_of(pts[i][k], where);
      spec.sample_points.push_back(std::move(p));
    }
  }
  return spec;
}

void certify_model(const ManifoldModel& model, std::span<const Vector> points, double tol) {
  const StructureReport report = check_framed_structure(model, points, tol);
  if (!report.all_pass()) throw Error(ErrorCode::kCertification, certification_table(report));
}

std::vector<Vector> default_sample_points(const Box& domain, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> pts{domain.center()};
  for (int i = 0; i < count; ++i) {
    Vector p(domain.dim());
    for (int k = 0; k < domain.dim(); ++k) {
      p(k) = std::uniform_real_distribution<double>(domain.lo[k], domain.hi[k])(rng);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

ManifoldModel parse_model(std::string_view json_text, double certification_tol) {
  ModelSpec spec = parse_model_spec(json_text);
  if (spec.sample_points.empty()) spec.sample_points = default_sample_points(spec.domain, 10);
  ManifoldModel model = compile_model(spec);
  certify_model(model, spec.sample_points, certification_tol);
  return model;
}

std::string serialize_model(const ModelSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["n"] = spec.n;
  doc["s"] = spec.s;
  json dom = json::array();
  for (int k = 0; k < spec.domain.dim(); ++k) {
    dom.push_back(json::array({spec.domain.lo[k], spec.domain.hi[k]}));
  }
  doc["domain"] = dom;
  doc["g"] = spec.g;
  doc["f"] = spec.f;
  doc["xi"] = spec.xi;
  doc["eta"] = spec.eta;
  if (spec.alpha) doc["alpha"] = *spec.alpha;
  if (spec.beta) doc["beta"] = *spec.beta;
  json pts = json::array();
  for (const auto& p : spec.sample_points) {
    pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  }
  doc["sample_points"] = pts;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Catalog

ModelSpec standard_s_space_spec(int n, int s, double half_width) {
  require_catalog_params(n, s);
  const int d = 2 * n + s;
  ModelSpec spec;
  spec.name = "standard_s_space(n=" + std::to_string(n) + ", s=" + std::to_string(s) + ")";
  spec.n = n;
  spec.s = s;
  spec.domain = Box::cube(d, half_width);
  spec.g = zeros(d, d);
  spec.f = zeros(d, d);
  spec.xi = zeros(s, d);
  spec.eta = zeros(s, d);
  const std::string quarter_s = fmt(0.25 * s);
  for (int i = 0; i < n; ++i) {
    const std::string yi = var(n + i);
    for (int j = 0; j < n; ++j) {
      spec.g[i][j] = i == j ? "0.25+" + quarter_s + "*" + yi + "^2"
                            : quarter_s + "*" + yi + "*" + var(n + j);
    }
    spec.g[n + i][n + i] = "0.25";
    for (int a = 0; a < s; ++a) {
      spec.g[i][2 * n + a] = "-0.25*" + yi;
      spec.g[2 * n + a][i] = "-0.25*" + yi;
      spec.f[2 * n + a][n + i] = yi;
      spec.eta[a][i] = "-0.5*" + yi;
    }
  }
  complex_block(spec.f, n);
  for (int a = 0; a < s; ++a) {
    spec.g[2 * n + a][2 * n + a] = "0.25";
    spec.xi[a][2 * n + a] = "2";
    spec.eta[a][2 * n + a] = "0.5";
  }
  spec.alpha = std::vector<std::string>(s, "1");
  spec.beta = std::vector<std::string>(s, "0");
  spec.sample_points = default_sample_points(spec.domain, 10);
  return spec;
}

ManifoldModel standard_s_space(int n, int s, double half_width) {
  return compile_model(standard_s_space_spec(n, s, half_width));
}

ModelSpec c_space_spec(int n, int s, double half_width) {
  require_catalog_params(n, s);
  const int d = 2 * n + s;
  ModelSpec spec;
  spec.name = "c_space(n=" + std::to_string(n) + ", s=" + std::to_string(s) + ")";
  spec.n = n;
  spec.s = s;
  spec.domain = Box::cube(d, half_width);
  spec.g = zeros(d, d);
  for (int k = 0; k < d; ++k) spec.g[k][k] = "1";
  spec.f = zeros(d, d);
  complex_block(spec.f, n);
  spec.xi = zeros(s, d);
  spec.eta = zeros(s, d);
  for (int a = 0; a < s; ++a) {
    spec.xi[a][2 * n + a] = "1";
    spec.eta[a][2 * n + a] = "1";
  }
  spec.alpha = std::vector<std::string>(s, "0");
  spec.beta = std::vector<std::string>(s, "0");
  spec.sample_points = default_sample_points(spec.domain, 10);
  return spec;
}

ManifoldModel c_space(int n, int s, double half_width) {
  return compile_model(c_space_spec(n, s, half_width));
}

ModelSpec kenmotsu_warped_spec(int n, std::string_view sigma, WarpedDomain domain) {
  require_catalog_params(n, 1);
  const int d = 2 * n + 1;
  const int z = 2 * n;
  const expr::Aliases aliases{{"z", z}, {"t", z}};
  const expr::Expression sig = expr::parse(sigma, aliases);
  for (int k = 0; k < std::max(sig.max_variable() + 1, d); ++k) {
    if (k != z && sig.references(k)) {
      throw Error(ErrorCode::kParameter,
                  "warping exponent may depend only on the z coordinate, found " + var(k));
    }
  }
  if (!(domain.z_lo < domain.z_hi) || !(domain.fiber_half_width > 0.0)) {
    throw Error(ErrorCode::kParameter, "empty warped-product domain");
  }
  const std::string sig_text = sig.to_string();
  const std::string warp = "exp(2*(" + sig_text + "))";

  ModelSpec spec;
  spec.name = "kenmotsu_warped(n=" + std::to_string(n) + ", sigma=" + sig_text + ")";
  spec.n = n;
  spec.s = 1;
  spec.domain = Box::cube(d, domain.fiber_half_width);
  spec.domain.lo[z] = domain.z_lo;
  spec.domain.hi[z] = domain.z_hi;
  spec.g = zeros(d, d);
  for (int k = 0; k < 2 * n; ++k) spec.g[k][k] = warp;
  spec.g[z][z] = "1";
  spec.f = zeros(d, d);
  complex_block(spec.f, n);
  spec.xi = zeros(1, d);
  spec.eta = zeros(1, d);
  spec.xi[0][z] = "1";
  spec.eta[0][z] = "1";
  spec.alpha = std::vector<std::string>{"0"};
  spec.beta = std::vector<std::string>{sig.derivative(z).to_string()};
  spec.sample_points = default_sample_points(spec.domain, 10);
  return spec;
}

ManifoldModel kenmotsu_warped(int n, std::string_view sigma, WarpedDomain domain) {
  return compile_model(kenmotsu_warped_spec(n, sigma, domain));
}

ModelSpec resolve_model_spec(const std::string& source) {
  auto split = [](const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (int i = 0; i < 2; ++i) {
      const std::size_t colon = text.find(':', start);
      if (colon == std::string::npos) break;
      parts.push_back(text.substr(start, colon - start));
      start = colon + 1;
    }
    parts.push_back(text.substr(start));
    return parts;
  };
  auto to_int = [&](const std::string& t) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::kInvalidArgument, "bad integer '" + t + "' in model source " + source);
  };
  const auto parts = split(source);
  if (parts.size() == 3 && (parts[0] == "sspace" || parts[0] == "cspace")) {
    const int n = to_int(parts[1]);
    const int s = to_int(parts[2]);
    return parts[0] == "sspace" ? standard_s_space_spec(n, s) : c_space_spec(n, s);
  }
  if (parts.size() == 3 && parts[0] == "kenmotsu") {
    return kenmotsu_warped_spec(to_int(parts[1]), parts[2]);
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read model file '" + source + "'");
  std::ostringstream text;
  text << in.rdbuf();
  ModelSpec spec = parse_model_spec(text.str());
  if (spec.sample_points.empty()) spec.sample_points = default_sample_points(spec.domain, 10);
  return spec;
}

}  // namespace trajlab
