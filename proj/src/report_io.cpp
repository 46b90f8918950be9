#include "trajlab/report_io.hpp"

#include "trajlab/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trajlab {

namespace {

using json = nlohmann::json;

void write_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

void dump(const json& v, std::string& out, int indent) {
  const std::string pad(indent + 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_string(out, it.key());
        out += ": ";
        dump(it.value(), out, indent + 2);
      }
      out += "\n" + std::string(indent, ' ') + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      const bool scalars = std::all_of(v.begin(), v.end(), [](const json& e) {
        return e.is_primitive();
      });
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump(v[i], out, indent + 2);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(v[i], out, indent + 2);
      }
      out += "\n" + std::string(indent, ' ') + "]";
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    case json::value_t::string: write_string(out, v.get<std::string>()); return;
    default: out += v.dump(); return;
  }
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string join_row(const std::vector<double>& values) {
  std::string row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) row += ',';
    row += format_double(values[i]);
  }
  return row + '\n';
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& text, int line) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kSyntax,
                "trajectory CSV line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const json& value) {
  std::string out;
  dump(value, out, 0);
  return out + "\n";
}

json to_json(const StructureReport& report) {
  json axioms = json::array();
  for (const auto& a : report.axioms) {
    axioms.push_back({{"axiom", a.axiom}, {"residual", a.residual}, {"pass", a.pass}});
  }
  json points = json::array();
  for (const auto& p : report.sample_points) {
    points.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  }
  return {{"tolerance", report.tolerance},
          {"axioms", axioms},
          {"sample_points", points},
          {"all_pass", report.all_pass()}};
}

json to_json(const TheoremReport& report) {
  json conditions = json::array();
  for (const auto& c : report.conditions) {
    json entry = {{"name", c.name},
                  {"value", finite_or_null(c.value)},
                  {"tolerance", c.tolerance},
                  {"bound", c.lower_bound ? "lower" : "upper"},
                  {"evaluable", c.evaluable},
                  {"pass", c.pass}};
    if (!c.note.empty()) entry["note"] = c.note;
    conditions.push_back(std::move(entry));
  }
  json scalars = json::object();
  for (const auto& [k, v] : report.scalars) scalars[k] = finite_or_null(v);
  json series = json::object();
  for (const auto& [k, v] : report.series) {
    json arr = json::array();
    for (double x : v) arr.push_back(finite_or_null(x));
    series[k] = std::move(arr);
  }
  json out = {{"theorem", report.theorem},
              {"verdict", to_string(report.verdict)},
              {"conditions", conditions},
              {"scalars", scalars},
              {"series", series},
              {"flags", report.flags}};
  if (!report.failing_condition.empty()) out["failing_condition"] = report.failing_condition;
  if (!report.note.empty()) out["note"] = report.note;
  if (report.delta) out["delta"] = *report.delta;
  if (!report.c.empty()) out["c"] = report.c;
  return out;
}

std::string structure_table(const StructureReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-26s %-24s %s\n", "axiom", "residual", "status");
  os << line;
  for (const auto& a : report.axioms) {
    std::snprintf(line, sizeof line, "%-26s %-24.17g %s\n", a.axiom.c_str(), a.residual,
                  a.pass ? "pass" : "FAIL");
    os << line;
  }
  std::snprintf(line, sizeof line, "tolerance %.3g at %zu sample points: %s\n", report.tolerance,
                report.sample_points.size(), report.all_pass() ? "certified" : "NOT certified");
  os << line;
  return os.str();
}

std::string trajectory_csv(const Trajectory& curve) {
  const int d = curve.empty() ? 0 : static_cast<int>(curve.position.front().size());
  std::string out = "t";
  for (int k = 1; k <= d; ++k) out += ",x" + std::to_string(k);
  for (int k = 1; k <= d; ++k) out += ",v" + std::to_string(k);
  out += '\n';
  for (int i = 0; i < curve.size(); ++i) {
    std::vector<double> row{curve.t[i]};
    for (int k = 0; k < d; ++k) row.push_back(curve.position[i][k]);
    for (int k = 0; k < d; ++k) row.push_back(curve.velocity[i][k]);
    out += join_row(row);
  }
  return out;
}

std::string diagnostics_csv(const DiagnosticsTable& table) {
  const int s = table.eta.empty() ? 0 : static_cast<int>(table.eta.front().size());
  std::string out = "t,speed";
  for (int a = 1; a <= s; ++a) out += ",eta" + std::to_string(a);
  for (int a = 1; a <= s; ++a) out += ",theta" + std::to_string(a);
  out += '\n';
  for (std::size_t i = 0; i < table.t.size(); ++i) {
    std::vector<double> row{table.t[i], table.speed[i]};
    for (int a = 0; a < s; ++a) row.push_back(table.eta[i][a]);
    for (int a = 0; a < s; ++a) row.push_back(table.theta[i][a]);
    out += join_row(row);
  }
  return out;
}

std::string apparatus_csv(const FrenetApparatus& app) {
  const int d = app.frames.empty() || app.frames.front().empty()
                    ? 0
                    : static_cast<int>(app.frames.front().front().size());
  std::string out = "t";
  for (int j = 1; j < app.order; ++j) out += ",kappa" + std::to_string(j);
  for (int j = 1; j <= app.order; ++j) {
    for (int k = 1; k <= d; ++k) out += ",E" + std::to_string(j) + "_" + std::to_string(k);
  }
  out += ",residual\n";
  for (int i = 0; i < app.size(); ++i) {
    std::vector<double> row{app.t[i]};
    for (int j = 0; j + 1 < app.order; ++j) row.push_back(app.curvatures[j][i]);
    for (int j = 0; j < app.order; ++j) {
      for (int k = 0; k < d; ++k) row.push_back(app.frames[j][i][k]);
    }
    row.push_back(app.residual.empty() ? 0.0 : app.residual[i]);
    out += join_row(row);
  }
  return out;
}

Trajectory parse_trajectory_csv(std::string_view text) {
  std::vector<std::string> lines;
  for (const auto& l : split(text, '\n')) {
    std::string line = l;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  if (lines.empty()) throw Error(ErrorCode::kSyntax, "trajectory CSV is empty");
  const auto header = split(lines.front(), ',');
  const int columns = static_cast<int>(header.size());
  if (columns < 3 || columns % 2 == 0 || header[0] != "t") {
    throw Error(ErrorCode::kSyntax, "trajectory CSV header must be t,x1..xd,v1..vd");
  }
  const int d = (columns - 1) / 2;
  for (int k = 1; k <= d; ++k) {
    if (header[k] != "x" + std::to_string(k) || header[d + k] != "v" + std::to_string(k)) {
      throw Error(ErrorCode::kSyntax, "trajectory CSV header must be t,x1..xd,v1..vd");
    }
  }
  Trajectory curve;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = split(lines[li], ',');
    const int line_no = static_cast<int>(li) + 1;
    if (static_cast<int>(cells.size()) != columns) {
      throw Error(ErrorCode::kSyntax,
                  "trajectory CSV line " + std::to_string(line_no) + ": wrong column count");
    }
    Vector x(d), v(d);
    for (int k = 0; k < d; ++k) {
      x[k] = parse_double(cells[1 + k], line_no);
      v[k] = parse_double(cells[1 + d + k], line_no);
    }
    curve.t.push_back(parse_double(cells[0], line_no));
    curve.position.push_back(std::move(x));
    curve.velocity.push_back(std::move(v));
  }
  if (curve.size() >= 2) {
    curve.h = (curve.t.back() - curve.t.front()) / (curve.size() - 1);
    for (int i = 1; i < curve.size(); ++i) {
      const double step = curve.t[i] - curve.t[i - 1];
      if (!(curve.h > 0.0) || std::abs(step - curve.h) > 1e-6 * curve.h) {
        throw Error(ErrorCode::kSyntax, "trajectory CSV times are not uniformly spaced");
      }
    }
  }
  return curve;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void export_report(const TheoremReport& report, ExportFormat format, const std::string& path) {
  if (format == ExportFormat::kJson) {
    write_text_file(path, dump_json(to_json(report)));
    return;
  }
  std::string out = "theorem,condition,value,tolerance,bound,evaluable,pass\n";
  for (const auto& c : report.conditions) {
    out += report.theorem + "," + c.name + "," + format_double(c.value) + "," +
           format_double(c.tolerance) + "," + (c.lower_bound ? "lower" : "upper") + "," +
           (c.evaluable ? "true" : "false") + "," + (c.pass ? "true" : "false") + "\n";
  }
  write_text_file(path, out);
}

}  // namespace trajlab
