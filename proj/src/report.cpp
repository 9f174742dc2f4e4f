#include "concavlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "concavlab/errors.hpp"

namespace cvlab {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

namespace {

Json point(Point p) { return Json::array({number(p.x), number(p.y)}); }

Json flag(const HypothesisFlag& f) {
  return {{"value", std::string(to_string(f.value))}, {"basis", f.basis}, {"violations", f.violations}};
}

Json opt(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

Json transform_json(const TransformSpec& t) {
  return {{"kind", t.kind == Transform::log ? "log" : "power"}, {"alpha", number(t.alpha)}, {"beta", number(t.beta)}};
}

Json assertion_json(const Assertion& a) {
  Json j = {{"name", a.name},         {"passed", a.passed},          {"measured", number(a.measured)},
            {"bound", number(a.bound)}, {"margin", number(a.margin)}, {"note", a.note}};
  if (a.tuple) j["tuple"] = to_json(*a.tuple);
  return j;
}

Json diagnostics_json(const Diagnostics& d) {
  return {{"seeded", d.seeded},
          {"monotone", d.monotone},
          {"tau_mono", number(d.tau_mono)},
          {"steps", d.steps},
          {"cg_iterations", d.cg_iterations},
          {"snapshots", d.snapshots},
          {"lambda1", number(d.lambda1)},
          {"stationary_residual", opt(d.stationary_residual)},
          {"stationary_sup", opt(d.stationary_sup)},
          {"comparison_worst", opt(d.comparison_worst)},
          {"boundary_ratio_min", opt(d.boundary_ratio_min)},
          {"hopf_min", opt(d.hopf_min)},
          {"quasiconcavity", opt(d.quasiconcavity)},
          {"negative_source_fraction", opt(d.negative_source_fraction)},
          {"warnings", d.warnings}};
}

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    std::string v = j.is_string() ? j.get<std::string>() : j.dump();
    if (v.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      v = q + "\"";
    }
    out << prefix << ',' << v << '\n';
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

Json to_json(const Tuple& t) {
  return {{"x1", point(t.x1)}, {"x3", point(t.x3)}, {"t1", number(t.t1)}, {"t3", number(t.t3)},
          {"lambda", number(t.lambda)}};
}

Json to_json(const DefectReport& d) {
  Json per = Json::array();
  for (auto [t, m] : d.per_time) per.push_back(Json::array({number(t), number(m)}));
  return {{"mode", std::string(to_string(d.mode))},
          {"min", number(d.min)},
          {"tau_audit", number(d.tau_audit)},
          {"passes", d.passes()},
          {"curvature_scale", number(d.curvature_scale)},
          {"argmin", to_json(d.argmin)},
          {"gradients", Json::array({point(d.gradients[0]), point(d.gradients[1]), point(d.gradients[2])})},
          {"gradient_mismatch", number(d.gradient_mismatch)},
          {"samples", d.samples},
          {"per_time", per}};
}

Json to_json(const BoundReport& b) {
  Json c = Json::object();
  for (const auto& [k, v] : b.constants) c[k] = number(v);
  Json valid = Json::object();
  for (const auto& [k, v] : b.validity) valid[k] = v;
  return {{"theorem", b.theorem}, {"rhs", number(b.rhs)}, {"experimental", b.experimental}, {"constants", c},
          {"validity", valid}};
}

Json to_json(const HypothesisReport& h) {
  return {{"h1", flag(h.h1)},
          {"h1_star", flag(h.h1_star)},
          {"h1_prime", flag(h.h1_prime)},
          {"h2", flag(h.h2)},
          {"h2_star", flag(h.h2_star)},
          {"h3", flag(h.h3)},
          {"M", number(h.M)},
          {"T", number(h.T)},
          {"k", number(h.k)},
          {"q", number(h.q)},
          {"gamma", number(h.gamma)},
          {"omega", number(h.omega)},
          {"L", number(h.L)},
          {"holder", number(h.holder)},
          {"weight_inf", number(h.weight_inf)},
          {"weight_sup", number(h.weight_sup)},
          {"weight_osc", number(h.weight_osc)},
          {"theta", number(h.theta)},
          {"theta_defect", number(h.theta_defect)},
          {"notes", h.notes}};
}

Json to_json(const HyersUlamCertificate& c) {
  return {{"n", c.n},
          {"delta", number(c.delta)},
          {"k_n", number(c.k_n)},
          {"distance", number(c.distance)},
          {"bound", number(c.k_n * c.delta)},
          {"holds", c.holds}};
}

Json to_json(const PropertySuiteReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"draws", c.draws},
                      {"evaluated", c.evaluated},
                      {"skipped", c.skipped},
                      {"violations", c.violations},
                      {"worst_margin", number(c.worst_margin)}});
  return {{"seed", r.seed}, {"draws", r.draws}, {"tolerance", number(r.tolerance)}, {"passed", r.passed()},
          {"checks", checks}};
}

Json to_json(const ScenarioReport& r) {
  Json defects = Json::array();
  for (const auto& d : r.defects)
    defects.push_back({{"name", d.name}, {"transform", transform_json(d.transform)}, {"report", to_json(d.report)}});
  Json bounds = Json::array();
  for (const auto& b : r.bounds) bounds.push_back(to_json(b));
  Json asserts = Json::array();
  for (const auto& a : r.assertions) asserts.push_back(assertion_json(a));
  return {{"id", r.id},
          {"title", r.title},
          {"claims", r.claims},
          {"verdict", std::string(to_string(r.verdict))},
          {"reason", r.reason},
          {"grid", {{"h", number(r.h)}, {"dt", number(r.dt)}, {"T", number(r.T)}}},
          {"hypotheses", to_json(r.hypotheses)},
          {"defects", defects},
          {"bounds", bounds},
          {"assertions", asserts},
          {"diagnostics", diagnostics_json(r.diagnostics)}};
}

Json suite_summary(const std::vector<ScenarioReport>& reports) {
  Json list = Json::array();
  int pass = 0, fail = 0, na = 0;
  for (const auto& r : reports) {
    list.push_back({{"id", r.id}, {"verdict", std::string(to_string(r.verdict))}, {"reason", r.reason}});
    if (r.verdict == Verdict::pass) ++pass;
    if (r.verdict == Verdict::fail) ++fail;
    if (r.verdict == Verdict::not_applicable) ++na;
  }
  return {{"scenarios", list}, {"pass", pass}, {"fail", fail}, {"not_applicable", na}, {"exit_code", fail ? 1 : 0}};
}

std::string summary_text(const ScenarioReport& r) {
  std::ostringstream os;
  os << r.id << ": " << to_string(r.verdict);
  if (!r.reason.empty()) os << " (" << r.reason << ")";
  os << "\n  grid h=" << fmt(r.h) << " dt=" << fmt(r.dt) << " T=" << fmt(r.T) << "\n";
  for (const auto& d : r.defects)
    os << "  defect[" << d.name << "] " << to_string(d.report.mode) << " min=" << fmt(d.report.min)
       << " tau=" << fmt(d.report.tau_audit) << "\n";
  for (const auto& b : r.bounds)
    os << "  bound[" << b.theorem << "] rhs=" << fmt(b.rhs) << (b.experimental ? " (experimental)" : "") << "\n";
  for (const auto& a : r.assertions)
    os << "  " << (a.passed ? "ok   " : "FAIL ") << a.name << ": measured " << fmt(a.measured) << " vs " << fmt(a.bound)
       << ", margin " << fmt(a.margin) << "\n";
  for (const auto& w : r.diagnostics.warnings) os << "  warning: " << w << "\n";
  return os.str();
}

std::string summary_text(const PropertySuiteReport& r) {
  std::ostringstream os;
  os << "property suite seed=" << r.seed << " draws=" << r.draws << ": " << (r.passed() ? "pass" : "fail") << "\n";
  for (const auto& c : r.checks)
    os << "  " << c.name << ": " << c.violations << " violations, " << c.evaluated << " evaluated, " << c.skipped
       << " skipped, worst margin " << fmt(c.worst_margin) << "\n";
  return os.str();
}

std::string to_csv(const Json& j) {
  std::ostringstream os;
  os << "key,value\n";
  flatten(j, "", os);
  return os.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  require(os.good(), ErrorCode::io_error, "cannot write " + path.string());
  os << text;
  require(os.good(), ErrorCode::io_error, "write failed for " + path.string());
}

std::filesystem::path write_report(const Json& j, const std::filesystem::path& dir, const std::string& stem,
                                   ReportFormat format) {
  std::filesystem::path p = dir / (stem + (format == ReportFormat::json ? ".json" : ".csv"));
  write_text(format == ReportFormat::json ? j.dump(2) + "\n" : to_csv(j), p);
  return p;
}

}  // namespace cvlab
