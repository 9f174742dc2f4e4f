#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "concavlab/audit.hpp"
#include "concavlab/config.hpp"
#include "concavlab/envelope.hpp"
#include "concavlab/errors.hpp"
#include "concavlab/fieldio.hpp"
#include "concavlab/parabolic.hpp"
#include "concavlab/properties.hpp"
#include "concavlab/report.hpp"
#include "concavlab/stationary.hpp"

namespace cvlab::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::optional<double> h, dt, T, beta, theta;
  std::optional<std::string> alpha, rho, format, config, scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> sets;
  int verbose = 0;
  bool quiet = false;
};

struct FieldArgs {
  std::vector<std::string> fields;
  std::vector<double> times;
  std::optional<std::string> stationary;
  std::optional<std::string> section;
  std::string dump = "csv";
};

const CLI::Validator kUnitInterval =
    CLI::Validator([](std::string& s) -> std::string {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(s, v) || !(v > 0.0 && v < 1.0)) return "value " + s + " must lie in (0, 1)";
      return {};
    }, "(0,1)");

const CLI::Validator kAlpha = CLI::Validator([](std::string& s) -> std::string {
  if (s == "auto") return {};
  double v = 0.0;
  if (!CLI::detail::lexical_cast(s, v) || !(v > 0.0 && v <= 1.0)) return "value " + s + " must be auto or lie in (0, 1]";
  return {};
}, "auto|(0,1]");

const CLI::Validator kRho = CLI::Validator([](std::string& s) -> std::string {
  if (s == "auto") return {};
  double v = 0.0;
  if (!CLI::detail::lexical_cast(s, v) || !(v >= 0.0)) return "value " + s + " must be auto or nonnegative";
  return {};
}, "auto|>=0");

void add_grid_flags(CLI::App* app, Flags& f) {
  app->add_option("--h", f.h, "grid step")->check(kUnitInterval);
  app->add_option("--dt", f.dt, "time step, 0 means dt = h")->check(CLI::NonNegativeNumber);
  app->add_option("--T", f.T, "horizon")->check(CLI::PositiveNumber);
  app->add_option("--config", f.config, "sectioned key-value config file")->check(CLI::ExistingFile);
  app->add_option("--set", f.sets, "override one key, section.key=value");
}

void add_audit_flags(CLI::App* app, Flags& f) {
  app->add_option("--beta", f.beta, "time rescaling exponent")->check(CLI::Range(1.0, 2.0));
  app->add_option("--alpha", f.alpha, "power exponent or auto")->check(kAlpha);
  app->add_option("--theta", f.theta, "concavity exponent of the weight for the theta bounds")
      ->check(CLI::Range(1.0, 1e300));
  app->add_option("--rho", f.rho, "inner margin for weight statistics, auto or a value")->check(kRho);
}

void add_output_flags(CLI::App* app, Flags& f) {
  app->add_option("--out", f.out, "report directory");
  app->add_option("--format", f.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--seed", f.seed, "random seed");
  app->add_flag("-v,--verbose", f.verbose, "more detail on stdout");
  app->add_flag("-q,--quiet", f.quiet, "no summary on stdout");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_flags(Config& cfg, const Flags& f) {
  for (const std::string& s : f.sets) {
    const auto eq = s.find('='), dot = s.find('.');
    require(eq != std::string::npos && dot != std::string::npos && dot < eq, ErrorCode::invalid_argument,
            "--set expects section.key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
  }
  if (f.dt) apply_setting(cfg, "grid", "dt", fmt(*f.dt));
  if (f.T) apply_setting(cfg, "grid", "T", fmt(*f.T));
  if (f.beta) apply_setting(cfg, "audit", "beta", fmt(*f.beta));
  if (f.alpha) apply_setting(cfg, "audit", "alpha", *f.alpha);
  if (f.theta) apply_setting(cfg, "scenario", "theta", fmt(*f.theta));
  if (f.rho) apply_setting(cfg, "scenario", "rho", *f.rho);
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.format) apply_setting(cfg, "output", "format", *f.format);
  if (f.quiet) cfg.verbosity = 0;
  else cfg.verbosity += f.verbose;
  validate_config(cfg);
}

Config build_config(const Flags& f) {
  require(!(f.config && f.scenario), ErrorCode::invalid_argument,
          "--scenario and --config are exclusive; set [scenario] id inside the config");
  Config cfg;
  if (f.config) {
    cfg = load_config(*f.config, f.h);
  } else if (f.scenario) {
    cfg.scenario = make_scenario(*f.scenario, f.h.value_or(1.0 / 64));
    cfg.alpha_auto = cfg.scenario.audit.alpha_rule.has_value();
  } else {
    cfg.scenario.id = "custom";
    if (f.h) cfg.scenario.grid.h = *f.h;
  }
  apply_flags(cfg, f);
  return cfg;
}

double effective_dt(const Scenario& s) { return s.grid.dt > 0.0 ? s.grid.dt : s.grid.h; }

TransformSpec audit_transform(const Config& cfg) {
  const Scenario& s = cfg.scenario;
  TransformSpec spec{s.audit.transform, s.audit.alpha, s.audit.beta};
  if (s.audit.transform == Transform::power && cfg.alpha_auto && s.audit.alpha_rule)
    spec.alpha = scenario_alpha(s, check_hypotheses(s.problem, s.M, s.grid.T));
  if (s.audit.transform == Transform::log) spec.alpha = 0.0;
  return spec;
}

struct Emitter {
  const Config& cfg;
  std::ostream& out;

  void operator()(const Json& j, const std::string& stem, const std::string& summary) const {
    write_report(j, cfg.out, stem, cfg.format);
    write_text(summary, cfg.out / (stem + ".txt"));
    if (cfg.verbosity > 0) out << summary;
  }
};

bool is_binary(const std::string& path) {
  const std::string ext = fs::path(path).extension().string();
  return ext == ".bin" || ext == ".cvlf";
}

std::string dump_field(const Field& f, const fs::path& dir, const std::string& stem, const std::string& kind) {
  if (kind == "none") return {};
  const fs::path p = dir / (stem + (kind == "binary" ? ".bin" : ".csv"));
  if (kind == "binary") write_field_binary(f, p);
  else write_field_csv(f, p);
  return p.lexically_relative(dir).generic_string();
}

double grid_step_for(const Config& cfg, const Flags& f, const std::vector<std::string>& paths) {
  if (f.h || f.config) return cfg.scenario.grid.h;
  for (const auto& p : paths)
    if (is_binary(p)) return read_binary_header(p).h;
  return cfg.scenario.grid.h;
}

Field load_field(DomainPtr dom, const std::string& path, std::optional<double> time) {
  if (is_binary(path)) {
    Field f = read_field_binary(dom, path);
    if (time) f.time = *time;
    return f;
  }
  return read_field_csv(dom, path, time.value_or(0.0));
}

int run_solve(const Flags& f, const FieldArgs& a, std::ostream& out) {
  const Config cfg = build_config(f);
  const Scenario& s = cfg.scenario;
  const double dt = effective_dt(s);
  DomainPtr dom = build_discretization(s.problem.domain, s.grid.h);
  const double t0 = needs_seed(s.problem) ? default_seed_time(dt, s.grid.T) : 0.0;
  const TimeGrid grid = TimeGrid::rescaled(t0, s.grid.T, s.audit.beta, dt, s.grid.substeps);
  const Trajectory traj = solve_trajectory(s.problem, dom, grid);

  Json snaps = Json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const Field& u = traj.snapshots[i];
    char stem[32];
    std::snprintf(stem, sizeof stem, "u_%04zu", i);
    snaps.push_back({{"index", i}, {"time", number(u.time)}, {"sup", number(u.max())},
                     {"file", dump_field(u, cfg.out / "fields", stem, a.dump)}});
  }
  Json j = {{"command", "solve"},
            {"scenario", s.id},
            {"domain", s.problem.domain.describe()},
            {"grid", {{"h", number(s.grid.h)}, {"dt", number(dt)}, {"T", number(s.grid.T)},
                      {"nodes", dom->interior_count()}}},
            {"seeded", traj.seeded},
            {"monotone", traj.monotone_nondecreasing},
            {"tau_mono", number(traj.tau_mono)},
            {"steps", traj.steps},
            {"cg_iterations", traj.cg_iterations},
            {"snapshots", snaps}};
  std::ostringstream sum;
  sum << "solve " << s.id << ": " << traj.snapshots.size() << " snapshots, " << traj.steps << " steps, sup u(T) = "
      << traj.snapshots.back().max() << (traj.seeded ? ", seeded" : "")
      << (traj.monotone_nondecreasing ? ", monotone" : "") << "\n";
  Emitter{cfg, out}(j, "solve", sum.str());
  return 0;
}

int run_stationary(const Flags& f, const FieldArgs& a, std::ostream& out) {
  const Config cfg = build_config(f);
  const Scenario& s = cfg.scenario;
  DomainPtr dom = build_discretization(s.problem.domain, s.grid.h);
  const StationaryResult r = solve_stationary(s.problem, dom);
  Json j = {{"command", "stationary"},
            {"scenario", s.id},
            {"domain", s.problem.domain.describe()},
            {"h", number(s.grid.h)},
            {"iterations", r.iterations},
            {"change", number(r.change)},
            {"residual", number(r.residual)},
            {"sup", number(r.v.max())},
            {"warnings", r.warnings},
            {"file", dump_field(r.v, cfg.out / "fields", "stationary", a.dump)}};
  std::ostringstream sum;
  sum << "stationary " << s.id << ": sup v = " << r.v.max() << ", residual " << r.residual << ", " << r.iterations
      << " iterations\n";
  for (const auto& w : r.warnings) sum << "  warning: " << w << "\n";
  Emitter{cfg, out}(j, "stationary", sum.str());
  return 0;
}

int run_audit(const Flags& f, const FieldArgs& a, std::ostream& out) {
  require(!a.fields.empty(), ErrorCode::invalid_argument, "--field is required");
  require(a.times.empty() || a.times.size() == a.fields.size(), ErrorCode::invalid_argument,
          "--time needs one value per --field");
  Config cfg = build_config(f);
  cfg.scenario.grid.h = grid_step_for(cfg, f, a.fields);
  const Scenario& s = cfg.scenario;
  DomainPtr dom = build_discretization(s.problem.domain, s.grid.h);

  std::vector<Field> fields;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    std::optional<double> t;
    if (!a.times.empty()) t = a.times[i];
    fields.push_back(load_field(dom, a.fields[i], t));
  }
  const TransformSpec spec = audit_transform(cfg);
  AuditMode mode = s.audit.mode;

  std::optional<AuditField> field;
  std::optional<Field> stationary;
  if (a.stationary) stationary = load_field(dom, *a.stationary, std::nullopt);
  if (fields.size() == 1 && !stationary) {
    if (mode == AuditMode::spacetime) mode = AuditMode::space;
    field.emplace(fields.front(), spec);
  } else {
    require(fields.size() >= 2 || stationary, ErrorCode::invalid_argument,
            "a spacetime audit needs two or more fields");
    std::stable_sort(fields.begin(), fields.end(), [](const Field& x, const Field& y) { return x.time < y.time; });
    for (std::size_t i = 1; i < fields.size(); ++i)
      require(fields[i].time > fields[i - 1].time, ErrorCode::invalid_argument,
              "field times must be distinct; pass --time for CSV dumps");
    Trajectory traj;
    traj.domain = dom;
    traj.h = s.grid.h;
    traj.tau_mono = 10.0 * s.grid.h * s.grid.h;
    traj.snapshots = fields;
    for (std::size_t i = 1; i < fields.size(); ++i)
      for (std::size_t k = 0; k < dom->interior_count(); ++k)
        if (fields[i].values[k] - fields[i - 1].values[k] < -traj.tau_mono) traj.monotone_nondecreasing = false;
    field.emplace(traj, stationary ? &*stationary : nullptr, spec);
  }
  SamplerConfig sampler = s.sampler;
  sampler.use_infinity = stationary.has_value();
  const DefectReport rep = min_defect(*field, mode, sampler);

  Json files = Json::array();
  for (const auto& p : a.fields) files.push_back(fs::path(p).filename().generic_string());
  Json j = {{"command", "audit"},
            {"domain", s.problem.domain.describe()},
            {"h", number(s.grid.h)},
            {"fields", files},
            {"transform",
             {{"kind", spec.kind == Transform::log ? "log" : "power"}, {"alpha", number(spec.alpha)},
              {"beta", number(spec.beta)}}},
            {"monotone", field->monotone()},
            {"report", to_json(rep)}};
  std::ostringstream sum;
  sum << "audit " << to_string(rep.mode) << " over " << a.fields.size() << " field(s): min " << rep.min << ", tau "
      << rep.tau_audit << (rep.passes() ? ", within tolerance" : ", below tolerance") << "\n";
  Emitter{cfg, out}(j, "audit", sum.str());
  return 0;
}

std::pair<std::vector<double>, std::vector<double>> read_section(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), ErrorCode::io_error, "cannot read " + path);
  std::vector<double> x, v;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    require(static_cast<bool>(ls >> a >> b), ErrorCode::io_error, path + ": malformed row '" + line + "'");
    x.push_back(a);
    v.push_back(b);
  }
  return {x, v};
}

Json certificate_summary(const HyersUlamCertificate& c, std::ostringstream& sum) {
  sum << "  delta " << c.delta << ", k_n " << c.k_n << ", distance " << c.distance << ", bound "
      << c.k_n * c.delta << (c.holds ? " (holds)" : " (violated)") << "\n";
  return to_json(c);
}

int run_envelope(const Flags& f, const FieldArgs& a, std::ostream& out) {
  require(a.fields.size() == 1 || (a.fields.empty() && a.section), ErrorCode::invalid_argument,
          "envelope takes one --field or one --section");
  Config cfg = build_config(f);
  std::ostringstream sum;
  Json j = {{"command", "envelope"}};
  bool holds = true;
  if (a.section) {
    auto [x, v] = read_section(*a.section);
    const Envelope1D env = concave_approximation(x, v);
    Json g = Json::array();
    for (double y : env.g) g.push_back(number(y));
    sum << "envelope of section " << fs::path(*a.section).filename().string() << "\n";
    j["section"] = fs::path(*a.section).filename().generic_string();
    j["certificate"] = certificate_summary(env.certificate, sum);
    j["hull"] = env.hull;
    j["g"] = g;
    holds = env.certificate.holds;
  } else {
    cfg.scenario.grid.h = grid_step_for(cfg, f, a.fields);
    DomainPtr dom = build_discretization(cfg.scenario.problem.domain, cfg.scenario.grid.h);
    const Field u = load_field(dom, a.fields.front(), std::nullopt);
    const Envelope2D env = concave_approximation(u);
    sum << "envelope of " << fs::path(a.fields.front()).filename().string() << ", " << env.faces.size()
        << " faces\n";
    j["field"] = fs::path(a.fields.front()).filename().generic_string();
    j["faces"] = env.faces.size();
    j["shift"] = number(env.shift);
    j["certificate"] = certificate_summary(env.certificate, sum);
    j["file"] = dump_field(env.g, cfg.out / "fields", "envelope", a.dump);
    holds = env.certificate.holds;
  }
  Emitter{cfg, out}(j, "envelope", sum.str());
  return holds ? 0 : 1;
}

int run_verify(const Flags& f, std::ostream& out) {
  require(f.scenario || f.config, ErrorCode::invalid_argument, "verify needs --scenario or --config");
  const Config cfg = build_config(f);
  const ScenarioReport r = run_scenario(cfg.scenario);
  std::string text = summary_text(r);
  if (cfg.verbosity < 2) text = text.substr(0, text.find('\n') + 1);
  write_report(to_json(r), cfg.out, r.id, cfg.format);
  write_text(summary_text(r), cfg.out / (r.id + ".txt"));
  if (cfg.verbosity > 0) out << text;
  return r.verdict == Verdict::fail ? 1 : 0;
}

int run_suite(const Flags& f, const std::vector<std::string>& ids, bool all, unsigned jobs, std::ostream& out) {
  require(all || !ids.empty(), ErrorCode::invalid_argument, "suite needs --all or one or more --scenario");
  require(!f.config, ErrorCode::invalid_argument, "--config is not accepted by suite; use verify");
  Flags base = f;
  std::vector<std::string> list = all ? scenario_ids() : ids;
  std::vector<Scenario> scenarios;
  Config cfg;
  for (const auto& id : list) {
    base.scenario = id;
    cfg = build_config(base);
    scenarios.push_back(cfg.scenario);
  }
  const std::vector<ScenarioReport> reports = run_scenarios(scenarios, jobs);
  std::ostringstream sum;
  for (const auto& r : reports) {
    write_report(to_json(r), cfg.out, r.id, cfg.format);
    write_text(summary_text(r), cfg.out / (r.id + ".txt"));
    const std::string text = summary_text(r);
    sum << (cfg.verbosity >= 2 ? text : text.substr(0, text.find('\n') + 1));
  }
  const Json summary = suite_summary(reports);
  sum << "suite: " << summary["pass"].get<int>() << " pass, " << summary["fail"].get<int>() << " fail, "
      << summary["not_applicable"].get<int>() << " not applicable\n";
  Emitter{cfg, out}(summary, "suite", sum.str());
  return summary["exit_code"].get<int>();
}

int run_props(const Flags& f, long draws, std::ostream& out) {
  const Config cfg = build_config(f);
  const PropertySuiteReport r = run_property_suite(cfg.seed, draws);
  Emitter{cfg, out}(to_json(r), "props", summary_text(r));
  return r.passed() ? 0 : 1;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concavity verification for semilinear heat equations on convex planar domains", "concavlab"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  std::vector<std::string> ids;
  bool all = false;
  unsigned jobs = 0;
  long draws = 10000;

  auto* solve = app.add_subcommand("solve", "integrate a problem and dump snapshots");
  auto* stationary = app.add_subcommand("stationary", "solve the stationary problem");
  auto* audit = app.add_subcommand("audit", "concavity defect of dumped fields");
  auto* envelope = app.add_subcommand("envelope", "concave approximation of a field or 1-D section");
  auto* verify = app.add_subcommand("verify", "run one scenario");
  auto* suite = app.add_subcommand("suite", "run several scenarios");
  auto* props = app.add_subcommand("props", "randomized inequality checks");
  auto* list = app.add_subcommand("list", "list built-in scenarios");
  auto* reference = app.add_subcommand("config-reference", "print every config key");

  std::map<const CLI::App*, Flags> flags;
  std::map<const CLI::App*, FieldArgs> fargs;
  for (auto* c : {solve, stationary, audit, envelope, verify, suite, props}) add_output_flags(c, flags[c]);
  for (auto* c : {solve, stationary, audit, envelope, verify, suite}) add_grid_flags(c, flags[c]);
  for (auto* c : {solve, audit, verify, suite}) add_audit_flags(c, flags[c]);
  for (auto* c : {solve, stationary, audit, envelope, verify})
    c->add_option("--scenario", flags[c].scenario, "built-in scenario id");
  for (auto* c : {solve, stationary, envelope})
    c->add_option("--dump", fargs[c].dump, "field dump format")->check(CLI::IsMember({"csv", "binary", "none"}));
  for (auto* c : {audit, envelope}) c->add_option("--field", fargs[c].fields, "field dump (.csv or .bin)");
  audit->add_option("--time", fargs[audit].times, "time of each --field");
  audit->add_option("--stationary", fargs[audit].stationary, "stationary field for the infinity slice");
  envelope->add_option("--section", fargs[envelope].section, "1-D section as x,value rows");
  suite->add_option("--scenario", ids, "scenario id, repeatable");
  suite->add_flag("--all", all, "every built-in scenario");
  suite->add_option("--jobs", jobs, "worker threads, 0 picks the hardware count");
  props->add_option("--draws", draws, "draws per check")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*solve) return run_solve(flags[solve], fargs[solve], out);
    if (*stationary) return run_stationary(flags[stationary], fargs[stationary], out);
    if (*audit) return run_audit(flags[audit], fargs[audit], out);
    if (*envelope) return run_envelope(flags[envelope], fargs[envelope], out);
    if (*verify) return run_verify(flags[verify], out);
    if (*suite) return run_suite(flags[suite], ids, all, jobs, out);
    if (*props) return run_props(flags[props], draws, out);
    if (*list) {
      for (const auto& id : scenario_ids()) out << id << "  " << make_scenario(id).title << "\n";
      return 0;
    }
    if (*reference) {
      out << config_reference();
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace cvlab::cli
