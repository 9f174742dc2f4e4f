#include "concavlab/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "concavlab/errors.hpp"

namespace cvlab {

namespace {

using Setter = std::function<void(Config&, const std::string&)>;

struct KeyDef {
  const char* section;
  const char* key;
  const char* fallback;
  const char* doc;
  Setter set;
};

[[noreturn]] void bad(const std::string& name, const std::string& value, const std::string& why) {
  fail(ErrorCode::invalid_argument, name + ": invalid value '" + value + "' (" + why + ")");
}

double to_double(const std::string& name, const std::string& v) {
  double out = 0.0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  if (v == "inf") return kInf;
  auto r = std::from_chars(b, e, out);
  if (r.ec != std::errc() || r.ptr != e) bad(name, v, "expected a number");
  return out;
}

long to_long(const std::string& name, const std::string& v) {
  long out = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(name, v, "expected an integer");
  return out;
}

bool to_bool(const std::string& name, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  bad(name, v, "expected true or false");
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(v);
  while (std::getline(is, cur, sep)) {
    auto a = cur.find_first_not_of(" \t"), b = cur.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
  }
  return out;
}

template <class F>
auto parse_enum(const std::string& name, const std::string& v, F f) {
  try {
    return f(v);
  } catch (const Error& e) {
    bad(name, v, e.what());
  }
}

InitialKind initial_kind(const std::string& v) {
  if (v == "zero") return InitialKind::zero;
  if (v == "subsolution_seed") return InitialKind::subsolution_seed;
  if (v == "principal_eigenfunction") return InitialKind::principal_eigenfunction;
  fail(ErrorCode::invalid_argument, "expected zero, subsolution_seed or principal_eigenfunction");
}

AuditMode audit_mode(const std::string& v) {
  if (v == "space") return AuditMode::space;
  if (v == "spacetime") return AuditMode::spacetime;
  if (v == "harmonic") return AuditMode::harmonic;
  fail(ErrorCode::invalid_argument, "expected space, spacetime or harmonic");
}

AlphaVariant alpha_variant(const std::string& v) {
  if (v == "lane_emden") return AlphaVariant::lane_emden;
  if (v == "constant_weight") return AlphaVariant::constant_weight;
  if (v == "torsion") return AlphaVariant::torsion;
  fail(ErrorCode::invalid_argument, "expected lane_emden, constant_weight or torsion");
}

LogBound log_bound(const std::string& v) {
  if (v == "none") return LogBound::none;
  if (v == "eigen") return LogBound::eigen;
  if (v == "product_osc") return LogBound::product_osc;
  fail(ErrorCode::invalid_argument, "expected none, eigen or product_osc");
}

#define NUM(field) [](Config& c, const std::string& v) { c.field = to_double(std::string(#field), v); }
#define FLAG(field) [](Config& c, const std::string& v) { c.field = to_bool(std::string(#field), v); }

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"scenario", "id", "", "built-in scenario the other keys override", nullptr},
      {"scenario", "exact", "false", "assert defect >= -tau_audit", FLAG(scenario.exact)},
      {"scenario", "per_time", "false", "assert the exact check at every snapshot", FLAG(scenario.per_time)},
      {"scenario", "log_bound", "none", "none | eigen | product_osc",
       [](Config& c, const std::string& v) { c.scenario.log_bound = parse_enum("scenario.log_bound", v, log_bound); }},
      {"scenario", "quantitative", "", "comma list of oscillation, rough, theta, elliptic_theta, directional",
       [](Config& c, const std::string& v) {
         c.scenario.quantitative.clear();
         for (auto& m : split(v, ','))
           c.scenario.quantitative.push_back(
               parse_enum("scenario.quantitative", m, [](const std::string& s) { return quant_mode_from_string(s); }));
       }},
      {"scenario", "theta", "1", "concavity exponent of the weight used by the theta bounds", NUM(scenario.quant_theta)},
      {"scenario", "rho", "auto", "inner margin for weight statistics, auto picks it from the argmin",
       [](Config& c, const std::string& v) {
         if (v == "auto") c.scenario.rho.reset();
         else c.scenario.rho = to_double("scenario.rho", v);
       }},
      {"scenario", "M", "1", "state bound used by the hypothesis checks", NUM(scenario.M)},
      {"scenario", "required", "", "comma list of hypothesis flags that must hold (h1, h1_star, h1_prime, h2, h2_star, h3)",
       [](Config& c, const std::string& v) { c.scenario.required = split(v, ','); }},
      {"scenario", "check_monotone", "false", "assert the monotone flag", FLAG(scenario.check_monotone)},
      {"scenario", "check_comparison", "false", "run the half-seed comparison sub-run", FLAG(scenario.check_comparison)},
      {"scenario", "check_boundary", "false", "check the eigenfunction barrier", FLAG(scenario.check_boundary)},
      {"scenario", "check_hopf", "false", "check inward quotients at boundary-adjacent nodes", FLAG(scenario.check_hopf)},
      {"scenario", "check_quasiconcavity", "false", "check superlevel-set convexity", FLAG(scenario.check_quasiconcavity)},

      {"domain", "kind", "unit_square", "unit_square | rectangle | disk | ellipse | convex_polygon",
       [](Config& c, const std::string& v) {
         c.scenario.problem.domain.kind =
             parse_enum("domain.kind", v, [](const std::string& s) { return domain_kind_from_string(s); });
       }},
      {"domain", "width", "1", "rectangle width", NUM(scenario.problem.domain.width)},
      {"domain", "height", "1", "rectangle height", NUM(scenario.problem.domain.height)},
      {"domain", "radius", "1", "disk radius", NUM(scenario.problem.domain.radius)},
      {"domain", "semi_x", "1", "ellipse semi-axis along x", NUM(scenario.problem.domain.semi_x)},
      {"domain", "semi_y", "1", "ellipse semi-axis along y", NUM(scenario.problem.domain.semi_y)},
      {"domain", "vertices", "", "polygon vertices 'x y; x y; ...' counterclockwise",
       [](Config& c, const std::string& v) {
         c.scenario.problem.domain.vertices.clear();
         for (auto& pair : split(v, ';')) {
           auto xy = split(pair, ' ');
           if (xy.size() != 2) bad("domain.vertices", v, "expected 'x y' pairs");
           c.scenario.problem.domain.vertices.push_back(
               {to_double("domain.vertices", xy[0]), to_double("domain.vertices", xy[1])});
         }
       }},

      {"weight", "kind", "constant", "constant | separable_power_time | distance_power | ramp_bump | smoothed_bang_bang",
       [](Config& c, const std::string& v) {
         c.scenario.problem.weight.kind =
             parse_enum("weight.kind", v, [](const std::string& s) { return weight_kind_from_string(s); });
       }},
      {"weight", "value", "1", "level or coefficient", NUM(scenario.problem.weight.value)},
      {"weight", "gamma", "0", "time exponent", NUM(scenario.problem.weight.gamma)},
      {"weight", "omega", "0", "distance exponent", NUM(scenario.problem.weight.omega)},
      {"weight", "epsilon", "0", "ramp-bump amplitude", NUM(scenario.problem.weight.epsilon)},
      {"weight", "bump_width", "0", "ramp-bump width, 0 picks a quarter of the inradius",
       NUM(scenario.problem.weight.bump_width)},
      {"weight", "a1", "1", "bang-bang level inside the region", NUM(scenario.problem.weight.a1)},
      {"weight", "a2", "1", "bang-bang level outside is -a2", NUM(scenario.problem.weight.a2)},
      {"weight", "region_radius", "0", "bang-bang region radius, 0 picks half the inradius",
       NUM(scenario.problem.weight.region_radius)},
      {"weight", "eta", "0", "bang-bang mollification width, 0 picks 0.05 inradius", NUM(scenario.problem.weight.eta)},
      {"weight", "theta", "inf", "claimed concavity exponent of the spatial weight", NUM(scenario.problem.weight.theta)},

      {"source", "kind", "one",
       "one | power_q | identity | log_s | log1p_q | saturable_q | saturable | logistic | one_minus_s_p | power_sum",
       [](Config& c, const std::string& v) {
         c.scenario.problem.source.kind =
             parse_enum("source.kind", v, [](const std::string& s) { return source_kind_from_string(s); });
       }},
      {"source", "q", "0", "exponent q", NUM(scenario.problem.source.q)},
      {"source", "p", "0", "exponent p", NUM(scenario.problem.source.p)},

      {"initial", "kind", "zero", "zero | subsolution_seed | principal_eigenfunction",
       [](Config& c, const std::string& v) {
         c.scenario.problem.u0.kind = parse_enum("initial.kind", v, initial_kind);
       }},
      {"initial", "amplitude", "1", "scale of the eigenfunction start", NUM(scenario.problem.u0.amplitude)},

      {"grid", "h", "0.015625", "grid step", NUM(scenario.grid.h)},
      {"grid", "dt", "0", "time step, 0 means dt = h", NUM(scenario.grid.dt)},
      {"grid", "T", "2", "horizon", NUM(scenario.grid.T)},
      {"grid", "substeps", "4", "backward Euler steps per snapshot",
       [](Config& c, const std::string& v) { c.scenario.grid.substeps = static_cast<int>(to_long("grid.substeps", v)); }},
      {"grid", "truncation", "inf", "time after which the source is frozen", NUM(scenario.problem.truncation)},

      {"audit", "mode", "space", "space | spacetime | harmonic",
       [](Config& c, const std::string& v) { c.scenario.audit.mode = parse_enum("audit.mode", v, audit_mode); }},
      {"audit", "transform", "log", "log | power",
       [](Config& c, const std::string& v) {
         if (v == "log") c.scenario.audit.transform = Transform::log;
         else if (v == "power") c.scenario.audit.transform = Transform::power;
         else bad("audit.transform", v, "expected log or power");
       }},
      {"audit", "alpha", "1", "power exponent, or auto for the closed form of audit.variant",
       [](Config& c, const std::string& v) {
         if (v == "auto") {
           c.alpha_auto = true;
           if (!c.scenario.audit.alpha_rule) c.scenario.audit.alpha_rule = AlphaVariant::lane_emden;
         } else {
           c.alpha_auto = false;
           c.scenario.audit.alpha_rule.reset();
           c.scenario.audit.alpha = to_double("audit.alpha", v);
         }
       }},
      {"audit", "variant", "lane_emden", "lane_emden | constant_weight | torsion",
       [](Config& c, const std::string& v) {
         AlphaVariant a = parse_enum("audit.variant", v, alpha_variant);
         if (c.alpha_auto) c.scenario.audit.alpha_rule = a;
       }},
      {"audit", "beta", "1", "time rescaling exponent", NUM(scenario.audit.beta)},
      {"audit", "infinity", "false", "include the stationary slice", FLAG(scenario.audit.use_infinity)},
      {"audit", "max_nodes", "256", "audit nodes per slice",
       [](Config& c, const std::string& v) {
         c.scenario.sampler.max_nodes = static_cast<std::size_t>(to_long("audit.max_nodes", v));
       }},
      {"audit", "lambda_divisions", "16", "lambda grid divisions",
       [](Config& c, const std::string& v) {
         c.scenario.sampler.lambda_divisions = static_cast<int>(to_long("audit.lambda_divisions", v));
       }},
      {"audit", "max_times", "12", "slices used by spacetime audits",
       [](Config& c, const std::string& v) {
         c.scenario.sampler.max_times = static_cast<std::size_t>(to_long("audit.max_times", v));
       }},
      {"audit", "c_tol", "10", "tolerance constant in tau = c_tol h^2 K", NUM(scenario.sampler.c_tol)},
      {"audit", "margin", "-1", "audit region depth, negative means one grid step", NUM(scenario.sampler.margin)},
      {"audit", "curvature_margin", "-1", "curvature region depth, negative means a quarter inradius",
       NUM(scenario.sampler.curvature_margin)},

      {"output", "dir", "out", "report directory", [](Config& c, const std::string& v) { c.out = v; }},
      {"output", "format", "json", "json | csv",
       [](Config& c, const std::string& v) {
         if (v == "json") c.format = ReportFormat::json;
         else if (v == "csv") c.format = ReportFormat::csv;
         else bad("output.format", v, "expected json or csv");
       }},
      {"output", "verbosity", "1", "0 quiet, 1 summary, 2 detail",
       [](Config& c, const std::string& v) { c.verbosity = static_cast<int>(to_long("output.verbosity", v)); }},
      {"output", "seed", "1", "random seed",
       [](Config& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_long("output.seed", v)); }},
  };
  return table;
}

#undef NUM
#undef FLAG

const KeyDef& lookup(std::string_view section, std::string_view key) {
  for (const KeyDef& d : key_table())
    if (section == d.section && key == d.key) return d;
  fail(ErrorCode::invalid_argument, "unknown config key '" + std::string(section) + "." + std::string(key) + "'");
}

}  // namespace

void apply_setting(Config& cfg, std::string_view section, std::string_view key, std::string_view value) {
  const KeyDef& d = lookup(section, key);
  require(static_cast<bool>(d.set), ErrorCode::invalid_argument,
          std::string(section) + "." + std::string(key) + " can only be given in a config file");
  d.set(cfg, std::string(value));
}

Config parse_config(std::string_view text, std::optional<double> h_override) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is{std::string(text)};
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::invalid_argument, std::string("config: ") + e.what());
  }
  for (const auto& [name, sec] : tree)
    require(!sec.empty() || sec.data().empty(), ErrorCode::invalid_argument,
            "config key '" + name + "' must sit inside a section");

  Config cfg;
  const auto id = tree.get_optional<std::string>("scenario.id");
  double h = cfg.scenario.grid.h;
  if (auto hv = tree.get_optional<std::string>("grid.h")) h = to_double("grid.h", *hv);
  if (h_override) h = *h_override;
  require(h > 0.0 && h < 1.0, ErrorCode::invalid_argument, "grid.h must lie in (0, 1)");
  if (id) {
    cfg.scenario = make_scenario(*id, h);
    cfg.alpha_auto = cfg.scenario.audit.alpha_rule.has_value();
  }
  for (const auto& [section, sec] : tree)
    for (const auto& [key, val] : sec) {
      if (section == "scenario" && key == "id") continue;
      if (section == "grid" && key == "h" && h_override) continue;
      apply_setting(cfg, section, key, val.data());
    }
  cfg.scenario.grid.h = h;
  if (!id && cfg.scenario.id.empty()) cfg.scenario.id = "custom";
  cfg.scenario.problem.label = cfg.scenario.id;
  validate_config(cfg);
  return cfg;
}

Config load_config(const std::filesystem::path& path, std::optional<double> h) {
  std::ifstream is(path);
  require(is.good(), ErrorCode::io_error, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  Config cfg = parse_config(ss.str(), h);
  if (cfg.scenario.id == "custom") cfg.scenario.id = cfg.scenario.problem.label = path.stem().string();
  return cfg;
}

void validate_config(const Config& cfg) {
  const Scenario& s = cfg.scenario;
  require(s.grid.h > 0.0 && s.grid.h < 1.0, ErrorCode::invalid_argument, "grid.h must lie in (0, 1)");
  require(s.grid.dt >= 0.0, ErrorCode::invalid_argument, "grid.dt must be nonnegative");
  require(s.grid.T > 0.0, ErrorCode::invalid_argument, "grid.T must be positive");
  require(s.grid.substeps >= 1, ErrorCode::invalid_argument, "grid.substeps must be at least 1");
  require(s.audit.beta >= 1.0 && s.audit.beta <= 2.0, ErrorCode::invalid_argument, "audit.beta must lie in [1, 2]");
  if (s.audit.transform == Transform::power && !s.audit.alpha_rule)
    require(s.audit.alpha > 0.0 && s.audit.alpha <= 1.0, ErrorCode::invalid_argument, "audit.alpha must lie in (0, 1]");
  require(s.sampler.max_nodes >= 1, ErrorCode::invalid_argument, "audit.max_nodes must be at least 1");
  require(s.sampler.lambda_divisions >= 2, ErrorCode::invalid_argument, "audit.lambda_divisions must be at least 2");
  require(s.sampler.c_tol >= 0.0, ErrorCode::invalid_argument, "audit.c_tol must be nonnegative");
  require(s.quant_theta >= 1.0, ErrorCode::invalid_argument, "scenario.theta must be at least 1");
  require(s.M > 0.0, ErrorCode::invalid_argument, "scenario.M must be positive");
  if (s.rho) require(*s.rho >= 0.0, ErrorCode::invalid_argument, "scenario.rho must be nonnegative");
  require(cfg.verbosity >= 0, ErrorCode::invalid_argument, "output.verbosity must be nonnegative");
  s.problem.domain.validate();
  s.problem.validate();
}

std::string config_reference() {
  std::ostringstream os;
  os << "# Config keys. Each section is written [name] followed by key = value lines.\n";
  std::string current;
  for (const KeyDef& d : key_table()) {
    if (current != d.section) {
      current = d.section;
      os << "\n[" << current << "]\n";
    }
    os << d.key << " = " << d.fallback << "\t; " << d.doc << "\n";
  }
  return os.str();
}

}  // namespace cvlab
