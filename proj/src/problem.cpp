#include "concavlab/problem.hpp"

#include <algorithm>
#include <cmath>

#include "concavlab/errors.hpp"

namespace cvlab {

double spow(double s, double q) {
  if (q == 0.0) return 1.0;
  if (s == 0.0) return 0.0;
  return std::pow(s, q);
}

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::constant: return "constant";
    case WeightKind::separable_power_time: return "separable_power_time";
    case WeightKind::distance_power: return "distance_power";
    case WeightKind::ramp_bump: return "ramp_bump";
    case WeightKind::smoothed_bang_bang: return "smoothed_bang_bang";
  }
  return "unknown";
}

WeightKind weight_kind_from_string(std::string_view name) {
  for (auto k : {WeightKind::constant, WeightKind::separable_power_time, WeightKind::distance_power,
                 WeightKind::ramp_bump, WeightKind::smoothed_bang_bang})
    if (to_string(k) == name) return k;
  fail(ErrorCode::invalid_argument, "unknown weight kind '" + std::string(name) + "'");
}

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::one: return "one";
    case SourceKind::power_q: return "power_q";
    case SourceKind::identity: return "identity";
    case SourceKind::log_s: return "log_s";
    case SourceKind::log1p_q: return "log1p_q";
    case SourceKind::saturable_q: return "saturable_q";
    case SourceKind::saturable: return "saturable";
    case SourceKind::logistic: return "logistic";
    case SourceKind::one_minus_s_p: return "one_minus_s_p";
    case SourceKind::power_sum: return "power_sum";
  }
  return "unknown";
}

SourceKind source_kind_from_string(std::string_view name) {
  for (auto k : {SourceKind::one, SourceKind::power_q, SourceKind::identity, SourceKind::log_s, SourceKind::log1p_q,
                 SourceKind::saturable_q, SourceKind::saturable, SourceKind::logistic, SourceKind::one_minus_s_p,
                 SourceKind::power_sum})
    if (to_string(k) == name) return k;
  fail(ErrorCode::invalid_argument, "unknown source kind '" + std::string(name) + "'");
}

std::string_view to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "true";
    case Tri::no: return "false";
    case Tri::undetermined: return "undetermined";
  }
  return "undetermined";
}

double Weight::spatial(const DomainSpec& domain, Point x) const {
  switch (kind) {
    case WeightKind::constant:
    case WeightKind::separable_power_time: return value;
    case WeightKind::distance_power: return value * spow(std::max(0.0, distance_to_boundary(domain, x)), omega);
    case WeightKind::ramp_bump: {
      double sigma = bump_width > 0.0 ? bump_width : 0.25 * domain.inradius();
      Point c = domain.center();
      double r2 = dot(x - c, x - c);
      return value * (1.0 + epsilon * std::exp(-r2 / (2.0 * sigma * sigma)));
    }
    case WeightKind::smoothed_bang_bang: {
      double rb = region_radius > 0.0 ? region_radius : 0.5 * domain.inradius();
      double width = eta > 0.0 ? eta : 0.05 * domain.inradius();
      double s = rb - norm(x - domain.center());
      return -a2 + (a1 + a2) * std::clamp(s / width + 0.5, 0.0, 1.0);
    }
  }
  return 0.0;
}

double Weight::time_factor(double t) const {
  if (!time_dependent()) return 1.0;
  if (std::isinf(t)) return kInf;
  return spow(std::max(t, 0.0), gamma);
}

double Source::f(double s) const {
  switch (kind) {
    case SourceKind::one: return 1.0;
    case SourceKind::power_q: return spow(s, q);
    case SourceKind::identity: return s;
    case SourceKind::log_s: return s > 0.0 ? s * std::log(s) : 0.0;
    case SourceKind::log1p_q: return s * spow(std::log1p(s), q);
    case SourceKind::saturable_q: return spow(s, q + 1.0) / (1.0 + spow(s, q));
    case SourceKind::saturable: return s * s / (1.0 + s);
    case SourceKind::one_minus_s_p: return s < 1.0 ? spow(1.0 - s, p) : 0.0;
    case SourceKind::logistic:
    case SourceKind::power_sum: break;
  }
  fail(ErrorCode::invalid_argument, "composite source has no factor f(s)");
}

double Source::df(double s) const {
  switch (kind) {
    case SourceKind::one: return 0.0;
    case SourceKind::power_q: return q == 0.0 ? 0.0 : q * std::pow(s, q - 1.0);
    case SourceKind::identity: return 1.0;
    case SourceKind::log_s: return std::log(s) + 1.0;
    case SourceKind::log1p_q: {
      double l = std::log1p(s);
      return spow(l, q) + (q == 0.0 ? 0.0 : q * s * std::pow(l, q - 1.0) / (1.0 + s));
    }
    case SourceKind::saturable_q: {
      double sq = spow(s, q);
      return sq * ((q + 1.0) + sq) / ((1.0 + sq) * (1.0 + sq));
    }
    case SourceKind::saturable: return (s * s + 2.0 * s) / ((1.0 + s) * (1.0 + s));
    case SourceKind::one_minus_s_p: return s < 1.0 ? -p * std::pow(1.0 - s, p - 1.0) : 0.0;
    case SourceKind::logistic:
    case SourceKind::power_sum: break;
  }
  fail(ErrorCode::invalid_argument, "composite source has no factor f(s)");
}

bool Source::logarithmic_type() const {
  switch (kind) {
    case SourceKind::identity:
    case SourceKind::log_s:
    case SourceKind::log1p_q:
    case SourceKind::saturable_q:
    case SourceKind::saturable:
    case SourceKind::logistic: return true;
    default: return false;
  }
}

void Problem::validate() const {
  domain.validate();
  auto in = [](double v, double lo, double hi, const char* what) {
    require(v >= lo && v <= hi, ErrorCode::invalid_argument, std::string(what) + " out of range");
  };
  switch (source.kind) {
    case SourceKind::power_q: in(source.q, 0.0, 1.0, "q"); break;
    case SourceKind::log1p_q:
    case SourceKind::saturable_q: in(source.q, 0.0, 1.0, "q"); break;
    case SourceKind::one_minus_s_p: in(source.p, 0.0, 1.0, "p"); break;
    case SourceKind::power_sum:
      in(source.p, 0.0, 1.0, "p");
      in(source.q, 0.0, 1.0, "q");
      break;
    default: break;
  }
  require(weight.gamma >= 0.0, ErrorCode::invalid_argument, "weight gamma must be nonnegative");
  require(weight.omega >= 0.0, ErrorCode::invalid_argument, "weight omega must be nonnegative");
  require(truncation > 0.0, ErrorCode::invalid_argument, "truncation time must be positive");
  require(weight.theta >= 1.0, ErrorCode::invalid_argument, "weight theta must be at least 1");
}

double Problem::effective_time(double t) const { return std::min(t, truncation); }

double eval_source(const Problem& problem, Point x, double s, double t) {
  if (s < 0.0) {
    require(s >= -1e-12, ErrorCode::negative_state, "state value " + std::to_string(s) + " is negative");
    s = 0.0;
  }
  double te = problem.effective_time(t);
  double a = problem.weight.spatial(problem.domain, x);
  double tf = problem.weight.time_factor(te);
  require(std::isfinite(tf), ErrorCode::no_stationary_limit, "time-dependent weight needs a truncation time");
  switch (problem.source.kind) {
    case SourceKind::logistic: return a * tf * s - s * s;
    case SourceKind::power_sum: return a * tf * spow(s, problem.source.p) + spow(s, problem.source.q);
    default: return a * tf * problem.source.f(s);
  }
}

double eval_source_ds(const Problem& problem, Point x, double s, double t) {
  double te = problem.effective_time(t);
  double a = problem.weight.spatial(problem.domain, x) * problem.weight.time_factor(te);
  switch (problem.source.kind) {
    case SourceKind::logistic: return a - 2.0 * s;
    case SourceKind::power_sum: {
      double p = problem.source.p, q = problem.source.q;
      return a * (p == 0.0 ? 0.0 : p * std::pow(s, p - 1.0)) + (q == 0.0 ? 0.0 : q * std::pow(s, q - 1.0));
    }
    default: return a * problem.source.df(s);
  }
}

std::vector<Point> domain_samples(const DomainSpec& domain, int per_axis) {
  std::vector<Point> pts;
  Box box = domain.bounding_box();
  for (int j = 0; j <= per_axis; ++j)
    for (int i = 0; i <= per_axis; ++i) {
      Point p{box.lo.x + (box.hi.x - box.lo.x) * i / per_axis, box.lo.y + (box.hi.y - box.lo.y) * j / per_axis};
      if (distance_to_boundary(domain, p) > 0.0) pts.push_back(p);
    }
  const int nb = 4 * per_axis;
  switch (domain.kind) {
    case DomainKind::disk:
    case DomainKind::ellipse: {
      double a = domain.kind == DomainKind::disk ? domain.radius : domain.semi_x;
      double b = domain.kind == DomainKind::disk ? domain.radius : domain.semi_y;
      for (int m = 0; m < nb; ++m) {
        double phi = 2.0 * M_PI * m / nb;
        pts.push_back({a * std::cos(phi), b * std::sin(phi)});
      }
      break;
    }
    default: {
      std::vector<Point> v = domain.vertices;
      if (domain.kind != DomainKind::convex_polygon) v = {box.lo, {box.hi.x, box.lo.y}, box.hi, {box.lo.x, box.hi.y}};
      for (std::size_t e = 0; e < v.size(); ++e)
        for (int m = 0; m < per_axis; ++m) {
          double s = static_cast<double>(m) / per_axis;
          pts.push_back(v[e] + s * (v[(e + 1) % v.size()] - v[e]));
        }
    }
  }
  return pts;
}

namespace {

std::vector<double> state_samples(double M) {
  std::vector<double> s;
  for (int i = 0; i < 48; ++i) s.push_back(M * std::pow(10.0, -6.0 + 6.0 * i / 47.0));
  return s;
}

std::vector<double> time_samples(double T) {
  std::vector<double> t;
  for (int i = 1; i <= 8; ++i) t.push_back(T * i / 8.0);
  return t;
}

double sup_df(const Source& src, double M) {
  double best = 0.0;
  for (double s : state_samples(M)) best = std::max(best, std::abs(src.df(s)));
  return best;
}

double concavity_defect_of(const DomainSpec& domain, const std::vector<Point>& pts, auto&& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (int l = 1; l < 8; ++l) {
        double lam = l / 8.0;
        Point x2 = pts[i] + lam * (pts[j] - pts[i]);
        double c = g(x2) - lam * g(pts[j]) - (1.0 - lam) * g(pts[i]);
        worst = std::max(worst, -c);
      }
  (void)domain;
  return worst;
}

}  // namespace

HypothesisReport check_hypotheses(const Problem& problem, double M, double T) {
  problem.validate();
  require(M > 0.0 && T > 0.0, ErrorCode::invalid_argument, "M and T must be positive");
  HypothesisReport rep;
  rep.M = M;
  rep.T = T;
  const DomainSpec& dom = problem.domain;
  const Weight& w = problem.weight;
  const Source& src = problem.source;
  const auto pts = domain_samples(dom, 16);
  const auto ss = state_samples(M);
  const auto ts = time_samples(T);

  rep.weight_inf = kInf;
  rep.weight_sup = -kInf;
  for (auto p : pts) {
    double a = w.spatial(dom, p);
    rep.weight_inf = std::min(rep.weight_inf, a);
    rep.weight_sup = std::max(rep.weight_sup, a);
  }
  rep.weight_osc = rep.weight_sup - rep.weight_inf;
  const double a_sup = std::max(0.0, rep.weight_sup) * w.time_factor(problem.effective_time(T));

  auto b = [&](Point x, double s, double t) { return eval_source(problem, x, s, t); };

  // Lower bound b >= k t^gamma s^q.
  auto check_lower = [&](double k, double q, double gamma, bool distance, double omega) {
    long bad = 0;
    for (auto p : pts) {
      double d = distance_to_boundary(dom, p);
      if (distance && d <= 0.0) continue;
      for (double s : ss)
        for (double t : ts) {
          double rhs = k * spow(t, gamma) * (distance ? spow(d, omega) : spow(s, q));
          if (b(p, s, t) < rhs * (1.0 - 1e-12) - 1e-12) ++bad;
        }
    }
    return bad;
  };

  double gamma_w = w.time_dependent() ? w.gamma : 0.0;
  double k = 0.0, q = 0.0, gamma = gamma_w;
  bool h1_catalog = false, h1_all_m = false;
  switch (src.kind) {
    case SourceKind::one:
    case SourceKind::power_q:
      q = src.kind == SourceKind::one ? 0.0 : src.q;
      k = rep.weight_inf;
      h1_catalog = q < 1.0;
      h1_all_m = true;
      break;
    case SourceKind::one_minus_s_p:
      k = rep.weight_inf * (M < 1.0 ? spow(1.0 - M, src.p) : 0.0);
      h1_catalog = M < 1.0;
      if (!h1_catalog) rep.notes.push_back("(1-s)^p vanishes at s = 1, so (H1) needs M < 1");
      break;
    case SourceKind::power_sum:
      k = 1.0;
      q = src.q;
      gamma = 0.0;
      h1_catalog = rep.weight_inf >= 0.0;
      h1_all_m = h1_catalog;
      break;
    default: break;
  }
  rep.k = k;
  rep.q = q;
  rep.gamma = gamma;
  if (h1_catalog && k > 0.0 && gamma <= 1.0) {
    long bad = check_lower(k, q, gamma, false, 0.0);
    rep.h1 = {bad == 0 ? Tri::yes : Tri::no, "catalog", bad};
    rep.h1_star = {h1_all_m && bad == 0 ? Tri::yes : Tri::no, "catalog", 0};
  } else {
    rep.h1 = {Tri::no, h1_catalog ? "weight infimum is not positive" : "catalog", 0};
    rep.h1_star = {Tri::no, "catalog", 0};
  }

  if (src.s_independent()) {
    double kp = 0.0, om = 0.0;
    if (w.kind == WeightKind::distance_power) {
      kp = w.value;
      om = w.omega;
    } else {
      kp = rep.weight_inf;
    }
    if (kp > 0.0 && gamma_w < 1.0) {
      long bad = check_lower(kp, 0.0, gamma_w, true, om);
      rep.h1_prime = {bad == 0 ? Tri::yes : Tri::no, "catalog", bad};
      rep.omega = om;
      if (rep.h1.value != Tri::yes) rep.k = kp;
    } else {
      rep.h1_prime = {Tri::no, "weight does not dominate a distance power", 0};
    }
  } else {
    rep.h1_prime = {Tri::no, "(H1') needs an s-independent source", 0};
  }

  // Nonnegativity shared by (H2) and (H2*).
  long negatives = 0;
  for (auto p : pts)
    for (double s : ss)
      for (double t : ts)
        if (b(p, s, t) < 0.0) ++negatives;

  double L = 0.0, holder = 1.0, L_holder = 0.0;
  bool holder_ok = true;
  switch (src.kind) {
    case SourceKind::one: break;
    case SourceKind::power_q:
      L = a_sup * src.q * spow(M, src.q);
      holder = src.q == 0.0 ? 1.0 : src.q;
      L_holder = a_sup;
      holder_ok = src.q == 0.0 || src.q >= 0.5;
      break;
    case SourceKind::identity:
      L = a_sup * M;
      L_holder = a_sup;
      break;
    case SourceKind::one_minus_s_p: break;
    case SourceKind::power_sum: {
      L = a_sup * src.p * spow(M, src.p) + src.q * spow(M, src.q);
      holder = std::min(src.p, src.q);
      holder_ok = holder >= 0.5;
      L_holder = a_sup * spow(M, src.p - holder) + spow(M, src.q - holder);
      break;
    }
    case SourceKind::saturable:
    case SourceKind::saturable_q:
    case SourceKind::log1p_q:
      L = a_sup * M * sup_df(src, M) * (1.0 + 1e-9);
      L_holder = a_sup * sup_df(src, M) * (1.0 + 1e-9);
      break;
    case SourceKind::log_s:
    case SourceKind::logistic: break;
  }
  rep.L = L;
  rep.holder = holder;
  if (negatives > 0) {
    rep.h2 = {Tri::no, "b takes negative values", negatives};
    rep.h2_star = {Tri::no, "b takes negative values", negatives};
  } else {
    long bad = 0, bad_star = 0;
    for (auto p : pts)
      for (double t : ts)
        for (std::size_t i = 0; i < ss.size(); ++i)
          for (std::size_t j = i; j < ss.size(); ++j) {
            double r = ss[i], s = ss[j];
            double diff = b(p, s, t) - b(p, r, t);
            double tol = 1e-12 * (1.0 + std::abs(b(p, s, t)));
            if (diff > L / r * (s - r) + tol) ++bad;
            if (diff > L_holder * std::pow(s - r, holder) + tol) ++bad_star;
          }
    rep.h2 = {bad == 0 ? Tri::yes : Tri::no, "catalog", bad};
    if (!holder_ok)
      rep.h2_star = {Tri::no, "Hoelder exponent below 1/2", 0};
    else
      rep.h2_star = {bad_star == 0 ? Tri::yes : Tri::no, "catalog", bad_star};
  }

  if (!w.time_dependent()) {
    rep.h3 = {Tri::yes, "catalog", 0};
  } else {
    long bad = 0;
    for (auto p : pts)
      for (double s : ss)
        for (std::size_t i = 0; i + 1 < ts.size(); ++i)
          if (b(p, s, ts[i + 1]) < b(p, s, ts[i]) - 1e-12) ++bad;
    rep.h3 = {bad == 0 ? Tri::yes : Tri::no, "numeric", bad};
  }

  rep.theta = w.theta;
  std::vector<Point> inner;
  for (auto p : domain_samples(dom, 8))
    if (distance_to_boundary(dom, p) > 0.0) inner.push_back(p);
  if (std::isinf(w.theta)) {
    rep.theta_defect = rep.weight_osc;
  } else {
    double th = w.theta;
    rep.theta_defect = concavity_defect_of(dom, inner, [&](Point x) { return spow(std::max(0.0, w.spatial(dom, x)), th); });
  }
  return rep;
}

double sup_slope_lambda(const Source& source) {
  switch (source.kind) {
    case SourceKind::identity: return 0.0;
    case SourceKind::log_s: return 1.0;
    case SourceKind::saturable: return 0.25;
    case SourceKind::saturable_q: return source.q / 4.0;
    case SourceKind::one:
    case SourceKind::power_q:
    case SourceKind::one_minus_s_p:
    case SourceKind::power_sum:
    case SourceKind::logistic: return 0.0;
    case SourceKind::log1p_q: break;
  }
  // s fbar'(s) = f'(s) - f(s)/s, sampled on a wide logarithmic range.
  double best = -kInf;
  int best_i = 0;
  const int n = 4001;
  for (int i = 0; i < n; ++i) {
    double s = std::pow(10.0, -8.0 + 16.0 * i / (n - 1));
    double v = source.df(s) - source.f(s) / s;
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  require(best_i < n - 1, ErrorCode::unbounded, "s fbar'(s) keeps growing at the end of the sampled range");
  return std::max(0.0, best) * 1.01;
}

}  // namespace cvlab
