#include "concavlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "concavlab/errors.hpp"

namespace cvlab {

std::optional<double> harmonic_concavity_value(double g1, double g2, double g3, double lambda) {
  if (g1 == 0.0 && g3 == 0.0) return g2;
  double denom = lambda * g1 + (1.0 - lambda) * g3;
  if (denom > 0.0) return g2 - g1 * g3 / denom;
  return std::nullopt;
}

double concavity_value(const std::function<double(Point, double)>& u, const Tuple& tp) {
  const double lam = tp.lambda;
  Point x2 = tp.x1 + lam * (tp.x3 - tp.x1);
  double t2 = (std::isinf(tp.t1) && std::isinf(tp.t3)) ? tp.t1 : lam * tp.t3 + (1.0 - lam) * tp.t1;
  return concavity_value(u(tp.x1, tp.t1), u(x2, t2), u(tp.x3, tp.t3), lam);
}

double concavity_value(const std::function<double(Point)>& u, Point x1, Point x3, double lambda) {
  return concavity_value(u(x1), u(x1 + lambda * (x3 - x1)), u(x3), lambda);
}

std::optional<double> harmonic_concavity_value(const std::function<double(Point, double)>& g, const Tuple& tp) {
  const double lam = tp.lambda;
  Point x2 = tp.x1 + lam * (tp.x3 - tp.x1);
  double t2 = (std::isinf(tp.t1) && std::isinf(tp.t3)) ? tp.t1 : lam * tp.t3 + (1.0 - lam) * tp.t1;
  return harmonic_concavity_value(g(tp.x1, tp.t1), g(x2, t2), g(tp.x3, tp.t3), lam);
}

std::string_view to_string(AuditMode m) {
  switch (m) {
    case AuditMode::space: return "space";
    case AuditMode::spacetime: return "spacetime";
    case AuditMode::harmonic: return "harmonic";
  }
  return "?";
}

void AuditField::add_slice(const Field& f, double t, double s, std::vector<Slice>& into) {
  Slice sl;
  sl.t = t;
  sl.s = s;
  sl.u = GridSampler(f);
  sl.r = f.values;
  sl.v.resize(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (spec_.kind == Transform::log)
      require(f.values[k] > 0.0, ErrorCode::nonpositive_value, "log transform met a nonpositive value");
    sl.v[k] = phi(f.values[k]);
  }
  into.push_back(std::move(sl));
}

AuditField::AuditField(const Trajectory& traj, const Field* stationary, TransformSpec spec)
    : dom_(traj.domain), spec_(spec), monotone_(traj.monotone_nondecreasing) {
  require(spec.beta >= 1.0 && spec.beta <= 2.0, ErrorCode::invalid_argument, "beta must lie in [1, 2]");
  require(spec.kind == Transform::log || (spec.alpha > 0.0 && spec.alpha <= 1.0), ErrorCode::invalid_argument,
          "alpha must lie in (0, 1]");
  for (const auto& f : traj.snapshots) {
    if (!(f.time > 0.0)) continue;
    add_slice(f, std::pow(f.time, 1.0 / spec.beta), f.time, slices_);
  }
  require(!slices_.empty(), ErrorCode::empty_sampler, "trajectory has no positive-time snapshots");
  if (stationary) {
    std::vector<Slice> tmp;
    add_slice(*stationary, kInf, kInf, tmp);
    inf_ = std::move(tmp.front());
    has_inf_ = true;
  }
}

AuditField::AuditField(const Field& field, TransformSpec spec) : dom_(field.domain), spec_(spec) {
  require(spec.kind == Transform::log || (spec.alpha > 0.0 && spec.alpha <= 1.0), ErrorCode::invalid_argument,
          "alpha must lie in (0, 1]");
  add_slice(field, 0.0, 0.0, slices_);
}

double AuditField::phi(double u) const {
  if (spec_.kind == Transform::log) {
    require(u > 0.0, ErrorCode::nonpositive_value, "log transform met a nonpositive value");
    return std::log(u);
  }
  if (spec_.alpha == 1.0) return u;
  return u <= 0.0 ? 0.0 : std::pow(u, spec_.alpha);
}

double AuditField::dphi(double u) const {
  if (spec_.kind == Transform::log) return 1.0 / u;
  if (spec_.alpha == 1.0) return 1.0;
  return u > 0.0 ? spec_.alpha * std::pow(u, spec_.alpha - 1.0) : 0.0;
}

double AuditField::node_value(std::size_t k, std::size_t slice) const {
  return slice >= slices_.size() ? inf_.v[k] : slices_[slice].v[k];
}

std::size_t AuditField::bracket(double t) const {
  auto it = std::upper_bound(slices_.begin(), slices_.end(), t, [](double a, const Slice& s) { return a < s.t; });
  std::size_t i = it == slices_.begin() ? 0 : static_cast<std::size_t>(it - slices_.begin()) - 1;
  return std::min(i, slices_.size() - 2);
}

double AuditField::raw(Point x, double t) const {
  if (std::isinf(t)) {
    require(has_inf_, ErrorCode::invalid_argument, "no stationary slice");
    return inf_.u(x);
  }
  if (slices_.size() == 1) return slices_[0].u(x);
  std::size_t i = bracket(t);
  const Slice& a = slices_[i];
  const Slice& b = slices_[i + 1];
  double s = spec_.beta == 1.0 ? t : std::pow(t, spec_.beta);
  double w = std::clamp((s - a.s) / (b.s - a.s), 0.0, 1.0);
  if (w == 0.0) return a.u(x);
  if (w == 1.0) return b.u(x);
  return (1.0 - w) * a.u(x) + w * b.u(x);
}

double AuditField::value(Point x, double t) const { return phi(raw(x, t)); }

Point AuditField::gradient(Point x, double t) const {
  Point g;
  if (std::isinf(t)) {
    g = inf_.u.gradient(x);
  } else if (slices_.size() == 1) {
    g = slices_[0].u.gradient(x);
  } else {
    std::size_t i = bracket(t);
    double s = std::pow(t, spec_.beta);
    double w = std::clamp((s - slices_[i].s) / (slices_[i + 1].s - slices_[i].s), 0.0, 1.0);
    g = (1.0 - w) * slices_[i].u.gradient(x) + w * slices_[i + 1].u.gradient(x);
  }
  return dphi(raw(x, t)) * g;
}

namespace {

struct NodeSet {
  std::vector<std::size_t> nodes;  // interior indices
  std::vector<int> lookup;         // grid index -> position in nodes
};

NodeSet audit_nodes(const DiscretizedDomain& dom, double margin) {
  NodeSet ns;
  ns.lookup.assign(static_cast<std::size_t>(dom.nx()) * dom.ny(), -1);
  for (std::size_t k = 0; k < dom.interior_count(); ++k)
    if (dom.interior_distance(k) > margin) {
      auto [i, j] = dom.interior_node(k);
      ns.lookup[dom.grid_index(i, j)] = static_cast<int>(ns.nodes.size());
      ns.nodes.push_back(k);
    }
  require(!ns.nodes.empty(), ErrorCode::empty_sampler, "no interior nodes beyond the audit margin");
  return ns;
}

std::vector<std::size_t> strided(const DiscretizedDomain& dom, const NodeSet& ns, std::size_t max_nodes) {
  require(max_nodes > 0, ErrorCode::empty_sampler, "sampler has no points");
  for (int stride = 1;; ++stride) {
    std::vector<std::size_t> pick;
    for (std::size_t a = 0; a < ns.nodes.size(); ++a) {
      auto [i, j] = dom.interior_node(ns.nodes[a]);
      if (i % stride == 0 && j % stride == 0) pick.push_back(a);
    }
    if (pick.size() <= max_nodes || stride > dom.nx()) {
      if (pick.empty()) pick.push_back(0);
      return pick;
    }
  }
}

struct IndexTuple {
  int a = 0, b = 0;           // positions in the audit node set
  std::size_t sa = 0, sb = 0;  // slice indices; slice_count() is infinity
  double lam = 0.5;
  double c = 0.0;
};

struct ByValue {
  bool operator()(const IndexTuple& l, const IndexTuple& r) const { return l.c < r.c; }
};

double default_margin(const DiscretizedDomain& dom, double m) { return m < 0.0 ? dom.h() : m; }

}  // namespace

double audit_tolerance(const AuditField& field, const SamplerConfig& cfg, double* curvature) {
  const DiscretizedDomain& dom = *field.domain();
  const double h = dom.h();
  const double margin = default_margin(dom, cfg.margin);
  const double cm = cfg.curvature_margin < 0.0 ? 0.25 * dom.spec().inradius() : cfg.curvature_margin;
  NodeSet ns = audit_nodes(dom, margin);
  const std::size_t S = field.slice_count();
  std::vector<std::size_t> slices;
  for (std::size_t s = 0; s < S; ++s) slices.push_back(s);
  if (field.has_infinity()) slices.push_back(S);

  double kx = 0.0;
  for (std::size_t a = 0; a < ns.nodes.size(); ++a) {
    std::size_t k = ns.nodes[a];
    if (dom.interior_distance(k) <= std::max(cm, margin)) continue;
    auto [i, j] = dom.interior_node(k);
    auto at = [&](int di, int dj) { return ns.lookup[dom.grid_index(i + di, j + dj)]; };
    int e = at(1, 0), w = at(-1, 0), n = at(0, 1), s = at(0, -1);
    for (std::size_t sl : slices) {
      double v = field.node_value(k, sl);
      if (e >= 0 && w >= 0)
        kx = std::max(kx, std::abs(field.node_value(ns.nodes[e], sl) - 2 * v + field.node_value(ns.nodes[w], sl)));
      if (n >= 0 && s >= 0)
        kx = std::max(kx, std::abs(field.node_value(ns.nodes[n], sl) - 2 * v + field.node_value(ns.nodes[s], sl)));
    }
  }
  double K = kx / (h * h);
  if (curvature) *curvature = K;
  return std::max(cfg.c_tol * h * h * K, 1e-14);
}

DefectReport min_defect(const AuditField& field, AuditMode mode, const SamplerConfig& cfg) {
  const DiscretizedDomain& dom = *field.domain();
  require(cfg.lambda_divisions >= 2, ErrorCode::invalid_argument, "need at least two lambda divisions");
  NodeSet ns = audit_nodes(dom, default_margin(dom, cfg.margin));
  const std::vector<std::size_t> pick = strided(dom, ns, cfg.max_nodes);
  const std::size_t S = field.slice_count();
  const std::size_t INF = S;
  const bool with_inf = field.has_infinity() && field.monotone() && cfg.use_infinity;

  auto time_of = [&](std::size_t s) { return s == INF ? kInf : field.slice_time(s); };
  auto point_of = [&](int a) { return dom.interior_point(ns.nodes[a]); };

  DefectReport rep;
  rep.mode = mode;
  long samples = 0;
  auto eval = [&](IndexTuple& it) {
    Point x1 = point_of(it.a), x3 = point_of(it.b);
    Point x2 = x1 + it.lam * (x3 - x1);
    double v2;
    if (it.sa == it.sb) {
      v2 = it.sa == INF ? field.value(x2, kInf) : field.phi(field.raw(x2, time_of(it.sa)));
    } else {
      double t2 = it.lam * time_of(it.sb) + (1.0 - it.lam) * time_of(it.sa);
      v2 = field.value(x2, t2);
    }
    ++samples;
    double v1 = field.node_value(ns.nodes[it.a], it.sa), v3 = field.node_value(ns.nodes[it.b], it.sb);
    if (mode == AuditMode::harmonic) {
      auto hc = harmonic_concavity_value(v1, v2, v3, it.lam);
      it.c = hc ? *hc : std::numeric_limits<double>::infinity();
    } else {
      it.c = concavity_value(v1, v2, v3, it.lam);
    }
    return it.c;
  };

  std::priority_queue<IndexTuple, std::vector<IndexTuple>, ByValue> best;
  std::vector<double> per_slice(S + 1, 0.0);
  auto offer = [&](const IndexTuple& it) {
    per_slice[it.sa == it.sb ? it.sa : INF] = std::min(per_slice[it.sa == it.sb ? it.sa : INF], it.c);
    if (static_cast<int>(best.size()) < cfg.refine_candidates) {
      best.push(it);
    } else if (it.c < best.top().c) {
      best.pop();
      best.push(it);
    }
  };
  const int L = cfg.lambda_divisions;

  auto scan_pairs = [&](std::size_t sa, std::size_t sb, bool same) {
    for (std::size_t p = 0; p < pick.size(); ++p)
      for (std::size_t q = same ? p + 1 : 0; q < pick.size(); ++q)
        for (int l = 1; l < L; ++l) {
          IndexTuple it{static_cast<int>(pick[p]), static_cast<int>(pick[q]), sa, sb, static_cast<double>(l) / L};
          eval(it);
          offer(it);
        }
  };

  std::vector<std::size_t> slices;
  if (mode != AuditMode::spacetime) {
    for (std::size_t s = 0; s < S; ++s) slices.push_back(s);
  } else {
    std::size_t m = std::min(cfg.max_times, S);
    for (std::size_t r = 0; r < m; ++r) {
      std::size_t s = m == 1 ? S - 1 : (r * (S - 1)) / (m - 1);
      if (slices.empty() || slices.back() != s) slices.push_back(s);
    }
  }
  for (std::size_t i = 0; i < slices.size(); ++i) {
    scan_pairs(slices[i], slices[i], true);
    if (mode == AuditMode::spacetime)
      for (std::size_t j = i + 1; j < slices.size(); ++j) scan_pairs(slices[i], slices[j], false);
  }
  if (with_inf) scan_pairs(INF, INF, true);

  // Coordinate descent on the full node set and snapshot list, golden section in lambda.
  std::vector<IndexTuple> cands;
  while (!best.empty()) {
    cands.push_back(best.top());
    best.pop();
  }
  require(!cands.empty(), ErrorCode::empty_sampler, "sampler produced no tuples");
  auto neighbours = [&](int a) {
    std::vector<int> out;
    auto [i, j] = dom.interior_node(ns.nodes[a]);
    const int d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto& o : d) {
      int ii = i + o[0], jj = j + o[1];
      if (ii < 0 || jj < 0 || ii >= dom.nx() || jj >= dom.ny()) continue;
      int q = ns.lookup[dom.grid_index(ii, jj)];
      if (q >= 0) out.push_back(q);
    }
    return out;
  };
  const double phi_g = 0.5 * (std::sqrt(5.0) - 1.0);
  IndexTuple overall = cands.front();
  for (IndexTuple cur : cands) {
    for (int sweep = 0; sweep < 200; ++sweep) {
      bool improved = false;
      auto attempt = [&](IndexTuple trial) {
        if (trial.a == trial.b && trial.sa == trial.sb) return;
        eval(trial);
        if (trial.c < cur.c) {
          cur = trial;
          improved = true;
        }
      };
      for (int n : neighbours(cur.a)) {
        IndexTuple t = cur;
        t.a = n;
        attempt(t);
      }
      for (int n : neighbours(cur.b)) {
        IndexTuple t = cur;
        t.b = n;
        attempt(t);
      }
      if (mode == AuditMode::spacetime && cur.sa != INF) {
        for (int d : {-1, 1}) {
          long na = static_cast<long>(cur.sa) + d, nb = static_cast<long>(cur.sb) + d;
          if (na >= 0 && na < static_cast<long>(S)) {
            IndexTuple t = cur;
            t.sa = static_cast<std::size_t>(na);
            attempt(t);
          }
          if (nb >= 0 && nb < static_cast<long>(S)) {
            IndexTuple t = cur;
            t.sb = static_cast<std::size_t>(nb);
            attempt(t);
          }
        }
      }
      double lo = std::max(1e-9, cur.lam - 1.0 / L), hi = std::min(1.0 - 1e-9, cur.lam + 1.0 / L);
      IndexTuple p = cur, q = cur;
      p.lam = hi - phi_g * (hi - lo);
      q.lam = lo + phi_g * (hi - lo);
      eval(p);
      eval(q);
      for (int g = 0; g < 40 && hi - lo > 1e-10; ++g) {
        if (p.c < q.c) {
          hi = q.lam;
          q = p;
          p.lam = hi - phi_g * (hi - lo);
          eval(p);
        } else {
          lo = p.lam;
          p = q;
          q.lam = lo + phi_g * (hi - lo);
          eval(q);
        }
      }
      IndexTuple lam_best = p.c < q.c ? p : q;
      if (lam_best.c < cur.c - 1e-15) {
        cur = lam_best;
        improved = true;
      }
      if (!improved) break;
    }
    offer(cur);
    if (cur.c < overall.c) overall = cur;
  }

  rep.min = std::min(0.0, overall.c);
  rep.argmin = {point_of(overall.a), point_of(overall.b), time_of(overall.sa), time_of(overall.sb), overall.lam};
  if (overall.c >= 0.0) rep.argmin.lambda = 0.0;
  const Tuple& tp = rep.argmin;
  Point x2 = tp.x1 + tp.lambda * (tp.x3 - tp.x1);
  double t2 = (std::isinf(tp.t1) && std::isinf(tp.t3)) ? kInf : tp.lambda * tp.t3 + (1.0 - tp.lambda) * tp.t1;
  rep.gradients = {field.gradient(tp.x1, tp.t1), field.gradient(x2, t2), field.gradient(tp.x3, tp.t3)};
  rep.gradient_mismatch = std::max({norm(rep.gradients[0] - rep.gradients[1]), norm(rep.gradients[1] - rep.gradients[2]),
                                    norm(rep.gradients[0] - rep.gradients[2])});
  rep.tau_audit = audit_tolerance(field, cfg, &rep.curvature_scale);
  rep.samples = samples;
  if (mode != AuditMode::spacetime) {
    for (std::size_t s = 0; s < S; ++s) rep.per_time.push_back({field.slice_time(s), per_slice[s]});
    if (with_inf) rep.per_time.push_back({kInf, per_slice[INF]});
  }
  return rep;
}

double quasiconcavity_defect(const Field& f, double tau, int levels, std::size_t max_nodes) {
  const DiscretizedDomain& dom = *f.domain;
  GridSampler g(f);
  NodeSet ns = audit_nodes(dom, 0.0);
  std::vector<std::size_t> pick = strided(dom, ns, max_nodes);
  const double fmax = f.max();
  double worst = 0.0;
  for (int l = 1; l <= levels; ++l) {
    double level = fmax * l / (levels + 1);
    std::vector<Point> in;
    for (std::size_t a : pick)
      if (f.values[ns.nodes[a]] > level) in.push_back(dom.interior_point(ns.nodes[a]));
    for (std::size_t i = 0; i < in.size(); ++i)
      for (std::size_t j = i + 1; j < in.size(); ++j) {
        double mid = g(0.5 * (in[i] + in[j]));
        worst = std::max(worst, (level - tau) - mid);
      }
  }
  return worst;
}

}  // namespace cvlab
