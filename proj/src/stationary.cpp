#include "concavlab/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "concavlab/errors.hpp"

namespace cvlab {

namespace {

bool ratio_strictly_decreasing(const Problem& problem, double t) {
  const auto pts = domain_samples(problem.domain, 6);
  for (auto p : pts) {
    if (distance_to_boundary(problem.domain, p) <= 0.0) continue;
    double prev = kInf;
    for (int i = 0; i < 40; ++i) {
      double s = std::pow(10.0, -4.0 + 5.0 * i / 39.0);
      double r = eval_source(problem, p, s, t) / s;
      if (!(r < prev)) return false;
      prev = r;
    }
  }
  return true;
}

}  // namespace

StationaryResult solve_stationary(const Problem& problem, DomainPtr domain, const StationaryOptions& opts) {
  problem.validate();
  require(opts.damping > 0.0 && opts.damping <= 1.0, ErrorCode::invalid_argument, "damping must lie in (0, 1]");
  const DiscretizedDomain& dom = *domain;
  const std::size_t n = dom.interior_count();
  const double t = problem.effective_time(kInf);
  StationaryResult res;
  const CgOptions cg{1e-12, 0, true};

  auto source_field = [&](const std::vector<double>& v) {
    std::vector<double> b(n);
    for (std::size_t k = 0; k < n; ++k) b[k] = eval_source(problem, dom.interior_point(k), std::max(0.0, v[k]), t);
    return b;
  };
  auto residual_of = [&](const std::vector<double>& v, const std::vector<double>& b) {
    std::vector<double> lap(n);
    apply_laplacian(dom, v, lap);
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) r = std::max(r, std::abs(-lap[k] - b[k]));
    return r;
  };

  std::vector<double> zero(n, 0.0);
  res.v = Field::zeros(domain, kInf);
  if (problem.source.s_independent()) {
    std::vector<double> b = source_field(res.v.values);
    solve_shifted(dom, zero, 1.0, b, res.v.values, cg);
    res.iterations = 1;
    res.residual = residual_of(res.v.values, b);
    return res;
  }

  if (!ratio_strictly_decreasing(problem, t))
    res.warnings.push_back("NonuniqueWarning: b(x, s) / s is not strictly decreasing in s");

  // Start from the torsion function scaled by the (H1) constant when available.
  std::vector<double> ones(n, 1.0), v(n, 0.0);
  solve_shifted(dom, zero, 1.0, ones, v, cg);
  double k = 1.0;
  try {
    HypothesisReport hyp = check_hypotheses(problem, 1.0, 1.0);
    if (hyp.h1.value == Tri::yes) k = hyp.k;
  } catch (const Error&) {
  }
  for (double& x : v) x *= k;

  const bool implicit = problem.source.kind == SourceKind::logistic || problem.source.kind == SourceKind::log_s;
  std::vector<double> next(n), shift(n, 0.0), rhs(n);
  for (long it = 1; it <= opts.max_iter; ++it) {
    std::vector<double> b = source_field(v);
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      double dminus = 0.0;
      if (implicit && v[k2] > 0.0)
        dminus = std::max(0.0, -eval_source_ds(problem, dom.interior_point(k2), v[k2], t));
      shift[k2] = dminus;
      rhs[k2] = b[k2] + dminus * v[k2];
    }
    next = v;
    solve_shifted(dom, shift, 1.0, rhs, next, cg);
    double change = 0.0, vmax = 0.0;
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      double upd = std::max(0.0, (1.0 - opts.damping) * v[k2] + opts.damping * next[k2]);
      change = std::max(change, std::abs(upd - v[k2]));
      v[k2] = upd;
      vmax = std::max(vmax, upd);
    }
    require(std::isfinite(vmax) && vmax <= 1e6, ErrorCode::state_blowup, "stationary iterate exceeded 1e6");
    res.iterations = it;
    res.change = change;
    if (change <= opts.tol * std::max(1.0, vmax)) {
      std::vector<double> bv = source_field(v);
      double bmax = 0.0;
      for (double x : bv) bmax = std::max(bmax, std::abs(x));
      res.residual = residual_of(v, bv);
      if (res.residual <= 1e-8 * (1.0 + bmax) || change == 0.0) {
        require(vmax > 0.0, ErrorCode::no_convergence, "iteration collapsed to the zero solution");
        res.v.values = v;
        return res;
      }
    }
  }
  fail(ErrorCode::no_convergence, "damped Picard iteration did not settle");
}

}  // namespace cvlab
