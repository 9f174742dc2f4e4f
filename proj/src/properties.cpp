#include "concavlab/properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include "concavlab/audit.hpp"
#include "concavlab/errors.hpp"

namespace cvlab {

bool PropertySuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.violations == 0; });
}

namespace {

using Rng = std::mt19937_64;

double uni(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

/// c0 + c.x + x'Ax + amp sin(k.x + phase) + d t
struct RandomFunction {
  double c0 = 0.0, cx = 0.0, cy = 0.0, axx = 0.0, axy = 0.0, ayy = 0.0;
  double amp = 0.0, kx = 0.0, ky = 0.0, phase = 0.0, d = 0.0;

  static RandomFunction draw(Rng& rng, double scale = 1.0) {
    RandomFunction f;
    f.c0 = uni(rng, -scale, scale);
    f.cx = uni(rng, -scale, scale);
    f.cy = uni(rng, -scale, scale);
    f.axx = uni(rng, -scale, scale);
    f.axy = uni(rng, -scale, scale);
    f.ayy = uni(rng, -scale, scale);
    f.amp = uni(rng, 0.0, scale);
    f.kx = uni(rng, -4.0, 4.0);
    f.ky = uni(rng, -4.0, 4.0);
    f.phase = uni(rng, 0.0, 2.0 * M_PI);
    f.d = uni(rng, -scale, scale);
    return f;
  }
  double operator()(Point x, double t = 0.0) const {
    return c0 + cx * x.x + cy * x.y + axx * x.x * x.x + axy * x.x * x.y + ayy * x.y * x.y +
           amp * std::sin(kx * x.x + ky * x.y + phase) + d * t;
  }
};

/// c (1 + eps sin(k.x + phase)), bounded by c (1 -+ eps).
struct BoundedFunction {
  double c = 1.0, eps = 0.0, kx = 0.0, ky = 0.0, phase = 0.0;
  static BoundedFunction draw(Rng& rng, double eps_max) {
    return {uni(rng, 0.5, 2.0), uni(rng, 0.0, eps_max), uni(rng, -6.0, 6.0), uni(rng, -6.0, 6.0),
            uni(rng, 0.0, 2.0 * M_PI)};
  }
  /// Largest eps with (1 - eps)^p >= (1 + eps)^p / 2.
  static double eps_limit(double p) {
    const double r = std::pow(2.0, -1.0 / p);
    return (1.0 - r) / (1.0 + r);
  }
  double operator()(Point x) const { return c * (1.0 + eps * std::sin(kx * x.x + ky * x.y + phase)); }
  double lo() const { return c * (1.0 - eps); }
  double hi() const { return c * (1.0 + eps); }
};

Point draw_point(Rng& rng, double lo = 0.0, double hi = 1.0) { return {uni(rng, lo, hi), uni(rng, lo, hi)}; }

Tuple draw_tuple(Rng& rng, double lo = 0.0, double hi = 1.0) {
  Tuple tp;
  tp.x1 = draw_point(rng, lo, hi);
  tp.x3 = draw_point(rng, lo, hi);
  tp.t1 = uni(rng, 1e-3, 2.0);
  tp.t3 = uni(rng, 1e-3, 2.0);
  tp.lambda = uni(rng, 0.0, 1.0);
  return tp;
}

Point mid(const Tuple& tp) { return tp.x1 + tp.lambda * (tp.x3 - tp.x1); }

class Tally {
 public:
  Tally(std::string name, double tol) : tol_(tol) { c_.name = std::move(name); c_.worst_margin = INFINITY; }
  void skip() {
    ++c_.draws;
    ++c_.skipped;
  }
  void record(double lhs, double rhs) {
    ++c_.draws;
    ++c_.evaluated;
    const double margin = lhs - rhs;
    c_.worst_margin = std::min(c_.worst_margin, margin);
    if (margin < -tol_ * std::max({1.0, std::abs(lhs), std::abs(rhs)})) ++c_.violations;
  }
  PropertyCheck done() {
    if (c_.evaluated == 0) c_.worst_margin = 0.0;
    return c_;
  }

 private:
  double tol_;
  PropertyCheck c_;
};

PropertyCheck harmonic_dominates(Rng& rng, long draws, double tol) {
  Tally t("harmonic-dominates-concavity", tol);
  for (long i = 0; i < draws; ++i) {
    RandomFunction g = RandomFunction::draw(rng);
    g.c0 += 1.5;
    Tuple tp = draw_tuple(rng);
    auto hc = harmonic_concavity_value(g, tp);
    if (!hc) {
      t.skip();
      continue;
    }
    t.record(*hc, concavity_value(g, tp));
  }
  return t.done();
}

PropertyCheck time_rescaling(Rng& rng, long draws, double tol) {
  Tally t("time-rescaling-monotone", tol);
  for (long i = 0; i < draws; ++i) {
    const double beta = uni(rng, 0.05, 1.0);
    const double wx = uni(rng, -2.0, 2.0), wy = uni(rng, -2.0, 2.0);
    const double c0 = uni(rng, 0.1, 2.0), c1 = uni(rng, 0.0, 2.0), p = uni(rng, 0.1, 3.0), d = uni(rng, 0.0, 1.0);
    auto g = [=](Point x, double s) { return std::exp(wx * x.x + wy * x.y) * (c0 + c1 * std::pow(s, p)) + d; };
    auto gb = [=](Point x, double s) { return g(x, std::pow(s, beta)); };
    Tuple tp = draw_tuple(rng);
    Tuple tb = tp;
    tb.t1 = std::pow(tp.t1, beta);
    tb.t3 = std::pow(tp.t3, beta);
    auto lhs = harmonic_concavity_value(gb, tp);
    auto rhs = harmonic_concavity_value(g, tb);
    if (!lhs || !rhs) {
      t.skip();
      continue;
    }
    t.record(*lhs, *rhs);
  }
  return t.done();
}

/// f with f^a concave: a positive affine function raised to 1/a.
struct ConcavePower {
  double c0 = 1.0, cx = 0.0, cy = 0.0, a = 1.0;
  double operator()(Point x) const { return std::pow(c0 + cx * x.x + cy * x.y, 1.0 / a); }
};

PropertyCheck product_bound(Rng& rng, long draws, double tol) {
  Tally t("product-lower-bound", tol);
  for (long i = 0; i < draws; ++i) {
    const double alpha = uni(rng, 1.05, 6.0);
    const double beta = alpha / (alpha - 1.0);
    std::function<double(Point)> f, g;
    bool f_ok = true, g_ok = true;
    auto pick = [&](double expo, std::function<double(Point)>& out, bool& ok) {
      if (uni(rng, 0.0, 1.0) < 0.25) {
        ConcavePower cp{uni(rng, 1.0, 2.0), uni(rng, -0.5, 0.5), uni(rng, -0.5, 0.5), expo};
        out = cp;
        return;
      }
      const bool adversarial = uni(rng, 0.0, 1.0) < 0.1;
      BoundedFunction b = BoundedFunction::draw(rng, adversarial ? 0.9 : BoundedFunction::eps_limit(expo));
      out = b;
      ok = std::pow(b.lo(), expo) >= 0.5 * std::pow(b.hi(), expo);
    };
    pick(alpha, f, f_ok);
    pick(beta, g, g_ok);
    if (!f_ok || !g_ok) {
      t.skip();
      continue;
    }
    const Point x1 = draw_point(rng), x3 = draw_point(rng);
    const double lam = uni(rng, 0.0, 1.0);
    const Point x2 = x1 + lam * (x3 - x1);
    const double f1 = f(x1), f2 = f(x2), f3 = f(x3), g1 = g(x1), g2 = g(x2), g3 = g(x3);
    const double cf = std::max(0.0, -concavity_value(std::pow(f1, alpha), std::pow(f2, alpha), std::pow(f3, alpha), lam));
    const double cg = std::max(0.0, -concavity_value(std::pow(g1, beta), std::pow(g2, beta), std::pow(g3, beta), lam));
    const double ra = std::pow(cf, 1.0 / alpha), rb = std::pow(cg, 1.0 / beta);
    const double rhs = -ra * (lam * g3 + (1.0 - lam) * g1) - rb * (lam * f3 + (1.0 - lam) * f1) + ra * rb;
    t.record(concavity_value(f1 * g1, f2 * g2, f3 * g3, lam), rhs);
  }
  return t.done();
}

PropertyCheck product_oscillation(Rng& rng, long draws, double tol) {
  Tally t("product-oscillation-bound", tol);
  for (long i = 0; i < draws; ++i) {
    RandomFunction f = RandomFunction::draw(rng), g = RandomFunction::draw(rng);
    const Point x1 = draw_point(rng), x3 = draw_point(rng);
    const double lam = uni(rng, 0.0, 1.0);
    const Point x2 = x1 + lam * (x3 - x1);
    double fmin = std::min({f(x1), f(x2), f(x3)}), fmax = std::max({f(x1), f(x2), f(x3)});
    for (int a = 0; a <= 20; ++a)
      for (int b = 0; b <= 20; ++b) {
        double v = f(Point{a / 20.0, b / 20.0});
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
      }
    const double g1 = g(x1), g3 = g(x3);
    const double cg = concavity_value(g1, g(x2), g3, lam);
    const double rhs = cg * f(x2) - (fmax - fmin) * (lam * std::abs(g3) + (1.0 - lam) * std::abs(g1));
    t.record(concavity_value(f(x1) * g1, f(x2) * g(x2), f(x3) * g3, lam), rhs);
  }
  return t.done();
}

PropertyCheck quotient_bound(Rng& rng, long draws, double tol) {
  Tally t("quotient-harmonic-bound", tol);
  for (long i = 0; i < draws; ++i) {
    RandomFunction g = RandomFunction::draw(rng);
    g.c0 += 1.0;
    const bool first = uni(rng, 0.0, 1.0) < 0.5;
    auto coord = [first](Point x) { return first ? x.x : x.y; };
    auto f = [&](Point x, double) { return g(x) / (coord(x) * coord(x)); };
    Tuple tp = draw_tuple(rng, 0.2, 2.0);
    auto hc = harmonic_concavity_value(f, tp);
    if (!hc) {
      t.skip();
      continue;
    }
    const Point x2 = mid(tp);
    const double cg = concavity_value(g(tp.x1), g(x2), g(tp.x3), tp.lambda);
    t.record(*hc, cg / (coord(x2) * coord(x2)));
  }
  return t.done();
}

PropertyCheck difference_bound(Rng& rng, long draws, double tol) {
  Tally t("difference-harmonic-bound", tol);
  for (long i = 0; i < draws; ++i) {
    RandomFunction f = RandomFunction::draw(rng, 2.0);
    f.c0 += 4.0;
    std::function<double(Point, double)> g;
    const int kind = static_cast<int>(uni(rng, 0.0, 3.0));
    if (kind == 0) {
      const double c = uni(rng, 0.1, 2.0);
      g = [c](Point, double) { return c; };
    } else if (kind == 1) {
      const double c = uni(rng, 0.1, 2.0), gam = uni(rng, -1.0, 0.0);
      g = [c, gam](Point, double s) { return c * std::pow(s, gam); };
    } else {
      RandomFunction e = RandomFunction::draw(rng, 0.5);
      g = [e](Point x, double s) { return std::exp(e(x, s)); };
    }
    auto diff = [&](Point x, double s) { return f(x, s) - g(x, s); };
    Tuple tp = draw_tuple(rng);
    auto hd = harmonic_concavity_value(diff, tp);
    auto hf = harmonic_concavity_value(f, tp);
    auto hg = harmonic_concavity_value(g, tp);
    if (!hd || !hf || !hg) {
      t.skip();
      continue;
    }
    t.record(*hd, *hf - *hg);
  }
  return t.done();
}

PropertyCheck difference_special(Rng& rng, long draws, double tol) {
  Tally t("difference-harmonic-nonpositive", tol);
  for (long i = 0; i < draws; ++i) {
    RandomFunction f = RandomFunction::draw(rng, 2.0);
    f.c0 += 4.0;
    const double c = uni(rng, 0.1, 2.0), gam = uni(rng, -1.0, 0.0);
    auto g = [c, gam](Point, double s) { return c * std::pow(s, gam); };
    auto diff = [&](Point x, double s) { return f(x, s) - g(x, s); };
    Tuple tp = draw_tuple(rng);
    auto hd = harmonic_concavity_value(diff, tp);
    auto hf = harmonic_concavity_value(f, tp);
    auto hg = harmonic_concavity_value(g, tp);
    if (!hd || !hf || !hg || *hg > 0.0) {
      t.skip();
      continue;
    }
    t.record(*hd, *hf);
  }
  return t.done();
}

}  // namespace

PropertySuiteReport run_property_suite(std::uint64_t seed, long draws, double tol) {
  require(draws >= 1, ErrorCode::invalid_argument, "draws must be at least 1");
  PropertySuiteReport rep;
  rep.seed = seed;
  rep.draws = draws;
  rep.tolerance = tol;
  Rng rng(seed);
  rep.checks.push_back(harmonic_dominates(rng, draws, tol));
  rep.checks.push_back(time_rescaling(rng, draws, tol));
  rep.checks.push_back(product_bound(rng, draws, tol));
  rep.checks.push_back(product_oscillation(rng, draws, tol));
  rep.checks.push_back(quotient_bound(rng, draws, tol));
  rep.checks.push_back(difference_bound(rng, draws, tol));
  rep.checks.push_back(difference_special(rng, draws, tol));
  return rep;
}

}  // namespace cvlab
