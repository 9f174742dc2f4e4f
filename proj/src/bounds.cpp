#include "concavlab/bounds.hpp"

#include <cmath>

#include "concavlab/errors.hpp"

namespace cvlab {

std::string_view to_string(AlphaVariant v) {
  switch (v) {
    case AlphaVariant::lane_emden: return "lane_emden";
    case AlphaVariant::constant_weight: return "constant_weight";
    case AlphaVariant::torsion: return "torsion";
  }
  return "?";
}

std::string_view to_string(QuantMode m) {
  switch (m) {
    case QuantMode::oscillation: return "oscillation";
    case QuantMode::rough: return "rough";
    case QuantMode::theta: return "theta";
    case QuantMode::elliptic_theta: return "elliptic_theta";
    case QuantMode::directional: return "directional";
  }
  return "?";
}

QuantMode quant_mode_from_string(std::string_view s) {
  for (auto m : {QuantMode::oscillation, QuantMode::rough, QuantMode::theta, QuantMode::elliptic_theta, QuantMode::directional})
    if (to_string(m) == s) return m;
  fail(ErrorCode::invalid_argument, "unknown quantitative mode " + std::string(s));
}

namespace {

void range(bool ok, const std::string& what) { require(ok, ErrorCode::range_violation, what); }

}  // namespace

double alpha_exponent(double q, double gamma, double beta, double theta, AlphaVariant variant) {
  range(q >= 0.0 && q < 1.0, "q in [0, 1)");
  switch (variant) {
    case AlphaVariant::lane_emden: {
      range(gamma >= 0.0 && gamma <= 1.0, "gamma in [0, 1]");
      range(beta >= 1.0 && beta <= 2.0, "beta in [1, 2]");
      range(beta * gamma < 1.0, "beta < 1 / gamma");
      range(theta >= 1.0 / (1.0 - beta * gamma), "theta >= 1 / (1 - beta gamma)");
      if (std::isinf(theta)) return (1.0 - q) / (2.0 + beta * gamma);
      return (1.0 - q) * theta / (2.0 * theta + beta * gamma * theta + 1.0);
    }
    case AlphaVariant::constant_weight:
      range(gamma >= 0.0 && gamma <= 1.0, "gamma in [0, 1]");
      range(beta >= 1.0 && beta <= 2.0, "beta in [1, 2]");
      range(beta * gamma <= 1.0, "beta <= 1 / gamma");
      return (1.0 - q) / (2.0 + beta * gamma);
    case AlphaVariant::torsion:
      range(q == 0.0, "q = 0 for the torsion variant");
      range(gamma >= 0.0 && gamma < 0.5, "gamma < 1/2");
      range(theta >= 1.0 / (1.0 - 2.0 * gamma), "theta >= 1 / (1 - 2 gamma)");
      if (std::isinf(theta)) return 1.0 / (2.0 + 2.0 * gamma);
      return theta / (2.0 * theta + 2.0 * theta * gamma + 1.0);
  }
  return 0.0;
}

double admissible_alpha_bound(double q, double gamma, double beta) {
  range(q >= 0.0 && q < 1.0, "q in [0, 1)");
  range(beta > 0.0 && beta <= 2.0, "beta in (0, 2]");
  return 2.0 * (1.0 - q) / (2.0 * beta * (1.0 + gamma) + (2.0 - beta) * (1.0 - q));
}

double log_concavity_rhs(double T, double Lambda, double defect, LogVariant variant, double fbar_sup, double theta) {
  require(T > 0.0, ErrorCode::invalid_argument, "T must be positive");
  require(defect >= 0.0, ErrorCode::invalid_argument, "defect must be nonnegative");
  if (variant == LogVariant::eigen) Lambda = 0.0;
  const double factor = -T * std::exp(1.0 + Lambda * T);
  switch (variant) {
    case LogVariant::general:
    case LogVariant::eigen: return defect == 0.0 ? 0.0 : factor * defect;
    case LogVariant::product_theta:
      require(theta >= 1.0, ErrorCode::invalid_argument, "theta must be at least 1");
      return defect == 0.0 ? 0.0 : factor * fbar_sup * std::pow(defect, 1.0 / theta);
    case LogVariant::product_osc: return defect == 0.0 ? 0.0 : factor * fbar_sup * defect;
  }
  return 0.0;
}

BoundReport quantitative_rhs(const BoundParams& P, QuantMode mode, bool allow_outside_gate) {
  require(P.q >= 0.0 && P.q < 1.0, ErrorCode::invalid_argument, "q must lie in [0, 1)");
  BoundReport r;
  r.theorem = std::string(to_string(mode));
  const double uinf = P.sup_norm_u_inf;
  auto gate = [&](const std::string& name, bool ok) {
    r.validity.push_back({name, ok});
    if (!ok) {
      require(allow_outside_gate, ErrorCode::validity_violation, name);
      r.experimental = true;
    }
  };
  switch (mode) {
    case QuantMode::oscillation: {
      gate("m > 0", P.m > 0.0);
      double pw = std::pow(uinf, 0.5 * (1.0 - P.q));
      r.constants["alpha"] = 0.5 * (1.0 - P.q);
      r.constants["u_inf_power"] = pw;
      r.rhs = P.osc_a2 == 0.0 ? 0.0 : -pw * P.osc_a2 / (P.m * P.m);
      break;
    }
    case QuantMode::rough: {
      gate("m > 0", P.m > 0.0);
      double pw = std::pow(uinf, 0.5 * (1.0 - P.q));
      double ratio = P.osc_a / P.m;
      r.constants["alpha"] = 0.5 * (1.0 - P.q);
      r.constants["u_inf_power"] = pw;
      r.rhs = ratio == 0.0 ? 0.0 : -pw * (2.0 + ratio) * ratio;
      break;
    }
    case QuantMode::theta:
    case QuantMode::elliptic_theta: {
      const double th = P.theta;
      gate("theta >= 1", th >= 1.0 && std::isfinite(th));
      gate("m > 0", P.m > 0.0);
      if (mode == QuantMode::theta) {
        gate("m^theta >= M^theta / 2", std::pow(P.m, th) >= 0.5 * std::pow(P.M, th));
      } else {
        double lim = P.M > P.m ? std::log(2.0) / std::log(P.M / P.m) : kInf;
        r.constants["theta_max"] = lim;
        gate("theta <= log 2 / log(M/m)", th <= lim);
      }
      double e = (th - 1.0) * (1.0 - P.q) / (2.0 * th + 1.0);
      double pw = th == 1.0 ? 1.0 : std::pow(uinf, e);
      r.constants["alpha"] = th * (1.0 - P.q) / (2.0 * th + 1.0);
      r.constants["u_inf_power"] = pw;
      double d = P.sup_neg_theta_defect;
      r.rhs = d == 0.0 ? 0.0 : -(2.0 * th / (2.0 * th + 1.0)) / P.m * pw * std::pow(d, 1.0 / th);
      break;
    }
    case QuantMode::directional: {
      gate("inf a on the inner region > 0", P.a_inf_rho > 0.0);
      const double q = P.q;
      const double xi2 = dot(P.xi, P.xi);
      auto fxi = [&](double a) { return (1.0 + q) / (1.0 - q) * xi2 + 0.5 * (1.0 - q) * a; };
      const double mm = 2.0 / (1.0 - q) * fxi(P.a_inf_rho);
      const double MM = 2.0 / (1.0 - q) * fxi(P.a_sup_rho);
      const double eps = MM - mm;
      double pw = std::pow(uinf, 0.5 * (1.0 - q));
      double inner = P.inf_concavity_a - MM / mm * eps;
      r.constants["alpha"] = 0.5 * (1.0 - q);
      r.constants["m_xi"] = mm;
      r.constants["M_xi"] = MM;
      r.constants["epsilon"] = eps;
      r.constants["rho"] = P.rho;
      r.constants["xi_x"] = P.xi.x;
      r.constants["xi_y"] = P.xi.y;
      r.constants["xi_mismatch"] = P.xi_mismatch;
      r.constants["u_inf_power"] = pw;
      double mean = P.lambda * P.v3 + (1.0 - P.lambda) * P.v1;
      if (mean > 0.0) r.constants["sigma"] = 0.5 * (1.0 - q) * mm / (mean * mean);
      r.rhs = inner >= 0.0 ? 0.0 : pw / mm * inner;
      break;
    }
  }
  return r;
}

BoundaryBound boundary_lower_bound(const BoundParams& P, BoundaryKind kind, Point x, double t, const Eigenpair* eig) {
  require(P.h1_certified, ErrorCode::hypothesis_violated, "boundary bounds need (H1) or (H1')");
  require(t > 0.0, ErrorCode::invalid_argument, "t must be positive");
  BoundaryBound b;
  switch (kind) {
    case BoundaryKind::interior_t0: {
      require(eig != nullptr, ErrorCode::invalid_argument, "interior bound needs the principal eigenpair");
      require(P.q >= 0.0 && P.q < 1.0, ErrorCode::invalid_argument, "q must lie in [0, 1)");
      b.exponent = (1.0 + P.gamma) / (1.0 - P.q);
      b.constant = std::pow((1.0 - P.q) * P.k / (1.0 + P.gamma), 1.0 / (1.0 - P.q));
      GridSampler phi(eig->phi);
      b.value = b.constant * std::exp(-eig->lambda * t) * std::pow(t, b.exponent) * std::max(0.0, phi(x));
      break;
    }
    case BoundaryKind::corner:
      b.exponent = (2.0 * P.beta * (1.0 + P.gamma) + (2.0 - P.beta) * (1.0 - P.q)) / (2.0 * (1.0 - P.q));
      b.value = std::pow(t, b.exponent);
      break;
    case BoundaryKind::torsion_interior:
      b.exponent = 0.5 * (2.0 + 2.0 * P.gamma + P.omega);
      b.value = std::pow(t, b.exponent);
      break;
    case BoundaryKind::torsion_corner:
      b.exponent = 2.0 + 2.0 * P.gamma + P.omega;
      b.value = std::pow(t, b.exponent);
      break;
  }
  return b;
}

}  // namespace cvlab
