#include "bssn/analytic.hpp"

#include <cmath>
#include <numbers>

namespace bssn::analytic {

double s_fund(double kappa, double eta, double theta_bs, double theta, double x, double y) {
  const double s = x + y;
  return kappa * s * (std::cos(eta + 0.5 * theta_bs - theta) + 2.0 * kappa * s);
}

double q_fund(double kappa, double x, double y) {
  const double s = x + y;
  return 0.5 * (1.0 - 16.0 * kappa * kappa * s * s);
}

std::optional<double> q_sh(double kappa, double eta, double x, double y) {
  const double x2 = x * x, y2 = y * y;
  const double s2e = std::sin(2.0 * eta);
  const double denom = x2 * x2 + y2 * y2 + 6.0 * x2 * y2 - 4.0 * x * y * (x2 + y2) * s2e;
  if (std::abs(denom) <= 1e-300)
    return std::nullopt;
  return 16.0 * kappa * kappa * (x2 + y2 + 4.0 * x * y * s2e) * (x2 + y2) * x2 * y2 / denom;
}

double s_sh(double kappa, double eta, double x, double y) {
  const double x2 = x * x, y2 = y * y;
  return 0.5 * kappa * kappa * (x2 + y2 - 4.0 * x * y) * (x2 + y2) * (1.0 + std::sin(2.0 * eta));
}

double s_sh_theta(double theta_bs) { return 0.5 * theta_bs - 0.25 * std::numbers::pi; }

double s_fund_theta(double eta, double theta_bs, bool shifted) {
  return eta + 0.5 * theta_bs + (shifted ? std::numbers::pi : 0.0);
}

Predicates predicates(double kappa, double eta, double x, double y) {
  const double s = x + y;
  return Predicates{
      2.0 * kappa * s < 1.0,
      4.0 * kappa * s > 1.0,
      x * x + y * y + 4.0 * x * y * std::sin(2.0 * eta) < 0.0,
      x * x + y * y - 4.0 * x * y < 0.0,
  };
}

} // namespace bssn::analytic
