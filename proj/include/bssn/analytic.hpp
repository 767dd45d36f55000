#pragma once

// Closed-form squeezing and photon-statistics predictions for coherent
// fundamental inputs with real amplitudes x, y and vacuum second-harmonic
// inputs. Implemented exactly as stated; whether they agree with the
// operator map is decided by the verification harness.

#include <optional>

namespace bssn::analytic {

/// Quadrature witness of output c:
/// kappa (x+y) [cos(eta + theta_bs/2 - theta) + 2 kappa (x+y)].
double s_fund(double kappa, double eta, double theta_bs, double theta, double x, double y);

/// Mandel Q of output c: (1 - 16 kappa^2 (x+y)^2) / 2.
double q_fund(double kappa, double x, double y);

/// Mandel Q of output C. nullopt when the denominator
/// x^4 + y^4 + 6x^2y^2 - 4xy(x^2+y^2) sin 2eta vanishes.
std::optional<double> q_sh(double kappa, double eta, double x, double y);

/// Quadrature witness of output C at theta = theta_bs/2 - pi/4:
/// kappa^2 (x^2 + y^2 - 4xy)(x^2 + y^2)(1 + sin 2eta) / 2.
double s_sh(double kappa, double eta, double x, double y);

/// Quadrature phase at which s_sh applies.
double s_sh_theta(double theta_bs);
/// Quadrature angle that goes with s_fund, and its pi-shifted partner.
double s_fund_theta(double eta, double theta_bs, bool shifted);

struct Predicates {
  bool fund_squeezing;   ///< 2 kappa (x+y) < 1
  bool fund_subpoisson;  ///< 4 kappa (x+y) > 1
  bool sh_subpoisson;    ///< x^2 + y^2 + 4xy sin 2eta < 0
  bool sh_squeezing;     ///< x^2 + y^2 - 4xy < 0
};

Predicates predicates(double kappa, double eta, double x, double y);

} // namespace bssn::analytic
