#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bssn/analytic.hpp"

using namespace bssn::analytic;

TEST_CASE("fundamental squeezing") {
  // At theta = eta + theta_bs/2 the cosine is 1: kappa s (1 + 2 kappa s).
  CHECK(s_fund(0.1, 0.3, 0.5, 0.55, 1.0, 1.0) == doctest::Approx(0.28));
  CHECK(s_fund(0.1, 0.3, 0.5, 0.55 + std::numbers::pi, 1.0, 1.0) == doctest::Approx(0.2 * (-1.0 + 0.4)));
  CHECK(s_fund(0.0, 0.3, 0.5, 0.0, 1.0, 1.0) == 0.0);
  CHECK(s_fund_theta(0.3, 0.5, false) == doctest::Approx(0.55));
  CHECK(s_fund_theta(0.3, 0.5, true) == doctest::Approx(0.55 + std::numbers::pi));
}

TEST_CASE("fundamental Mandel Q crosses zero at 4 kappa (x + y) = 1") {
  CHECK(q_fund(0.0, 1.0, 1.0) == 0.5);
  CHECK(q_fund(0.1, 1.0, 1.0) == doctest::Approx(0.18));
  CHECK(std::abs(q_fund(0.125, 1.0, 1.0)) < 1e-15);
  CHECK(std::abs(q_fund(0.05, 2.0, 3.0)) < 1e-15);
  CHECK(q_fund(0.13, 1.0, 1.0) < 0.0);
}

TEST_CASE("second-harmonic Mandel Q") {
  // x = y = 1: 16 kappa^2 (2 + 4 s)(2) / (8 - 8 s), s = sin 2eta.
  CHECK(*q_sh(0.1, 0.0, 1.0, 1.0) == doctest::Approx(0.08));
  const double eta = -std::numbers::pi / 12; // sin 2eta = -1/2
  CHECK(std::abs(*q_sh(0.1, eta, 1.0, 1.0)) < 1e-15);
  CHECK(std::abs(*q_sh(0.3, eta, 0.7, 0.7)) < 1e-15);
  CHECK_FALSE(q_sh(0.1, std::numbers::pi / 4, 1.0, 1.0).has_value());
  CHECK_FALSE(q_sh(0.1, 0.0, 0.0, 0.0).has_value());
}

TEST_CASE("second-harmonic squeezing sign") {
  CHECK(s_sh(0.1, 0.0, 1.0, 1.0) == doctest::Approx(-0.02));
  CHECK(s_sh_theta(0.5) == doctest::Approx(0.25 - std::numbers::pi / 4));
  CHECK(std::abs(s_sh(0.1, -std::numbers::pi / 4, 1.0, 1.0)) < 1e-18);

  // Negative wherever x^2 + y^2 - 4xy < 0 and sin 2eta != -1.
  unsigned state = 12345u;
  auto uniform = [&](double lo, double hi) {
    state = state * 1664525u + 1013904223u;
    return lo + (hi - lo) * (state / 4294967296.0);
  };
  int tested = 0;
  while (tested < 1000) {
    const double k = uniform(1e-3, 0.5), eta = uniform(-3.0, 3.0), x = uniform(0.0, 2.0), y = uniform(0.0, 2.0);
    if (!(x * x + y * y - 4 * x * y < 0.0) || std::abs(std::sin(2 * eta) + 1.0) < 1e-9)
      continue;
    CHECK(s_sh(k, eta, x, y) < 0.0);
    ++tested;
  }
}

TEST_CASE("threshold predicates") {
  const auto p = predicates(0.1, 0.0, 1.0, 1.0);
  CHECK(p.fund_squeezing);
  CHECK_FALSE(p.fund_subpoisson);
  CHECK_FALSE(p.sh_subpoisson);
  CHECK(p.sh_squeezing);
  CHECK(predicates(0.2, 0.0, 1.0, 1.0).fund_subpoisson);
  CHECK(predicates(0.1, -std::numbers::pi / 4, 1.0, 1.0).sh_subpoisson);
}
