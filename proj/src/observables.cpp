#include "bssn/observables.hpp"

#include <cmath>
#include <numbers>

namespace bssn {

namespace {

struct NumberMoments {
  double mean;
  double mean_sq;
};

// <N> = |m psi|^2 and <N^2> = |N psi|^2 with N = m+ m.
NumberMoments number_moments(const QState& state, const QOperator& m) {
  if (!(state.dims() == m.dims()))
    throw Error(Error::Kind::DimensionMismatch, "state and operator live on different spaces");
  const Vec m_psi = m.apply(state);
  const Vec n_psi = m.matrix().adjoint() * m_psi;
  return {m_psi.squaredNorm(), n_psi.squaredNorm()};
}

} // namespace

QOperator quadrature_op(const QOperator& m, double theta) {
  return 0.5 * (std::exp(kI * theta) * m.adjoint() + std::exp(-kI * theta) * m);
}

double squeeze_witness(const QState& state, const QOperator& m, double theta) {
  return variance(state, quadrature_op(m, theta)) - 0.25;
}

std::optional<double> mandel_q(const QState& state, const QOperator& m) {
  const auto [n, n2] = number_moments(state, m);
  if (n <= kUndefinedMeanFloor)
    return std::nullopt;
  return (n2 - n * n - n) / n;
}

std::vector<double> theta_grid(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
  return out;
}

StatsResult stats(const QState& state, const QOperator& m, const std::vector<double>& thetas) {
  StatsResult r;
  const auto [n, n2] = number_moments(state, m);
  r.mean_n = n;
  r.mean_n2 = n2;
  if (n > kUndefinedMeanFloor)
    r.q = (n2 - n * n - n) / n;
  r.thetas = thetas;
  r.witness.reserve(thetas.size());
  for (double th : thetas)
    r.witness.push_back(squeeze_witness(state, m, th));
  if (!r.witness.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.witness.size(); ++i)
      if (r.witness[i] < r.witness[best])
        best = i;
    r.min_witness = r.witness[best];
    r.argmin_theta = thetas[best];
  }
  return r;
}

} // namespace bssn
