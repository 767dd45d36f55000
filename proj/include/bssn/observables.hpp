#pragma once

// Quadrature and photon-counting statistics of an arbitrary mode operator m
// in a given input state. Output-mode statistics are evaluated in the
// Heisenberg picture: m is a polynomial in input ladder operators and the
// state is the input state.

#include <optional>
#include <vector>

#include "bssn/fock.hpp"

namespace bssn {

/// Mean photon numbers below this are treated as zero (Q undefined).
inline constexpr double kUndefinedMeanFloor = 1e-30;

/// X_theta = (m+ e^{i theta} + m e^{-i theta}) / 2.
QOperator quadrature_op(const QOperator& m, double theta);

/// Var(X_theta) - 1/4.
double squeeze_witness(const QState& state, const QOperator& m, double theta);

/// Mandel Q of N = m+ m; nullopt when <N> vanishes.
std::optional<double> mandel_q(const QState& state, const QOperator& m);

/// n uniform points on [0, 2 pi).
std::vector<double> theta_grid(std::size_t n);

struct StatsResult {
  double mean_n = 0.0;
  double mean_n2 = 0.0;
  std::optional<double> q;
  std::vector<double> thetas;
  std::vector<double> witness;
  double min_witness = 0.0;
  double argmin_theta = 0.0;
};

StatsResult stats(const QState& state, const QOperator& m, const std::vector<double>& thetas);

} // namespace bssn
