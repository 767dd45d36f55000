#pragma once

// Verification harness: kappa-scaling of the map's residuals, analytic vs
// brute-force comparison grids, and truncation convergence studies. Ground
// truth is always the Fock-space oracle.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bssn/fock.hpp"
#include "bssn/mode_map.hpp"

namespace bssn {

/// Norms at or below this are treated as exact zeros in scaling fits.
inline constexpr double kZeroFloor = 1e-12;

/// Least-squares fit of log(value) = intercept + slope * log(kappa).
struct ScalingFit {
  std::vector<double> kappas;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double rms_log_residual = 0.0;
  bool identically_zero = false; ///< every value <= kZeroFloor
  bool fitted = false;           ///< at least two nonzero points at kappa > 0
};

ScalingFit fit_power_law(const std::vector<double>& kappas, const std::vector<double>& values);

/// Geometric grid lo..hi with `count` points (count >= 2 requires lo, hi > 0).
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

// ---------------------------------------------------------------------------
// Residual suite

struct ResidualEntry {
  std::string label;
  std::vector<double> norms;       ///< per kappa, window operator norm
  std::vector<double> norms_grown; ///< same window, every cutoff + 2
  ScalingFit fit;
  bool truncation_flag = false;
  bool passed = false;
};

struct ResidualSuiteOptions {
  FockDims dims{6, 6, 5, 5};
  std::size_t margin = 2;
  std::array<double, 2> slope_band{1.7, 2.3};
  double r2_min = 0.99;
};

struct ResidualReport {
  double eta = 0.0;
  double theta_bs = 0.0;
  std::vector<double> kappas;
  ResidualSuiteOptions options;
  std::vector<ResidualEntry> entries; ///< 12 commutators, energy, 4 reversal compositions
  bool passed = false;
  std::vector<std::string> failures;
};

/// Full (all-order) residual operators of the family at one parameter point.
std::vector<std::pair<std::string, QOperator>> family_residuals(const BssnParams& p, const FockDims& dims);

ResidualReport residual_suite(double eta, double theta_bs, const std::vector<double>& kappas,
                              const ResidualSuiteOptions& options = {});

// ---------------------------------------------------------------------------
// Analytic vs oracle comparison

enum class Quantity { eq14, eq15, eq16, eq17 };
const char* quantity_name(Quantity q) noexcept;
Quantity parse_quantity(const std::string& name);
/// Output port the quantity refers to.
Port quantity_port(Quantity q) noexcept;

enum class Verdict { match, mismatch, inconclusive };
const char* verdict_name(Verdict v) noexcept;

struct ComparisonRecord {
  Quantity quantity;
  std::string branch;
  double kappa, eta, theta_bs, theta, x, y;
  std::optional<double> analytic;
  std::optional<double> oracle;
  std::optional<double> oracle_grown;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  double truncation_delta = 0.0;
  bool truncation_ok = true;
  bool singular = false;
  bool point_agrees = false; ///< |diff| <= 1e-8 (1 + |analytic|)
};

struct QuantityVerdict {
  Quantity quantity;
  std::string branch;
  Verdict verdict = Verdict::inconclusive;
  int claimed_order = 0; ///< leading kappa-order of the closed form
  ScalingFit analytic_fit;
  ScalingFit diff_fit;
  ScalingFit oracle_fit;
  std::size_t skipped = 0;
  std::string note;
};

struct CompareSpec {
  std::vector<double> kappas;
  double eta = 0.3;
  double theta_bs = 0.5;
  double x = 1.0;
  double y = 1.0;
  std::optional<FockDims> dims; ///< nullopt: chosen from the leakage tolerance
  double leak_tol = 1e-12;
  std::size_t sh_cutoff = 5;
  bool include_zero = false; ///< add a kappa = 0 record outside the fit
};

struct CompareResult {
  FockDims dims;
  double leakage;
  bool leakage_ok;
  std::vector<ComparisonRecord> records;
  std::vector<QuantityVerdict> verdicts;
};

/// Smallest fundamental cutoff >= 10 whose Poisson tail at the larger
/// amplitude is below leak_tol.
FockDims oracle_dims(double x, double y, double leak_tol, std::size_t sh_cutoff);

/// Branch labels: eq14 has "nominal" (theta = eta + theta_bs/2) and
/// "shifted" (+pi); the others have "nominal" only.
std::vector<std::string> branches(Quantity q);

CompareResult compare_grid(Quantity q, const CompareSpec& spec);

/// One oracle evaluation (no analytic counterpart).
std::optional<double> oracle_value(Quantity q, const std::string& branch, const BssnParams& p, double x, double y,
                                   const FockDims& dims);
std::optional<double> analytic_value(Quantity q, const std::string& branch, const BssnParams& p, double x, double y);
double branch_theta(Quantity q, const std::string& branch, const BssnParams& p);

// ---------------------------------------------------------------------------
// Truncation sweep

enum class ObservableKind { mean_n, mandel_q, witness };
ObservableKind parse_observable(const std::string& name);
const char* observable_name(ObservableKind k) noexcept;

struct ObservableSpec {
  std::string target = "c"; ///< output port c/d/C/D or input mode a/b/A/B
  ObservableKind kind = ObservableKind::mean_n;
  double theta = 0.0;
  BssnParams params{};
  double x = 1.0;
  double y = 1.0;
};

struct TruncationReport {
  std::vector<FockDims> ladder;
  std::vector<std::optional<double>> values;
  std::vector<double> differences; ///< |v_{i+1} - v_i|
  bool converged = false;
  bool blowup = false;
};

std::optional<double> evaluate_observable(const ObservableSpec& spec, const FockDims& dims);

TruncationReport truncation_sweep(const ObservableSpec& spec, const FockDims& base,
                                  const std::array<std::size_t, 4>& step = {2, 2, 2, 2}, std::size_t rungs = 3);

} // namespace bssn
