#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bssn/harness.hpp"
#include "bssn/analytic.hpp"

using namespace bssn;

TEST_CASE("power-law fit recovers exponent") {
  const auto k = geometric_grid(1e-3, 1e-1, 7);
  REQUIRE(k.size() == 7);
  CHECK(k.front() == 1e-3);
  CHECK(k.back() == 1e-1);
  CHECK(k[1] / k[0] == doctest::Approx(k[6] / k[5]));
  std::vector<double> v;
  for (double x : k)
    v.push_back(3.0 * x * x);
  const ScalingFit f = fit_power_law(k, v);
  CHECK(f.fitted);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.rms_log_residual < 1e-12);

  const ScalingFit z = fit_power_law(k, std::vector<double>(7, 0.0));
  CHECK(z.identically_zero);
  CHECK_FALSE(z.fitted);
  CHECK_THROWS_AS(fit_power_law(k, {1.0}), Error);
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 3), Error);
  CHECK(linear_grid(0.0, 0.3, 31)[12] == doctest::Approx(0.12));
}

TEST_CASE("residual suite at zero coupling") {
  const ResidualReport r = residual_suite(0.3, 0.5, {0.0});
  CHECK(r.passed);
  REQUIRE(r.entries.size() == 17);
  for (const auto& e : r.entries)
    CHECK(e.norms[0] <= 1e-12);
}

TEST_CASE("energy residual is second order and nonzero") {
  const BssnParams p{0.01, 0.3, 0.5};
  const FockDims d(6, 6, 5, 5);
  const auto win = interior_window(d, 2).indices(d);
  for (const auto& [label, op] : family_residuals(p, d))
    if (label == "energy")
      CHECK(window_norm(op, win) > 1e-6);
}

TEST_CASE("residual suite scaling") {
  const ResidualReport r = residual_suite(0.3, 0.5, geometric_grid(1e-3, 1e-1, 4));
  CHECK(r.passed);
  for (const auto& e : r.entries) {
    CHECK_FALSE(e.truncation_flag);
    if (!e.fit.identically_zero)
      CHECK(e.fit.slope == doctest::Approx(2.0).epsilon(0.05));
  }
  ResidualSuiteOptions bad;
  bad.margin = 1;
  CHECK_THROWS_AS(residual_suite(0.3, 0.5, {0.01}, bad), Error);
}

TEST_CASE("oracle dims follow the leakage tolerance") {
  const FockDims d = oracle_dims(1.0, 1.0, 1e-12, 5);
  // Smallest n with P(N >= n) < 1e-12 for mean 1.
  std::size_t n = 10;
  while (poisson_tail(1.0, n) >= 1e-12)
    ++n;
  CHECK(d == FockDims(n, n, 5, 5));
  CHECK(n == 15);
  CHECK(oracle_dims(0.5, 0.1, 1e-8, 4).cutoff(Mode::a) == 10);
}

TEST_CASE("Mandel Q of port c at zero coupling") {
  CompareSpec spec;
  spec.kappas = geometric_grid(1e-3, 3e-2, 5);
  spec.include_zero = true;
  const CompareResult r = compare_grid(Quantity::eq15, spec);
  CHECK(r.leakage_ok);
  const auto& zero = r.records.front();
  REQUIRE(zero.kappa == 0.0);
  CHECK(*zero.analytic == 0.5);
  CHECK(std::abs(*zero.oracle) < 1e-9);
  CHECK_FALSE(zero.point_agrees);
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].verdict == Verdict::mismatch);
}

TEST_CASE("both branches of eq14 are evaluated") {
  CompareSpec spec;
  spec.kappas = geometric_grid(1e-3, 3e-2, 5);
  const CompareResult r = compare_grid(Quantity::eq14, spec);
  REQUIRE(r.verdicts.size() == 2);
  CHECK(r.verdicts[0].branch == "nominal");
  CHECK(r.verdicts[1].branch == "shifted");
  CHECK(r.records.size() == 10);
  CHECK(r.records[5].theta == doctest::Approx(r.records[0].theta + std::numbers::pi));
}

TEST_CASE("a vanishing closed form against a nonzero oracle") {
  // eq17 at x = y = 0 is identically zero, but C C+ picks up kappa^2 <a^2 a+^2>
  // from the vacuum, so the oracle witness is O(kappa^2).
  CompareSpec spec;
  spec.kappas = geometric_grid(1e-3, 3e-2, 5);
  spec.x = 0.0;
  spec.y = 0.0;
  spec.dims = FockDims(4, 4, 3, 3);
  const CompareResult r = compare_grid(Quantity::eq17, spec);
  CHECK(r.verdicts[0].analytic_fit.identically_zero);
  CHECK(r.verdicts[0].oracle_fit.slope == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(r.verdicts[0].verdict == Verdict::mismatch);
}

TEST_CASE("a grid without positive kappa gives no verdict") {
  CompareSpec spec;
  spec.kappas = {0.0};
  spec.dims = FockDims(4, 4, 3, 3);
  const CompareResult r = compare_grid(Quantity::eq17, spec);
  CHECK(r.verdicts[0].verdict == Verdict::inconclusive);
  CHECK(r.verdicts[0].note.find("fewer than three") != std::string::npos);
}

TEST_CASE("singular closed-form points are skipped") {
  CompareSpec spec;
  spec.kappas = geometric_grid(1e-3, 3e-2, 3);
  spec.eta = std::numbers::pi / 4;
  spec.dims = FockDims(10, 10, 4, 4);
  const CompareResult r = compare_grid(Quantity::eq16, spec);
  for (const auto& rec : r.records)
    CHECK(rec.singular);
  CHECK(r.verdicts[0].skipped == 3);
  CHECK(r.verdicts[0].verdict == Verdict::inconclusive);
}

TEST_CASE("truncation sweep of a coherent mean photon number") {
  ObservableSpec spec;
  spec.target = "a";
  spec.x = 1.5;
  spec.y = 0.0;
  const TruncationReport r = truncation_sweep(spec, FockDims(12, 2, 2, 2));
  REQUIRE(r.values.size() == 3);
  // Renormalized truncated Poisson mean at each cutoff.
  for (std::size_t i = 0; i < 3; ++i) {
    const int n = 12 + 2 * static_cast<int>(i);
    double w = 0.0, m = 0.0, term = std::exp(-2.25);
    for (int k = 0; k < n; ++k) {
      w += term;
      m += k * term;
      term *= 2.25 / (k + 1);
    }
    CHECK(*r.values[i] == doctest::Approx(m / w).epsilon(1e-12));
  }
  CHECK(r.differences[1] < r.differences[0]);
  CHECK_FALSE(r.blowup);
  // The Poisson tail beyond 14 is ~5e-8 of the mean, so 14 -> 16 still moves the
  // value by more than 1e-8 (1 + |v|): not yet converged.
  CHECK(r.differences[1] > 1e-8 * (1.0 + *r.values[2]));
  CHECK_FALSE(r.converged);
  const TruncationReport deeper = truncation_sweep(spec, FockDims(20, 2, 2, 2));
  CHECK(deeper.converged);
}

TEST_CASE("vacuum observables do not depend on the cutoff") {
  ObservableSpec spec;
  spec.target = "c";
  spec.kind = ObservableKind::witness;
  spec.x = 0.0;
  spec.y = 0.0;
  spec.params = {0.02, 0.3, 0.5};
  const TruncationReport r = truncation_sweep(spec, FockDims(3, 3, 3, 3));
  CHECK(*r.values[0] == *r.values[1]);
  CHECK(*r.values[1] == *r.values[2]);
  CHECK(r.converged);
}

TEST_CASE("second-harmonic photon number converges") {
  ObservableSpec spec;
  spec.target = "C";
  spec.params = {0.01, 0.3, 0.5};
  const TruncationReport r = truncation_sweep(spec, FockDims(15, 15, 3, 3), {0, 0, 2, 2});
  CHECK(r.converged);
  CHECK(r.ladder[2] == FockDims(15, 15, 7, 7));
}

TEST_CASE("names round trip") {
  for (auto q : {Quantity::eq14, Quantity::eq15, Quantity::eq16, Quantity::eq17})
    CHECK(parse_quantity(quantity_name(q)) == q);
  CHECK_THROWS_AS(parse_quantity("eq18"), Error);
  CHECK(parse_observable("mandel_q") == ObservableKind::mandel_q);
  CHECK_THROWS_AS(parse_observable("mean"), Error);
  CHECK(quantity_port(Quantity::eq16) == Port::C);
  CHECK(std::string(verdict_name(Verdict::inconclusive)) == "INCONCLUSIVE");
}
