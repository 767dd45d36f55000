#include <doctest.h>

#include <cmath>

#include "bssn/fock.hpp"

using namespace bssn;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Direct series, used as the reference for the upward tail sum.
double poisson_head(double mean, int cutoff) {
  double s = 0.0;
  for (int n = 0; n < cutoff; ++n)
    s += std::exp(-mean) * std::pow(mean, n) / factorial(n);
  return s;
}

} // namespace

TEST_CASE("index and occupation are inverse") {
  const FockDims d(3, 4, 2, 5);
  CHECK(d.total() == 120);
  for (std::size_t i = 0; i < d.total(); ++i)
    CHECK(d.index(d.occupation(i)) == i);
  CHECK(d.index({1, 2, 1, 3}) == ((1 * 4 + 2) * 2 + 1) * 5 + 3);
  CHECK(d.stride(Mode::B) == 1);
  CHECK(d.stride(Mode::a) == 40);
}

TEST_CASE("cutoffs below two are rejected") {
  CHECK_THROWS_AS(FockDims(1, 4, 4, 4), Error);
  CHECK_THROWS_AS(FockDims(4, 4, 4, 4).index({4, 0, 0, 0}), Error);
}

TEST_CASE("ladder matrix elements") {
  const FockDims d(5, 3, 3, 3);
  const QOperator a = ladder(d, Mode::a, Ladder::annihilate);
  const QOperator ad = ladder(d, Mode::a, Ladder::create);
  for (std::size_t n = 1; n < 5; ++n) {
    const auto from = d.index({n, 1, 2, 0});
    const auto to = d.index({n - 1, 1, 2, 0});
    CHECK(std::abs(a.element(to, from) - std::sqrt(double(n))) < 1e-15);
    CHECK(std::abs(ad.element(from, to) - std::sqrt(double(n))) < 1e-15);
  }
  // [a, a+] = 1 except on the top level, where truncation gives 1 - n.
  const QOperator comm = commutator(a, ad);
  CHECK(std::abs(comm.element(d.index({2, 0, 0, 0}), d.index({2, 0, 0, 0})) - 1.0) < 1e-14);
  CHECK(std::abs(comm.element(d.index({4, 0, 0, 0}), d.index({4, 0, 0, 0})) + 4.0) < 1e-14);
  CHECK(window_norm(comm - identity(d), interior_window(d, 1).indices(d)) < 1e-14);
}

TEST_CASE("coherent leakage is the Poisson tail") {
  const FockDims d(8, 2, 2, 2);
  const auto cs = coherent(d, Mode::a, cplx{2.0, 0.0});
  CHECK(cs.leakage == doctest::Approx(1.0 - poisson_head(4.0, 8)).epsilon(1e-10));
  CHECK(cs.state.amplitudes().norm() == doctest::Approx(1.0));

  // Truncated Poisson distribution, renormalized.
  double num = 0.0;
  for (int n = 0; n < 8; ++n)
    num += n * std::exp(-4.0) * std::pow(4.0, n) / factorial(n);
  const double mean = num / poisson_head(4.0, 8);
  CHECK(expect(cs.state, number_op(d, Mode::a)).real() == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("poisson tail stays accurate below double epsilon") {
  CHECK(poisson_tail(1.0, 10) == doctest::Approx(1.0 - poisson_head(1.0, 10)).epsilon(1e-6));
  const double t = poisson_tail(1.0, 15);
  CHECK(t > 0.0);
  CHECK(t < 1e-12);
  // Leading term dominates far in the tail.
  CHECK(t == doctest::Approx(std::exp(-1.0) / factorial(15) * (1.0 + 1.0 / 16 + 1.0 / (16 * 17) + 1.0 / (16 * 17 * 18))).epsilon(1e-6));
  CHECK(poisson_tail(0.0, 3) == 0.0);
  CHECK(poisson_tail(2.0, 0) == 1.0);
}

TEST_CASE("coherent product leakage combines modes") {
  const FockDims d(6, 7, 3, 3);
  const auto cs = coherent_product(d, {cplx{1.0, 0.0}, cplx{0.0, 1.0}, cplx{}, cplx{}});
  const double ta = 1.0 - poisson_head(1.0, 6);
  const double tb = 1.0 - poisson_head(1.0, 7);
  CHECK(cs.leakage == doctest::Approx(1.0 - (1.0 - ta) * (1.0 - tb)).epsilon(1e-9));
  // Phase of the b amplitude survives: <b> = i * (norm-corrected) amplitude.
  const cplx mb = expect(cs.state, ladder(d, Mode::b, Ladder::annihilate));
  CHECK(std::abs(mb.real()) < 1e-14);
  CHECK(mb.imag() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("number states and expectations") {
  const FockDims d(4, 4, 3, 3);
  const QState s = number_state(d, {3, 1, 2, 0});
  CHECK(expect(s, number_op(d, Mode::a)).real() == doctest::Approx(3.0));
  CHECK(expect(s, number_op(d, Mode::A)).real() == doctest::Approx(2.0));
  CHECK(std::abs(s.amplitude({3, 1, 2, 0}) - 1.0) < 1e-15);

  const QOperator a = ladder(d, Mode::a, Ladder::annihilate);
  const QOperator x = 0.5 * (a + a.adjoint());
  CHECK(variance(vacuum(d), x) == doctest::Approx(0.25));
  CHECK(variance(number_state(d, {2, 0, 0, 0}), x) == doctest::Approx(0.25 * (2 * 2 + 1)));
  // |3> is the top level: a+ annihilates it, leaving only <a+ a> / 4.
  CHECK(variance(s, x) == doctest::Approx(0.75));
}

TEST_CASE("window norm of the annihilator") {
  const FockDims d(6, 2, 2, 2);
  const Window w{{3, 0, 0, 0}};
  CHECK(w.indices(d).size() == 4);
  CHECK(window_norm(ladder(d, Mode::a, Ladder::annihilate), w.indices(d)) == doctest::Approx(std::sqrt(3.0)));
  CHECK_FALSE(Window{{6, 0, 0, 0}}.fits_in(d));
  CHECK_THROWS_AS(interior_window(FockDims(3, 3, 3, 3), 3), Error);
}

TEST_CASE("projector keeps exactly the window") {
  const FockDims d(5, 5, 4, 4);
  const QOperator p = interior_projector(d, 2);
  CHECK(p.matrix().nonZeros() == 3 * 3 * 2 * 2);
  CHECK(window_norm(p * p - p, interior_window(d, 0).indices(d)) < 1e-15);
}

TEST_CASE("mismatched spaces are rejected") {
  const QOperator x = identity(FockDims(3, 3, 3, 3));
  const QOperator y = identity(FockDims(3, 3, 3, 4));
  CHECK_THROWS_AS(x + y, Error);
  CHECK_THROWS_AS(x * y, Error);
  CHECK_THROWS_AS(expect(vacuum(FockDims(3, 3, 3, 4)), x), Error);
  CHECK_THROWS_AS(QState(FockDims(2, 2, 2, 2), Vec::Zero(16)), Error);
}
