#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bssn/fock.hpp"
#include "bssn/mode_map.hpp"

using namespace bssn;

namespace {

double max_abs(const QOperator& op) {
  double m = 0.0;
  for (int k = 0; k < op.matrix().outerSize(); ++k)
    for (SparseMat::InnerIterator it(op.matrix(), k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

} // namespace

TEST_CASE("zero coupling is the 50:50 beam splitter") {
  const FockDims d(4, 4, 3, 3);
  const ModeOps x = annihilators(d);
  const OutputOps out = bssn_outputs({0.0, 0.4, 0.9}, d);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(max_abs(out[Port::c] - r * (x[Mode::a] + kI * x[Mode::b])) < 1e-15);
  CHECK(max_abs(out[Port::d] - r * (x[Mode::b] + kI * x[Mode::a])) < 1e-15);
  CHECK(max_abs(out[Port::C] - (std::cos(0.9) * x[Mode::A] + kI * std::sin(0.9) * x[Mode::B])) < 1e-15);
  CHECK(max_abs(out[Port::D] - (std::cos(0.9) * x[Mode::B] + kI * std::sin(0.9) * x[Mode::A])) < 1e-15);
}

TEST_CASE("family coefficients at kappa 0.1, eta 0, theta 0") {
  const Ansatz an = family_coefficients({0.1, 0.0, 0.0});
  const cplx z34{0.0, -2.0 * std::sqrt(2.0) * 0.1};
  CHECK(std::abs(an.z[0]) < 1e-15);
  CHECK(std::abs(an.z[1]) < 1e-15);
  CHECK(std::abs(an.z[2] - z34) < 1e-15);
  CHECK(std::abs(an.z[3] - z34) < 1e-15);
  CHECK(std::abs(an.w[0] - cplx{0.1, 0.0}) < 1e-15);
  CHECK(std::abs(an.w[1]) < 1e-15);
  CHECK(std::abs(an.w[2] - cplx{0.0, -0.2}) < 1e-15);
}

TEST_CASE("family through the general ansatz equals the closed form") {
  const FockDims d(5, 5, 4, 4);
  for (const BssnParams p : {BssnParams{0.03, 0.3, 0.5}, BssnParams{0.2, -0.7, 2.0}, BssnParams{0.1, 1.1, 0.0}}) {
    const OutputOps gen = ansatz_outputs(family_coefficients(p), d);
    const OutputOps fam = bssn_outputs(p, d);
    for (auto port : kPorts)
      CHECK(max_abs(gen[port] - fam[port]) < 1e-14);
  }
}

TEST_CASE("second-harmonic mean field for coherent inputs") {
  const FockDims d(16, 16, 3, 3);
  const auto in = coherent_product(d, {cplx{1.0, 0.0}, cplx{1.0, 0.0}, cplx{}, cplx{}});
  const cplx c = expect(in.state, bssn_output_op({0.01, 0.0, 0.0}, Port::C, d));
  // kappa (x^2 + y^2) - 2i kappa x y
  CHECK(c.real() == doctest::Approx(0.02).epsilon(1e-9));
  CHECK(c.imag() == doctest::Approx(-0.02).epsilon(1e-9));
}

TEST_CASE("reversal substitution is an involution") {
  const Ansatz an = family_coefficients({0.07, 0.4, 0.8});
  const Ansatz rev = reversal_substitute(an);
  CHECK(rev.r_f == doctest::Approx(-an.r_f));
  CHECK(rev.theta_bs == doctest::Approx(-0.8));
  CHECK(std::abs(rev.z[2] - std::conj(an.z[2])) < 1e-15);
  const Ansatz back = reversal_substitute(rev);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(back.z[i] - an.z[i]) == 0.0);
  CHECK(back.r_f == an.r_f);
}

TEST_CASE("reversed linear map inverts the linear map") {
  const FockDims d(4, 4, 3, 3);
  const ModeOps x = annihilators(d);
  Ansatz lin;
  lin.theta_bs = 0.6;
  const OutputOps fwd = linear_part(lin, x);
  const OutputOps back = linear_part(reversal_substitute(lin), fwd.as_mode_ops());
  for (int m = 0; m < 4; ++m)
    CHECK(max_abs(back.ops[m] - x.ops[m]) < 1e-15);
}

TEST_CASE("invalid parameters") {
  Ansatz an;
  an.t_f = 0.9;
  CHECK_THROWS_AS(an.validate(), Error);
  CHECK_THROWS_AS(BssnParams({-0.1, 0.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS(BssnParams({NAN, 0.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS(parse_port("e"), Error);
  CHECK(parse_port("C") == Port::C);
  CHECK(std::string(port_name(Port::d)) == "d");
  CHECK(Ansatz{}.is_linear());
  CHECK_FALSE(family_coefficients({0.1, 0.0, 0.0}).is_linear());
}
