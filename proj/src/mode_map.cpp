#include "bssn/mode_map.hpp"

#include <cmath>
#include <numbers>

namespace bssn {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

} // namespace

const char* port_name(Port p) noexcept {
  switch (p) {
  case Port::c: return "c";
  case Port::d: return "d";
  case Port::C: return "C";
  case Port::D: return "D";
  }
  return "?";
}

Port parse_port(const std::string& name) {
  for (auto p : kPorts)
    if (name == port_name(p))
      return p;
  throw Error(Error::Kind::InvalidArgument, "unknown port '" + name + "' (expected c, d, C or D)");
}

void Ansatz::validate() const {
  if (!std::isfinite(t_f) || !std::isfinite(r_f) || !std::isfinite(theta_bs))
    throw Error(Error::Kind::InvalidArgument, "ansatz coefficients must be finite");
  if (std::abs(t_f * t_f + r_f * r_f - 1.0) > 1e-12)
    throw Error(Error::Kind::InvalidArgument, "ansatz requires t_f^2 + r_f^2 = 1");
  for (auto v : z)
    if (!finite(v))
      throw Error(Error::Kind::InvalidArgument, "ansatz z coefficients must be finite");
  for (auto v : w)
    if (!finite(v))
      throw Error(Error::Kind::InvalidArgument, "ansatz w coefficients must be finite");
}

bool Ansatz::is_linear() const noexcept {
  for (auto v : z)
    if (v != cplx{})
      return false;
  for (auto v : w)
    if (v != cplx{})
      return false;
  return true;
}

void BssnParams::validate() const {
  if (!std::isfinite(kappa) || !std::isfinite(eta) || !std::isfinite(theta_bs))
    throw Error(Error::Kind::InvalidArgument, "BSSN parameters must be finite");
  if (kappa < 0.0)
    throw Error(Error::Kind::InvalidArgument, "kappa must be >= 0");
}

OutputOps linear_part(const Ansatz& an, const ModeOps& x) {
  const double ts = std::cos(an.theta_bs);
  const double rs = std::sin(an.theta_bs);
  const auto& a = x[Mode::a];
  const auto& b = x[Mode::b];
  const auto& A = x[Mode::A];
  const auto& B = x[Mode::B];
  return OutputOps{{an.t_f * a + (kI * an.r_f) * b, an.t_f * b + (kI * an.r_f) * a,
                    ts * A + (kI * rs) * B, ts * B + (kI * rs) * A}};
}

OutputOps nonlinear_part(const Ansatz& an, const ModeOps& x) {
  const auto& a = x[Mode::a];
  const auto& b = x[Mode::b];
  const auto& A = x[Mode::A];
  const auto& B = x[Mode::B];
  const QOperator ad = a.adjoint();
  const QOperator bd = b.adjoint();
  const QOperator adA = ad * A, adB = ad * B, bdA = bd * A, bdB = bd * B;
  const QOperator aa = a * a, bb = b * b, ab = a * b;
  const auto& z = an.z;
  const auto& w = an.w;

  QOperator c = z[0] * adA + z[1] * adB + z[2] * bdA + z[3] * bdB;
  QOperator d = z[3] * adA + z[2] * adB + z[1] * bdA + z[0] * bdB;
  const QOperator sum = aa + bb;
  const QOperator diff = aa - bb;
  QOperator C = w[0] * sum + w[1] * diff + w[2] * ab;
  QOperator D = w[0] * sum - w[1] * diff + w[2] * ab;
  return OutputOps{{std::move(c), std::move(d), std::move(C), std::move(D)}};
}

OutputOps map_ops(const Ansatz& an, const ModeOps& args) {
  an.validate();
  OutputOps out = linear_part(an, args);
  if (an.is_linear())
    return out;
  const OutputOps nl = nonlinear_part(an, args);
  for (int p = 0; p < 4; ++p)
    out.ops[p] += nl.ops[p];
  return out;
}

QOperator ansatz_output_op(const Ansatz& ansatz, Port port, const FockDims& dims) {
  return ansatz_outputs(ansatz, dims)[port];
}

OutputOps ansatz_outputs(const Ansatz& ansatz, const FockDims& dims) {
  return map_ops(ansatz, annihilators(dims));
}

QOperator bssn_output_op(const BssnParams& p, Port port, const FockDims& dims) {
  p.validate();
  const ModeOps x = annihilators(dims);
  const auto& a = x[Mode::a];
  const auto& b = x[Mode::b];
  const auto& A = x[Mode::A];
  const auto& B = x[Mode::B];
  const double s = std::sin(p.eta);
  const double co = std::cos(p.eta);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const double th = p.theta_bs;

  switch (port) {
  case Port::c:
  case Port::d: {
    const auto& own = port == Port::c ? a : b;
    const auto& other = port == Port::c ? b : a;
    const cplx k = -2.0 * kI * std::numbers::sqrt2 * p.kappa * std::exp(kI * (th / 2.0));
    return inv_sqrt2 * (own + kI * other) + k * ((-s * own.adjoint() + co * other.adjoint()) * (A + B));
  }
  case Port::C:
  case Port::D: {
    const auto& own = port == Port::C ? A : B;
    const auto& other = port == Port::C ? B : A;
    const cplx sum_coeff = p.kappa * std::exp(kI * ((th + 2.0 * p.eta) / 2.0));
    const cplx cross_coeff = -2.0 * kI * p.kappa * std::exp(kI * ((th - 2.0 * p.eta) / 2.0));
    return std::cos(th) * own + (kI * std::sin(th)) * other + sum_coeff * (a * a + b * b) +
           cross_coeff * (a * b);
  }
  }
  throw Error(Error::Kind::InvalidArgument, "bad port");
}

OutputOps bssn_outputs(const BssnParams& params, const FockDims& dims) {
  return OutputOps{{bssn_output_op(params, Port::c, dims), bssn_output_op(params, Port::d, dims),
                    bssn_output_op(params, Port::C, dims), bssn_output_op(params, Port::D, dims)}};
}

Ansatz family_coefficients(const BssnParams& p) {
  p.validate();
  Ansatz an;
  an.theta_bs = p.theta_bs;
  const double x12 = -2.0 * std::numbers::sqrt2 * p.kappa * std::sin(p.eta);
  const double x34 = 2.0 * std::numbers::sqrt2 * p.kappa * std::cos(p.eta);
  const cplx phase = std::exp(-kI * ((std::numbers::pi - p.theta_bs) / 2.0));
  an.z = {x12 * phase, x12 * phase, x34 * phase, x34 * phase};
  an.w = {p.kappa * std::exp(kI * ((p.theta_bs + 2.0 * p.eta) / 2.0)), cplx{},
          -2.0 * kI * p.kappa * std::exp(kI * ((p.theta_bs - 2.0 * p.eta) / 2.0))};
  return an;
}

Ansatz reversal_substitute(const Ansatz& an) {
  Ansatz out = an;
  out.r_f = -an.r_f;
  out.theta_bs = -an.theta_bs;
  for (auto& v : out.z)
    v = std::conj(v);
  for (auto& v : out.w)
    v = std::conj(v);
  return out;
}

} // namespace bssn
