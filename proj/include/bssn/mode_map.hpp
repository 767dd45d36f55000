#pragma once

// Output-mode operators of the second-order-nonlinear beam splitter, built in
// the Heisenberg picture as polynomials in the input ladder operators.
//
// Ports: c, d are the fundamental outputs, C, D their second-harmonic
// counterparts. Inputs a, b (fundamental) and A, B (second harmonic).

#include <array>
#include <cmath>
#include <string>

#include "bssn/fock.hpp"

namespace bssn {

enum class Port : int { c = 0, d = 1, C = 2, D = 3 };
inline constexpr std::array<Port, 4> kPorts{Port::c, Port::d, Port::C, Port::D};

const char* port_name(Port p) noexcept;
Port parse_port(const std::string& name);

/// General first-order coefficient set.
///
///   c = t_f a + i r_f b + z1 a+A + z2 a+B + z3 b+A + z4 b+B
///   d = t_f b + i r_f a + z4 a+A + z3 a+B + z2 b+A + z1 b+B
///   C = t_s A + i r_s B + w1 (a^2 + b^2) + w2 (a^2 - b^2) + w3 ab
///   D = t_s B + i r_s A + w1 (a^2 + b^2) - w2 (a^2 - b^2) + w3 ab
///
/// with t_s = cos(theta_bs), r_s = sin(theta_bs). A negative r_f together
/// with a negated theta_bs encodes the i -> -i of the reversed map.
struct Ansatz {
  double t_f = 1.0 / std::sqrt(2.0);
  double r_f = 1.0 / std::sqrt(2.0);
  double theta_bs = 0.0;
  std::array<cplx, 4> z{};
  std::array<cplx, 3> w{};

  /// Throws unless t_f^2 + r_f^2 = 1 within 1e-12 and all entries are finite.
  void validate() const;
  bool is_linear() const noexcept;
};

/// Reduced two-parameter family: coupling strength kappa >= 0, material
/// phase eta, second-harmonic splitting angle theta_bs.
struct BssnParams {
  double kappa = 0.0;
  double eta = 0.0;
  double theta_bs = 0.0;

  void validate() const;
};

/// Output operators indexed by Port.
struct OutputOps {
  std::array<QOperator, 4> ops;

  const QOperator& operator[](Port p) const { return ops[static_cast<int>(p)]; }
  /// Reinterpret the outputs as the argument set of another map.
  ModeOps as_mode_ops() const { return ModeOps{ops}; }
};

/// Linear (beam-splitter) part evaluated at arbitrary argument operators.
OutputOps linear_part(const Ansatz& ansatz, const ModeOps& args);
/// z/w terms evaluated at arbitrary argument operators.
OutputOps nonlinear_part(const Ansatz& ansatz, const ModeOps& args);
/// Full map: linear + nonlinear.
OutputOps map_ops(const Ansatz& ansatz, const ModeOps& args);

QOperator ansatz_output_op(const Ansatz& ansatz, Port port, const FockDims& dims);
OutputOps ansatz_outputs(const Ansatz& ansatz, const FockDims& dims);

/// Closed-form family operators, e.g.
///   c = (a + ib)/sqrt2 - 2i sqrt2 kappa (-a+ sin eta + b+ cos eta)(A + B) e^{i theta_bs/2}.
QOperator bssn_output_op(const BssnParams& params, Port port, const FockDims& dims);
OutputOps bssn_outputs(const BssnParams& params, const FockDims& dims);

/// Ansatz coefficients of the reduced family (50:50 fundamental splitting).
Ansatz family_coefficients(const BssnParams& params);

/// Coefficients of the reversed map: conjugated z/w and i -> -i in the
/// linear part. An involution.
Ansatz reversal_substitute(const Ansatz& ansatz);

} // namespace bssn
