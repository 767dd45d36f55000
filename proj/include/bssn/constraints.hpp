#pragma once

// Numerical re-derivation of the coupling coefficients.
//
// The 14 real unknowns are ordered
//   (Re z1, Im z1, Re z2, Im z2, Re z3, Im z3, Re z4, Im z4,
//    Re w1, Im w1, Re w2, Im w2, Re w3, Im w3)
// with t_f = r_f = 1/sqrt2 and the second-harmonic angle held fixed.
//
// Every constraint residual is expanded to first order in the unknowns; the
// first-order part is real-linear in them, so probing with the 14 unit
// vectors assembles a matrix whose nullspace is the set of admissible
// coefficient vectors.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bssn/fock.hpp"
#include "bssn/mode_map.hpp"

namespace bssn {

inline constexpr int kUnknowns = 14;
using UnknownVector = Eigen::Matrix<double, kUnknowns, 1>;

const std::array<std::string, kUnknowns>& unknown_labels();

UnknownVector flatten(const Ansatz& ansatz);
/// 50:50 fundamental ansatz at `theta_bs` carrying the given unknowns.
Ansatz with_unknowns(double theta_bs, const UnknownVector& v);

enum class ConstraintKind { commutator, energy, reversibility };
const char* constraint_kind_name(ConstraintKind k) noexcept;

struct ConstraintSelection {
  bool commutators = true;
  bool energy = true;
  bool reversibility = true;
};

/// [left, right] or [left, right+], minus the identity where canonical.
struct CommutatorSpec {
  const char* label;
  Port left;
  Port right;
  bool dagger_right;
  bool minus_identity;
};

/// The twelve boson commutation relations imposed on the outputs.
const std::array<CommutatorSpec, 12>& commutator_specs();

/// Full residual operators at all orders.
QOperator full_commutator(const OutputOps& out, const CommutatorSpec& spec, const FockDims& dims);
/// c+c + d+d + 2(C+C + D+D) - (a+a + b+b + 2(A+A + B+B)).
QOperator full_energy(const OutputOps& out, const ModeOps& in);

struct ConstraintBlock {
  std::string label;
  ConstraintKind kind;
  Eigen::Index first_row;
  Eigen::Index rows;
};

/// First-order residual operators, one per constraint block, in the order
/// of the ConstraintMatrix blocks. Computed from the linear/nonlinear split.
std::vector<std::pair<std::string, QOperator>> first_order_residuals(const Ansatz& ansatz, const FockDims& dims,
                                                                     const ConstraintSelection& sel);

/// Same residuals obtained from full-operator evaluation only: the odd part
/// R(v) - R(-v) of each quadratic residual, and the composed inverse for the
/// reversibility blocks.
std::vector<std::pair<std::string, QOperator>> direct_residuals(const Ansatz& ansatz, const FockDims& dims,
                                                                const ConstraintSelection& sel);

struct ConstraintMatrix {
  Eigen::MatrixXd matrix; ///< rows x 14
  std::vector<ConstraintBlock> blocks;
  FockDims dims;
  std::size_t margin;
  double theta_bs;
  ConstraintSelection selection;
  double linearity_error; ///< |M v - direct(v)|_inf / max(1, |direct(v)|_inf) on a fixed probe

  Eigen::VectorXd residual(const UnknownVector& v) const { return matrix * v; }
};

/// Window entries of each residual, real parts then imaginary parts.
Eigen::VectorXd vectorize(const std::vector<std::pair<std::string, QOperator>>& residuals,
                          const std::vector<std::size_t>& window);

/// Throws Error::Numeric when the probe residuals are not linear to 1e-10.
ConstraintMatrix build_constraints(double theta_bs, const FockDims& dims, std::size_t margin,
                                   const ConstraintSelection& sel = {});

struct Nullspace {
  std::vector<double> singular_values; ///< descending
  int dimension = 0;
  Eigen::MatrixXd basis; ///< 14 x dimension, orthonormal columns
  double tol = 0.0;
  double gap_ratio = 0.0; ///< last kept / first discarded singular value
  bool gap_ok = false;
};

Nullspace nullspace(const ConstraintMatrix& m, double tol = 1e-8, double gap_min = 1e3);

struct FamilyFit {
  int nullspace_dimension = 0;
  double family_residual = 0.0; ///< how far the family vectors lie outside the nullspace
  double span_residual = 0.0;   ///< how far the nullspace lies outside the family span
  double fit_residual = 0.0;    ///< max of the two
  bool matches = false;
  /// Maps nullspace coordinates to (kappa cos eta, kappa sin eta).
  Eigen::MatrixXd coords_to_family;
  /// Nullspace directions orthogonal to the family, unit norm.
  std::vector<UnknownVector> extra_directions;
  Eigen::MatrixXd basis;
  double theta_bs = 0.0;

  Eigen::VectorXd coordinates(const BssnParams& p) const;
  BssnParams params_from(const Eigen::VectorXd& coords) const;
};

FamilyFit fit_family(const Nullspace& null, double theta_bs, double tol = 1e-8);

struct RelationCheck {
  std::string relation;
  double violation;
};

struct SolverIntermediates {
  std::array<cplx, 4> Z{}; ///< z_j exp(i(pi - theta_bs)/2) = X_j + i Y_j
  double R0 = 0.0, phi = 0.0, X0 = 0.0, Y0 = 0.0, Y = 0.0;
  double X12 = 0.0, X34 = 0.0;
  double M = 0.0;
  double R0_phase_violation = 0.0; ///< |Im| of R0 recovered from the Z combination
  double M_phase_violation = 0.0;  ///< |Im| of M recovered from w2 = iM e^{i theta_bs/2}
  double w2_magnitude = 0.0;
  std::vector<RelationCheck> checks;
};

SolverIntermediates intermediates(const Ansatz& ansatz);

/// Dimension of the part of span(directions) on which both M and R0 vanish.
/// M and R0 are real-linear in the unknowns, so this is the span dimension
/// minus the rank of the 2 x k matrix of their values.
int m_r0_free_dimension(const std::vector<UnknownVector>& directions, double theta_bs, double tol = 1e-9);

} // namespace bssn
