#include "bssn/constraints.hpp"

#include <limits>
#include <cmath>
#include <numbers>

namespace bssn {

namespace {

constexpr std::array<double, 4> kEnergyWeights{1.0, 1.0, 2.0, 2.0};
constexpr std::array<const char*, 4> kReverseLabels{"reverse:a", "reverse:b", "reverse:A", "reverse:B"};

using Residuals = std::vector<std::pair<std::string, QOperator>>;

Ansatz negated(Ansatz an) {
  for (auto& v : an.z)
    v = -v;
  for (auto& v : an.w)
    v = -v;
  return an;
}

} // namespace

const std::array<CommutatorSpec, 12>& commutator_specs() {
  static constexpr std::array<CommutatorSpec, 12> specs{{
      {"[c,c+]-1", Port::c, Port::c, true, true},
      {"[d,d+]-1", Port::d, Port::d, true, true},
      {"[c,d]", Port::c, Port::d, false, false},
      {"[c,d+]", Port::c, Port::d, true, false},
      {"[C,C+]-1", Port::C, Port::C, true, true},
      {"[D,D+]-1", Port::D, Port::D, true, true},
      {"[C,D]", Port::C, Port::D, false, false},
      {"[C,D+]", Port::C, Port::D, true, false},
      {"[c,D]", Port::c, Port::D, false, false},
      {"[d,D]", Port::d, Port::D, false, false},
      {"[C,d]", Port::C, Port::d, false, false},
      {"[D,d]", Port::D, Port::d, false, false},
  }};
  return specs;
}

QOperator full_commutator(const OutputOps& out, const CommutatorSpec& spec, const FockDims& dims) {
  const QOperator& x = out[spec.left];
  const QOperator y = spec.dagger_right ? out[spec.right].adjoint() : out[spec.right];
  QOperator r = commutator(x, y);
  if (spec.minus_identity)
    r -= identity(dims);
  return r;
}

QOperator full_energy(const OutputOps& out, const ModeOps& in) {
  QOperator e = zero_operator(in.dims());
  for (int k = 0; k < 4; ++k) {
    e += kEnergyWeights[k] * (out.ops[k].adjoint() * out.ops[k]);
    e -= kEnergyWeights[k] * (in.ops[k].adjoint() * in.ops[k]);
  }
  return e;
}


const std::array<std::string, kUnknowns>& unknown_labels() {
  static const std::array<std::string, kUnknowns> labels{
      "Re z1", "Im z1", "Re z2", "Im z2", "Re z3", "Im z3", "Re z4",
      "Im z4", "Re w1", "Im w1", "Re w2", "Im w2", "Re w3", "Im w3"};
  return labels;
}

const char* constraint_kind_name(ConstraintKind k) noexcept {
  switch (k) {
  case ConstraintKind::commutator: return "commutator";
  case ConstraintKind::energy: return "energy";
  case ConstraintKind::reversibility: return "reversibility";
  }
  return "?";
}

UnknownVector flatten(const Ansatz& an) {
  UnknownVector v;
  for (int j = 0; j < 4; ++j) {
    v[2 * j] = an.z[j].real();
    v[2 * j + 1] = an.z[j].imag();
  }
  for (int j = 0; j < 3; ++j) {
    v[8 + 2 * j] = an.w[j].real();
    v[9 + 2 * j] = an.w[j].imag();
  }
  return v;
}

Ansatz with_unknowns(double theta_bs, const UnknownVector& v) {
  Ansatz an;
  an.theta_bs = theta_bs;
  for (int j = 0; j < 4; ++j)
    an.z[j] = {v[2 * j], v[2 * j + 1]};
  for (int j = 0; j < 3; ++j)
    an.w[j] = {v[8 + 2 * j], v[9 + 2 * j]};
  return an;
}

Residuals first_order_residuals(const Ansatz& an, const FockDims& dims, const ConstraintSelection& sel) {
  const ModeOps x = annihilators(dims);
  const OutputOps lin = linear_part(an, x);
  const OutputOps nl = nonlinear_part(an, x);
  Residuals out;

  if (sel.commutators) {
    for (const auto& spec : commutator_specs()) {
      const QOperator& lp = lin[spec.left];
      const QOperator& np = nl[spec.left];
      const QOperator lq = spec.dagger_right ? lin[spec.right].adjoint() : lin[spec.right];
      const QOperator nq = spec.dagger_right ? nl[spec.right].adjoint() : nl[spec.right];
      out.emplace_back(spec.label, commutator(lp, nq) + commutator(np, lq));
    }
  }

  if (sel.energy) {
    QOperator e = zero_operator(dims);
    for (int k = 0; k < 4; ++k)
      e += kEnergyWeights[k] * (lin.ops[k].adjoint() * nl.ops[k] + nl.ops[k].adjoint() * lin.ops[k]);
    out.emplace_back("energy", std::move(e));
  }

  if (sel.reversibility) {
    // Ladder operators of `x` now stand for the outputs. The reversed ansatz
    // gives the inputs directly; inverting the forward map to first order
    // gives Lrev(out) - Lrev N(Lrev(out)). Their difference must vanish.
    const Ansatz rev = reversal_substitute(an);
    const OutputOps inverse_lin = linear_part(rev, x);
    const OutputOps n_at_inverse = nonlinear_part(an, inverse_lin.as_mode_ops());
    const OutputOps pulled_back = linear_part(rev, n_at_inverse.as_mode_ops());
    const OutputOps rev_nl = nonlinear_part(rev, x);
    for (int k = 0; k < 4; ++k)
      out.emplace_back(kReverseLabels[k], rev_nl.ops[k] + pulled_back.ops[k]);
  }
  return out;
}

Residuals direct_residuals(const Ansatz& an, const FockDims& dims, const ConstraintSelection& sel) {
  const ModeOps x = annihilators(dims);
  Residuals out;

  if (sel.commutators || sel.energy) {
    // Each residual is a quadratic polynomial in the unknowns, so half the
    // difference at +v and -v is exactly its first-order part.
    const OutputOps plus = map_ops(an, x);
    const OutputOps minus = map_ops(negated(an), x);
    if (sel.commutators) {
      for (const auto& spec : commutator_specs()) {
        QOperator r = full_commutator(plus, spec, dims) - full_commutator(minus, spec, dims);
        out.emplace_back(spec.label, 0.5 * r);
      }
    }
    if (sel.energy)
      out.emplace_back("energy", 0.5 * (full_energy(plus, x) - full_energy(minus, x)));
  }

  if (sel.reversibility) {
    const Ansatz rev = reversal_substitute(an);
    const OutputOps reversed = map_ops(rev, x);
    const OutputOps inverse_lin = linear_part(rev, x);
    // Forward map at the linear inverse is out + N(Lrev out); pulling back and
    // subtracting from 2 Lrev(out) leaves the first-order inverse.
    const OutputOps forward = map_ops(an, inverse_lin.as_mode_ops());
    const OutputOps pulled = linear_part(rev, forward.as_mode_ops());
    for (int k = 0; k < 4; ++k) {
      QOperator solved = 2.0 * inverse_lin.ops[k] - pulled.ops[k];
      out.emplace_back(kReverseLabels[k], reversed.ops[k] - solved);
    }
  }
  return out;
}

Eigen::VectorXd vectorize(const Residuals& residuals, const std::vector<std::size_t>& window) {
  const auto k = static_cast<Eigen::Index>(window.size());
  const Eigen::Index per_block = 2 * k * k;
  Eigen::VectorXd out(per_block * static_cast<Eigen::Index>(residuals.size()));
  Eigen::Index offset = 0;
  for (const auto& [label, op] : residuals) {
    const DenseMat sub = op.restricted(window);
    const Eigen::Map<const Eigen::VectorXcd> flat(sub.data(), k * k);
    out.segment(offset, k * k) = flat.real();
    out.segment(offset + k * k, k * k) = flat.imag();
    offset += per_block;
  }
  return out;
}

ConstraintMatrix build_constraints(double theta_bs, const FockDims& dims, std::size_t margin,
                                   const ConstraintSelection& sel) {
  if (margin < 2)
    throw Error(Error::Kind::InvalidArgument, "constraint probing needs margin >= 2");
  if (!sel.commutators && !sel.energy && !sel.reversibility)
    throw Error(Error::Kind::InvalidArgument, "no constraint blocks selected");
  const auto window = interior_window(dims, margin).indices(dims);
  const auto k = static_cast<Eigen::Index>(window.size());

  ConstraintMatrix cm{Eigen::MatrixXd(), {}, dims, margin, theta_bs, sel, 0.0};
  for (int j = 0; j < kUnknowns; ++j) {
    const auto residuals = first_order_residuals(with_unknowns(theta_bs, UnknownVector::Unit(j)), dims, sel);
    const Eigen::VectorXd column = vectorize(residuals, window);
    if (j == 0) {
      cm.matrix.resize(column.size(), kUnknowns);
      Eigen::Index row = 0;
      for (const auto& [label, op] : residuals) {
        ConstraintKind kind = ConstraintKind::commutator;
        if (label == "energy")
          kind = ConstraintKind::energy;
        else if (label.rfind("reverse:", 0) == 0)
          kind = ConstraintKind::reversibility;
        cm.blocks.push_back({label, kind, row, 2 * k * k});
        row += 2 * k * k;
      }
    }
    cm.matrix.col(j) = column;
  }

  // Linearity self-check against full-operator evaluation on a fixed probe.
  UnknownVector probe;
  for (int j = 0; j < kUnknowns; ++j)
    probe[j] = std::sin(1.7 * j + 0.3);
  const Eigen::VectorXd direct = vectorize(direct_residuals(with_unknowns(theta_bs, probe), dims, sel), window);
  const double scale = std::max(1.0, direct.lpNorm<Eigen::Infinity>());
  cm.linearity_error = (cm.matrix * probe - direct).lpNorm<Eigen::Infinity>() / scale;
  if (!(cm.linearity_error <= 1e-10))
    throw Error(Error::Kind::Numeric, "constraint residuals are not linear in the unknowns (error " +
                                          std::to_string(cm.linearity_error) + ")");
  return cm;
}

Nullspace nullspace(const ConstraintMatrix& m, double tol, double gap_min) {
  if (!(tol > 0.0))
    throw Error(Error::Kind::InvalidArgument, "nullspace tolerance must be > 0");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.matrix, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Nullspace ns;
  ns.tol = tol;
  ns.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] >= tol * smax && smax > 0.0)
      ++rank;
  ns.dimension = kUnknowns - rank;
  ns.basis = svd.matrixV().rightCols(ns.dimension);

  if (rank == 0) {
    ns.gap_ratio = 0.0;
  } else if (ns.dimension == 0) {
    // Nothing discarded: distance of the smallest kept value from the cut.
    ns.gap_ratio = sv[rank - 1] / (tol * smax);
  } else {
    const double discarded = sv[rank];
    ns.gap_ratio = discarded > 0.0 ? sv[rank - 1] / discarded : std::numeric_limits<double>::infinity();
  }
  ns.gap_ok = ns.gap_ratio >= gap_min;
  return ns;
}

Eigen::VectorXd FamilyFit::coordinates(const BssnParams& p) const {
  BssnParams q = p;
  q.theta_bs = theta_bs;
  return basis.transpose() * flatten(family_coefficients(q));
}

BssnParams FamilyFit::params_from(const Eigen::VectorXd& coords) const {
  const Eigen::Vector2d u = coords_to_family * coords;
  return BssnParams{u.norm(), std::atan2(u[1], u[0]), theta_bs};
}

FamilyFit fit_family(const Nullspace& null, double theta_bs, double tol) {
  FamilyFit fit;
  fit.theta_bs = theta_bs;
  fit.basis = null.basis;
  fit.nullspace_dimension = null.dimension;

  Eigen::Matrix<double, kUnknowns, 2> family;
  family.col(0) = flatten(family_coefficients({1.0, 0.0, theta_bs}));
  family.col(1) = flatten(family_coefficients({1.0, std::numbers::pi / 2.0, theta_bs}));

  const Eigen::MatrixXd& basis = null.basis;
  const Eigen::MatrixXd outside = family - basis * (basis.transpose() * family);
  fit.family_residual = outside.norm() / family.norm();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(family);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(kUnknowns, 2);
  if (null.dimension > 0) {
    const Eigen::MatrixXd rest = basis - q * (q.transpose() * basis);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rest, Eigen::ComputeThinU);
    fit.span_residual = svd.singularValues()[0];
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-6)
        fit.extra_directions.emplace_back(svd.matrixU().col(i).normalized());
  }
  fit.fit_residual = std::max(fit.family_residual, fit.span_residual);
  fit.matches = null.dimension == 2 && fit.fit_residual <= tol;

  const Eigen::Matrix2d gram = family.transpose() * family;
  fit.coords_to_family = gram.inverse() * family.transpose() * basis;
  return fit;
}

SolverIntermediates intermediates(const Ansatz& an) {
  using std::numbers::pi;
  using std::numbers::sqrt2;
  SolverIntermediates s;
  const double th = an.theta_bs;
  const cplx rot = std::exp(kI * ((pi - th) / 2.0));
  for (int j = 0; j < 4; ++j)
    s.Z[j] = an.z[j] * rot;
  const double X1 = s.Z[0].real(), X2 = s.Z[1].real(), X3 = s.Z[2].real(), X4 = s.Z[3].real();
  const double Y1 = s.Z[0].imag(), Y2 = s.Z[1].imag(), Y3 = s.Z[2].imag(), Y4 = s.Z[3].imag();

  s.phi = pi / 4.0 - th;
  const cplx combo = (s.Z[0] - s.Z[1] - s.Z[2] + s.Z[3]) / 4.0;
  s.X0 = combo.real();
  s.Y0 = combo.imag();
  const cplx r0 = combo * std::exp(-kI * s.phi);
  s.R0 = r0.real();
  s.R0_phase_violation = std::abs(r0.imag());
  s.Y = (Y1 + Y3) / 2.0;
  s.X12 = (X1 + X2) / 2.0;
  s.X34 = (X3 + X4) / 2.0;

  const cplx m = -kI * an.w[1] * std::exp(-kI * (th / 2.0));
  s.M = m.real();
  s.M_phase_violation = std::abs(m.imag());
  s.w2_magnitude = std::abs(an.w[1]);

  const double R0 = s.R0;
  auto check = [&](const char* rel, double v) { s.checks.push_back({rel, std::abs(v)}); };
  check("Y1 = -Y2", Y1 + Y2);
  check("Y3 = -Y4", Y3 + Y4);
  check("Z1 - Z2 - iZ3 + iZ4 = 0", std::abs(s.Z[0] - s.Z[1] - kI * s.Z[2] + kI * s.Z[3]));
  check("Y1 = Y + R0 sin(phi)", Y1 - (s.Y + R0 * std::sin(s.phi)));
  check("Y3 = Y - R0 sin(phi)", Y3 - (s.Y - R0 * std::sin(s.phi)));
  check("X1 - X2 - X3 + X4 = 4 R0 cos(phi)", X1 - X2 - X3 + X4 - 4.0 * R0 * std::cos(s.phi));
  check("Y = -R0 cos(phi)", s.Y + R0 * std::cos(s.phi));
  check("Y1 = -sqrt2 R0 sin(theta)", Y1 + sqrt2 * R0 * std::sin(th));
  check("Y3 = -sqrt2 R0 cos(theta)", Y3 + sqrt2 * R0 * std::cos(th));
  check("X1 - X2 = 2 sqrt2 R0 cos(theta)", X1 - X2 - 2.0 * sqrt2 * R0 * std::cos(th));
  check("X3 - X4 = -2 sqrt2 R0 sin(theta)", X3 - X4 + 2.0 * sqrt2 * R0 * std::sin(th));
  check("R0 real", s.R0_phase_violation);
  check("conj(w1) = (i/2) w3 exp(-i theta)", std::abs(std::conj(an.w[0]) - 0.5 * kI * an.w[2] * std::exp(-kI * th)));
  check("conj(w2) = -w2 exp(i theta)", std::abs(std::conj(an.w[1]) + an.w[1] * std::exp(kI * th)));
  check("w2 = i M exp(i theta/2), M real", s.M_phase_violation);
  return s;
}

int m_r0_free_dimension(const std::vector<UnknownVector>& directions, double theta_bs, double tol) {
  if (directions.empty())
    return 0;
  const auto k = static_cast<Eigen::Index>(directions.size());
  Eigen::MatrixXd span(kUnknowns, k);
  Eigen::MatrixXd values(2, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    span.col(j) = directions[static_cast<std::size_t>(j)];
    const SolverIntermediates s = intermediates(with_unknowns(theta_bs, directions[static_cast<std::size_t>(j)]));
    values(0, j) = s.M;
    values(1, j) = s.R0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> span_svd(span);
  span_svd.setThreshold(tol);
  Eigen::JacobiSVD<Eigen::MatrixXd> value_svd(values);
  value_svd.setThreshold(tol);
  return static_cast<int>(span_svd.rank() - value_svd.rank());
}

} // namespace bssn
