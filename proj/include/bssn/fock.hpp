#pragma once

// Truncated four-mode Fock space: (a, b) fundamental, (A, B) second harmonic.
//
// Basis index convention (row-major over the mode order a, b, A, B):
//
//     index = ((k_a * n_b + k_b) * n_A + k_A) * n_B + k_B
//
// Every constructor that yields a QState normalizes it. Creation operators
// silently annihilate the top Fock level of their mode; checks that must not
// see this edge go through a Window (see interior_projector).

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bssn {

using cplx = std::complex<double>;
using SparseMat = Eigen::SparseMatrix<cplx>;
using DenseMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Error raised for invalid inputs and mismatched spaces.
class Error : public std::runtime_error {
public:
  enum class Kind { InvalidArgument, DimensionMismatch, Numeric, Parse };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

enum class Mode : int { a = 0, b = 1, A = 2, B = 3 };
inline constexpr std::array<Mode, 4> kModes{Mode::a, Mode::b, Mode::A, Mode::B};

const char* mode_name(Mode m) noexcept;

/// Per-mode cutoffs; mode m spans |0>..|n_m - 1>.
class FockDims {
public:
  FockDims(std::size_t na, std::size_t nb, std::size_t nA, std::size_t nB);
  explicit FockDims(const std::array<std::size_t, 4>& cutoffs)
      : FockDims(cutoffs[0], cutoffs[1], cutoffs[2], cutoffs[3]) {}

  std::size_t cutoff(Mode m) const noexcept { return cutoffs_[static_cast<int>(m)]; }
  const std::array<std::size_t, 4>& cutoffs() const noexcept { return cutoffs_; }
  std::size_t total() const noexcept { return total_; }
  /// Index distance between |.., k_m, ..> and |.., k_m + 1, ..>.
  std::size_t stride(Mode m) const noexcept { return strides_[static_cast<int>(m)]; }

  std::size_t index(const std::array<std::size_t, 4>& occupation) const;
  std::array<std::size_t, 4> occupation(std::size_t index) const;

  /// Same dims with every cutoff increased by `delta`.
  FockDims grown(std::size_t delta) const;
  std::string to_string() const;

  friend bool operator==(const FockDims&, const FockDims&) = default;

private:
  std::array<std::size_t, 4> cutoffs_;
  std::array<std::size_t, 4> strides_{};
  std::size_t total_ = 0;
};

/// Basis states whose occupation of every mode m is <= max_occupation[m].
struct Window {
  std::array<std::size_t, 4> max_occupation;

  std::vector<std::size_t> indices(const FockDims& dims) const;
  bool fits_in(const FockDims& dims) const noexcept;
};

/// Window of states at least `margin` levels below every cutoff.
Window interior_window(const FockDims& dims, std::size_t margin);

class QState {
public:
  /// Normalizes `amplitudes`; throws on zero norm or length mismatch.
  QState(FockDims dims, Vec amplitudes);

  const FockDims& dims() const noexcept { return dims_; }
  const Vec& amplitudes() const noexcept { return amps_; }
  cplx amplitude(const std::array<std::size_t, 4>& occupation) const {
    return amps_[static_cast<Eigen::Index>(dims_.index(occupation))];
  }

private:
  FockDims dims_;
  Vec amps_;
};

class QOperator {
public:
  QOperator(FockDims dims, SparseMat matrix);

  const FockDims& dims() const noexcept { return dims_; }
  const SparseMat& matrix() const noexcept { return mat_; }

  QOperator adjoint() const;
  Vec apply(const Vec& v) const;
  Vec apply(const QState& s) const;

  /// Dense submatrix on the window's basis states (rows and columns).
  DenseMat restricted(const std::vector<std::size_t>& basis) const;
  cplx element(std::size_t row, std::size_t col) const { return mat_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)); }

  QOperator& operator+=(const QOperator& o);
  QOperator& operator-=(const QOperator& o);
  QOperator& operator*=(cplx s);

  friend QOperator operator+(QOperator l, const QOperator& r) { return l += r; }
  friend QOperator operator-(QOperator l, const QOperator& r) { return l -= r; }
  friend QOperator operator*(QOperator l, cplx s) { return l *= s; }
  friend QOperator operator*(cplx s, QOperator r) { return r *= s; }
  friend QOperator operator*(const QOperator& l, const QOperator& r);
  friend QOperator operator-(QOperator o) { return o *= -1.0; }

private:
  FockDims dims_;
  SparseMat mat_;
};

enum class Ladder { annihilate, create };

QState vacuum(const FockDims& dims);

struct CoherentState {
  QState state;
  double leakage; ///< Poisson mass beyond the cutoff, before renormalization.
};

/// Coherent state |alpha> on `mode`, vacuum elsewhere.
CoherentState coherent(const FockDims& dims, Mode mode, cplx alpha);

/// Product of coherent states with one amplitude per mode; leakage is
/// 1 - prod(1 - leakage_m).
CoherentState coherent_product(const FockDims& dims, const std::array<cplx, 4>& alphas);

/// Fock state |k_a, k_b, k_A, k_B>.
QState number_state(const FockDims& dims, const std::array<std::size_t, 4>& occupation);

/// P(N >= cutoff) for N ~ Poisson(mean), summed upward from the cutoff.
double poisson_tail(double mean, std::size_t cutoff);

QOperator ladder(const FockDims& dims, Mode mode, Ladder kind);
QOperator identity(const FockDims& dims);
QOperator zero_operator(const FockDims& dims);
QOperator number_op(const FockDims& dims, Mode mode);
QOperator projector(const FockDims& dims, const Window& window);
QOperator interior_projector(const FockDims& dims, std::size_t margin);

inline QOperator commutator(const QOperator& x, const QOperator& y) { return x * y - y * x; }

cplx expect(const QState& state, const QOperator& op);
/// <M^2> - <M>^2 for self-adjoint M, with <M^2> taken as |M psi|^2.
double variance(const QState& state, const QOperator& op);

/// Largest singular value of the window-restricted matrix.
double window_norm(const QOperator& op, const std::vector<std::size_t>& basis);

/// The four annihilation operators of a space, indexable by Mode.
struct ModeOps {
  std::array<QOperator, 4> ops;

  const QOperator& operator[](Mode m) const { return ops[static_cast<int>(m)]; }
  const FockDims& dims() const { return ops[0].dims(); }
};

ModeOps annihilators(const FockDims& dims);

} // namespace bssn
