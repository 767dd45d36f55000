#include "bssn/fock.hpp"

#include <cmath>
#include <sstream>

namespace bssn {

namespace {

void require_same(const FockDims& l, const FockDims& r, const char* where) {
  if (!(l == r))
    throw Error(Error::Kind::DimensionMismatch,
                std::string(where) + ": dims " + l.to_string() + " vs " + r.to_string());
}

// Truncated coherent amplitudes alpha^n / sqrt(n!) for n < cutoff, unnormalized.
Vec coherent_amplitudes(std::size_t cutoff, cplx alpha) {
  Vec v(static_cast<Eigen::Index>(cutoff));
  cplx term{1.0, 0.0};
  for (std::size_t n = 0; n < cutoff; ++n) {
    v[static_cast<Eigen::Index>(n)] = term;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

Vec kron_modes(const FockDims& dims, const std::array<Vec, 4>& factors) {
  Vec out(static_cast<Eigen::Index>(dims.total()));
  for (std::size_t i = 0; i < dims.total(); ++i) {
    const auto occ = dims.occupation(i);
    cplx amp{1.0, 0.0};
    for (int m = 0; m < 4; ++m)
      amp *= factors[m][static_cast<Eigen::Index>(occ[m])];
    out[static_cast<Eigen::Index>(i)] = amp;
  }
  return out;
}

} // namespace

const char* mode_name(Mode m) noexcept {
  switch (m) {
  case Mode::a: return "a";
  case Mode::b: return "b";
  case Mode::A: return "A";
  case Mode::B: return "B";
  }
  return "?";
}

FockDims::FockDims(std::size_t na, std::size_t nb, std::size_t nA, std::size_t nB)
    : cutoffs_{na, nb, nA, nB} {
  for (auto n : cutoffs_)
    if (n < 2)
      throw Error(Error::Kind::InvalidArgument, "every Fock cutoff must be >= 2, got " + to_string());
  strides_[3] = 1;
  for (int m = 2; m >= 0; --m)
    strides_[m] = strides_[m + 1] * cutoffs_[m + 1];
  total_ = strides_[0] * cutoffs_[0];
}

std::size_t FockDims::index(const std::array<std::size_t, 4>& occ) const {
  std::size_t idx = 0;
  for (int m = 0; m < 4; ++m) {
    if (occ[m] >= cutoffs_[m])
      throw Error(Error::Kind::InvalidArgument, "occupation exceeds cutoff in " + to_string());
    idx += occ[m] * strides_[m];
  }
  return idx;
}

std::array<std::size_t, 4> FockDims::occupation(std::size_t index) const {
  std::array<std::size_t, 4> occ{};
  for (int m = 0; m < 4; ++m) {
    occ[m] = index / strides_[m];
    index %= strides_[m];
  }
  return occ;
}

FockDims FockDims::grown(std::size_t delta) const {
  return FockDims(cutoffs_[0] + delta, cutoffs_[1] + delta, cutoffs_[2] + delta, cutoffs_[3] + delta);
}

std::string FockDims::to_string() const {
  std::ostringstream os;
  os << '(' << cutoffs_[0] << ',' << cutoffs_[1] << ',' << cutoffs_[2] << ',' << cutoffs_[3] << ')';
  return os.str();
}

std::vector<std::size_t> Window::indices(const FockDims& dims) const {
  if (!fits_in(dims))
    throw Error(Error::Kind::DimensionMismatch, "window exceeds dims " + dims.to_string());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dims.total(); ++i) {
    const auto occ = dims.occupation(i);
    bool inside = true;
    for (int m = 0; m < 4 && inside; ++m)
      inside = occ[m] <= max_occupation[m];
    if (inside)
      out.push_back(i);
  }
  return out;
}

bool Window::fits_in(const FockDims& dims) const noexcept {
  for (int m = 0; m < 4; ++m)
    if (max_occupation[m] >= dims.cutoffs()[m])
      return false;
  return true;
}

Window interior_window(const FockDims& dims, std::size_t margin) {
  Window w{};
  for (int m = 0; m < 4; ++m) {
    const auto n = dims.cutoffs()[m];
    if (n < margin + 1)
      throw Error(Error::Kind::InvalidArgument,
                  "margin " + std::to_string(margin) + " leaves no interior in " + dims.to_string());
    w.max_occupation[m] = n - 1 - margin;
  }
  return w;
}

QState::QState(FockDims dims, Vec amplitudes) : dims_(dims), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != dims_.total())
    throw Error(Error::Kind::DimensionMismatch, "state length does not match " + dims_.to_string());
  const double norm = amps_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw Error(Error::Kind::Numeric, "state has zero or non-finite norm");
  amps_ /= norm;
}

QOperator::QOperator(FockDims dims, SparseMat matrix) : dims_(dims), mat_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(dims_.total());
  if (mat_.rows() != n || mat_.cols() != n)
    throw Error(Error::Kind::DimensionMismatch, "operator shape does not match " + dims_.to_string());
  mat_.makeCompressed();
}

QOperator QOperator::adjoint() const { return QOperator(dims_, SparseMat(mat_.adjoint())); }

Vec QOperator::apply(const Vec& v) const {
  if (static_cast<std::size_t>(v.size()) != dims_.total())
    throw Error(Error::Kind::DimensionMismatch, "vector length does not match " + dims_.to_string());
  return mat_ * v;
}

Vec QOperator::apply(const QState& s) const {
  require_same(dims_, s.dims(), "apply");
  return mat_ * s.amplitudes();
}

DenseMat QOperator::restricted(const std::vector<std::size_t>& basis) const {
  const auto k = static_cast<Eigen::Index>(basis.size());
  std::vector<Eigen::Index> position(dims_.total(), -1);
  for (Eigen::Index i = 0; i < k; ++i)
    position[basis[static_cast<std::size_t>(i)]] = i;
  DenseMat out = DenseMat::Zero(k, k);
  for (Eigen::Index col = 0; col < k; ++col) {
    for (SparseMat::InnerIterator it(mat_, static_cast<Eigen::Index>(basis[static_cast<std::size_t>(col)])); it; ++it) {
      const auto row = position[static_cast<std::size_t>(it.row())];
      if (row >= 0)
        out(row, col) = it.value();
    }
  }
  return out;
}

QOperator& QOperator::operator+=(const QOperator& o) {
  require_same(dims_, o.dims_, "operator +");
  mat_ += o.mat_;
  return *this;
}

QOperator& QOperator::operator-=(const QOperator& o) {
  require_same(dims_, o.dims_, "operator -");
  mat_ -= o.mat_;
  return *this;
}

QOperator& QOperator::operator*=(cplx s) {
  mat_ *= s;
  return *this;
}

QOperator operator*(const QOperator& l, const QOperator& r) {
  require_same(l.dims_, r.dims_, "operator *");
  return QOperator(l.dims_, SparseMat(l.mat_ * r.mat_));
}

QState vacuum(const FockDims& dims) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dims.total()));
  v[0] = 1.0;
  return QState(dims, std::move(v));
}

double poisson_tail(double mean, std::size_t cutoff) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw Error(Error::Kind::InvalidArgument, "Poisson mean must be finite and >= 0");
  if (mean == 0.0)
    return cutoff == 0 ? 1.0 : 0.0;
  const double n0 = static_cast<double>(cutoff);
  double term = std::exp(-mean + n0 * std::log(mean) - std::lgamma(n0 + 1.0));
  double sum = 0.0;
  for (std::size_t n = cutoff; n < cutoff + 100000; ++n) {
    sum += term;
    term *= mean / static_cast<double>(n + 1);
    if (static_cast<double>(n) > mean && term < 1e-18 * sum)
      break;
  }
  return std::min(sum, 1.0);
}

CoherentState coherent(const FockDims& dims, Mode mode, cplx alpha) {
  std::array<cplx, 4> alphas{};
  alphas[static_cast<int>(mode)] = alpha;
  return coherent_product(dims, alphas);
}

CoherentState coherent_product(const FockDims& dims, const std::array<cplx, 4>& alphas) {
  std::array<Vec, 4> factors;
  double kept = 1.0;
  for (int m = 0; m < 4; ++m) {
    if (!std::isfinite(alphas[m].real()) || !std::isfinite(alphas[m].imag()))
      throw Error(Error::Kind::InvalidArgument, "coherent amplitude must be finite");
    factors[m] = coherent_amplitudes(dims.cutoffs()[m], alphas[m]);
    kept *= 1.0 - poisson_tail(std::norm(alphas[m]), dims.cutoffs()[m]);
  }
  return {QState(dims, kron_modes(dims, factors)), 1.0 - kept};
}

QState number_state(const FockDims& dims, const std::array<std::size_t, 4>& occupation) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dims.total()));
  v[static_cast<Eigen::Index>(dims.index(occupation))] = 1.0;
  return QState(dims, std::move(v));
}

QOperator ladder(const FockDims& dims, Mode mode, Ladder kind) {
  const auto stride = dims.stride(mode);
  const auto m = static_cast<int>(mode);
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(dims.total());
  for (std::size_t i = 0; i < dims.total(); ++i) {
    const auto k = dims.occupation(i)[m];
    if (k == 0)
      continue;
    // <k-1| a |k> = sqrt(k)
    const auto row = static_cast<Eigen::Index>(i - stride);
    const auto col = static_cast<Eigen::Index>(i);
    const double v = std::sqrt(static_cast<double>(k));
    if (kind == Ladder::annihilate)
      entries.emplace_back(row, col, v);
    else
      entries.emplace_back(col, row, v);
  }
  const auto n = static_cast<Eigen::Index>(dims.total());
  SparseMat mat(n, n);
  mat.setFromTriplets(entries.begin(), entries.end());
  return QOperator(dims, std::move(mat));
}

QOperator identity(const FockDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  SparseMat mat(n, n);
  mat.setIdentity();
  return QOperator(dims, std::move(mat));
}

QOperator zero_operator(const FockDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  return QOperator(dims, SparseMat(n, n));
}

QOperator number_op(const FockDims& dims, Mode mode) {
  return ladder(dims, mode, Ladder::create) * ladder(dims, mode, Ladder::annihilate);
}

QOperator projector(const FockDims& dims, const Window& window) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  std::vector<Eigen::Triplet<cplx>> entries;
  for (auto i : window.indices(dims))
    entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), 1.0);
  SparseMat mat(n, n);
  mat.setFromTriplets(entries.begin(), entries.end());
  return QOperator(dims, std::move(mat));
}

QOperator interior_projector(const FockDims& dims, std::size_t margin) {
  return projector(dims, interior_window(dims, margin));
}

cplx expect(const QState& state, const QOperator& op) {
  require_same(state.dims(), op.dims(), "expect");
  return state.amplitudes().dot(op.apply(state));
}

double variance(const QState& state, const QOperator& op) {
  const Vec mv = op.apply(state);
  const double mean = state.amplitudes().dot(mv).real();
  return mv.squaredNorm() - mean * mean;
}

double window_norm(const QOperator& op, const std::vector<std::size_t>& basis) {
  if (basis.empty())
    return 0.0;
  const DenseMat sub = op.restricted(basis);
  if (sub.isZero(0.0))
    return 0.0;
  Eigen::JacobiSVD<DenseMat> svd(sub);
  return svd.singularValues()[0];
}

ModeOps annihilators(const FockDims& dims) {
  return ModeOps{{ladder(dims, Mode::a, Ladder::annihilate), ladder(dims, Mode::b, Ladder::annihilate),
                  ladder(dims, Mode::A, Ladder::annihilate), ladder(dims, Mode::B, Ladder::annihilate)}};
}

} // namespace bssn
