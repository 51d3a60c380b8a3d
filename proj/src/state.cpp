#include "hqom/state.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "hqom/bosonic.hpp"

namespace hqom {

namespace {

// Flattened index i  ->  (index within kept factors, index within traced factors).
struct IndexSplit {
  std::vector<Index> keep;
  std::vector<Index> traced;
  Index keep_dim = 1;
  Index traced_dim = 1;
};

IndexSplit split_indices(const Space& space, SubsystemSet keep) {
  const auto& factors = space.factors();
  IndexSplit out;
  for (const auto& f : factors) (keep.contains(f.kind) ? out.keep_dim : out.traced_dim) *= f.dim;
  out.keep.resize(space.dim());
  out.traced.resize(space.dim());
  std::vector<Index> digit(factors.size(), 0);
  for (Index i = 0; i < space.dim(); ++i) {
    Index k = 0;
    Index t = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      if (keep.contains(factors[f].kind))
        k = k * factors[f].dim + digit[f];
      else
        t = t * factors[f].dim + digit[f];
    }
    out.keep[i] = k;
    out.traced[i] = t;
    for (std::size_t f = factors.size(); f-- > 0;) {
      if (++digit[f] < factors[f].dim) break;
      digit[f] = 0;
    }
  }
  return out;
}

void check_keep(const Space& space, SubsystemSet keep) {
  if (keep.empty()) throw ValidationError("partial trace needs a nonempty set of subsystems to keep");
  if (!keep.without(space.subsystems()).empty())
    throw ValidationError("cannot keep " + keep.to_string() + ": state lives on " + space.to_string());
}

}  // namespace

// --- PureState ----------------------------------------------------------------

PureState::PureState(Space space, CVector amplitudes, double discarded_weight)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)), discarded_(discarded_weight) {
  if (amplitudes_.size() != space_.dim())
    throw ValidationError("amplitude vector of size " + std::to_string(amplitudes_.size()) + " does not match space " +
                          space_.to_string());
}

DensityMatrix PureState::to_density() const {
  return DensityMatrix(space_, amplitudes_ * amplitudes_.adjoint(), discarded_);
}

DensityMatrix PureState::reduce(SubsystemSet keep) const { return partial_trace(*this, keep); }

// --- DensityMatrix ------------------------------------------------------------

DensityMatrix::DensityMatrix(Space space, CMatrix elements, double discarded_weight)
    : space_(std::move(space)), rho_(std::move(elements)), discarded_(discarded_weight) {
  if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim())
    throw ValidationError("density matrix shape does not match space " + space_.to_string());
}

double DensityMatrix::purity() const { return (rho_.array() * rho_.conjugate().array()).sum().real(); }

double DensityMatrix::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const CMatrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::reduce(SubsystemSet keep) const { return partial_trace(*this, keep); }

void DensityMatrix::check(double herm_tol, double trace_tol, double pos_tol) const {
  if (const double h = hermiticity_error(); h > herm_tol)
    throw NumericalError("density matrix not Hermitian: max |rho - rho^dag| = " + std::to_string(h));
  if (const double t = trace(); std::abs(t - 1.0) > trace_tol)
    throw NumericalError("density matrix trace " + std::to_string(t) + " differs from 1");
  if (const double m = min_eigenvalue(); m < -pos_tol)
    throw NumericalError("density matrix has negative eigenvalue " + std::to_string(m));
}

// --- StateEnsemble --------------------------------------------------------------

StateEnsemble::StateEnsemble(Space space, std::vector<double> weights, std::vector<CVector> branches,
                             double discarded_weight)
    : space_(std::move(space)), weights_(std::move(weights)), branches_(std::move(branches)),
      discarded_(discarded_weight) {
  if (weights_.size() != branches_.size()) throw ValidationError("ensemble weights and branches differ in count");
  for (const auto& b : branches_)
    if (b.size() != space_.dim()) throw ValidationError("ensemble branch does not match space " + space_.to_string());
  for (double w : weights_)
    if (w < 0.0) throw ValidationError("ensemble weights must be nonnegative");
}

double StateEnsemble::trace() const {
  double t = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) t += weights_[k] * branches_[k].squaredNorm();
  return t;
}

DensityMatrix StateEnsemble::reduce(SubsystemSet keep) const {
  check_keep(space_, keep);
  const Space out_space = space_.restrict_to(keep);
  const IndexSplit split = split_indices(space_, keep);
  CMatrix rho = CMatrix::Zero(split.keep_dim, split.keep_dim);
  CMatrix M(split.keep_dim, split.traced_dim);
  for (std::size_t k = 0; k < branches_.size(); ++k) {
    if (weights_[k] == 0.0) continue;
    for (Index i = 0; i < space_.dim(); ++i) M(split.keep[i], split.traced[i]) = branches_[k](i);
    rho.noalias() += weights_[k] * (M * M.adjoint());
  }
  return DensityMatrix(out_space, rho, discarded_);
}

DensityMatrix StateEnsemble::to_density() const {
  CMatrix rho = CMatrix::Zero(space_.dim(), space_.dim());
  for (std::size_t k = 0; k < branches_.size(); ++k) rho.noalias() += weights_[k] * branches_[k] * branches_[k].adjoint();
  return DensityMatrix(space_, rho, discarded_);
}

// --- canonical states ------------------------------------------------------------

PureState coherent_state(Complex alpha, Index dim, double tail_tolerance) {
  if (dim < 1) throw ValidationError("coherent state needs dim >= 1", "dim");
  CVector c = bosonic::coherent_amplitudes(alpha, dim);
  const double tail = bosonic::poisson_tail(std::norm(alpha), dim);
  if (tail > tail_tolerance)
    throw TruncationError("coherent state |alpha|=" + std::to_string(std::abs(alpha)) + " needs more than " +
                          std::to_string(dim) + " levels (tail " + std::to_string(tail) + ")");
  c /= c.norm();
  return PureState(Space::cavity(dim), std::move(c), tail);
}

DensityMatrix thermal_density(double nbar, Index dim, double tail_tolerance) {
  if (!(nbar >= 0.0)) throw ValidationError("thermal occupancy must be nonnegative", "nbar");
  if (dim < 1) throw ValidationError("thermal state needs dim >= 1", "dim");
  const double tail = bosonic::thermal_tail(nbar, dim);
  if (tail > tail_tolerance)
    throw TruncationError("thermal state nbar=" + std::to_string(nbar) + " needs more than " + std::to_string(dim) +
                          " levels (tail " + std::to_string(tail) + ")");
  RVector p(dim);
  const double ratio = nbar / (1.0 + nbar);
  p(0) = 1.0 / (1.0 + nbar);
  for (Index n = 1; n < dim; ++n) p(n) = p(n - 1) * ratio;
  p /= p.sum();
  return DensityMatrix(Space::cavity(dim), p.cast<Complex>().asDiagonal(), tail);
}

PureState displaced_fock(Complex alpha, Index n, Index dim, double tail_tolerance, DisplacedFockMethod method) {
  if (n < 0 || n >= dim) throw ValidationError("displaced Fock state needs 0 <= n < dim", "n");
  CVector amp = CVector::Zero(dim);
  if (method == DisplacedFockMethod::matrix) {
    amp = bosonic::displacement_elements(alpha, dim, n + 1).col(n);
  } else if (std::abs(alpha) == 0.0) {
    amp(n) = 1.0;
  } else {
    // sum_r sum_j a^r/r! (-a^*)^j/j! sqrt((n-j+r)! n!) / (n-j)!  |n-j+r>
    const double r_abs = std::abs(alpha);
    const double log_a = std::log(r_abs);
    const Complex u = alpha / r_abs;
    const Complex v = -std::conj(u);
    const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
    for (Index k = 0; k < dim; ++k) {
      const double lg_k = std::lgamma(static_cast<double>(k) + 1.0);
      Complex sum = 0.0;
      for (Index j = std::max<Index>(0, n - k); j <= n; ++j) {
        const Index r = k - n + j;
        const double log_mag = static_cast<double>(r + j) * log_a - std::lgamma(r + 1.0) - std::lgamma(j + 1.0) -
                               std::lgamma(static_cast<double>(n - j) + 1.0) + 0.5 * (lg_k + lg_n) - 0.5 * r_abs * r_abs;
        sum += std::pow(u, static_cast<int>(r)) * std::pow(v, static_cast<int>(j)) * std::exp(log_mag);
      }
      amp(k) = sum;
    }
  }
  const double kept = amp.squaredNorm();
  const double tail = std::max(0.0, 1.0 - kept);
  if (tail > tail_tolerance)
    throw TruncationError("displaced Fock state needs more than " + std::to_string(dim) + " levels (tail " +
                          std::to_string(tail) + ")");
  amp /= std::sqrt(kept);
  return PureState(Space::cavity(dim), std::move(amp), tail);
}

PureState fock_state(Index n, Index dim, Subsystem kind) {
  if (n < 0 || n >= dim) throw ValidationError("Fock state needs 0 <= n < dim", "n");
  if (kind == Subsystem::qubit) throw ValidationError("Fock states live on a bosonic mode");
  CVector v = CVector::Zero(dim);
  v(n) = 1.0;
  return PureState(Space({{kind, dim}}), std::move(v));
}

PureState qubit_state(Complex up, Complex down) {
  CVector v(2);
  v << up, down;
  const double nrm = v.norm();
  if (nrm == 0.0) throw ValidationError("qubit state must be nonzero");
  return PureState(Space::qubit(), v / nrm);
}

PureState as_mode(const PureState& state, Subsystem kind) {
  if (state.space().factors().size() != 1 || kind == Subsystem::qubit || state.space().contains(Subsystem::qubit))
    throw ValidationError("as_mode relabels single bosonic-mode states only");
  return PureState(Space({{kind, state.space().dim()}}), state.amplitudes(), state.discarded_weight());
}

DensityMatrix as_mode(const DensityMatrix& state, Subsystem kind) {
  if (state.space().factors().size() != 1 || kind == Subsystem::qubit || state.space().contains(Subsystem::qubit))
    throw ValidationError("as_mode relabels single bosonic-mode states only");
  return DensityMatrix(Space({{kind, state.space().dim()}}), state.elements(), state.discarded_weight());
}

// --- composition -----------------------------------------------------------------

namespace {
template <typename T>
Space joined_space(std::span<const T> parts) {
  if (parts.empty()) throw ValidationError("tensor needs at least one part");
  std::vector<Space::Factor> factors;
  for (const auto& p : parts)
    for (const auto& f : p.space().factors()) factors.push_back(f);
  try {
    return Space(std::move(factors));
  } catch (const ValidationError&) {
    throw ValidationError("tensor parts must be ordered qubit, cavity, mechanics without repeats");
  }
}
}  // namespace

PureState tensor(std::span<const PureState> parts) {
  Space space = joined_space(parts);
  CVector v = parts[0].amplitudes();
  double kept = 1.0 - parts[0].discarded_weight();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const CVector& w = parts[i].amplitudes();
    CVector next(v.size() * w.size());
    for (Index a = 0; a < v.size(); ++a) next.segment(a * w.size(), w.size()) = v(a) * w;
    v = std::move(next);
    kept *= 1.0 - parts[i].discarded_weight();
  }
  return PureState(std::move(space), std::move(v), 1.0 - kept);
}

DensityMatrix tensor(std::span<const DensityMatrix> parts) {
  Space space = joined_space(parts);
  CMatrix m = parts[0].elements();
  double kept = 1.0 - parts[0].discarded_weight();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const CMatrix& w = parts[i].elements();
    CMatrix next(m.rows() * w.rows(), m.cols() * w.cols());
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) next.block(r * w.rows(), c * w.cols(), w.rows(), w.cols()) = m(r, c) * w;
    m = std::move(next);
    kept *= 1.0 - parts[i].discarded_weight();
  }
  return DensityMatrix(std::move(space), std::move(m), 1.0 - kept);
}

DensityMatrix partial_trace(const DensityMatrix& rho, SubsystemSet keep) {
  check_keep(rho.space(), keep);
  const Space out_space = rho.space().restrict_to(keep);
  if (keep == rho.space().subsystems()) return rho;
  const IndexSplit split = split_indices(rho.space(), keep);
  // Group flattened indices by their traced digit; within a group the kept
  // index runs 0..keep_dim-1 in order.
  std::vector<std::vector<Index>> groups(split.traced_dim, std::vector<Index>(split.keep_dim));
  for (Index i = 0; i < rho.space().dim(); ++i) groups[split.traced[i]][split.keep[i]] = i;
  CMatrix out = CMatrix::Zero(split.keep_dim, split.keep_dim);
  const CMatrix& m = rho.elements();
  for (const auto& g : groups) out += m(g, g);
  return DensityMatrix(out_space, std::move(out), rho.discarded_weight());
}

DensityMatrix partial_trace(const PureState& psi, SubsystemSet keep) {
  check_keep(psi.space(), keep);
  const Space out_space = psi.space().restrict_to(keep);
  const IndexSplit split = split_indices(psi.space(), keep);
  CMatrix M(split.keep_dim, split.traced_dim);
  for (Index i = 0; i < psi.space().dim(); ++i) M(split.keep[i], split.traced[i]) = psi.amplitudes()(i);
  return DensityMatrix(out_space, M * M.adjoint(), psi.discarded_weight());
}

CMatrix embed_operator(const Space& space, Subsystem which, const CMatrix& op) {
  const Index d = space.dim_of(which);
  if (op.rows() != d || op.cols() != d) throw ValidationError("operator shape does not match " + to_string(which));
  const Index inner = space.stride_of(which);
  const Index outer = space.dim() / (inner * d);
  CMatrix out = CMatrix::Zero(space.dim(), space.dim());
  for (Index o = 0; o < outer; ++o)
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c) {
        if (op(r, c) == Complex(0.0)) continue;
        for (Index i = 0; i < inner; ++i) out((o * d + r) * inner + i, (o * d + c) * inner + i) = op(r, c);
      }
  return out;
}

double fidelity(const PureState& a, const PureState& b) {
  if (!(a.space() == b.space())) throw ValidationError("fidelity needs states on the same space");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  if (!(rho.space() == psi.space())) throw ValidationError("fidelity needs states on the same space");
  return psi.amplitudes().dot(rho.elements() * psi.amplitudes()).real();
}

}  // namespace hqom
