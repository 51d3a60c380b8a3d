#include "hqom/entanglement.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace hqom {

namespace {

constexpr double kNegativeNoise = 1e-10;
constexpr double kSupportCutoff = 1e-14;
constexpr Index kCompressAbove = 64;

const SubsystemSet kQubit{Subsystem::qubit};
const SubsystemSet kCavity{Subsystem::cavity};
const SubsystemSet kMech{Subsystem::mechanics};

// Digits of every flat index grouped into (side a, side b, rest).
struct TripleSplit {
  std::vector<Index> a, b, rest;
  Index da = 1, db = 1, drest = 1;
};

TripleSplit split3(const Space& space, SubsystemSet sa, SubsystemSet sb) {
  const auto& factors = space.factors();
  TripleSplit out;
  for (const auto& f : factors) {
    if (sa.contains(f.kind))
      out.da *= f.dim;
    else if (sb.contains(f.kind))
      out.db *= f.dim;
    else
      out.drest *= f.dim;
  }
  out.a.resize(space.dim());
  out.b.resize(space.dim());
  out.rest.resize(space.dim());
  std::vector<Index> digit(factors.size(), 0);
  for (Index i = 0; i < space.dim(); ++i) {
    Index ia = 0, ib = 0, ir = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      Index* target = sa.contains(factors[f].kind) ? &ia : (sb.contains(factors[f].kind) ? &ib : &ir);
      *target = *target * factors[f].dim + digit[f];
    }
    out.a[i] = ia;
    out.b[i] = ib;
    out.rest[i] = ir;
    for (std::size_t f = factors.size(); f-- > 0;) {
      if (++digit[f] < factors[f].dim) break;
      digit[f] = 0;
    }
  }
  return out;
}

void check_sides(const Space& space, SubsystemSet a, SubsystemSet b) {
  if (a.empty() || b.empty()) throw ValidationError("bipartition sides must be nonempty");
  if (!(a & b).empty()) throw ValidationError("bipartition sides must be disjoint");
  if (!(a | b).without(space.subsystems()).empty())
    throw ValidationError("bipartition " + a.to_string() + "|" + b.to_string() + " not contained in " + space.to_string());
}

// Orthonormal basis of the support of a Hermitian PSD matrix.
CMatrix support_basis(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (rho + rho.adjoint()));
  const RVector& ev = eig.eigenvalues();
  Index keep = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > kSupportCutoff) ++keep;
  if (keep == 0) keep = 1;
  return eig.eigenvectors().rightCols(keep);
}

// Negative part of the spectrum of an (a, b)-major matrix after transposing b.
double negativity_of_ab(const CMatrix& rho_ab, Index da, Index db) {
  CMatrix pt(da * db, da * db);
  for (Index a = 0; a < da; ++a)
    for (Index b = 0; b < db; ++b)
      for (Index a2 = 0; a2 < da; ++a2)
        for (Index b2 = 0; b2 < db; ++b2) pt(a * db + b, a2 * db + b2) = rho_ab(a * db + b2, a2 * db + b);
  const CMatrix h = 0.5 * (pt + pt.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double e = eig.eigenvalues()(i);
    if (e < -kNegativeNoise) neg -= e;
  }
  return neg;
}

// rho_ab = sum_k w_k X_k X_k^dag, each X_k a (da x db) coefficient matrix.
double negativity_of_branches(std::span<const double> w, std::span<const CMatrix> X, Index da, Index db) {
  CMatrix Va, Vb;
  const bool compress = da * db > kCompressAbove;
  if (compress) {
    CMatrix ra = CMatrix::Zero(da, da);
    CMatrix rb = CMatrix::Zero(db, db);
    for (std::size_t k = 0; k < X.size(); ++k) {
      ra.noalias() += w[k] * X[k] * X[k].adjoint();
      rb.noalias() += w[k] * X[k].transpose() * X[k].conjugate();
    }
    Va = support_basis(ra);
    Vb = support_basis(rb).conjugate();
  }
  const Index ra_dim = compress ? Va.cols() : da;
  const Index rb_dim = compress ? Vb.cols() : db;
  CMatrix rho = CMatrix::Zero(ra_dim * rb_dim, ra_dim * rb_dim);
  CMatrix Y;
  for (std::size_t k = 0; k < X.size(); ++k) {
    if (w[k] == 0.0) continue;
    Y = compress ? CMatrix(Va.adjoint() * X[k] * Vb) : X[k];
    // vec in (a, b)-major order
    const CVector v = Y.transpose().reshaped();
    rho.noalias() += w[k] * v * v.adjoint();
  }
  return negativity_of_ab(rho, ra_dim, rb_dim);
}

template <typename Visit>
double negativity_pure_like(const Space& space, SubsystemSet a, SubsystemSet b, std::size_t count, Visit branch) {
  check_sides(space, a, b);
  const TripleSplit s = split3(space, a, b);
  std::vector<double> weights;
  std::vector<CMatrix> X;
  weights.reserve(count * s.drest);
  X.reserve(count * s.drest);
  for (std::size_t k = 0; k < count; ++k) {
    const auto [w, vec] = branch(k);
    const std::size_t first = X.size();
    for (Index r = 0; r < s.drest; ++r) {
      X.emplace_back(CMatrix::Zero(s.da, s.db));
      weights.push_back(w);
    }
    for (Index i = 0; i < space.dim(); ++i) X[first + s.rest[i]](s.a[i], s.b[i]) = (*vec)(i);
  }
  return negativity_of_branches(weights, X, s.da, s.db);
}

}  // namespace

void BipartitePartition::validate_for(const Space& space) const {
  check_sides(space, side_a, side_b);
  if (!((side_a | side_b) == space.subsystems()))
    throw ValidationError("bipartition " + side_a.to_string() + "|" + side_b.to_string() + " must cover " +
                          space.to_string());
}

CMatrix partial_transpose(const DensityMatrix& rho, SubsystemSet side) {
  const Space& space = rho.space();
  if (side.empty() || !side.without(space.subsystems()).empty())
    throw ValidationError("partial transpose side " + side.to_string() + " invalid for " + space.to_string());
  const SubsystemSet rest = space.subsystems().without(side);
  const TripleSplit s = split3(space, side, rest);
  // flat index from (side digit, rest digit)
  std::vector<Index> flat(space.dim());
  for (Index i = 0; i < space.dim(); ++i) flat[s.a[i] * s.db + s.b[i]] = i;
  const CMatrix& m = rho.elements();
  CMatrix out(space.dim(), space.dim());
  for (Index i = 0; i < space.dim(); ++i)
    for (Index j = 0; j < space.dim(); ++j)
      out(i, j) = m(flat[s.a[j] * s.db + s.b[i]], flat[s.a[i] * s.db + s.b[j]]);
  return out;
}

double negativity(const DensityMatrix& rho, const BipartitePartition& partition) {
  const Space& space = rho.space();
  partition.validate_for(space);
  if (rho.hermiticity_error() > 1e-8) throw ValidationError("negativity needs a Hermitian density matrix");
  const TripleSplit s = split3(space, partition.side_a, partition.side_b);
  std::vector<Index> perm(space.dim());
  for (Index i = 0; i < space.dim(); ++i) perm[s.a[i] * s.db + s.b[i]] = i;
  CMatrix ab = rho.elements()(perm, perm);
  if (s.da * s.db <= kCompressAbove) return negativity_of_ab(ab, s.da, s.db);

  // compress each side to its reduced support
  CMatrix ra = CMatrix::Zero(s.da, s.da);
  CMatrix rb = CMatrix::Zero(s.db, s.db);
  for (Index a = 0; a < s.da; ++a)
    for (Index a2 = 0; a2 < s.da; ++a2) ra(a, a2) = ab.block(a * s.db, a2 * s.db, s.db, s.db).trace();
  for (Index a = 0; a < s.da; ++a) rb += ab.block(a * s.db, a * s.db, s.db, s.db);
  const CMatrix Va = support_basis(ra);
  const CMatrix Vb = support_basis(rb);
  CMatrix V = CMatrix::Zero(s.da * s.db, Va.cols() * Vb.cols());
  for (Index a = 0; a < s.da; ++a)
    for (Index i = 0; i < Va.cols(); ++i) V.block(a * s.db, i * Vb.cols(), s.db, Vb.cols()) = Va(a, i) * Vb;
  const CMatrix compressed = V.adjoint() * ab * V;
  return negativity_of_ab(compressed, Va.cols(), Vb.cols());
}

double negativity(const PureState& psi, SubsystemSet a, SubsystemSet b) {
  return negativity_pure_like(psi.space(), a, b, 1, [&](std::size_t) {
    return std::pair<double, const CVector*>{1.0, &psi.amplitudes()};
  });
}

double negativity(const StateEnsemble& ensemble, SubsystemSet a, SubsystemSet b) {
  return negativity_pure_like(ensemble.space(), a, b, ensemble.branches().size(), [&](std::size_t k) {
    return std::pair<double, const CVector*>{ensemble.weights()[k], &ensemble.branches()[k]};
  });
}

double linear_entropy(const DensityMatrix& rho) { return 1.0 - rho.purity(); }

namespace {
template <typename State>
double intrinsic_from(const State& s) {
  if (!(s.space().subsystems() == SubsystemSet::all()))
    throw ValidationError("intrinsic entanglement needs the full tripartite state");
  return linear_entropy(s.reduce(kQubit)) + linear_entropy(s.reduce(kCavity)) - linear_entropy(s.reduce(kMech));
}
}  // namespace

double intrinsic_qc_numeric(const PureState& psi) { return intrinsic_from(psi); }
double intrinsic_qc_numeric(const DensityMatrix& rho) { return intrinsic_from(rho); }
// The entropy combination only means something for pure states, so a mixture
// of pure branches reports the weighted average over its branches.
double intrinsic_qc_numeric(const StateEnsemble& ensemble) {
  double total = 0.0, acc = 0.0;
  for (std::size_t k = 0; k < ensemble.branches().size(); ++k) {
    const double w = ensemble.weights()[k];
    if (w == 0.0) continue;
    acc += w * intrinsic_from(PureState(ensemble.space(), ensemble.branches()[k]));
    total += w;
  }
  if (total <= 0.0) throw NumericalError("ensemble has no weight");
  return acc / total;
}

double intrinsic_qc_analytic_fock(double t, double g, double lambda) {
  const double c = std::cos(t) - 1.0;
  const double gp = g + 2.0 * lambda;
  const double gm = g - 2.0 * lambda;
  return 0.125 * (std::exp(2.0 * gp * gp * c) + std::exp(2.0 * gm * gm * c) + 2.0 -
                  2.0 * (std::exp(2.0 * g * g * c) + std::exp(8.0 * lambda * lambda * c)) *
                      std::cos(4.0 * g * lambda * (t - std::sin(t))));
}

double intrinsic_qc_2pi_coherent(double g, double lambda, double alpha) {
  const double s = std::sin(4.0 * g * lambda * kPi);
  return 1.0 - std::exp(-4.0 * alpha * alpha * s * s);
}

EntanglementRecord entanglement_record(double t, const PureState& psi) {
  EntanglementRecord r;
  r.time = t;
  r.negativity_qc = negativity(psi, kQubit, kCavity);
  r.negativity_qo = negativity(psi, kQubit, kMech);
  r.negativity_oc = negativity(psi, kMech, kCavity);
  r.intrinsic_qc = intrinsic_qc_numeric(psi);
  return r;
}

EntanglementRecord entanglement_record(double t, const StateEnsemble& ensemble) {
  EntanglementRecord r;
  r.time = t;
  r.negativity_qc = negativity(ensemble, kQubit, kCavity);
  r.negativity_qo = negativity(ensemble, kQubit, kMech);
  r.negativity_oc = negativity(ensemble, kMech, kCavity);
  r.intrinsic_qc = intrinsic_qc_numeric(ensemble);
  return r;
}

}  // namespace hqom
