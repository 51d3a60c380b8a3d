#include "hqom/kron_operator.hpp"

namespace hqom {

MechFactor MechFactor::adjoint() const {
  switch (kind) {
    case Kind::identity:
      return identity();
    case Kind::sparse:
      return from_sparse(SparseMatrix(sparse.adjoint()));
    case Kind::dense:
      return from_dense(dense.adjoint());
  }
  return identity();
}

CMatrix MechFactor::to_dense(Index n_mech) const {
  switch (kind) {
    case Kind::identity:
      return CMatrix::Identity(n_mech, n_mech);
    case Kind::sparse:
      return CMatrix(sparse);
    case Kind::dense:
      return dense;
  }
  return {};
}

namespace {

MechFactor multiply(const MechFactor& a, const MechFactor& b) {
  using K = MechFactor::Kind;
  if (a.kind == K::identity) return b;
  if (b.kind == K::identity) return a;
  if (a.kind == K::sparse && b.kind == K::sparse) return MechFactor::from_sparse(SparseMatrix(a.sparse * b.sparse));
  const CMatrix ad = a.kind == K::dense ? a.dense : CMatrix(a.sparse);
  const CMatrix bd = b.kind == K::dense ? b.dense : CMatrix(b.sparse);
  return MechFactor::from_dense(ad * bd);
}

}  // namespace

void KronOperator::add(SparseMatrix head, MechFactor mech) {
  if (head.rows() != n_head_ || head.cols() != n_head_) throw ValidationError("KronOperator head factor has wrong shape");
  if (mech.kind == MechFactor::Kind::sparse && (mech.sparse.rows() != n_mech_ || mech.sparse.cols() != n_mech_))
    throw ValidationError("KronOperator mechanics factor has wrong shape");
  if (mech.kind == MechFactor::Kind::dense && (mech.dense.rows() != n_mech_ || mech.dense.cols() != n_mech_))
    throw ValidationError("KronOperator mechanics factor has wrong shape");
  head.prune(Complex(0.0));
  if (head.nonZeros() == 0) return;
  head.makeCompressed();
  terms_.push_back({std::move(head), std::move(mech)});
}

void KronOperator::apply_add(const CMatrix& rho, Complex scale, CMatrix& out) const {
  const Index nm = n_mech_;
  if (rho.rows() != dim() || out.rows() != dim() || out.cols() != rho.cols())
    throw ValidationError("KronOperator applied to a matrix of the wrong shape");
  // reused across calls: fresh multi-MB buffers would be page-faulted in every time
  thread_local CMatrix tmp;
  for (const auto& term : terms_) {
    const CMatrix* src = &rho;
    if (term.mech.kind != MechFactor::Kind::identity) {
      // column-major rho viewed as n_mech x (n_head * cols): one product covers every head block
      tmp.resize(rho.rows(), rho.cols());
      Eigen::Map<const CMatrix> in(rho.data(), nm, n_head_ * rho.cols());
      Eigen::Map<CMatrix> res(tmp.data(), nm, n_head_ * rho.cols());
      if (term.mech.kind == MechFactor::Kind::dense)
        res.noalias() = term.mech.dense * in;
      else
        res.noalias() = term.mech.sparse * in;
      src = &tmp;
    }
    for (Index j = 0; j < term.head.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(term.head, j); it; ++it)
        out.middleRows(it.row() * nm, nm) += (scale * it.value()) * src->middleRows(j * nm, nm);
  }
}

CMatrix KronOperator::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  apply_add(rho, 1.0, out);
  return out;
}

KronOperator KronOperator::adjoint() const {
  KronOperator out(n_head_, n_mech_);
  for (const auto& t : terms_) out.add(SparseMatrix(t.head.adjoint()), t.mech.adjoint());
  return out;
}

KronOperator KronOperator::operator*(const KronOperator& other) const {
  if (other.n_head_ != n_head_ || other.n_mech_ != n_mech_) throw ValidationError("KronOperator product shape mismatch");
  KronOperator out(n_head_, n_mech_);
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) out.add(SparseMatrix(a.head * b.head), multiply(a.mech, b.mech));
  return out;
}

KronOperator& KronOperator::operator+=(const KronOperator& other) {
  if (other.n_head_ != n_head_ || other.n_mech_ != n_mech_) throw ValidationError("KronOperator sum shape mismatch");
  for (const auto& t : other.terms_) terms_.push_back(t);
  return *this;
}

KronOperator KronOperator::scaled(Complex s) const {
  KronOperator out = *this;
  for (auto& t : out.terms_) t.head *= s;
  return out;
}

KronOperator KronOperator::merged() const {
  KronOperator out(n_head_, n_mech_);
  SparseMatrix id_head(n_head_, n_head_);
  for (const auto& t : terms_) {
    if (t.mech.kind == MechFactor::Kind::identity)
      id_head += t.head;
    else
      out.terms_.push_back(t);
  }
  out.add(std::move(id_head), MechFactor::identity());
  return out;
}

CMatrix KronOperator::to_dense() const {
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (const auto& t : terms_) {
    const CMatrix m = t.mech.to_dense(n_mech_);
    for (Index j = 0; j < t.head.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(t.head, j); it; ++it)
        out.block(it.row() * n_mech_, j * n_mech_, n_mech_, n_mech_) += it.value() * m;
  }
  return out;
}

}  // namespace hqom
