#pragma once

#include <vector>

#include "hqom/bosonic.hpp"
#include "hqom/common.hpp"

namespace hqom {

/// Mechanics factor of a KronOperator term: identity, sparse, or dense.
struct MechFactor {
  enum class Kind { identity, sparse, dense };
  Kind kind = Kind::identity;
  SparseMatrix sparse;
  CMatrix dense;

  static MechFactor identity() { return {}; }
  static MechFactor from_sparse(SparseMatrix m) { return {Kind::sparse, std::move(m), {}}; }
  static MechFactor from_dense(CMatrix m) { return {Kind::dense, {}, std::move(m)}; }

  MechFactor adjoint() const;
  CMatrix to_dense(Index n_mech) const;
};

/// Operator on (qubit x cavity) x mechanics written as sum_k A_k (x) M_k,
/// with A_k sparse on the 2*n_cav dimensional "head" space. Applying it to a
/// dense matrix costs nnz(A) * cost(M) rather than a full d^3 product.
class KronOperator {
 public:
  struct Term {
    SparseMatrix head;
    MechFactor mech;
  };

  KronOperator(Index n_head, Index n_mech) : n_head_(n_head), n_mech_(n_mech) {}

  void add(SparseMatrix head, MechFactor mech);

  Index n_head() const { return n_head_; }
  Index n_mech() const { return n_mech_; }
  Index dim() const { return n_head_ * n_mech_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// out += scale * (this * rho)
  void apply_add(const CMatrix& rho, Complex scale, CMatrix& out) const;
  CMatrix apply(const CMatrix& rho) const;

  KronOperator adjoint() const;
  /// this * other
  KronOperator operator*(const KronOperator& other) const;
  KronOperator& operator+=(const KronOperator& other);
  KronOperator scaled(Complex s) const;
  /// Folds every identity-mechanics term into one head matrix.
  KronOperator merged() const;

  CMatrix to_dense() const;

 private:
  Index n_head_;
  Index n_mech_;
  std::vector<Term> terms_;
};

}  // namespace hqom
