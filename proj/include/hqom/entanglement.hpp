#pragma once

#include <span>

#include "hqom/state.hpp"

namespace hqom {

struct BipartitePartition {
  SubsystemSet side_a;
  SubsystemSet side_b;

  /// Disjoint, nonempty, and together covering exactly `space`'s subsystems.
  void validate_for(const Space& space) const;
};

/// Transposes the indices of `side` only; the result is in the original basis order.
CMatrix partial_transpose(const DensityMatrix& rho, SubsystemSet side);

/// Sum of |eps| over negative eigenvalues of the partial transpose, i.e.
/// 2N = sum_i |eps_i| - eps_i. Eigenvalues above -1e-10 are treated as zero.
double negativity(const DensityMatrix& rho, const BipartitePartition& partition);

/// Negativity between `a` and `b` of a pure state, tracing out the remaining
/// subsystem. Both sides are compressed to the support of their reduced
/// states first, which leaves the partial-transpose spectrum unchanged.
double negativity(const PureState& psi, SubsystemSet a, SubsystemSet b);
double negativity(const StateEnsemble& ensemble, SubsystemSet a, SubsystemSet b);

/// 1 - Tr rho^2.
double linear_entropy(const DensityMatrix& rho);

/// S_q + S_c - S_o from the single-party reductions of a tripartite state.
double intrinsic_qc_numeric(const PureState& psi);
double intrinsic_qc_numeric(const DensityMatrix& rho);
/// Weight-averaged over the pure branches.
double intrinsic_qc_numeric(const StateEnsemble& ensemble);

/// Closed form of S_q + S_c - S_o for the optical-qubit initial state.
double intrinsic_qc_analytic_fock(double t, double g, double lambda);

/// 1 - exp(-4 alpha^2 sin^2(4 g lambda pi)): coherent-cavity value after one cycle.
double intrinsic_qc_2pi_coherent(double g, double lambda, double alpha);

struct EntanglementRecord {
  double time = 0.0;
  double negativity_qc = 0.0;
  double negativity_qo = 0.0;
  double negativity_oc = 0.0;
  double intrinsic_qc = 0.0;
};

EntanglementRecord entanglement_record(double t, const PureState& psi);
EntanglementRecord entanglement_record(double t, const StateEnsemble& ensemble);

}  // namespace hqom
