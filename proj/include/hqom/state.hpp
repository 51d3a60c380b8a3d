#pragma once

#include <span>
#include <vector>

#include "hqom/common.hpp"
#include "hqom/space.hpp"

namespace hqom {

class DensityMatrix;

/// Unit-norm amplitude vector over a Space. `discarded_weight` records the
/// probability cut away by Fock truncation before renormalization.
class PureState {
 public:
  PureState(Space space, CVector amplitudes, double discarded_weight = 0.0);

  const Space& space() const { return space_; }
  const CVector& amplitudes() const { return amplitudes_; }
  double discarded_weight() const { return discarded_; }
  double norm() const { return amplitudes_.norm(); }

  DensityMatrix to_density() const;
  DensityMatrix reduce(SubsystemSet keep) const;

 private:
  Space space_;
  CVector amplitudes_;
  double discarded_;
};

/// Hermitian, unit-trace, positive semidefinite matrix over a Space.
class DensityMatrix {
 public:
  DensityMatrix(Space space, CMatrix elements, double discarded_weight = 0.0);

  const Space& space() const { return space_; }
  const CMatrix& elements() const { return rho_; }
  double discarded_weight() const { return discarded_; }

  double trace() const { return rho_.trace().real(); }
  double purity() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

  DensityMatrix reduce(SubsystemSet keep) const;

  /// Throws NumericalError when Hermiticity, trace or positivity fall outside
  /// the given tolerances.
  void check(double herm_tol = 1e-10, double trace_tol = 1e-8, double pos_tol = 1e-8) const;

 private:
  Space space_;
  CMatrix rho_;
  double discarded_;
};

/// Convex mixture of pure branches, sum_k w_k |v_k><v_k|. Used where the full
/// density matrix would be too large to store.
class StateEnsemble {
 public:
  StateEnsemble(Space space, std::vector<double> weights, std::vector<CVector> branches, double discarded_weight = 0.0);

  const Space& space() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<CVector>& branches() const { return branches_; }
  double discarded_weight() const { return discarded_; }
  double trace() const;

  DensityMatrix reduce(SubsystemSet keep) const;
  DensityMatrix to_density() const;

 private:
  Space space_;
  std::vector<double> weights_;
  std::vector<CVector> branches_;
  double discarded_;
};

// --- canonical states -------------------------------------------------------

/// |alpha> truncated to `dim` levels and renormalized. Throws TruncationError
/// when the discarded Poisson weight exceeds `tail_tolerance`.
PureState coherent_state(Complex alpha, Index dim, double tail_tolerance = 1e-10);

/// Geometric thermal distribution p_n = nbar^n / (1 + nbar)^{n+1}, renormalized.
DensityMatrix thermal_density(double nbar, Index dim, double tail_tolerance = 1e-10);

enum class DisplacedFockMethod {
  series,  ///< closed-form double sum over the Fock expansion
  matrix,  ///< column of the exact displacement matrix
};

/// D(alpha)|n> on a cavity mode truncated to `dim` levels.
PureState displaced_fock(Complex alpha, Index n, Index dim, double tail_tolerance = 1e-10,
                         DisplacedFockMethod method = DisplacedFockMethod::series);

PureState fock_state(Index n, Index dim, Subsystem kind = Subsystem::cavity);
PureState qubit_state(Complex up, Complex down);

/// Relabels a single-mode state as living on another mode factor.
PureState as_mode(const PureState& state, Subsystem kind);
DensityMatrix as_mode(const DensityMatrix& state, Subsystem kind);

// --- composition ------------------------------------------------------------

PureState tensor(std::span<const PureState> parts);
DensityMatrix tensor(std::span<const DensityMatrix> parts);

DensityMatrix partial_trace(const DensityMatrix& rho, SubsystemSet keep);
DensityMatrix partial_trace(const PureState& psi, SubsystemSet keep);

/// Lifts a single-factor operator to the whole space (identity elsewhere).
CMatrix embed_operator(const Space& space, Subsystem which, const CMatrix& op);

/// |<a|b>|^2 for pure states on the same space.
double fidelity(const PureState& a, const PureState& b);
/// <psi|rho|psi>.
double fidelity(const DensityMatrix& rho, const PureState& psi);

}  // namespace hqom
