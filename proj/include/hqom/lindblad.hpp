#pragma once

#include <span>
#include <string>
#include <vector>

#include "hqom/closed_dynamics.hpp"
#include "hqom/kron_operator.hpp"
#include "hqom/params.hpp"
#include "hqom/state.hpp"

namespace hqom {

/// One collapse channel rate * L[O], with L[O]rho = 2 O rho O^dag - rho O^dag O - O^dag O rho.
struct DissipatorSpec {
  std::string name;
  double rate = 0.0;
  KronOperator op;
};

/// Gamma_phi + 4 gamma_m lambda^2 / ln((1 + n_th) / n_th). The log term is
/// dropped at n_th = 0, where it tends to zero.
double dressed_dephasing_rate(double Gamma_phi, double gamma_m, double lambda, double n_th);

/// 4 gamma_m g^2 / ln((1 + n_th) / n_th), zero at n_th = 0.
double photon_dephasing_rate(double gamma_m, double g, double n_th);

/// Lab-frame collapse channels on a 2 x n_cav x n_mech space. Channels with
/// zero rate are omitted.
std::vector<DissipatorSpec> build_dissipators(const ModelParams& p, Index n_cav, Index n_mech);

/// H = b^dag b - (g a^dag a + lambda sigma_z)(b + b^dag).
KronOperator hamiltonian(const ModelParams& p, Index n_cav, Index n_mech);

/// Lab-frame d rho / dt for rho on the full qubit x cavity x mechanics space.
CMatrix lindblad_rhs(const DensityMatrix& rho, const ModelParams& p);

/// Reference frame the integrator works in. `interaction` removes the exact
/// closed-system propagator, so only the transformed collapse operators act
/// and the mechanics stays close to its initial amplitude.
enum class Frame { lab, interaction };

/// Interaction-picture d rho_I / dt at time t. A nonzero `mech_offset` beta
/// means rho_i is written in a mechanics frame displaced by beta, b = beta + c.
CMatrix interaction_rhs(const DensityMatrix& rho_i, const ModelParams& p, double t, Complex mech_offset = 0.0);

/// Maps an interaction-picture state at time t back to the lab-frame
/// qubit-cavity reduced state.
DensityMatrix interaction_to_qubit_cavity(const DensityMatrix& rho_i, const ModelParams& p, double t,
                                          Complex mech_offset = 0.0);

struct IntegratorSettings {
  /// Fixed RK4 step; 0 picks 1e-3 in the lab frame and 0.05 in the interaction frame.
  double dt = 0.0;
  /// Re-run with dt / 2 and compare the final states.
  bool check_halving = false;
  double halving_tolerance = 1e-6;
};

struct OpenSystemConfig {
  ModelParams params;
  Frame frame = Frame::lab;
  IntegratorSettings integrator;
  double t_final = kTwoPi;
  /// Extra sample times in (0, t_final); 0 and t_final are always sampled.
  std::vector<double> sample_times;
  /// Interaction frame only: rho0 and the stored states describe the
  /// mechanics displaced by this amplitude.
  Complex mech_offset{0.0, 0.0};
  double positivity_tolerance = 1e-6;
  double trace_tolerance = 1e-6;

  void validate() const;
  double step() const;
};

struct OpenTrajectory {
  Frame frame = Frame::lab;
  /// Full states, in whichever frame was integrated.
  Trajectory<DensityMatrix> states;
  /// Lab-frame qubit-cavity reduced states at the same times.
  Trajectory<DensityMatrix> qubit_cavity;
  double dt = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  /// Max |rho_dt - rho_dt/2| at t_final, or -1 when not checked.
  double halving_error = -1.0;
};

/// Fixed-step RK4 on the dense density matrix. Hermiticity is restored after
/// every step. Throws NumericalError on step-size underflow, trace drift
/// above tolerance, or a sample eigenvalue below -positivity_tolerance.
OpenTrajectory integrate(const DensityMatrix& rho0, const OpenSystemConfig& config);

enum class MechanicsInit { coherent, thermal };

/// Truncations for an open run from (|up> + |down>)/sqrt2 (x) |alpha> (x) mechanics.
Dims open_dims(const ModelParams& p, Frame frame, MechanicsInit init, double tail_tolerance);

/// Mechanics offset used for an open run: beta for coherent mechanics in the
/// interaction frame, where the closed dynamics leaves |beta> unchanged, else 0.
Complex open_mech_offset(const ModelParams& p, Frame frame, MechanicsInit init);

/// Initial state for the open runs; thermal mechanics uses n_th. Coherent
/// mechanics is stored as |beta - mech_offset>.
DensityMatrix open_initial_state(const ModelParams& p, Dims dims, MechanicsInit init, double tail_tolerance,
                                 Complex mech_offset = 0.0);

struct SweepSettings {
  Frame frame = Frame::interaction;
  MechanicsInit mech_init = MechanicsInit::coherent;
  double dt = 0.0;
  double tail_tolerance = 1e-6;
  /// Zero entries are chosen by open_dims.
  Dims dims{};
  bool check_halving = false;
};

struct SweepCell {
  double Gamma = 0.0;
  double gamma_phi = 0.0;
  double neg_qc_2pi = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  Dims dims;
  double dt = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
};

/// Qubit-cavity negativity at t = 2 pi for every (Gamma, Gamma_phi) pair,
/// Gamma-major. Other rates come from `p`.
SweepResult negativity_sweep(std::span<const double> Gamma_values, std::span<const double> gamma_phi_values,
                             const ModelParams& p, const SweepSettings& settings = {});

}  // namespace hqom
