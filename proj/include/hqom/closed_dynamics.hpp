#pragma once

#include <vector>

#include "hqom/params.hpp"
#include "hqom/state.hpp"

namespace hqom {

/// eta(t) = 1 - e^{-it}; vanishes at every full mechanical cycle.
Complex eta(double t);

/// Times paired with states, times strictly increasing.
template <typename State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  void push_back(double t, State s) {
    if (!times.empty() && !(t > times.back())) throw ValidationError("trajectory times must be strictly increasing");
    times.push_back(t);
    states.push_back(std::move(s));
  }
  std::size_t size() const { return times.size(); }
};

/// Mode dimensions chosen for a closed-form evolution.
struct Dims {
  Index n_cav = 0;
  Index n_mech = 0;
};

/// Cavity and mechanics truncations for the coherent-coherent initial state at
/// time t. Mechanics must absorb the displacement (g n + lambda sigma) eta(t).
Dims coherent_dims(const ModelParams& p, double t, const Truncation& trunc = {});

/// Applies the exact propagator block-wise: for s = g n + lambda sigma the
/// mechanics is rotated by e^{-it b^dag b}, displaced by D(s eta) and given the
/// phase e^{i s^2 (t - sin t)}. `n_mech_out` = 0 picks the output truncation
/// from the displacement rule. Throws TruncationError if norm leaks.
PureState evolve_unitary(const PureState& psi0, double t, const ModelParams& p, const Truncation& trunc = {},
                         Index n_mech_out = 0);

/// Four-branch closed form for the initial state
/// (|up> + |down>)/sqrt2 (x) (|0> - |1>)/sqrt2 (x) |beta>.
PureState evolve_fock_superposition(double t, const ModelParams& p, const Truncation& trunc = {}, Index n_mech = 0);

/// Branch amplitude C_n^{+/-}(t) for the coherent-coherent initial state.
Complex coherent_amplitude_coeff(Index n, int sign, double t, const ModelParams& p);

/// Closed form sum_n (C_n^+ |up>|phi_n^+> + C_n^- |down>|phi_n^->)|n>, with
/// phi_n^{+/-} = beta e^{-it} + (g n +/- lambda) eta.
PureState evolve_coherent(double t, const ModelParams& p, const Truncation& trunc = {}, Dims dims = {});

/// Qubit-cavity state after l full mechanical cycles (mechanics factored out).
PureState qubit_cavity_at_cycle(int l, const ModelParams& p, const Truncation& trunc = {}, Index n_cav = 0);

/// Coherent cavity, thermal mechanics with occupancy p.nbar_mech, evolved by
/// conjugation with the exact propagator. One branch per thermal Fock level.
StateEnsemble evolve_thermal(double t, const ModelParams& p, const Truncation& trunc = {}, Dims dims = {});

/// Initial product state (|up> + |down>)/sqrt2 (x) |alpha> (x) |beta> on given dims.
PureState coherent_initial_state(const ModelParams& p, Dims dims, double tail_tolerance = 1e-10);

}  // namespace hqom
