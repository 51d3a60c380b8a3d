#pragma once

#include "hqom/common.hpp"

namespace hqom {

/// Dissipation rates of the dressed master equation, all in units of the
/// mechanical frequency.
struct Rates {
  double kappa = 0.0;      ///< cavity decay
  double gamma_m = 0.0;    ///< mechanical damping
  double Gamma = 0.0;      ///< qubit relaxation
  double Gamma_phi = 0.0;  ///< bare qubit dephasing
  double n_th = 0.0;       ///< mechanical bath occupancy
  double n_q = 0.0;        ///< qubit bath occupancy
  /// When set, n_q is tied to n_th (single thermal reservoir).
  bool common_reservoir = true;

  double qubit_occupancy() const { return common_reservoir ? n_th : n_q; }
  bool all_zero() const { return kappa == 0.0 && gamma_m == 0.0 && Gamma == 0.0 && Gamma_phi == 0.0; }
};

/// Scaled model parameters. Time is measured in units where the mechanical
/// frequency is 1, so t = 2 pi is one mechanical cycle.
struct ModelParams {
  double g = 0.0;       ///< radiation-pressure coupling g0 / omega_m
  double lambda = 0.0;  ///< qubit-mechanics coupling lambda0 / omega_m
  Complex alpha{0.0, 0.0};
  Complex beta{0.0, 0.0};
  double nbar_mech = 0.0;
  Rates rates;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Truncation policy shared by the state constructors and evolutions.
struct Truncation {
  /// Largest discarded Fock weight accepted for any constructed state.
  double tail_tolerance = 1e-10;
  /// Hard ceiling on any single mode dimension.
  Index max_dim = 4096;
};

/// ceil(|a|^2 + 7|a| + 10): Poisson tail below 1e-10 for a coherent amplitude.
/// With a tolerance looser than 1e-10 the smallest adequate dimension is
/// searched for instead.
Index coherent_dim(double abs_alpha, double tail_tolerance = 1e-10);

/// ceil(20 (nbar + 1)), or the smallest dimension meeting a looser tolerance.
Index thermal_dim(double nbar, double tail_tolerance = 1e-10);

/// Largest |g n + lambda sigma| over the cavity truncation.
double max_shift(const ModelParams& p, Index n_cav);

}  // namespace hqom
