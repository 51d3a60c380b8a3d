#pragma once

#include "hqom/params.hpp"
#include "hqom/state.hpp"

namespace hqom {

/// Uniform phase-space grid. Quadratures follow alpha = (x + i y) / sqrt2, so
/// the vacuum has unit variance 1/2 in each of x and y.
struct GridSpec {
  double x_min = -6.0, x_max = 6.0;
  Index nx = 201;
  double y_min = -6.0, y_max = 6.0;
  Index ny = 201;
  /// Reject grids whose integral misses 1 by more than this; <= 0 disables.
  double normalization_tolerance = 1e-3;

  static GridSpec square(double half_width, Index points);
  /// +-(|alpha| + 4) on each axis, 201 points.
  static GridSpec for_amplitude(Complex alpha);
  void validate() const;
};

struct WignerGrid {
  RVector x;
  RVector y;
  /// values(iy, ix) = W(x[ix], y[iy]).
  RMatrix values;

  double dx() const;
  double dy() const;
  double integral() const;
  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
  /// Bilinear interpolation; zero outside the grid.
  double interpolate(double xq, double yq) const;
};

/// W(x, y) = (1/pi) Tr[rho D(2 alpha) (-1)^N] for a single-mode state.
double wigner_point(const DensityMatrix& rho, double x, double y);

/// Fock-basis evaluation on a grid; integrates to 1 over the plane.
WignerGrid wigner(const DensityMatrix& rho, const GridSpec& spec);

/// Cavity state after l cycles with qubit and mechanics traced out:
/// rho_nm = e^{-|a|^2} a^n a*^m / sqrt(n! m!) e^{2 i g^2 l pi (n^2 - m^2)} cos(4 pi g l lambda (m - n)).
DensityMatrix cavity_unconditional(int l, const ModelParams& p, Index n_cav = 0, double tail_tolerance = 1e-10);

struct ProjectedCavity {
  PureState state;
  /// Probability of the qubit outcome.
  double probability;
};

/// Cavity state after l cycles conditioned on the qubit being found in
/// (|up> + sign |down>)/sqrt2. Throws NumericalError when the outcome has
/// vanishing weight.
ProjectedCavity project_cavity(int l, const ModelParams& p, int sign, Index n_cav = 0, double tail_tolerance = 1e-10);

/// Normalized |+>-conditioned cavity state as a density matrix.
DensityMatrix cavity_projected_plus(int l, const ModelParams& p, Index n_cav = 0, double tail_tolerance = 1e-10);

struct CatCheck {
  bool satisfied;
  double residual;
};

/// |g sqrt(2 l p) - 1| < 1e-9.
CatCheck cat_condition(double g, int l, int p);

/// |<n| D^dag(alpha) |psi>|^2 for a single-mode pure state.
double fidelity_displaced_fock(const PureState& state, Complex alpha, Index n, double tail_tolerance = 1e-10);

struct KittenOptimum {
  double g_star = 0.0;
  double f_max = 0.0;
  double f_lower = 0.0;  ///< objective at the lower end of the range
  double f_upper = 0.0;  ///< objective at the upper end
  bool inconclusive = false;  ///< objective flat to 1e-6 over the scan
};

/// Fidelity of the |+>-projected cavity state against D(alpha)|1> as a
/// function of g at fixed lambda and l.
double kitten_fidelity(double g, Complex alpha, double lambda, int l, double tail_tolerance = 1e-10);

/// Grid scan over [g_lo, g_hi] followed by golden-section refinement around
/// the best grid point.
KittenOptimum optimize_g_for_kitten(Complex alpha, double lambda, int l, double g_lo, double g_hi,
                                    Index scan_points = 301, double tail_tolerance = 1e-10);

/// Number of lobes: local maxima of the angular distribution
/// A(theta) = int W(r, theta) r dr above `threshold` times its peak.
int count_lobes(const WignerGrid& grid, double threshold = 0.1, Index angles = 360);

/// "Nonclassical" as used throughout: min W < -1e-3.
inline bool is_nonclassical(const WignerGrid& grid) { return grid.min() < -1e-3; }

}  // namespace hqom
