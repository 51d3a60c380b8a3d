#include "hqom/nonclassical.hpp"

#include <algorithm>
#include <cmath>

#include "hqom/bosonic.hpp"

namespace hqom {

namespace {

Index single_mode_dim(const DensityMatrix& rho) {
  if (rho.space().factors().size() != 1 || rho.space().factors()[0].kind == Subsystem::qubit)
    throw ValidationError("Wigner function needs a single bosonic mode, got " + rho.space().to_string());
  return rho.space().dim();
}

void require_cycles(int l) {
  if (l < 1) throw ValidationError("cycle count l must be >= 1", "l");
}

Index cavity_dim_for(const ModelParams& p, Index n_cav, double tol) {
  const Index need = coherent_dim(std::abs(p.alpha), tol);
  if (n_cav == 0) return need;
  if (bosonic::poisson_tail(std::norm(p.alpha), n_cav) > tol)
    throw TruncationError("cavity dimension " + std::to_string(n_cav) + " too small for |alpha|=" +
                          std::to_string(std::abs(p.alpha)));
  return n_cav;
}

}  // namespace

GridSpec GridSpec::square(double half_width, Index points) {
  GridSpec s;
  s.x_min = s.y_min = -half_width;
  s.x_max = s.y_max = half_width;
  s.nx = s.ny = points;
  return s;
}

GridSpec GridSpec::for_amplitude(Complex alpha) { return square(std::abs(alpha) + 4.0, 201); }

void GridSpec::validate() const {
  if (nx < 2 || ny < 2) throw ValidationError("Wigner grid needs at least 2 points per axis", "grid_points");
  if (!(x_max > x_min) || !(y_max > y_min)) throw ValidationError("Wigner grid bounds must be increasing", "grid_half_width");
}

double WignerGrid::dx() const { return (x(x.size() - 1) - x(0)) / static_cast<double>(x.size() - 1); }
double WignerGrid::dy() const { return (y(y.size() - 1) - y(0)) / static_cast<double>(y.size() - 1); }
double WignerGrid::integral() const { return values.sum() * dx() * dy(); }

double WignerGrid::interpolate(double xq, double yq) const {
  const double fx = (xq - x(0)) / dx();
  const double fy = (yq - y(0)) / dy();
  if (fx < 0.0 || fy < 0.0 || fx > static_cast<double>(x.size() - 1) || fy > static_cast<double>(y.size() - 1))
    return 0.0;
  const Index ix = std::min<Index>(static_cast<Index>(fx), x.size() - 2);
  const Index iy = std::min<Index>(static_cast<Index>(fy), y.size() - 2);
  const double u = fx - static_cast<double>(ix);
  const double v = fy - static_cast<double>(iy);
  return (1 - u) * (1 - v) * values(iy, ix) + u * (1 - v) * values(iy, ix + 1) + (1 - u) * v * values(iy + 1, ix) +
         u * v * values(iy + 1, ix + 1);
}

double wigner_point(const DensityMatrix& rho, double x, double y) {
  const Index dim = single_mode_dim(rho);
  const Complex two_alpha = std::sqrt(2.0) * Complex(x, y);
  const CMatrix d = bosonic::displacement_elements(two_alpha, dim, dim);
  // Tr[rho D (-1)^N] = sum_n (-1)^n sum_k rho_nk D_kn
  const CMatrix& r = rho.elements();
  double w = 0.0;
  for (Index n = 0; n < dim; ++n) {
    const Complex row = r.row(n).transpose().cwiseProduct(d.col(n)).sum();
    w += (n % 2 == 0 ? 1.0 : -1.0) * row.real();
  }
  return w / kPi;
}

WignerGrid wigner(const DensityMatrix& rho, const GridSpec& spec) {
  spec.validate();
  single_mode_dim(rho);
  WignerGrid g;
  g.x = RVector::LinSpaced(spec.nx, spec.x_min, spec.x_max);
  g.y = RVector::LinSpaced(spec.ny, spec.y_min, spec.y_max);
  g.values.resize(spec.ny, spec.nx);
  for (Index iy = 0; iy < spec.ny; ++iy)
    for (Index ix = 0; ix < spec.nx; ++ix) g.values(iy, ix) = wigner_point(rho, g.x(ix), g.y(iy));
  if (spec.normalization_tolerance > 0.0) {
    const double integral = g.integral();
    if (std::abs(integral - 1.0) > spec.normalization_tolerance)
      throw TruncationError("Wigner grid does not cover the state: integral " + std::to_string(integral));
  }
  return g;
}

DensityMatrix cavity_unconditional(int l, const ModelParams& p, Index n_cav, double tail_tolerance) {
  require_cycles(l);
  p.validate();
  const Index dim = cavity_dim_for(p, n_cav, tail_tolerance);
  const CVector c = bosonic::coherent_amplitudes(p.alpha, dim);
  const double kerr = 2.0 * p.g * p.g * l * kPi;
  const double split = 4.0 * kPi * p.g * l * p.lambda;
  CMatrix rho(dim, dim);
  for (Index n = 0; n < dim; ++n)
    for (Index m = 0; m < dim; ++m) {
      const double dn = static_cast<double>(n), dm = static_cast<double>(m);
      rho(n, m) = c(n) * std::conj(c(m)) * std::exp(kI * (kerr * (dn * dn - dm * dm))) * std::cos(split * (dm - dn));
    }
  const double tr = rho.trace().real();
  rho /= tr;
  return DensityMatrix(Space::cavity(dim), rho, 1.0 - tr);
}

ProjectedCavity project_cavity(int l, const ModelParams& p, int sign, Index n_cav, double tail_tolerance) {
  require_cycles(l);
  p.validate();
  if (sign != 1 && sign != -1) throw ValidationError("projection sign must be +1 or -1", "sign");
  const Index dim = cavity_dim_for(p, n_cav, tail_tolerance);
  CVector psi = bosonic::coherent_amplitudes(p.alpha, dim);
  const double kerr = 2.0 * p.g * p.g * l * kPi;
  const double split = 4.0 * kPi * p.g * l * p.lambda;
  for (Index n = 0; n < dim; ++n) {
    const double dn = static_cast<double>(n);
    const Complex weight = sign == 1 ? Complex(std::cos(split * dn)) : kI * std::sin(split * dn);
    psi(n) *= std::exp(kI * (kerr * dn * dn)) * weight;
  }
  const double prob = psi.squaredNorm();
  // P of the closed form is prob * e^{|alpha|^2}
  if (prob * std::exp(std::norm(p.alpha)) < 1e-12)
    throw NumericalError("qubit projection has vanishing probability " + std::to_string(prob));
  psi /= std::sqrt(prob);
  return {PureState(Space::cavity(dim), psi, bosonic::poisson_tail(std::norm(p.alpha), dim)), prob};
}

DensityMatrix cavity_projected_plus(int l, const ModelParams& p, Index n_cav, double tail_tolerance) {
  return project_cavity(l, p, 1, n_cav, tail_tolerance).state.to_density();
}

CatCheck cat_condition(double g, int l, int p) {
  if (l < 1) throw ValidationError("cycle count l must be >= 1", "l");
  if (p < 2) throw ValidationError("component count p must be >= 2", "p");
  const double r = std::abs(g * std::sqrt(2.0 * l * p) - 1.0);
  return {r < 1e-9, r};
}

double fidelity_displaced_fock(const PureState& state, Complex alpha, Index n, double tail_tolerance) {
  if (state.space().factors().size() != 1 || state.space().factors()[0].kind == Subsystem::qubit)
    throw ValidationError("displaced Fock fidelity needs a single-mode state");
  if (std::abs(state.norm() - 1.0) > 1e-8) throw ValidationError("state is not normalized");
  const PureState target = displaced_fock(alpha, n, state.space().dim(), tail_tolerance);
  return std::norm(target.amplitudes().dot(state.amplitudes()));
}

double kitten_fidelity(double g, Complex alpha, double lambda, int l, double tail_tolerance) {
  ModelParams p;
  p.g = g;
  p.lambda = lambda;
  p.alpha = alpha;
  // a little headroom so D(alpha)|1> also fits
  const Index dim = coherent_dim(std::abs(alpha) + 1.0, tail_tolerance);
  const PureState s = project_cavity(l, p, 1, dim, tail_tolerance).state;
  return fidelity_displaced_fock(s, alpha, 1, tail_tolerance);
}

KittenOptimum optimize_g_for_kitten(Complex alpha, double lambda, int l, double g_lo, double g_hi, Index scan_points,
                                    double tail_tolerance) {
  if (!(g_lo >= 0.0) || !(g_hi > g_lo) || g_hi > 0.05)
    throw ValidationError("kitten g range must satisfy 0 <= g_lo < g_hi <= 0.05", "g_range");
  if (scan_points < 3) throw ValidationError("kitten scan needs at least 3 points", "scan_points");
  auto f = [&](double g) { return kitten_fidelity(g, alpha, lambda, l, tail_tolerance); };

  const RVector gs = RVector::LinSpaced(scan_points, g_lo, g_hi);
  RVector fs(scan_points);
  for (Index i = 0; i < scan_points; ++i) fs(i) = f(gs(i));
  Index best = 0;
  fs.maxCoeff(&best);

  KittenOptimum out;
  out.f_lower = fs(0);
  out.f_upper = fs(scan_points - 1);
  out.inconclusive = fs.maxCoeff() - fs.minCoeff() < 1e-6;
  out.g_star = gs(best);
  out.f_max = fs(best);
  if (best == 0 || best == scan_points - 1) return out;

  // golden section inside the bracketing grid cells
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = gs(best - 1), b = gs(best + 1);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  const double g = 0.5 * (a + b);
  const double fg = f(g);
  if (fg > out.f_max) {
    out.g_star = g;
    out.f_max = fg;
  }
  return out;
}

int count_lobes(const WignerGrid& grid, double threshold, Index angles) {
  if (angles < 8) throw ValidationError("lobe counting needs at least 8 angles");
  const double r_max = std::min({-grid.x(0), grid.x(grid.x.size() - 1), -grid.y(0), grid.y(grid.y.size() - 1)});
  if (!(r_max > 0.0)) throw ValidationError("lobe counting needs a grid containing the origin");
  const Index radii = 2 * std::max(grid.x.size(), grid.y.size());
  const double dr = r_max / static_cast<double>(radii);
  RVector a(angles);
  for (Index j = 0; j < angles; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(angles);
    const double c = std::cos(th), s = std::sin(th);
    double acc = 0.0;
    for (Index k = 0; k < radii; ++k) {
      const double r = (static_cast<double>(k) + 0.5) * dr;
      acc += grid.interpolate(r * c, r * s) * r;
    }
    a(j) = acc * dr;
  }
  const double peak = a.maxCoeff();
  if (!(peak > 0.0)) return 0;
  int lobes = 0;
  for (Index j = 0; j < angles; ++j) {
    const double prev = a((j + angles - 1) % angles);
    const double next = a((j + 1) % angles);
    if (a(j) > prev && a(j) >= next && a(j) >= threshold * peak) ++lobes;
  }
  return lobes;
}

}  // namespace hqom
