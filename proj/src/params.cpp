#include "hqom/params.hpp"

#include <cmath>

#include "hqom/bosonic.hpp"

namespace hqom {

namespace {
void require_nonneg(double v, const char* key) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw ValidationError(std::string(key) + " must be a finite nonnegative number", key);
}
}  // namespace

void ModelParams::validate() const {
  require_nonneg(g, "g");
  require_nonneg(lambda, "lambda");
  require_nonneg(nbar_mech, "nbar");
  require_nonneg(rates.kappa, "kappa");
  require_nonneg(rates.gamma_m, "gamma_m");
  require_nonneg(rates.Gamma, "Gamma");
  require_nonneg(rates.Gamma_phi, "Gamma_phi");
  require_nonneg(rates.n_th, "n_th");
  require_nonneg(rates.n_q, "n_q");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) throw ValidationError("alpha must be finite", "alpha");
  if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) throw ValidationError("beta must be finite", "beta");
}

Index coherent_dim(double abs_alpha, double tail_tolerance) {
  const double a = std::abs(abs_alpha);
  const auto rule = static_cast<Index>(std::ceil(a * a + 7.0 * a + 10.0));
  if (tail_tolerance <= 1e-10) {
    Index d = rule;
    while (bosonic::poisson_tail(a * a, d) > tail_tolerance) ++d;
    return d;
  }
  Index d = 1;
  while (d < rule && bosonic::poisson_tail(a * a, d) > tail_tolerance) ++d;
  return d;
}

Index thermal_dim(double nbar, double tail_tolerance) {
  if (nbar <= 0.0) return 1;
  const auto rule = static_cast<Index>(std::ceil(20.0 * (nbar + 1.0)));
  if (tail_tolerance <= 1e-10) {
    Index d = rule;
    while (bosonic::thermal_tail(nbar, d) > tail_tolerance) ++d;
    return d;
  }
  Index d = 1;
  while (d < rule && bosonic::thermal_tail(nbar, d) > tail_tolerance) ++d;
  return d;
}

double max_shift(const ModelParams& p, Index n_cav) {
  return p.g * static_cast<double>(n_cav - 1) + p.lambda;
}

}  // namespace hqom
