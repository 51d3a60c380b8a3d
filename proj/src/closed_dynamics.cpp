#include "hqom/closed_dynamics.hpp"

#include <cmath>
#include <iostream>
#include <map>

#include "hqom/bosonic.hpp"

namespace hqom {

namespace {

constexpr double kEtaZero = 1e-12;

double kerr_time(double t) { return t - std::sin(t); }

// s = g n + lambda sigma with sigma = +1 for q = 0 (spin up).
double shift(const ModelParams& p, int q, Index n) {
  return p.g * static_cast<double>(n) + (q == 0 ? p.lambda : -p.lambda);
}

// Phase from D(s eta) acting on |beta e^{-it}>: e^{i s Im(beta^* (e^{it} - 1))}.
double displacement_phase_rate(const ModelParams& p, double t) {
  return std::imag(std::conj(p.beta) * (std::exp(kI * t) - 1.0));
}

Index clamp_dim(Index want, const Truncation& trunc, const char* what) {
  if (want > trunc.max_dim) {
    std::clog << "hqom: warning: " << what << " wants " << want << " levels; clamped to ceiling " << trunc.max_dim
              << "\n";
    return trunc.max_dim;
  }
  return want;
}

Index mechanics_dim_for(double abs_beta, double smax, double abs_eta, const Truncation& trunc) {
  return clamp_dim(coherent_dim(abs_beta + smax * abs_eta, trunc.tail_tolerance), trunc, "mechanics truncation");
}

// Builds sum_{q,n} coef(q,n) e^{i s^2 tau} e^{i s phi} |q>|n>|beta e^{-it} + s eta>.
template <typename Coef>
PureState assemble_coherent_branches(Index n_cav, Index n_mech, double t, const ModelParams& p,
                                     const Truncation& trunc, Coef coef) {
  const Space space = Space::composite(n_cav, n_mech);
  CVector psi = CVector::Zero(space.dim());
  const Complex e = eta(t);
  const double tau = kerr_time(t);
  const double phi = displacement_phase_rate(p, t);
  const Complex rotated = p.beta * std::exp(-kI * t);
  for (int q = 0; q < 2; ++q)
    for (Index n = 0; n < n_cav; ++n) {
      const Complex c = coef(q, n);
      if (c == Complex(0.0)) continue;
      const double s = shift(p, q, n);
      const Complex amp = c * std::exp(kI * (s * s * tau + s * phi));
      psi.segment(space.index(q, n, 0), n_mech) = amp * bosonic::coherent_amplitudes(rotated + s * e, n_mech);
    }
  const double kept = psi.squaredNorm();
  const double lost = std::max(0.0, 1.0 - kept);
  if (lost > trunc.tail_tolerance)
    throw TruncationError("closed-form state loses weight " + std::to_string(lost) + " on " + space.to_string());
  psi /= std::sqrt(kept);
  return PureState(space, std::move(psi), lost);
}

}  // namespace

Complex eta(double t) { return 1.0 - std::exp(-kI * t); }

Dims coherent_dims(const ModelParams& p, double t, const Truncation& trunc) {
  Dims d;
  d.n_cav = clamp_dim(coherent_dim(std::abs(p.alpha), trunc.tail_tolerance), trunc, "cavity truncation");
  const double e = std::abs(eta(t));
  d.n_mech = mechanics_dim_for(std::abs(p.beta), max_shift(p, d.n_cav), e < kEtaZero ? 0.0 : e, trunc);
  return d;
}

PureState evolve_unitary(const PureState& psi0, double t, const ModelParams& p, const Truncation& trunc,
                         Index n_mech_out) {
  p.validate();
  const Space& in = psi0.space();
  if (in.factors().size() != 3) throw ValidationError("evolve_unitary needs a state on the full composite space");
  const Index n_cav = in.dim_of(Subsystem::cavity);
  const Index n_in = in.dim_of(Subsystem::mechanics);
  const Complex e = eta(t);
  const double abs_eta = std::abs(e) < kEtaZero ? 0.0 : std::abs(e);
  if (n_mech_out == 0) {
    n_mech_out = n_in;
    if (abs_eta > 0.0) {
      const double reach = std::sqrt(static_cast<double>(n_in)) + max_shift(p, n_cav) * abs_eta;
      n_mech_out = std::max(n_in, clamp_dim(coherent_dim(reach), trunc, "mechanics truncation"));
    }
  }
  const Space out = Space::composite(n_cav, n_mech_out);
  const double tau = kerr_time(t);

  CVector rotation(n_in);
  for (Index m = 0; m < n_in; ++m) rotation(m) = std::exp(-kI * (t * static_cast<double>(m)));

  std::map<double, CMatrix> displacement;  // one matrix per distinct shift s
  CVector psi = CVector::Zero(out.dim());
  for (int q = 0; q < 2; ++q)
    for (Index n = 0; n < n_cav; ++n) {
      const CVector block = psi0.amplitudes().segment(in.index(q, n, 0), n_in);
      if (block.squaredNorm() == 0.0) continue;
      const double s = shift(p, q, n);
      auto it = displacement.find(s);
      if (it == displacement.end()) it = displacement.emplace(s, bosonic::displacement_elements(s * e, n_mech_out, n_in)).first;
      psi.segment(out.index(q, n, 0), n_mech_out) =
          std::exp(kI * (s * s * tau)) * (it->second * block.cwiseProduct(rotation));
    }
  const double kept = psi.squaredNorm() / psi0.amplitudes().squaredNorm();
  const double lost = std::max(0.0, 1.0 - kept);
  if (lost > trunc.tail_tolerance)
    throw TruncationError("mechanics truncation " + std::to_string(n_mech_out) + " too small for displacement (lost " +
                          std::to_string(lost) + ")");
  psi /= psi.norm();
  return PureState(out, std::move(psi), psi0.discarded_weight() + lost);
}

PureState evolve_fock_superposition(double t, const ModelParams& p, const Truncation& trunc, Index n_mech) {
  p.validate();
  constexpr Index n_cav = 2;
  if (n_mech == 0) {
    const double e = std::abs(eta(t));
    n_mech = mechanics_dim_for(std::abs(p.beta), max_shift(p, n_cav), e < kEtaZero ? 0.0 : e, trunc);
  }
  // (|up> + |down>)/sqrt2 (x) (|0> - |1>)/sqrt2
  return assemble_coherent_branches(n_cav, n_mech, t, p, trunc,
                                    [](int, Index n) { return Complex(n == 0 ? 0.5 : -0.5); });
}

Complex coherent_amplitude_coeff(Index n, int sign, double t, const ModelParams& p) {
  if (n < 0) throw ValidationError("Fock index must be nonnegative", "n");
  const double s = p.g * static_cast<double>(n) + (sign >= 0 ? p.lambda : -p.lambda);
  const Complex base = bosonic::coherent_amplitudes(p.alpha, n + 1)(n) / std::sqrt(2.0);
  return base * std::exp(kI * (s * s * kerr_time(t) + s * displacement_phase_rate(p, t)));
}

PureState evolve_coherent(double t, const ModelParams& p, const Truncation& trunc, Dims dims) {
  p.validate();
  const Dims auto_dims = coherent_dims(p, t, trunc);
  if (dims.n_cav == 0) dims.n_cav = auto_dims.n_cav;
  if (dims.n_mech == 0) {
    const double e = std::abs(eta(t));
    dims.n_mech = mechanics_dim_for(std::abs(p.beta), max_shift(p, dims.n_cav), e < kEtaZero ? 0.0 : e, trunc);
  }
  const CVector cav = bosonic::coherent_amplitudes(p.alpha, dims.n_cav) / std::sqrt(2.0);
  return assemble_coherent_branches(dims.n_cav, dims.n_mech, t, p, trunc, [&](int, Index n) { return cav(n); });
}

PureState qubit_cavity_at_cycle(int l, const ModelParams& p, const Truncation& trunc, Index n_cav) {
  p.validate();
  if (l < 1) throw ValidationError("cycle count l must be >= 1", "l");
  if (n_cav == 0) n_cav = clamp_dim(coherent_dim(std::abs(p.alpha), trunc.tail_tolerance), trunc, "cavity truncation");
  const Space space = Space::qubit_cavity(n_cav);
  const CVector cav = bosonic::coherent_amplitudes(p.alpha, n_cav) / std::sqrt(2.0);
  const double cycles = kTwoPi * static_cast<double>(l);
  CVector psi(space.dim());
  for (int q = 0; q < 2; ++q)
    for (Index n = 0; n < n_cav; ++n) {
      const double s = shift(p, q, n);
      psi(q * n_cav + n) = cav(n) * std::exp(kI * (s * s * cycles));
    }
  const double kept = psi.squaredNorm();
  const double lost = std::max(0.0, 1.0 - kept);
  if (lost > trunc.tail_tolerance) throw TruncationError("cavity truncation too small for alpha");
  psi /= std::sqrt(kept);
  return PureState(space, std::move(psi), lost);
}

StateEnsemble evolve_thermal(double t, const ModelParams& p, const Truncation& trunc, Dims dims) {
  p.validate();
  if (dims.n_cav == 0)
    dims.n_cav = clamp_dim(coherent_dim(std::abs(p.alpha), trunc.tail_tolerance), trunc, "cavity truncation");
  const Index n_in = clamp_dim(thermal_dim(p.nbar_mech, trunc.tail_tolerance), trunc, "thermal mechanics truncation");
  const DensityMatrix thermal = thermal_density(p.nbar_mech, n_in, trunc.tail_tolerance);
  const Complex e = eta(t);
  const double abs_eta = std::abs(e) < kEtaZero ? 0.0 : std::abs(e);
  if (dims.n_mech == 0) {
    dims.n_mech = n_in;
    if (abs_eta > 0.0) {
      const double reach = std::sqrt(static_cast<double>(n_in)) + max_shift(p, dims.n_cav) * abs_eta;
      dims.n_mech = std::max(n_in, clamp_dim(coherent_dim(reach), trunc, "mechanics truncation"));
    }
  }
  if (dims.n_mech < n_in) throw ValidationError("mechanics output truncation smaller than the thermal input", "n_mech");

  const Space space = Space::composite(dims.n_cav, dims.n_mech);
  const CVector cav = bosonic::coherent_amplitudes(p.alpha, dims.n_cav) / std::sqrt(2.0);
  const double tau = kerr_time(t);

  std::vector<CMatrix> disp;  // indexed by block (q, n)
  std::vector<Complex> phase;
  disp.reserve(2 * dims.n_cav);
  std::map<double, std::size_t> seen;
  std::vector<std::size_t> which(2 * dims.n_cav);
  for (int q = 0; q < 2; ++q)
    for (Index n = 0; n < dims.n_cav; ++n) {
      const double s = shift(p, q, n);
      auto [it, fresh] = seen.emplace(s, disp.size());
      if (fresh) disp.push_back(bosonic::displacement_elements(s * e, dims.n_mech, n_in));
      which[q * dims.n_cav + n] = it->second;
      phase.push_back(cav(n) * std::exp(kI * (s * s * tau)));
    }

  std::vector<double> weights;
  std::vector<CVector> branches;
  double lost = 0.0;
  for (Index k = 0; k < n_in; ++k) {
    const double w = thermal.elements()(k, k).real();
    if (w < 1e-300) continue;
    const Complex rot = std::exp(-kI * (t * static_cast<double>(k)));
    CVector v = CVector::Zero(space.dim());
    for (int q = 0; q < 2; ++q)
      for (Index n = 0; n < dims.n_cav; ++n) {
        const std::size_t b = q * dims.n_cav + n;
        v.segment(space.index(q, n, 0), dims.n_mech) = (phase[b] * rot) * disp[which[b]].col(k);
      }
    const double nrm2 = v.squaredNorm();
    lost += w * std::max(0.0, 1.0 - nrm2 / cav.squaredNorm() / 2.0);
    v /= std::sqrt(nrm2);
    weights.push_back(w);
    branches.push_back(std::move(v));
  }
  const double cav_tail = std::max(0.0, 1.0 - 2.0 * cav.squaredNorm());
  if (lost > trunc.tail_tolerance)
    throw TruncationError("mechanics truncation " + std::to_string(dims.n_mech) +
                          " too small for thermal displacement (lost " + std::to_string(lost) + ")");
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  for (double& w : weights) w /= wsum;
  return StateEnsemble(space, std::move(weights), std::move(branches), thermal.discarded_weight() + cav_tail + lost);
}

PureState coherent_initial_state(const ModelParams& p, Dims dims, double tail_tolerance) {
  const PureState q = qubit_state(1.0, 1.0);
  const PureState c = coherent_state(p.alpha, dims.n_cav, tail_tolerance);
  const PureState m = as_mode(coherent_state(p.beta, dims.n_mech, tail_tolerance), Subsystem::mechanics);
  const PureState parts[] = {q, c, m};
  return tensor(parts);
}

}  // namespace hqom
