#include "hqom/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hqom/bosonic.hpp"
#include "hqom/entanglement.hpp"

namespace hqom {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void require_rate(double v, const char* key) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(std::string(key) + " must be a finite nonnegative rate", key);
}

// 1 / ln((1 + n) / n), taken as its n -> 0 limit of zero.
double inverse_log_occupancy(double n_th) {
  require_rate(n_th, "n_th");
  if (n_th == 0.0) return 0.0;
  return 1.0 / std::log1p(1.0 / n_th);
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<Triplet> t;
  for (Index ja = 0; ja < a.outerSize(); ++ja)
    for (SparseMatrix::InnerIterator ia(a, ja); ia; ++ia)
      for (Index jb = 0; jb < b.outerSize(); ++jb)
        for (SparseMatrix::InnerIterator ib(b, jb); ib; ++ib)
          t.emplace_back(ia.row() * b.rows() + ib.row(), ja * b.cols() + jb, ia.value() * ib.value());
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix qubit_op(Complex e00, Complex e01, Complex e10, Complex e11) {
  SparseMatrix m(2, 2);
  std::vector<Triplet> t{{0, 0, e00}, {0, 1, e01}, {1, 0, e10}, {1, 1, e11}};
  m.setFromTriplets(t.begin(), t.end());
  m.prune(Complex(0.0));
  return m;
}

SparseMatrix sigma_minus() { return qubit_op(0, 0, 1, 0); }  // |down><up|, up is index 0
SparseMatrix sigma_z() { return qubit_op(1, 0, 0, -1); }

// Head-space shift S_h = g n + lambda sigma for h = q * n_cav + n.
RVector head_shift(const ModelParams& p, Index n_cav) {
  RVector s(2 * n_cav);
  for (int q = 0; q < 2; ++q)
    for (Index n = 0; n < n_cav; ++n) s(q * n_cav + n) = p.g * static_cast<double>(n) + (q == 0 ? p.lambda : -p.lambda);
  return s;
}

SparseMatrix diagonal(const CVector& d) {
  SparseMatrix m(d.size(), d.size());
  std::vector<Triplet> t;
  for (Index i = 0; i < d.size(); ++i)
    if (d(i) != Complex(0.0)) t.emplace_back(i, i, d(i));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

struct HeadOps {
  SparseMatrix id, a, n, sm, sp, sz;
};

HeadOps head_ops(Index n_cav) {
  const SparseMatrix iq = bosonic::identity(2);
  const SparseMatrix ic = bosonic::identity(n_cav);
  HeadOps h;
  h.id = bosonic::identity(2 * n_cav);
  h.a = kron(iq, bosonic::annihilation(n_cav));
  h.n = kron(iq, bosonic::number(n_cav));
  h.sm = kron(sigma_minus(), ic);
  h.sp = SparseMatrix(h.sm.adjoint());
  h.sz = kron(sigma_z(), ic);
  return h;
}

struct RateSet {
  double mech_down, mech_up, cavity, qubit_down, qubit_up, qubit_dephasing, photon_dephasing;
};

RateSet rate_set(const ModelParams& p) {
  p.validate();
  const Rates& r = p.rates;
  const double nq = r.qubit_occupancy();
  return {r.gamma_m * (r.n_th + 1.0),
          r.gamma_m * r.n_th,
          r.kappa,
          r.Gamma * (1.0 + nq),
          r.Gamma * nq,
          0.5 * dressed_dephasing_rate(r.Gamma_phi, r.gamma_m, p.lambda, r.n_th),
          photon_dephasing_rate(r.gamma_m, p.g, r.n_th)};
}

// A jump channel together with the Hermitian part it feeds into G.
struct Channel {
  double rate;
  KronOperator op;
};

// d rho / dt = -i G rho + h.c. + sum 2 r O rho O^dag with G = H - i sum r O^dag O.
struct Generator {
  KronOperator effective;
  std::vector<Channel> jumps;

  void apply(const CMatrix& rho, CMatrix& out) const {
    thread_local CMatrix y, x, xa;
    y.setZero(rho.rows(), rho.cols());
    effective.apply_add(rho, -kI, y);
    out = y + y.adjoint();
    for (const auto& c : jumps) {
      x.setZero(rho.rows(), rho.cols());
      c.op.apply_add(rho, 1.0, x);  // O rho
      xa = x.adjoint();             // rho O^dag, rho Hermitian
      c.op.apply_add(xa, 2.0 * c.rate, out);
    }
  }
};

Generator lab_generator(const ModelParams& p, Index n_cav, Index n_mech) {
  Generator gen{hamiltonian(p, n_cav, n_mech), {}};
  for (auto& d : build_dissipators(p, n_cav, n_mech)) {
    gen.effective += (d.op.adjoint() * d.op).scaled(Complex(0.0, -d.rate));
    gen.jumps.push_back({d.rate, std::move(d.op)});
  }
  gen.effective = gen.effective.merged();
  return gen;
}

// e^{x beta^* - x^* beta}: D(x) seen from a frame displaced by beta.
Complex offset_phase(Complex x, Complex beta) { return std::exp(x * std::conj(beta) - std::conj(x) * beta); }

// U^dag (A (x) 1) U for a head operator A: the entry h_in -> h_out picks up
// e^{i (S_in^2 - S_out^2) tau} and the mechanics factor D(-(S_in - S_out) eta^*).
KronOperator head_to_interaction(const SparseMatrix& head, const RVector& s, double t, Index n_mech, Complex beta) {
  const double tau = t - std::sin(t);
  const Complex eta_c = std::conj(eta(t));
  std::map<long long, std::pair<double, std::vector<Triplet>>> groups;
  for (Index j = 0; j < head.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(head, j); it; ++it) {
      const double s_in = s(j);
      const double s_out = s(it.row());
      const double delta = s_in - s_out;
      const auto key = static_cast<long long>(std::llround(delta * 1e9));
      auto& g = groups[key];
      g.first = delta;
      g.second.emplace_back(it.row(), j, it.value() * std::exp(kI * ((s_in * s_in - s_out * s_out) * tau)));
    }
  KronOperator out(head.rows(), n_mech);
  for (auto& [key, g] : groups) {
    SparseMatrix h(head.rows(), head.cols());
    h.setFromTriplets(g.second.begin(), g.second.end());
    if (key == 0) {
      out.add(std::move(h), MechFactor::identity());
    } else {
      const Complex x = -g.first * eta_c;
      h *= offset_phase(x, beta);
      out.add(std::move(h), MechFactor::from_dense(bosonic::truncated_displacement(x, n_mech)));
    }
  }
  return out;
}

// `beta` displaces the mechanics frame: b = beta + c, with rho stored in terms of c.
Generator interaction_generator(const ModelParams& p, Index n_cav, Index n_mech, double t, Complex beta) {
  const RateSet r = rate_set(p);
  const HeadOps h = head_ops(n_cav);
  const RVector s = head_shift(p, n_cav);
  const Complex e = eta(t);
  const Complex phase = std::exp(-kI * t);
  const CVector ncav = CVector(h.n.diagonal());
  const Index nh = 2 * n_cav;

  Generator gen{KronOperator(nh, n_mech), {}};
  SparseMatrix k_head(nh, nh);  // sum r O^dag O over head-only channels

  auto head_channel = [&](double rate, const SparseMatrix& a) {
    if (rate == 0.0) return;
    gen.jumps.push_back({rate, head_to_interaction(a, s, t, n_mech, beta)});
    // the displacement factors are unitary, so O^dag O keeps its lab form
    k_head += SparseMatrix(rate * SparseMatrix(a.adjoint() * a));
  };
  auto mech_channel = [&](double rate, bool lowering) {
    if (rate == 0.0) return;
    KronOperator op(nh, n_mech);
    const SparseMatrix b = lowering ? bosonic::annihilation(n_mech) : bosonic::creation(n_mech);
    op.add(h.id, MechFactor::from_sparse(SparseMatrix((lowering ? phase : std::conj(phase)) * b)));
    const Complex shift = lowering ? e : std::conj(e);
    const Complex offset = lowering ? beta * phase : std::conj(beta * phase);
    op.add(diagonal(s.cast<Complex>() * shift - p.g * ncav + CVector::Constant(nh, offset)), MechFactor::identity());
    gen.effective += (op.adjoint() * op).scaled(Complex(0.0, -rate));
    gen.jumps.push_back({rate, std::move(op)});
  };

  mech_channel(r.mech_down, true);
  mech_channel(r.mech_up, false);
  head_channel(r.cavity, h.a);
  head_channel(r.qubit_down, h.sm);
  head_channel(r.qubit_up, h.sp);
  head_channel(r.qubit_dephasing, h.sz);
  head_channel(r.photon_dephasing, h.n);
  gen.effective.add(SparseMatrix(Complex(0.0, -1.0) * k_head), MechFactor::identity());
  gen.effective = gen.effective.merged();
  return gen;
}

struct CompositeDims {
  Index n_cav, n_mech;
};

CompositeDims composite_dims(const Space& space) {
  const auto& f = space.factors();
  if (f.size() != 3 || f[0].kind != Subsystem::qubit || f[1].kind != Subsystem::cavity ||
      f[2].kind != Subsystem::mechanics || f[0].dim != 2)
    throw ValidationError("open-system evolution needs a qubit x cavity x mechanics state, got " + space.to_string());
  return {f[1].dim, f[2].dim};
}

void symmetrize(CMatrix& rho) {
  const Index d = rho.rows();
  for (Index j = 0; j < d; ++j) {
    rho(j, j) = Complex(rho(j, j).real(), 0.0);
    for (Index i = j + 1; i < d; ++i) {
      const Complex v = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = v;
      rho(j, i) = std::conj(v);
    }
  }
}

double min_eig(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

struct RunOutput {
  std::vector<double> times;
  std::vector<CMatrix> states;
  double max_drift = 0.0;
};

RunOutput run_rk4(const CMatrix& rho0, const OpenSystemConfig& cfg, const std::vector<double>& samples, double dt,
                  Index n_cav, Index n_mech) {
  const bool lab = cfg.frame == Frame::lab;
  const Generator fixed = lab ? lab_generator(cfg.params, n_cav, n_mech) : Generator{KronOperator(1, 1), {}};
  auto at = [&](double t) { return interaction_generator(cfg.params, n_cav, n_mech, t, cfg.mech_offset); };

  RunOutput out;
  CMatrix rho = rho0;
  CMatrix k1, k2, k3, k4, tmp;
  double t = 0.0;
  out.times.push_back(0.0);
  out.states.push_back(rho);
  Generator g_start = lab ? Generator{KronOperator(1, 1), {}} : at(0.0);
  for (std::size_t s = 1; s < samples.size(); ++s) {
    const double span = samples[s] - samples[s - 1];
    const auto steps = static_cast<long long>(std::ceil(span / dt - 1e-9));
    const double h = span / static_cast<double>(std::max(steps, 1LL));
    for (long long k = 0; k < steps; ++k) {
      const double t0 = samples[s - 1] + static_cast<double>(k) * h;
      if (lab) {
        fixed.apply(rho, k1);
        tmp = rho + 0.5 * h * k1;
        fixed.apply(tmp, k2);
        tmp = rho + 0.5 * h * k2;
        fixed.apply(tmp, k3);
        tmp = rho + h * k3;
        fixed.apply(tmp, k4);
      } else {
        const Generator g_mid = at(t0 + 0.5 * h);
        Generator g_end = at(t0 + h);
        g_start.apply(rho, k1);
        tmp = rho + 0.5 * h * k1;
        g_mid.apply(tmp, k2);
        tmp = rho + 0.5 * h * k2;
        g_mid.apply(tmp, k3);
        tmp = rho + h * k3;
        g_end.apply(tmp, k4);
        g_start = std::move(g_end);
      }
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      symmetrize(rho);
      const double drift = std::abs(rho.trace().real() - 1.0);
      out.max_drift = std::max(out.max_drift, drift);
      if (!std::isfinite(drift) || drift > cfg.trace_tolerance) {
        std::ostringstream msg;
        msg << "trace drift " << drift << " exceeds " << cfg.trace_tolerance << " at t=" << t0 + h << " (dt=" << h
            << ")";
        throw NumericalError(msg.str());
      }
    }
    t = samples[s];
    out.times.push_back(t);
    out.states.push_back(rho);
  }
  return out;
}

}  // namespace

double dressed_dephasing_rate(double Gamma_phi, double gamma_m, double lambda, double n_th) {
  require_rate(Gamma_phi, "Gamma_phi");
  require_rate(gamma_m, "gamma_m");
  return Gamma_phi + 4.0 * gamma_m * lambda * lambda * inverse_log_occupancy(n_th);
}

double photon_dephasing_rate(double gamma_m, double g, double n_th) {
  require_rate(gamma_m, "gamma_m");
  return 4.0 * gamma_m * g * g * inverse_log_occupancy(n_th);
}

std::vector<DissipatorSpec> build_dissipators(const ModelParams& p, Index n_cav, Index n_mech) {
  if (n_cav < 1 || n_mech < 1) throw ValidationError("dissipators need positive mode dimensions");
  const RateSet r = rate_set(p);
  const HeadOps h = head_ops(n_cav);
  const Index nh = 2 * n_cav;
  std::vector<DissipatorSpec> out;

  auto mech = [&](const char* name, double rate, SparseMatrix b) {
    if (rate == 0.0) return;
    KronOperator op(nh, n_mech);
    op.add(h.id, MechFactor::from_sparse(std::move(b)));
    op.add(SparseMatrix(-p.g * h.n), MechFactor::identity());
    out.push_back({name, rate, std::move(op)});
  };
  auto head = [&](const char* name, double rate, const SparseMatrix& a) {
    if (rate == 0.0) return;
    KronOperator op(nh, n_mech);
    op.add(a, MechFactor::identity());
    out.push_back({name, rate, std::move(op)});
  };
  mech("mech_down", r.mech_down, bosonic::annihilation(n_mech));
  mech("mech_up", r.mech_up, bosonic::creation(n_mech));
  head("cavity", r.cavity, h.a);
  head("qubit_down", r.qubit_down, h.sm);
  head("qubit_up", r.qubit_up, h.sp);
  head("qubit_dephasing", r.qubit_dephasing, h.sz);
  head("photon_dephasing", r.photon_dephasing, h.n);
  return out;
}

KronOperator hamiltonian(const ModelParams& p, Index n_cav, Index n_mech) {
  const HeadOps h = head_ops(n_cav);
  const RVector s = head_shift(p, n_cav);
  KronOperator H(2 * n_cav, n_mech);
  H.add(h.id, MechFactor::from_sparse(bosonic::number(n_mech)));
  H.add(diagonal(-s.cast<Complex>()),
        MechFactor::from_sparse(SparseMatrix(bosonic::annihilation(n_mech) + bosonic::creation(n_mech))));
  return H;
}

CMatrix lindblad_rhs(const DensityMatrix& rho, const ModelParams& p) {
  const CompositeDims d = composite_dims(rho.space());
  CMatrix out;
  lab_generator(p, d.n_cav, d.n_mech).apply(rho.elements(), out);
  return out;
}

CMatrix interaction_rhs(const DensityMatrix& rho_i, const ModelParams& p, double t, Complex mech_offset) {
  const CompositeDims d = composite_dims(rho_i.space());
  CMatrix out;
  interaction_generator(p, d.n_cav, d.n_mech, t, mech_offset).apply(rho_i.elements(), out);
  return out;
}

DensityMatrix interaction_to_qubit_cavity(const DensityMatrix& rho_i, const ModelParams& p, double t,
                                          Complex mech_offset) {
  const CompositeDims d = composite_dims(rho_i.space());
  const Index nh = 2 * d.n_cav;
  const Index nm = d.n_mech;
  const RVector s = head_shift(p, d.n_cav);
  const double tau = t - std::sin(t);
  const Complex eta_c = std::conj(eta(t));
  std::map<long long, CMatrix> cache;
  CMatrix out(nh, nh);
  for (Index k = 0; k < nh; ++k)
    for (Index kp = 0; kp < nh; ++kp) {
      const double delta = s(k) - s(kp);
      const auto key = static_cast<long long>(std::llround(delta * 1e9));
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, bosonic::displacement_elements(-delta * eta_c, nm, nm)).first;
      const Complex tr = (it->second.transpose().cwiseProduct(rho_i.elements().block(k * nm, kp * nm, nm, nm))).sum();
      out(k, kp) = std::exp(kI * ((s(k) * s(k) - s(kp) * s(kp)) * tau)) * offset_phase(-delta * eta_c, mech_offset) * tr;
    }
  return DensityMatrix(Space::qubit_cavity(d.n_cav), out, rho_i.discarded_weight());
}

void OpenSystemConfig::validate() const {
  params.validate();
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ValidationError("t_final must be positive", "t_final");
  if (!(integrator.dt >= 0.0)) throw ValidationError("dt must be positive", "dt");
  if (integrator.check_halving && !(integrator.halving_tolerance > 0.0))
    throw ValidationError("halving tolerance must be positive", "halving_tolerance");
  if (frame == Frame::lab && mech_offset != Complex(0.0))
    throw ValidationError("a mechanics offset needs the interaction frame", "mech_offset");
  for (double s : sample_times)
    if (!(s >= 0.0 && s <= t_final)) throw ValidationError("sample times must lie in [0, t_final]", "sample_times");
}

double OpenSystemConfig::step() const {
  if (integrator.dt > 0.0) return integrator.dt;
  return frame == Frame::lab ? 1e-3 : 0.05;
}

OpenTrajectory integrate(const DensityMatrix& rho0, const OpenSystemConfig& config) {
  config.validate();
  const CompositeDims d = composite_dims(rho0.space());
  const double dt = config.step();
  if (dt < 1e-9 || config.t_final / dt > 1e9) throw NumericalError("step-size underflow: dt=" + std::to_string(dt));

  std::vector<double> samples{0.0};
  std::vector<double> extra = config.sample_times;
  std::sort(extra.begin(), extra.end());
  for (double s : extra)
    if (s > samples.back() + 1e-12 && s < config.t_final - 1e-12) samples.push_back(s);
  samples.push_back(config.t_final);

  RunOutput run = run_rk4(rho0.elements(), config, samples, dt, d.n_cav, d.n_mech);

  OpenTrajectory out;
  out.frame = config.frame;
  out.dt = dt;
  out.max_trace_drift = run.max_drift;
  out.min_eigenvalue = 1.0;
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    const double t = run.times[i];
    const double m = min_eig(run.states[i]);
    out.min_eigenvalue = std::min(out.min_eigenvalue, m);
    if (m < -config.positivity_tolerance) {
      std::ostringstream msg;
      msg << "positivity lost at t=" << t << ": min eigenvalue " << m << ", trace " << run.states[i].trace().real()
          << ", dt " << dt;
      throw NumericalError(msg.str());
    }
    DensityMatrix full(rho0.space(), run.states[i], rho0.discarded_weight());
    DensityMatrix qc = config.frame == Frame::lab ? partial_trace(full, {Subsystem::qubit, Subsystem::cavity})
                                                  : interaction_to_qubit_cavity(full, config.params, t, config.mech_offset);
    out.qubit_cavity.push_back(t, std::move(qc));
    out.states.push_back(t, std::move(full));
  }

  if (config.integrator.check_halving) {
    const RunOutput fine = run_rk4(rho0.elements(), config, samples, 0.5 * dt, d.n_cav, d.n_mech);
    out.halving_error = (fine.states.back() - run.states.back()).cwiseAbs().maxCoeff();
    if (out.halving_error > config.integrator.halving_tolerance) {
      std::ostringstream msg;
      msg << "step not converged: |rho(dt) - rho(dt/2)| = " << out.halving_error << " at dt=" << dt;
      throw NumericalError(msg.str());
    }
  }
  return out;
}

Dims open_dims(const ModelParams& p, Frame frame, MechanicsInit init, double tail_tolerance) {
  Dims d;
  d.n_cav = coherent_dim(std::abs(p.alpha), tail_tolerance);
  // largest mechanics displacement the run can produce
  double shift;
  if (frame == Frame::lab)
    shift = 2.0 * max_shift(p, d.n_cav);
  else
    shift = 2.0 * p.g + 4.0 * p.lambda;  // one cavity or qubit jump in the interaction picture
  if (init == MechanicsInit::coherent && frame == Frame::interaction) {
    // the frame follows |beta>, so only jump kicks and the slow mechanical
    // relaxation over one cycle leave the vacuum
    const Rates& r = p.rates;
    const double relax = std::abs(p.beta) * -std::expm1(-kTwoPi * r.gamma_m);
    const double heat = r.n_th * -std::expm1(-2.0 * kTwoPi * r.gamma_m);
    d.n_mech = coherent_dim(shift + relax, tail_tolerance) + static_cast<Index>(std::ceil(20.0 * heat));
  } else if (init == MechanicsInit::coherent) {
    d.n_mech = coherent_dim(std::abs(p.beta) + shift, tail_tolerance);
  } else {
    d.n_mech = thermal_dim(p.rates.n_th, tail_tolerance) +
               static_cast<Index>(std::ceil(shift * shift + 7.0 * shift));
  }
  return d;
}

Complex open_mech_offset(const ModelParams& p, Frame frame, MechanicsInit init) {
  return frame == Frame::interaction && init == MechanicsInit::coherent ? p.beta : Complex(0.0);
}

DensityMatrix open_initial_state(const ModelParams& p, Dims dims, MechanicsInit init, double tail_tolerance,
                                 Complex mech_offset) {
  const PureState qc_parts[] = {qubit_state(1.0, 1.0), coherent_state(p.alpha, dims.n_cav, tail_tolerance)};
  const DensityMatrix qc = tensor(qc_parts).to_density();
  DensityMatrix mech = init == MechanicsInit::coherent
                           ? as_mode(coherent_state(p.beta - mech_offset, dims.n_mech, tail_tolerance), Subsystem::mechanics).to_density()
                           : as_mode(thermal_density(p.rates.n_th, dims.n_mech, tail_tolerance), Subsystem::mechanics);
  const DensityMatrix parts[] = {qc, mech};
  return tensor(parts);
}

SweepResult negativity_sweep(std::span<const double> Gamma_values, std::span<const double> gamma_phi_values,
                             const ModelParams& p, const SweepSettings& settings) {
  p.validate();
  if (Gamma_values.empty() || gamma_phi_values.empty()) throw ValidationError("sweep needs nonempty rate lists");
  for (double v : Gamma_values) require_rate(v, "Gamma");
  for (double v : gamma_phi_values) require_rate(v, "gamma_phi");

  SweepResult result;
  result.dims = open_dims(p, settings.frame, settings.mech_init, settings.tail_tolerance);
  if (settings.dims.n_cav > 0) result.dims.n_cav = settings.dims.n_cav;
  if (settings.dims.n_mech > 0) result.dims.n_mech = settings.dims.n_mech;
  const Complex offset = open_mech_offset(p, settings.frame, settings.mech_init);
  const DensityMatrix rho0 = open_initial_state(p, result.dims, settings.mech_init, settings.tail_tolerance, offset);
  result.min_eigenvalue = 1.0;

  for (double G : Gamma_values)
    for (double gp : gamma_phi_values) {
      OpenSystemConfig cfg;
      cfg.params = p;
      cfg.params.rates.Gamma = G;
      cfg.params.rates.Gamma_phi = gp;
      cfg.frame = settings.frame;
      cfg.mech_offset = offset;
      cfg.integrator.dt = settings.dt;
      cfg.integrator.check_halving = settings.check_halving;
      cfg.t_final = kTwoPi;
      const OpenTrajectory traj = integrate(rho0, cfg);
      result.dt = traj.dt;
      result.max_trace_drift = std::max(result.max_trace_drift, traj.max_trace_drift);
      result.min_eigenvalue = std::min(result.min_eigenvalue, traj.min_eigenvalue);
      const double n = negativity(traj.qubit_cavity.states.back(),
                                  BipartitePartition{{Subsystem::qubit}, {Subsystem::cavity}});
      result.cells.push_back({G, gp, n});
    }
  return result;
}

}  // namespace hqom
