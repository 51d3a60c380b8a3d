// One PASS/FAIL line per acceptance criterion. Criteria listed after
// --expect-fail are reported as FAIL like any other but do not set the exit
// status; an expected failure that passes is flagged.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "hqom/closed_dynamics.hpp"
#include "hqom/entanglement.hpp"
#include "hqom/lindblad.hpp"
#include "hqom/nonclassical.hpp"

using namespace hqom;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [X]");
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ModelParams params(double g, double lambda, double alpha, double beta) {
  ModelParams p;
  p.g = g;
  p.lambda = lambda;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

const BipartitePartition kQC{{Subsystem::qubit}, {Subsystem::cavity}};

// --- criterion bodies ------------------------------------------------------

void maximal_indirect(Outcome& o) {
  const PureState s = evolve_fock_superposition(kTwoPi, params(0.2, 0.625, 0.0, 1.0));
  const EntanglementRecord r = entanglement_record(kTwoPi, s);
  o.require(std::abs(r.negativity_qc - 0.5) <= 0.005, "N_qc(2pi)=" + fmt(r.negativity_qc));
  o.require(r.negativity_qo < 1e-6, "N_qo=" + fmt(r.negativity_qo));
  o.require(r.negativity_oc < 1e-6, "N_oc=" + fmt(r.negativity_oc));
}

void intrinsic_agreement(Outcome& o) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ut(0.0, 4.0 * kPi), ug(0.01, 0.5), ul(0.01, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double t = ut(rng), g = ug(rng), l = ul(rng);
    const PureState s = evolve_fock_superposition(t, params(g, l, 0.0, 1.0));
    worst = std::max(worst, std::abs(intrinsic_qc_numeric(s) - intrinsic_qc_analytic_fock(t, g, l)));
  }
  o.require(worst <= 1e-6, "optical qubit max err=" + fmt(worst));
  double worst_c = 0.0;
  for (double alpha : {1.0, 2.0}) {
    const ModelParams p = params(0.2, 0.25, alpha, 2.0);
    const PureState s = evolve_coherent(kTwoPi, p);
    worst_c = std::max(worst_c, std::abs(intrinsic_qc_numeric(s) - intrinsic_qc_2pi_coherent(p.g, p.lambda, alpha)));
  }
  o.require(worst_c <= 1e-5, "coherent max err=" + fmt(worst_c));
}

void coherent_series(Outcome& o) {
  const ModelParams p = params(0.2, 0.25, 2.0, 2.0);
  // the full series is evaluated as the CLI would, then the cycle points are checked
  for (int i = 1; i <= 200; ++i) entanglement_record(8.0 * kPi * i / 200.0, evolve_coherent(8.0 * kPi * i / 200.0, p));
  double mech = 0.0;
  double n_cycle[5] = {};
  for (int l = 1; l <= 4; ++l) {
    const EntanglementRecord r = entanglement_record(kTwoPi * l, evolve_coherent(kTwoPi * l, p));
    mech = std::max({mech, r.negativity_qo, r.negativity_oc});
    n_cycle[l] = r.negativity_qc;
  }
  o.require(mech < 1e-4, "max mechanics negativity at cycles=" + fmt(mech));
  o.require(n_cycle[2] - n_cycle[1] >= -1e-3, "N_qc(2pi)=" + fmt(n_cycle[1]) + " N_qc(4pi)=" + fmt(n_cycle[2]));
}

void thermal_independence(Outcome& o) {
  double worst_purity = 1.0, worst_fid = 1.0;
  Index dim = 0;
  for (double nbar : {0.5, 2.0, 4.0}) {
    ModelParams p = params(0.2, 0.25, 2.0, 0.0);
    p.nbar_mech = nbar;
    const StateEnsemble e = evolve_thermal(kTwoPi, p);
    dim = std::max(dim, e.space().dim_of(Subsystem::mechanics));
    const DensityMatrix qc = e.reduce({Subsystem::qubit, Subsystem::cavity});
    worst_purity = std::min(worst_purity, qc.purity());
    worst_fid = std::min(worst_fid, fidelity(qc, qubit_cavity_at_cycle(1, p, {}, qc.space().dim_of(Subsystem::cavity))));
  }
  o.require(worst_purity > 1.0 - 1e-6, "min purity=1-" + fmt(1.0 - worst_purity));
  o.require(worst_fid > 1.0 - 1e-6, "min fidelity=1-" + fmt(1.0 - worst_fid));
  o.detail << "; mechanics dim " << dim;
}

// RK4 on the state vector with the dense truncated Hamiltonian.
CVector rk4_propagate(const CMatrix& h, CVector psi, double t, double dt) {
  const auto steps = static_cast<long long>(std::ceil(t / dt));
  const double step = t / static_cast<double>(std::max(steps, 1LL));
  const CMatrix a = Complex(0.0, -1.0) * h;
  for (long long k = 0; k < steps; ++k) {
    const CVector k1 = a * psi;
    const CVector k2 = a * (psi + 0.5 * step * k1);
    const CVector k3 = a * (psi + 0.5 * step * k2);
    const CVector k4 = a * (psi + step * k3);
    psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

CMatrix dense_hamiltonian(const ModelParams& p, Index nc, Index nm) { return hamiltonian(p, nc, nm).to_dense(); }

void brute_force(Outcome& o) {
  const Index nc = 10, nm = 14;
  Truncation tr;
  tr.tail_tolerance = 1e-6;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ut(0.0, 4.0 * kPi);
  double worst_f = 1.0, worst_c = 1.0;
  const ModelParams pf = params(0.2, 0.25, 0.0, 0.5);
  const ModelParams pc = params(0.2, 0.25, 0.5, 0.5);
  const CMatrix h = dense_hamiltonian(pf, nc, nm);
  // the optical qubit occupies the first two cavity levels of the 2 x 10 x 14 space
  const PureState f0 = evolve_fock_superposition(0.0, pf, tr, nm);
  CVector psi_f = CVector::Zero(2 * nc * nm);
  for (int q = 0; q < 2; ++q)
    for (Index n = 0; n < 2; ++n)
      for (Index m = 0; m < nm; ++m) psi_f((q * nc + n) * nm + m) = f0.amplitudes()((q * 2 + n) * nm + m);
  const CVector psi_c = evolve_coherent(0.0, pc, tr, Dims{nc, nm}).amplitudes();
  for (int k = 0; k < 10; ++k) {
    const double t = ut(rng);
    const CVector bf = rk4_propagate(h, psi_f, t, 1e-3);
    const PureState sf = evolve_fock_superposition(t, pf, tr, nm);
    Complex ov = 0.0;
    for (int q = 0; q < 2; ++q)
      for (Index n = 0; n < 2; ++n)
        for (Index m = 0; m < nm; ++m) ov += std::conj(sf.amplitudes()((q * 2 + n) * nm + m)) * bf((q * nc + n) * nm + m);
    worst_f = std::min(worst_f, std::norm(ov));
    const CVector bc = rk4_propagate(h, psi_c, t, 1e-3);
    const PureState sc = evolve_coherent(t, pc, tr, Dims{nc, nm});
    worst_c = std::min(worst_c, std::norm(sc.amplitudes().dot(bc)));
  }
  o.require(worst_f > 1.0 - 1e-6, "optical qubit min fidelity=1-" + fmt(1.0 - worst_f));
  o.require(worst_c > 1.0 - 1e-6, "coherent min fidelity=1-" + fmt(1.0 - worst_c));
}

void open_threshold(Outcome& o) {
  ModelParams p = params(0.2, 0.25, 2.0, 2.0);
  const double closed = negativity(qubit_cavity_at_cycle(1, p).to_density(), kQC);
  const double zero[] = {0.0};
  const SweepResult lossless = negativity_sweep(zero, zero, p);
  const double nl = lossless.cells.front().neg_qc_2pi;
  p.rates.gamma_m = 1e-5;
  p.rates.kappa = 1e-2;
  p.rates.n_th = 10.0;
  const double G[] = {1e-3}, gp[] = {1e-2};
  const SweepResult r = negativity_sweep(G, gp, p);
  const double n = r.cells.front().neg_qc_2pi;
  o.require(n >= 0.4, "N_qc(2pi)=" + fmt(n) + " (threshold 0.4)");
  o.require(std::abs(nl - closed) <= 1e-4, "lossless " + fmt(nl) + " vs closed " + fmt(closed));
  o.detail << "; dims 2x" << r.dims.n_cav << "x" << r.dims.n_mech << " (d=" << 2 * r.dims.n_cav * r.dims.n_mech
           << "), interaction frame, dt=" << r.dt << ", trace drift " << fmt(r.max_trace_drift) << ", min eig "
           << fmt(r.min_eigenvalue);
}

void cats(Outcome& o) {
  const WignerGrid two = wigner(cavity_unconditional(1, params(0.5, 0.5, 3.0, 0.0)), GridSpec::for_amplitude(3.0));
  const int l2 = count_lobes(two);
  o.require(two.min() < -1e-3, "p=2 min W=" + fmt(two.min()));
  o.require(l2 == 2, "p=2 lobes=" + std::to_string(l2));
  const WignerGrid five =
      wigner(cavity_unconditional(1, params(1.0 / std::sqrt(10.0), 0.8, 3.0, 0.0)), GridSpec::for_amplitude(3.0));
  const int l5 = count_lobes(five);
  o.require(l5 == 5, "p=5 lobes=" + std::to_string(l5));
}

void kitten_conditional(Outcome& o) {
  const ModelParams p = params(0.0125, 1.0, 3.0, 0.0);
  const WignerGrid cond = wigner(cavity_projected_plus(10, p), GridSpec::for_amplitude(3.0));
  const WignerGrid uncond = wigner(cavity_unconditional(10, p), GridSpec::for_amplitude(3.0));
  o.require(cond.min() < -1e-3, "projected min W=" + fmt(cond.min()));
  o.require(uncond.min() >= -1e-3, "unconditional min W=" + fmt(uncond.min()));
}

void kitten_fidelity_max(Outcome& o) {
  const KittenOptimum k = optimize_g_for_kitten(3.0, 1.0, 10, 0.0, 0.03);
  o.require(!k.inconclusive, "objective not flat");
  o.require(k.g_star > 0.0 && k.g_star < 0.03, "g*=" + fmt(k.g_star));
  o.require(k.f_max - k.f_lower > 1e-3 && k.f_max - k.f_upper > 1e-3,
            "F(g*)=" + fmt(k.f_max) + " F(0)=" + fmt(k.f_lower) + " F(0.03)=" + fmt(k.f_upper));
}

void measure_suite(Outcome& o) {
  std::mt19937 rng(99);
  std::normal_distribution<double> nd;
  auto random_vec = [&](Index n) {
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng));
    return CVector(v / v.norm());
  };
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Index nc = 2 + k % 6;
    const CVector v = random_vec(2 * nc);
    Eigen::Map<const CMatrix> m(v.data(), nc, 2);  // column-major view: m(n, q) = v(q * nc + n)
    const double s = Eigen::JacobiSVD<CMatrix>(m).singularValues().sum();
    const double schmidt = 0.5 * (s * s - 1.0);
    worst = std::max(worst, std::abs(negativity(PureState(Space::qubit_cavity(nc), v).to_density(), kQC) - schmidt));
  }
  o.require(worst < 1e-8, "Schmidt max err=" + fmt(worst));

  const CVector w = random_vec(2 * 3 * 4);
  const DensityMatrix rho(Space::composite(3, 4), w * w.adjoint());
  const CMatrix once = partial_transpose(rho, {Subsystem::cavity});
  const CMatrix twice = partial_transpose(DensityMatrix(rho.space(), once), {Subsystem::cavity});
  o.require((twice - rho.elements()).cwiseAbs().maxCoeff() < 1e-14, "partial transpose involution");

  ModelParams p = params(0.2, 0.3, 0.3, 0.3);
  p.rates = Rates{0.05, 0.02, 0.03, 0.04, 1.0, 0.0, true};
  OpenSystemConfig cfg;
  cfg.params = p;
  cfg.t_final = kTwoPi;
  const OpenTrajectory tr = integrate(open_initial_state(p, {5, 10}, MechanicsInit::coherent, 1e-6), cfg);
  o.require(tr.max_trace_drift < 1e-6, "Lindblad trace drift=" + fmt(tr.max_trace_drift));

  const WignerGrid g = wigner(cavity_unconditional(1, params(0.3, 0.4, 2.0, 0.0)), GridSpec::for_amplitude(2.0));
  o.require(std::abs(g.integral() - 1.0) < 1e-3, "Wigner integral=" + fmt(g.integral()));
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) expect_fail.insert(std::atoi(argv[++i]));
    else if (a == "--only" && i + 1 < argc) only.insert(std::atoi(argv[++i]));
  }

  const Criterion criteria[] = {
      {1, "maximal indirect entanglement", 10, maximal_indirect},
      {2, "analytic vs numeric intrinsic entanglement", 30, intrinsic_agreement},
      {3, "coherent-case entanglement", 60, coherent_series},
      {4, "thermal-mediator independence", 120, thermal_independence},
      {5, "closed form vs brute force", 60, brute_force},
      {6, "open-system threshold", 600, open_threshold},
      {7, "cat states", 60, cats},
      {8, "conditional kitten", 60, kitten_conditional},
      {9, "kitten fidelity interior maximum", 120, kitten_fidelity_max},
      {10, "measure-theory property suite", 60, measure_suite},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << (o.detail.tellp() > 0 ? "; " : "") << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail << "; runtime over limit";
    }
    const bool expected = expect_fail.count(c.id) > 0;
    std::printf("criterion %d: %s  %s | %s | %.2f s (limit %.0f s)%s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.str().c_str(), secs, c.limit_seconds,
                expected ? (o.pass ? " [expected to fail but passed]" : " [known failure]") : "");
    std::fflush(stdout);
    if (o.pass == expected) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
