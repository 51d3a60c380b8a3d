#include <doctest.h>

#include <random>

#include "hqom/closed_dynamics.hpp"
#include "hqom/entanglement.hpp"
#include "oracles.hpp"

using namespace hqom;

namespace {

// Pure state on qubit x cavity with the given cavity dim.
PureState qc_state(const CVector& v, Index nc) { return PureState(Space::qubit_cavity(nc), v); }

// Oracle: negativity from the spectrum of an explicitly partial-transposed matrix
// over the first factor of a da x db bipartition.
double pt_negativity(const CMatrix& rho, Index da, Index db) {
  CMatrix pt(rho.rows(), rho.cols());
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      for (Index k = 0; k < db; ++k)
        for (Index l = 0; l < db; ++l) pt(j * db + k, i * db + l) = rho(i * db + k, j * db + l);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(pt);
  double n = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0.0) n -= es.eigenvalues()(i);
  return n;
}

}  // namespace

TEST_CASE("Bell state has negativity one half") {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  const PureState s = qc_state(v, 2);
  CHECK(negativity(s.to_density(), {{Subsystem::qubit}, {Subsystem::cavity}}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("product states have zero negativity") {
  std::mt19937 rng(3);
  const CVector a = oracle::random_state(2, rng), b = oracle::random_state(5, rng);
  const PureState s = qc_state(oracle::kron(CMatrix(a), CMatrix(b)), 5);
  CHECK(negativity(s.to_density(), {{Subsystem::qubit}, {Subsystem::cavity}}) < 1e-12);
}

TEST_CASE("negativity of random pure states matches the Schmidt oracle") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Index nc = 2 + trial % 5;
    const CVector v = oracle::random_state(2 * nc, rng);
    const PureState s = qc_state(v, nc);
    const double ref = oracle::schmidt_negativity(v, 2, nc);
    CHECK(negativity(s.to_density(), {{Subsystem::qubit}, {Subsystem::cavity}}) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("negativity of random mixed states matches an explicit partial transpose") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Index nc = 3;
    const CMatrix r = oracle::random_density(2 * nc, 1 + trial % 4, rng);
    const DensityMatrix rho(Space::qubit_cavity(nc), r);
    const double ref = pt_negativity(r, 2, nc);
    CHECK(std::abs(negativity(rho, {{Subsystem::qubit}, {Subsystem::cavity}}) - ref) < 1e-9);
    // invariant: transposing either side gives the same spectrum
    CHECK(std::abs(negativity(rho, {{Subsystem::cavity}, {Subsystem::qubit}}) - ref) < 1e-9);
  }
}

TEST_CASE("partial transpose is an involution and preserves the trace") {
  std::mt19937 rng(8);
  const CMatrix r = oracle::random_density(2 * 3 * 4, 3, rng);
  const DensityMatrix rho(Space::composite(3, 4), r);
  const CMatrix pt = partial_transpose(rho, {Subsystem::cavity});
  CHECK(std::abs(pt.trace() - Complex(1.0)) < 1e-12);
  const CMatrix back = partial_transpose(DensityMatrix(rho.space(), pt), {Subsystem::cavity});
  CHECK((back - r).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("negativity is bounded by (d-1)/2") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector v = oracle::random_state(6, rng);
    const double n = negativity(qc_state(v, 3).to_density(), {{Subsystem::qubit}, {Subsystem::cavity}});
    CHECK(n >= 0.0);
    CHECK(n <= 0.5 + 1e-12);
  }
}

TEST_CASE("partition validation") {
  const DensityMatrix rho = qc_state(CVector::Unit(4, 0), 2).to_density();
  CHECK_THROWS_AS(negativity(rho, {{Subsystem::qubit}, {Subsystem::qubit}}), ValidationError);
  CHECK_THROWS_AS(negativity(rho, {{Subsystem::qubit}, {Subsystem::mechanics}}), ValidationError);
  CHECK_THROWS_AS(negativity(rho, {{}, {Subsystem::cavity}}), ValidationError);
}

TEST_CASE("pure-state negativity with a traced party equals the dense route") {
  std::mt19937 rng(2);
  const Index nc = 3, nm = 4;
  const CVector v = oracle::random_state(2 * nc * nm, rng);
  const PureState psi(Space::composite(nc, nm), v);
  const DensityMatrix qc = psi.reduce({Subsystem::qubit, Subsystem::cavity});
  const double dense = pt_negativity(oracle::trace_out(v * v.adjoint(), {2, nc, nm}, {true, true, false}), 2, nc);
  CHECK(negativity(psi, {Subsystem::qubit}, {Subsystem::cavity}) == doctest::Approx(dense).epsilon(1e-9));
  CHECK(negativity(qc, {{Subsystem::qubit}, {Subsystem::cavity}}) == doctest::Approx(dense).epsilon(1e-9));
}

TEST_CASE("ensemble negativity equals that of its dense mixture") {
  std::mt19937 rng(9);
  const Index nc = 3, nm = 3;
  const Space sp = Space::composite(nc, nm);
  std::vector<CVector> branches;
  for (int k = 0; k < 3; ++k) branches.push_back(oracle::random_state(sp.dim(), rng));
  const StateEnsemble e(sp, {0.5, 0.3, 0.2}, branches);
  const DensityMatrix dense = e.to_density();
  for (auto [a, b] : {std::pair{Subsystem::qubit, Subsystem::cavity}, std::pair{Subsystem::qubit, Subsystem::mechanics},
                      std::pair{Subsystem::mechanics, Subsystem::cavity}}) {
    const double ref = negativity(dense.reduce({a, b}), {{a}, {b}});
    CHECK(negativity(e, {a}, {b}) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("linear entropy") {
  CHECK(linear_entropy(qc_state(CVector::Unit(4, 1), 2).to_density()) == doctest::Approx(0.0));
  const DensityMatrix mixed(Space::qubit(), CMatrix::Identity(2, 2) / 2.0);
  CHECK(linear_entropy(mixed) == doctest::Approx(0.5));
}

TEST_CASE("intrinsic qubit-cavity entanglement: closed form against the numeric definition") {
  ModelParams p;
  p.g = 0.2;
  p.lambda = 0.25;
  p.beta = 1.0;
  Truncation tr;
  tr.tail_tolerance = 1e-8;
  for (double t : {0.3, 1.7, 3.0, 4.4, 6.0, 9.1}) {
    const PureState s = evolve_fock_superposition(t, p, tr);
    CHECK(intrinsic_qc_numeric(s) == doctest::Approx(intrinsic_qc_analytic_fock(t, p.g, p.lambda)).epsilon(1e-6));
  }
}

TEST_CASE("intrinsic entanglement at one cycle for a coherent cavity") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    ModelParams p;
    p.g = 0.2;
    p.lambda = 0.25;
    p.alpha = alpha;
    p.beta = 0.0;
    const PureState s = evolve_coherent(kTwoPi, p);
    const double ref = 1.0 - std::exp(-4.0 * alpha * alpha * std::pow(std::sin(4.0 * p.g * p.lambda * kPi), 2));
    CHECK(intrinsic_qc_2pi_coherent(p.g, p.lambda, alpha) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(intrinsic_qc_numeric(s) == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("entanglement record fields match direct calls") {
  ModelParams p;
  p.g = 0.2;
  p.lambda = 0.25;
  p.alpha = 1.0;
  p.beta = 1.0;
  const PureState s = evolve_coherent(2.0, p);
  const EntanglementRecord r = entanglement_record(2.0, s);
  CHECK(r.time == 2.0);
  CHECK(r.negativity_qc == doctest::Approx(negativity(s, {Subsystem::qubit}, {Subsystem::cavity})));
  CHECK(r.negativity_qo == doctest::Approx(negativity(s, {Subsystem::qubit}, {Subsystem::mechanics})));
  CHECK(r.negativity_oc == doctest::Approx(negativity(s, {Subsystem::mechanics}, {Subsystem::cavity})));
  CHECK(r.intrinsic_qc == doctest::Approx(intrinsic_qc_numeric(s)));
}

TEST_CASE("ensemble intrinsic entanglement averages the pure branches") {
  std::mt19937 rng(21);
  const Space sp = Space::composite(3, 4);
  std::vector<CVector> branches;
  for (int k = 0; k < 3; ++k) branches.push_back(oracle::random_state(sp.dim(), rng));
  const std::vector<double> w{0.6, 0.3, 0.1};
  double ref = 0.0;
  for (int k = 0; k < 3; ++k) ref += w[k] * intrinsic_qc_numeric(PureState(sp, branches[k]));
  const double e = intrinsic_qc_numeric(StateEnsemble(sp, w, branches));
  CHECK(e == doctest::Approx(ref).epsilon(1e-12));
  CHECK(e >= 0.0);
  CHECK(e <= 1.0);
}

TEST_CASE("thermal mechanics leaves no intrinsic entanglement once qubit and cavity decouple") {
  ModelParams p;
  p.g = 0.2;
  p.lambda = 0.25;
  p.alpha = 2.0;
  p.nbar_mech = 4.0;
  // g lambda = 1/20, so the qubit-cavity phase winds back after five cycles
  const double t = 10.0 * kPi;
  const StateEnsemble e = evolve_thermal(t, p);
  CHECK(intrinsic_qc_numeric(e) == doctest::Approx(0.0).epsilon(1e-8));
  const double t1 = 2.0 * kPi;
  CHECK(intrinsic_qc_numeric(evolve_thermal(t1, p)) ==
        doctest::Approx(intrinsic_qc_2pi_coherent(p.g, p.lambda, 2.0)).epsilon(1e-6));
}
