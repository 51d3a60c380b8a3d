#include <doctest.h>

#include <random>

#include "hqom/state.hpp"
#include "oracles.hpp"

using namespace hqom;

TEST_CASE("space indexing and restriction") {
  const Space s = Space::composite(4, 5);
  CHECK(s.dim() == 40);
  CHECK(s.index(1, 2, 3) == (1 * 4 + 2) * 5 + 3);
  CHECK(s.stride_of(Subsystem::cavity) == 5);
  CHECK(s.restrict_to({Subsystem::qubit, Subsystem::mechanics}).dim() == 10);
  CHECK_THROWS_AS(Space::cavity(3).restrict_to({Subsystem::qubit}), ValidationError);
}

TEST_CASE("partial trace agrees with the explicit index-sum oracle") {
  std::mt19937 rng(7);
  const Space s = Space::composite(3, 4);
  const CMatrix rho = oracle::random_density(s.dim(), 4, rng);
  const DensityMatrix r(s, rho);
  const std::array<Index, 3> dims{2, 3, 4};
  CHECK((partial_trace(r, {Subsystem::qubit, Subsystem::cavity}).elements() -
         oracle::trace_out(rho, dims, {true, true, false})).norm() < 1e-13);
  CHECK((partial_trace(r, {Subsystem::qubit, Subsystem::mechanics}).elements() -
         oracle::trace_out(rho, dims, {true, false, true})).norm() < 1e-13);
  CHECK((partial_trace(r, {Subsystem::cavity}).elements() - oracle::trace_out(rho, dims, {false, true, false})).norm() <
        1e-13);

  const PureState psi(s, oracle::random_state(s.dim(), rng));
  CHECK((partial_trace(psi, {Subsystem::mechanics}).elements() -
         oracle::trace_out(psi.amplitudes() * psi.amplitudes().adjoint(), dims, {false, false, true})).norm() < 1e-13);
}

TEST_CASE("tensor product of pure and mixed parts matches Kronecker products") {
  std::mt19937 rng(3);
  const PureState q = qubit_state(0.6, Complex(0.0, 0.8));
  const PureState c(Space::cavity(3), oracle::random_state(3, rng));
  const PureState m = as_mode(PureState(Space::cavity(4), oracle::random_state(4, rng)), Subsystem::mechanics);
  const PureState parts[] = {q, c, m};
  const PureState t = tensor(parts);
  CHECK(t.space() == Space::composite(3, 4));
  CHECK((t.amplitudes() - oracle::kron(oracle::kron(q.amplitudes(), c.amplitudes()), m.amplitudes())).norm() < 1e-14);
  // reducing a product state returns the factor
  CHECK((t.reduce({Subsystem::cavity}).elements() - c.amplitudes() * c.amplitudes().adjoint()).norm() < 1e-13);

  const DensityMatrix dparts[] = {q.to_density(), c.to_density(), m.to_density()};
  CHECK((tensor(dparts).elements() - t.to_density().elements()).norm() < 1e-13);
}

TEST_CASE("coherent and thermal states") {
  const PureState c = coherent_state(Complex(1.0, 0.5), 30);
  CHECK(c.norm() == doctest::Approx(1.0));
  CHECK((c.amplitudes() - oracle::coherent(Complex(1.0, 0.5), 30)).norm() < 1e-10);
  CHECK_THROWS_AS(coherent_state(3.0, 10), TruncationError);

  const DensityMatrix th = thermal_density(2.0, 200);
  CHECK(th.trace() == doctest::Approx(1.0));
  CHECK(std::real(th.elements()(1, 1) / th.elements()(0, 0)) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(thermal_density(2.0, 20), TruncationError);
  // tail 1 - sum_{n<dim} p_n for nbar = 1e-8 sits far below the tolerance
  CHECK(thermal_density(1e-8, 3, 1e-7).discarded_weight() < 1e-7);
}

TEST_CASE("displaced Fock states: series, matrix column and expm oracle agree") {
  const Complex a(1.1, -0.4);
  for (Index n : {0, 1, 3}) {
    const PureState s = displaced_fock(a, n, 40);
    const PureState m = displaced_fock(a, n, 40, 1e-10, DisplacedFockMethod::matrix);
    const CVector ref = oracle::displacement(a, 120).col(n).head(40);
    CHECK(std::abs(std::abs(s.amplitudes().dot(ref)) - 1.0) < 1e-9);
    CHECK(fidelity(s, m) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(fidelity(displaced_fock(a, 0, 40), coherent_state(a, 40)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(displaced_fock(a, 1, 40), displaced_fock(a, 2, 40)) < 1e-10);
}

TEST_CASE("density matrix checks") {
  std::mt19937 rng(11);
  const DensityMatrix r(Space::cavity(5), oracle::random_density(5, 2, rng));
  CHECK_NOTHROW(r.check());
  CHECK(r.purity() == doctest::Approx(oracle::vn_purity(r.elements())));
  CMatrix bad = r.elements();
  bad(0, 1) += 0.1;
  CHECK_THROWS_AS(DensityMatrix(Space::cavity(5), bad).check(), NumericalError);
  CHECK_THROWS_AS(DensityMatrix(Space::cavity(4), r.elements()), ValidationError);
}

TEST_CASE("embedded operators act on one factor") {
  const Space s = Space::composite(3, 2);
  const CMatrix a = oracle::destroy(3);
  CHECK((embed_operator(s, Subsystem::cavity, a) - oracle::kron(oracle::eye(2), a, oracle::eye(2))).norm() < 1e-15);
}

TEST_CASE("state ensemble reduces like its dense mixture") {
  std::mt19937 rng(5);
  const Space s = Space::composite(2, 3);
  std::vector<CVector> b{oracle::random_state(s.dim(), rng), oracle::random_state(s.dim(), rng)};
  const StateEnsemble e(s, {0.3, 0.7}, b);
  const DensityMatrix dense = e.to_density();
  CHECK(e.trace() == doctest::Approx(1.0));
  CHECK((e.reduce({Subsystem::qubit, Subsystem::cavity}).elements() -
         dense.reduce({Subsystem::qubit, Subsystem::cavity}).elements()).norm() < 1e-13);
}
