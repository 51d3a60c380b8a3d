#include <doctest.h>

#include <random>

#include "hqom/closed_dynamics.hpp"
#include "hqom/nonclassical.hpp"
#include "oracles.hpp"

using namespace hqom;

namespace {

DensityMatrix cavity_density(const CMatrix& m) { return DensityMatrix(Space::cavity(m.rows()), m); }

DensityMatrix cavity_pure(const CVector& v) { return cavity_density(v * v.adjoint()); }

// Position-space Fock wavefunctions by the Hermite recurrence.
RVector fock_wavefunctions(double x, Index n) {
  RVector psi(n);
  psi(0) = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
  for (Index k = 1; k + 1 < n; ++k)
    psi(k + 1) = std::sqrt(2.0 / (k + 1.0)) * x * psi(k) - std::sqrt(k / (k + 1.0)) * psi(k - 1);
  return psi;
}

// W(x, y) = (1/pi) int <x + s|rho|x - s> e^{-2 i y s} ds by the trapezoid rule.
double wigner_quadrature(const CMatrix& rho, double x, double y) {
  const Index n = rho.rows();
  const double half = 10.0;
  const int steps = 4000;
  const double h = 2.0 * half / steps;
  Complex sum = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double s = -half + k * h;
    const RVector a = fock_wavefunctions(x + s, n), b = fock_wavefunctions(x - s, n);
    const Complex v = (a.cast<Complex>().transpose() * rho * b.cast<Complex>())(0, 0) * std::exp(Complex(0.0, -2.0 * y * s));
    sum += (k == 0 || k == steps ? 0.5 : 1.0) * v;
  }
  return (sum * h).real() / kPi;
}

ModelParams cat_params(double g, double lambda, Complex alpha) {
  ModelParams p;
  p.g = g;
  p.lambda = lambda;
  p.alpha = alpha;
  return p;
}

// Qubit projected onto (|up> + sign |down>)/sqrt2, then mechanics traced out.
CMatrix projected_from_closed_form(const PureState& s, int sign, double& probability) {
  const Index nc = s.space().dim_of(Subsystem::cavity), nm = s.space().dim_of(Subsystem::mechanics);
  const CVector& v = s.amplitudes();
  CVector proj = (v.segment(0, nc * nm) + double(sign) * v.segment(nc * nm, nc * nm)) / std::sqrt(2.0);
  probability = proj.squaredNorm();
  CMatrix rho = CMatrix::Zero(nc, nc);
  for (Index m = 0; m < nm; ++m)
    for (Index i = 0; i < nc; ++i)
      for (Index j = 0; j < nc; ++j) rho(i, j) += proj(i * nm + m) * std::conj(proj(j * nm + m));
  return rho / probability;
}

}  // namespace

TEST_CASE("Wigner function at the origin for vacuum and one photon") {
  CHECK(wigner_point(cavity_pure(CVector::Unit(6, 0)), 0.0, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-6));
  CHECK(wigner_point(cavity_pure(CVector::Unit(6, 1)), 0.0, 0.0) == doctest::Approx(-1.0 / kPi).epsilon(1e-6));
}

TEST_CASE("Fock-basis Wigner function agrees with direct quadrature") {
  std::mt19937 rng(31);
  const CMatrix rho = oracle::random_density(5, 3, rng);
  const DensityMatrix r = cavity_density(rho);
  for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{0.7, -0.4}, std::pair{-1.3, 1.1}, std::pair{2.0, 0.5}})
    CHECK(std::abs(wigner_point(r, x, y) - wigner_quadrature(rho, x, y)) < 1e-4);
  // a displaced state peaks where alpha = (x + i y) / sqrt2 says it should
  const Complex alpha(1.0, -0.5);
  const DensityMatrix coh = cavity_pure(oracle::coherent(alpha, 20));
  CHECK(wigner_point(coh, std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag()) ==
        doctest::Approx(1.0 / kPi).epsilon(1e-6));
}

TEST_CASE("Wigner grids integrate to one and stay bounded") {
  std::mt19937 rng(32);
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix r = cavity_density(oracle::random_density(8, 1 + k, rng));
    const WignerGrid w = wigner(r, GridSpec::square(7.0, 141));
    CHECK(std::abs(w.integral() - 1.0) < 1e-3);
    CHECK(w.max() <= 1.0 / kPi + 1e-6);
    CHECK(w.min() >= -1.0 / kPi - 1e-6);
  }
  const WignerGrid w = wigner(cavity_pure(oracle::coherent(3.0, 40)), GridSpec::for_amplitude(3.0));
  CHECK(w.x.size() == 201);
  CHECK(w.x(0) == doctest::Approx(-7.0));
  CHECK(std::abs(w.integral() - 1.0) < 1e-3);
}

TEST_CASE("grids that miss the state are rejected") {
  const DensityMatrix coh = cavity_pure(oracle::coherent(3.0, 40));
  CHECK_THROWS_AS(wigner(coh, GridSpec::square(1.0, 51)), TruncationError);
  GridSpec bad = GridSpec::square(3.0, 51);
  bad.nx = 1;
  CHECK_THROWS_AS(wigner(coh, bad), ValidationError);
}

TEST_CASE("unconditional cavity state") {
  SUBCASE("no optomechanical coupling leaves a coherent state") {
    const DensityMatrix r = cavity_unconditional(1, cat_params(0.0, 0.7, 1.5));
    const CVector c = oracle::coherent(1.5, r.space().dim());
    CHECK((r.elements() - c * c.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("matches the reduced closed-form evolution") {
    for (int l : {1, 2}) {
      ModelParams p = cat_params(0.2, 0.25, Complex(1.0, 0.3));
      p.beta = 0.5;
      const DensityMatrix r = cavity_unconditional(l, p);
      const PureState s = evolve_coherent(kTwoPi * l, p, {}, Dims{r.space().dim(), 0});
      CHECK((s.reduce({Subsystem::cavity}).elements() - r.elements()).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("qubit-projected cavity states") {
  ModelParams p = cat_params(0.2, 0.25, 1.2);
  p.beta = 0.4;
  const ProjectedCavity plus = project_cavity(1, p, +1);
  const ProjectedCavity minus = project_cavity(1, p, -1);
  const Index nc = plus.state.space().dim();
  const PureState s = evolve_coherent(kTwoPi, p, {}, Dims{nc, 0});

  double prob = 0.0;
  const CMatrix ref = projected_from_closed_form(s, +1, prob);
  const DensityMatrix rp = cavity_projected_plus(1, p);
  CHECK((rp.elements() - ref).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(plus.probability == doctest::Approx(prob).epsilon(1e-8));
  CHECK(rp.purity() > 1.0 - 1e-8);

  // the two outcomes recombine into the unconditional state
  CHECK(plus.probability + minus.probability == doctest::Approx(1.0).epsilon(1e-10));
  const CMatrix mix = plus.probability * plus.state.to_density().elements() +
                      minus.probability * minus.state.to_density().elements();
  CHECK((mix - cavity_unconditional(1, p, nc).elements()).cwiseAbs().maxCoeff() < 1e-8);

  // g = 0: the projection does nothing to the cavity
  const DensityMatrix free = cavity_projected_plus(1, cat_params(0.0, 0.5, 1.0));
  const CVector c = oracle::coherent(1.0, free.space().dim());
  CHECK(fidelity(free, PureState(free.space(), c)) > 1.0 - 1e-10);
  CHECK_THROWS_AS(project_cavity(1, cat_params(0.0, 0.5, 1.0), -1), NumericalError);
}

TEST_CASE("cat condition") {
  CHECK(cat_condition(0.5, 1, 2).satisfied);
  CHECK(cat_condition(1.0 / std::sqrt(10.0), 1, 5).satisfied);
  const CatCheck c = cat_condition(0.1, 1, 2);
  CHECK_FALSE(c.satisfied);
  CHECK(c.residual == doctest::Approx(0.8));
  CHECK_THROWS_AS(cat_condition(0.5, 1, 1), ValidationError);
}

TEST_CASE("displaced Fock fidelity") {
  const Complex a(0.8, 0.3);
  const PureState d1 = displaced_fock(a, 1, 30);
  CHECK(fidelity_displaced_fock(d1, a, 1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fidelity_displaced_fock(d1, a, 2) < 1e-8);
  CHECK(fidelity_displaced_fock(displaced_fock(a, 0, 30), a, 1) < 1e-8);
  // oracle: <1| D(a)^dag |0> squared = |a|^2 e^{-|a|^2}
  CHECK(fidelity_displaced_fock(PureState(Space::cavity(30), CVector::Unit(30, 0)), a, 1) ==
        doctest::Approx(std::norm(a) * std::exp(-std::norm(a))).epsilon(1e-10));
}

TEST_CASE("kitten fidelity has an interior maximum that survives refinement") {
  const KittenOptimum opt = optimize_g_for_kitten(3.0, 1.0, 10, 0.0, 0.03);
  CHECK_FALSE(opt.inconclusive);
  CHECK(opt.g_star > 0.0);
  CHECK(opt.g_star < 0.03);
  CHECK(opt.f_max > opt.f_lower + 1e-3);
  CHECK(opt.f_max > opt.f_upper + 1e-3);
  CHECK(opt.f_max >= kitten_fidelity(0.0125, 3.0, 1.0, 10) - 1e-6);
  CHECK(opt.f_max == doctest::Approx(kitten_fidelity(opt.g_star, 3.0, 1.0, 10)).epsilon(1e-12));
  const KittenOptimum coarse = optimize_g_for_kitten(3.0, 1.0, 10, 0.0, 0.03, 151);
  CHECK(std::abs(coarse.g_star - opt.g_star) < 1e-4);
  CHECK_THROWS_AS(optimize_g_for_kitten(3.0, 1.0, 10, 0.0, 0.1), ValidationError);
}

TEST_CASE("lobe counting") {
  const WignerGrid coh = wigner(cavity_pure(oracle::coherent(2.0, 30)), GridSpec::for_amplitude(2.0));
  CHECK(count_lobes(coh) == 1);
  CHECK_FALSE(is_nonclassical(coh));

  const ModelParams two = cat_params(0.5, 0.5, 3.0);
  const WignerGrid w2 = wigner(cavity_unconditional(1, two), GridSpec::for_amplitude(3.0));
  CHECK(count_lobes(w2) == 2);
  CHECK(is_nonclassical(w2));

  const ModelParams five = cat_params(1.0 / std::sqrt(10.0), 0.8, 3.0);
  const WignerGrid w5 = wigner(cavity_unconditional(1, five), GridSpec::for_amplitude(3.0));
  CHECK(count_lobes(w5) == 5);
}

TEST_CASE("weak coupling: only the conditioned state is nonclassical") {
  const ModelParams p = cat_params(0.0125, 1.0, 3.0);
  CHECK(is_nonclassical(wigner(cavity_projected_plus(10, p), GridSpec::for_amplitude(3.0))));
  CHECK_FALSE(is_nonclassical(wigner(cavity_unconditional(10, p), GridSpec::for_amplitude(3.0))));
}
