#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hqom/cli.hpp"
#include "hqom/closed_dynamics.hpp"
#include "hqom/entanglement.hpp"
#include "hqom/lindblad.hpp"
#include "hqom/nonclassical.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace hqom;

namespace {

SubsystemSet parse_set(const std::vector<std::string>& names) {
  SubsystemSet s;
  for (const auto& n : names) {
    if (n == "qubit") s = s | SubsystemSet{Subsystem::qubit};
    else if (n == "cavity") s = s | SubsystemSet{Subsystem::cavity};
    else if (n == "mechanics") s = s | SubsystemSet{Subsystem::mechanics};
    else throw ValidationError("unknown subsystem '" + n + "'");
  }
  return s;
}

py::dict record_dict(const EntanglementRecord& r) {
  return py::dict("t"_a = r.time, "neg_qc"_a = r.negativity_qc, "neg_qo"_a = r.negativity_qo,
                  "neg_oc"_a = r.negativity_oc, "intrinsic_qc"_a = r.intrinsic_qc);
}

DensityMatrix single_mode(const CMatrix& rho) { return DensityMatrix(Space::cavity(rho.rows()), rho); }

}  // namespace

PYBIND11_MODULE(hqom, m) {
  m.doc() = "Qubit-optomechanics entanglement and cat-state toolkit";
  m.attr("__version__") = HQOM_VERSION;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Rates>(m, "Rates")
      .def(py::init<>())
      .def_readwrite("kappa", &Rates::kappa)
      .def_readwrite("gamma_m", &Rates::gamma_m)
      .def_readwrite("Gamma", &Rates::Gamma)
      .def_readwrite("Gamma_phi", &Rates::Gamma_phi)
      .def_readwrite("n_th", &Rates::n_th)
      .def_readwrite("n_q", &Rates::n_q)
      .def_readwrite("common_reservoir", &Rates::common_reservoir);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double g, double lambda, Complex alpha, Complex beta, double nbar) {
             ModelParams p;
             p.g = g;
             p.lambda = lambda;
             p.alpha = alpha;
             p.beta = beta;
             p.nbar_mech = nbar;
             p.validate();
             return p;
           }),
           "g"_a = 0.0, "lambda_"_a = 0.0, "alpha"_a = Complex(2.0), "beta"_a = Complex(2.0), "nbar"_a = 0.0)
      .def_readwrite("g", &ModelParams::g)
      .def_readwrite("lambda_", &ModelParams::lambda)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("nbar", &ModelParams::nbar_mech)
      .def_readwrite("rates", &ModelParams::rates);

  py::class_<PureState>(m, "PureState")
      .def_property_readonly("amplitudes", &PureState::amplitudes)
      .def_property_readonly("dims", [](const PureState& s) {
        std::vector<Index> d;
        for (const auto& f : s.space().factors()) d.push_back(f.dim);
        return d;
      })
      .def_property_readonly("discarded_weight", &PureState::discarded_weight)
      .def("reduce", [](const PureState& s, const std::vector<std::string>& keep) {
        return CMatrix(s.reduce(parse_set(keep)).elements());
      }, "keep"_a);

  m.def("eta", &eta, "t"_a);
  m.def("evolve_coherent", [](double t, const ModelParams& p) { return evolve_coherent(t, p); }, "t"_a, "params"_a);
  m.def("evolve_fock_superposition", [](double t, const ModelParams& p) { return evolve_fock_superposition(t, p); },
        "t"_a, "params"_a);
  m.def("entanglement", [](double t, const ModelParams& p, const std::string& initial) {
    if (initial == "fock") return record_dict(entanglement_record(t, evolve_fock_superposition(t, p)));
    if (initial == "coherent") return record_dict(entanglement_record(t, evolve_coherent(t, p)));
    if (initial == "thermal") return record_dict(entanglement_record(t, evolve_thermal(t, p)));
    throw ValidationError("initial must be fock, coherent or thermal");
  }, "t"_a, "params"_a, "initial"_a = "coherent");
  m.def("negativity_qc", [](const CMatrix& rho) {
    if (rho.rows() % 2 != 0) throw ValidationError("qubit-cavity matrix must have even dimension");
    return negativity(DensityMatrix(Space::qubit_cavity(rho.rows() / 2), rho),
                      BipartitePartition{{Subsystem::qubit}, {Subsystem::cavity}});
  }, "rho"_a);
  m.def("intrinsic_qc_analytic_fock", &intrinsic_qc_analytic_fock, "t"_a, "g"_a, "lambda_"_a);
  m.def("intrinsic_qc_2pi_coherent", &intrinsic_qc_2pi_coherent, "g"_a, "lambda_"_a, "alpha"_a);

  m.def("wigner", [](const CMatrix& rho, double half_width, Index points) {
    const WignerGrid g = wigner(single_mode(rho), GridSpec::square(half_width, points));
    return py::make_tuple(g.x, g.y, g.values);
  }, "rho"_a, "half_width"_a = 7.0, "points"_a = 201);
  m.def("cavity_unconditional", [](int l, const ModelParams& p) { return CMatrix(cavity_unconditional(l, p).elements()); },
        "l"_a, "params"_a);
  m.def("cavity_projected_plus", [](int l, const ModelParams& p) { return CMatrix(cavity_projected_plus(l, p).elements()); },
        "l"_a, "params"_a);
  m.def("cat_condition", [](double g, int l, int p) {
    const CatCheck c = cat_condition(g, l, p);
    return py::make_tuple(c.satisfied, c.residual);
  }, "g"_a, "l"_a, "p"_a);
  m.def("kitten_fidelity", [](double g, Complex alpha, double lambda, int l) { return kitten_fidelity(g, alpha, lambda, l); },
        "g"_a, "alpha"_a, "lambda_"_a, "l"_a);
  m.def("optimize_g_for_kitten", [](Complex alpha, double lambda, int l, double g_lo, double g_hi) {
    const KittenOptimum o = optimize_g_for_kitten(alpha, lambda, l, g_lo, g_hi);
    return py::dict("g_star"_a = o.g_star, "f_max"_a = o.f_max, "f_lower"_a = o.f_lower, "f_upper"_a = o.f_upper,
                    "inconclusive"_a = o.inconclusive);
  }, "alpha"_a, "lambda_"_a, "l"_a, "g_lo"_a, "g_hi"_a);

  m.def("dressed_dephasing_rate", &dressed_dephasing_rate, "Gamma_phi"_a, "gamma_m"_a, "lambda_"_a, "n_th"_a);
  m.def("negativity_sweep", [](const std::vector<double>& G, const std::vector<double>& gp, const ModelParams& p, double dt) {
    SweepSettings s;
    s.dt = dt;
    const SweepResult r = negativity_sweep(G, gp, p, s);
    std::vector<std::tuple<double, double, double>> rows;
    for (const auto& c : r.cells) rows.emplace_back(c.Gamma, c.gamma_phi, c.neg_qc_2pi);
    return rows;
  }, "Gamma_values"_a, "gamma_phi_values"_a, "params"_a, "dt"_a = 0.0);

  m.def("parse_config", [](const std::string& text) {
    py::dict d;
    for (const auto& [k, v] : cli::parse_config(text).echo()) d[py::str(k)] = v;
    return d;
  }, "text"_a);
  m.def("run_scenario", [](const std::string& text, const std::string& out_dir) {
    const cli::RunResult r = cli::run_scenario(cli::parse_config(text), out_dir);
    std::vector<std::string> files;
    for (const auto& f : r.files) files.push_back(f.string());
    return files;
  }, "config_text"_a, "out_dir"_a);
}
