#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "zeropi/circuit.hpp"
#include "zeropi/decoherence.hpp"
#include "zeropi/dispersive.hpp"
#include "zeropi/eigensolver.hpp"
#include "zeropi/noise.hpp"
#include "zeropi/params.hpp"
#include "zeropi/runner.hpp"
#include "zeropi/spectrum.hpp"

namespace py = pybind11;
using namespace zeropi;

PYBIND11_MODULE(_zeropi, m) {
  m.doc() = "Numerical core for the disordered two-junction qubit simulator";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<LabelingError>(m, "LabelingError", PyExc_RuntimeError);
  py::register_exception<ResonanceError>(m, "ResonanceError", PyExc_ArithmeticError);
  py::register_exception<EigenSolveError>(m, "EigenSolveError", PyExc_RuntimeError);

  // ---- parameters -------------------------------------------------------
  py::class_<NoiseAmplitudes>(m, "NoiseAmplitudes")
      .def(py::init<>())
      .def_readwrite("A_flux", &NoiseAmplitudes::A_flux)
      .def_readwrite("A_charge", &NoiseAmplitudes::A_charge)
      .def_readwrite("A_Ic", &NoiseAmplitudes::A_Ic);

  py::class_<FluxLine>(m, "FluxLine")
      .def(py::init<>())
      .def_readwrite("M", &FluxLine::M)
      .def_readwrite("R", &FluxLine::R);

  py::class_<NoiseCutoffs>(m, "NoiseCutoffs")
      .def(py::init<>())
      .def_readwrite("omega_ir", &NoiseCutoffs::omega_ir)
      .def_readwrite("omega_uv", &NoiseCutoffs::omega_uv)
      .def_readwrite("t_meas", &NoiseCutoffs::t_meas);

  py::class_<CircuitParams>(m, "CircuitParams")
      .def(py::init<>())
      .def_readwrite("EC", &CircuitParams::EC)
      .def_readwrite("ECJ", &CircuitParams::ECJ)
      .def_readwrite("EJ", &CircuitParams::EJ)
      .def_readwrite("EL", &CircuitParams::EL)
      .def_readwrite("dC", &CircuitParams::dC)
      .def_readwrite("dCJ", &CircuitParams::dCJ)
      .def_readwrite("dEJ", &CircuitParams::dEJ)
      .def_readwrite("dEL", &CircuitParams::dEL)
      .def_readwrite("flux", &CircuitParams::flux)
      .def_readwrite("ng_theta", &CircuitParams::ng_theta)
      .def_readwrite("temperature", &CircuitParams::temperature)
      .def_readwrite("kappa_zeta", &CircuitParams::kappa_zeta)
      .def_readwrite("noise_amplitudes", &CircuitParams::noise_amplitudes)
      .def_readwrite("fluxline", &CircuitParams::fluxline)
      .def_readwrite("cutoffs", &CircuitParams::cutoffs)
      .def("validate", &CircuitParams::validate);

  py::class_<DerivedEnergies>(m, "DerivedEnergies")
      .def_readonly("ECS", &DerivedEnergies::ECS)
      .def_readonly("Omega_zeta", &DerivedEnergies::Omega_zeta)
      .def_readonly("omega_p", &DerivedEnergies::omega_p)
      .def_readonly("zeta_osc_length", &DerivedEnergies::zeta_osc_length);
  m.def("derive_energies", &derive_energies, py::arg("params"));

  py::class_<BasisSpec>(m, "BasisSpec")
      .def(py::init<>())
      .def_readwrite("n_theta_max", &BasisSpec::n_theta_max)
      .def_readwrite("phi_points", &BasisSpec::phi_points)
      .def_readwrite("phi_max", &BasisSpec::phi_max)
      .def_readwrite("n_zeta_max", &BasisSpec::n_zeta_max)
      .def("theta_dim", &BasisSpec::theta_dim)
      .def("zeta_dim", &BasisSpec::zeta_dim)
      .def("dim2d", &BasisSpec::dim2d)
      .def("dim3d", &BasisSpec::dim3d)
      .def("validate", &BasisSpec::validate);
  m.def("default_basis", &default_basis, py::arg("params"),
        py::arg("spec") = BasisSpec{});

  // ---- operators --------------------------------------------------------
  py::enum_<BasisTag>(m, "BasisTag")
      .value("theta_phi", BasisTag::theta_phi)
      .value("theta_phi_zeta", BasisTag::theta_phi_zeta)
      .value("zeta_only", BasisTag::zeta_only);

  py::class_<HermitianOperator>(m, "HermitianOperator")
      .def_readonly("dim", &HermitianOperator::dim)
      .def_readonly("basis_tag", &HermitianOperator::basis_tag)
      .def_property_readonly(
          "mat", [](const HermitianOperator& op) { return op.mat; },
          "Sparse matrix in GHz (scipy.sparse)");

  m.def("build_h_2d", &build_h_2d, py::arg("params"), py::arg("basis"));
  m.def("build_h_3d", &build_h_3d, py::arg("params"), py::arg("basis"));

  py::enum_<NoiseChannel>(m, "NoiseChannel")
      .value("critical_current", NoiseChannel::critical_current)
      .value("flux", NoiseChannel::flux);
  m.def("build_noise_operator", &build_noise_operator, py::arg("params"),
        py::arg("basis"), py::arg("channel"));
  m.def("promote_to_3d", &promote_to_3d, py::arg("op2d"), py::arg("basis"));
  m.def("hermiticity_defect", &hermiticity_defect, py::arg("mat"));

  // ---- eigensolver ------------------------------------------------------
  py::class_<EigenOptions>(m, "EigenOptions")
      .def(py::init<>())
      .def_readwrite("tol", &EigenOptions::tol)
      .def_readwrite("max_basis", &EigenOptions::max_basis)
      .def_readwrite("max_restarts", &EigenOptions::max_restarts)
      .def_readwrite("seed", &EigenOptions::seed)
      .def_readwrite("dense_limit", &EigenOptions::dense_limit)
      .def_readwrite("dense_threshold", &EigenOptions::dense_threshold);

  py::class_<EigenSolution>(m, "EigenSolution")
      .def_readonly("eigenvalues", &EigenSolution::eigenvalues)
      .def_readonly("eigenvectors", &EigenSolution::eigenvectors)
      .def_readonly("residuals", &EigenSolution::residuals)
      .def_readonly("iterations", &EigenSolution::iterations)
      .def_readonly("converged", &EigenSolution::converged);

  m.def("lowest_eigenpairs", &lowest_eigenpairs, py::arg("H"), py::arg("k"),
        py::arg("options") = EigenOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("dense_oracle", &dense_oracle, py::arg("H"),
        py::arg("options") = EigenOptions{},
        py::call_guard<py::gil_scoped_release>());

  // ---- spectrum ---------------------------------------------------------
  py::enum_<SweepParameter>(m, "SweepParameter")
      .value("flux", SweepParameter::flux)
      .value("ng_theta", SweepParameter::ng_theta)
      .value("EJ", SweepParameter::EJ)
      .value("EL", SweepParameter::EL);

  py::class_<StateLabel>(m, "StateLabel")
      .def_readonly("energy", &StateLabel::energy)
      .def_readonly("l", &StateLabel::l)
      .def_readonly("n", &StateLabel::n)
      .def_readonly("overlap", &StateLabel::overlap)
      .def_readonly("hybridized", &StateLabel::hybridized);

  py::class_<LabeledSpectrum>(m, "LabeledSpectrum")
      .def_readonly("states", &LabeledSpectrum::states)
      .def("find", &LabeledSpectrum::find, py::arg("l"), py::arg("n"));

  py::class_<DispersionCurve>(m, "DispersionCurve")
      .def_readonly("grid", &DispersionCurve::grid)
      .def_readonly("energies", &DispersionCurve::energies)
      .def_readonly("point_failed", &DispersionCurve::point_failed)
      .def_readonly("anticrossing", &DispersionCurve::anticrossing);

  py::class_<SweepOptions>(m, "SweepOptions")
      .def(py::init<>())
      .def_readwrite("three_d", &SweepOptions::three_d)
      .def_readwrite("eigen", &SweepOptions::eigen)
      .def_readwrite("workers", &SweepOptions::workers);

  m.def("sweep", &sweep, py::arg("params"), py::arg("basis"),
        py::arg("parameter"), py::arg("grid"), py::arg("k"),
        py::arg("options") = SweepOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("label_dressed", &label_dressed, py::arg("sol3d"), py::arg("sol2d"),
        py::arg("basis"), py::arg("hybridization_threshold") = 0.5);

  py::class_<DerivativeResult>(m, "DerivativeResult")
      .def_readonly("d1", &DerivativeResult::d1)
      .def_readonly("d2", &DerivativeResult::d2)
      .def_readonly("err1", &DerivativeResult::err1)
      .def_readonly("err2", &DerivativeResult::err2);
  m.def("energy_derivatives", &energy_derivatives, py::arg("params"),
        py::arg("basis"), py::arg("parameter"), py::arg("step") = 0.0,
        py::arg("eigen") = EigenOptions{},
        py::call_guard<py::gil_scoped_release>());

  // ---- dispersive -------------------------------------------------------
  py::class_<DispersiveReport>(m, "DispersiveReport")
      .def_readonly("g", &DispersiveReport::g)
      .def_readonly("Delta", &DispersiveReport::Delta)
      .def_readonly("chi", &DispersiveReport::chi)
      .def_readonly("Lambda", &DispersiveReport::Lambda)
      .def_readonly("chi01", &DispersiveReport::chi01)
      .def_readonly("max_g_over_Delta", &DispersiveReport::max_g_over_Delta)
      .def_readonly("warnings", &DispersiveReport::warnings);
  m.def("coupling_matrix", &coupling_matrix, py::arg("sol2d"), py::arg("params"),
        py::arg("basis"), py::arg("levels"));
  m.def("stark_lamb", &stark_lamb, py::arg("g"), py::arg("energies2d"),
        py::arg("Omega_zeta"), py::arg("levels"));

  // ---- decoherence ------------------------------------------------------
  m.def("thermal_occupation", &thermal_occupation, py::arg("Omega_GHz"),
        py::arg("temperature_K"));
  m.def("tphi_1f", &tphi_1f, py::arg("d1"), py::arg("d2"), py::arg("A"),
        py::arg("cutoffs") = NoiseCutoffs{});
  m.def("tphi_smooth", &tphi_smooth, py::arg("S0"), py::arg("sigma2"),
        py::arg("d1"), py::arg("d2"));
  m.def(
      "shot_noise_rate",
      [](double chi01, double kappa, double n_th) {
        return shot_noise_rate(chi01, kappa, n_th).rate;
      },
      py::arg("chi01_GHz"), py::arg("kappa"), py::arg("n_th"));

  py::class_<ChannelRates>(m, "ChannelRates")
      .def_readonly("name", &ChannelRates::name)
      .def_readonly("dephasing", &ChannelRates::dephasing)
      .def_readonly("included", &ChannelRates::included)
      .def_readonly("rate", &ChannelRates::rate)
      .def_readonly("Gamma_1to0", &ChannelRates::Gamma_1to0)
      .def_readonly("Gamma_0up", &ChannelRates::Gamma_0up)
      .def_readonly("Gamma_1up", &ChannelRates::Gamma_1up)
      .def_readonly("failed", &ChannelRates::failed)
      .def_readonly("error", &ChannelRates::error)
      .def("time", &ChannelRates::time);

  py::class_<RateBreakdown>(m, "RateBreakdown")
      .def_readonly("channels", &RateBreakdown::channels)
      .def_readonly("Gamma_phi", &RateBreakdown::Gamma_phi)
      .def_readonly("Gamma_1", &RateBreakdown::Gamma_1)
      .def_readonly("warnings", &RateBreakdown::warnings)
      .def("Tphi", &RateBreakdown::Tphi)
      .def("T1", &RateBreakdown::T1)
      .def("T2", &RateBreakdown::T2);

  py::class_<BudgetOptions>(m, "BudgetOptions")
      .def(py::init<>())
      .def_readwrite("amplitudes", &BudgetOptions::amplitudes)
      .def_readwrite("cutoffs", &BudgetOptions::cutoffs)
      .def_readwrite("include_charge", &BudgetOptions::include_charge)
      .def_readwrite("levels", &BudgetOptions::levels)
      .def_readwrite("states_3d", &BudgetOptions::states_3d)
      .def_readwrite("zeta_coverage", &BudgetOptions::zeta_coverage)
      .def_readwrite("eigen", &BudgetOptions::eigen);

  m.def("coherence_budget", &coherence_budget, py::arg("params"),
        py::arg("basis"), py::arg("options") = BudgetOptions{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<PurcellResult>(m, "PurcellResult")
      .def_readonly("Gamma", &PurcellResult::Gamma)
      .def_readonly("Gamma1", &PurcellResult::Gamma1)
      .def_readonly("warnings", &PurcellResult::warnings);
  m.def("purcell_exact", &purcell_exact, py::arg("labels"), py::arg("sol3d"),
        py::arg("basis"), py::arg("energies2d"), py::arg("env"));
  m.def("purcell_perturbative", &purcell_perturbative, py::arg("g"),
        py::arg("energies2d"), py::arg("Omega_zeta"), py::arg("env"));

  py::class_<ThermalEnv>(m, "ThermalEnv")
      .def(py::init<>())
      .def_readwrite("temperature", &ThermalEnv::temperature)
      .def_readwrite("Omega_zeta", &ThermalEnv::Omega_zeta)
      .def_readwrite("kappa_zeta", &ThermalEnv::kappa_zeta)
      .def("n_th", &ThermalEnv::n_th)
      .def("n_th_at", &ThermalEnv::n_th_at, py::arg("omega_GHz"));

  // ---- runner -----------------------------------------------------------
  m.def("parse_config_text", &parse_config_text, py::arg("text"),
        py::arg("origin") = std::string("<python>"));
  m.def(
      "run_config",
      [](const std::string& text, const std::string& out_dir) {
        RunConfig cfg = parse_config_text(text, "<python>");
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        std::ostringstream log;
        int code;
        {
          py::gil_scoped_release release;
          code = run(cfg, log);
        }
        return py::make_tuple(code, log.str());
      },
      py::arg("text"), py::arg("out_dir") = std::string(),
      "Parse a config file's text and run its task; returns (exit_code, log)");

  m.attr("__version__") = kVersion;
}
