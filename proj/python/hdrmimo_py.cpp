#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hdrmimo/channel.hpp"
#include "hdrmimo/equalizer.hpp"
#include "hdrmimo/frontend.hpp"
#include "hdrmimo/harness.hpp"
#include "hdrmimo/numerics.hpp"
#include "hdrmimo/training.hpp"

namespace py = pybind11;
using namespace hdrmimo;

PYBIND11_MODULE(_hdrmimo, m) {
  m.doc() = "Householder spatial transforms and quantized massive MU-MIMO uplink simulation.";

  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // numerics
  m.def("householder_matrix", &householder_matrix, py::arg("v"));
  m.def("householder_apply", &householder_apply, py::arg("v"), py::arg("x"));
  m.def(
      "dominant_eigenpair",
      [](const ComplexMatrix& c, double tol, int max_iterations) {
        const EigenPair p = dominant_eigenpair(HermitianMatrix(c), {tol, max_iterations});
        return py::make_tuple(p.value, p.vector);
      },
      py::arg("c"), py::arg("tol") = 1e-10, py::arg("max_iterations") = 1000,
      "Returns (eigenvalue, unit eigenvector) of the largest eigenvalue.");
  m.def(
      "posdef_inverse_apply",
      [](const ComplexMatrix& a, const ComplexMatrix& b) {
        return posdef_inverse_apply(HermitianMatrix(a), b);
      },
      py::arg("a"), py::arg("b"));
  m.def("hadamard", &hadamard, py::arg("k"));

  // frontend
  py::enum_<TransformKind>(m, "TransformKind")
      .value("identity", TransformKind::identity)
      .value("hr_iso", TransformKind::hr_iso)
      .value("hr_max", TransformKind::hr_max);

  py::class_<SpatialTransform>(m, "SpatialTransform")
      .def_static("identity", &SpatialTransform::identity, py::arg("antennas"),
                  py::arg("clusters"))
      .def_property_readonly("kind", &SpatialTransform::kind)
      .def_property_readonly("antennas", &SpatialTransform::antennas)
      .def_property_readonly("clusters", &SpatialTransform::clusters)
      .def("reflector", &SpatialTransform::reflector, py::arg("cluster"))
      .def("apply", &SpatialTransform::apply, py::arg("y"))
      .def("dense", &SpatialTransform::dense);

  m.def("design_hr_iso", &design_hr_iso, py::arg("h_strong"), py::arg("clusters"));
  m.def(
      "design_hr_max",
      [](const ComplexMatrix& c, int clusters, double tol) {
        return design_hr_max(HermitianMatrix(c), clusters, EigenOptions{tol, 1000});
      },
      py::arg("covariance"), py::arg("clusters"), py::arg("tol") = 1e-10);

  m.def("midrise_quantize", &midrise_quantize, py::arg("x"), py::arg("bits"), py::arg("step"));
  m.def("quantizer_mse", &quantizer_mse, py::arg("bits"), py::arg("step"));
  m.def("optimal_step_size", &optimal_step_size, py::arg("bits"));
  m.def(
      "bussgang_constants",
      [](int bits, double step) {
        const auto c = bussgang_constants(bits, step);
        return py::make_tuple(c.gamma, c.distortion);
      },
      py::arg("bits"), py::arg("step"), "Returns (gamma, distortion).");
  m.def(
      "compute_agc",
      [](const ComplexMatrix& c, const SpatialTransform& f) {
        return compute_agc(HermitianMatrix(c), f).omega;
      },
      py::arg("covariance"), py::arg("transform"));
  m.def(
      "adc",
      [](const ComplexVector& y, const RealVector& omega, int bits, double step) {
        QuantizerModel q{bits, step, 1.0, 0.0};
        return adc(y, AgcGains{omega}, q);
      },
      py::arg("y_tilde"), py::arg("omega"), py::arg("bits"), py::arg("step"));

  // equalizer
  m.def(
      "build_lmmse",
      [](const ComplexMatrix& h_hat, const SpatialTransform& f, const RealVector& omega,
         int bits, double n0) {
        return build_lmmse(h_hat, f, AgcGains{omega}, QuantizerModel::optimal(bits), n0).W;
      },
      py::arg("h_hat"), py::arg("transform"), py::arg("omega"), py::arg("bits"), py::arg("n0"));
  m.def(
      "build_unquantized_lmmse",
      [](const ComplexMatrix& h_hat, double n0) { return build_unquantized_lmmse(h_hat, n0).W; },
      py::arg("h_hat"), py::arg("n0"));
  m.def(
      "qam16_modulate",
      [](const std::vector<std::uint8_t>& bits) { return qam16::modulate(bits); },
      py::arg("bits"));
  m.def("qam16_slice", &qam16::slice, py::arg("symbols"));

  // channel / training
  m.def("power_control_gains", [](const std::vector<double>& p, double limit) {
    return power_control_gains(p, limit);
  }, py::arg("powers"), py::arg("dr_limit_db"));
  m.def("strong_ue_gain", &strong_ue_gain, py::arg("strong_power"),
        py::arg("weakest_received_power"), py::arg("rho_db"));
  m.def("generate_pilots",
        [](std::size_t u, std::size_t k) { return generate_pilots(u, k).symbols; },
        py::arg("users"), py::arg("length"));

  // harness
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_property(
          "bs_antennas", [](const ExperimentConfig& c) { return c.scenario.bs_antennas; },
          [](ExperimentConfig& c, int v) { c.scenario.bs_antennas = v; })
      .def_property(
          "ues", [](const ExperimentConfig& c) { return c.scenario.ues; },
          [](ExperimentConfig& c, int v) { c.scenario.ues = v; })
      .def_property(
          "clusters", [](const ExperimentConfig& c) { return c.scenario.clusters; },
          [](ExperimentConfig& c, int v) { c.scenario.clusters = v; })
      .def_property(
          "rho_db", [](const ExperimentConfig& c) { return c.scenario.rho_db; },
          [](ExperimentConfig& c, double v) { c.scenario.rho_db = v; })
      .def_readwrite("q_bits", &ExperimentConfig::q_bits)
      .def_readwrite("msnr_start", &ExperimentConfig::msnr_start)
      .def_readwrite("msnr_stop", &ExperimentConfig::msnr_stop)
      .def_readwrite("msnr_step", &ExperimentConfig::msnr_step)
      .def_readwrite("realizations", &ExperimentConfig::realizations)
      .def_readwrite("symbols", &ExperimentConfig::symbols)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("perfect_csi", &ExperimentConfig::perfect_csi)
      .def_readwrite("quantized_training", &ExperimentConfig::quantized_training)
      .def_property(
          "methods",
          [](const ExperimentConfig& c) {
            std::vector<std::string> out;
            for (Method mm : c.methods) out.emplace_back(method_name(mm));
            return out;
          },
          [](ExperimentConfig& c, const std::vector<std::string>& names) {
            c.methods.clear();
            for (const auto& n : names) c.methods.push_back(parse_method(n));
          })
      .def("msnr_grid", &ExperimentConfig::msnr_grid)
      .def("validate", &ExperimentConfig::validate);

  m.def(
      "load_config",
      [](const std::string& text, const std::map<std::string, std::string>& overrides) {
        return load_config(text, overrides);
      },
      py::arg("text") = "", py::arg("overrides") = std::map<std::string, std::string>{});

  m.def(
      "run_trial",
      [](const ExperimentConfig& cfg, const std::string& method, std::size_t point,
         std::size_t realization) {
        // The GIL is released here, so return a plain pair rather than a py::tuple.
        const TrialResult r = run_trial(cfg, parse_method(method), point, realization);
        return std::pair{r.bit_errors, r.total_bits};
      },
      py::arg("config"), py::arg("method"), py::arg("point_index"),
      py::arg("realization_index"), py::call_guard<py::gil_scoped_release>(),
      "Returns (bit_errors, total_bits).");

  m.def(
      "run_sweep_csv",
      [](const ExperimentConfig& cfg) { return format_csv(run_sweep(cfg)); },
      py::arg("config"), py::call_guard<py::gil_scoped_release>(),
      "Runs the sweep and returns the CSV text.");
}
