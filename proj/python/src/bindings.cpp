#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "oscpair/error.hpp"
#include "oscpair/pipeline.hpp"
#include "oscpair/specfun.hpp"

namespace py = pybind11;
using namespace oscpair;

namespace {

RunConfig make_config(const std::string& eq, const Params& params, std::optional<double> x0,
                      std::optional<double> xmax, double rtol, double atol, double window) {
  RunConfig c;
  c.eq = eq;
  c.params = params;
  c.x0 = x0;
  c.xmax = xmax;
  c.rtol = rtol;
  c.atol = atol;
  c.window_fraction = window;
  c.validate();
  return c;
}

// v and v' of the principal pair on xs.
std::tuple<std::vector<double>, std::vector<double>> principal_amplitude(const RunConfig& cfg,
                                                                         const std::vector<double>& xs) {
  const PairTrajectory traj = default_unit_pair(cfg);
  const PrincipalReport r = find_principal(traj, tail_window(traj, cfg.window_fraction));
  const PhaseData a = amplitude_series(transform_pair(traj, r.matrix), xs);
  return {a.v, a.v_prime};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Principal pairs, phase functions and zero gaps of y'' + q(x) y = 0";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def(
      "analyze_json",
      [](const std::string& eq, const Params& params, std::optional<double> x0, std::optional<double> xmax,
         double rtol, double atol, double window) {
        const RunConfig cfg = make_config(eq, params, x0, xmax, rtol, atol, window);
        py::gil_scoped_release release;
        return to_json(analyze(cfg));
      },
      py::arg("eq"), py::arg("params") = Params{}, py::arg("x0") = py::none(), py::arg("xmax") = py::none(),
      py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12, py::arg("window") = 0.25,
      "Analysis report as a JSON document.");

  m.def(
      "zeros_json",
      [](const std::string& eq, const Params& params, std::optional<double> x0, std::optional<double> xmax,
         double rtol, double atol, double window) {
        const RunConfig cfg = make_config(eq, params, x0, xmax, rtol, atol, window);
        py::gil_scoped_release release;
        return to_json(zero_gaps(cfg));
      },
      py::arg("eq"), py::arg("params") = Params{}, py::arg("x0") = py::none(), py::arg("xmax") = py::none(),
      py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12, py::arg("window") = 0.25,
      "Zero-gap table of the principal pair as a JSON document.");

  m.def(
      "principal_amplitude",
      [](const std::string& eq, const std::vector<double>& xs, const Params& params, std::optional<double> x0,
         std::optional<double> xmax, double rtol, double atol, double window) {
        const RunConfig cfg = make_config(eq, params, x0, xmax, rtol, atol, window);
        py::gil_scoped_release release;
        return principal_amplitude(cfg, xs);
      },
      py::arg("eq"), py::arg("xs"), py::arg("params") = Params{}, py::arg("x0") = py::none(),
      py::arg("xmax") = py::none(), py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12, py::arg("window") = 0.25,
      "(v, v') of the principal pair on an increasing grid.");

  m.def(
      "q",
      [](const std::string& eq, const std::vector<double>& xs, const Params& params) {
        RunConfig cfg;
        cfg.eq = eq;
        cfg.params = params;
        const EquationModel model = make_model(cfg);
        std::vector<double> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back(model.q(x));
        return out;
      },
      py::arg("eq"), py::arg("xs"), py::arg("params") = Params{});

  m.def(
      "verify_json",
      [](bool full, std::optional<double> rtol, std::uint64_t seed) {
        VerifyOptions opts;
        opts.full = full;
        opts.rtol = rtol;
        opts.seed = seed;
        py::gil_scoped_release release;
        return to_json(acceptance_checks(opts));
      },
      py::arg("full") = false, py::arg("rtol") = py::none(), py::arg("seed") = VerifyOptions{}.seed);

  m.def(
      "bessel_jy",
      [](double nu, double t) {
        const BesselValue b = oscpair::bessel_jy(nu, t);
        return std::make_tuple(b.J, b.Y, to_string(b.method));
      },
      py::arg("nu"), py::arg("t"), "(J_nu(t), Y_nu(t), method) for 0 < nu < 1.");
  m.def("bessel_modulus", &modulus, py::arg("nu"), py::arg("t"), "t (J_nu^2 + Y_nu^2).");
  m.def("example1_v", &example1_v, py::arg("nu"), py::arg("x"));

  m.attr("normalization_note") = kNormalizationNote;
  m.attr("__version__") = "0.1.0";
}
