#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qkd/serialize.hpp"

namespace py = pybind11;
using namespace qkd;

namespace {

SystemParams params_from(const py::kwargs& kw) {
  SystemParams p;
  for (const auto& [key, value] : kw) {
    const auto name = key.cast<std::string>();
    const double v = value.cast<double>();
    if (name == "alpha_db_per_km") p.alpha_db_per_km = v;
    else if (name == "length_km") p.length_km = v;
    else if (name == "gamma_b") p.gamma_b = v;
    else if (name == "eta") p.eta = v;
    else if (name == "p_d") p.p_d = v;
    else if (name == "q_opt") p.q_opt = v;
    else if (name == "mu") p.mu = v;
    else throw py::type_error("unknown system parameter '" + name + "'");
  }
  return p;
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

PhasePair phases_from(double phi_a, double phi_b) {
  try {
    return PhasePair::from_radians(phi_a, phi_b);
  } catch (const DomainError& e) {
    throw py::value_error(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Key rates, optimisation and Monte Carlo simulation for qutrit and BB84 QKD.";
  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);

  m.def(
      "key_rate",
      [](const std::string& protocol, const py::kwargs& kw) {
        return to_python(to_json(key_rate(protocol_from_string(protocol), params_from(kw))));
      },
      py::arg("protocol"), "Rate breakdown at the given system parameters.");

  m.def(
      "optimize_mu",
      [](const std::string& protocol, double length_km, const py::kwargs& kw) {
        return to_python(to_json(optimize_mu(protocol_from_string(protocol), params_from(kw), length_km)));
      },
      py::arg("protocol"), py::arg("length_km"));

  m.def(
      "secure_distance",
      [](const std::string& protocol, const py::kwargs& kw) {
        const auto sd = secure_distance(protocol_from_string(protocol), params_from(kw));
        return py::make_tuple(sd.km, to_string(sd.status));
      },
      py::arg("protocol"), "Returns (km, status).");

  m.def(
      "curve",
      [](const std::string& protocol, const std::vector<double>& lengths_km, unsigned workers, const py::kwargs& kw) {
        const auto points = [&] {
          py::gil_scoped_release release;
          return curve(protocol_from_string(protocol), params_from(kw), lengths_km, workers);
        }();
        py::list out;
        for (const auto& pt : points) out.append(to_python(to_json(pt)));
        return out;
      },
      py::arg("protocol"), py::arg("lengths_km"), py::arg("workers") = 1);

  m.def(
      "simulate",
      [](const std::string& protocol, const std::string& strategy, double epsilon1, const std::string& source,
         std::uint64_t rounds, std::uint64_t seed, unsigned workers, const py::kwargs& kw) {
        ExperimentConfig cfg;
        cfg.protocol = protocol_from_string(protocol);
        cfg.strategy = {strategy_from_string(strategy), epsilon1};
        cfg.source = source_from_string(source);
        cfg.params = params_from(kw);
        cfg.rounds = rounds;
        cfg.seed = seed;
        cfg.workers = workers;
        const auto report = [&] {
          py::gil_scoped_release release;
          return run_experiment(cfg);
        }();
        return to_python(to_json(report));
      },
      py::arg("protocol"), py::arg("strategy") = "none", py::arg("epsilon1") = 0.25, py::arg("source") = "poisson",
      py::arg("rounds") = 100000, py::arg("seed") = 1, py::arg("workers") = 1);

  m.def(
      "encode_qutrit", [](double phi_a, double phi_b) { return encode_qutrit(phases_from(phi_a, phi_b)).amplitudes(); },
      py::arg("phi_a"), py::arg("phi_b"), "Amplitudes on |0>, |1>, |2>.");

  m.def(
      "encode_via_projection",
      [](double phi_a, double phi_b) { return encode_via_projection(phases_from(phi_a, phi_b)).amplitudes(); },
      py::arg("phi_a"), py::arg("phi_b"));

  m.def(
      "decode_success_probability",
      [](double phi_a, double phi_b, int subspace) {
        return decode_qubit(encode_qutrit(phases_from(phi_a, phi_b)), subspace).success_prob;
      },
      py::arg("phi_a"), py::arg("phi_b"), py::arg("subspace"));
}
