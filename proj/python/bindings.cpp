// Copyright 2026 The mtqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtqc/catalog.hpp"
#include "mtqc/checkpoint.hpp"
#include "mtqc/control_env.hpp"
#include "mtqc/dynamics.hpp"
#include "mtqc/grape.hpp"
#include "mtqc/robustness.hpp"

namespace py = pybind11;
using namespace mtqc;

namespace {

const CatalogEntry& entry(const std::string& id) { return find_entry(build_catalog(), id); }

PulseSchedule schedule(double total_time, const AmplitudeMatrix& amplitudes) {
  PulseSchedule s{total_time, amplitudes};
  s.validate(static_cast<std::size_t>(amplitudes.cols()));
  return s;
}

py::dict system_dict(const CatalogEntry& e) {
  py::dict d;
  d["id"] = e.id;
  d["n_qubits"] = e.n_qubits;
  d["drift"] = e.ham.drift;
  d["controls"] = e.ham.controls;
  d["initial"] = e.initial;
  d["target"] = e.target;
  d["initial_name"] = e.initial_name;
  d["target_name"] = e.target_name;
  d["descriptor"] = e.descriptor.as_array();
  d["amplitude_scale"] = e.amplitude_scale;
  return d;
}

AgentAction to_action(const std::vector<double>& raw) {
  if (raw.size() > static_cast<std::size_t>(kActionSize)) {
    throw std::invalid_argument("action has more than " + std::to_string(kActionSize) + " entries");
  }
  AgentAction a;
  std::copy(raw.begin(), raw.end(), a.raw.begin());
  return a;
}

EnvConfig env_config(const std::string& mode, double gamma) {
  return parse_dynamics_mode(mode) == DynamicsMode::kClosed ? EnvConfig::closed() : EnvConfig::open(gamma);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-task quantum control: catalog, dynamics, environment, GRAPE and RIM";

  m.def("system_ids", [](const std::string& selector) { return resolve_system_ids(build_catalog(), selector); },
        py::arg("selector") = "all");
  m.def("system", [](const std::string& id) { return system_dict(entry(id)); }, py::arg("id"));
  m.def("catalog_json", [] { return catalog_to_json(build_catalog()).dump(); });
  m.def("matexp", &qla::matexp, py::arg("a"));

  m.def(
      "transfer_fidelity",
      [](const std::string& id, double t, const AmplitudeMatrix& u, const std::string& mode, double gamma) {
        return transfer_fidelity(entry(id), schedule(t, u), parse_dynamics_mode(mode), gamma);
      },
      py::arg("id"), py::arg("total_time"), py::arg("amplitudes"), py::arg("mode") = "open", py::arg("gamma") = 0.01);
  m.def(
      "fidelity_gradient",
      [](const std::string& id, double t, const AmplitudeMatrix& u, const std::string& mode, double gamma) {
        return fidelity_gradient(entry(id), schedule(t, u), parse_dynamics_mode(mode), gamma);
      },
      py::arg("id"), py::arg("total_time"), py::arg("amplitudes"), py::arg("mode") = "open", py::arg("gamma") = 0.01);

  m.def(
      "grape",
      [](const std::string& id, double t, int n, const std::string& mode, double gamma, int restarts,
         int max_iters, std::uint64_t seed) {
        GrapeConfig cfg;
        cfg.restarts = restarts;
        cfg.max_iters = max_iters;
        const GrapeResult r = grape_optimize(entry(id), t, n, parse_dynamics_mode(mode), gamma, cfg, seed);
        py::dict d;
        d["fidelity"] = r.fidelity;
        d["amplitudes"] = r.schedule.amplitudes;
        d["total_time"] = r.schedule.total_time;
        d["trace"] = r.trace;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("id"), py::arg("total_time"), py::arg("segments"), py::arg("mode") = "closed", py::arg("gamma") = 0.0,
      py::arg("restarts") = 5, py::arg("max_iters") = 300, py::arg("seed") = 0);

  m.def(
      "rim",
      [](const std::string& id, double t, const AmplitudeMatrix& u, const std::string& kind, double delta_u,
         double delta_gamma, double nominal_gamma, int samples, std::uint64_t seed) {
        PerturbationModel model;
        model.kind = parse_perturbation_kind(kind);
        model.delta_u = delta_u;
        model.delta_gamma = delta_gamma;
        model.nominal_gamma = nominal_gamma;
        model.samples = samples;
        const RimResult r = rim(entry(id), schedule(t, u), model, seed);
        return py::make_tuple(r.rim, r.fidelities);
      },
      py::arg("id"), py::arg("total_time"), py::arg("amplitudes"), py::arg("kind") = "combined",
      py::arg("delta_u") = 0.05, py::arg("delta_gamma") = 0.005, py::arg("nominal_gamma") = 0.01,
      py::arg("samples") = 15, py::arg("seed") = 0);

  m.def("shaped_reward", &shaped_reward, py::arg("f_now"), py::arg("f_prev"), py::arg("t"), py::arg("f_min"));

  py::class_<ControlEnv>(m, "ControlEnv")
      .def(py::init([](const std::string& id, const std::string& mode, double gamma) {
             return ControlEnv(entry(id), env_config(mode, gamma));
           }),
           py::arg("id"), py::arg("mode") = "open", py::arg("gamma") = 0.01)
      .def("reset", &ControlEnv::reset, py::arg("seed") = 0)
      .def("step",
           [](ControlEnv& env, const std::vector<double>& raw) {
             const StepOutcome out = env.step(to_action(raw));
             py::dict info;
             info["fidelity"] = out.info.fidelity;
             info["step_index"] = out.info.step_index;
             info["effective_time"] = out.info.effective_time;
             return py::make_tuple(out.observation, out.reward, out.done, info);
           })
      .def_property_readonly("done", &ControlEnv::done)
      .def_property_readonly("total_time", &ControlEnv::total_time)
      .def_property_readonly("segments", &ControlEnv::segments)
      .def_property_readonly("fidelity", &ControlEnv::current_fidelity)
      .def_property_readonly("observation_size", [](const ControlEnv&) { return kObservationSize; })
      .def_property_readonly("action_size", [](const ControlEnv&) { return kActionSize; });

  py::class_<Agent>(m, "Agent")
      .def_static(
          "load",
          [](const std::string& path) { return std::move(load_checkpoint(path).agent); }, py::arg("path"))
      .def(
          "act",
          [](const Agent& a, const std::vector<double>& obs, bool deterministic, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            return a.sample(obs, deterministic, rng).action;
          },
          py::arg("observation"), py::arg("deterministic") = true, py::arg("seed") = 0)
      .def_property_readonly("updates", &Agent::updates);
}
