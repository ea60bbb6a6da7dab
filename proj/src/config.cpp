// Copyright 2026 The noisyvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "noisyvqe/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <variant>

#include "noisyvqe/errors.hpp"

namespace noisyvqe {

namespace {

void check_keys(const Json &j, const std::set<std::string> &allowed,
                const std::string &where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ValidationError(where + ": unknown key \"" + key + "\"");
    }
  }
}

template <typename T>
T get_or(const Json &j, const std::string &key, T fallback, const std::string &where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception &) {
    throw ValidationError(where + ": field \"" + key + "\" has the wrong type");
  }
}

template <typename T>
T require(const Json &j, const std::string &key, const std::string &where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing field \"" + key + "\"");
  return get_or<T>(j, key, T{}, where);
}

HermitianOperator operator_from_json(const Json &j, Eigen::Index dim,
                                     const std::string &where) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(where + ": expected a non-empty list of Pauli terms");
  }
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto &term : j) {
    check_keys(term, {"pauli", "coefficient"}, where);
    const auto letters = require<std::string>(term, "pauli", where);
    const double coeff = get_or<double>(term, "coefficient", 1.0, where);
    if (static_cast<Eigen::Index>(Eigen::Index{1} << letters.size()) != dim) {
      throw ValidationError(where + ": Pauli string \"" + letters +
                            "\" does not match the qubit count");
    }
    m += coeff * pauli_matrix(letters);
  }
  return HermitianOperator(std::move(m));
}

Json operator_to_json(const HermitianOperator &h) {
  Json out = Json::array();
  for (const auto &p : pauli_decompose(h)) {
    out.push_back({{"pauli", p.letters}, {"coefficient", p.coefficient}});
  }
  return out;
}

Graph graph_from_json(const Json &j, const std::string &where) {
  check_keys(j, {"vertices", "edges"}, where);
  Graph g;
  g.vertices = require<int>(j, "vertices", where);
  const auto edges = get_or<std::vector<std::vector<int>>>(j, "edges", {}, where);
  for (const auto &e : edges) {
    if (e.size() != 2) throw ValidationError(where + ": each edge needs two vertices");
    g.edges.emplace_back(e[0], e[1]);
  }
  validate_graph(g);
  return g;
}

ProblemSpec problem_spec_from_json(const Json &j) {
  const std::string where = "problem";
  check_keys(j, {"kind", "n", "depth", "seed", "graph"}, where);
  ProblemSpec spec;
  const auto kind = require<std::string>(j, "kind", where);
  if (kind == "random_vqe") {
    spec.kind = ProblemKind::random_vqe;
    spec.n = require<int>(j, "n", where);
    spec.depth = require<std::size_t>(j, "depth", where);
    spec.seed = get_or<std::uint64_t>(j, "seed", 0, where);
  } else if (kind == "qaoa_maxcut") {
    spec.kind = ProblemKind::qaoa_maxcut;
    spec.depth = require<std::size_t>(j, "depth", where);
    if (!j.contains("graph")) throw ValidationError(where + ": qaoa_maxcut needs a graph");
    spec.graph = graph_from_json(j.at("graph"), "problem.graph");
    spec.n = spec.graph.vertices;
  } else if (kind == "single_qubit_rotation") {
    spec.kind = ProblemKind::single_qubit_rotation;
    spec.n = 1;
    spec.depth = 1;
  } else {
    throw ValidationError(where + ": unknown kind \"" + kind + "\"");
  }
  return spec;
}

OptimizerConfig optimizer_from_json(const Json &j, bool *auto_step) {
  const std::string where = "optimizer";
  check_keys(j, {"step_size", "max_iters", "grad_tol", "seed"}, where);
  OptimizerConfig opt;
  if (j.contains("step_size") && j.at("step_size").is_string()) {
    if (j.at("step_size") != "auto" || auto_step == nullptr) {
      throw ValidationError(where + ": step_size must be a number" +
                            std::string(auto_step ? " or \"auto\"" : ""));
    }
    *auto_step = true;
  } else {
    opt.step_size = get_or<double>(j, "step_size", opt.step_size, where);
  }
  opt.max_iters = get_or<std::size_t>(j, "max_iters", opt.max_iters, where);
  opt.grad_tol = get_or<double>(j, "grad_tol", opt.grad_tol, where);
  opt.seed = get_or<std::uint64_t>(j, "seed", opt.seed, where);
  if (!(auto_step && *auto_step)) opt.validate();
  return opt;
}

DensityMatrix input_state_from_json(const Json &j, QubitCount n) {
  if (j.is_string() && j == "plus") {
    return DensityMatrix::pure(Eigen::VectorXcd::Constant(
        n.dim(), 1.0 / std::sqrt(static_cast<double>(n.dim()))));
  }
  if (j.is_string() && j == "maximally_mixed") return DensityMatrix::maximally_mixed(n);
  if (j.is_object()) {
    check_keys(j, {"basis"}, "problem.input_state");
    return DensityMatrix::basis_state(n, require<Eigen::Index>(j, "basis", "problem.input_state"));
  }
  throw ValidationError(
      "problem.input_state: expected \"plus\", \"maximally_mixed\" or {\"basis\": k}");
}

VQEProblem problem_from_json(const Json &j) {
  if (j.is_object() && j.value("kind", "") == "custom") {
    const std::string where = "problem";
    check_keys(j, {"kind", "observable", "input_state", "circuit", "cost_shift"}, where);
    if (!j.contains("circuit")) throw ValidationError(where + ": missing field \"circuit\"");
    Circuit c = circuit_from_json(j.at("circuit"));
    if (!j.contains("observable")) {
      throw ValidationError(where + ": missing field \"observable\"");
    }
    HermitianOperator obs = operator_from_json(j.at("observable"), c.dim(), "problem.observable");
    DensityMatrix rho = j.contains("input_state")
                            ? input_state_from_json(j.at("input_state"), c.qubits())
                            : DensityMatrix::basis_state(c.qubits(), 0);
    std::optional<double> shift;
    if (j.contains("cost_shift")) shift = require<double>(j, "cost_shift", where);
    return VQEProblem::make(std::move(obs), std::move(rho), std::move(c), std::nullopt,
                            shift);
  }
  return problem_spec_from_json(j).build();
}

NoiseModel noise_from_json(const Json &j, const Circuit &circuit) {
  if (!j.is_array()) throw ValidationError("noise: expected a list of noise entries");
  const QubitCount n = circuit.qubits();
  std::vector<CoherentError> coherent;
  std::map<std::size_t, KrausChannel> channels;
  std::optional<ControlErrorSpec> control;

  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json &e = j[i];
    const std::string where = "noise[" + std::to_string(i) + "]";
    const auto kind = require<std::string>(e, "kind", where);
    auto add_channel = [&](std::size_t layer, KrausChannel ch) {
      if (!channels.emplace(layer, std::move(ch)).second) {
        throw ValidationError(where + ": layer " + std::to_string(layer) +
                              " already carries a channel");
      }
    };
    if (kind == "coherent") {
      check_keys(e, {"kind", "layer", "generator", "angle"}, where);
      if (!e.contains("generator")) throw ValidationError(where + ": missing \"generator\"");
      coherent.push_back({require<std::size_t>(e, "layer", where),
                          operator_from_json(e.at("generator"), circuit.dim(), where),
                          require<double>(e, "angle", where)});
    } else if (kind == "coherent_z") {
      check_keys(e, {"kind", "layer", "qubit", "angle"}, where);
      coherent.push_back(
          {require<std::size_t>(e, "layer", where),
           pauli_operator({pauli_on(n, get_or<int>(e, "qubit", 0, where), 'Z'), 0.5}),
           require<double>(e, "angle", where)});
    } else if (kind == "bit_flip" || kind == "phase_flip") {
      check_keys(e, {"kind", "layer", "qubit", "p"}, where);
      const int q = get_or<int>(e, "qubit", 0, where);
      const double p = require<double>(e, "p", where);
      add_channel(require<std::size_t>(e, "layer", where),
                  kind == "bit_flip" ? KrausChannel::bit_flip(n, q, p)
                                     : KrausChannel::phase_flip(n, q, p));
    } else if (kind == "depolarizing") {
      check_keys(e, {"kind", "layer", "p"}, where);
      add_channel(require<std::size_t>(e, "layer", where),
                  KrausChannel::depolarizing(n, require<double>(e, "p", where)));
    } else if (kind == "amplitude_damping") {
      check_keys(e, {"kind", "layer", "qubit", "gamma"}, where);
      add_channel(require<std::size_t>(e, "layer", where),
                  KrausChannel::amplitude_damping(n, get_or<int>(e, "qubit", 0, where),
                                                  require<double>(e, "gamma", where)));
    } else if (kind == "control") {
      check_keys(e, {"kind", "eta"}, where);
      if (control) throw ValidationError(where + ": only one control entry is allowed");
      if (!e.contains("eta")) throw ValidationError(where + ": missing \"eta\"");
      const auto count = static_cast<Eigen::Index>(circuit.total_params());
      RealVector eta;
      if (e.at("eta").is_number()) {
        eta = RealVector::Constant(count, e.at("eta").get<double>());
      } else {
        const auto v = require<std::vector<double>>(e, "eta", where);
        if (static_cast<Eigen::Index>(v.size()) != count) {
          throw ValidationError(where + ": eta has " + std::to_string(v.size()) +
                                " entries, circuit has " + std::to_string(count) +
                                " parameters");
        }
        eta = Eigen::Map<const RealVector>(v.data(), count);
      }
      control = ControlErrorSpec(std::move(eta));
    } else {
      throw ValidationError(where + ": unknown kind \"" + kind + "\"");
    }
  }
  NoiseModel model(std::move(coherent), std::move(channels), std::move(control));
  model.validate_for(circuit);
  return model;
}

Circuit family_from_json(const Json &j) {
  const std::string where = "family";
  check_keys(j, {"kind", "n", "depth", "graph"}, where);
  const auto kind = require<std::string>(j, "kind", where);
  const auto depth = require<std::size_t>(j, "depth", where);
  if (kind == "qaoa") {
    if (!j.contains("graph")) throw ValidationError(where + ": qaoa needs a graph");
    return build_qaoa(graph_from_json(j.at("graph"), "family.graph"), depth);
  }
  const int n = require<int>(j, "n", where);
  if (kind == "locally_surjective") return build_locally_surjective(n, depth);
  if (kind == "hardware_efficient") return build_hardware_efficient(n, depth);
  if (kind == "sun") return build_sun(n, depth);
  throw ValidationError(where + ": unknown kind \"" + kind + "\"");
}

}  // namespace

Json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error &e) {
    throw ValidationError("config " + path + " is not valid JSON: " + e.what());
  }
}

SweepConfig parse_sweep_config(const Json &j) {
  const std::string where = "sweep config";
  check_keys(j,
             {"problem", "noise_kind", "placement", "noise_qubit", "epsilons", "optimizer",
              "shared_init_seed", "output_path", "workers"},
             where);
  SweepConfig cfg;
  if (!j.contains("problem")) throw ValidationError(where + ": missing field \"problem\"");
  cfg.problem = problem_spec_from_json(j.at("problem"));

  const auto kind = require<std::string>(j, "noise_kind", where);
  if (kind == "coherent_z") {
    cfg.noise_kind = NoiseKind::coherent_z;
  } else if (kind == "bit_flip") {
    cfg.noise_kind = NoiseKind::bit_flip;
  } else if (kind == "control") {
    cfg.noise_kind = NoiseKind::control;
  } else {
    throw ValidationError(where + ": unknown noise_kind \"" + kind + "\"");
  }

  const auto placement = get_or<std::string>(j, "placement", "per_layer", where);
  if (placement == "per_layer") {
    cfg.placement = Placement::per_layer;
  } else if (placement == "per_gate") {
    cfg.placement = Placement::per_gate;
  } else {
    throw ValidationError(where + ": unknown placement \"" + placement + "\"");
  }
  cfg.noise_qubit = get_or<int>(j, "noise_qubit", 0, where);
  if (cfg.noise_qubit < 0 || cfg.noise_qubit >= cfg.problem.n) {
    throw ValidationError(where + ": noise_qubit out of range");
  }

  if (!j.contains("epsilons")) throw ValidationError(where + ": missing field \"epsilons\"");
  const Json &eps = j.at("epsilons");
  if (eps.is_object()) {
    check_keys(eps, {"log_min", "log_max", "count"}, "epsilons");
    cfg.epsilons = log_spaced(require<double>(eps, "log_min", "epsilons"),
                              require<double>(eps, "log_max", "epsilons"),
                              require<std::size_t>(eps, "count", "epsilons"));
  } else {
    cfg.epsilons = require<std::vector<double>>(j, "epsilons", where);
  }

  cfg.optimizer = j.contains("optimizer")
                      ? optimizer_from_json(j.at("optimizer"), &cfg.auto_step)
                      : OptimizerConfig{};
  cfg.shared_init_seed = get_or<std::uint64_t>(j, "shared_init_seed", 0, where);
  cfg.output_path = get_or<std::string>(j, "output_path", "", where);
  cfg.workers = get_or<unsigned>(j, "workers", 1, where);
  cfg.validate();
  return cfg;
}

TrainConfig parse_train_config(const Json &j) {
  const std::string where = "train config";
  check_keys(j, {"problem", "noise", "optimizer", "init_seed", "snapshot_every", "output_path"},
             where);
  if (!j.contains("problem")) throw ValidationError(where + ": missing field \"problem\"");
  VQEProblem problem = problem_from_json(j.at("problem"));
  if (j.contains("noise")) {
    problem = problem.with_noise(noise_from_json(j.at("noise"), problem.circuit));
  }
  TrainConfig cfg{std::move(problem),
                  j.contains("optimizer") ? optimizer_from_json(j.at("optimizer"), nullptr)
                                          : OptimizerConfig{},
                  get_or<std::uint64_t>(j, "init_seed", 0, where),
                  get_or<std::size_t>(j, "snapshot_every", 0, where),
                  get_or<std::string>(j, "output_path", "", where)};
  return cfg;
}

SurjectivityConfig parse_surjectivity_config(const Json &j) {
  const std::string where = "surjectivity config";
  check_keys(j, {"circuit", "family", "samples", "seed"}, where);
  if (j.contains("circuit") == j.contains("family")) {
    throw ValidationError(where + ": give exactly one of \"circuit\" or \"family\"");
  }
  Circuit c = j.contains("circuit") ? circuit_from_json(j.at("circuit"))
                                    : family_from_json(j.at("family"));
  SurjectivityConfig cfg{std::move(c), get_or<int>(j, "samples", 10, where),
                         get_or<std::uint64_t>(j, "seed", 0, where)};
  if (cfg.samples < 1) throw ValidationError(where + ": samples must be >= 1");
  return cfg;
}

Json circuit_to_json(const Circuit &circuit) {
  Json layers = Json::array();
  for (const auto &layer : circuit.layers()) {
    Json gens = Json::array();
    const bool sun = std::holds_alternative<SunLayer>(layer);
    std::visit(
        [&](const auto &l) {
          for (std::size_t k = 0; k < l.param_count(); ++k) {
            gens.push_back(operator_to_json(l.generator(k)));
          }
        },
        layer);
    layers.push_back({{"kind", sun ? "sun" : "product"}, {"generators", gens}});
  }
  return {{"qubits", circuit.qubits().qubits()}, {"layers", layers}};
}

Circuit circuit_from_json(const Json &j) {
  const std::string where = "circuit";
  check_keys(j, {"qubits", "layers"}, where);
  const QubitCount n(require<int>(j, "qubits", where));
  if (!j.contains("layers") || !j.at("layers").is_array()) {
    throw ValidationError(where + ": \"layers\" must be a list");
  }
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < j.at("layers").size(); ++i) {
    const Json &l = j.at("layers")[i];
    const std::string lw = "circuit.layers[" + std::to_string(i) + "]";
    check_keys(l, {"kind", "generators"}, lw);
    const auto kind = get_or<std::string>(l, "kind", "product", lw);
    if (!l.contains("generators") || !l.at("generators").is_array()) {
      throw ValidationError(lw + ": \"generators\" must be a list");
    }
    std::vector<HermitianOperator> gens;
    for (const auto &g : l.at("generators")) gens.push_back(operator_from_json(g, n.dim(), lw));
    if (kind == "product") {
      layers.emplace_back(ProductLayer(std::move(gens)));
    } else if (kind == "sun") {
      layers.emplace_back(SunLayer(std::move(gens)));
    } else {
      throw ValidationError(lw + ": unknown layer kind \"" + kind + "\"");
    }
  }
  return Circuit(n, std::move(layers));
}

}  // namespace noisyvqe
