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


#pragma once

// JSON configuration for the command-line tool. Layer and qubit indices are
// 0-based throughout. Unknown keys are rejected so typos fail loudly.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "noisyvqe/experiments.hpp"

namespace noisyvqe {

using Json = nlohmann::json;

Json load_json_file(const std::string &path);

SweepConfig parse_sweep_config(const Json &j);

struct TrainConfig {
  VQEProblem problem;
  OptimizerConfig optimizer;
  std::uint64_t init_seed = 0;
  std::size_t snapshot_every = 0;
  std::string output_path;
};
TrainConfig parse_train_config(const Json &j);

struct SurjectivityConfig {
  Circuit circuit;
  int samples = 10;
  std::uint64_t seed = 0;
};
SurjectivityConfig parse_surjectivity_config(const Json &j);

// Circuits as {"qubits": n, "layers": [{"kind": "product" | "sun",
// "generators": [[{"pauli": "XZ", "coefficient": 0.5}, ...], ...]}]}.
Json circuit_to_json(const Circuit &circuit);
Circuit circuit_from_json(const Json &j);

}  // namespace noisyvqe
