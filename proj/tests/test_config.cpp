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


#include <gtest/gtest.h>

#include <filesystem>

#include "noisyvqe/config.hpp"
#include "noisyvqe/errors.hpp"

namespace noisyvqe {
namespace {

const std::filesystem::path kConfigs = NOISYVQE_CONFIG_DIR;

TEST(Config, ShippedSweepConfigsParse) {
  for (const char *name : {"sweep_coherent_z.json", "sweep_bit_flip.json",
                           "sweep_qaoa5_L30_coherent_z.json", "sweep_qaoa5_L30_bit_flip.json"}) {
    EXPECT_NO_THROW(parse_sweep_config(load_json_file(kConfigs / name))) << name;
  }
  const auto cfg = parse_sweep_config(load_json_file(kConfigs / "sweep_bit_flip.json"));
  EXPECT_EQ(cfg.noise_kind, NoiseKind::bit_flip);
  EXPECT_EQ(cfg.epsilons.size(), 8u);
  EXPECT_EQ(cfg.optimizer.max_iters, 1000u);
  const auto qaoa =
      parse_sweep_config(load_json_file(kConfigs / "sweep_qaoa5_L30_coherent_z.json"));
  EXPECT_TRUE(qaoa.auto_step);
  EXPECT_EQ(qaoa.placement, Placement::per_gate);
  EXPECT_EQ(qaoa.problem.depth, 30u);
}

TEST(Config, ShippedTrainAndRankConfigsParse) {
  const auto train =
      parse_train_config(load_json_file(kConfigs / "train_random_vqe_noisy.json"));
  ASSERT_TRUE(train.problem.noise);
  EXPECT_EQ(train.problem.noise->coherent().size(), 1u);
  EXPECT_EQ(train.problem.noise->channels().size(), 2u);
  EXPECT_EQ(train.snapshot_every, 50u);
  EXPECT_NO_THROW(parse_train_config(load_json_file(kConfigs / "train_single_qubit_control.json")));
  EXPECT_NO_THROW(
      parse_surjectivity_config(load_json_file(kConfigs / "surjectivity_z_only.json")));
  EXPECT_NO_THROW(parse_surjectivity_config(
      load_json_file(kConfigs / "surjectivity_hardware_efficient.json")));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  Json j = load_json_file(kConfigs / "sweep_coherent_z.json");
  j["step"] = 0.1;
  EXPECT_THROW(parse_sweep_config(j), ValidationError);
  j.erase("step");
  j["noise_kind"] = "gamma_rays";
  EXPECT_THROW(parse_sweep_config(j), ValidationError);
  j["noise_kind"] = "coherent_z";
  j["noise_qubit"] = 2;
  EXPECT_THROW(parse_sweep_config(j), ValidationError);
  j["noise_qubit"] = 0;
  j["epsilons"] = Json::array({0.3, 0.1});
  EXPECT_THROW(parse_sweep_config(j), ValidationError);
  j["epsilons"] = "many";
  EXPECT_THROW(parse_sweep_config(j), ValidationError);
  EXPECT_THROW(load_json_file(kConfigs / "missing.json"), ValidationError);
}

TEST(Config, TrainNoiseEntries) {
  const Json j = Json::parse(R"({
    "problem": {"kind": "single_qubit_rotation"},
    "noise": [{"kind": "control", "eta": [0.1, 0.2]}]
  })");
  EXPECT_THROW(parse_train_config(j), ValidationError);
  const Json twice = Json::parse(R"({
    "problem": {"kind": "random_vqe", "n": 1, "depth": 2},
    "noise": [{"kind": "bit_flip", "layer": 0, "p": 0.1},
              {"kind": "depolarizing", "layer": 0, "p": 0.1}]
  })");
  EXPECT_THROW(parse_train_config(twice), ValidationError);
  const Json custom = Json::parse(R"({
    "problem": {
      "kind": "custom",
      "observable": [{"pauli": "ZZ", "coefficient": 1.0}, {"pauli": "XI", "coefficient": 0.3}],
      "input_state": "plus",
      "circuit": {"qubits": 2, "layers": [
        {"kind": "product", "generators": [[{"pauli": "YI", "coefficient": 0.5}],
                                           [{"pauli": "IY", "coefficient": 0.5}]]}]}
    },
    "noise": [{"kind": "coherent", "layer": 0, "generator": [{"pauli": "ZI"}], "angle": 0.05}],
    "optimizer": {"step_size": 0.1, "max_iters": 10}
  })");
  const auto cfg = parse_train_config(custom);
  EXPECT_EQ(cfg.problem.circuit.total_params(), 2u);
  EXPECT_EQ(cfg.optimizer.max_iters, 10u);
  ASSERT_TRUE(cfg.problem.noise);
  EXPECT_EQ(cfg.problem.noise->coherent().size(), 1u);
}

TEST(Config, CircuitJsonRoundTrip) {
  for (const Circuit &c : {build_hardware_efficient(2, 2), build_locally_surjective(2, 1)}) {
    const Circuit back = circuit_from_json(circuit_to_json(c));
    ASSERT_EQ(back.total_params(), c.total_params());
    ASSERT_EQ(back.depth(), c.depth());
    const auto theta = initial_parameters(c.total_params(), 4);
    EXPECT_LT(max_abs(unitary_matrix(back, theta) - unitary_matrix(c, theta)), 1e-12);
  }
  Json bad = circuit_to_json(build_sun(1, 1));
  bad["layers"][0]["kind"] = "twisted";
  EXPECT_THROW(circuit_from_json(bad), ValidationError);
}

}  // namespace
}  // namespace noisyvqe
