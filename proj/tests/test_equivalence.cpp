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

#include <cmath>

#include "noisyvqe/equivalence.hpp"
#include "noisyvqe/errors.hpp"
#include "noisyvqe/experiments.hpp"

namespace noisyvqe {
namespace {

TEST(PushCoherent, LastLayerErrorIsUnchanged) {
  const Circuit c = random_circuit(1, 1, 2, false);
  const auto theta = initial_parameters(c.total_params(), 3);
  const HermitianOperator h(pauli_matrix("X"));
  const auto hats = push_coherent_to_last(c, theta, {{0, h, 0.2}});
  EXPECT_LT(max_abs(hats[0].matrix() - h.matrix()), 1e-15);
}

TEST(PushCoherent, EarlierErrorIsConjugatedByLaterLayers) {
  const Circuit c = random_circuit(2, 3, 5, true);
  const auto theta = initial_parameters(c.total_params(), 6);
  const HermitianOperator h = random_hermitian(QubitCount(2), 7);
  const auto hats = push_coherent_to_last(c, theta, {{0, h, 0.3}});
  const auto seg = [&](std::size_t j) {
    return theta.segment(static_cast<Eigen::Index>(c.param_offset(j)),
                         static_cast<Eigen::Index>(c.param_count(j)));
  };
  const Matrix v = layer_unitary(c.layer(2), seg(2)) * layer_unitary(c.layer(1), seg(1));
  EXPECT_LT(max_abs(hats[0].matrix() - v * h.matrix() * v.adjoint()), 1e-13);
  EXPECT_LT(max_abs(suffix_unitary(c, theta, 1).matrix() - v), 1e-13);
  EXPECT_THROW(suffix_unitary(c, theta, 3), ValidationError);
}

TEST(PushCoherent, ReproducesInterleavedState) {
  const Circuit c = random_circuit(2, 3, 11, false);
  const auto theta = initial_parameters(c.total_params(), 12);
  const auto rho = random_density_matrix(2, 13);
  const QubitCount qc(2);
  std::vector<CoherentError> errs{{2, random_hermitian(qc, 1), 0.4},
                                  {0, random_hermitian(qc, 2), -0.7},
                                  {0, random_hermitian(qc, 3), 0.1}};
  const Matrix w = pushed_error_unitary(c, theta, errs);
  const Matrix expected = noisy_propagate(c, theta, NoiseModel(errs, {}), rho.matrix());
  EXPECT_LT(max_abs(conjugate(w * unitary_matrix(c, theta), rho.matrix()) - expected), 1e-12);
}

TEST(FirstOrder, PerturbationIsHermitianAndMatchesCommutator) {
  const QubitCount one(1);
  const Circuit c(one, {ProductLayer({HermitianOperator(0.5 * pauli_matrix("Y"))})});
  const HermitianOperator z(pauli_matrix("Z"));
  const HermitianOperator x_half(0.5 * pauli_matrix("X"));
  const auto form = first_order_observable(z, c, {{0, x_half, 0.05}});
  EXPECT_DOUBLE_EQ(form.level, 0.05);
  ParameterVector theta(1);
  theta << 0.3;
  // i [X/2, Z] = i (-i Y) = Y.
  EXPECT_LT(max_abs(form.perturbation(theta).matrix() - pauli_matrix("Y")), 1e-15);
}

TEST(FirstOrder, ZeroAnglesGiveZeroLevel) {
  const Circuit c = random_circuit(1, 2, 1, false);
  const auto form = first_order_observable(HermitianOperator(pauli_matrix("Z")), c,
                                           {{1, HermitianOperator(pauli_matrix("X")), 0.0}});
  EXPECT_EQ(form.level, 0.0);
  EXPECT_LT(max_abs(form.perturbation(initial_parameters(c.total_params(), 0)).matrix()), 1e-15);
}

TEST(FirstOrder, ResidualIsSecondOrder) {
  const Circuit c = random_circuit(2, 2, 21, false);
  const auto theta = initial_parameters(c.total_params(), 22);
  const HermitianOperator obs = random_hermitian(QubitCount(2), 23);
  const auto rho = random_density_matrix(2, 24);
  const HermitianOperator h = random_hermitian(QubitCount(2), 25);
  auto residual = [&](double eta) {
    std::vector<CoherentError> errs{{0, h, eta}};
    const double exact = expectation(
        obs.matrix(), noisy_propagate(c, theta, NoiseModel(errs, {}), rho.matrix()));
    return std::abs(exact - first_order_observable(obs, c, errs).cost(c, theta, rho));
  };
  const double ratio = residual(1e-2) / residual(5e-3);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(Incoherent, LevelAndScale) {
  const auto ch = KrausChannel::bit_flip(QubitCount(1), 0, 0.2);
  const auto form = incoherent_to_observable(HermitianOperator(pauli_matrix("Z")), ch);
  EXPECT_DOUBLE_EQ(form.scale, 0.8);
  EXPECT_DOUBLE_EQ(form.level, 0.25);
  // X Z X = -Z
  EXPECT_LT(max_abs(form.perturbation(ParameterVector()).matrix() + pauli_matrix("Z")), 1e-15);
  EXPECT_THROW(KrausChannel::bit_flip(QubitCount(1), 0, 1.0), ValidationError);
  // Standard-form channels carry p = 1, which has no finite perturbation level.
  const auto damping = KrausChannel::amplitude_damping(QubitCount(1), 0, 0.2);
  EXPECT_THROW(incoherent_to_observable(HermitianOperator(pauli_matrix("Z")), damping),
               ValidationError);
}

TEST(Incoherent, CostIdentityOnOutputChannel) {
  const Circuit c = random_circuit(2, 2, 31, true);
  const HermitianOperator obs = random_hermitian(QubitCount(2), 32);
  const auto rho = random_density_matrix(2, 33);
  std::map<std::size_t, KrausChannel> ch;
  ch.emplace(1, KrausChannel::depolarizing(QubitCount(2), 0.3));
  const NoiseModel noise({}, ch);
  const auto form = incoherent_to_observable(obs, ch.at(1));
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto theta = initial_parameters(c.total_params(), s);
    const double noisy = expectation(obs.matrix(), noisy_propagate(c, theta, noise, rho.matrix()));
    EXPECT_NEAR(noisy, form.cost(c, theta, rho), 1e-13);
  }
}

TEST(PushChannel, MatchesInterleavedAndRejectsCoherent) {
  const QubitCount qc(2);
  const Circuit c = random_circuit(2, 3, 41, false);
  const auto theta = initial_parameters(c.total_params(), 42);
  const auto rho = random_density_matrix(2, 43);
  std::map<std::size_t, KrausChannel> ch;
  ch.emplace(0, KrausChannel::amplitude_damping(qc, 1, 0.2));
  ch.emplace(1, KrausChannel::bit_flip(qc, 0, 0.1));
  ch.emplace(2, KrausChannel::phase_flip(qc, 1, 0.3));
  const NoiseModel noise({}, ch);
  const auto pushed = push_channel_to_last(c, theta, noise);
  const Matrix clean = conjugate(unitary_matrix(c, theta), rho.matrix());
  EXPECT_LT(max_abs(pushed.apply(clean) - noisy_propagate(c, theta, noise, rho.matrix())), 1e-13);
  EXPECT_TRUE(pushed.standard_form);

  const NoiseModel mixed({{0, HermitianOperator(pauli_matrix("ZZ")), 0.1}}, ch);
  EXPECT_THROW(push_channel_to_last(c, theta, mixed), ValidationError);
}

TEST(PushChannel, ErrorProbabilitiesCompose) {
  const QubitCount one(1);
  const Circuit c = random_circuit(1, 2, 51, false);
  std::map<std::size_t, KrausChannel> ch;
  ch.emplace(0, KrausChannel::bit_flip(one, 0, 0.1));
  ch.emplace(1, KrausChannel::bit_flip(one, 0, 0.2));
  const auto pushed = push_channel_to_last(c, initial_parameters(c.total_params(), 1),
                                           NoiseModel({}, ch));
  EXPECT_NEAR(pushed.error_prob, 1.0 - 0.9 * 0.8, 1e-15);
  double total = 0.0;
  for (double w : pushed.weights) total += w;
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(PushChannel, OperatorCap) {
  // Four distinct random unitaries per layer compose into 5^L - 1 products.
  const QubitCount one(1);
  const std::size_t depth = 6;
  const Circuit c = random_circuit(1, depth, 61, false);
  std::map<std::size_t, KrausChannel> ch;
  for (std::size_t j = 0; j < depth; ++j) {
    std::vector<Matrix> ops;
    for (std::uint64_t k = 0; k < 4; ++k) {
      ops.push_back(hermitian_exp(random_hermitian(one, 10 * j + k), 1.0).matrix());
    }
    ch.emplace(j, KrausChannel::mixture(0.1, {0.25, 0.25, 0.25, 0.25}, ops));
  }
  const auto theta = initial_parameters(c.total_params(), 2);
  EXPECT_THROW(push_channel_to_last(c, theta, NoiseModel({}, ch)), ValidationError);
  ch.erase(5);
  ch.erase(4);
  EXPECT_EQ(push_channel_to_last(c, theta, NoiseModel({}, ch)).operators.size(), 624u);
}

TEST(DepthScaling, PerturbationLevel) {
  EXPECT_DOUBLE_EQ(perturbation_level_for_depth(0.5, 1), 1.0);
  EXPECT_DOUBLE_EQ(perturbation_level_for_depth(0.5, 2), 3.0);
  EXPECT_DOUBLE_EQ(perturbation_level_for_depth(0.0, 30), 0.0);
  EXPECT_THROW(perturbation_level_for_depth(1.0, 2), ValidationError);
  for (double p : {0.01, 0.2, 0.45}) {
    for (std::size_t l : {1u, 5u, 30u}) {
      EXPECT_NEAR(bit_flip_prob_for_epsilon(perturbation_level_for_depth(p, l), l), p, 1e-12);
    }
  }
}

TEST(PushCoherent, SuffixBoundaries) {
  const Circuit c = random_circuit(2, 3, 71, false);
  const auto theta = initial_parameters(c.total_params(), 72);
  const auto seg = [&](std::size_t j) {
    return theta.segment(static_cast<Eigen::Index>(c.param_offset(j)),
                         static_cast<Eigen::Index>(c.param_count(j)));
  };
  EXPECT_LT(max_abs(suffix_unitary(c, theta, 2).matrix() - layer_unitary(c.layer(2), seg(2))),
            1e-15);
  EXPECT_LT(max_abs(suffix_unitary(c, theta, 0).matrix() - unitary_matrix(c, theta)), 1e-14);
}

TEST(PushCoherent, CommutingErrorPassesThrough) {
  const QubitCount two(2);
  const Circuit c(two, {ProductLayer({HermitianOperator(pauli_matrix("XY"))}),
                        ProductLayer({HermitianOperator(pauli_matrix("ZI")),
                                      HermitianOperator(pauli_matrix("IZ"))})});
  const HermitianOperator zz(pauli_matrix("ZZ"));
  const auto hats = push_coherent_to_last(c, initial_parameters(3, 1), {{0, zz, 0.3}});
  EXPECT_LT(max_abs(hats[0].matrix() - zz.matrix()), 1e-14);
}

TEST(PushCoherent, ZeroAngleIsClean) {
  const Circuit c = random_circuit(2, 2, 81, true);
  const auto theta = initial_parameters(c.total_params(), 82);
  const Matrix w = pushed_error_unitary(c, theta, {{0, random_hermitian(QubitCount(2), 1), 0.0}});
  EXPECT_LT(max_abs(w - Matrix::Identity(4, 4)), 1e-15);
}

TEST(FirstOrder, ErrorEqualToObservableHasNoEffect) {
  const Circuit c = random_circuit(2, 2, 91, false);
  const HermitianOperator obs = random_hermitian(QubitCount(2), 92);
  const auto rho = random_density_matrix(2, 93);
  const auto form = first_order_observable(obs, c, {{1, obs, 0.05}});
  const auto theta = initial_parameters(c.total_params(), 94);
  EXPECT_NEAR(form.cost(c, theta, rho), expectation(obs, apply(c, theta, rho)), 1e-14);
}

TEST(FirstOrder, SingleQubitRatioAfterIdentityCircuit) {
  const QubitCount one(1);
  const Circuit c(one, {ProductLayer({HermitianOperator(pauli_matrix("Z"))})});
  const ParameterVector theta = ParameterVector::Zero(1);
  const HermitianOperator z(pauli_matrix("Z"));
  const HermitianOperator x(pauli_matrix("X"));
  // Bloch vector with both Y and Z parts: the Y part drives the linear term,
  // the Z part keeps the quadratic remainder alive. A pure |+i> would cancel
  // it and leave a cubic residual.
  const Matrix bloch = 0.6 * pauli_matrix("Y") + 0.6 * pauli_matrix("Z");
  const DensityMatrix rho(0.5 * (Matrix::Identity(2, 2) + bloch));
  auto residual = [&](double eta) {
    std::vector<CoherentError> errs{{0, x, eta}};
    const double exact = expectation(
        z.matrix(), noisy_propagate(c, theta, NoiseModel(errs, {}), rho.matrix()));
    return std::abs(exact - first_order_observable(z, c, errs).cost(c, theta, rho));
  };
  const double ratio = residual(2e-2) / residual(1e-2);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(Incoherent, BitFlipOnZ) {
  const QubitCount one(1);
  const Circuit c(one, {ProductLayer({HermitianOperator(0.5 * pauli_matrix("Y"))})});
  const HermitianOperator z(pauli_matrix("Z"));
  const auto rho0 = DensityMatrix::basis_state(one, 0);
  const double p = 0.2;
  const auto form = incoherent_to_observable(z, KrausChannel::bit_flip(one, 0, p));
  ParameterVector t(1);
  t << 0.8;
  EXPECT_NEAR(form.cost(c, t, rho0), (1.0 - 2 * p) * std::cos(0.8), 1e-15);

  const auto none = incoherent_to_observable(z, KrausChannel::bit_flip(one, 0, 0.0));
  EXPECT_EQ(none.level, 0.0);
  EXPECT_NEAR(none.cost(c, t, rho0), std::cos(0.8), 1e-15);
  EXPECT_DOUBLE_EQ(incoherent_to_observable(z, KrausChannel::bit_flip(one, 0, 0.5)).level, 1.0);
}

TEST(PushChannel, LastLayerChannelIsUnchanged) {
  const QubitCount one(1);
  const Circuit c = random_circuit(1, 2, 95, false);
  std::map<std::size_t, KrausChannel> ch;
  ch.emplace(1, KrausChannel::bit_flip(one, 0, 0.1));
  const auto pushed = push_channel_to_last(c, initial_parameters(c.total_params(), 3),
                                           NoiseModel({}, ch));
  EXPECT_DOUBLE_EQ(pushed.error_prob, 0.1);
  ASSERT_EQ(pushed.operators.size(), 1u);
  EXPECT_LT(max_abs(pushed.operators[0] - pauli_matrix("X")), 1e-15);
}

TEST(PushChannel, EqualProbabilitiesCompose) {
  const QubitCount one(1);
  const Circuit c = random_circuit(1, 2, 96, false);
  const auto theta = initial_parameters(c.total_params(), 4);
  std::map<std::size_t, KrausChannel> ch;
  ch.emplace(0, KrausChannel::bit_flip(one, 0, 0.1));
  ch.emplace(1, KrausChannel::bit_flip(one, 0, 0.1));
  const NoiseModel noise({}, ch);
  const auto pushed = push_channel_to_last(c, theta, noise);
  EXPECT_NEAR(pushed.error_prob, 0.19, 1e-15);
  const auto rho = random_density_matrix(1, 5);
  EXPECT_LT(max_abs(pushed.apply(conjugate(unitary_matrix(c, theta), rho.matrix())) -
                    noisy_propagate(c, theta, noise, rho.matrix())),
            1e-14);
}

TEST(DepthScaling, SmallProbabilityIsLinear) {
  EXPECT_DOUBLE_EQ(perturbation_level_for_depth(0.3, 0), 0.0);
  EXPECT_NEAR(perturbation_level_for_depth(0.1, 2), 1.0 / 0.81 - 1.0, 1e-15);
  EXPECT_NEAR(perturbation_level_for_depth(0.1, 2), 0.234568, 1e-6);
  for (double p : {1e-4, 1e-3, 5e-3}) {
    for (std::size_t l : {1u, 3u, 10u}) {
      if (p * static_cast<double>(l) > 0.05) continue;
      const double eps = perturbation_level_for_depth(p, l);
      EXPECT_LT(std::abs(eps - p * static_cast<double>(l)), 0.05 * p * static_cast<double>(l));
    }
  }
}

}  // namespace
}  // namespace noisyvqe
