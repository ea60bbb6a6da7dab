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
#include <numbers>

#include "noisyvqe/errors.hpp"
#include "noisyvqe/experiments.hpp"
#include "noisyvqe/noise.hpp"

namespace noisyvqe {
namespace {

Matrix ket0() { return DensityMatrix::basis_state(QubitCount(1), 0).matrix(); }
Matrix ket1() { return DensityMatrix::basis_state(QubitCount(1), 1).matrix(); }

TEST(BitFlip, ExplicitAction) {
  const auto ch = KrausChannel::bit_flip(QubitCount(1), 0, 0.2);
  const Matrix out = ch.apply(ket0());
  EXPECT_NEAR(out(0, 0).real(), 0.8, 1e-15);
  EXPECT_NEAR(out(1, 1).real(), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(ch.error_prob(), 0.2);
}

TEST(PhaseFlip, DampsCoherences) {
  const auto ch = KrausChannel::phase_flip(QubitCount(1), 0, 0.25);
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  const Matrix out = ch.apply(plus);
  EXPECT_NEAR(out(0, 1).real(), 0.25, 1e-15);
  EXPECT_NEAR(out(0, 0).real(), 0.5, 1e-15);
}

TEST(Depolarizing, MatchesClosedForm) {
  for (int n = 1; n <= 2; ++n) {
    const QubitCount qc(n);
    const Matrix rho = random_density_matrix(n, 9).matrix();
    const double p = 0.37;
    const Matrix expected =
        (1.0 - p) * rho + p * Matrix::Identity(qc.dim(), qc.dim()) / static_cast<double>(qc.dim());
    const auto ch = KrausChannel::depolarizing(qc, p);
    EXPECT_LT(max_abs(ch.apply(rho) - expected), 1e-14);
    // The explicit twirl over the stored operators agrees with the fast path.
    Matrix twirl = Matrix::Zero(qc.dim(), qc.dim());
    for (std::size_t k = 0; k < ch.operators().size(); ++k) {
      twirl += ch.weights()[k] * ch.operators()[k] * rho * ch.operators()[k].adjoint();
    }
    EXPECT_LT(max_abs((1.0 - p) * rho + p * twirl - expected), 1e-14);
  }
}

TEST(AmplitudeDamping, DecaysExcitedState) {
  const auto ch = KrausChannel::amplitude_damping(QubitCount(1), 0, 0.3);
  EXPECT_EQ(ch.form(), KrausChannel::Form::standard);
  const Matrix out = ch.apply(ket1());
  EXPECT_NEAR(out(0, 0).real(), 0.3, 1e-15);
  EXPECT_NEAR(out(1, 1).real(), 0.7, 1e-15);
  EXPECT_LT(max_abs(ch.apply(ket0()) - ket0()), 1e-15);
  EXPECT_THROW(KrausChannel::amplitude_damping(QubitCount(1), 1, 0.3), ValidationError);
}

TEST(Channel, AdjointDuality) {
  const QubitCount qc(2);
  const Matrix rho = random_density_matrix(2, 4).matrix();
  const Matrix obs = random_hermitian(qc, 6).matrix();
  for (const auto &ch : {KrausChannel::bit_flip(qc, 1, 0.1), KrausChannel::depolarizing(qc, 0.4),
                         KrausChannel::amplitude_damping(qc, 0, 0.2)}) {
    EXPECT_NEAR(expectation(obs, ch.apply(rho)), expectation(ch.apply_adjoint(obs), rho), 1e-13)
        << ch.name();
  }
}

TEST(Channel, Validation) {
  const Matrix x = pauli_matrix("X");
  EXPECT_THROW(KrausChannel::mixture(1.5, {1.0}, {x}), ValidationError);
  EXPECT_THROW(KrausChannel::mixture(-0.1, {1.0}, {x}), ValidationError);
  EXPECT_THROW(KrausChannel::mixture(0.1, {0.45, 0.45}, {x, x}), ValidationError);
  EXPECT_THROW(KrausChannel::mixture(0.1, {1.0}, {2.0 * x}), ValidationError);
  EXPECT_THROW(KrausChannel::mixture(0.1, {0.5}, {x, x}), ValidationError);
  // Not trace preserving: E = diag(1, 0) in mixture form.
  Matrix proj = Matrix::Zero(2, 2);
  proj(0, 0) = 1.0;
  EXPECT_THROW(KrausChannel::mixture(0.3, {1.0}, {proj}), ValidationError);
  EXPECT_THROW(KrausChannel::standard({proj}), ValidationError);
  EXPECT_THROW(KrausChannel::bit_flip(QubitCount(1), 0, 1.2), ValidationError);
}

TEST(Channel, ThetaDependentOperators) {
  auto fn = [](const ParameterVector &theta) {
    return std::vector<Matrix>{hermitian_exp(HermitianOperator(pauli_matrix("X")), theta(0))
                                   .matrix()};
  };
  const auto ch = KrausChannel::parameterized(0.5, {1.0}, fn, 2);
  EXPECT_TRUE(ch.depends_on_theta());
  EXPECT_THROW(ch.operators(), ValidationError);
  ParameterVector theta(1);
  theta << 0.4;
  const Matrix u = fn(theta)[0];
  EXPECT_LT(max_abs(ch.apply(ket0(), theta) - (0.5 * ket0() + 0.5 * u * ket0() * u.adjoint())),
            1e-15);
}

TEST(ControlErrors, CostMap) {
  RealVector eta(3);
  eta << 0.1, -0.5, 0.0;
  ParameterVector theta(3);
  theta << 1.0, 2.0, 3.0;
  const auto mapped = control_error_cost_map(theta, ControlErrorSpec(eta));
  EXPECT_DOUBLE_EQ(mapped(0), 1.1);
  EXPECT_DOUBLE_EQ(mapped(1), 1.0);
  EXPECT_DOUBLE_EQ(mapped(2), 3.0);
  RealVector bad(1);
  bad << -1.0;
  EXPECT_THROW(ControlErrorSpec{bad}, ValidationError);
  EXPECT_THROW(control_error_cost_map(ParameterVector::Zero(2), ControlErrorSpec(eta)),
               ValidationError);
}

TEST(NoiseModel, Validation) {
  const Circuit product = build_hardware_efficient(2, 2);
  const Circuit sun = build_sun(2, 1);
  const QubitCount qc(2);
  std::map<std::size_t, KrausChannel> far;
  far.emplace(5, KrausChannel::bit_flip(qc, 0, 0.1));
  EXPECT_THROW(NoiseModel({}, far).validate_for(product), ValidationError);
  const NoiseModel control({}, {}, ControlErrorSpec(RealVector::Constant(30, 0.1)));
  EXPECT_THROW(control.validate_for(sun), ValidationError);
  std::map<std::size_t, KrausChannel> one;
  one.emplace(0, KrausChannel::bit_flip(qc, 0, 0.1));
  EXPECT_THROW(NoiseModel({}, one, ControlErrorSpec(RealVector::Constant(10, 0.1))),
               ValidationError);
  EXPECT_NO_THROW(NoiseModel({}, one, ControlErrorSpec(RealVector::Constant(10, 0.1)), true)
                      .validate_for(product));
}

TEST(NoisyPropagate, EmptyModelIsClean) {
  const Circuit c = random_circuit(2, 2, 3, false);
  const auto theta = initial_parameters(c.total_params(), 4);
  const auto rho = random_density_matrix(2, 5);
  EXPECT_LT(max_abs(noisy_apply(c, theta, NoiseModel(), rho).matrix() -
                    apply(c, theta, rho).matrix()),
            1e-14);
}

TEST(NoisyPropagate, ErrorActsAfterItsLayer) {
  const QubitCount one(1);
  const Circuit c(one, {ProductLayer({HermitianOperator(0.5 * pauli_matrix("Y"))})});
  ParameterVector theta(1);
  theta << 0.9;
  const CoherentError e{0, HermitianOperator(0.5 * pauli_matrix("Z")), 0.4};
  const Matrix u = layer_unitary(c.layer(0), theta);
  const Matrix expected = conjugate(e.unitary() * u, ket0());
  EXPECT_LT(max_abs(noisy_propagate(c, theta, NoiseModel({e}, {}), ket0()) - expected), 1e-15);
}

TEST(DepthScaling, BitFlipProbability) {
  EXPECT_NEAR(bit_flip_prob_for_epsilon(1.0, 1), 0.5, 1e-15);
  EXPECT_NEAR(bit_flip_prob_for_epsilon(3.0, 2), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(bit_flip_prob_for_epsilon(0.0, 7), 0.0);
  EXPECT_THROW(bit_flip_prob_for_epsilon(-0.1, 2), ValidationError);
  EXPECT_THROW(bit_flip_prob_for_epsilon(0.1, 0), ValidationError);
}

TEST(SplitIntoGates, SameUnitaryAndParameterOrder) {
  const Circuit c = build_hardware_efficient(2, 2);
  const Circuit split = split_into_gates(c);
  EXPECT_EQ(split.total_params(), c.total_params());
  EXPECT_EQ(split.depth(), c.total_params());
  const auto theta = initial_parameters(c.total_params(), 8);
  EXPECT_LT(max_abs(unitary_matrix(split, theta) - unitary_matrix(c, theta)), 1e-13);
  // SU(N) layers have no gate structure and stay whole.
  EXPECT_EQ(split_into_gates(build_sun(1, 2)).depth(), 2u);
}

TEST(Channel, ZeroProbabilityIsIdentity) {
  const Matrix rho = random_density_matrix(2, 3).matrix();
  EXPECT_LT(max_abs(KrausChannel::depolarizing(QubitCount(2), 0.0).apply(rho) - rho), 1e-15);
  EXPECT_LT(max_abs(KrausChannel::bit_flip(QubitCount(2), 1, 0.0).apply(rho) - rho), 1e-15);
}

TEST(NoisyPropagate, ZeroAngleErrorIsClean) {
  const Circuit c = random_circuit(2, 2, 4, true);
  const auto theta = initial_parameters(c.total_params(), 5);
  const auto rho = random_density_matrix(2, 6);
  const NoiseModel zero({{1, random_hermitian(QubitCount(2), 7), 0.0}}, {});
  EXPECT_LT(max_abs(noisy_apply(c, theta, zero, rho).matrix() - apply(c, theta, rho).matrix()),
            1e-15);
}

TEST(NoisyPropagate, OutputBitFlipShrinksZ) {
  const QubitCount one(1);
  const Circuit c(one, {ProductLayer({HermitianOperator(0.5 * pauli_matrix("Y"))})});
  std::map<std::size_t, KrausChannel> ch;
  ch.emplace(0, KrausChannel::bit_flip(one, 0, 0.15));
  const NoiseModel noise({}, ch);
  const HermitianOperator z(pauli_matrix("Z"));
  const auto rho0 = DensityMatrix::basis_state(one, 0);
  for (double t : {0.2, 1.4, 2.9}) {
    ParameterVector theta(1);
    theta << t;
    EXPECT_NEAR(expectation(z, noisy_apply(c, theta, noise, rho0)),
                (1.0 - 2 * 0.15) * expectation(z, apply(c, theta, rho0)), 1e-15);
  }
}

TEST(ControlErrors, ArithmeticAndRelocatedMinimum) {
  ParameterVector theta(1);
  theta << std::numbers::pi;
  const ControlErrorSpec eta(RealVector::Constant(1, 0.1));
  EXPECT_NEAR(control_error_cost_map(theta, eta)(0), 1.1 * std::numbers::pi, 1e-15);
  EXPECT_EQ(control_error_cost_map(theta, ControlErrorSpec(RealVector::Zero(1))), theta);

  const VQEProblem clean = make_single_qubit_rotation();
  const VQEProblem noisy = clean.with_noise(NoiseModel({}, {}, eta));
  ParameterVector moved(1);
  moved << std::numbers::pi / 1.1;
  EXPECT_NEAR(cost(noisy, moved), cost(clean, theta), 1e-15);
  EXPECT_NEAR(cost(noisy, moved), 0.0, 1e-15);
}

TEST(DepthScaling, BitFlipExamples) {
  EXPECT_NEAR(bit_flip_prob_for_epsilon(0.21, 2), 1.0 - 1.0 / 1.1, 1e-15);
  EXPECT_NEAR(bit_flip_prob_for_epsilon(0.21, 2), 0.0909090909, 1e-10);
}

}  // namespace
}  // namespace noisyvqe
