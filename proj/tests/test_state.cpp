#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcbind/errors.hpp"
#include "qcbind/state.hpp"
#include "support/dense_oracle.hpp"
#include "support/synthetic.hpp"

using namespace qcbind;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("RX(0) leaves any state unchanged") {
    Rng rng(21);
    const StateVector state = testsupport::random_state(rng, 3);
    const StateVector out = apply_gate(state, Gate::rx(1, -1), 0.0);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        CHECK(std::abs(out.amps[i] - state.amps[i]) < 1e-15);
    }
}

TEST_CASE("RX(pi) on |0> gives amplitude -i on |1>") {
    const StateVector out = apply_gate(StateVector::zero(1), Gate::rx(0, -1), pi);
    CHECK(std::abs(out.amps[0]) < 1e-15);
    CHECK(out.amps[1].real() == Approx(0.0).epsilon(1e-15));
    CHECK(out.amps[1].imag() == Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("CNOT truth table: control 1, target 0 maps |10> to |11>") {
    const StateVector out = apply_gate(StateVector::basis(2, 0b10), Gate::cnot(1, 0), 0.0);
    CHECK(std::abs(out.amps[0b11] - c64{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(out.amps[0b10]) < 1e-15);
}

TEST_CASE("gate application validates its inputs") {
    const StateVector state = StateVector::zero(2);
    CHECK_THROWS_AS(apply_gate(state, Gate::rx(2, -1), 0.1), structural_error);
    CHECK_THROWS_AS(apply_gate(state, Gate::cnot(3, 0), 0.0), structural_error);
    CHECK_THROWS_AS(apply_gate(state, Gate::cnot(1, 1), 0.0), structural_error);
    CHECK_THROWS_AS(apply_gate(state, Gate::rx(0, -1), std::nan("")), input_error);
    CHECK_THROWS_AS(apply_gate(state, Gate::rz(0, -1),
                               std::numeric_limits<double>::infinity()),
                    input_error);
}

TEST_CASE("single-qubit gates match their dense embeddings") {
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 4);
        const StateVector state = testsupport::random_state(rng, n);
        CircuitSpec circuit = testsupport::random_circuit(rng, n, 8);
        const std::vector<double> params = testsupport::random_angles(rng, circuit.n_params);

        const StateVector kernel_out = apply_circuit(state, circuit, params);
        const auto dense =
            testsupport::apply_dense(testsupport::circuit_unitary(circuit, params, n), state.amps);
        for (std::size_t i = 0; i < kernel_out.dim(); ++i) {
            CHECK(std::abs(kernel_out.amps[i] - dense[i]) < 1e-13);
        }
    }
}

TEST_CASE("norm is preserved by random circuits") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector state = testsupport::random_state(rng, 9);
        const CircuitSpec circuit = testsupport::random_circuit(rng, 9, 60);
        const std::vector<double> params = testsupport::random_angles(rng, circuit.n_params);
        const StateVector out = apply_circuit(state, circuit, params);
        CHECK(std::abs(out.norm_sq() - 1.0) < 1e-10);
    }
}

TEST_CASE("apply_circuit rejects a parameter-count mismatch and empty circuits pass through") {
    const StateVector state = StateVector::zero(2);
    CircuitSpec empty;
    empty.n_qubits = 2;
    const StateVector out = apply_circuit(state, empty, {});
    CHECK(out.amps == state.amps);

    CircuitSpec one;
    one.n_qubits = 2;
    one.gates.push_back(Gate::rx(0, 0));
    one.n_params = 1;
    CHECK_THROWS_AS(apply_circuit(state, one, {}), input_error);

    // single-gate circuit equals apply_gate
    const double theta = 0.731;
    const std::vector<double> params{theta};
    const StateVector a = apply_circuit(state, one, params);
    const StateVector b = apply_gate(state, one.gates[0], theta);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        CHECK(a.amps[i] == b.amps[i]);
    }
}

TEST_CASE("to_density forms the outer product") {
    SUBCASE("|0>") {
        const DensityMatrix rho = to_density(StateVector::zero(1));
        CHECK(rho.at(0, 0) == c64{1.0, 0.0});
        CHECK(rho.at(0, 1) == c64{});
        CHECK(rho.at(1, 0) == c64{});
        CHECK(rho.at(1, 1) == c64{});
    }
    SUBCASE("(|0>+|1>)/sqrt(2) has four 0.5 entries") {
        const double inv = 1.0 / std::sqrt(2.0);
        const StateVector plus =
            StateVector::from_amplitudes(1, {c64{inv, 0.0}, c64{inv, 0.0}});
        const DensityMatrix rho = to_density(plus);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) {
                CHECK(rho.at(r, c).real() == Approx(0.5).epsilon(1e-15));
                CHECK(rho.at(r, c).imag() == Approx(0.0).epsilon(1e-15));
            }
    }
    SUBCASE("trace is 1 for any normalized state") {
        Rng rng(24);
        const DensityMatrix rho = to_density(testsupport::random_state(rng, 5));
        CHECK(rho.trace_real() == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero noise reduces the density path to the pure path") {
    Rng rng(25);
    const NoiseSpec none{0.0, 0.0};
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 3);
        const StateVector state = testsupport::random_state(rng, n);
        const CircuitSpec circuit = testsupport::random_circuit(rng, n, 6);
        const std::vector<double> params = testsupport::random_angles(rng, circuit.n_params);

        DensityMatrix rho = to_density(state);
        StateVector psi = state;
        for (const Gate& gate : circuit.gates) {
            const double theta = detail::gate_theta(gate, params);
            rho = apply_gate_noisy(rho, gate, theta, none);
            psi = apply_gate(psi, gate, theta);
        }
        const DensityMatrix expected = to_density(psi);
        for (std::size_t i = 0; i < rho.rho.size(); ++i) {
            CHECK(std::abs(rho.rho[i] - expected.rho[i]) < 1e-10);
        }
    }
}

TEST_CASE("full amplitude damping sends |1> to |0>") {
    const DensityMatrix rho = to_density(StateVector::basis(1, 1));
    const DensityMatrix out = apply_gate_noisy(rho, Gate::rz(0, -1), 0.0, NoiseSpec{1.0, 0.0});
    CHECK(out.at(0, 0).real() == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(out.at(1, 1)) < 1e-14);
    CHECK(std::abs(out.at(0, 1)) < 1e-14);
}

TEST_CASE("depolarizing at p = 3/4 is the maximally mixed fixed point") {
    Rng rng(26);
    const DensityMatrix rho = to_density(testsupport::random_state(rng, 1));
    const DensityMatrix out = apply_gate_noisy(rho, Gate::rz(0, -1), 0.0, NoiseSpec{0.0, 0.75});
    CHECK(out.at(0, 0).real() == Approx(0.5).epsilon(1e-14));
    CHECK(out.at(1, 1).real() == Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(out.at(0, 1)) < 1e-14);
    CHECK(std::abs(out.at(1, 0)) < 1e-14);
}

TEST_CASE("noisy evolution preserves trace, Hermiticity and positivity") {
    Rng rng(27);
    const NoiseSpec noise{0.02, 0.01};
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 3);
        const CircuitSpec circuit = testsupport::random_circuit(rng, n, 10);
        const std::vector<double> params = testsupport::random_angles(rng, circuit.n_params);

        DensityMatrix rho = to_density(testsupport::random_state(rng, n));
        for (const Gate& gate : circuit.gates) {
            rho = apply_gate_noisy(rho, gate, detail::gate_theta(gate, params), noise);
            CHECK(std::abs(rho.trace_real() - 1.0) < 1e-9);
            const std::size_t dim = rho.dim();
            for (std::size_t r = 0; r < dim; ++r) {
                for (std::size_t c = 0; c < dim; ++c) {
                    CHECK(std::abs(rho.at(r, c) - std::conj(rho.at(c, r))) < 1e-10);
                }
            }
        }
        for (double eig : testsupport::hermitian_eigenvalues(rho.rho, rho.dim())) {
            CHECK(eig > -1e-8);
        }
    }
}

TEST_CASE("noise parameters are validated") {
    const DensityMatrix rho = to_density(StateVector::zero(1));
    CHECK_THROWS_AS(apply_gate_noisy(rho, Gate::rz(0, -1), 0.0, NoiseSpec{-0.1, 0.0}),
                    input_error);
    CHECK_THROWS_AS(apply_gate_noisy(rho, Gate::rz(0, -1), 0.0, NoiseSpec{0.0, 1.5}),
                    input_error);
}

TEST_CASE("marginal of qubit 0") {
    SUBCASE("|0...0> is (1, 0)") {
        const auto [y0, y1] = marginal_prob_qubit0(StateVector::zero(9));
        CHECK(y0 == 1.0);
        CHECK(y1 == 0.0);
    }
    SUBCASE("uniform superposition over 512 basis states is (0.5, 0.5)") {
        std::vector<c64> amps(512, c64{1.0 / std::sqrt(512.0), 0.0});
        const auto [y0, y1] = marginal_prob_qubit0(StateVector::from_amplitudes(9, amps));
        CHECK(y0 == Approx(0.5).epsilon(1e-12));
        CHECK(y1 == Approx(0.5).epsilon(1e-12));
        CHECK(y0 + y1 == Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("RX(theta) from |0> gives y0 = cos^2(theta/2)") {
        for (double theta : {0.3, 1.1, 2.7}) {
            const StateVector out = apply_gate(StateVector::zero(4), Gate::rx(0, -1), theta);
            const auto [y0, y1] = marginal_prob_qubit0(out);
            CHECK(y0 == Approx(std::cos(theta / 2.0) * std::cos(theta / 2.0)).epsilon(1e-12));
        }
    }
    SUBCASE("even basis index always measures 0") {
        for (std::size_t index : {0u, 2u, 6u, 510u}) {
            const auto [y0, y1] = marginal_prob_qubit0(StateVector::basis(9, index));
            CHECK(y0 == 1.0);
            CHECK(y1 == 0.0);
        }
    }
    SUBCASE("density marginal agrees with the pure marginal") {
        Rng rng(28);
        const StateVector state = testsupport::random_state(rng, 4);
        const auto [py0, py1] = marginal_prob_qubit0(state);
        const auto [dy0, dy1] = marginal_prob_qubit0(to_density(state));
        CHECK(dy0 == Approx(py0).epsilon(1e-12));
        CHECK(dy1 == Approx(py1).epsilon(1e-12));
    }
}

TEST_CASE("memory guardrails raise capacity errors") {
    CHECK_THROWS_AS(StateVector::zero(25), capacity_error);
    CHECK_THROWS_AS(DensityMatrix::zero(13), capacity_error);
    CHECK_THROWS_AS(to_density(StateVector::zero(13)), capacity_error);
    CHECK_NOTHROW(StateVector::zero(12));
}
