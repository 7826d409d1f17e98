#include "qcbind/circuit.hpp"

#include <numbers>

#include "qcbind/errors.hpp"
#include "qcbind/rng.hpp"

namespace qcbind {

std::vector<Gate> build_lpar(int unit_index) {
    if (unit_index < 0) {
        throw input_error("build_lpar: unit_index must be non-negative");
    }
    std::vector<Gate> gates;
    gates.reserve(2 * model_qubits);
    const int base = unit_index * params_per_unit;
    for (int q = 0; q < model_qubits; ++q) {
        gates.push_back(Gate::rx(q, base + 2 * q));
        gates.push_back(Gate::rz(q, base + 2 * q + 1));
    }
    return gates;
}

std::vector<Gate> build_lbreaker(int n) {
    if (n < 0 || n >= model_qubits) {
        throw input_error("build_lbreaker: variant index must lie in 0..8");
    }
    std::array<int, 8> q{};
    int w = 0;
    for (int i = 0; i < model_qubits; ++i) {
        if (i != n) q[w++] = i;
    }
    std::vector<Gate> gates;
    gates.reserve(8);
    for (int i = 0; i < 4; ++i) {
        gates.push_back(Gate::cnot(q[i + 4], q[i]));
    }
    for (int i = 0; i < 4; ++i) {
        gates.push_back(Gate::cnot(q[i], q[i + 4]));
    }
    return gates;
}

CircuitSpec build_model(int n_units) {
    if (n_units < 1 || n_units > 10) {
        throw input_error("build_model: unit count must lie in 1..10");
    }
    CircuitSpec spec;
    spec.n_qubits = model_qubits;
    spec.n_params = n_units * params_per_unit;
    spec.gates.reserve(static_cast<std::size_t>(n_units) * 26);
    for (int u = 0; u < n_units; ++u) {
        for (const Gate& g : build_lpar(u)) spec.gates.push_back(g);
        for (const Gate& g : build_lbreaker(u % model_qubits)) spec.gates.push_back(g);
    }
    return spec;
}

namespace detail {

double gate_theta(const Gate& gate, std::span<const double> params) {
    return gate.param_slot >= 0 ? params[static_cast<std::size_t>(gate.param_slot)] : 0.0;
}

void apply_circuit_inplace(c64* amps, std::size_t dim, const CircuitSpec& circuit,
                           std::span<const double> params, Exec exec) {
    for (const Gate& gate : circuit.gates) {
        apply_gate_inplace(amps, dim, gate, gate_theta(gate, params), exec);
    }
}

} // namespace detail

StateVector apply_circuit(const StateVector& state, const CircuitSpec& circuit,
                          std::span<const double> params, Exec exec) {
    if (static_cast<int>(params.size()) != circuit.n_params) {
        throw input_error("apply_circuit: expected " + std::to_string(circuit.n_params) +
                          " parameters, got " + std::to_string(params.size()));
    }
    for (const Gate& gate : circuit.gates) {
        detail::check_gate(gate, state.n_qubits, detail::gate_theta(gate, params));
    }
    StateVector out = state;
    detail::apply_circuit_inplace(out.amps.data(), out.dim(), circuit, params, exec);
    return out;
}

std::vector<double> init_params(int n_params, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> params(static_cast<std::size_t>(n_params));
    for (double& p : params) {
        p = rng.next_in(-std::numbers::pi, std::numbers::pi);
    }
    return params;
}

std::uint64_t topology_hash(const std::vector<Gate>& gates) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (v >> (8 * byte)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (const Gate& g : gates) {
        mix(static_cast<std::uint64_t>(g.kind));
        mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(g.target)));
        mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(g.control)));
        mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(g.param_slot)));
    }
    return h;
}

} // namespace qcbind
