#include "qcbind/grad.hpp"

#include <cmath>
#include <string>

#include "qcbind/errors.hpp"

namespace qcbind {

namespace {

void check_inputs(const CircuitSpec& circuit, std::span<const double> params,
                  const StateVector& input) {
    if (static_cast<int>(params.size()) != circuit.n_params) {
        throw input_error("expected " + std::to_string(circuit.n_params) + " parameters, got " +
                          std::to_string(params.size()));
    }
    for (const Gate& gate : circuit.gates) {
        detail::check_gate(gate, input.n_qubits, detail::gate_theta(gate, params));
    }
}

double observable_from_state(const c64* amps, std::size_t dim, Exec exec) {
    const double y0 = kernels::sum_abs2_bit(amps, dim, 0, 0, exec);
    const double y1 = kernels::sum_abs2_bit(amps, dim, 0, 1, exec);
    return readout_scale * (y0 - y1);
}

/// lambda <- scale * Z0 * psi  (diagonal observable, sign by bit 0).
void apply_observable(std::vector<c64>& out, const std::vector<c64>& psi) {
    out.resize(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        out[i] = (i & 1u) ? -readout_scale * psi[i] : readout_scale * psi[i];
    }
}

/// tmp <- G * psi with generator G = X (RX) or Z (RZ) on the gate's target.
void apply_generator(std::vector<c64>& tmp, const std::vector<c64>& psi, const Gate& gate) {
    const std::size_t bit = std::size_t{1} << gate.target;
    tmp.resize(psi.size());
    if (gate.kind == GateKind::RX) {
        for (std::size_t i = 0; i < psi.size(); ++i) {
            tmp[i] = psi[i ^ bit];
        }
    } else {
        for (std::size_t i = 0; i < psi.size(); ++i) {
            tmp[i] = (i & bit) ? -psi[i] : psi[i];
        }
    }
}

} // namespace

double forward(const CircuitSpec& circuit, std::span<const double> params,
               const StateVector& input, Exec exec) {
    check_inputs(circuit, params, input);
    StateVector state = input;
    detail::apply_circuit_inplace(state.amps.data(), state.dim(), circuit, params, exec);
    return observable_from_state(state.amps.data(), state.dim(), exec);
}

GradientResult backward_adjoint(const CircuitSpec& circuit, std::span<const double> params,
                                const StateVector& input, Exec exec) {
    check_inputs(circuit, params, input);
    const std::size_t dim = input.dim();

    // Forward pass to the final state.
    std::vector<c64> ket = input.amps;
    detail::apply_circuit_inplace(ket.data(), dim, circuit, params, exec);

    GradientResult result;
    result.value = observable_from_state(ket.data(), dim, exec);
    result.grad.assign(static_cast<std::size_t>(circuit.n_params), 0.0);

    std::vector<c64> bra;
    apply_observable(bra, ket);

    // Reverse sweep. With ket = psi_k and bra = (U_L..U_{k+1})^dag O psi_L,
    // dU/dtheta = -(i/2) G U gives grad_k = Im(<bra| G |ket>).
    std::vector<c64> tmp;
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        const Gate& gate = *it;
        const double theta = detail::gate_theta(gate, params);
        if (gate.param_slot >= 0) {
            apply_generator(tmp, ket, gate);
            const c64 overlap = kernels::inner_product(bra.data(), tmp.data(), dim, exec);
            result.grad[static_cast<std::size_t>(gate.param_slot)] = overlap.imag();
        }
        detail::apply_gate_inverse_inplace(ket.data(), dim, gate, theta, exec);
        detail::apply_gate_inverse_inplace(bra.data(), dim, gate, theta, exec);
    }
    return result;
}

GradientResult backward_parameter_shift(const CircuitSpec& circuit, std::span<const double> params,
                                        const StateVector& input, Exec exec) {
    check_inputs(circuit, params, input);
    GradientResult result;
    result.value = forward(circuit, params, input, exec);
    result.grad.assign(static_cast<std::size_t>(circuit.n_params), 0.0);

    std::vector<double> shifted(params.begin(), params.end());
    constexpr double half_pi = 1.5707963267948966;
    for (int k = 0; k < circuit.n_params; ++k) {
        const std::size_t sk = static_cast<std::size_t>(k);
        const double original = shifted[sk];
        shifted[sk] = original + half_pi;
        const double plus = forward(circuit, shifted, input, exec);
        shifted[sk] = original - half_pi;
        const double minus = forward(circuit, shifted, input, exec);
        shifted[sk] = original;
        result.grad[sk] = (plus - minus) / 2.0;
    }
    return result;
}

GradientResult backward_finite_diff(const CircuitSpec& circuit, std::span<const double> params,
                                    const StateVector& input, double h, Exec exec) {
    if (!(h > 0.0 && h <= 0.1)) {
        throw input_error("finite-difference step must lie in (0, 0.1]");
    }
    check_inputs(circuit, params, input);
    GradientResult result;
    result.value = forward(circuit, params, input, exec);
    result.grad.assign(static_cast<std::size_t>(circuit.n_params), 0.0);

    std::vector<double> shifted(params.begin(), params.end());
    for (int k = 0; k < circuit.n_params; ++k) {
        const std::size_t sk = static_cast<std::size_t>(k);
        const double original = shifted[sk];
        shifted[sk] = original + h;
        const double plus = forward(circuit, shifted, input, exec);
        shifted[sk] = original - h;
        const double minus = forward(circuit, shifted, input, exec);
        shifted[sk] = original;
        result.grad[sk] = (plus - minus) / (2.0 * h);
    }
    return result;
}

} // namespace qcbind
