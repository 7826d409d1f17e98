#include "qcbind/infer.hpp"

#include <cmath>
#include <string>

#include "qcbind/errors.hpp"
#include "qcbind/rng.hpp"

namespace qcbind {

double predict_full(const CircuitSpec& circuit, std::span<const double> params,
                    const StateVector& input, Exec exec) {
    return forward(circuit, params, input, exec);
}

double predict_shots(const CircuitSpec& circuit, std::span<const double> params,
                     const StateVector& input, const ShotConfig& cfg, Exec exec) {
    if (cfg.n_shots < 1) {
        throw input_error("predict_shots: shot count must be at least 1");
    }
    const StateVector state = apply_circuit(input, circuit, params, exec);
    const double y0 = marginal_prob_qubit0(state, exec).first;
    Rng rng(cfg.seed);
    const double estimate =
        static_cast<double>(rng.binomial(cfg.n_shots, y0)) / static_cast<double>(cfg.n_shots);
    return readout_scale * (2.0 * estimate - 1.0);
}

double predict_noisy(const CircuitSpec& circuit, std::span<const double> params,
                     const StateVector& input, const NoiseSpec& noise, Exec exec) {
    if (static_cast<int>(params.size()) != circuit.n_params) {
        throw input_error("predict_noisy: parameter count mismatch");
    }
    noise.validate();
    for (const Gate& gate : circuit.gates) {
        detail::check_gate(gate, input.n_qubits, detail::gate_theta(gate, params));
    }
    DensityMatrix rho = to_density(input);
    for (const Gate& gate : circuit.gates) {
        detail::apply_gate_noisy_inplace(rho.rho.data(), rho.dim(), rho.n_qubits, gate,
                                         detail::gate_theta(gate, params), noise, exec);
    }
    const auto [y0, y1] = marginal_prob_qubit0(rho, exec);
    return readout_scale * (y0 - y1);
}

std::vector<double> predict_batch(const CircuitSpec& circuit, std::span<const double> params,
                                  const BatchInput& batch, Exec exec) {
    if (static_cast<int>(params.size()) != circuit.n_params) {
        throw input_error("predict_batch: parameter count mismatch");
    }
    if (batch.m < 0) {
        throw input_error("predict_batch: ancilla count must be non-negative");
    }
    const std::size_t capacity = std::size_t{1} << batch.m;
    if (batch.inputs.size() > capacity) {
        throw input_error("predict_batch: " + std::to_string(batch.inputs.size()) +
                          " inputs exceed 2^" + std::to_string(batch.m) + " index slots");
    }
    if (batch.inputs.empty()) return {};
    for (const Gate& gate : circuit.gates) {
        detail::check_gate(gate, model_qubits, detail::gate_theta(gate, params));
    }

    const std::size_t dim = std::size_t{1} << model_qubits;
    const std::size_t width = batch.inputs.size();

    // Column j of the dim x width block is input j; the circuit unitary hits
    // every column in one pass per gate.
    std::vector<c64> block(dim * width);
    for (std::size_t j = 0; j < width; ++j) {
        const OccupancyVector& v = batch.inputs[j];
        double norm_sq = 0.0;
        for (double value : v.values) norm_sq += value * value;
        if (!(std::abs(norm_sq - 1.0) <= 1e-9)) {
            throw input_error("predict_batch: input " + std::to_string(j) + " is not normalized");
        }
        for (std::size_t i = 0; i < dim; ++i) {
            block[i * width + j] = c64{v.values[i], 0.0};
        }
    }

    for (const Gate& gate : circuit.gates) {
        const double theta = detail::gate_theta(gate, params);
        switch (gate.kind) {
        case GateKind::RX:
            kernels::apply_1q_batched(block.data(), dim, width, gate.target,
                                      kernels::rx_matrix(theta), exec);
            break;
        case GateKind::RZ:
            kernels::apply_1q_batched(block.data(), dim, width, gate.target,
                                      kernels::rz_matrix(theta), exec);
            break;
        case GateKind::CNOT:
            kernels::apply_cnot_batched(block.data(), dim, width, gate.control, gate.target, exec);
            break;
        }
    }

    std::vector<double> out(width);
    for (std::size_t j = 0; j < width; ++j) {
        // Fixed per-column accumulation order (row-major sweep).
        double y0 = 0.0, y1 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double p = std::norm(block[i * width + j]);
            if (i & 1u) {
                y1 += p;
            } else {
                y0 += p;
            }
        }
        out[j] = readout_scale * (y0 - y1);
    }
    return out;
}

Metrics metrics(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) {
        throw input_error("metrics: prediction and truth lengths differ");
    }
    if (pred.empty()) {
        throw input_error("metrics: empty inputs");
    }
    const double n = static_cast<double>(pred.size());

    double sq = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        sq += d * d;
    }

    double mean_p = 0.0, mean_t = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        mean_p += pred[i];
        mean_t += truth[i];
    }
    mean_p /= n;
    mean_t /= n;

    double cov = 0.0, var_p = 0.0, var_t = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double dp = pred[i] - mean_p;
        const double dt = truth[i] - mean_t;
        cov += dp * dt;
        var_p += dp * dp;
        var_t += dt * dt;
    }
    if (var_t <= 0.0) {
        throw input_error("metrics: truth is constant, PCC undefined");
    }
    if (var_p <= 0.0) {
        throw input_error("metrics: predictions are constant, PCC undefined");
    }
    return Metrics{std::sqrt(sq / n), cov / std::sqrt(var_p * var_t)};
}

} // namespace qcbind
