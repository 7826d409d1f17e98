#include "qcbind/state.hpp"

#include <cmath>
#include <string>

#include "qcbind/errors.hpp"

namespace qcbind {

namespace {

std::size_t checked_dim(int n_qubits, int max_qubits, const char* what) {
    if (n_qubits < 1) {
        throw input_error(std::string(what) + ": qubit count must be positive");
    }
    if (n_qubits > max_qubits) {
        throw capacity_error(std::string(what) + ": " + std::to_string(n_qubits) +
                             " qubits exceeds the guardrail of " + std::to_string(max_qubits));
    }
    return std::size_t{1} << n_qubits;
}

} // namespace

StateVector StateVector::zero(int n_qubits) {
    StateVector s;
    s.n_qubits = n_qubits;
    s.amps.assign(checked_dim(n_qubits, max_state_qubits, "StateVector"), c64{});
    s.amps[0] = c64{1.0, 0.0};
    return s;
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
    StateVector s = zero(n_qubits);
    if (index >= s.dim()) {
        throw structural_error("StateVector::basis: index out of range");
    }
    s.amps[0] = c64{};
    s.amps[index] = c64{1.0, 0.0};
    return s;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<c64> amps) {
    const std::size_t dim = checked_dim(n_qubits, max_state_qubits, "StateVector");
    if (amps.size() != dim) {
        throw input_error("StateVector: amplitude count " + std::to_string(amps.size()) +
                          " does not match 2^" + std::to_string(n_qubits));
    }
    return StateVector{n_qubits, std::move(amps)};
}

double StateVector::norm_sq(Exec exec) const {
    return kernels::sum_abs2(amps.data(), amps.size(), exec);
}

DensityMatrix DensityMatrix::zero(int n_qubits) {
    const std::size_t dim = checked_dim(n_qubits, max_density_qubits, "DensityMatrix");
    DensityMatrix d;
    d.n_qubits = n_qubits;
    d.rho.assign(dim * dim, c64{});
    return d;
}

std::size_t DensityMatrix::dim() const { return std::size_t{1} << n_qubits; }

double DensityMatrix::trace_real(Exec exec) const {
    const std::size_t d = dim();
    return kernels::diag_real_bit0(rho.data(), d, 0, exec) +
           (n_qubits >= 1 ? kernels::diag_real_bit0(rho.data(), d, 1, exec) : 0.0);
}

void NoiseSpec::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw input_error("NoiseSpec: gamma must lie in [0, 1]");
    }
    if (!(p_depol >= 0.0 && p_depol <= 1.0)) {
        throw input_error("NoiseSpec: p_depol must lie in [0, 1]");
    }
}

namespace detail {

void check_gate(const Gate& gate, int n_qubits, double theta) {
    if (gate.target < 0 || gate.target >= n_qubits) {
        throw structural_error("gate target " + std::to_string(gate.target) +
                               " outside register of " + std::to_string(n_qubits) + " qubits");
    }
    if (gate.kind == GateKind::CNOT) {
        if (gate.control < 0 || gate.control >= n_qubits) {
            throw structural_error("gate control " + std::to_string(gate.control) +
                                   " outside register of " + std::to_string(n_qubits) + " qubits");
        }
        if (gate.control == gate.target) {
            throw structural_error("CNOT control and target must differ");
        }
    } else if (!std::isfinite(theta)) {
        throw input_error("rotation angle must be finite");
    }
}

void apply_gate_inplace(c64* amps, std::size_t dim, const Gate& gate, double theta, Exec exec) {
    switch (gate.kind) {
    case GateKind::RX:
        kernels::apply_1q(amps, dim, gate.target, kernels::rx_matrix(theta), exec);
        break;
    case GateKind::RZ:
        kernels::apply_1q(amps, dim, gate.target, kernels::rz_matrix(theta), exec);
        break;
    case GateKind::CNOT:
        kernels::apply_cnot(amps, dim, gate.control, gate.target, exec);
        break;
    }
}

void apply_gate_inverse_inplace(c64* amps, std::size_t dim, const Gate& gate, double theta,
                                Exec exec) {
    apply_gate_inplace(amps, dim, gate, gate.kind == GateKind::CNOT ? theta : -theta, exec);
}

void apply_gate_noisy_inplace(c64* rho, std::size_t dim, int n_qubits, const Gate& gate,
                              double theta, const NoiseSpec& noise, Exec exec) {
    // rho is row-major 2^n x 2^n; as a flattened 2n-qubit vector, row-qubit q
    // sits at bit q+n and column-qubit q at bit q. U rho U^dagger is one pass
    // of U on the row qubit and one of conj(U) on the column qubit.
    const std::size_t flat = dim * dim;
    switch (gate.kind) {
    case GateKind::RX: {
        const kernels::Mat2 m = kernels::rx_matrix(theta);
        kernels::apply_1q(rho, flat, gate.target + n_qubits, m, exec);
        kernels::apply_1q(rho, flat, gate.target, kernels::conj(m), exec);
        break;
    }
    case GateKind::RZ: {
        const kernels::Mat2 m = kernels::rz_matrix(theta);
        kernels::apply_1q(rho, flat, gate.target + n_qubits, m, exec);
        kernels::apply_1q(rho, flat, gate.target, kernels::conj(m), exec);
        break;
    }
    case GateKind::CNOT:
        kernels::apply_cnot(rho, flat, gate.control + n_qubits, gate.target + n_qubits, exec);
        kernels::apply_cnot(rho, flat, gate.control, gate.target, exec);
        break;
    }

    int acted[2] = {gate.target, -1};
    if (gate.kind == GateKind::CNOT) {
        acted[0] = std::min(gate.control, gate.target);
        acted[1] = std::max(gate.control, gate.target);
    }
    for (int q : acted) {
        if (q < 0) continue;
        if (noise.gamma > 0.0) kernels::damp(rho, dim, q, noise.gamma, exec);
        if (noise.p_depol > 0.0) kernels::depolarize(rho, dim, q, noise.p_depol, exec);
    }
}

} // namespace detail

StateVector apply_gate(const StateVector& state, const Gate& gate, double theta, Exec exec) {
    detail::check_gate(gate, state.n_qubits, theta);
    StateVector out = state;
    detail::apply_gate_inplace(out.amps.data(), out.dim(), gate, theta, exec);
    return out;
}

DensityMatrix to_density(const StateVector& state) {
    const std::size_t dim = checked_dim(state.n_qubits, max_density_qubits, "to_density");
    DensityMatrix d;
    d.n_qubits = state.n_qubits;
    d.rho.resize(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            d.rho[i * dim + j] = state.amps[i] * std::conj(state.amps[j]);
        }
    }
    return d;
}

DensityMatrix apply_gate_noisy(const DensityMatrix& rho, const Gate& gate, double theta,
                               const NoiseSpec& noise, Exec exec) {
    detail::check_gate(gate, rho.n_qubits, theta);
    noise.validate();
    DensityMatrix out = rho;
    detail::apply_gate_noisy_inplace(out.rho.data(), out.dim(), out.n_qubits, gate, theta, noise,
                                     exec);
    return out;
}

std::pair<double, double> marginal_prob_qubit0(const StateVector& state, Exec exec) {
    const double y0 = kernels::sum_abs2_bit(state.amps.data(), state.dim(), 0, 0, exec);
    const double y1 = kernels::sum_abs2_bit(state.amps.data(), state.dim(), 0, 1, exec);
    return {y0, y1};
}

std::pair<double, double> marginal_prob_qubit0(const DensityMatrix& rho, Exec exec) {
    const double y0 = kernels::diag_real_bit0(rho.rho.data(), rho.dim(), 0, exec);
    const double y1 = kernels::diag_real_bit0(rho.rho.data(), rho.dim(), 1, exec);
    return {y0, y1};
}

} // namespace qcbind
