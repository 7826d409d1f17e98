#ifndef QCBIND_STATE_HPP
#define QCBIND_STATE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "qcbind/kernels.hpp"

namespace qcbind {

// Basis-index convention: bit b of the integer index is the state of qubit b,
// qubit 0 being the least significant bit.

inline constexpr int max_state_qubits = 24;
inline constexpr int max_density_qubits = 12;

struct StateVector {
    int n_qubits = 0;
    std::vector<c64> amps;

    static StateVector zero(int n_qubits);
    static StateVector basis(int n_qubits, std::size_t index);
    static StateVector from_amplitudes(int n_qubits, std::vector<c64> amps);

    std::size_t dim() const { return amps.size(); }
    double norm_sq(Exec exec = Exec::parallel) const;
};

struct DensityMatrix {
    int n_qubits = 0;
    std::vector<c64> rho; // row-major 2^n x 2^n

    static DensityMatrix zero(int n_qubits);

    std::size_t dim() const;
    c64 at(std::size_t row, std::size_t col) const { return rho[row * dim() + col]; }
    double trace_real(Exec exec = Exec::parallel) const;
};

enum class GateKind { RX, RZ, CNOT };

struct Gate {
    GateKind kind = GateKind::RX;
    int target = 0;
    int control = -1;    // CNOT only
    int param_slot = -1; // RX/RZ only

    static Gate rx(int target, int param_slot) { return {GateKind::RX, target, -1, param_slot}; }
    static Gate rz(int target, int param_slot) { return {GateKind::RZ, target, -1, param_slot}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, -1}; }
};

struct NoiseSpec {
    double gamma = 0.0;   // amplitude-damping rate
    double p_depol = 0.0; // depolarizing probability

    void validate() const; // both must lie in [0, 1]
};

/// U * state with U embedded on the gate's qubit(s). Theta is ignored for CNOT.
StateVector apply_gate(const StateVector& state, const Gate& gate, double theta,
                       Exec exec = Exec::parallel);

DensityMatrix to_density(const StateVector& state);

/// U rho U^dagger, then amplitude damping and depolarizing on every qubit the
/// gate acts on (both qubits of a CNOT, ascending index; damping first).
DensityMatrix apply_gate_noisy(const DensityMatrix& rho, const Gate& gate, double theta,
                               const NoiseSpec& noise, Exec exec = Exec::parallel);

/// (y0, y1): probabilities of measuring qubit 0 as 0 / 1.
std::pair<double, double> marginal_prob_qubit0(const StateVector& state,
                                               Exec exec = Exec::parallel);
std::pair<double, double> marginal_prob_qubit0(const DensityMatrix& rho,
                                               Exec exec = Exec::parallel);

// In-place building blocks shared with the circuit/grad/infer layers.
namespace detail {
void check_gate(const Gate& gate, int n_qubits, double theta);
void apply_gate_inplace(c64* amps, std::size_t dim, const Gate& gate, double theta, Exec exec);
/// Inverse gate (RX/RZ with negated angle; CNOT is its own inverse).
void apply_gate_inverse_inplace(c64* amps, std::size_t dim, const Gate& gate, double theta,
                                Exec exec);
void apply_gate_noisy_inplace(c64* rho, std::size_t dim, int n_qubits, const Gate& gate,
                              double theta, const NoiseSpec& noise, Exec exec);
} // namespace detail

} // namespace qcbind

#endif
