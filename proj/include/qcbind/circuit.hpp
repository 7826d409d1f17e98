#ifndef QCBIND_CIRCUIT_HPP
#define QCBIND_CIRCUIT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcbind/state.hpp"

namespace qcbind {

// Stamps stored in checkpoints so an alternate wiring or gate convention can
// be introduced later without silently invalidating old parameter files.
inline constexpr const char* topology_version = "canonical-v1";
inline constexpr const char* gate_convention = "rx-rz-standard-v1";

inline constexpr int model_qubits = 9;
inline constexpr int params_per_unit = 18; // 9 qubits x (RX, RZ)

struct CircuitSpec {
    int n_qubits = 0;
    std::vector<Gate> gates;
    int n_params = 0;
};

/// Wire assignment: three type qubits on top, six position qubits below.
struct QubitRoles {
    std::array<int, 3> type_qubits{8, 7, 6}; // T2, T1, T0
    std::array<int, 6> pos_qubits{5, 4, 3, 2, 1, 0}; // X1, X0, Y1, Y0, Z1, Z0
};

/// Rotation layer: RX then RZ on each of the nine qubits in ascending order,
/// parameter slots unit_index*18 + 2q (RX) and +1 (RZ).
std::vector<Gate> build_lpar(int unit_index);

/// Entanglement layer variant n: two layers of four CNOTs over the eight
/// qubits other than n (ascending list Q); layer A is Q[i+4] -> Q[i], layer B
/// is Q[i] -> Q[i+4]. Qubit n is never a target.
std::vector<Gate> build_lbreaker(int n);

/// Stack of n_units blocks, unit u = lpar(u) followed by lbreaker(u mod 9).
CircuitSpec build_model(int n_units);

/// All gates in order; params must have exactly circuit.n_params entries.
StateVector apply_circuit(const StateVector& state, const CircuitSpec& circuit,
                          std::span<const double> params, Exec exec = Exec::parallel);

/// Fresh parameter vector, uniform in [-pi, pi) per slot, from the seed.
std::vector<double> init_params(int n_params, std::uint64_t seed);

/// FNV-1a over the serialized gate list; pins the wiring in tests.
std::uint64_t topology_hash(const std::vector<Gate>& gates);

namespace detail {
void apply_circuit_inplace(c64* amps, std::size_t dim, const CircuitSpec& circuit,
                           std::span<const double> params, Exec exec);
double gate_theta(const Gate& gate, std::span<const double> params);
} // namespace detail

} // namespace qcbind

#endif
