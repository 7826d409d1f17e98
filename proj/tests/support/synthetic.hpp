#ifndef QCBIND_TESTS_SYNTHETIC_HPP
#define QCBIND_TESTS_SYNTHETIC_HPP

// Seeded generators shared by unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qcbind/circuit.hpp"
#include "qcbind/encode.hpp"
#include "qcbind/rng.hpp"

namespace qcbind::testsupport {

inline std::vector<double> random_angles(Rng& rng, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (double& v : out) v = rng.next_in(-std::numbers::pi, std::numbers::pi);
    return out;
}

/// Arbitrary gate sequence over n qubits; param slots are contiguous.
inline CircuitSpec random_circuit(Rng& rng, int n_qubits, int n_gates) {
    CircuitSpec spec;
    spec.n_qubits = n_qubits;
    for (int g = 0; g < n_gates; ++g) {
        const std::uint64_t kind = n_qubits > 1 ? rng.next_u64() % 3 : rng.next_u64() % 2;
        const int target = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n_qubits));
        if (kind == 2) {
            int control = target;
            while (control == target) {
                control = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n_qubits));
            }
            spec.gates.push_back(Gate::cnot(control, target));
        } else if (kind == 1) {
            spec.gates.push_back(Gate::rz(target, spec.n_params++));
        } else {
            spec.gates.push_back(Gate::rx(target, spec.n_params++));
        }
    }
    return spec;
}

/// Haar-ish random complex state, normalized.
inline StateVector random_state(Rng& rng, int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<c64> amps(dim);
    double norm_sq = 0.0;
    for (c64& a : amps) {
        a = c64{rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0)};
        norm_sq += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (c64& a : amps) a *= scale;
    return StateVector::from_amplitudes(n_qubits, std::move(amps));
}

/// Non-negative 512-vector obeying the 0.5/0.5 protein/ligand split norm.
inline OccupancyVector random_occupancy(Rng& rng) { return qcbind::random_occupancy(rng); }

/// Random protein-ligand complex with atoms packed near the origin so both
/// molecules occupy the 16 A grid.
inline ComplexRecord synthetic_complex(Rng& rng, const std::string& id) {
    static const char* elements[] = {"C", "C", "C", "N", "O", "S", "H", "P"};
    ComplexRecord record;
    record.id = id;
    record.pkd = rng.next_in(2.0, 11.0);

    const auto sample_atom = [&](Molecule mol, double spread) {
        AtomRecord atom;
        atom.element = elements[rng.next_u64() % std::size(elements)];
        atom.x = rng.next_in(-spread, spread);
        atom.y = rng.next_in(-spread, spread);
        atom.z = rng.next_in(-spread, spread);
        atom.molecule = mol;
        return atom;
    };

    const int n_protein = 10 + static_cast<int>(rng.next_u64() % 40);
    const int n_ligand = 3 + static_cast<int>(rng.next_u64() % 15);
    for (int i = 0; i < n_protein; ++i) record.atoms.push_back(sample_atom(Molecule::protein, 6.5));
    for (int i = 0; i < n_ligand; ++i) record.atoms.push_back(sample_atom(Molecule::ligand, 3.5));
    return record;
}

} // namespace qcbind::testsupport

#endif
