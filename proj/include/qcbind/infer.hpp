#ifndef QCBIND_INFER_HPP
#define QCBIND_INFER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qcbind/encode.hpp"
#include "qcbind/grad.hpp"

namespace qcbind {

struct ShotConfig {
    std::uint64_t n_shots = 100000;
    std::uint64_t seed = 0;
};

/// Up to 2^m inputs evaluated through one circuit pass (ancilla-indexed form).
struct BatchInput {
    int m = 0;
    std::vector<OccupancyVector> inputs;
};

struct Metrics {
    double rmsd = 0.0; // kcal/mol
    double pcc = 0.0;  // dimensionless
};

/// Exact full-probability prediction; deterministic.
double predict_full(const CircuitSpec& circuit, std::span<const double> params,
                    const StateVector& input, Exec exec = Exec::parallel);

/// Finite-shot estimate: one binomial draw of qubit-0 outcomes, seeded.
double predict_shots(const CircuitSpec& circuit, std::span<const double> params,
                     const StateVector& input, const ShotConfig& cfg,
                     Exec exec = Exec::parallel);

/// Density-matrix evolution with per-gate amplitude damping + depolarizing.
double predict_noisy(const CircuitSpec& circuit, std::span<const double> params,
                     const StateVector& input, const NoiseSpec& noise,
                     Exec exec = Exec::parallel);

/// One stacked pass over all inputs; elementwise equal to predict_full.
std::vector<double> predict_batch(const CircuitSpec& circuit, std::span<const double> params,
                                  const BatchInput& batch, Exec exec = Exec::parallel);

/// RMSD and Pearson correlation of predictions against labels.
Metrics metrics(std::span<const double> pred, std::span<const double> truth);

} // namespace qcbind

#endif
