#ifndef QCBIND_TRAIN_HPP
#define QCBIND_TRAIN_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcbind/encode.hpp"
#include "qcbind/grad.hpp"

namespace qcbind {

namespace phys {
inline constexpr double gas_constant = 1.987e-3; // kcal / (mol K)
inline constexpr double temperature = 298.0;     // K
} // namespace phys

/// dG = -ln(10) * R * T * pKd, kcal/mol.
double pkd_to_dg(double pkd);

double mse_loss(std::span<const double> pred, std::span<const double> truth);

struct TrainConfig {
    double learning_rate = 1e-5;
    std::uint64_t seed = 0;
    int n_units = 6;
    int max_steps = 5000;
    int batch_size = 32;
    bool use_adam = false; // plain SGD unless enabled
};

struct TrialReport {
    TrainConfig config;
    double final_train_rmsd = 0.0;
    std::vector<double> loss_history;
    std::string checkpoint_path;
    bool diverged = false;
    std::vector<double> params; // final parameter values
};

/// Labeled, already-encoded training inputs.
struct TrainSet {
    std::vector<std::string> ids;
    std::vector<StateVector> inputs;
    std::vector<double> dg; // kcal/mol

    std::size_t size() const { return inputs.size(); }

    /// Converts pKd labels to dG; rejects unlabeled records.
    static TrainSet from_encoded(const EncodedDataset& data);
};

/// Minibatch gradient descent on the MSE; deterministic for fixed inputs.
TrialReport train_one(const TrainSet& dataset, const TrainConfig& cfg, const CircuitSpec& circuit,
                      Exec exec = Exec::parallel);

inline constexpr std::array<double, 4> protocol_learning_rates{1e-7, 1e-6, 1e-5, 3e-5};

struct ProtocolResult {
    std::vector<TrialReport> trials; // 4 learning rates x 3 seeds, lr-major
    std::size_t best_index = 0;
};

/// 12 trials (seeds base, base+1, base+2 per learning rate); picks the lowest
/// final training RMSD, ties broken by smaller learning rate then smaller seed.
ProtocolResult run_protocol(const TrainSet& dataset, int n_units, const TrainConfig& base,
                            Exec exec = Exec::parallel);

/// Index of the winning trial under the protocol's tie-breaking; throws
/// protocol_error when every trial diverged.
std::size_t select_best_trial(const std::vector<TrialReport>& trials);

/// Guard against test leakage: throws input_error if any id appears in both.
void check_split_disjoint(std::span<const std::string> train_ids,
                          std::span<const std::string> test_ids);

std::string trial_report_to_json(const TrialReport& report);

} // namespace qcbind

#endif
