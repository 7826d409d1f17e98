#include "qcbind/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <unordered_set>

#include <json.hpp>

#include "qcbind/errors.hpp"
#include "qcbind/infer.hpp"

namespace qcbind {

double pkd_to_dg(double pkd) {
    if (!std::isfinite(pkd)) {
        throw input_error("pkd_to_dg: pKd must be finite");
    }
    return -std::log(10.0) * phys::gas_constant * phys::temperature * pkd;
}

double mse_loss(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) {
        throw input_error("mse_loss: prediction and truth lengths differ");
    }
    if (pred.empty()) {
        throw input_error("mse_loss: empty inputs");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.size());
}

TrainSet TrainSet::from_encoded(const EncodedDataset& data) {
    TrainSet set;
    set.ids = data.ids;
    set.inputs.reserve(data.size());
    set.dg.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data.pkd[i])) {
            throw input_error("training record '" + data.ids[i] + "' has no pKd label");
        }
        set.inputs.push_back(to_state(data.vectors[i]));
        set.dg.push_back(pkd_to_dg(data.pkd[i]));
    }
    return set;
}

namespace {

struct AdamState {
    std::vector<double> m, v;
    int t = 0;
};

void apply_update(std::vector<double>& params, std::span<const double> grad, double lr,
                  bool use_adam, AdamState& adam) {
    if (!use_adam) {
        for (std::size_t k = 0; k < params.size(); ++k) {
            params[k] -= lr * grad[k];
        }
        return;
    }
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    if (adam.m.empty()) {
        adam.m.assign(params.size(), 0.0);
        adam.v.assign(params.size(), 0.0);
    }
    ++adam.t;
    const double bc1 = 1.0 - std::pow(beta1, adam.t);
    const double bc2 = 1.0 - std::pow(beta2, adam.t);
    for (std::size_t k = 0; k < params.size(); ++k) {
        adam.m[k] = beta1 * adam.m[k] + (1.0 - beta1) * grad[k];
        adam.v[k] = beta2 * adam.v[k] + (1.0 - beta2) * grad[k] * grad[k];
        params[k] -= lr * (adam.m[k] / bc1) / (std::sqrt(adam.v[k] / bc2) + eps);
    }
}

double train_rmsd(const TrainSet& dataset, const CircuitSpec& circuit,
                  std::span<const double> params, Exec exec) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const double d = predict_full(circuit, params, dataset.inputs[i], exec) - dataset.dg[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(dataset.size()));
}

} // namespace

TrialReport train_one(const TrainSet& dataset, const TrainConfig& cfg, const CircuitSpec& circuit,
                      Exec exec) {
    if (dataset.size() == 0) {
        throw input_error("train_one: dataset is empty");
    }
    if (cfg.learning_rate <= 0.0 || !std::isfinite(cfg.learning_rate)) {
        throw input_error("train_one: learning rate must be positive");
    }
    if (cfg.batch_size < 1) {
        throw input_error("train_one: batch size must be at least 1");
    }
    if (cfg.max_steps < 0) {
        throw input_error("train_one: step count must be non-negative");
    }

    TrialReport report;
    report.config = cfg;
    report.params = init_params(circuit.n_params, cfg.seed);
    report.loss_history.reserve(static_cast<std::size_t>(cfg.max_steps));

    const std::size_t n = dataset.size();
    const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
    AdamState adam;

    std::vector<GradientResult> sample(batch);
    std::vector<double> grad(static_cast<std::size_t>(circuit.n_params));

    for (int step = 0; step < cfg.max_steps; ++step) {
        const std::size_t base = (static_cast<std::size_t>(step) * batch) % n;

        // Per-sample adjoint gradients in parallel; the reduction below runs
        // in fixed sample order so the result is thread-count independent.
        const std::int64_t b_count = static_cast<std::int64_t>(batch);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t j = 0; j < b_count; ++j) {
            const std::size_t idx = (base + static_cast<std::size_t>(j)) % n;
            sample[static_cast<std::size_t>(j)] =
                backward_adjoint(circuit, report.params, dataset.inputs[idx], exec);
        }

        double loss = 0.0;
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t j = 0; j < batch; ++j) {
            const std::size_t idx = (base + j) % n;
            const double residual = sample[j].value - dataset.dg[idx];
            loss += residual * residual;
            for (std::size_t k = 0; k < grad.size(); ++k) {
                grad[k] += 2.0 * residual * sample[j].grad[k];
            }
        }
        loss /= static_cast<double>(batch);
        for (double& g : grad) g /= static_cast<double>(batch);

        report.loss_history.push_back(loss);
        if (!std::isfinite(loss)) {
            report.diverged = true;
            break;
        }
        apply_update(report.params, grad, cfg.learning_rate, cfg.use_adam, adam);
    }

    report.final_train_rmsd = report.diverged
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : train_rmsd(dataset, circuit, report.params, exec);
    return report;
}

ProtocolResult run_protocol(const TrainSet& dataset, int n_units, const TrainConfig& base,
                            Exec exec) {
    if (dataset.size() == 0) {
        throw input_error("run_protocol: dataset is empty");
    }
    const CircuitSpec circuit = build_model(n_units);

    std::vector<TrainConfig> configs;
    for (double lr : protocol_learning_rates) {
        for (std::uint64_t s = 0; s < 3; ++s) {
            TrainConfig cfg = base;
            cfg.n_units = n_units;
            cfg.learning_rate = lr;
            cfg.seed = base.seed + s;
            configs.push_back(cfg);
        }
    }

    ProtocolResult result;
    result.trials.resize(configs.size());
    const std::int64_t n_trials = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n_trials; ++i) {
        result.trials[static_cast<std::size_t>(i)] =
            train_one(dataset, configs[static_cast<std::size_t>(i)], circuit, exec);
    }

    result.best_index = select_best_trial(result.trials);
    return result;
}

std::size_t select_best_trial(const std::vector<TrialReport>& trials) {
    // Argmin final RMSD; ties go to the smaller learning rate, then the
    // smaller seed.
    std::size_t best = trials.size();
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const TrialReport& trial = trials[i];
        if (trial.diverged || !std::isfinite(trial.final_train_rmsd)) continue;
        if (best == trials.size()) {
            best = i;
            continue;
        }
        const TrialReport& incumbent = trials[best];
        const auto key = [](const TrialReport& t) {
            return std::make_tuple(t.final_train_rmsd, t.config.learning_rate, t.config.seed);
        };
        if (key(trial) < key(incumbent)) best = i;
    }
    if (best == trials.size()) {
        throw protocol_error("every trial diverged");
    }
    return best;
}

void check_split_disjoint(std::span<const std::string> train_ids,
                          std::span<const std::string> test_ids) {
    std::unordered_set<std::string> test(test_ids.begin(), test_ids.end());
    for (const std::string& id : train_ids) {
        if (test.contains(id)) {
            throw input_error("training set leaks test complex '" + id + "'");
        }
    }
}

std::string trial_report_to_json(const TrialReport& report) {
    nlohmann::ordered_json j;
    j["config"] = {{"learning_rate", report.config.learning_rate},
                   {"seed", report.config.seed},
                   {"n_units", report.config.n_units},
                   {"max_steps", report.config.max_steps},
                   {"batch_size", report.config.batch_size},
                   {"optimizer", report.config.use_adam ? "adam" : "sgd"}};
    if (std::isfinite(report.final_train_rmsd)) {
        j["final_train_rmsd"] = report.final_train_rmsd;
    } else {
        j["final_train_rmsd"] = nullptr;
    }
    j["diverged"] = report.diverged;
    j["loss_history"] = report.loss_history;
    j["checkpoint_path"] = report.checkpoint_path;
    return j.dump(2) + "\n";
}

} // namespace qcbind
