// Command-line surface for the binding-affinity pipeline:
//   voxelize -> train / protocol -> eval / predict, plus gradcheck.
// Every command writes a run manifest next to its outputs and takes all
// randomness from explicit --seed flags.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "qcbind/checkpoint.hpp"
#include "qcbind/circuit.hpp"
#include "qcbind/encode.hpp"
#include "qcbind/errors.hpp"
#include "qcbind/grad.hpp"
#include "qcbind/infer.hpp"
#include "qcbind/manifest.hpp"
#include "qcbind/rng.hpp"
#include "qcbind/train.hpp"

namespace {

namespace fs = std::filesystem;
using qcbind::Exec;

constexpr int exit_ok = 0;
constexpr int exit_internal = 1;
constexpr int exit_input = 2;
constexpr int exit_capacity = 3;
constexpr int exit_partial = 4;
constexpr int exit_version = 5;

/// Shortest round-trip decimal form; keeps CSV output deterministic.
std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return ec == std::errc() ? std::string(buffer, ptr) : std::string("nan");
}

std::string join_command_line(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        const std::string arg = argv[i];
        if (arg.find(' ') != std::string::npos) {
            out += '"' + arg + '"';
        } else {
            out += arg;
        }
    }
    return out;
}

/// JSON config files: top-level keys are app options, one nested object per
/// subcommand. Command-line flags override file values.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::ordered_json j;
        for (const CLI::Option* opt : app->get_options()) {
            if (!opt->get_lnames().empty() && opt->get_configurable()) {
                if (!opt->results().empty()) {
                    j[opt->get_lnames()[0]] = opt->results().front();
                } else if (default_also) {
                    j[opt->get_lnames()[0]] = opt->get_default_str();
                }
            }
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j = nlohmann::json::parse(input, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw CLI::FileError("config file is not a JSON object");
        }
        std::vector<CLI::ConfigItem> items;
        const auto add = [&items](std::vector<std::string> parents, const std::string& name,
                                  const nlohmann::json& value) {
            CLI::ConfigItem item;
            item.parents = std::move(parents);
            item.name = name;
            if (value.is_string()) {
                item.inputs.push_back(value.get<std::string>());
            } else if (value.is_boolean()) {
                item.inputs.push_back(value.get<bool>() ? "true" : "false");
            } else {
                item.inputs.push_back(value.dump());
            }
            items.push_back(std::move(item));
        };
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [sub_key, sub_value] : value.items()) {
                    add({key}, sub_key, sub_value);
                }
            } else {
                add({}, key, value);
            }
        }
        return items;
    }
};

void apply_thread_cap(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

std::map<std::string, std::string> snapshot_config(const CLI::App& cmd) {
    std::map<std::string, std::string> out;
    for (const CLI::Option* opt : cmd.get_options()) {
        if (opt->get_lnames().empty()) continue;
        if (!opt->results().empty()) {
            out[opt->get_lnames()[0]] = opt->results().front();
        } else if (!opt->get_default_str().empty()) {
            out[opt->get_lnames()[0]] = opt->get_default_str();
        }
    }
    return out;
}

struct CsvRow {
    std::string id;
    double dg_pred = 0.0;
    double dg_true = std::numeric_limits<double>::quiet_NaN();
};

void write_report_csv(const fs::path& path, const std::vector<CsvRow>& rows,
                      const std::string& mode, int n_units, const std::string& shots,
                      const std::string& gamma, const std::string& p_depol, bool summary) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw qcbind::io_error("cannot write '" + path.string() + "'");
    out << "id,dG_pred,dG_true,mode,n_units,shots,gamma,p_depol,rmsd,pcc\n";
    std::vector<double> pred, truth;
    for (const CsvRow& row : rows) {
        out << row.id << ',' << format_double(row.dg_pred) << ',';
        if (std::isfinite(row.dg_true)) {
            out << format_double(row.dg_true);
            pred.push_back(row.dg_pred);
            truth.push_back(row.dg_true);
        }
        out << ',' << mode << ',' << n_units << ',' << shots << ',' << gamma << ',' << p_depol
            << ",,\n";
    }
    if (summary && !pred.empty()) {
        std::string rmsd_text, pcc_text;
        try {
            const qcbind::Metrics m = qcbind::metrics(pred, truth);
            rmsd_text = format_double(m.rmsd);
            pcc_text = format_double(m.pcc);
        } catch (const qcbind::input_error&) {
            // PCC undefined (constant labels or single row): report RMSD only.
            double sq = 0.0;
            for (std::size_t i = 0; i < pred.size(); ++i) {
                sq += (pred[i] - truth[i]) * (pred[i] - truth[i]);
            }
            rmsd_text = format_double(std::sqrt(sq / static_cast<double>(pred.size())));
            std::cerr << "warning: PCC undefined on this label set\n";
        }
        out << "SUMMARY,,," << mode << ',' << n_units << ',' << shots << ',' << gamma << ','
            << p_depol << ',' << rmsd_text << ',' << pcc_text << "\n";
    }
}

//----------------------------------------------------------------------------
// voxelize
//----------------------------------------------------------------------------

struct VoxelizeArgs {
    std::string data;
    std::string out;
    std::string aggregate = "max";
};

int cmd_voxelize(const VoxelizeArgs& args, const CLI::App& cmd, const std::string& command_line) {
    const qcbind::Aggregate aggregate = args.aggregate == "sum-clamped"
                                            ? qcbind::Aggregate::sum_clamped
                                            : qcbind::Aggregate::max;
    const std::vector<qcbind::ComplexRecord> records = qcbind::read_dataset(args.data);

    std::vector<qcbind::OccupancyVector> encoded(records.size());
    std::vector<std::string> failure(records.size());
    const std::int64_t n = static_cast<std::int64_t>(records.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            encoded[static_cast<std::size_t>(i)] =
                qcbind::encode_complex(records[static_cast<std::size_t>(i)], aggregate);
        } catch (const std::exception& e) {
            failure[static_cast<std::size_t>(i)] = e.what();
        }
    }

    qcbind::EncodedDataset data;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (failure[i].empty()) {
            std::cout << records[i].id << ": ok\n";
            data.ids.push_back(records[i].id);
            data.pkd.push_back(records[i].pkd);
            data.vectors.push_back(encoded[i]);
        } else {
            std::cout << records[i].id << ": skipped (" << failure[i] << ")\n";
            ++skipped;
        }
    }
    if (data.size() == 0) {
        throw qcbind::input_error("no record could be encoded");
    }
    qcbind::write_cache(args.out, data);

    qcbind::RunManifest manifest;
    manifest.command = command_line;
    manifest.config = snapshot_config(cmd);
    manifest.artifacts = {args.out, args.out + ".meta.jsonl"};
    qcbind::write_manifest(args.out + ".manifest.json", manifest);

    std::cout << "encoded " << data.size() << "/" << records.size() << " records -> " << args.out
              << "\n";
    return skipped == 0 ? exit_ok : exit_partial;
}

//----------------------------------------------------------------------------
// train / protocol
//----------------------------------------------------------------------------

struct TrainArgs {
    std::string data;
    std::string test_data;
    std::string out;
    int units = 6;
    double lr = 1e-5;
    std::uint64_t seed = 0;
    int steps = 5000;
    int batch = 32;
    bool adam = false;
};

qcbind::TrainSet load_train_set(const TrainArgs& args) {
    const qcbind::EncodedDataset data = qcbind::read_cache(args.data);
    qcbind::TrainSet set = qcbind::TrainSet::from_encoded(data);
    if (!args.test_data.empty()) {
        const qcbind::EncodedDataset held_out = qcbind::read_cache(args.test_data);
        qcbind::check_split_disjoint(set.ids, held_out.ids);
    }
    return set;
}

qcbind::Checkpoint make_checkpoint(const qcbind::TrialReport& report) {
    qcbind::Checkpoint ckpt;
    ckpt.n_units = report.config.n_units;
    ckpt.params = report.params;
    ckpt.seed = report.config.seed;
    ckpt.train = qcbind::TrainStamp{report.config.learning_rate, report.config.max_steps,
                                    report.config.batch_size,
                                    report.config.use_adam ? "adam" : "sgd"};
    return ckpt;
}

int cmd_train(const TrainArgs& args, const CLI::App& cmd, const std::string& command_line) {
    const qcbind::TrainSet set = load_train_set(args);
    qcbind::TrainConfig cfg;
    cfg.learning_rate = args.lr;
    cfg.seed = args.seed;
    cfg.n_units = args.units;
    cfg.max_steps = args.steps;
    cfg.batch_size = args.batch;
    cfg.use_adam = args.adam;

    qcbind::TrialReport report = qcbind::train_one(set, cfg, qcbind::build_model(args.units));

    fs::create_directories(args.out);
    const fs::path ckpt_path = fs::path(args.out) / "checkpoint.json";
    qcbind::save_checkpoint(ckpt_path, make_checkpoint(report));
    report.checkpoint_path = ckpt_path.string();
    const fs::path report_path = fs::path(args.out) / "trial_report.json";
    {
        std::ofstream out(report_path, std::ios::trunc);
        if (!out) throw qcbind::io_error("cannot write '" + report_path.string() + "'");
        out << qcbind::trial_report_to_json(report);
    }

    qcbind::RunManifest manifest;
    manifest.command = command_line;
    manifest.config = snapshot_config(cmd);
    manifest.seeds["init"] = args.seed;
    manifest.artifacts = {ckpt_path, report_path};
    qcbind::write_manifest(fs::path(args.out) / "run_manifest.json", manifest);

    if (report.diverged) {
        std::cout << "trial diverged after " << report.loss_history.size() << " steps\n";
        return exit_partial;
    }
    std::cout << "final train RMSD " << format_double(report.final_train_rmsd) << " kcal/mol ("
              << report.loss_history.size() << " steps) -> " << ckpt_path.string() << "\n";
    return exit_ok;
}

int cmd_protocol(const TrainArgs& args, const CLI::App& cmd, const std::string& command_line) {
    const qcbind::TrainSet set = load_train_set(args);
    qcbind::TrainConfig base;
    base.seed = args.seed;
    base.max_steps = args.steps;
    base.batch_size = args.batch;
    base.use_adam = args.adam;

    qcbind::ProtocolResult result = qcbind::run_protocol(set, args.units, base);

    fs::create_directories(args.out);
    qcbind::RunManifest manifest;
    manifest.command = command_line;
    manifest.config = snapshot_config(cmd);
    manifest.seeds["base"] = args.seed;

    const fs::path table_path = fs::path(args.out) / "protocol_table.csv";
    std::ofstream table(table_path, std::ios::trunc);
    if (!table) throw qcbind::io_error("cannot write '" + table_path.string() + "'");
    table << "trial,learning_rate,seed,final_train_rmsd,diverged,selected\n";
    std::cout << "trial  lr        seed  train_rmsd  selected\n";

    for (std::size_t i = 0; i < result.trials.size(); ++i) {
        qcbind::TrialReport& trial = result.trials[i];
        char name[32];
        std::snprintf(name, sizeof(name), "trial_%02zu", i);
        const fs::path trial_ckpt = fs::path(args.out) / (std::string(name) + ".checkpoint.json");
        qcbind::save_checkpoint(trial_ckpt, make_checkpoint(trial));
        trial.checkpoint_path = trial_ckpt.string();
        const fs::path trial_report = fs::path(args.out) / (std::string(name) + ".report.json");
        std::ofstream rep(trial_report, std::ios::trunc);
        rep << qcbind::trial_report_to_json(trial);
        rep.close();
        manifest.artifacts.push_back(trial_ckpt);
        manifest.artifacts.push_back(trial_report);

        const bool selected = i == result.best_index;
        table << name << ',' << format_double(trial.config.learning_rate) << ','
              << trial.config.seed << ','
              << (trial.diverged ? "" : format_double(trial.final_train_rmsd)) << ','
              << (trial.diverged ? "yes" : "no") << ',' << (selected ? "yes" : "no") << "\n";
        char rmsd_text[32] = "diverged";
        if (!trial.diverged) {
            std::snprintf(rmsd_text, sizeof(rmsd_text), "%.6f", trial.final_train_rmsd);
        }
        std::printf("%-6zu %-9.1e %-5llu %-11s %s\n", i, trial.config.learning_rate,
                    static_cast<unsigned long long>(trial.config.seed), rmsd_text,
                    selected ? "<-- selected" : "");
    }
    table.close();

    const fs::path best_path = fs::path(args.out) / "checkpoint.json";
    qcbind::save_checkpoint(best_path, make_checkpoint(result.trials[result.best_index]));
    manifest.artifacts.push_back(best_path);
    manifest.artifacts.push_back(table_path);
    qcbind::write_manifest(fs::path(args.out) / "run_manifest.json", manifest);

    std::cout << "selected trial " << result.best_index << " -> " << best_path.string() << "\n";
    return exit_ok;
}

//----------------------------------------------------------------------------
// eval / predict
//----------------------------------------------------------------------------

struct EvalArgs {
    std::string checkpoint;
    std::string data;
    std::string out;
    std::string mode = "full";
    std::uint64_t shots = 100000;
    std::uint64_t seed = 0;
    double gamma = 0.001;
    double p_depol = 0.0005;
};

int cmd_eval(const EvalArgs& args, const CLI::App& cmd, const std::string& command_line) {
    const qcbind::Checkpoint ckpt = qcbind::load_checkpoint(args.checkpoint);
    const qcbind::CircuitSpec circuit = qcbind::build_model(ckpt.n_units);
    const qcbind::EncodedDataset data = qcbind::read_cache(args.data);

    std::vector<CsvRow> rows(data.size());
    std::vector<std::string> failure(data.size());
    const std::int64_t n = static_cast<std::int64_t>(data.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        try {
            const qcbind::StateVector input = qcbind::to_state(data.vectors[k]);
            double dg = 0.0;
            if (args.mode == "full") {
                dg = qcbind::predict_full(circuit, ckpt.params, input);
            } else if (args.mode == "shots") {
                // per-record stream: decorrelated but reproducible
                qcbind::ShotConfig shot_cfg{args.shots, args.seed + static_cast<std::uint64_t>(i)};
                dg = qcbind::predict_shots(circuit, ckpt.params, input, shot_cfg);
            } else {
                dg = qcbind::predict_noisy(circuit, ckpt.params, input,
                                           qcbind::NoiseSpec{args.gamma, args.p_depol});
            }
            rows[k].id = data.ids[k];
            rows[k].dg_pred = dg;
            if (std::isfinite(data.pkd[k])) {
                rows[k].dg_true = qcbind::pkd_to_dg(data.pkd[k]);
            }
        } catch (const std::exception& e) {
            failure[k] = e.what();
        }
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!failure[i].empty()) {
            throw qcbind::input_error("record '" + data.ids[i] + "': " + failure[i]);
        }
    }

    const std::string shots_text = args.mode == "shots" ? std::to_string(args.shots) : "";
    const std::string gamma_text = args.mode == "noisy" ? format_double(args.gamma) : "";
    const std::string p_text = args.mode == "noisy" ? format_double(args.p_depol) : "";
    write_report_csv(args.out, rows, args.mode, ckpt.n_units, shots_text, gamma_text, p_text,
                     /*summary=*/true);

    qcbind::RunManifest manifest;
    manifest.command = command_line;
    manifest.config = snapshot_config(cmd);
    manifest.seeds["shots"] = args.seed;
    manifest.artifacts = {args.out};
    qcbind::write_manifest(args.out + ".manifest.json", manifest);

    std::cout << "wrote " << rows.size() << " predictions -> " << args.out << "\n";
    return exit_ok;
}

struct PredictArgs {
    std::string checkpoint;
    std::string data;
    std::string out;
    int batch_width = 16;
};

int cmd_predict(const PredictArgs& args, const CLI::App& cmd, const std::string& command_line) {
    if (args.batch_width < 1) {
        throw qcbind::input_error("batch width must be at least 1");
    }
    const qcbind::Checkpoint ckpt = qcbind::load_checkpoint(args.checkpoint);
    const qcbind::CircuitSpec circuit = qcbind::build_model(ckpt.n_units);
    const qcbind::EncodedDataset data = qcbind::read_cache(args.data);

    int m = 0;
    while ((1 << m) < args.batch_width) ++m;

    std::vector<CsvRow> rows(data.size());
    for (std::size_t start = 0; start < data.size(); start += static_cast<std::size_t>(args.batch_width)) {
        const std::size_t end =
            std::min(data.size(), start + static_cast<std::size_t>(args.batch_width));
        qcbind::BatchInput batch;
        batch.m = m;
        batch.inputs.assign(data.vectors.begin() + static_cast<std::ptrdiff_t>(start),
                            data.vectors.begin() + static_cast<std::ptrdiff_t>(end));
        const std::vector<double> dg = qcbind::predict_batch(circuit, ckpt.params, batch);
        for (std::size_t j = 0; j < dg.size(); ++j) {
            rows[start + j].id = data.ids[start + j];
            rows[start + j].dg_pred = dg[j];
            if (std::isfinite(data.pkd[start + j])) {
                rows[start + j].dg_true = qcbind::pkd_to_dg(data.pkd[start + j]);
            }
        }
    }

    write_report_csv(args.out, rows, "full", ckpt.n_units, "", "", "", /*summary=*/false);

    qcbind::RunManifest manifest;
    manifest.command = command_line;
    manifest.config = snapshot_config(cmd);
    manifest.artifacts = {args.out};
    qcbind::write_manifest(args.out + ".manifest.json", manifest);

    std::cout << "wrote " << rows.size() << " predictions -> " << args.out << "\n";
    return exit_ok;
}

//----------------------------------------------------------------------------
// gradcheck
//----------------------------------------------------------------------------

struct GradcheckArgs {
    int units = 3;
    std::uint64_t seed = 42;
    double h = 1e-4;
    std::string out;
};

int cmd_gradcheck(const GradcheckArgs& args, const CLI::App& cmd,
                  const std::string& command_line) {
    const qcbind::CircuitSpec circuit = qcbind::build_model(args.units);
    qcbind::Rng rng(args.seed);
    const std::vector<double> params = qcbind::init_params(circuit.n_params, rng.next_u64());
    const qcbind::StateVector input = qcbind::to_state(qcbind::random_occupancy(rng));

    const qcbind::GradientResult adj = qcbind::backward_adjoint(circuit, params, input);
    const qcbind::GradientResult shift = qcbind::backward_parameter_shift(circuit, params, input);
    const qcbind::GradientResult fd = qcbind::backward_finite_diff(circuit, params, input, args.h);

    std::ostringstream csv;
    csv << "slot,adjoint,parameter_shift,finite_diff,abs_shift_gap,abs_fd_gap\n";
    double worst_shift = 0.0, worst_fd = 0.0;
    for (std::size_t k = 0; k < adj.grad.size(); ++k) {
        const double shift_gap = std::abs(adj.grad[k] - shift.grad[k]);
        const double fd_gap = std::abs(adj.grad[k] - fd.grad[k]);
        worst_shift = std::max(worst_shift, shift_gap);
        worst_fd = std::max(worst_fd, fd_gap);
        csv << k << ',' << format_double(adj.grad[k]) << ',' << format_double(shift.grad[k]) << ','
            << format_double(fd.grad[k]) << ',' << format_double(shift_gap) << ','
            << format_double(fd_gap) << "\n";
    }

    if (args.out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(args.out, std::ios::trunc);
        if (!out) throw qcbind::io_error("cannot write '" + args.out + "'");
        out << csv.str();
        qcbind::RunManifest manifest;
        manifest.command = command_line;
        manifest.config = snapshot_config(cmd);
        manifest.seeds["instance"] = args.seed;
        manifest.artifacts = {args.out};
        qcbind::write_manifest(args.out + ".manifest.json", manifest);
    }
    std::cerr << "value " << format_double(adj.value) << "; max |adjoint-shift| "
              << format_double(worst_shift) << "; max |adjoint-fd| " << format_double(worst_fd)
              << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-circuit binding affinity pipeline"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file mirroring the flags");
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap OpenMP worker count (0 = library default)");

    VoxelizeArgs vox;
    CLI::App* voxelize = app.add_subcommand("voxelize", "encode a JSON-lines dataset");
    voxelize->add_option("--data", vox.data, "JSON-lines complexes")->required();
    voxelize->add_option("--out", vox.out, "output cache path")->required();
    voxelize->add_option("--aggregate", vox.aggregate, "per-voxel combine rule")
        ->check(CLI::IsMember({"max", "sum-clamped"}))
        ->capture_default_str();

    TrainArgs train;
    CLI::App* train_cmd = app.add_subcommand("train", "single training run");
    train_cmd->add_option("--data", train.data, "encoded training cache")->required();
    train_cmd->add_option("--test-data", train.test_data, "held-out cache for the leak check");
    train_cmd->add_option("--units", train.units, "QMLunit count")->capture_default_str();
    train_cmd->add_option("--lr", train.lr, "learning rate")->capture_default_str();
    train_cmd->add_option("--seed", train.seed, "parameter init seed")->capture_default_str();
    train_cmd->add_option("--steps", train.steps, "gradient steps")->capture_default_str();
    train_cmd->add_option("--batch", train.batch, "minibatch size")->capture_default_str();
    train_cmd->add_flag("--adam", train.adam, "use Adam instead of plain SGD");
    train_cmd->add_option("--out", train.out, "output directory")->required();

    TrainArgs protocol = train;
    CLI::App* protocol_cmd =
        app.add_subcommand("protocol", "4 learning rates x 3 seeds selection sweep");
    protocol_cmd->add_option("--data", protocol.data, "encoded training cache")->required();
    protocol_cmd->add_option("--test-data", protocol.test_data, "held-out cache for the leak check");
    protocol_cmd->add_option("--units", protocol.units, "QMLunit count")->capture_default_str();
    protocol_cmd->add_option("--seed", protocol.seed, "base seed")->capture_default_str();
    protocol_cmd->add_option("--steps", protocol.steps, "gradient steps per trial")
        ->capture_default_str();
    protocol_cmd->add_option("--batch", protocol.batch, "minibatch size")->capture_default_str();
    protocol_cmd->add_flag("--adam", protocol.adam, "use Adam instead of plain SGD");
    protocol_cmd->add_option("--out", protocol.out, "output directory")->required();

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "labeled evaluation with RMSD/PCC summary");
    eval_cmd->add_option("--checkpoint", eval.checkpoint, "trained checkpoint")->required();
    eval_cmd->add_option("--data", eval.data, "encoded cache")->required();
    eval_cmd->add_option("--mode", eval.mode, "inference regime")
        ->check(CLI::IsMember({"full", "shots", "noisy"}))
        ->capture_default_str();
    eval_cmd->add_option("--shots", eval.shots, "shot count for --mode shots")
        ->capture_default_str();
    eval_cmd->add_option("--seed", eval.seed, "sampling seed")->capture_default_str();
    eval_cmd->add_option("--gamma", eval.gamma, "amplitude-damping rate for --mode noisy")
        ->capture_default_str();
    eval_cmd->add_option("--p-depol", eval.p_depol, "depolarizing probability for --mode noisy")
        ->capture_default_str();
    eval_cmd->add_option("--out", eval.out, "output CSV")->required();

    PredictArgs predict;
    CLI::App* predict_cmd = app.add_subcommand("predict", "batched inference");
    predict_cmd->add_option("--checkpoint", predict.checkpoint, "trained checkpoint")->required();
    predict_cmd->add_option("--data", predict.data, "encoded cache")->required();
    predict_cmd->add_option("--batch-width", predict.batch_width, "stacked-column width")
        ->capture_default_str();
    predict_cmd->add_option("--out", predict.out, "output CSV")->required();

    GradcheckArgs gradcheck;
    CLI::App* gradcheck_cmd =
        app.add_subcommand("gradcheck", "three-way gradient comparison table");
    gradcheck_cmd->add_option("--units", gradcheck.units, "QMLunit count")->capture_default_str();
    gradcheck_cmd->add_option("--seed", gradcheck.seed, "instance seed")->capture_default_str();
    gradcheck_cmd->add_option("--fd-step", gradcheck.h, "finite-difference step")->capture_default_str();
    gradcheck_cmd->add_option("--out", gradcheck.out, "output CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    apply_thread_cap(threads);
    const std::string command_line = join_command_line(argc, argv);

    try {
        if (voxelize->parsed()) return cmd_voxelize(vox, *voxelize, command_line);
        if (train_cmd->parsed()) return cmd_train(train, *train_cmd, command_line);
        if (protocol_cmd->parsed()) return cmd_protocol(protocol, *protocol_cmd, command_line);
        if (eval_cmd->parsed()) return cmd_eval(eval, *eval_cmd, command_line);
        if (predict_cmd->parsed()) return cmd_predict(predict, *predict_cmd, command_line);
        if (gradcheck_cmd->parsed()) return cmd_gradcheck(gradcheck, *gradcheck_cmd, command_line);
    } catch (const qcbind::version_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_version;
    } catch (const qcbind::capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_capacity;
    } catch (const qcbind::protocol_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_partial;
    } catch (const qcbind::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const qcbind::structural_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const qcbind::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const qcbind::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const qcbind::encode_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_internal;
}
