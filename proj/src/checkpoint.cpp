#include "qcbind/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcbind/circuit.hpp"
#include "qcbind/errors.hpp"

namespace qcbind {

std::string checkpoint_to_json(const Checkpoint& ckpt) {
    nlohmann::ordered_json j;
    j["n_units"] = ckpt.n_units;
    j["topology_version"] = ckpt.topology;
    j["params"] = ckpt.params;
    j["seed"] = ckpt.seed;
    j["gate_convention"] = ckpt.convention;
    if (ckpt.train) {
        j["train"] = {{"learning_rate", ckpt.train->learning_rate},
                      {"max_steps", ckpt.train->max_steps},
                      {"batch_size", ckpt.train->batch_size},
                      {"optimizer", ckpt.train->optimizer}};
    }
    return j.dump(2) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw parse_error("checkpoint: invalid JSON");
    }
    Checkpoint ckpt;
    try {
        ckpt.n_units = j.at("n_units").get<int>();
        ckpt.topology = j.at("topology_version").get<std::string>();
        ckpt.convention = j.at("gate_convention").get<std::string>();
        ckpt.params = j.at("params").get<std::vector<double>>();
        ckpt.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("train") && !j["train"].is_null()) {
            TrainStamp stamp;
            const auto& t = j["train"];
            stamp.learning_rate = t.value("learning_rate", 0.0);
            stamp.max_steps = t.value("max_steps", 0);
            stamp.batch_size = t.value("batch_size", 0);
            stamp.optimizer = t.value("optimizer", std::string{});
            ckpt.train = stamp;
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("checkpoint: ") + e.what());
    }
    if (ckpt.topology != topology_version) {
        throw version_error("checkpoint topology '" + ckpt.topology +
                            "' is not supported by this build (expected '" + topology_version +
                            "')");
    }
    if (ckpt.convention != gate_convention) {
        throw version_error("checkpoint gate convention '" + ckpt.convention +
                            "' is not supported by this build (expected '" + gate_convention +
                            "')");
    }
    if (ckpt.n_units < 1 || ckpt.n_units > 10) {
        throw parse_error("checkpoint: unit count out of range");
    }
    if (static_cast<int>(ckpt.params.size()) != ckpt.n_units * params_per_unit) {
        throw parse_error("checkpoint: parameter count does not match unit count");
    }
    return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot write '" + path.string() + "'");
    out << checkpoint_to_json(ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return checkpoint_from_json(buffer.str());
}

} // namespace qcbind
