#ifndef QCBIND_CHECKPOINT_HPP
#define QCBIND_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qcbind {

/// Extra training metadata carried inside a checkpoint for reproducibility.
struct TrainStamp {
    double learning_rate = 0.0;
    int max_steps = 0;
    int batch_size = 0;
    std::string optimizer;
};

struct Checkpoint {
    int n_units = 0;
    std::string topology = "canonical-v1";
    std::string convention = "rx-rz-standard-v1";
    std::vector<double> params;
    std::uint64_t seed = 0;
    std::optional<TrainStamp> train;
};

std::string checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
/// Rejects unknown topology_version / gate_convention with version_error.
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace qcbind

#endif
