#ifndef QCBIND_MANIFEST_HPP
#define QCBIND_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qcbind {

/// Reproducibility record written next to every command output: the exact
/// command line, the effective configuration, and hashes of the artifacts.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::map<std::string, std::uint64_t> seeds;
    std::string topology;
    std::string convention;
    std::vector<std::filesystem::path> artifacts;
};

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

/// Serializes the manifest (hashing each artifact) and writes it atomically
/// via a temp file + rename.
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

} // namespace qcbind

#endif
