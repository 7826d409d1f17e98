#include "qcbind/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcbind/circuit.hpp"
#include "qcbind/errors.hpp"

namespace qcbind {

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot hash '" + path.string() + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buffer[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buffer))) break;
    }
    return h;
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string hex64(std::uint64_t v) {
    char buffer[19];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(v));
    return buffer;
}

} // namespace

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["config"] = manifest.config;
    j["seeds"] = manifest.seeds;
    j["topology_version"] = manifest.topology.empty() ? topology_version : manifest.topology;
    j["gate_convention"] = manifest.convention.empty() ? gate_convention : manifest.convention;
    nlohmann::ordered_json hashes;
    for (const auto& artifact : manifest.artifacts) {
        hashes[artifact.filename().string()] = "fnv1a64:" + hex64(fnv1a64_file(artifact));
    }
    j["artifacts"] = std::move(hashes);
    j["timestamp"] = utc_timestamp();

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw io_error("cannot write '" + tmp.string() + "'");
        out << j.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

} // namespace qcbind
