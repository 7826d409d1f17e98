#ifndef QCBIND_ENCODE_HPP
#define QCBIND_ENCODE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qcbind/state.hpp"

namespace qcbind {

enum class Molecule { protein, ligand };

struct AtomRecord {
    std::string element; // chemical symbol, e.g. "C", "Zn"
    double x = 0.0, y = 0.0, z = 0.0; // Angstrom
    Molecule molecule = Molecule::protein;
};

struct ComplexRecord {
    std::string id;
    double pkd = std::numeric_limits<double>::quiet_NaN(); // NaN when unlabeled
    std::vector<AtomRecord> atoms;

    bool has_label() const { return std::isfinite(pkd); }
};

// Channel layout: protein {C,N,O,other} = 0..3, ligand {C,N,O,other} = 4..7.
inline constexpr int n_channels = 8;
inline constexpr int fine_grid = 32;   // voxels per axis, 0.5 A edge
inline constexpr int coarse_grid = 4;  // after 8x8x8 max pooling
inline constexpr double grid_side = 16.0; // A
inline constexpr double voxel_edge = 0.5; // A

/// Index of (channel, x, y, z) in the 512-value coarse layout; the channel
/// occupies qubits 8..6 (T2,T1,T0) and the position bits qubits 5..0.
constexpr std::size_t coarse_index(int c, int x, int y, int z) {
    return static_cast<std::size_t>(c * 64 + x * 16 + y * 4 + z);
}

struct OccupancyVector {
    std::array<double, 512> values{};
};

/// 8 x 32^3 fine occupancy grid, channel-major.
struct VoxelGrid {
    std::vector<double> values; // n_channels * 32^3

    double& at(int c, int x, int y, int z) {
        return values[static_cast<std::size_t>(((c * fine_grid + x) * fine_grid + y) * fine_grid +
                                               z)];
    }
    double at(int c, int x, int y, int z) const {
        return values[static_cast<std::size_t>(((c * fine_grid + x) * fine_grid + y) * fine_grid +
                                               z)];
    }
};

using PooledGrid = std::array<double, 512>;

/// How overlapping atomic contributions combine within one voxel/channel.
enum class Aggregate { max, sum_clamped };

/// Occupancy of Eq.-style decay at normalized distance r (ratio to vdW radius):
/// e^{-2 r^2} below 1, ((3-2r)/e)^2 on [1, 1.5), zero beyond.
double occupancy(double r);

/// Van der Waals radius in Angstrom: C 1.9, N 1.8, O 1.7, anything else 2.0.
double vdw_radius(const std::string& element);

/// Channel for an atom: 0..3 protein {C,N,O,other}, 4..7 ligand.
int atom_channel(const AtomRecord& atom);

/// 16 A cube centered on the ligand heavy-atom centroid, 32^3 voxels.
VoxelGrid voxelize(const ComplexRecord& complex, Aggregate aggregate = Aggregate::max);

/// Per-channel max over disjoint 8^3 blocks.
PooledGrid pool(const VoxelGrid& grid);

/// Scale protein and ligand channel groups to squared sums of 0.5 each.
OccupancyVector normalize(const PooledGrid& pooled);

/// Amplitude encoding: values become the 9-qubit state amplitudes verbatim.
StateVector to_state(const OccupancyVector& v);

/// Full pipeline for one complex.
OccupancyVector encode_complex(const ComplexRecord& complex, Aggregate aggregate = Aggregate::max);

class Rng;
/// Seeded synthetic input obeying the split-norm invariant; used by the
/// gradcheck command and the synthetic evaluation sets.
OccupancyVector random_occupancy(Rng& rng);

// -- parsing ----------------------------------------------------------------

/// Protein atoms from PDB ATOM/HETATM records plus ligand atoms from either
/// "element x y z" lines or JSON-lines {"el","x","y","z"} (auto-detected).
ComplexRecord parse_complex(std::istream& protein_pdb, std::istream& ligand,
                            const std::string& id = "");
ComplexRecord parse_complex(const std::filesystem::path& protein_pdb,
                            const std::filesystem::path& ligand);

/// One dataset record per line: {"id", "pkd", "atoms":[{"el","x","y","z","mol"}...]}.
ComplexRecord parse_complex_json(const std::string& line, std::size_t line_number = 0);
std::string complex_to_json(const ComplexRecord& complex);

std::vector<ComplexRecord> read_dataset(const std::filesystem::path& jsonl);
void write_dataset(const std::filesystem::path& jsonl, const std::vector<ComplexRecord>& records);

// -- encoded-vector cache ----------------------------------------------------

/// Binary cache: little-endian header {magic "QVOC", version, count} followed
/// by count x 512 float64 values; ids and labels live in a JSON-lines sidecar
/// at <path>.meta.jsonl. Bit-exact across platforms.
struct EncodedDataset {
    std::vector<std::string> ids;
    std::vector<double> pkd; // NaN when unlabeled
    std::vector<OccupancyVector> vectors;

    std::size_t size() const { return vectors.size(); }
};

void write_cache(const std::filesystem::path& path, const EncodedDataset& data);
EncodedDataset read_cache(const std::filesystem::path& path);

} // namespace qcbind

#endif
