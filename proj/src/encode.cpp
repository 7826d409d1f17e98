#include "qcbind/encode.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qcbind/circuit.hpp"
#include "qcbind/errors.hpp"
#include "qcbind/rng.hpp"

namespace qcbind {

namespace {

constexpr double occupancy_cutoff = 1.5; // in units of vdW radius

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string canonical_element(const std::string& raw) {
    std::string el = trim(raw);
    if (el.empty()) return el;
    el[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(el[0])));
    for (std::size_t i = 1; i < el.size(); ++i) {
        el[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(el[i])));
    }
    return el;
}

int element_type_index(const std::string& element) {
    if (element == "C") return 0;
    if (element == "N") return 1;
    if (element == "O") return 2;
    return 3;
}

} // namespace

double occupancy(double r) {
    if (r < 0.0 || !std::isfinite(r)) {
        throw input_error("occupancy: normalized distance must be finite and non-negative");
    }
    if (r < 1.0) return std::exp(-2.0 * r * r);
    if (r < occupancy_cutoff) {
        const double t = (3.0 - 2.0 * r) / std::numbers::e;
        return t * t;
    }
    return 0.0;
}

double vdw_radius(const std::string& element) {
    switch (element_type_index(canonical_element(element))) {
    case 0: return 1.9;
    case 1: return 1.8;
    case 2: return 1.7;
    default: return 2.0;
    }
}

int atom_channel(const AtomRecord& atom) {
    const int base = atom.molecule == Molecule::protein ? 0 : 4;
    return base + element_type_index(canonical_element(atom.element));
}

VoxelGrid voxelize(const ComplexRecord& complex, Aggregate aggregate) {
    double cx = 0.0, cy = 0.0, cz = 0.0;
    std::size_t n_center = 0;
    for (const AtomRecord& a : complex.atoms) {
        if (a.molecule != Molecule::ligand) continue;
        if (canonical_element(a.element) == "H") continue;
        cx += a.x;
        cy += a.y;
        cz += a.z;
        ++n_center;
    }
    if (n_center == 0) {
        // All-hydrogen ligands center on every ligand atom instead.
        for (const AtomRecord& a : complex.atoms) {
            if (a.molecule != Molecule::ligand) continue;
            cx += a.x;
            cy += a.y;
            cz += a.z;
            ++n_center;
        }
    }
    if (n_center == 0) {
        throw input_error("voxelize: complex '" + complex.id + "' has no ligand atoms");
    }
    cx /= static_cast<double>(n_center);
    cy /= static_cast<double>(n_center);
    cz /= static_cast<double>(n_center);

    const double origin[3] = {cx - grid_side / 2.0, cy - grid_side / 2.0, cz - grid_side / 2.0};

    VoxelGrid grid;
    grid.values.assign(static_cast<std::size_t>(n_channels) * fine_grid * fine_grid * fine_grid,
                       0.0);

    for (const AtomRecord& atom : complex.atoms) {
        const double radius = vdw_radius(atom.element);
        const double reach = occupancy_cutoff * radius;
        const int channel = atom_channel(atom);
        const double pos[3] = {atom.x, atom.y, atom.z};

        int lo[3], hi[3];
        bool outside = false;
        for (int axis = 0; axis < 3; ++axis) {
            // Voxel centers sit at origin + (i + 0.5) * edge.
            const double min_center = pos[axis] - reach - origin[axis];
            const double max_center = pos[axis] + reach - origin[axis];
            lo[axis] = std::max(0, static_cast<int>(std::ceil(min_center / voxel_edge - 0.5)));
            hi[axis] = std::min(fine_grid - 1,
                                static_cast<int>(std::floor(max_center / voxel_edge - 0.5)));
            if (lo[axis] > hi[axis]) outside = true;
        }
        if (outside) continue;

        for (int ix = lo[0]; ix <= hi[0]; ++ix) {
            const double dx = origin[0] + (ix + 0.5) * voxel_edge - pos[0];
            for (int iy = lo[1]; iy <= hi[1]; ++iy) {
                const double dy = origin[1] + (iy + 0.5) * voxel_edge - pos[1];
                for (int iz = lo[2]; iz <= hi[2]; ++iz) {
                    const double dz = origin[2] + (iz + 0.5) * voxel_edge - pos[2];
                    const double r = std::sqrt(dx * dx + dy * dy + dz * dz) / radius;
                    if (r >= occupancy_cutoff) continue;
                    const double occ = occupancy(r);
                    double& cell = grid.at(channel, ix, iy, iz);
                    if (aggregate == Aggregate::max) {
                        cell = std::max(cell, occ);
                    } else {
                        cell = std::min(1.0, cell + occ);
                    }
                }
            }
        }
    }
    return grid;
}

PooledGrid pool(const VoxelGrid& grid) {
    PooledGrid out{};
    constexpr int block = fine_grid / coarse_grid; // 8
    for (int c = 0; c < n_channels; ++c) {
        for (int X = 0; X < coarse_grid; ++X) {
            for (int Y = 0; Y < coarse_grid; ++Y) {
                for (int Z = 0; Z < coarse_grid; ++Z) {
                    double best = 0.0;
                    for (int x = X * block; x < (X + 1) * block; ++x) {
                        for (int y = Y * block; y < (Y + 1) * block; ++y) {
                            for (int z = Z * block; z < (Z + 1) * block; ++z) {
                                best = std::max(best, grid.at(c, x, y, z));
                            }
                        }
                    }
                    out[coarse_index(c, X, Y, Z)] = best;
                }
            }
        }
    }
    return out;
}

OccupancyVector normalize(const PooledGrid& pooled) {
    double protein_sq = 0.0;
    double ligand_sq = 0.0;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        const double v2 = pooled[i] * pooled[i];
        if (i < 256) {
            protein_sq += v2;
        } else {
            ligand_sq += v2;
        }
    }
    if (protein_sq <= 0.0) {
        throw encode_error("normalize: no protein occupancy inside the grid");
    }
    if (ligand_sq <= 0.0) {
        throw encode_error("normalize: no ligand occupancy inside the grid");
    }
    const double protein_scale = std::sqrt(0.5 / protein_sq);
    const double ligand_scale = std::sqrt(0.5 / ligand_sq);
    OccupancyVector out;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        out.values[i] = pooled[i] * (i < 256 ? protein_scale : ligand_scale);
    }
    return out;
}

StateVector to_state(const OccupancyVector& v) {
    double norm_sq = 0.0;
    for (double value : v.values) norm_sq += value * value;
    if (!(std::abs(norm_sq - 1.0) <= 1e-9)) { // negated form also rejects NaN
        throw input_error("to_state: occupancy vector is not normalized");
    }
    std::vector<c64> amps(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        amps[i] = c64{v.values[i], 0.0};
    }
    return StateVector::from_amplitudes(model_qubits, std::move(amps));
}

OccupancyVector encode_complex(const ComplexRecord& complex, Aggregate aggregate) {
    return normalize(pool(voxelize(complex, aggregate)));
}

OccupancyVector random_occupancy(Rng& rng) {
    OccupancyVector v;
    double protein_sq = 0.0, ligand_sq = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        v.values[i] = rng.next_unit();
        (i < 256 ? protein_sq : ligand_sq) += v.values[i] * v.values[i];
    }
    const double sp = std::sqrt(0.5 / protein_sq);
    const double sl = std::sqrt(0.5 / ligand_sq);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        v.values[i] *= i < 256 ? sp : sl;
    }
    return v;
}

//----------------------------------------------------------------------------
// parsing
//----------------------------------------------------------------------------

namespace {

double parse_coord(const std::string& field, std::size_t line_number, const char* what) {
    try {
        const double v = std::stod(field);
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(line_number) + ": bad " + what + " '" +
                          trim(field) + "'");
    }
}

std::string pdb_element(const std::string& line, std::size_t line_number) {
    // Columns 77-78 (1-based); fall back to the first alphabetic character of
    // the atom-name field (columns 13-16).
    if (line.size() >= 78) {
        const std::string el = trim(line.substr(76, 2));
        if (!el.empty()) return canonical_element(el);
    }
    if (line.size() >= 16) {
        for (std::size_t i = 12; i < 16 && i < line.size(); ++i) {
            if (std::isalpha(static_cast<unsigned char>(line[i]))) {
                return canonical_element(std::string(1, line[i]));
            }
        }
    }
    throw parse_error("line " + std::to_string(line_number) + ": no element symbol");
}

std::vector<AtomRecord> parse_pdb_atoms(std::istream& in) {
    std::vector<AtomRecord> atoms;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.rfind("ATOM", 0) != 0 && line.rfind("HETATM", 0) != 0) continue;
        if (line.size() < 54) {
            throw parse_error("line " + std::to_string(line_number) +
                              ": truncated ATOM record");
        }
        AtomRecord atom;
        atom.molecule = Molecule::protein;
        atom.x = parse_coord(line.substr(30, 8), line_number, "x coordinate");
        atom.y = parse_coord(line.substr(38, 8), line_number, "y coordinate");
        atom.z = parse_coord(line.substr(46, 8), line_number, "z coordinate");
        atom.element = pdb_element(line, line_number);
        atoms.push_back(std::move(atom));
    }
    return atoms;
}

AtomRecord ligand_atom_from_json(const nlohmann::json& j, std::size_t line_number) {
    AtomRecord atom;
    atom.molecule = Molecule::ligand;
    try {
        atom.element = canonical_element(j.at("el").get<std::string>());
        atom.x = j.at("x").get<double>();
        atom.y = j.at("y").get<double>();
        atom.z = j.at("z").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("line " + std::to_string(line_number) + ": " + e.what());
    }
    return atom;
}

std::vector<AtomRecord> parse_ligand_atoms(std::istream& in) {
    std::vector<AtomRecord> atoms;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        if (body[0] == '{') {
            nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
            if (j.is_discarded()) {
                throw parse_error("line " + std::to_string(line_number) + ": invalid JSON");
            }
            atoms.push_back(ligand_atom_from_json(j, line_number));
            continue;
        }
        std::istringstream fields(body);
        std::string element, xs, ys, zs;
        if (!(fields >> element >> xs >> ys >> zs)) {
            throw parse_error("line " + std::to_string(line_number) +
                              ": expected 'element x y z'");
        }
        AtomRecord atom;
        atom.molecule = Molecule::ligand;
        atom.element = canonical_element(element);
        atom.x = parse_coord(xs, line_number, "x coordinate");
        atom.y = parse_coord(ys, line_number, "y coordinate");
        atom.z = parse_coord(zs, line_number, "z coordinate");
        atoms.push_back(std::move(atom));
    }
    return atoms;
}

void append_le_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_le_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_le_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    append_le_u64(out, bits);
}

std::uint32_t read_le_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t read_le_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

double read_le_f64(std::istream& in) {
    const std::uint64_t bits = read_le_u64(in);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

constexpr std::uint32_t cache_magic = 0x434f5651; // "QVOC" little-endian
constexpr std::uint32_t cache_version = 1;

} // namespace

ComplexRecord parse_complex(std::istream& protein_pdb, std::istream& ligand,
                            const std::string& id) {
    ComplexRecord record;
    record.id = id;
    record.atoms = parse_pdb_atoms(protein_pdb);
    if (record.atoms.empty()) {
        throw parse_error("protein source contains no ATOM/HETATM records");
    }
    std::vector<AtomRecord> ligand_atoms = parse_ligand_atoms(ligand);
    if (ligand_atoms.empty()) {
        throw parse_error("ligand source contains no atoms");
    }
    record.atoms.insert(record.atoms.end(), ligand_atoms.begin(), ligand_atoms.end());
    return record;
}

ComplexRecord parse_complex(const std::filesystem::path& protein_pdb,
                            const std::filesystem::path& ligand) {
    std::ifstream protein(protein_pdb);
    if (!protein) throw io_error("cannot open '" + protein_pdb.string() + "'");
    std::ifstream lig(ligand);
    if (!lig) throw io_error("cannot open '" + ligand.string() + "'");
    return parse_complex(protein, lig, protein_pdb.stem().string());
}

ComplexRecord parse_complex_json(const std::string& line, std::size_t line_number) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
        throw parse_error("line " + std::to_string(line_number) + ": invalid JSON");
    }
    ComplexRecord record;
    try {
        record.id = j.at("id").get<std::string>();
        if (j.contains("pkd") && !j["pkd"].is_null()) {
            record.pkd = j["pkd"].get<double>();
        }
        for (const auto& ja : j.at("atoms")) {
            AtomRecord atom;
            atom.element = canonical_element(ja.at("el").get<std::string>());
            atom.x = ja.at("x").get<double>();
            atom.y = ja.at("y").get<double>();
            atom.z = ja.at("z").get<double>();
            const std::string mol = ja.at("mol").get<std::string>();
            if (mol == "protein") {
                atom.molecule = Molecule::protein;
            } else if (mol == "ligand") {
                atom.molecule = Molecule::ligand;
            } else {
                throw parse_error("line " + std::to_string(line_number) + ": unknown mol '" +
                                  mol + "'");
            }
            record.atoms.push_back(std::move(atom));
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("line " + std::to_string(line_number) + ": " + e.what());
    }
    return record;
}

std::string complex_to_json(const ComplexRecord& complex) {
    nlohmann::ordered_json j;
    j["id"] = complex.id;
    if (complex.has_label()) {
        j["pkd"] = complex.pkd;
    } else {
        j["pkd"] = nullptr;
    }
    nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
    for (const AtomRecord& a : complex.atoms) {
        nlohmann::ordered_json ja;
        ja["el"] = a.element;
        ja["x"] = a.x;
        ja["y"] = a.y;
        ja["z"] = a.z;
        ja["mol"] = a.molecule == Molecule::protein ? "protein" : "ligand";
        atoms.push_back(std::move(ja));
    }
    j["atoms"] = std::move(atoms);
    return j.dump();
}

std::vector<ComplexRecord> read_dataset(const std::filesystem::path& jsonl) {
    std::ifstream in(jsonl);
    if (!in) throw io_error("cannot open '" + jsonl.string() + "'");
    std::vector<ComplexRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        records.push_back(parse_complex_json(line, line_number));
    }
    if (records.empty()) {
        throw parse_error("'" + jsonl.string() + "' contains no records");
    }
    return records;
}

void write_dataset(const std::filesystem::path& jsonl,
                   const std::vector<ComplexRecord>& records) {
    std::ofstream out(jsonl);
    if (!out) throw io_error("cannot write '" + jsonl.string() + "'");
    for (const ComplexRecord& r : records) {
        out << complex_to_json(r) << '\n';
    }
}

void write_cache(const std::filesystem::path& path, const EncodedDataset& data) {
    if (data.ids.size() != data.size() || data.pkd.size() != data.size()) {
        throw input_error("write_cache: ids/pkd/vectors lengths differ");
    }
    std::string blob;
    blob.reserve(16 + data.size() * 512 * 8);
    append_le_u32(blob, cache_magic);
    append_le_u32(blob, cache_version);
    append_le_u64(blob, data.size());
    for (const OccupancyVector& v : data.vectors) {
        for (double value : v.values) append_le_f64(blob, value);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write '" + path.string() + "'");
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw io_error("short write to '" + path.string() + "'");

    std::ofstream meta(path.string() + ".meta.jsonl", std::ios::trunc);
    if (!meta) throw io_error("cannot write '" + path.string() + ".meta.jsonl'");
    for (std::size_t i = 0; i < data.size(); ++i) {
        nlohmann::ordered_json j;
        j["id"] = data.ids[i];
        if (std::isfinite(data.pkd[i])) {
            j["pkd"] = data.pkd[i];
        } else {
            j["pkd"] = nullptr;
        }
        meta << j.dump() << '\n';
    }
}

EncodedDataset read_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path.string() + "'");
    if (read_le_u32(in) != cache_magic) {
        throw parse_error("'" + path.string() + "' is not an encoded-vector cache");
    }
    const std::uint32_t version = read_le_u32(in);
    if (version != cache_version) {
        throw version_error("cache version " + std::to_string(version) + " unsupported");
    }
    const std::uint64_t count = read_le_u64(in);
    if (!in) throw parse_error("'" + path.string() + "': truncated header");

    EncodedDataset data;
    data.vectors.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        for (double& value : data.vectors[i].values) value = read_le_f64(in);
    }
    if (!in) throw parse_error("'" + path.string() + "': truncated payload");

    const std::string meta_path = path.string() + ".meta.jsonl";
    std::ifstream meta(meta_path);
    if (!meta) throw io_error("cannot open '" + meta_path + "'");
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(meta, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("id")) {
            throw parse_error(meta_path + " line " + std::to_string(line_number) +
                              ": invalid record");
        }
        data.ids.push_back(j["id"].get<std::string>());
        data.pkd.push_back(j.contains("pkd") && !j["pkd"].is_null()
                               ? j["pkd"].get<double>()
                               : std::numeric_limits<double>::quiet_NaN());
    }
    if (data.ids.size() != count) {
        throw parse_error(meta_path + ": sidecar record count does not match cache");
    }
    return data;
}

} // namespace qcbind
