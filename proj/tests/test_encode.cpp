#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qcbind/encode.hpp"
#include "qcbind/errors.hpp"
#include "support/synthetic.hpp"

using namespace qcbind;
using doctest::Approx;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "qcbind_encode_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

ComplexRecord two_carbon_complex() {
    // Ligand centroid (0.25, 0.25, 0.25) puts atom A exactly on the center of
    // voxel (15, 15, 15) and atom B on (16, 16, 16).
    ComplexRecord record;
    record.id = "two-carbon";
    record.pkd = 5.0;
    record.atoms.push_back({"C", 0.0, 0.0, 0.0, Molecule::ligand});
    record.atoms.push_back({"C", 0.5, 0.5, 0.5, Molecule::ligand});
    record.atoms.push_back({"N", 2.0, 1.0, -1.0, Molecule::protein});
    return record;
}

} // namespace

TEST_CASE("occupancy branches") {
    CHECK(occupancy(0.0) == 1.0);
    CHECK(occupancy(1.5) == 0.0);
    CHECK(occupancy(2.0) == 0.0);
    CHECK(occupancy(17.3) == 0.0);

    const double e2 = std::exp(-2.0);
    CHECK(std::abs(occupancy(1.0) - e2) < 1e-12);
    // both branch formulas evaluated literally at r = 1
    CHECK(std::abs(std::exp(-2.0 * 1.0 * 1.0) - e2) < 1e-15);
    const double second = std::pow((3.0 - 2.0) / std::numbers::e, 2.0);
    CHECK(std::abs(second - e2) < 1e-15);

    const double at_125 = std::pow(0.5 / std::numbers::e, 2.0);
    CHECK(occupancy(1.25) == Approx(at_125).epsilon(1e-12));
    CHECK(occupancy(1.25) == Approx(0.033834).epsilon(1e-4));

    CHECK_THROWS_AS(occupancy(-0.01), input_error);
    CHECK_THROWS_AS(occupancy(std::nan("")), input_error);
}

TEST_CASE("occupancy is continuous at the branch point and strictly decreasing") {
    const double eps = 1e-6;
    CHECK(std::abs(occupancy(1.0 - eps) - occupancy(1.0 + eps)) < 1e-5);

    double prev = occupancy(0.0);
    for (int i = 1; i <= 300; ++i) {
        const double r = 1.5 * static_cast<double>(i) / 301.0;
        const double value = occupancy(r);
        CHECK(value < prev);
        prev = value;
    }
}

TEST_CASE("van der Waals radii follow the four-type table") {
    CHECK(vdw_radius("C") == 1.9);
    CHECK(vdw_radius("N") == 1.8);
    CHECK(vdw_radius("O") == 1.7);
    CHECK(vdw_radius("S") == 2.0);
    CHECK(vdw_radius("H") == 2.0);
    CHECK(vdw_radius("Zn") == 2.0);
    CHECK(vdw_radius("c") == 1.9); // case-insensitive symbols
}

TEST_CASE("atom channels separate molecule and type") {
    CHECK(atom_channel({"C", 0, 0, 0, Molecule::protein}) == 0);
    CHECK(atom_channel({"N", 0, 0, 0, Molecule::protein}) == 1);
    CHECK(atom_channel({"O", 0, 0, 0, Molecule::protein}) == 2);
    CHECK(atom_channel({"S", 0, 0, 0, Molecule::protein}) == 3);
    CHECK(atom_channel({"C", 0, 0, 0, Molecule::ligand}) == 4);
    CHECK(atom_channel({"Fe", 0, 0, 0, Molecule::ligand}) == 7);
}

TEST_CASE("a ligand atom on a voxel center scores occupancy 1") {
    const VoxelGrid grid = voxelize(two_carbon_complex());
    CHECK(grid.at(4, 15, 15, 15) == 1.0);
    CHECK(grid.at(4, 16, 16, 16) == 1.0);
}

TEST_CASE("atoms beyond reach contribute nothing") {
    ComplexRecord record = two_carbon_complex();
    record.atoms.push_back({"S", 40.0, 40.0, 40.0, Molecule::protein});
    const VoxelGrid grid = voxelize(record);
    // the distant sulfur would land in protein-other (channel 3)
    for (int x = 0; x < fine_grid; ++x)
        for (int y = 0; y < fine_grid; ++y)
            for (int z = 0; z < fine_grid; ++z) {
                if (grid.at(3, x, y, z) != 0.0) FAIL("unexpected occupancy from distant atom");
            }
    CHECK_THROWS_AS(voxelize(ComplexRecord{"empty", 5.0, {}}), input_error);
}

TEST_CASE("overlapping atoms aggregate by max (or clamped sum when configured)") {
    // All three ligand subsets below share centroid (0,0,0), so their grids
    // are directly comparable.
    ComplexRecord outer;
    outer.id = "outer";
    outer.atoms.push_back({"C", -0.5, 0.0, 0.0, Molecule::ligand});
    outer.atoms.push_back({"C", 0.5, 0.0, 0.0, Molecule::ligand});
    ComplexRecord center;
    center.id = "center";
    center.atoms.push_back({"C", 0.0, 0.0, 0.0, Molecule::ligand});
    ComplexRecord all = outer;
    all.id = "all";
    all.atoms.push_back(center.atoms[0]);

    const VoxelGrid g_outer = voxelize(outer, Aggregate::max);
    const VoxelGrid g_center = voxelize(center, Aggregate::max);
    const VoxelGrid g_all = voxelize(all, Aggregate::max);
    const VoxelGrid g_all_sum = voxelize(all, Aggregate::sum_clamped);

    bool saw_overlap = false;
    for (int x = 0; x < fine_grid; ++x)
        for (int y = 0; y < fine_grid; ++y)
            for (int z = 0; z < fine_grid; ++z) {
                const double expect = std::max(g_outer.at(4, x, y, z), g_center.at(4, x, y, z));
                CHECK(g_all.at(4, x, y, z) == expect);
                CHECK(g_all.at(4, x, y, z) <= 1.0);
                CHECK(g_all_sum.at(4, x, y, z) <= 1.0);
                CHECK(g_all_sum.at(4, x, y, z) >= g_all.at(4, x, y, z));
                if (g_outer.at(4, x, y, z) > 0.0 && g_center.at(4, x, y, z) > 0.0) {
                    saw_overlap = true;
                }
            }
    CHECK(saw_overlap);
}

TEST_CASE("ligand atoms never touch protein channels") {
    Rng rng(51);
    const ComplexRecord complex = testsupport::synthetic_complex(rng, "sep");
    ComplexRecord protein_only = complex;
    std::erase_if(protein_only.atoms,
                  [](const AtomRecord& a) { return a.molecule == Molecule::ligand; });
    // keep one far-away ligand atom so the grid stays centered identically
    // by reusing the full complex's ligand set for centering
    const VoxelGrid full = voxelize(complex);
    ComplexRecord ligand_only = complex;
    std::erase_if(ligand_only.atoms,
                  [](const AtomRecord& a) { return a.molecule == Molecule::protein; });
    const VoxelGrid lig = voxelize(ligand_only);
    for (int c = 0; c < 4; ++c) {
        for (int x = 0; x < fine_grid; ++x)
            for (int y = 0; y < fine_grid; ++y)
                for (int z = 0; z < fine_grid; ++z) {
                    CHECK(lig.at(c, x, y, z) == 0.0);
                }
    }
    // and the full grid's ligand channels coincide with the ligand-only grid
    for (int c = 4; c < 8; ++c) {
        for (int x = 0; x < fine_grid; ++x)
            for (int y = 0; y < fine_grid; ++y)
                for (int z = 0; z < fine_grid; ++z) {
                    CHECK(full.at(c, x, y, z) == lig.at(c, x, y, z));
                }
    }
}

TEST_CASE("pooling takes the block max per channel") {
    VoxelGrid grid;
    grid.values.assign(static_cast<std::size_t>(n_channels) * 32 * 32 * 32, 0.0);

    SUBCASE("all zero stays zero") {
        const PooledGrid out = pool(grid);
        for (double v : out) CHECK(v == 0.0);
    }
    SUBCASE("a single 0.7 cell survives in exactly one pooled cell") {
        grid.at(2, 9, 17, 30) = 0.7;
        const PooledGrid out = pool(grid);
        int nonzero = 0;
        for (double v : out) {
            if (v != 0.0) ++nonzero;
        }
        CHECK(nonzero == 1);
        CHECK(out[coarse_index(2, 1, 2, 3)] == 0.7);
    }
    SUBCASE("a constant grid pools to the same constant") {
        for (double& v : grid.values) v = 0.31;
        const PooledGrid out = pool(grid);
        for (double v : out) CHECK(v == 0.31);
    }
}

TEST_CASE("normalization splits the squared mass 0.5/0.5") {
    SUBCASE("known sums produce the expected scale factors") {
        PooledGrid pooled{};
        // protein: eight cells of 0.5 -> sum of squares 2.0
        for (int z = 0; z < 4; ++z) {
            pooled[coarse_index(0, 0, 0, z)] = 0.5;
            pooled[coarse_index(1, 1, 2, z)] = 0.5;
        }
        // ligand: two cells of 0.25 -> sum of squares 0.125
        pooled[coarse_index(4, 0, 0, 0)] = 0.25;
        pooled[coarse_index(5, 1, 2, 3)] = 0.25;

        const OccupancyVector v = normalize(pooled);
        CHECK(v.values[coarse_index(0, 0, 0, 0)] == Approx(0.25).epsilon(1e-12)); // x0.5
        CHECK(v.values[coarse_index(4, 0, 0, 0)] == Approx(0.5).epsilon(1e-12));  // x2.0

        double protein_sq = 0.0, ligand_sq = 0.0;
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            (i < 256 ? protein_sq : ligand_sq) += v.values[i] * v.values[i];
        }
        CHECK(protein_sq == Approx(0.5).epsilon(1e-9));
        CHECK(ligand_sq == Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("an already-normalized vector is a fixed point") {
        Rng rng(52);
        const OccupancyVector v = testsupport::random_occupancy(rng);
        PooledGrid pooled;
        std::copy(v.values.begin(), v.values.end(), pooled.begin());
        const OccupancyVector again = normalize(pooled);
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            CHECK(again.values[i] == Approx(v.values[i]).epsilon(1e-12));
        }
    }
    SUBCASE("zero occupancy in either group is rejected") {
        PooledGrid pooled{};
        pooled[coarse_index(4, 0, 0, 0)] = 1.0; // ligand only
        CHECK_THROWS_AS(normalize(pooled), encode_error);
        PooledGrid pooled2{};
        pooled2[coarse_index(0, 0, 0, 0)] = 1.0; // protein only
        CHECK_THROWS_AS(normalize(pooled2), encode_error);
    }
}

TEST_CASE("state encoding maps values to amplitudes verbatim") {
    Rng rng(53);
    const OccupancyVector v = testsupport::random_occupancy(rng);
    const StateVector state = to_state(v);
    CHECK(state.n_qubits == 9);
    CHECK(std::abs(state.norm_sq() - 1.0) < 1e-12);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        CHECK(state.amps[i].real() == v.values[i]);
        CHECK(state.amps[i].imag() == 0.0);
    }

    CHECK(coarse_index(7, 3, 3, 3) == 511);
    CHECK(coarse_index(0, 0, 0, 0) == 0);

    OccupancyVector bad{};
    bad.values[0] = 0.3;
    CHECK_THROWS_AS(to_state(bad), input_error);

    OccupancyVector poisoned = v;
    poisoned.values[17] = std::nan("");
    CHECK_THROWS_AS(to_state(poisoned), input_error);
}

TEST_CASE("translating every atom leaves the encoding unchanged") {
    Rng rng(54);
    ComplexRecord complex = testsupport::synthetic_complex(rng, "translate");
    const OccupancyVector base = encode_complex(complex);
    for (AtomRecord& atom : complex.atoms) {
        atom.x += 13.25;
        atom.y += -7.5;
        atom.z += 101.0;
    }
    const OccupancyVector moved = encode_complex(complex);
    for (std::size_t i = 0; i < base.values.size(); ++i) {
        CHECK(moved.values[i] == Approx(base.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("PDB parsing extracts coordinates and elements") {
    std::istringstream pdb(
        "HEADER    test\n"
        "ATOM      1  CA  ALA A   1       1.000   2.000   3.000  1.00  0.00           C  \n"
        "ATOM      2  N   ALA A   1       4.500  -2.250   0.125  1.00  0.00           N  \n"
        "HETATM    3 ZN    ZN A 100       0.000   0.000   9.000  1.00  0.00          ZN  \n");
    std::istringstream ligand("C 0.0 0.0 0.0\nO 1.0 0.0 0.0\n");
    const ComplexRecord record = parse_complex(pdb, ligand, "demo");

    REQUIRE(record.atoms.size() == 5);
    CHECK(record.atoms[0].element == "C");
    CHECK(record.atoms[0].x == 1.0);
    CHECK(record.atoms[0].y == 2.0);
    CHECK(record.atoms[0].z == 3.0);
    CHECK(record.atoms[0].molecule == Molecule::protein);
    CHECK(record.atoms[1].element == "N");
    CHECK(record.atoms[2].element == "Zn");
    CHECK(record.atoms[3].molecule == Molecule::ligand);
    CHECK(record.atoms[4].element == "O");
}

TEST_CASE("PDB element falls back to the atom-name column") {
    // 54-column record: no element field at columns 77-78
    std::istringstream pdb(
        "ATOM      1  CA  ALA A   1       1.000   2.000   3.000\n");
    std::istringstream ligand("C 0 0 0\n");
    const ComplexRecord record = parse_complex(pdb, ligand);
    CHECK(record.atoms[0].element == "C");
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream pdb("ATOM      1  CA  ALA A   1       1.0\n");
    std::istringstream ligand("C 0 0 0\n");
    CHECK_THROWS_WITH_AS(parse_complex(pdb, ligand), doctest::Contains("line 1"), parse_error);

    std::istringstream ok_pdb(
        "ATOM      1  CA  ALA A   1       1.000   2.000   3.000  1.00  0.00           C  \n");
    std::istringstream bad_ligand("C 0 0 0\nN xx 0 0\n");
    CHECK_THROWS_WITH_AS(parse_complex(ok_pdb, bad_ligand), doctest::Contains("line 2"),
                         parse_error);

    std::istringstream empty_pdb("");
    std::istringstream lig2("C 0 0 0\n");
    CHECK_THROWS_AS(parse_complex(empty_pdb, lig2), parse_error);
}

TEST_CASE("ligand JSON-lines form is accepted") {
    std::istringstream pdb(
        "ATOM      1  CA  ALA A   1       1.000   2.000   3.000  1.00  0.00           C  \n");
    std::istringstream ligand(R"({"el":"C","x":0.5,"y":-1.5,"z":2.0})"
                              "\n");
    const ComplexRecord record = parse_complex(pdb, ligand);
    REQUIRE(record.atoms.size() == 2);
    CHECK(record.atoms[1].element == "C");
    CHECK(record.atoms[1].x == 0.5);
    CHECK(record.atoms[1].molecule == Molecule::ligand);
}

TEST_CASE("dataset records round-trip through serialize and parse") {
    Rng rng(55);
    for (int i = 0; i < 5; ++i) {
        const ComplexRecord record = testsupport::synthetic_complex(rng, "rt-" + std::to_string(i));
        const ComplexRecord back = parse_complex_json(complex_to_json(record));
        CHECK(back.id == record.id);
        CHECK(back.pkd == record.pkd);
        REQUIRE(back.atoms.size() == record.atoms.size());
        for (std::size_t a = 0; a < record.atoms.size(); ++a) {
            CHECK(back.atoms[a].element == record.atoms[a].element);
            CHECK(back.atoms[a].x == record.atoms[a].x);
            CHECK(back.atoms[a].y == record.atoms[a].y);
            CHECK(back.atoms[a].z == record.atoms[a].z);
            CHECK(back.atoms[a].molecule == record.atoms[a].molecule);
        }
    }

    // unlabeled records serialize pkd as null and come back NaN
    ComplexRecord unlabeled = testsupport::synthetic_complex(rng, "nolabel");
    unlabeled.pkd = std::numeric_limits<double>::quiet_NaN();
    const ComplexRecord back = parse_complex_json(complex_to_json(unlabeled));
    CHECK_FALSE(back.has_label());
}

TEST_CASE("dataset files round-trip") {
    Rng rng(56);
    std::vector<ComplexRecord> records;
    for (int i = 0; i < 4; ++i) {
        records.push_back(testsupport::synthetic_complex(rng, "file-" + std::to_string(i)));
    }
    const auto path = temp_dir() / "dataset_roundtrip.jsonl";
    write_dataset(path, records);
    const std::vector<ComplexRecord> back = read_dataset(path);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].id == records[i].id);
        CHECK(back[i].atoms.size() == records[i].atoms.size());
    }
    CHECK_THROWS_AS(read_dataset(temp_dir() / "missing.jsonl"), io_error);
}

TEST_CASE("encoded-vector cache round-trips bit-exactly and rewrites identically") {
    Rng rng(57);
    EncodedDataset data;
    for (int i = 0; i < 3; ++i) {
        data.ids.push_back("c" + std::to_string(i));
        data.pkd.push_back(i == 1 ? std::numeric_limits<double>::quiet_NaN() : 4.5 + i);
        data.vectors.push_back(testsupport::random_occupancy(rng));
    }
    const auto path = temp_dir() / "cache.qvc";
    write_cache(path, data);
    const EncodedDataset back = read_cache(path);
    REQUIRE(back.size() == 3);
    CHECK(back.ids == data.ids);
    CHECK(back.pkd[0] == data.pkd[0]);
    CHECK(std::isnan(back.pkd[1]));
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t k = 0; k < 512; ++k) {
            CHECK(back.vectors[i].values[k] == data.vectors[i].values[k]);
        }
    }

    // deterministic bytes on rewrite
    std::ifstream first(path, std::ios::binary);
    std::stringstream first_bytes;
    first_bytes << first.rdbuf();
    write_cache(path, data);
    std::ifstream second(path, std::ios::binary);
    std::stringstream second_bytes;
    second_bytes << second.rdbuf();
    CHECK(first_bytes.str() == second_bytes.str());

    // corrupted magic is rejected
    const auto bogus = temp_dir() / "bogus.qvc";
    std::ofstream out(bogus, std::ios::binary);
    out << "not a cache at all";
    out.close();
    CHECK_THROWS_AS(read_cache(bogus), parse_error);
}

TEST_CASE("full encoding satisfies the split-norm invariant on synthetic complexes") {
    Rng rng(58);
    for (int i = 0; i < 10; ++i) {
        const ComplexRecord complex = testsupport::synthetic_complex(rng, "n" + std::to_string(i));
        const OccupancyVector v = encode_complex(complex);
        double protein_sq = 0.0, ligand_sq = 0.0;
        for (std::size_t k = 0; k < v.values.size(); ++k) {
            (k < 256 ? protein_sq : ligand_sq) += v.values[k] * v.values[k];
        }
        CHECK(std::abs(protein_sq - 0.5) < 1e-9);
        CHECK(std::abs(ligand_sq - 0.5) < 1e-9);
    }
}
