#include "qcbind/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace qcbind::kernels {

namespace {

// Reductions accumulate fixed-size blocks left to right, then fold the block
// partials left to right. Serial and OpenMP flavours share this association,
// so they agree bitwise for any thread count.
constexpr std::size_t kBlock = 4096;

inline std::size_t expand1(std::size_t k, std::size_t lo_mask, std::size_t hi_mask) {
    return ((k & hi_mask) << 1) | (k & lo_mask);
}

struct PairMasks {
    std::size_t lo, hi, bit;
};

inline PairMasks pair_masks(int target) {
    const std::size_t bit = std::size_t{1} << target;
    return {bit - 1, ~(bit - 1), bit};
}

struct QuadMasks {
    std::size_t lo, mid, hi;
};

inline QuadMasks quad_masks(int a, int b) {
    const int p_lo = a < b ? a : b;
    const int p_hi = a < b ? b : a;
    const std::size_t lo = (std::size_t{1} << p_lo) - 1;
    const std::size_t below_hi = (std::size_t{1} << (p_hi - 1)) - 1;
    return {lo, below_hi ^ lo, ~below_hi};
}

inline std::size_t expand2(std::size_t k, const QuadMasks& m) {
    return ((k & m.hi) << 2) | ((k & m.mid) << 1) | (k & m.lo);
}

inline void rotate_pair(c64& a0, c64& a1, const Mat2& m) {
    const c64 t0 = a0;
    const c64 t1 = a1;
    a0 = m[0] * t0 + m[1] * t1;
    a1 = m[2] * t0 + m[3] * t1;
}

// Amplitude-damping action on one 2x2 sub-block of rho:
//   [[a + g*d, s*b], [s*c, (1-g)*d]] with s = sqrt(1-g).
inline void damp_block(c64& a, c64& b, c64& c, c64& d, double gamma, double s) {
    a += gamma * d;
    b *= s;
    c *= s;
    d *= 1.0 - gamma;
}

// Depolarizing (1-p)rho + (p/3)(X rho X + Y rho Y + Z rho Z) on one sub-block.
inline void depol_block(c64& a, c64& b, c64& c, c64& d, double p) {
    const double keep = 1.0 - 2.0 * p / 3.0;
    const double mix = 2.0 * p / 3.0;
    const double off = 1.0 - 4.0 * p / 3.0;
    const c64 ta = a;
    const c64 td = d;
    a = keep * ta + mix * td;
    d = mix * ta + keep * td;
    b *= off;
    c *= off;
}

} // namespace

Mat2 rx_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {c64{c, 0.0}, c64{0.0, -s}, c64{0.0, -s}, c64{c, 0.0}};
}

Mat2 rz_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {c64{c, -s}, c64{}, c64{}, c64{c, s}};
}

//--------------------------------------------------------------------------
// serial reference
//--------------------------------------------------------------------------

namespace serial {

void apply_1q(c64* amps, std::size_t dim, int target, const Mat2& m) {
    const auto [lo, hi, bit] = pair_masks(target);
    const std::size_t pairs = dim >> 1;
    for (std::size_t k = 0; k < pairs; ++k) {
        const std::size_t i0 = expand1(k, lo, hi);
        rotate_pair(amps[i0], amps[i0 | bit], m);
    }
}

void apply_cnot(c64* amps, std::size_t dim, int control, int target) {
    const QuadMasks m = quad_masks(control, target);
    const std::size_t c_bit = std::size_t{1} << control;
    const std::size_t t_bit = std::size_t{1} << target;
    const std::size_t quads = dim >> 2;
    for (std::size_t k = 0; k < quads; ++k) {
        const std::size_t i10 = expand2(k, m) | c_bit;
        std::swap(amps[i10], amps[i10 | t_bit]);
    }
}

void apply_1q_batched(c64* amps, std::size_t dim, std::size_t width, int target, const Mat2& m) {
    const auto [lo, hi, bit] = pair_masks(target);
    const std::size_t pairs = dim >> 1;
    for (std::size_t k = 0; k < pairs; ++k) {
        const std::size_t i0 = expand1(k, lo, hi) * width;
        const std::size_t i1 = i0 + bit * width;
        for (std::size_t j = 0; j < width; ++j) {
            rotate_pair(amps[i0 + j], amps[i1 + j], m);
        }
    }
}

void apply_cnot_batched(c64* amps, std::size_t dim, std::size_t width, int control, int target) {
    const QuadMasks m = quad_masks(control, target);
    const std::size_t c_bit = std::size_t{1} << control;
    const std::size_t t_bit = std::size_t{1} << target;
    const std::size_t quads = dim >> 2;
    for (std::size_t k = 0; k < quads; ++k) {
        const std::size_t i10 = (expand2(k, m) | c_bit) * width;
        const std::size_t i11 = i10 + t_bit * width;
        for (std::size_t j = 0; j < width; ++j) {
            std::swap(amps[i10 + j], amps[i11 + j]);
        }
    }
}

void damp(c64* rho, std::size_t dim, int qubit, double gamma) {
    const auto [lo, hi, bit] = pair_masks(qubit);
    const double s = std::sqrt(1.0 - gamma);
    const std::size_t half = dim >> 1;
    for (std::size_t br = 0; br < half; ++br) {
        const std::size_t r0 = expand1(br, lo, hi) * dim;
        const std::size_t r1 = r0 + bit * dim;
        for (std::size_t bc = 0; bc < half; ++bc) {
            const std::size_t c0 = expand1(bc, lo, hi);
            const std::size_t c1 = c0 | bit;
            damp_block(rho[r0 + c0], rho[r0 + c1], rho[r1 + c0], rho[r1 + c1], gamma, s);
        }
    }
}

void depolarize(c64* rho, std::size_t dim, int qubit, double p) {
    const auto [lo, hi, bit] = pair_masks(qubit);
    const std::size_t half = dim >> 1;
    for (std::size_t br = 0; br < half; ++br) {
        const std::size_t r0 = expand1(br, lo, hi) * dim;
        const std::size_t r1 = r0 + bit * dim;
        for (std::size_t bc = 0; bc < half; ++bc) {
            const std::size_t c0 = expand1(bc, lo, hi);
            const std::size_t c1 = c0 | bit;
            depol_block(rho[r0 + c0], rho[r0 + c1], rho[r1 + c0], rho[r1 + c1], p);
        }
    }
}

double sum_abs2(const c64* amps, std::size_t n) {
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    double total = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t end = std::min(n, (b + 1) * kBlock);
        double part = 0.0;
        for (std::size_t i = b * kBlock; i < end; ++i) {
            part += std::norm(amps[i]);
        }
        total += part;
    }
    return total;
}

double sum_abs2_bit(const c64* amps, std::size_t dim, int bit, int value) {
    const auto [lo, hi, mask] = pair_masks(bit);
    const std::size_t half = dim >> 1;
    const std::size_t offset = value ? mask : 0;
    const std::size_t n_blocks = (half + kBlock - 1) / kBlock;
    double total = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t end = std::min(half, (b + 1) * kBlock);
        double part = 0.0;
        for (std::size_t k = b * kBlock; k < end; ++k) {
            part += std::norm(amps[expand1(k, lo, hi) | offset]);
        }
        total += part;
    }
    return total;
}

double diag_real_bit0(const c64* rho, std::size_t dim, int value) {
    const std::size_t half = dim >> 1;
    const std::size_t n_blocks = (half + kBlock - 1) / kBlock;
    double total = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t end = std::min(half, (b + 1) * kBlock);
        double part = 0.0;
        for (std::size_t k = b * kBlock; k < end; ++k) {
            const std::size_t i = 2 * k + static_cast<std::size_t>(value);
            part += rho[i * dim + i].real();
        }
        total += part;
    }
    return total;
}

c64 inner_product(const c64* bra, const c64* ket, std::size_t n) {
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    c64 total{};
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t end = std::min(n, (b + 1) * kBlock);
        c64 part{};
        for (std::size_t i = b * kBlock; i < end; ++i) {
            part += std::conj(bra[i]) * ket[i];
        }
        total += part;
    }
    return total;
}

} // namespace serial

//--------------------------------------------------------------------------
// OpenMP
//--------------------------------------------------------------------------

namespace omp {

void apply_1q(c64* amps, std::size_t dim, int target, const Mat2& m) {
    if (dim < parallel_cutoff) return serial::apply_1q(amps, dim, target, m);
    const auto [lo, hi, bit] = pair_masks(target);
    const std::int64_t pairs = static_cast<std::int64_t>(dim >> 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const std::size_t i0 = expand1(static_cast<std::size_t>(k), lo, hi);
        rotate_pair(amps[i0], amps[i0 | bit], m);
    }
}

void apply_cnot(c64* amps, std::size_t dim, int control, int target) {
    if (dim < parallel_cutoff) return serial::apply_cnot(amps, dim, control, target);
    const QuadMasks m = quad_masks(control, target);
    const std::size_t c_bit = std::size_t{1} << control;
    const std::size_t t_bit = std::size_t{1} << target;
    const std::int64_t quads = static_cast<std::int64_t>(dim >> 2);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < quads; ++k) {
        const std::size_t i10 = expand2(static_cast<std::size_t>(k), m) | c_bit;
        std::swap(amps[i10], amps[i10 | t_bit]);
    }
}

void apply_1q_batched(c64* amps, std::size_t dim, std::size_t width, int target, const Mat2& m) {
    if (dim * width < parallel_cutoff) {
        return serial::apply_1q_batched(amps, dim, width, target, m);
    }
    const auto [lo, hi, bit] = pair_masks(target);
    const std::int64_t pairs = static_cast<std::int64_t>(dim >> 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const std::size_t i0 = expand1(static_cast<std::size_t>(k), lo, hi) * width;
        const std::size_t i1 = i0 + bit * width;
        for (std::size_t j = 0; j < width; ++j) {
            rotate_pair(amps[i0 + j], amps[i1 + j], m);
        }
    }
}

void apply_cnot_batched(c64* amps, std::size_t dim, std::size_t width, int control, int target) {
    if (dim * width < parallel_cutoff) {
        return serial::apply_cnot_batched(amps, dim, width, control, target);
    }
    const QuadMasks m = quad_masks(control, target);
    const std::size_t c_bit = std::size_t{1} << control;
    const std::size_t t_bit = std::size_t{1} << target;
    const std::int64_t quads = static_cast<std::int64_t>(dim >> 2);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < quads; ++k) {
        const std::size_t i10 = (expand2(static_cast<std::size_t>(k), m) | c_bit) * width;
        const std::size_t i11 = i10 + t_bit * width;
        for (std::size_t j = 0; j < width; ++j) {
            std::swap(amps[i10 + j], amps[i11 + j]);
        }
    }
}

void damp(c64* rho, std::size_t dim, int qubit, double gamma) {
    if (dim * dim < parallel_cutoff) return serial::damp(rho, dim, qubit, gamma);
    const auto [lo, hi, bit] = pair_masks(qubit);
    const double s = std::sqrt(1.0 - gamma);
    const std::int64_t half = static_cast<std::int64_t>(dim >> 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t br = 0; br < half; ++br) {
        const std::size_t r0 = expand1(static_cast<std::size_t>(br), lo, hi) * dim;
        const std::size_t r1 = r0 + bit * dim;
        for (std::size_t bc = 0; bc < static_cast<std::size_t>(half); ++bc) {
            const std::size_t c0 = expand1(bc, lo, hi);
            const std::size_t c1 = c0 | bit;
            damp_block(rho[r0 + c0], rho[r0 + c1], rho[r1 + c0], rho[r1 + c1], gamma, s);
        }
    }
}

void depolarize(c64* rho, std::size_t dim, int qubit, double p) {
    if (dim * dim < parallel_cutoff) return serial::depolarize(rho, dim, qubit, p);
    const auto [lo, hi, bit] = pair_masks(qubit);
    const std::int64_t half = static_cast<std::int64_t>(dim >> 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t br = 0; br < half; ++br) {
        const std::size_t r0 = expand1(static_cast<std::size_t>(br), lo, hi) * dim;
        const std::size_t r1 = r0 + bit * dim;
        for (std::size_t bc = 0; bc < static_cast<std::size_t>(half); ++bc) {
            const std::size_t c0 = expand1(bc, lo, hi);
            const std::size_t c1 = c0 | bit;
            depol_block(rho[r0 + c0], rho[r0 + c1], rho[r1 + c0], rho[r1 + c1], p);
        }
    }
}

double sum_abs2(const c64* amps, std::size_t n) {
    if (n < parallel_cutoff) return serial::sum_abs2(amps, n);
    const std::int64_t n_blocks = static_cast<std::int64_t>((n + kBlock - 1) / kBlock);
    std::vector<double> partial(static_cast<std::size_t>(n_blocks));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const std::size_t end = std::min(n, static_cast<std::size_t>(b + 1) * kBlock);
        double part = 0.0;
        for (std::size_t i = static_cast<std::size_t>(b) * kBlock; i < end; ++i) {
            part += std::norm(amps[i]);
        }
        partial[static_cast<std::size_t>(b)] = part;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double sum_abs2_bit(const c64* amps, std::size_t dim, int bit, int value) {
    if (dim < parallel_cutoff) return serial::sum_abs2_bit(amps, dim, bit, value);
    const auto [lo, hi, mask] = pair_masks(bit);
    const std::size_t half = dim >> 1;
    const std::size_t offset = value ? mask : 0;
    const std::int64_t n_blocks = static_cast<std::int64_t>((half + kBlock - 1) / kBlock);
    std::vector<double> partial(static_cast<std::size_t>(n_blocks));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const std::size_t end = std::min(half, static_cast<std::size_t>(b + 1) * kBlock);
        double part = 0.0;
        for (std::size_t k = static_cast<std::size_t>(b) * kBlock; k < end; ++k) {
            part += std::norm(amps[expand1(k, lo, hi) | offset]);
        }
        partial[static_cast<std::size_t>(b)] = part;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double diag_real_bit0(const c64* rho, std::size_t dim, int value) {
    // Diagonal sweeps touch only `dim` elements; never worth a team.
    return serial::diag_real_bit0(rho, dim, value);
}

c64 inner_product(const c64* bra, const c64* ket, std::size_t n) {
    if (n < parallel_cutoff) return serial::inner_product(bra, ket, n);
    const std::int64_t n_blocks = static_cast<std::int64_t>((n + kBlock - 1) / kBlock);
    std::vector<c64> partial(static_cast<std::size_t>(n_blocks));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const std::size_t end = std::min(n, static_cast<std::size_t>(b + 1) * kBlock);
        c64 part{};
        for (std::size_t i = static_cast<std::size_t>(b) * kBlock; i < end; ++i) {
            part += std::conj(bra[i]) * ket[i];
        }
        partial[static_cast<std::size_t>(b)] = part;
    }
    c64 total{};
    for (const c64& p : partial) total += p;
    return total;
}

} // namespace omp

//--------------------------------------------------------------------------
// dispatch
//--------------------------------------------------------------------------

void apply_1q(c64* amps, std::size_t dim, int target, const Mat2& m, Exec exec) {
    exec == Exec::serial ? serial::apply_1q(amps, dim, target, m)
                         : omp::apply_1q(amps, dim, target, m);
}

void apply_cnot(c64* amps, std::size_t dim, int control, int target, Exec exec) {
    exec == Exec::serial ? serial::apply_cnot(amps, dim, control, target)
                         : omp::apply_cnot(amps, dim, control, target);
}

void apply_1q_batched(c64* amps, std::size_t dim, std::size_t width, int target, const Mat2& m,
                      Exec exec) {
    exec == Exec::serial ? serial::apply_1q_batched(amps, dim, width, target, m)
                         : omp::apply_1q_batched(amps, dim, width, target, m);
}

void apply_cnot_batched(c64* amps, std::size_t dim, std::size_t width, int control, int target,
                        Exec exec) {
    exec == Exec::serial ? serial::apply_cnot_batched(amps, dim, width, control, target)
                         : omp::apply_cnot_batched(amps, dim, width, control, target);
}

void damp(c64* rho, std::size_t dim, int qubit, double gamma, Exec exec) {
    exec == Exec::serial ? serial::damp(rho, dim, qubit, gamma)
                         : omp::damp(rho, dim, qubit, gamma);
}

void depolarize(c64* rho, std::size_t dim, int qubit, double p, Exec exec) {
    exec == Exec::serial ? serial::depolarize(rho, dim, qubit, p)
                         : omp::depolarize(rho, dim, qubit, p);
}

double sum_abs2(const c64* amps, std::size_t n, Exec exec) {
    return exec == Exec::serial ? serial::sum_abs2(amps, n) : omp::sum_abs2(amps, n);
}

double sum_abs2_bit(const c64* amps, std::size_t dim, int bit, int value, Exec exec) {
    return exec == Exec::serial ? serial::sum_abs2_bit(amps, dim, bit, value)
                                : omp::sum_abs2_bit(amps, dim, bit, value);
}

double diag_real_bit0(const c64* rho, std::size_t dim, int value, Exec exec) {
    return exec == Exec::serial ? serial::diag_real_bit0(rho, dim, value)
                                : omp::diag_real_bit0(rho, dim, value);
}

c64 inner_product(const c64* bra, const c64* ket, std::size_t n, Exec exec) {
    return exec == Exec::serial ? serial::inner_product(bra, ket, n)
                                : omp::inner_product(bra, ket, n);
}

} // namespace qcbind::kernels
