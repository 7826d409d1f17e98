#ifndef QCBIND_KERNELS_HPP
#define QCBIND_KERNELS_HPP

#include <array>
#include <complex>
#include <cstddef>

// Amplitude-level kernels. Every kernel comes in two flavours: a serial
// reference (kernels::serial) and an OpenMP version (kernels::omp). The two
// are bitwise-equivalent for any input and any thread count: updates touch
// disjoint amplitudes, and reductions use a fixed block order.

namespace qcbind {

using c64 = std::complex<double>;

enum class Exec { serial, parallel };

namespace kernels {

/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Mat2 = std::array<c64, 4>;

inline Mat2 conj(const Mat2& m) {
    return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])};
}

// Work sizes below this run serially even under Exec::parallel; the spawn
// overhead dwarfs a 512-amplitude sweep.
inline constexpr std::size_t parallel_cutoff = std::size_t{1} << 13;

namespace serial {

void apply_1q(c64* amps, std::size_t dim, int target, const Mat2& m);
void apply_cnot(c64* amps, std::size_t dim, int control, int target);

// Batched layout: element (row i, column j) of a dim x width block lives at
// amps[i * width + j]; one column per input state (Eq.-style stacked form).
void apply_1q_batched(c64* amps, std::size_t dim, std::size_t width, int target, const Mat2& m);
void apply_cnot_batched(c64* amps, std::size_t dim, std::size_t width, int control, int target);

// Single-qubit channels on a flattened row-major dim x dim density matrix.
void damp(c64* rho, std::size_t dim, int qubit, double gamma);
void depolarize(c64* rho, std::size_t dim, int qubit, double p);

double sum_abs2(const c64* amps, std::size_t n);
/// Sum of |amp|^2 over indices whose `bit`-th bit equals `value`.
double sum_abs2_bit(const c64* amps, std::size_t dim, int bit, int value);
/// Sum over even/odd diagonal entries of a flattened dim x dim matrix.
double diag_real_bit0(const c64* rho, std::size_t dim, int value);
c64 inner_product(const c64* bra, const c64* ket, std::size_t n);

} // namespace serial

namespace omp {

void apply_1q(c64* amps, std::size_t dim, int target, const Mat2& m);
void apply_cnot(c64* amps, std::size_t dim, int control, int target);
void apply_1q_batched(c64* amps, std::size_t dim, std::size_t width, int target, const Mat2& m);
void apply_cnot_batched(c64* amps, std::size_t dim, std::size_t width, int control, int target);
void damp(c64* rho, std::size_t dim, int qubit, double gamma);
void depolarize(c64* rho, std::size_t dim, int qubit, double p);
double sum_abs2(const c64* amps, std::size_t n);
double sum_abs2_bit(const c64* amps, std::size_t dim, int bit, int value);
double diag_real_bit0(const c64* rho, std::size_t dim, int value);
c64 inner_product(const c64* bra, const c64* ket, std::size_t n);

} // namespace omp

// Dispatch helpers.
void apply_1q(c64* amps, std::size_t dim, int target, const Mat2& m, Exec exec);
void apply_cnot(c64* amps, std::size_t dim, int control, int target, Exec exec);
void apply_1q_batched(c64* amps, std::size_t dim, std::size_t width, int target, const Mat2& m,
                      Exec exec);
void apply_cnot_batched(c64* amps, std::size_t dim, std::size_t width, int control, int target,
                        Exec exec);
void damp(c64* rho, std::size_t dim, int qubit, double gamma, Exec exec);
void depolarize(c64* rho, std::size_t dim, int qubit, double p, Exec exec);
double sum_abs2(const c64* amps, std::size_t n, Exec exec);
double sum_abs2_bit(const c64* amps, std::size_t dim, int bit, int value, Exec exec);
double diag_real_bit0(const c64* rho, std::size_t dim, int value, Exec exec);
c64 inner_product(const c64* bra, const c64* ket, std::size_t n, Exec exec);

/// RX(t) = [[cos(t/2), -i sin(t/2)], [-i sin(t/2), cos(t/2)]]
Mat2 rx_matrix(double theta);
/// RZ(t) = diag(e^{-it/2}, e^{it/2})
Mat2 rz_matrix(double theta);

} // namespace kernels
} // namespace qcbind

#endif
