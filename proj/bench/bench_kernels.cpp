// Timing comparison of the serial reference kernels against the OpenMP ones.
// Median of repeated runs; results are machine-dependent.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qcbind/circuit.hpp"
#include "qcbind/encode.hpp"
#include "qcbind/grad.hpp"
#include "qcbind/rng.hpp"

using namespace qcbind;

namespace {

double time_median_ms(const std::function<void()>& body, int reps) {
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const auto stop = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

std::vector<c64> random_amps(Rng& rng, std::size_t n) {
    std::vector<c64> amps(n);
    for (c64& a : amps) a = c64{rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0)};
    return amps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-34s %10.3f %12.3f %9.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial path\n");
#endif
    std::printf("%-34s %10s %12s %9s\n", "kernel", "serial/ms", "parallel/ms", "speedup");

    Rng rng(2024);

    {
        const std::size_t dim = std::size_t{1} << 20;
        std::vector<c64> amps = random_amps(rng, dim);
        const kernels::Mat2 m = kernels::rx_matrix(0.731);
        const double serial_ms = time_median_ms(
            [&] {
                for (int t = 0; t < 20; t += 2) {
                    kernels::serial::apply_1q(amps.data(), dim, t, m);
                }
            },
            7);
        const double parallel_ms = time_median_ms(
            [&] {
                for (int t = 0; t < 20; t += 2) {
                    kernels::omp::apply_1q(amps.data(), dim, t, m);
                }
            },
            7);
        row("apply_1q, 20 qubits x10 gates", serial_ms, parallel_ms);
    }

    {
        const std::size_t dim = std::size_t{1} << 20;
        std::vector<c64> amps = random_amps(rng, dim);
        const double serial_ms = time_median_ms(
            [&] {
                for (int t = 1; t < 20; t += 2) {
                    kernels::serial::apply_cnot(amps.data(), dim, 0, t);
                }
            },
            7);
        const double parallel_ms = time_median_ms(
            [&] {
                for (int t = 1; t < 20; t += 2) {
                    kernels::omp::apply_cnot(amps.data(), dim, 0, t);
                }
            },
            7);
        row("apply_cnot, 20 qubits x10 gates", serial_ms, parallel_ms);
    }

    {
        // one noisy rotation on a 10-qubit density matrix (2^20 flattened)
        const int n = 10;
        const std::size_t dim = std::size_t{1} << n;
        std::vector<c64> rho = random_amps(rng, dim * dim);
        const NoiseSpec noise{0.001, 0.0005};
        const Gate gate = Gate::rx(4, 0);
        const double serial_ms = time_median_ms(
            [&] {
                detail::apply_gate_noisy_inplace(rho.data(), dim, n, gate, 0.42, noise,
                                                 Exec::serial);
            },
            7);
        const double parallel_ms = time_median_ms(
            [&] {
                detail::apply_gate_noisy_inplace(rho.data(), dim, n, gate, 0.42, noise,
                                                 Exec::parallel);
            },
            7);
        row("noisy gate, 10-qubit density", serial_ms, parallel_ms);
    }

    {
        const std::size_t dim = 512;
        const std::size_t width = 256;
        std::vector<c64> block = random_amps(rng, dim * width);
        const kernels::Mat2 m = kernels::rz_matrix(1.2);
        const double serial_ms = time_median_ms(
            [&] {
                for (int t = 0; t < 9; ++t) {
                    kernels::serial::apply_1q_batched(block.data(), dim, width, t, m);
                }
            },
            9);
        const double parallel_ms = time_median_ms(
            [&] {
                for (int t = 0; t < 9; ++t) {
                    kernels::omp::apply_1q_batched(block.data(), dim, width, t, m);
                }
            },
            9);
        row("batched apply, 512 x 256 columns", serial_ms, parallel_ms);
    }

    {
        // small-register sweep sits below the dispatch cutoff on purpose
        const CircuitSpec circuit = build_model(6);
        const std::vector<double> params = init_params(circuit.n_params, 5);
        Rng local(7);
        const StateVector input = to_state(random_occupancy(local));
        const double serial_ms = time_median_ms(
            [&] {
                for (int i = 0; i < 50; ++i) {
                    (void)apply_circuit(input, circuit, params, Exec::serial);
                }
            },
            7);
        const double parallel_ms = time_median_ms(
            [&] {
                for (int i = 0; i < 50; ++i) {
                    (void)apply_circuit(input, circuit, params, Exec::parallel);
                }
            },
            7);
        row("6-unit model x50 (below cutoff)", serial_ms, parallel_ms);
    }

    {
        // per-sample adjoint gradients across a batch, serial loop vs omp-for
        const CircuitSpec circuit = build_model(2);
        const std::vector<double> params = init_params(circuit.n_params, 11);
        Rng local(13);
        std::vector<StateVector> inputs;
        for (int i = 0; i < 64; ++i) inputs.push_back(to_state(random_occupancy(local)));
        std::vector<GradientResult> results(inputs.size());

        const double serial_ms = time_median_ms(
            [&] {
                for (std::size_t i = 0; i < inputs.size(); ++i) {
                    results[i] = backward_adjoint(circuit, params, inputs[i], Exec::serial);
                }
            },
            5);
        const double parallel_ms = time_median_ms(
            [&] {
                const std::int64_t n = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic)
                for (std::int64_t i = 0; i < n; ++i) {
                    results[static_cast<std::size_t>(i)] = backward_adjoint(
                        circuit, params, inputs[static_cast<std::size_t>(i)], Exec::serial);
                }
            },
            5);
        row("adjoint gradients, 64-sample batch", serial_ms, parallel_ms);
    }

    return 0;
}
