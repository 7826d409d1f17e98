#ifndef QCBIND_GRAD_HPP
#define QCBIND_GRAD_HPP

#include <span>
#include <vector>

#include "qcbind/circuit.hpp"

namespace qcbind {

// Readout scaling: dG = scale * (y0 - y1) = scale * <Z on qubit 0>.
inline constexpr double readout_scale = 100.0;

struct GradientResult {
    double value = 0.0;        // predicted dG, kcal/mol
    std::vector<double> grad;  // d(dG)/d(theta_k), kcal/mol per radian
};

/// Noiseless full-probability prediction for a prepared input state.
double forward(const CircuitSpec& circuit, std::span<const double> params,
               const StateVector& input, Exec exec = Exec::parallel);

/// All parameter derivatives in one forward plus one reverse sweep.
GradientResult backward_adjoint(const CircuitSpec& circuit, std::span<const double> params,
                                const StateVector& input, Exec exec = Exec::parallel);

/// grad[k] = (f(theta_k + pi/2) - f(theta_k - pi/2)) / 2; exact for RX/RZ.
GradientResult backward_parameter_shift(const CircuitSpec& circuit, std::span<const double> params,
                                        const StateVector& input, Exec exec = Exec::parallel);

/// Central differences with step h in (0, 0.1].
GradientResult backward_finite_diff(const CircuitSpec& circuit, std::span<const double> params,
                                    const StateVector& input, double h,
                                    Exec exec = Exec::parallel);

} // namespace qcbind

#endif
