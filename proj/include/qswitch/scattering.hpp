#pragma once

#include <complex>

namespace qswitch {

using Complex = std::complex<double>;

/// Transmission probability of a plane wave with wavevector k through the
/// single defect bond of strength (1 + lambda) t:
///
///     T = 4 (1+lambda)^2 sin^2 k / (lambda^2 (lambda+2)^2 + 4 (1+lambda)^2 sin^2 k)
///
/// Independent of omega, t and the bond position. k is folded into (-pi, pi].
/// At the 0/0 points (beta^2 = 1 with sin k = 0) the result is 0.
/// Throws PreconditionError for non-finite input.
double transmission(double lambda, double k);

/// 1 - transmission(lambda, k).
double reflection(double lambda, double k);

/// True where the closed form is the indeterminate 0/0 (lambda in {0, -2}, k = 0 mod pi).
bool transmission_is_degenerate(double lambda, double k);

struct ScatteringAmplitudes {
    Complex r;  ///< reflection amplitude, A_n = e^{ikn} + r e^{-ikn} for n <= l
    Complex s;  ///< transmission amplitude, A_n = s e^{ikn} for n >= l+1
};

/// Solves the defect-bond equations for the plane-wave ansatz. With
/// beta = 1 + lambda:
///
///     r = (1 - beta^2) e^{2ikl} / (beta^2 - e^{-2ik})
///     s = beta (1 - e^{-2ik}) / (beta^2 - e^{-2ik})
///
/// Only arg(r) depends on the bond index l.
/// Throws PreconditionError when sin k = 0 (band edge, no propagating wave).
ScatteringAmplitudes scattering_amplitudes(double lambda, double k, int defect_bond);

struct ScatteringSolution {
    double k = 0.0;
    double lambda = 0.0;
    Complex r;
    Complex s;
    double transmission = 0.0;  ///< |s|^2
    double reflection = 0.0;    ///< |r|^2
    double energy = 0.0;        ///< omega - 2 t cos k
};

ScatteringSolution solve_scattering(double lambda, double k, int defect_bond, double omega, double t);

/// Builds the ansatz amplitudes on sites 1..n_sites (t = 1, omega = 0) and
/// returns the largest absolute residual of the stationary equations over
/// the interior sites 2..N-1. The bond at l+1 uses -t A_{l+2} - t' A_l.
/// Requires 2 <= l <= N-3.
double verify_ansatz_residual(double lambda, double k, int defect_bond, int n_sites);

} // namespace qswitch
