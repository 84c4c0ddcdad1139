#include "qswitch/scattering.hpp"
#include "qswitch/errors.hpp"
#include "qswitch/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace qswitch {

namespace {

void require_finite(double lambda, double k) {
    if (!std::isfinite(lambda) || !std::isfinite(k))
        throw PreconditionError{"lambda and k must be finite"};
}

constexpr double band_edge_tolerance = 1e-12;

// sin of a folded wavevector, exactly zero at k = 0 and k = pi
double sin_folded(double k) {
    k = fold_wavevector(k);
    return (k == 0.0 || k == std::numbers::pi) ? 0.0 : std::sin(k);
}

} // namespace

bool transmission_is_degenerate(double lambda, double k) {
    require_finite(lambda, k);
    return sin_folded(k) == 0.0 && lambda * (lambda + 2.0) == 0.0;
}

double transmission(double lambda, double k) {
    require_finite(lambda, k);
    const double beta = 1.0 + lambda;
    if (beta == 0.0)
        return 0.0;
    const double sin_k = sin_folded(k);
    const double s2 = sin_k * sin_k;
    // Numerator and denominator divided by beta^2 so lambda^4 never overflows.
    const double x = lambda * (lambda + 2.0) / beta;
    const double den = x * x + 4.0 * s2;
    if (den == 0.0)
        return 0.0;
    return std::clamp(4.0 * s2 / den, 0.0, 1.0);
}

double reflection(double lambda, double k) { return 1.0 - transmission(lambda, k); }

ScatteringAmplitudes scattering_amplitudes(double lambda, double k, int defect_bond) {
    require_finite(lambda, k);
    k = fold_wavevector(k);
    if (std::abs(std::sin(k)) < band_edge_tolerance)
        throw PreconditionError{"k is a multiple of pi: zero group velocity, no scattering state"};
    const double beta = 1.0 + lambda;
    const double beta2 = beta * beta;
    const Complex i{0.0, 1.0};
    const Complex e_m2ik = std::exp(-2.0 * i * k);
    const Complex den = beta2 - e_m2ik;
    const Complex phase = std::exp(2.0 * i * k * static_cast<double>(defect_bond));
    return {(1.0 - beta2) * phase / den, beta * (1.0 - e_m2ik) / den};
}

ScatteringSolution solve_scattering(double lambda, double k, int defect_bond, double omega, double t) {
    const auto amp = scattering_amplitudes(lambda, k, defect_bond);
    ScatteringSolution sol;
    sol.k = fold_wavevector(k);
    sol.lambda = lambda;
    sol.r = amp.r;
    sol.s = amp.s;
    sol.transmission = std::norm(amp.s);
    sol.reflection = std::norm(amp.r);
    sol.energy = dispersion(sol.k, omega, t);
    return sol;
}

double verify_ansatz_residual(double lambda, double k, int defect_bond, int n_sites) {
    const int l = defect_bond;
    if (l < 2 || l > n_sites - 3)
        throw PreconditionError{"defect bond " + std::to_string(l) +
                                " must lie at least 2 sites from both ends of a " +
                                std::to_string(n_sites) + "-site window"};
    const auto amp = scattering_amplitudes(lambda, k, l);
    k = fold_wavevector(k);
    const Complex i{0.0, 1.0};

    std::vector<Complex> a(static_cast<std::size_t>(n_sites) + 1);  // a[n] is site n
    for (int n = 1; n <= n_sites; ++n) {
        const double dn = n;
        a[n] = (n <= l) ? std::exp(i * k * dn) + amp.r * std::exp(-i * k * dn)
                        : amp.s * std::exp(i * k * dn);
    }

    const double t = 1.0;
    const double t_defect = (1.0 + lambda) * t;
    const double energy_offset = -2.0 * t * std::cos(k);  // Omega - omega

    double worst = 0.0;
    for (int n = 2; n <= n_sites - 1; ++n) {
        Complex lhs;
        if (n == l)
            lhs = -t_defect * a[l + 1] - t * a[l - 1];
        else if (n == l + 1)
            lhs = -t * a[l + 2] - t_defect * a[l];
        else
            lhs = -t * (a[n + 1] + a[n - 1]);
        worst = std::max(worst, std::abs(lhs - energy_offset * a[n]));
    }
    return worst;
}

} // namespace qswitch
