#include "qswitch/lattice.hpp"
#include "qswitch/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qswitch {

void LatticeSpec::validate() const {
    if (n_sites < 3)
        throw PreconditionError{"lattice needs at least 3 sites, got " + std::to_string(n_sites)};
    if (defect_bond < 1 || defect_bond > n_sites - 1)
        throw PreconditionError{"defect bond index " + std::to_string(defect_bond) +
                                " outside [1, " + std::to_string(n_sites - 1) + "]"};
    if (!(hopping > 0.0) || !std::isfinite(hopping))
        throw PreconditionError{"uniform hopping t must be positive and finite"};
    if (!std::isfinite(cavity_frequency) || !std::isfinite(lambda))
        throw PreconditionError{"cavity frequency and lambda must be finite"};
}

RealMatrix build_hamiltonian(const LatticeSpec& spec) {
    spec.validate();
    const auto n = spec.n_sites;
    RealMatrix h = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        h(i, i) = spec.cavity_frequency;
    for (int i = 0; i + 1 < n; ++i) {
        // bond between sites i+1 and i+2
        const double hop = (i + 1 == spec.defect_bond) ? spec.defect_hopping() : spec.hopping;
        h(i, i + 1) = -hop;
        h(i + 1, i) = -hop;
    }
    return h;
}

RealMatrix build_periodic_hamiltonian(int n_sites, double omega, double t) {
    if (n_sites < 3)
        throw PreconditionError{"periodic chain needs at least 3 sites, got " + std::to_string(n_sites)};
    RealMatrix h = RealMatrix::Zero(n_sites, n_sites);
    for (int i = 0; i < n_sites; ++i) {
        const int j = (i + 1) % n_sites;
        h(i, i) = omega;
        h(i, j) -= t;
        h(j, i) -= t;
    }
    return h;
}

double dispersion(double k, double omega, double t) { return omega - 2.0 * t * std::cos(k); }

double group_velocity(double k, double t) { return 2.0 * t * std::sin(k); }

double fold_wavevector(double k) {
    constexpr double pi = std::numbers::pi;
    if (k > -pi && k <= pi)
        return k;
    double folded = std::remainder(k, 2.0 * pi);  // [-pi, pi]
    if (folded <= -pi)
        folded += 2.0 * pi;
    return folded;
}

std::vector<BandPoint> diagonalize_periodic(int n_sites, double omega, double t) {
    if (n_sites < 3)
        throw PreconditionError{"periodic chain needs at least 3 sites, got " + std::to_string(n_sites)};
    std::vector<BandPoint> band;
    band.reserve(static_cast<std::size_t>(n_sites));
    // smallest m with m > -N/2, i.e. 2m > -N
    const int m_lo = -n_sites / 2 + ((n_sites % 2 == 0) ? 1 : 0);
    const int m_hi = n_sites / 2;
    for (int m = m_lo; m <= m_hi; ++m) {
        const double k = 2.0 * std::numbers::pi * m / n_sites;
        band.push_back({m, k, dispersion(k, omega, t)});
    }
    return band;
}

} // namespace qswitch
