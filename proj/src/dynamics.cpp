#include "qswitch/dynamics.hpp"
#include "qswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qswitch {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double infinity = std::numeric_limits<double>::infinity();

void require_hermitian(const ComplexMatrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0)
        throw PreconditionError{"Hamiltonian must be a non-empty square matrix"};
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "Hamiltonian is not Hermitian (max |H - H^dagger| = " << asym << ")";
        throw PreconditionError{msg.str()};
    }
}

double probability(const StateVector& psi, int first_site, int last_site) {
    // sites are 1-based, inclusive
    first_site = std::max(first_site, 1);
    last_site = std::min<int>(last_site, static_cast<int>(psi.size()));
    double p = 0.0;
    for (int n = first_site; n <= last_site; ++n)
        p += std::norm(psi(n - 1));
    return p;
}

} // namespace

Propagator::Propagator(const ComplexMatrix& hamiltonian) {
    require_hermitian(hamiltonian);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver{hamiltonian};
    if (solver.info() != Eigen::Success)
        throw ContractViolation{"eigendecomposition of the Hamiltonian did not converge"};
    modes_ = solver.eigenvectors();
    energies_ = solver.eigenvalues();
}

Propagator::Propagator(const RealMatrix& hamiltonian) {
    if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0)
        throw PreconditionError{"Hamiltonian must be a non-empty square matrix"};
    const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
    if ((hamiltonian - hamiltonian.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw PreconditionError{"Hamiltonian is not symmetric"};
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver{hamiltonian};
    if (solver.info() != Eigen::Success)
        throw ContractViolation{"eigendecomposition of the Hamiltonian did not converge"};
    modes_ = solver.eigenvectors().cast<std::complex<double>>();
    energies_ = solver.eigenvalues();
}

StateVector Propagator::evolve(const StateVector& psi0, double time) const {
    if (psi0.size() != dimension())
        throw PreconditionError{"state dimension does not match the Hamiltonian"};
    StateVector coeff = modes_.adjoint() * psi0;
    for (Eigen::Index i = 0; i < coeff.size(); ++i)
        coeff(i) *= std::polar(1.0, -energies_(i) * time);
    return modes_ * coeff;
}

std::vector<StateVector> Propagator::trajectory(const StateVector& psi0, double duration,
                                                double step) const {
    std::vector<StateVector> out;
    if (duration == 0.0) {
        out.push_back(psi0);
        return out;
    }
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(duration))
        throw PreconditionError{"propagation step must be positive and finite"};
    const double span = std::abs(duration);
    const double dir = duration < 0.0 ? -1.0 : 1.0;
    const auto n_steps = static_cast<std::size_t>(std::ceil(span / step - 1e-9));
    out.reserve(n_steps + 1);
    for (std::size_t j = 0; j < n_steps; ++j)
        out.push_back(evolve(psi0, dir * static_cast<double>(j) * step));
    out.push_back(evolve(psi0, duration));
    return out;
}

namespace {

double audited_drift(const std::vector<StateVector>& states, double initial_norm2) {
    double drift = 0.0;
    for (const auto& psi : states)
        drift = std::max(drift, std::abs(psi.squaredNorm() - initial_norm2));
    return drift;
}

void enforce_drift(double drift) {
    if (drift > norm_drift_tolerance) {
        std::ostringstream msg;
        msg << "norm drift " << drift << " exceeds " << norm_drift_tolerance;
        throw ContractViolation{msg.str()};
    }
}

} // namespace

StateVector propagate(const ComplexMatrix& hamiltonian, const StateVector& psi0, double duration,
                      double step) {
    const double norm2 = psi0.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-8)
        throw PreconditionError{"initial state is not normalized"};
    const Propagator prop{hamiltonian};
    const auto states = prop.trajectory(psi0, duration, step);
    enforce_drift(audited_drift(states, norm2));
    return states.back();
}

// ---------------------------------------------------------------------------
// Wavepacket transmission oracle

WavepacketSpec default_wavepacket(const LatticeSpec& lattice, double k0, double width, int buffer) {
    WavepacketSpec wp;
    wp.center_wavevector = k0;
    wp.width = width;
    wp.buffer = buffer;
    wp.center_site = lattice.defect_bond - static_cast<int>(std::ceil(4.0 * width)) - buffer;
    wp.measurement_boundary = lattice.defect_bond + 1 + static_cast<int>(std::ceil(3.0 * width));
    return wp;
}

namespace {

struct Layout {
    double stop_time = 0.0;
    double spread_width = 0.0;
    bool initial_ok = false;
    bool right_echo_ok = false;
    bool left_echo_ok = false;

    bool ok() const { return initial_ok && right_echo_ok && left_echo_ok; }
};

Layout plan_layout(int n_sites, int l, double hopping, const WavepacketSpec& wp, int b) {
    const double sigma = wp.width;
    const double k0 = wp.center_wavevector;
    const double n0 = wp.center_site;
    Layout lay;
    const double v = group_velocity(k0, hopping);
    lay.stop_time = (b - n0 + 4.0 * sigma) / v;
    const double curvature = 2.0 * hopping * std::abs(std::cos(k0));  // |d^2 Omega / dk^2|
    const double spread = curvature * lay.stop_time / (2.0 * sigma);
    lay.spread_width = std::sqrt(sigma * sigma + spread * spread);

    lay.initial_ok = n0 - 4.0 * sigma >= 1.0 + wp.buffer && n0 + 4.0 * sigma <= l;

    // Lobe centres at the stop time; hard walls sit at sites 0 and N+1.
    const double x_transmitted = n0 + v * lay.stop_time;
    const double x_reflected = 2.0 * l + 1.0 - x_transmitted;
    const double front = x_transmitted + 4.0 * lay.spread_width;
    lay.right_echo_ok = 2.0 * (n_sites + 1) - front >= b;
    lay.left_echo_ok = 4.0 * lay.spread_width - x_reflected <= l - 3;
    return lay;
}

void check_oracle_wavevector(double k0) {
    if (!(k0 >= min_oracle_wavevector * pi && k0 <= max_oracle_wavevector * pi)) {
        std::ostringstream msg;
        msg << "k0 = " << k0 << " is outside [" << min_oracle_wavevector << " pi, "
            << max_oracle_wavevector << " pi]: group velocity too close to zero for the packet oracle";
        throw PreconditionError{msg.str()};
    }
}

} // namespace

int required_chain_length(double k0, double width, double hopping, int buffer) {
    check_oracle_wavevector(k0);
    for (int n = 7; n < 10'000'000; n += 2) {
        LatticeSpec lat;
        lat.n_sites = n;
        lat.hopping = hopping;
        lat.defect_bond = (n - 1) / 2;
        const auto wp = default_wavepacket(lat, k0, width, buffer);
        if (plan_layout(n, lat.defect_bond, hopping, wp, wp.measurement_boundary).ok())
            return n;
    }
    throw PreconditionError{"no chain length satisfies the packet layout"};
}

StateVector gaussian_wavepacket(int n_sites, int center_site, double k0, double width) {
    StateVector psi(n_sites);
    for (int n = 1; n <= n_sites; ++n) {
        const double x = n - center_site;
        psi(n - 1) = std::polar(std::exp(-x * x / (4.0 * width * width)), k0 * n);
    }
    const double norm = psi.norm();
    if (!(norm > 0.0))
        throw PreconditionError{"wavepacket has no weight inside the chain"};
    return psi / norm;
}

namespace {

int resolved_boundary(const LatticeSpec& lattice, const WavepacketSpec& packet) {
    return packet.measurement_boundary > 0
               ? packet.measurement_boundary
               : lattice.defect_bond + 1 + static_cast<int>(std::ceil(3.0 * packet.width));
}

} // namespace

void validate_oracle_request(const LatticeSpec& lattice, const WavepacketSpec& packet) {
    lattice.validate();
    check_oracle_wavevector(packet.center_wavevector);
    if (!(packet.width >= min_packet_width))
        throw PreconditionError{"packet width sigma_x must be at least 4 sites"};
    if (packet.buffer < 0)
        throw PreconditionError{"buffer must be non-negative"};

    const int l = lattice.defect_bond;
    const int b = resolved_boundary(lattice, packet);
    if (b <= l + 1)
        throw PreconditionError{"measurement boundary must lie in (l+1, N]"};
    if (b > lattice.n_sites) {
        std::ostringstream msg;
        msg << "measurement boundary " << b << " lies beyond the chain end; requires N >= "
            << required_chain_length(packet.center_wavevector, packet.width, lattice.hopping, packet.buffer)
            << " with the defect at the centre";
        throw PreconditionError{msg.str()};
    }

    const auto layout = plan_layout(lattice.n_sites, l, lattice.hopping, packet, b);
    if (!layout.ok()) {
        std::ostringstream msg;
        if (!layout.initial_ok)
            msg << "initial packet (n0 = " << packet.center_site << ", sigma = " << packet.width
                << ") must fit between the buffer and the defect bond " << l << "; ";
        else
            msg << "chain too short: boundary echoes would re-enter a measurement window; ";
        msg << "requires N >= "
            << required_chain_length(packet.center_wavevector, packet.width, lattice.hopping, packet.buffer)
            << " with the defect at the centre";
        throw PreconditionError{msg.str()};
    }
}

PropagationResult measure_transmission(const LatticeSpec& lattice, const WavepacketSpec& packet) {
    validate_oracle_request(lattice, packet);
    const int l = lattice.defect_bond;
    const int b = resolved_boundary(lattice, packet);
    const auto layout = plan_layout(lattice.n_sites, l, lattice.hopping, packet, b);

    const StateVector psi0 =
        gaussian_wavepacket(lattice.n_sites, packet.center_site, packet.center_wavevector, packet.width);
    const Propagator prop{build_hamiltonian(lattice)};
    const auto states = prop.trajectory(psi0, layout.stop_time, layout.stop_time / 64.0);

    PropagationResult res;
    res.norm_drift = audited_drift(states, 1.0);
    enforce_drift(res.norm_drift);

    const StateVector& psi = states.back();
    res.final_state = {psi, layout.stop_time};
    res.elapsed_model_time = layout.stop_time;
    res.measurement_boundary = b;
    res.transmitted_probability = probability(psi, b, lattice.n_sites);
    res.reflected_probability = probability(psi, 1, l - 3);
    res.residual_probability = probability(psi, l - 2, b - 1);
    res.near_defect_probability = probability(psi, l - 2, l + 3);
    if (res.near_defect_probability >= separation_tolerance) {
        std::ostringstream msg;
        msg << "packet has not separated: probability " << res.near_defect_probability
            << " remains within 3 sites of the defect";
        throw ContractViolation{msg.str()};
    }
    return res;
}

// ---------------------------------------------------------------------------
// Adiabatic elimination check

std::string_view to_string(AdiabaticValidity validity) {
    switch (validity) {
    case AdiabaticValidity::Valid: return "valid";
    case AdiabaticValidity::Marginal: return "marginal";
    case AdiabaticValidity::Invalid: return "invalid";
    }
    return "invalid";
}

namespace {

// Centred moving average; entries closer than half a window to either end are NaN.
std::vector<double> moving_average(const std::vector<double>& x, std::size_t window) {
    window = std::max<std::size_t>(1, window | 1u);
    const std::size_t half = window / 2;
    std::vector<double> prefix(x.size() + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        prefix[i + 1] = prefix[i] + x[i];
    std::vector<double> out(x.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = half; i + half < x.size(); ++i)
        out[i] = (prefix[i + half + 1] - prefix[i - half]) / static_cast<double>(window);
    return out;
}

// First local maximum above one half at or after index `from`, refined by a
// parabola through its neighbours.
double first_local_maximum(const std::vector<double>& smoothed, double dt, std::size_t from) {
    for (std::size_t i = std::max<std::size_t>(from, 1); i + 1 < smoothed.size(); ++i) {
        const double a = smoothed[i - 1], c = smoothed[i], d = smoothed[i + 1];
        if (std::isnan(a) || std::isnan(d))
            continue;
        if (c > 0.5 && c >= a && c > d) {
            const double curv = a - 2.0 * c + d;
            const double offset = curv != 0.0 ? 0.5 * (a - d) / curv : 0.0;
            return (static_cast<double>(i) + offset) * dt;
        }
    }
    return infinity;
}

// Peak of the first lobe above one half. The slow lobe is symmetric about its
// maximum, so the midpoint of the steep up- and down-crossings of 1/2 locates
// it far more precisely than the flat top does. Falls back to the local
// maximum when the lobe has not come back down within the record.
double first_transfer_time(const std::vector<double>& smoothed, double dt) {
    auto crossing = [&](std::size_t i) {
        const double a = smoothed[i - 1], b = smoothed[i];
        return (static_cast<double>(i - 1) + (0.5 - a) / (b - a)) * dt;
    };
    std::size_t up = 0;
    for (std::size_t i = 1; i < smoothed.size(); ++i) {
        if (!std::isnan(smoothed[i - 1]) && smoothed[i - 1] <= 0.5 && smoothed[i] > 0.5) {
            up = i;
            break;
        }
    }
    if (up == 0)
        return infinity;
    for (std::size_t i = up + 1; i < smoothed.size(); ++i) {
        if (std::isnan(smoothed[i]))
            break;
        if (smoothed[i - 1] > 0.5 && smoothed[i] <= 0.5)
            return 0.5 * (crossing(up) + crossing(i));
    }
    return first_local_maximum(smoothed, dt, up);
}

constexpr std::size_t max_adiabatic_samples = 20'000'000;
constexpr std::size_t max_reported_samples = 2000;

} // namespace

AdiabaticReport validate_adiabatic_elimination(const CouplerDerived& c, double duration, double step) {
    AdiabaticReport rep;
    const double gl = std::abs(c.g_l), gr = std::abs(c.g_r);
    const double dl = std::abs(c.delta_l), dr = std::abs(c.delta_r);
    if (dl == 0.0 || dr == 0.0)
        throw PreconditionError{"zero detuning: the CPB cannot be eliminated"};
    rep.coupling_ratio = std::max(gl / dl, gr / dr);
    if (dl <= gl || dr <= gr)
        rep.validity = AdiabaticValidity::Invalid;
    else if (dl < adiabatic_contract_ratio * gl || dr < adiabatic_contract_ratio * gr)
        rep.validity = AdiabaticValidity::Marginal;
    else
        rep.validity = AdiabaticValidity::Valid;
    rep.cpb_population_bound = cpb_population_margin * 4.0 * rep.coupling_ratio * rep.coupling_ratio;
    rep.predicted_transfer_time = c.g_eff != 0.0 ? pi / (2.0 * std::abs(c.g_eff)) : infinity;

    const double fast_rate = std::max({dl, dr, gl, gr});
    if (!(duration > 0.0))
        duration = std::isfinite(rep.predicted_transfer_time) ? 2.0 * rep.predicted_transfer_time
                                                              : 200.0 * pi / fast_rate;

    // All frequencies measured from omega_l; a global phase drops out of every population.
    const double ref = c.omega_l;
    RealMatrix full(3, 3);
    full << c.omega_l - ref, 0.0, c.g_l,
            0.0, c.omega_r - ref, c.g_r,
            c.g_l, c.g_r, c.omega_b_prime - ref;
    RealMatrix effective(2, 2);
    effective << c.omega_l_prime - ref, c.g_eff,
                 c.g_eff, c.omega_r_prime - ref;
    const Propagator full_prop{full};
    const Propagator eff_prop{effective};

    // Averaging window: one period of the fastest CPB-dominated oscillation.
    {
        Eigen::Index cpb_mode = 0;
        full_prop.modes().row(2).cwiseAbs().maxCoeff(&cpb_mode);
        const auto& levels = full_prop.energies();
        double gap = 0.0;
        for (Eigen::Index i = 0; i < levels.size(); ++i)
            gap = std::max(gap, std::abs(levels(cpb_mode) - levels(i)));
        const double window_time = gap > 0.0 ? 2.0 * pi / gap : duration;
        const double dt_max = window_time / 40.0;
        step = (step > 0.0) ? std::min(step, dt_max) : dt_max;

        const auto n = static_cast<std::size_t>(std::ceil(duration / step)) + 1;
        if (n > max_adiabatic_samples)
            throw PreconditionError{"adiabatic validation would need too many samples; shorten the duration"};

        StateVector left3 = StateVector::Zero(3);
        left3(0) = 1.0;
        StateVector left2 = StateVector::Zero(2);
        left2(0) = 1.0;

        std::vector<double> right_full(n), right_eff(n);
        const std::size_t stride = std::max<std::size_t>(1, n / max_reported_samples);
        double drift = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * step;
            const StateVector a = full_prop.evolve(left3, t);
            const StateVector e = eff_prop.evolve(left2, t);
            drift = std::max({drift, std::abs(a.squaredNorm() - 1.0), std::abs(e.squaredNorm() - 1.0)});
            right_full[i] = std::norm(a(1));
            right_eff[i] = std::norm(e(1));
            rep.max_cpb_population = std::max(rep.max_cpb_population, std::norm(a(2)));
            rep.max_right_population_full = std::max(rep.max_right_population_full, right_full[i]);
            rep.max_right_population_effective = std::max(rep.max_right_population_effective, right_eff[i]);
            if (i % stride == 0 || i + 1 == n)
                rep.samples.push_back({t, std::norm(a(0)), right_full[i], std::norm(a(2)), std::norm(e(0)),
                                       right_eff[i]});
        }
        enforce_drift(drift);

        const auto window = static_cast<std::size_t>(std::llround(window_time / step));
        rep.transfer_time_full = first_transfer_time(moving_average(right_full, window), step);
        rep.transfer_time_effective = first_transfer_time(moving_average(right_eff, window), step);
    }

    const bool full_found = std::isfinite(rep.transfer_time_full);
    const bool eff_found = std::isfinite(rep.transfer_time_effective);
    if (full_found && eff_found)
        rep.transfer_time_relative_difference =
            std::abs(rep.transfer_time_full - rep.transfer_time_effective) / rep.transfer_time_effective;
    else if (full_found != eff_found)
        rep.transfer_time_relative_difference = infinity;

    std::ostringstream msg;
    if (rep.validity == AdiabaticValidity::Invalid)
        msg << "dispersive condition violated: |Delta_j| <= |g_j|";
    else if (rep.validity == AdiabaticValidity::Marginal)
        msg << "adiabatic condition marginal: |Delta_j| / |g_j| below " << adiabatic_contract_ratio;
    else {
        rep.contract_checked = true;
        const bool timing_ok = rep.transfer_time_relative_difference <= transfer_time_tolerance;
        const bool cpb_ok = rep.max_cpb_population <= rep.cpb_population_bound;
        rep.contract_ok = timing_ok && cpb_ok;
        if (!full_found && !eff_found)
            msg << "no complete transfer within the simulated time in either model";
        else
            msg << "transfer-time difference " << rep.transfer_time_relative_difference;
        if (!timing_ok)
            msg << " exceeds " << transfer_time_tolerance;
        if (!cpb_ok)
            msg << "; CPB population " << rep.max_cpb_population << " exceeds bound " << rep.cpb_population_bound;
    }
    rep.message = msg.str();
    return rep;
}

} // namespace qswitch
