#include "qswitch/circuit.hpp"
#include "qswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qswitch {

using constants::elementary_charge;
using constants::flux_quantum;
using constants::hbar;

std::string_view to_string(UnitSystem units) { return units == UnitSystem::SI ? "si" : "paper"; }

UnitSystem unit_system_from_string(std::string_view name) {
    if (name == "paper")
        return UnitSystem::Paper;
    if (name == "si" || name == "SI")
        return UnitSystem::SI;
    throw ConfigError{"unknown unit system '" + std::string{name} + "' (expected paper or si)"};
}

namespace {

double energy_to_angular(double energy, UnitSystem units) {
    return units == UnitSystem::SI ? energy / hbar : energy;
}

double angular_to_energy(double omega, UnitSystem units) {
    return units == UnitSystem::SI ? omega * hbar : omega;
}

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

double resolved_charging_energy(const CircuitParams& p) {
    if (p.charging_energy)
        return *p.charging_energy;
    if (!p.junction_capacitance)
        throw PreconditionError{"either the charging energy or the junction capacitance is required"};
    return charging_energy(p.coupling_capacitance_left, p.coupling_capacitance_right,
                           *p.junction_capacitance, p.units);
}

} // namespace

void CircuitParams::validate() const {
    if (!positive_finite(tlr_frequency))
        throw PreconditionError{"TLR frequency must be positive"};
    if (!positive_finite(tlr_total_capacitance))
        throw PreconditionError{"TLR total capacitance C0*d must be positive"};
    if (!(coupling_capacitance_left >= 0.0) || !(coupling_capacitance_right >= 0.0) ||
        !std::isfinite(coupling_capacitance_left) || !std::isfinite(coupling_capacitance_right))
        throw PreconditionError{"coupling capacitances must be non-negative"};
    if (junction_capacitance && !positive_finite(*junction_capacitance))
        throw PreconditionError{"junction capacitance must be positive"};
    if (charging_energy && !positive_finite(*charging_energy))
        throw PreconditionError{"charging energy must be positive"};
    if (!charging_energy && !junction_capacitance)
        throw PreconditionError{"either the charging energy or the junction capacitance is required"};
    if (!positive_finite(josephson_energy_scale))
        throw PreconditionError{"Josephson energy scale E_J0 must be positive"};
    if (!std::isfinite(flux_ratio))
        throw PreconditionError{"flux ratio must be finite"};
    if (cos_pi(flux_ratio) == 0.0)
        throw PreconditionError{"flux at a half-integer flux quantum: E_J vanishes"};
}

CircuitParams CircuitParams::reference_device(UnitSystem units) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double e_c = angular_to_energy(two_pi * 0.35e9, units);
    CircuitParams p;
    p.tlr_frequency = two_pi * 3e9;
    p.tlr_total_capacitance = 1.6e-12;
    p.coupling_capacitance_left = 6e-15;
    p.coupling_capacitance_right = 6e-15;
    p.charging_energy = e_c;
    p.josephson_energy_scale = 1000.0 * e_c;
    p.flux_ratio = 0.0;
    p.units = units;
    return p;
}

double charging_energy(double c_left, double c_right, double c_junction, UnitSystem units) {
    if (!positive_finite(c_left) || !positive_finite(c_right) || !positive_finite(c_junction))
        throw PreconditionError{"charging energy needs positive capacitances"};
    const double joules =
        2.0 * elementary_charge * elementary_charge / (c_left + c_right + 2.0 * c_junction);
    return units == UnitSystem::SI ? joules : joules / hbar;
}

double cos_pi(double f) {
    double r = std::fmod(std::abs(f), 2.0);  // [0, 2)
    if (r == 0.5 || r == 1.5)
        return 0.0;
    if (r > 1.0)
        r = 2.0 - r;  // cos(pi r) = cos(pi (2 - r))
    return std::cos(std::numbers::pi * r);
}

double josephson_energy(double josephson_energy_scale, double flux_ratio) {
    return 2.0 * josephson_energy_scale * cos_pi(flux_ratio);
}

double cpb_frequency(double charging_energy, double josephson_energy, UnitSystem units) {
    if (!(josephson_energy > 0.0))
        throw PreconditionError{"effective Josephson energy must be positive for a harmonic CPB"};
    if (!(charging_energy > 0.0))
        throw PreconditionError{"charging energy must be positive"};
    return energy_to_angular(std::sqrt(2.0 * charging_energy * josephson_energy), units);
}

// Two routes for the same physics. SI keeps Phi_0 and hbar explicit; Paper
// works in hbar = 1, where Phi_0 / 2pi = 1 / 2e and a capacitance C enters
// only through the charging rate e^2 / (hbar C).

RenormalizedFrequencies renormalized_frequencies(const CircuitParams& p, double omega_b,
                                                 double charging_energy, double josephson_energy) {
    const double c0d = p.tlr_total_capacitance;
    RenormalizedFrequencies out;
    out.omega_l = p.tlr_frequency * (1.0 + p.coupling_capacitance_left / c0d);
    out.omega_r = p.tlr_frequency * (1.0 + p.coupling_capacitance_right / c0d);

    const double c_sum = p.coupling_capacitance_left + p.coupling_capacitance_right;
    const double phase_zpf2 = std::sqrt(charging_energy / (2.0 * josephson_energy));
    double shift = 0.0;
    if (p.units == UnitSystem::SI) {
        const double phi = flux_quantum / (2.0 * std::numbers::pi);
        shift = c_sum * omega_b * omega_b * phi * phi * phase_zpf2 / hbar;
    } else if (c_sum > 0.0) {
        const double rate = elementary_charge * elementary_charge / (hbar * c_sum);
        shift = omega_b * omega_b * phase_zpf2 / (4.0 * rate);
    }
    out.omega_b_prime = omega_b + shift;
    return out;
}

CouplingStrengths coupling_strengths(const CircuitParams& p, double omega_b, double charging_energy,
                                     double josephson_energy) {
    const double omega = p.tlr_frequency;
    const double c0d = p.tlr_total_capacitance;
    const double phase_zpf = std::pow(charging_energy / (2.0 * josephson_energy), 0.25);
    if (p.units == UnitSystem::SI) {
        const double phi = flux_quantum / (2.0 * std::numbers::pi);
        const double voltage = std::sqrt(hbar * omega / c0d);
        const auto g = [&](double c) { return -c * omega_b * phi * voltage * phase_zpf / hbar; };
        return {g(p.coupling_capacitance_left), g(p.coupling_capacitance_right)};
    }
    const double e2 = elementary_charge * elementary_charge;
    const double tlr_rate = e2 / (hbar * c0d);
    const auto g = [&](double c) {
        // c / (e^2 / hbar) is the inverse charging rate of the coupling capacitor
        return -0.5 * omega_b * std::sqrt(omega * tlr_rate) * (hbar * c / e2) * phase_zpf;
    };
    return {g(p.coupling_capacitance_left), g(p.coupling_capacitance_right)};
}

EffectiveCoupling effective_coupling(double g_l, double g_r, double delta_l, double delta_r) {
    if (delta_l == 0.0 || delta_r == 0.0)
        throw PreconditionError{"CPB resonant with a TLR (zero detuning): no dispersive elimination"};
    EffectiveCoupling out;
    out.g = g_l * g_r * (delta_l + delta_r) / (2.0 * delta_l * delta_r);
    out.stark_shift_l = g_l * g_l / delta_l;
    out.stark_shift_r = g_r * g_r / delta_r;
    return out;
}

namespace {

// Needs omega_j, omega_b', g_j and Delta_j filled in.
void complete_from_modes(CouplerDerived& d) {
    const auto eff = effective_coupling(d.g_l, d.g_r, d.delta_l, d.delta_r);
    d.g_eff = eff.g;
    d.omega_l_prime = d.omega_l + eff.stark_shift_l;
    d.omega_r_prime = d.omega_r + eff.stark_shift_r;
    d.omega_b_doubleprime = d.omega_b_prime - eff.stark_shift_l - eff.stark_shift_r;
    d.dispersive_regime_ok = std::abs(d.delta_l) >= dispersive_regime_ratio * std::abs(d.g_l) &&
                             std::abs(d.delta_r) >= dispersive_regime_ratio * std::abs(d.g_r);
}

} // namespace

CouplerDerived derive_coupler(const CircuitParams& p) {
    p.validate();
    const double e_c = resolved_charging_energy(p);
    const double e_j = josephson_energy(p.josephson_energy_scale, p.flux_ratio);

    CouplerDerived d;
    d.charging_energy = energy_to_angular(e_c, p.units);
    d.josephson_energy = energy_to_angular(e_j, p.units);
    d.harmonic_regime_ok = e_j >= harmonic_regime_ratio * e_c;
    d.omega_b = cpb_frequency(e_c, e_j, p.units);

    const auto freq = renormalized_frequencies(p, d.omega_b, e_c, e_j);
    d.omega_l = freq.omega_l;
    d.omega_r = freq.omega_r;
    d.omega_b_prime = freq.omega_b_prime;

    const auto g = coupling_strengths(p, d.omega_b, e_c, e_j);
    d.g_l = g.g_l;
    d.g_r = g.g_r;
    d.delta_l = d.omega_b_prime - d.omega_l;
    d.delta_r = d.omega_b_prime - d.omega_r;
    complete_from_modes(d);
    return d;
}

CouplerDerived coupler_from_modes(double omega_l, double omega_r, double delta_l, double delta_r,
                                  double g_l, double g_r) {
    const double cpb_l = omega_l + delta_l;
    const double cpb_r = omega_r + delta_r;
    if (std::abs(cpb_l - cpb_r) > 1e-12 * std::max({std::abs(cpb_l), std::abs(cpb_r), 1.0}))
        throw PreconditionError{"detunings must refer to one CPB frequency: omega_l + delta_l == omega_r + delta_r"};
    CouplerDerived d;
    d.omega_l = omega_l;
    d.omega_r = omega_r;
    d.omega_b_prime = omega_l + delta_l;
    d.omega_b = d.omega_b_prime;
    d.g_l = g_l;
    d.g_r = g_r;
    d.delta_l = delta_l;
    d.delta_r = delta_r;
    d.harmonic_regime_ok = true;
    complete_from_modes(d);
    return d;
}

SwitchPoint flux_to_lambda(const CircuitParams& params, double uniform_hopping) {
    if (!positive_finite(uniform_hopping))
        throw PreconditionError{"uniform hopping t must be positive"};
    SwitchPoint sp;
    sp.coupler = derive_coupler(params);
    // g > 0 whenever both detunings are positive; a negative g (CPB below
    // the TLRs) becomes a negative bond, which only flips a gauge sign.
    sp.defect_hopping = sp.coupler.g_eff;
    sp.lambda = (sp.defect_hopping - uniform_hopping) / uniform_hopping;
    sp.negative_defect_hopping = sp.lambda < -1.0;
    return sp;
}

double direct_coupling_ratio(const CircuitParams& p) {
    const double half = 0.5 * p.tlr_total_capacitance;
    const auto ratio = [&](double c) {
        return c > 0.0 ? (half + c) / c : std::numeric_limits<double>::infinity();
    };
    return std::min(ratio(p.coupling_capacitance_left), ratio(p.coupling_capacitance_right));
}

} // namespace qswitch
