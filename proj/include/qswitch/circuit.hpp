#pragma once

#include <numbers>
#include <optional>
#include <string_view>

namespace qswitch {

/// How energies are expressed in CircuitParams.
///
/// Paper: hbar = 1, every energy is an angular frequency in rad/s.
/// SI: energies in joules; hbar is restored wherever an energy becomes a
/// frequency. Capacitances are farads and frequencies rad/s in both systems.
enum class UnitSystem { Paper, SI };

std::string_view to_string(UnitSystem units);
UnitSystem unit_system_from_string(std::string_view name);  // "paper" | "si"

namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;          // C
inline constexpr double planck = 6.62607015e-34;                      // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);  // J s
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);  // Wb
} // namespace constants

/// Two identical-frequency TLRs capacitively coupled to a flux-tunable CPB.
struct CircuitParams {
    double tlr_frequency = 0.0;               ///< omega, rad/s
    double tlr_total_capacitance = 0.0;       ///< C_0 d, F
    double coupling_capacitance_left = 0.0;   ///< C_l, F
    double coupling_capacitance_right = 0.0;  ///< C_r, F
    std::optional<double> junction_capacitance;  ///< C_J, F; unused when charging_energy is set
    double josephson_energy_scale = 0.0;      ///< E_J^(0) per junction
    double flux_ratio = 0.0;                  ///< f = Phi_x / Phi_0
    std::optional<double> charging_energy;    ///< E_C override
    UnitSystem units = UnitSystem::Paper;

    /// Throws PreconditionError. Coupling capacitances may be zero (decoupled limit).
    void validate() const;

    /// omega = 2pi x 3 GHz, C_l = C_r = 6 fF, C_0 d = 1.6 pF, E_C = 2pi x 0.35 GHz,
    /// E_J^(0) = 1000 E_C, zero flux; energies converted to `units`.
    static CircuitParams reference_device(UnitSystem units = UnitSystem::Paper);
};

/// Every derived quantity of the coupler. Frequencies, couplings and the two
/// energies are angular frequencies (rad/s) regardless of the input unit system.
struct CouplerDerived {
    double charging_energy = 0.0;   ///< E_C / hbar
    double josephson_energy = 0.0;  ///< E_J(Phi_x) / hbar
    double omega_b = 0.0;
    double omega_l = 0.0;
    double omega_r = 0.0;
    double omega_b_prime = 0.0;
    double g_l = 0.0;
    double g_r = 0.0;
    double delta_l = 0.0;  ///< omega_b' - omega_l
    double delta_r = 0.0;
    double omega_l_prime = 0.0;
    double omega_r_prime = 0.0;
    double g_eff = 0.0;
    double omega_b_doubleprime = 0.0;
    bool harmonic_regime_ok = false;    ///< E_J >= 100 E_C
    bool dispersive_regime_ok = false;  ///< |Delta_j| >= 5 |g_j| for both j
};

inline constexpr double harmonic_regime_ratio = 100.0;
inline constexpr double dispersive_regime_ratio = 5.0;

/// 2e^2 / (C_l + C_r + 2 C_J), in joules (SI) or rad/s (Paper).
double charging_energy(double c_left, double c_right, double c_junction, UnitSystem units);

/// cos(pi f) with exact zeros at half-integers, exact evenness and period 2.
double cos_pi(double f);

/// 2 E_J^(0) cos(pi f). Negative past half a flux quantum.
double josephson_energy(double josephson_energy_scale, double flux_ratio);

/// Plasma frequency sqrt(2 E_C E_J) of the harmonic CPB, in rad/s.
double cpb_frequency(double charging_energy, double josephson_energy, UnitSystem units);

struct RenormalizedFrequencies {
    double omega_l = 0.0;
    double omega_r = 0.0;
    double omega_b_prime = 0.0;
};

RenormalizedFrequencies renormalized_frequencies(const CircuitParams& params, double omega_b,
                                                 double charging_energy, double josephson_energy);

struct CouplingStrengths {
    double g_l = 0.0;
    double g_r = 0.0;
};

/// TLR-CPB couplings g_j (rad/s), negative for positive capacitances.
CouplingStrengths coupling_strengths(const CircuitParams& params, double omega_b,
                                     double charging_energy, double josephson_energy);

struct EffectiveCoupling {
    double g = 0.0;             ///< g_l g_r (Delta_l + Delta_r) / (2 Delta_l Delta_r)
    double stark_shift_l = 0.0; ///< g_l^2 / Delta_l
    double stark_shift_r = 0.0;
};

/// Throws PreconditionError for zero detuning.
EffectiveCoupling effective_coupling(double g_l, double g_r, double delta_l, double delta_r);

/// Runs the whole derivation chain for `params`.
CouplerDerived derive_coupler(const CircuitParams& params);

/// Coupler with prescribed (rather than derived) TLR frequencies, detunings
/// and couplings; used to study the elimination in isolation.
CouplerDerived coupler_from_modes(double omega_l, double omega_r, double delta_l, double delta_r,
                                  double g_l, double g_r);

struct SwitchPoint {
    CouplerDerived coupler;
    double defect_hopping = 0.0;  ///< t' = g
    double lambda = 0.0;          ///< (t' - t) / t
    bool negative_defect_hopping = false;  ///< lambda < -1
};

/// Maps the flux point in `params` to the defect parameter lambda of a chain
/// with uniform hopping `uniform_hopping` (rad/s).
SwitchPoint flux_to_lambda(const CircuitParams& params, double uniform_hopping);

/// min_j (C_0 d / 2 + C_j) / C_j.
double direct_coupling_ratio(const CircuitParams& params);

} // namespace qswitch
