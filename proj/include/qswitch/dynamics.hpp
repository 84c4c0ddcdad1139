#pragma once

#include "qswitch/circuit.hpp"
#include "qswitch/lattice.hpp"

#include <string>
#include <vector>

namespace qswitch {

/// Largest tolerated change of <psi|psi> over a propagation.
inline constexpr double norm_drift_tolerance = 1e-10;

/// Exact single-excitation propagator exp(-i H t) for a Hermitian matrix,
/// built once from the eigendecomposition of H and reused for any time.
class Propagator {
public:
    /// Throws PreconditionError if H is not square or not Hermitian.
    explicit Propagator(const ComplexMatrix& hamiltonian);
    explicit Propagator(const RealMatrix& hamiltonian);

    Eigen::Index dimension() const { return energies_.size(); }
    const Eigen::VectorXd& energies() const { return energies_; }
    const ComplexMatrix& modes() const { return modes_; }

    /// psi(time) for psi(0) = psi0; negative times run backwards.
    StateVector evolve(const StateVector& psi0, double time) const;

    /// psi at 0, step, 2 step, ..., duration (the last sample is always `duration`).
    std::vector<StateVector> trajectory(const StateVector& psi0, double duration, double step) const;

private:
    ComplexMatrix modes_;  // columns are eigenvectors
    Eigen::VectorXd energies_;
};

/// Evolves psi0 for `duration` and audits <psi|psi> every `step`.
/// Throws ContractViolation when the drift exceeds norm_drift_tolerance and
/// PreconditionError for non-Hermitian H or a non-normalized psi0.
StateVector propagate(const ComplexMatrix& hamiltonian, const StateVector& psi0, double duration,
                      double step);

/// Gaussian single-photon packet launched toward the defect from the left.
struct WavepacketSpec {
    int center_site = 0;             ///< n0
    double center_wavevector = 0.0;  ///< k0 in (0, pi)
    double width = 20.0;             ///< sigma_x in sites, |A_n|^2 has standard deviation sigma_x
    int measurement_boundary = 0;    ///< b; transmitted probability is sum over n >= b. 0 selects l + 1 + ceil(3 sigma_x)
    int buffer = 10;                 ///< free sites between the initial tails and the chain ends
};

inline constexpr double min_packet_width = 4.0;
inline constexpr double min_oracle_wavevector = 0.05;  ///< in units of pi
inline constexpr double max_oracle_wavevector = 0.95;
inline constexpr double separation_tolerance = 1e-3;

/// Places the packet as close to the defect as the buffer allows.
WavepacketSpec default_wavepacket(const LatticeSpec& lattice, double k0, double width, int buffer = 10);

/// Smallest odd chain (defect bond at the centre, default packet layout) that
/// keeps boundary echoes out of both measurement windows.
int required_chain_length(double k0, double width, double hopping, int buffer = 10);

/// Normalized A_n = exp(-(n-n0)^2 / (4 sigma^2)) exp(i k0 n).
StateVector gaussian_wavepacket(int n_sites, int center_site, double k0, double width);

struct PropagationResult {
    SingleExcitationState final_state;
    double transmitted_probability = 0.0;  ///< sites n >= b
    double reflected_probability = 0.0;    ///< sites n <= l - 3
    double residual_probability = 0.0;     ///< everything in between
    double near_defect_probability = 0.0;  ///< sites l-2 .. l+3
    double norm_drift = 0.0;
    double elapsed_model_time = 0.0;
    int measurement_boundary = 0;
};

/// Every precondition of measure_transmission, without propagating.
void validate_oracle_request(const LatticeSpec& lattice, const WavepacketSpec& packet);

/// Launches the packet, propagates until the reflected and transmitted lobes
/// have separated, and integrates the transmitted probability.
///
/// Stop time is (b - n0 + 4 sigma) / v_g(k0). Throws PreconditionError for
/// band-edge k0, a too-narrow packet or a chain too short to avoid boundary
/// echoes (the message names the required N), and ContractViolation when the
/// lobes have not left the defect region or the norm drifted.
PropagationResult measure_transmission(const LatticeSpec& lattice, const WavepacketSpec& packet);

struct TransferSample {
    double time = 0.0;
    double left_full = 0.0;
    double right_full = 0.0;
    double cpb_full = 0.0;
    double left_effective = 0.0;
    double right_effective = 0.0;
};

enum class AdiabaticValidity {
    Valid,     ///< |Delta_j| >= 10 |g_j|: contract enforced
    Marginal,  ///< |g_j| < |Delta_j| < 10 |g_j|: reported, not enforced
    Invalid,   ///< |Delta_j| <= |g_j|
};

std::string_view to_string(AdiabaticValidity validity);

struct AdiabaticReport {
    AdiabaticValidity validity = AdiabaticValidity::Invalid;
    double coupling_ratio = 0.0;           ///< max_j |g_j / Delta_j|
    double max_cpb_population = 0.0;
    double cpb_population_bound = 0.0;     ///< 1.5 * 4 * coupling_ratio^2
    double predicted_transfer_time = 0.0;  ///< pi / (2 |g|), infinite for g = 0
    double transfer_time_full = 0.0;       ///< infinite when no transfer was observed
    double transfer_time_effective = 0.0;
    double transfer_time_relative_difference = 0.0;
    double max_right_population_full = 0.0;
    double max_right_population_effective = 0.0;
    bool contract_checked = false;
    bool contract_ok = true;
    std::string message;
    std::vector<TransferSample> samples;
};

inline constexpr double adiabatic_contract_ratio = 10.0;
inline constexpr double transfer_time_tolerance = 0.05;
inline constexpr double cpb_population_margin = 1.5;

/// Evolves a photon starting in the left TLR under the three-mode model
/// (omega_l, omega_r, omega_b'; couplings g_l, g_r) and under the eliminated
/// two-mode model (omega_l', omega_r'; coupling g) and compares them.
///
/// The first complete-transfer time is the peak of the first lobe of the
/// right-TLR population above 1/2, after averaging over one CPB detuning
/// period to remove the fast off-resonant wiggle. A non-positive duration
/// selects twice the predicted transfer time.
AdiabaticReport validate_adiabatic_elimination(const CouplerDerived& coupler, double duration,
                                               double step);

} // namespace qswitch
