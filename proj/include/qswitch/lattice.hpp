#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace qswitch {

/// Open N-site tight-binding chain of identical cavities with one modified
/// hopping bond between sites `defect_bond` and `defect_bond + 1`.
///
/// Sites are numbered 1..N (the matrix row of site n is n-1). The defect
/// hopping is t' = (1 + lambda) t and is never stored separately. Lattice
/// spacing is 1, so wavevectors are dimensionless.
struct LatticeSpec {
    int n_sites = 0;
    double cavity_frequency = 0.0;  ///< omega
    double hopping = 1.0;           ///< t > 0
    int defect_bond = 1;            ///< l in [1, N-1]
    double lambda = 0.0;

    double defect_hopping() const { return (1.0 + lambda) * hopping; }

    /// t' < 0: outside the regime the closed form was derived for, though still valid.
    bool negative_defect_hopping() const { return lambda < -1.0; }

    /// Throws PreconditionError when N < 3, l is out of range, t <= 0 or a field is non-finite.
    void validate() const;
};

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Amplitudes A_n of a single-excitation state; index i holds site i+1.
struct SingleExcitationState {
    StateVector amplitudes;
    double time = 0.0;

    double squared_norm() const { return amplitudes.squaredNorm(); }
};

/// Dense, exactly symmetric tridiagonal Hamiltonian of the open chain.
RealMatrix build_hamiltonian(const LatticeSpec& spec);

/// Same chain closed into a ring (site N hops to site 1 with strength t).
RealMatrix build_periodic_hamiltonian(int n_sites, double omega, double t);

/// Band energy omega - 2 t cos k.
double dispersion(double k, double omega, double t);

/// dOmega/dk = 2 t sin k.
double group_velocity(double k, double t);

/// Fold k into (-pi, pi].
double fold_wavevector(double k);

struct BandPoint {
    int m = 0;
    double k = 0.0;
    double energy = 0.0;
};

/// Bloch momenta k_m = 2 pi m / N, -N/2 < m <= N/2, of the uniform ring
/// with their band energies, in increasing m.
std::vector<BandPoint> diagonalize_periodic(int n_sites, double omega, double t);

} // namespace qswitch
