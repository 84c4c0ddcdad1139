/*
 * qswitch C API.
 *
 * Every function returns a qs_status; results come back through out
 * parameters. On failure qs_last_error() describes the problem for the
 * calling thread. Handles are opaque and released with the matching
 * *_destroy function (which accepts NULL).
 *
 * Status codes match the exit codes of the qswitch command-line tool.
 */
#ifndef QSWITCH_QSWITCH_H
#define QSWITCH_QSWITCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(QSWITCH_BUILDING_LIBRARY)
#  define QS_API __attribute__((visibility("default")))
#else
#  define QS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qs_status {
    QS_OK = 0,
    QS_ERR_INTERNAL = 1,
    QS_ERR_CONFIG = 2,
    QS_ERR_PRECONDITION = 3,
    QS_ERR_CONTRACT = 4,
    QS_ERR_INVALID_ARGUMENT = 5
} qs_status;

typedef enum qs_units { QS_UNITS_PAPER = 0, QS_UNITS_SI = 1 } qs_units;
typedef enum qs_format { QS_FORMAT_CSV = 0, QS_FORMAT_JSON = 1 } qs_format;
typedef enum qs_syntax { QS_SYNTAX_AUTO = 0, QS_SYNTAX_KEY_VALUE = 1, QS_SYNTAX_JSON = 2 } qs_syntax;

QS_API const char* qs_status_name(qs_status status);
/* Message of the last failed call on this thread ("" if none). */
QS_API const char* qs_last_error(void);
QS_API const char* qs_version(void);

/* ---- lattice ---------------------------------------------------------- */

typedef struct qs_lattice qs_lattice;

/* Sites are numbered 1..n_sites; the defect bond joins defect_bond and defect_bond + 1. */
QS_API qs_status qs_lattice_create(int n_sites, double omega, double hopping, int defect_bond, double lambda,
                                   qs_lattice** out);
QS_API void qs_lattice_destroy(qs_lattice* lattice);
QS_API qs_status qs_lattice_size(const qs_lattice* lattice, int* n_sites);
/* Row-major N x N Hamiltonian; `capacity` is the number of doubles in `out`. */
QS_API qs_status qs_lattice_hamiltonian(const qs_lattice* lattice, double* out, size_t capacity);

QS_API double qs_dispersion(double k, double omega, double hopping);
QS_API double qs_group_velocity(double k, double hopping);

/* ---- scattering ------------------------------------------------------- */

QS_API qs_status qs_transmission(double lambda, double k, double* transmission);
QS_API qs_status qs_reflection(double lambda, double k, double* reflection);

typedef struct qs_amplitudes {
    double r_re, r_im;
    double s_re, s_im;
} qs_amplitudes;

QS_API qs_status qs_scattering_amplitudes(double lambda, double k, int defect_bond, qs_amplitudes* out);
QS_API qs_status qs_verify_ansatz_residual(double lambda, double k, int defect_bond, int n_sites,
                                           double* residual);

/* ---- wavepacket oracle ------------------------------------------------ */

typedef struct qs_wavepacket {
    int center_site;          /* 0: place automatically next to the defect */
    double center_wavevector;
    double width;             /* sigma_x in sites */
    int measurement_boundary; /* 0: l + 1 + ceil(3 sigma_x) */
    int buffer;
} qs_wavepacket;

typedef struct qs_propagation_result {
    double transmitted_probability;
    double reflected_probability;
    double residual_probability;
    double near_defect_probability;
    double norm_drift;
    double elapsed_model_time;
    int measurement_boundary;
} qs_propagation_result;

QS_API qs_status qs_measure_transmission(const qs_lattice* lattice, const qs_wavepacket* packet,
                                         qs_propagation_result* out);

/* ---- circuit model ---------------------------------------------------- */

typedef struct qs_circuit_params {
    double tlr_frequency;
    double tlr_total_capacitance;
    double coupling_capacitance_left;
    double coupling_capacitance_right;
    double junction_capacitance; /* used when has_junction_capacitance */
    int has_junction_capacitance;
    double josephson_energy_scale;
    double flux_ratio;
    double charging_energy;      /* used when has_charging_energy */
    int has_charging_energy;
    qs_units units;
} qs_circuit_params;

typedef struct qs_coupler_derived {
    double charging_energy, josephson_energy;
    double omega_b, omega_l, omega_r, omega_b_prime;
    double g_l, g_r, delta_l, delta_r;
    double omega_l_prime, omega_r_prime, g_eff, omega_b_doubleprime;
    int harmonic_regime_ok, dispersive_regime_ok;
} qs_coupler_derived;

/* Reference device of the quoted parameter set, energies in `units`. */
QS_API qs_status qs_circuit_reference(qs_units units, qs_circuit_params* out);
QS_API qs_status qs_coupler_derive(const qs_circuit_params* params, qs_coupler_derived* out);
QS_API qs_status qs_flux_to_lambda(const qs_circuit_params* params, double uniform_hopping, double* lambda,
                                   qs_coupler_derived* coupler /* may be NULL */);
QS_API qs_status qs_direct_coupling_ratio(const qs_circuit_params* params, double* ratio);

typedef enum qs_validity { QS_VALID = 0, QS_MARGINAL = 1, QS_INVALID = 2 } qs_validity;

typedef struct qs_adiabatic_report {
    qs_validity validity;
    double coupling_ratio;
    double max_cpb_population;
    double cpb_population_bound;
    double predicted_transfer_time;
    double transfer_time_full;
    double transfer_time_effective;
    double transfer_time_relative_difference;
    int contract_checked;
    int contract_ok;
} qs_adiabatic_report;

QS_API qs_status qs_validate_adiabatic(const qs_coupler_derived* coupler, double duration, double step,
                                       qs_adiabatic_report* out);

/* ---- command runner --------------------------------------------------- */

typedef struct qs_run_result qs_run_result;

typedef struct qs_run_options {
    qs_format format;
    qs_units units;
    uint64_t seed;
    unsigned threads; /* 0: hardware concurrency */
    qs_syntax syntax;
} qs_run_options;

QS_API void qs_run_options_default(qs_run_options* options);

/*
 * Runs a command ("dispersion", "transmission-sweep", "scatter-sim",
 * "coupler-design", "switch-map", "validate-adiabatic") on configuration
 * text. A result handle is returned whenever `out` is non-NULL, also on
 * failure, so the caller can read the error report. The return value equals
 * qs_run_result_status(*out).
 */
QS_API qs_status qs_run(const char* command, const char* config_text, const qs_run_options* options,
                        qs_run_result** out);
QS_API qs_status qs_run_result_status(const qs_run_result* result);
/* Rendered table (CSV or JSON); empty when the command did not produce one. */
QS_API const char* qs_run_result_output(const qs_run_result* result);
/* JSON object {"status", "code", "command", "message"}; also set on success. */
QS_API const char* qs_run_result_report(const qs_run_result* result);
QS_API void qs_run_result_destroy(qs_run_result* result);

#ifdef __cplusplus
}
#endif

#endif /* QSWITCH_QSWITCH_H */
