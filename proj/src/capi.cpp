#include "qswitch/qswitch.h"

#include "qswitch/circuit.hpp"
#include "qswitch/dynamics.hpp"
#include "qswitch/errors.hpp"
#include "qswitch/lattice.hpp"
#include "qswitch/scattering.hpp"
#include "qswitch/sweep.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <new>
#include <string>

struct qs_lattice {
    qswitch::LatticeSpec spec;
};

struct qs_run_result {
    qs_status status = QS_OK;
    std::string output;
    std::string report;
};

namespace {

thread_local std::string last_error;

template <class F>
qs_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return QS_OK;
    } catch (const qswitch::ConfigError& e) {
        last_error = e.what();
        return QS_ERR_CONFIG;
    } catch (const qswitch::PreconditionError& e) {
        last_error = e.what();
        return QS_ERR_PRECONDITION;
    } catch (const qswitch::ContractViolation& e) {
        last_error = e.what();
        return QS_ERR_CONTRACT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return QS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return QS_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return QS_ERR_INTERNAL;
    }
}

qs_status invalid(const char* what) {
    last_error = what;
    return QS_ERR_INVALID_ARGUMENT;
}

qswitch::UnitSystem to_units(qs_units u) {
    return u == QS_UNITS_SI ? qswitch::UnitSystem::SI : qswitch::UnitSystem::Paper;
}

qswitch::CircuitParams from_c(const qs_circuit_params& c) {
    qswitch::CircuitParams p;
    p.tlr_frequency = c.tlr_frequency;
    p.tlr_total_capacitance = c.tlr_total_capacitance;
    p.coupling_capacitance_left = c.coupling_capacitance_left;
    p.coupling_capacitance_right = c.coupling_capacitance_right;
    if (c.has_junction_capacitance)
        p.junction_capacitance = c.junction_capacitance;
    p.josephson_energy_scale = c.josephson_energy_scale;
    p.flux_ratio = c.flux_ratio;
    if (c.has_charging_energy)
        p.charging_energy = c.charging_energy;
    p.units = to_units(c.units);
    return p;
}

qs_coupler_derived to_c(const qswitch::CouplerDerived& d) {
    return {d.charging_energy, d.josephson_energy, d.omega_b,       d.omega_l,
            d.omega_r,         d.omega_b_prime,    d.g_l,           d.g_r,
            d.delta_l,         d.delta_r,          d.omega_l_prime, d.omega_r_prime,
            d.g_eff,           d.omega_b_doubleprime, d.harmonic_regime_ok ? 1 : 0,
            d.dispersive_regime_ok ? 1 : 0};
}

qswitch::CouplerDerived from_c(const qs_coupler_derived& c) {
    qswitch::CouplerDerived d;
    d.charging_energy = c.charging_energy;
    d.josephson_energy = c.josephson_energy;
    d.omega_b = c.omega_b;
    d.omega_l = c.omega_l;
    d.omega_r = c.omega_r;
    d.omega_b_prime = c.omega_b_prime;
    d.g_l = c.g_l;
    d.g_r = c.g_r;
    d.delta_l = c.delta_l;
    d.delta_r = c.delta_r;
    d.omega_l_prime = c.omega_l_prime;
    d.omega_r_prime = c.omega_r_prime;
    d.g_eff = c.g_eff;
    d.omega_b_doubleprime = c.omega_b_doubleprime;
    d.harmonic_regime_ok = c.harmonic_regime_ok != 0;
    d.dispersive_regime_ok = c.dispersive_regime_ok != 0;
    return d;
}

std::string error_report(qs_status status, const std::string& command, const std::string& message) {
    nlohmann::ordered_json doc;
    doc["status"] = qs_status_name(status);
    doc["code"] = static_cast<int>(status);
    doc["command"] = command;
    doc["message"] = message;
    return doc.dump();
}

} // namespace

extern "C" {

const char* qs_status_name(qs_status status) {
    switch (status) {
    case QS_OK: return "ok";
    case QS_ERR_INTERNAL: return "internal_error";
    case QS_ERR_CONFIG: return "config_error";
    case QS_ERR_PRECONDITION: return "precondition_violation";
    case QS_ERR_CONTRACT: return "contract_violation";
    case QS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    }
    return "unknown";
}

const char* qs_last_error(void) { return last_error.c_str(); }

const char* qs_version(void) { return "1.0.0"; }

qs_status qs_lattice_create(int n_sites, double omega, double hopping, int defect_bond, double lambda,
                            qs_lattice** out) {
    if (!out)
        return invalid("out is NULL");
    *out = nullptr;
    return guarded([&] {
        qswitch::LatticeSpec spec{n_sites, omega, hopping, defect_bond, lambda};
        spec.validate();
        *out = new qs_lattice{spec};
    });
}

void qs_lattice_destroy(qs_lattice* lattice) { delete lattice; }

qs_status qs_lattice_size(const qs_lattice* lattice, int* n_sites) {
    if (!lattice || !n_sites)
        return invalid("NULL argument");
    *n_sites = lattice->spec.n_sites;
    return QS_OK;
}

qs_status qs_lattice_hamiltonian(const qs_lattice* lattice, double* out, size_t capacity) {
    if (!lattice || !out)
        return invalid("NULL argument");
    const auto n = static_cast<size_t>(lattice->spec.n_sites);
    if (capacity < n * n)
        return invalid("output buffer smaller than N*N");
    return guarded([&] {
        const auto h = qswitch::build_hamiltonian(lattice->spec);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                out[i * n + j] = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    });
}

double qs_dispersion(double k, double omega, double hopping) { return qswitch::dispersion(k, omega, hopping); }

double qs_group_velocity(double k, double hopping) { return qswitch::group_velocity(k, hopping); }

qs_status qs_transmission(double lambda, double k, double* transmission) {
    if (!transmission)
        return invalid("NULL argument");
    return guarded([&] { *transmission = qswitch::transmission(lambda, k); });
}

qs_status qs_reflection(double lambda, double k, double* reflection) {
    if (!reflection)
        return invalid("NULL argument");
    return guarded([&] { *reflection = qswitch::reflection(lambda, k); });
}

qs_status qs_scattering_amplitudes(double lambda, double k, int defect_bond, qs_amplitudes* out) {
    if (!out)
        return invalid("NULL argument");
    return guarded([&] {
        const auto a = qswitch::scattering_amplitudes(lambda, k, defect_bond);
        *out = {a.r.real(), a.r.imag(), a.s.real(), a.s.imag()};
    });
}

qs_status qs_verify_ansatz_residual(double lambda, double k, int defect_bond, int n_sites, double* residual) {
    if (!residual)
        return invalid("NULL argument");
    return guarded([&] { *residual = qswitch::verify_ansatz_residual(lambda, k, defect_bond, n_sites); });
}

qs_status qs_measure_transmission(const qs_lattice* lattice, const qs_wavepacket* packet,
                                  qs_propagation_result* out) {
    if (!lattice || !packet || !out)
        return invalid("NULL argument");
    return guarded([&] {
        auto wp = qswitch::default_wavepacket(lattice->spec, packet->center_wavevector, packet->width,
                                              packet->buffer);
        if (packet->center_site != 0)
            wp.center_site = packet->center_site;
        if (packet->measurement_boundary != 0)
            wp.measurement_boundary = packet->measurement_boundary;
        const auto r = qswitch::measure_transmission(lattice->spec, wp);
        *out = {r.transmitted_probability, r.reflected_probability, r.residual_probability,
                r.near_defect_probability, r.norm_drift, r.elapsed_model_time, r.measurement_boundary};
    });
}

qs_status qs_circuit_reference(qs_units units, qs_circuit_params* out) {
    if (!out)
        return invalid("NULL argument");
    const auto p = qswitch::CircuitParams::reference_device(to_units(units));
    *out = {};
    out->tlr_frequency = p.tlr_frequency;
    out->tlr_total_capacitance = p.tlr_total_capacitance;
    out->coupling_capacitance_left = p.coupling_capacitance_left;
    out->coupling_capacitance_right = p.coupling_capacitance_right;
    out->josephson_energy_scale = p.josephson_energy_scale;
    out->flux_ratio = p.flux_ratio;
    out->charging_energy = *p.charging_energy;
    out->has_charging_energy = 1;
    out->units = units;
    return QS_OK;
}

qs_status qs_coupler_derive(const qs_circuit_params* params, qs_coupler_derived* out) {
    if (!params || !out)
        return invalid("NULL argument");
    return guarded([&] { *out = to_c(qswitch::derive_coupler(from_c(*params))); });
}

qs_status qs_flux_to_lambda(const qs_circuit_params* params, double uniform_hopping, double* lambda,
                            qs_coupler_derived* coupler) {
    if (!params || !lambda)
        return invalid("NULL argument");
    return guarded([&] {
        const auto sp = qswitch::flux_to_lambda(from_c(*params), uniform_hopping);
        *lambda = sp.lambda;
        if (coupler)
            *coupler = to_c(sp.coupler);
    });
}

qs_status qs_direct_coupling_ratio(const qs_circuit_params* params, double* ratio) {
    if (!params || !ratio)
        return invalid("NULL argument");
    return guarded([&] { *ratio = qswitch::direct_coupling_ratio(from_c(*params)); });
}

qs_status qs_validate_adiabatic(const qs_coupler_derived* coupler, double duration, double step,
                                qs_adiabatic_report* out) {
    if (!coupler || !out)
        return invalid("NULL argument");
    return guarded([&] {
        const auto rep = qswitch::validate_adiabatic_elimination(from_c(*coupler), duration, step);
        out->validity = rep.validity == qswitch::AdiabaticValidity::Valid      ? QS_VALID
                        : rep.validity == qswitch::AdiabaticValidity::Marginal ? QS_MARGINAL
                                                                               : QS_INVALID;
        out->coupling_ratio = rep.coupling_ratio;
        out->max_cpb_population = rep.max_cpb_population;
        out->cpb_population_bound = rep.cpb_population_bound;
        out->predicted_transfer_time = rep.predicted_transfer_time;
        out->transfer_time_full = rep.transfer_time_full;
        out->transfer_time_effective = rep.transfer_time_effective;
        out->transfer_time_relative_difference = rep.transfer_time_relative_difference;
        out->contract_checked = rep.contract_checked ? 1 : 0;
        out->contract_ok = rep.contract_ok ? 1 : 0;
    });
}

void qs_run_options_default(qs_run_options* options) {
    if (!options)
        return;
    options->format = QS_FORMAT_CSV;
    options->units = QS_UNITS_PAPER;
    options->seed = qswitch::SweepConfig{}.seed;
    options->threads = 0;
    options->syntax = QS_SYNTAX_AUTO;
}

qs_status qs_run(const char* command, const char* config_text, const qs_run_options* options,
                 qs_run_result** out) {
    if (!out)
        return invalid("out is NULL");
    *out = nullptr;
    auto* result = new (std::nothrow) qs_run_result;
    if (!result)
        return invalid("out of memory");
    *out = result;
    const std::string name = command ? command : "";
    if (!command || !config_text) {
        result->status = invalid("command and configuration text are required");
        result->report = error_report(result->status, name, last_error);
        return result->status;
    }
    qs_run_options opts;
    qs_run_options_default(&opts);
    if (options)
        opts = *options;

    std::string message;
    qs_status status = guarded([&] {
        qswitch::SweepConfig cfg;
        cfg.mode = qswitch::command_from_string(name);
        const auto syntax = opts.syntax == QS_SYNTAX_JSON        ? qswitch::ConfigSyntax::Json
                            : opts.syntax == QS_SYNTAX_KEY_VALUE ? qswitch::ConfigSyntax::KeyValue
                                                                 : qswitch::ConfigSyntax::Auto;
        cfg.params = qswitch::Config::parse(config_text, syntax);
        cfg.format = opts.format == QS_FORMAT_JSON ? qswitch::OutputFormat::Json : qswitch::OutputFormat::Csv;
        cfg.units = to_units(opts.units);
        cfg.seed = opts.seed;
        cfg.threads = opts.threads;
        const auto outcome = qswitch::run_sweep(cfg);
        result->output = qswitch::render(outcome, cfg);
        message = outcome.message;
        result->status = static_cast<qs_status>(static_cast<int>(outcome.status));
    });
    if (status != QS_OK) {
        result->status = status;
        message = last_error;
    } else if (result->status != QS_OK) {
        last_error = message;
    }
    result->report = error_report(result->status, name, message);
    return result->status;
}

qs_status qs_run_result_status(const qs_run_result* result) {
    return result ? result->status : QS_ERR_INVALID_ARGUMENT;
}

const char* qs_run_result_output(const qs_run_result* result) { return result ? result->output.c_str() : ""; }

const char* qs_run_result_report(const qs_run_result* result) { return result ? result->report.c_str() : ""; }

void qs_run_result_destroy(qs_run_result* result) { delete result; }

} // extern "C"
