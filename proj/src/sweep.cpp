#include "qswitch/sweep.hpp"
#include "qswitch/dynamics.hpp"
#include "qswitch/errors.hpp"
#include "qswitch/lattice.hpp"
#include "qswitch/scattering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace qswitch {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double scatter_sim_tolerance = 0.02;
constexpr double unitarity_tolerance = 1e-12;
constexpr double band_match_tolerance = 1e-9;

/// Evaluates fn(0..n-1) on a small worker pool. Results are stored by index,
/// and the exception of the lowest failing index is rethrown, so the outcome
/// never depends on scheduling.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& fn) {
    std::vector<T> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

void reject_unused(const Config& config) {
    const auto unused = config.unused_keys();
    if (unused.empty())
        return;
    std::string msg = "unknown configuration key(s):";
    for (const auto& key : unused)
        msg += " " + key;
    throw ConfigError{msg};
}

std::vector<double> inclusive_grid(double lo, double hi, double step, const std::string& what) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || hi < lo)
        throw ConfigError{what + ": need finite min <= max and a positive step"};
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 50'000'000)
        throw ConfigError{what + ": grid too large"};
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = lo + static_cast<double>(i) * step;
    return grid;
}

std::vector<double> linspace(double lo, double hi, long long points, const std::string& what) {
    if (points < 1 || !std::isfinite(lo) || !std::isfinite(hi))
        throw ConfigError{what + ": need at least one point and finite bounds"};
    if (points == 1)
        return {lo};
    std::vector<double> out(static_cast<std::size_t>(points));
    for (long long i = 0; i < points; ++i)
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    out.back() = hi;
    return out;
}

/// Flux points from sweep.flux, or from a cos(pi f) grid (sweep.cos_min .. sweep.cos_max).
std::vector<double> flux_points(const Config& cfg) {
    if (cfg.has("sweep.flux"))
        return cfg.numbers("sweep.flux", {});
    const double lo = cfg.number("sweep.cos_min", 0.02);
    const double hi = cfg.number("sweep.cos_max", 1.0);
    const auto points = cfg.integer("sweep.points", 50);
    if (!(lo > 0.0) || hi > 1.0 || lo > hi)
        throw ConfigError{"sweep.cos_min/cos_max must satisfy 0 < min <= max <= 1"};
    std::vector<double> flux;
    for (double c : linspace(lo, hi, points, "sweep.cos"))
        flux.push_back(c >= 1.0 ? 0.0 : std::acos(c) / pi);
    return flux;
}

LatticeSpec lattice_from_config(const Config& cfg, int default_sites) {
    LatticeSpec lat;
    lat.n_sites = static_cast<int>(cfg.integer("lattice.n_sites", default_sites));
    lat.cavity_frequency = cfg.number("lattice.omega", 0.0);
    lat.hopping = cfg.number("lattice.t", 1.0);
    lat.defect_bond = static_cast<int>(cfg.integer("lattice.defect_bond", (lat.n_sites - 1) / 2));
    lat.lambda = cfg.number("lattice.lambda", 0.0);
    return lat;
}

std::vector<Cell> coupler_cells(double f, const CouplerDerived& d) {
    return {f,
            cos_pi(f),
            d.charging_energy,
            d.josephson_energy,
            d.omega_b,
            d.omega_l,
            d.omega_r,
            d.omega_b_prime,
            d.g_l,
            d.g_r,
            d.delta_l,
            d.delta_r,
            d.omega_l_prime,
            d.omega_r_prime,
            d.g_eff,
            d.g_eff / (2.0 * pi),
            d.omega_b_doubleprime,
            d.harmonic_regime_ok,
            d.dispersive_regime_ok};
}

} // namespace

std::string_view to_string(Command command) {
    switch (command) {
    case Command::Dispersion: return "dispersion";
    case Command::TransmissionSweep: return "transmission-sweep";
    case Command::ScatterSim: return "scatter-sim";
    case Command::CouplerDesign: return "coupler-design";
    case Command::SwitchMap: return "switch-map";
    case Command::ValidateAdiabatic: return "validate-adiabatic";
    }
    return "unknown";
}

Command command_from_string(std::string_view name) {
    for (auto c : {Command::Dispersion, Command::TransmissionSweep, Command::ScatterSim, Command::CouplerDesign,
                   Command::SwitchMap, Command::ValidateAdiabatic})
        if (to_string(c) == name)
            return c;
    throw ConfigError{"unknown command '" + std::string{name} + "'"};
}

CircuitParams circuit_params_from_config(const Config& cfg, UnitSystem units) {
    auto p = CircuitParams::reference_device(units);
    p.tlr_frequency = cfg.number("circuit.omega", p.tlr_frequency);
    p.tlr_total_capacitance = cfg.number("circuit.c0d", p.tlr_total_capacitance);
    p.coupling_capacitance_left = cfg.number("circuit.c_left", p.coupling_capacitance_left);
    p.coupling_capacitance_right = cfg.number("circuit.c_right", p.coupling_capacitance_right);
    p.junction_capacitance = cfg.optional_number("circuit.c_junction");
    if (const auto e_c = cfg.optional_number("circuit.e_c"))
        p.charging_energy = e_c;
    else if (p.junction_capacitance)
        p.charging_energy.reset();

    const double e_c = p.charging_energy
                           ? *p.charging_energy
                           : charging_energy(p.coupling_capacitance_left, p.coupling_capacitance_right,
                                             *p.junction_capacitance, units);
    if (const auto e_j0 = cfg.optional_number("circuit.e_j0"))
        p.josephson_energy_scale = *e_j0;
    else
        p.josephson_energy_scale = cfg.number("circuit.e_j0_over_e_c", 1000.0) * e_c;
    p.flux_ratio = cfg.number("circuit.flux", 0.0);
    p.units = units;
    return p;
}

// ---------------------------------------------------------------------------

RunOutcome run_dispersion(const SweepConfig& config) {
    const auto& cfg = config.params;
    const auto n = static_cast<int>(cfg.integer("lattice.n_sites", 16));
    const double omega = cfg.number("lattice.omega", 0.0);
    const double t = cfg.number("lattice.t", 1.0);
    reject_unused(cfg);
    if (!(t >= 0.0))
        throw PreconditionError{"hopping t must be non-negative"};

    const auto band = diagonalize_periodic(n, omega, t);
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver{build_periodic_hamiltonian(n, omega, t),
                                                     Eigen::EigenvaluesOnly};
    std::vector<double> analytic;
    for (const auto& p : band)
        analytic.push_back(p.energy);
    std::sort(analytic.begin(), analytic.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i)
        worst = std::max(worst, std::abs(analytic[i] - solver.eigenvalues()(static_cast<Eigen::Index>(i))));

    RunOutcome out;
    out.table.columns = {"m", "k", "omega_k", "group_velocity"};
    for (const auto& p : band)
        out.table.add_row({std::int64_t{p.m}, p.k, p.energy, group_velocity(p.k, t)});
    out.table.add_summary("max_eigenvalue_error", worst);
    out.table.add_summary("tolerance", band_match_tolerance);
    if (worst > band_match_tolerance) {
        out.status = RunStatus::ContractFailed;
        out.message = "band energies disagree with the periodic Hamiltonian spectrum";
    }
    return out;
}

RunOutcome run_transmission_sweep(const SweepConfig& config) {
    const auto& cfg = config.params;
    const auto ks = cfg.numbers("sweep.k", {0.01, pi / 8, pi / 4, pi / 2});
    std::vector<double> lambdas;
    if (cfg.has("sweep.lambda")) {
        lambdas = cfg.numbers("sweep.lambda", {});
    } else {
        lambdas = inclusive_grid(cfg.number("sweep.lambda_min", -1.0), cfg.number("sweep.lambda_max", 6.0),
                                 cfg.number("sweep.lambda_step", 0.01), "sweep.lambda");
    }
    const auto random_samples = cfg.integer("sweep.random_samples", 0);
    if (random_samples < 0)
        throw ConfigError{"sweep.random_samples must be non-negative"};
    reject_unused(cfg);
    for (double v : ks)
        if (!std::isfinite(v))
            throw PreconditionError{"wavevectors must be finite"};
    for (double v : lambdas)
        if (!std::isfinite(v))
            throw PreconditionError{"lambda values must be finite"};

    std::vector<std::pair<double, double>> points;  // (lambda, k)
    for (double k : ks)
        for (double lam : lambdas)
            points.emplace_back(lam, k);
    std::mt19937_64 rng{config.seed};
    std::uniform_real_distribution<double> lambda_dist{-1.0, 6.0};
    std::uniform_real_distribution<double> k_dist{-pi, pi};
    for (long long i = 0; i < random_samples; ++i) {
        const double lam = lambda_dist(rng);
        points.emplace_back(lam, k_dist(rng));
    }

    RunOutcome out;
    out.table.columns = {"lambda", "k", "T", "R"};
    double worst = 0.0;
    for (const auto& [lam, k] : points) {
        const double t = transmission(lam, k);
        const double r = reflection(lam, k);
        worst = std::max(worst, std::abs(t + r - 1.0));
        out.table.add_row({lam, k, t, r});
    }
    out.table.add_summary("max_unitarity_error", worst);
    if (worst > unitarity_tolerance) {
        out.status = RunStatus::ContractFailed;
        out.message = "T + R deviates from 1";
    }
    return out;
}

RunOutcome run_scatter_sim(const SweepConfig& config) {
    const auto& cfg = config.params;
    const auto lambdas = cfg.numbers("sweep.lambda", {-1.0, -0.75, -0.5, 0.0, 0.5, 1.0, 2.0});
    const auto k0s = cfg.numbers("sweep.k0", {pi / 8, pi / 4, pi / 2});
    auto base = lattice_from_config(cfg, 401);
    const double sigma = cfg.number("wavepacket.sigma", 20.0);
    const auto buffer = static_cast<int>(cfg.integer("wavepacket.buffer", 10));
    const auto boundary = static_cast<int>(cfg.integer("wavepacket.measurement_boundary", 0));
    const bool explicit_center = cfg.has("wavepacket.center_site");
    const auto center = static_cast<int>(cfg.integer("wavepacket.center_site", 0));
    reject_unused(cfg);

    struct Job {
        LatticeSpec lattice;
        WavepacketSpec packet;
    };
    std::vector<Job> jobs;
    for (double lam : lambdas) {
        for (double k0 : k0s) {
            Job job{base, default_wavepacket(base, k0, sigma, buffer)};
            job.lattice.lambda = lam;
            if (explicit_center)
                job.packet.center_site = center;
            if (boundary > 0)
                job.packet.measurement_boundary = boundary;
            validate_oracle_request(job.lattice, job.packet);
            jobs.push_back(job);
        }
    }

    const auto results = parallel_map<PropagationResult>(
        jobs.size(), config.threads, [&](std::size_t i) { return measure_transmission(jobs[i].lattice, jobs[i].packet); });

    RunOutcome out;
    out.table.columns = {"lambda", "k0", "T_analytic", "T_measured", "abs_error", "N", "sigma_x", "norm_drift"};
    double worst = 0.0, worst_drift = 0.0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const double k0 = jobs[i].packet.center_wavevector;
        const double analytic = transmission(jobs[i].lattice.lambda, k0);
        const double measured = results[i].transmitted_probability;
        const double err = std::abs(measured - analytic);
        worst = std::max(worst, err);
        worst_drift = std::max(worst_drift, results[i].norm_drift);
        out.table.add_row({jobs[i].lattice.lambda, k0, analytic, measured, err,
                           std::int64_t{jobs[i].lattice.n_sites}, sigma, results[i].norm_drift});
    }
    const bool ok = worst <= scatter_sim_tolerance && worst_drift < norm_drift_tolerance;
    out.table.add_summary("max_abs_error", worst);
    out.table.add_summary("tolerance", scatter_sim_tolerance);
    out.table.add_summary("max_norm_drift", worst_drift);
    out.table.add_summary("status", std::string{ok ? "pass" : "fail"});
    if (!ok) {
        std::ostringstream msg;
        msg << "packet oracle disagrees with the closed form: max |T_measured - T_analytic| = " << worst
            << " (tolerance " << scatter_sim_tolerance << ")";
        out.status = RunStatus::ContractFailed;
        out.message = msg.str();
    }
    return out;
}

RunOutcome run_coupler_design(const SweepConfig& config) {
    const auto& cfg = config.params;
    const auto base = circuit_params_from_config(cfg, config.units);
    const auto flux = flux_points(cfg);
    reject_unused(cfg);
    for (double f : flux) {
        auto p = base;
        p.flux_ratio = f;
        p.validate();
    }

    const auto derived = parallel_map<CouplerDerived>(flux.size(), config.threads, [&](std::size_t i) {
        auto p = base;
        p.flux_ratio = flux[i];
        return derive_coupler(p);
    });

    RunOutcome out;
    out.table.columns = {"f", "cos_pi_f", "E_C", "E_J", "omega_b", "omega_l", "omega_r", "omega_b_prime",
                         "g_l", "g_r", "delta_l", "delta_r", "omega_l_prime", "omega_r_prime", "g",
                         "g_over_2pi", "omega_b_doubleprime", "harmonic_regime_ok", "dispersive_regime_ok"};
    double g_min = std::numeric_limits<double>::infinity(), g_max = -g_min;
    for (std::size_t i = 0; i < flux.size(); ++i) {
        out.table.add_row(coupler_cells(flux[i], derived[i]));
        g_min = std::min(g_min, std::abs(derived[i].g_eff));
        g_max = std::max(g_max, std::abs(derived[i].g_eff));
    }
    out.table.add_summary("units", std::string{to_string(config.units)});
    out.table.add_summary("g_min", g_min);
    out.table.add_summary("g_max", g_max);
    out.table.add_summary("g_min_over_2pi", g_min / (2.0 * pi));
    out.table.add_summary("g_max_over_2pi", g_max / (2.0 * pi));
    out.table.add_summary("direct_coupling_ratio", direct_coupling_ratio(base));
    return out;
}

RunOutcome run_switch_map(const SweepConfig& config) {
    const auto& cfg = config.params;
    const auto base = circuit_params_from_config(cfg, config.units);
    const auto flux = flux_points(cfg);
    const auto ks = cfg.numbers("sweep.k", {pi / 4});
    double t = 0.0;
    if (cfg.has("lattice.t")) {
        t = cfg.number("lattice.t");
    } else if (cfg.has("lattice.t_from_cos")) {
        // uniform hopping equal to the induced coupling at this cos(pi f)
        const double c = cfg.number("lattice.t_from_cos");
        if (!(c > 0.0 && c <= 1.0))
            throw ConfigError{"lattice.t_from_cos must lie in (0, 1]"};
        auto p = base;
        p.flux_ratio = c >= 1.0 ? 0.0 : std::acos(c) / pi;
        t = std::abs(derive_coupler(p).g_eff);
    } else {
        throw ConfigError{"switch-map needs lattice.t or lattice.t_from_cos"};
    }
    reject_unused(cfg);
    if (!(t > 0.0) || !std::isfinite(t))
        throw PreconditionError{"uniform hopping t must be positive"};
    for (double f : flux) {
        auto p = base;
        p.flux_ratio = f;
        p.validate();
    }

    const auto points = parallel_map<SwitchPoint>(flux.size(), config.threads, [&](std::size_t i) {
        auto p = base;
        p.flux_ratio = flux[i];
        return flux_to_lambda(p, t);
    });

    RunOutcome out;
    out.table.columns = {"f", "cos_pi_f", "g", "lambda", "k", "T", "R", "harmonic_regime_ok",
                         "dispersive_regime_ok", "negative_defect_hopping"};
    for (std::size_t i = 0; i < flux.size(); ++i) {
        const auto& sp = points[i];
        for (double k : ks) {
            const double tr = transmission(sp.lambda, k);
            out.table.add_row({flux[i], cos_pi(flux[i]), sp.coupler.g_eff, sp.lambda, k, tr, reflection(sp.lambda, k),
                               sp.coupler.harmonic_regime_ok, sp.coupler.dispersive_regime_ok,
                               sp.negative_defect_hopping});
        }
    }
    out.table.add_summary("units", std::string{to_string(config.units)});
    out.table.add_summary("uniform_hopping", t);
    return out;
}

RunOutcome run_validate_adiabatic(const SweepConfig& config) {
    const auto& cfg = config.params;
    CouplerDerived coupler;
    if (cfg.has("adiabatic.delta") || cfg.has("adiabatic.g")) {
        const double omega = cfg.number("adiabatic.omega", 0.0);
        const double delta = cfg.number("adiabatic.delta");
        const double g = cfg.number("adiabatic.g");
        const double delta_r = cfg.number("adiabatic.delta_r", delta);
        const double g_r = cfg.number("adiabatic.g_r", g);
        const double omega_r = omega + delta - delta_r;
        coupler = coupler_from_modes(omega, omega_r, delta, delta_r, g, g_r);
    } else {
        coupler = derive_coupler(circuit_params_from_config(cfg, config.units));
    }
    const double duration = cfg.number("adiabatic.duration", 0.0);
    const double step = cfg.number("adiabatic.step", 0.0);
    reject_unused(cfg);

    const auto rep = validate_adiabatic_elimination(coupler, duration, step);
    RunOutcome out;
    out.table.columns = {"t", "left_full", "right_full", "cpb_full", "left_effective", "right_effective"};
    for (const auto& s : rep.samples)
        out.table.add_row({s.time, s.left_full, s.right_full, s.cpb_full, s.left_effective, s.right_effective});
    out.table.add_summary("validity", std::string{to_string(rep.validity)});
    out.table.add_summary("g_l", coupler.g_l);
    out.table.add_summary("g_r", coupler.g_r);
    out.table.add_summary("delta_l", coupler.delta_l);
    out.table.add_summary("delta_r", coupler.delta_r);
    out.table.add_summary("g_eff", coupler.g_eff);
    out.table.add_summary("coupling_ratio", rep.coupling_ratio);
    out.table.add_summary("max_cpb_population", rep.max_cpb_population);
    out.table.add_summary("cpb_population_bound", rep.cpb_population_bound);
    out.table.add_summary("predicted_transfer_time", rep.predicted_transfer_time);
    out.table.add_summary("transfer_time_full", rep.transfer_time_full);
    out.table.add_summary("transfer_time_effective", rep.transfer_time_effective);
    out.table.add_summary("transfer_time_relative_difference", rep.transfer_time_relative_difference);
    out.table.add_summary("contract_checked", rep.contract_checked);
    out.table.add_summary("contract_ok", rep.contract_ok);
    out.message = rep.message;
    if (rep.validity == AdiabaticValidity::Invalid)
        out.status = RunStatus::PreconditionFailed;
    else if (rep.contract_checked && !rep.contract_ok)
        out.status = RunStatus::ContractFailed;
    return out;
}

RunOutcome run_sweep(const SweepConfig& config) {
    switch (config.mode) {
    case Command::Dispersion: return run_dispersion(config);
    case Command::TransmissionSweep: return run_transmission_sweep(config);
    case Command::ScatterSim: return run_scatter_sim(config);
    case Command::CouplerDesign: return run_coupler_design(config);
    case Command::SwitchMap: return run_switch_map(config);
    case Command::ValidateAdiabatic: return run_validate_adiabatic(config);
    }
    throw ConfigError{"unknown command"};
}

std::string render(const RunOutcome& outcome, const SweepConfig& config) {
    return config.format == OutputFormat::Json ? to_json(outcome.table, to_string(config.mode))
                                               : to_csv(outcome.table);
}

} // namespace qswitch
