// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include "qswitch/circuit.hpp"
#include "qswitch/dynamics.hpp"
#include "qswitch/errors.hpp"
#include "qswitch/scattering.hpp"
#include "qswitch/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qswitch;
using std::numbers::pi;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail << "first failure: " << what << "; ";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Check&)>& body) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail << "exception: " << e.what() << "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.2fs) %s\n", c.ok ? "PASS" : "FAIL", id, title, secs, c.detail.str().c_str());
    std::fflush(stdout);
    if (!c.ok)
        ++failures;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

CircuitParams reference_at_cos(double c) {
    auto p = CircuitParams::reference_device(UnitSystem::Paper);
    p.flux_ratio = c >= 1.0 ? 0.0 : std::acos(c) / pi;
    return p;
}

void closed_form(Check& c) {
    for (double k : {pi / 8, pi / 4, pi / 2}) {
        c.require(transmission(0.0, k) == 1.0, "T(0, k) = 1 at k = " + num(k));
        c.require(transmission(-1.0, k) == 0.0, "T(-1, k) = 0 at k = " + num(k));
    }
    const double big = transmission(1e6, pi / 2);
    const double slow = transmission(0.5, 1e-4);
    c.require(big < 1e-10, "T(1e6, pi/2) = " + num(big));
    c.require(slow < 1e-6, "T(0.5, 1e-4) = " + num(slow));
    c.detail << "T(1e6,pi/2)=" << num(big) << " T(0.5,1e-4)=" << num(slow);
}

void symmetry(Check& c) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> lam(-0.999, 10.0), kk(-pi, pi);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double lambda = lam(rng), k = kk(rng);
        const double t = transmission(lambda, k);
        const double beta = 1.0 + lambda;
        const std::vector<double> errs{
            std::abs(t - transmission(lambda, -k)),
            std::abs(transmission(lambda, pi / 2 - k) - transmission(lambda, pi / 2 + k)),
            std::abs(t - transmission(1.0 / beta - 1.0, k)),
        };
        for (double e : errs)
            worst = std::max(worst, e);
        if (std::abs(std::sin(k)) > 1e-12) {
            const auto a = scattering_amplitudes(lambda, k, 10);
            worst = std::max(worst, std::abs(std::norm(a.r) + std::norm(a.s) - 1.0));
        }
    }
    c.require(worst <= 1e-12, "max symmetry error " + num(worst));
    c.detail << "samples=1000 max_error=" << num(worst);
}

void ansatz(Check& c) {
    const std::vector<double> lambdas{-0.9, -0.5, -0.1, 0.0, 0.5, 2.0, 5.0};
    const std::vector<double> ks{0.1, pi / 8, pi / 4, pi / 2, 3 * pi / 4};
    double worst = 0.0;
    for (double lambda : lambdas)
        for (double k : ks)
            worst = std::max(worst, verify_ansatz_residual(lambda, k, 10, 30));
    c.require(worst < 1e-10, "max residual " + num(worst));
    c.detail << "grid=7x5 max_residual=" << num(worst);
}

void oracle(Check& c) {
    const std::vector<double> lambdas{-1.0, -0.75, -0.5, 0.0, 0.5, 1.0, 2.0};
    const std::vector<double> ks{pi / 8, pi / 4, pi / 2};
    double worst = 0.0, drift = 0.0;
    for (double lambda : lambdas) {
        for (double k : ks) {
            const LatticeSpec lat{401, 0.0, 1.0, 200, lambda};
            const auto r = measure_transmission(lat, default_wavepacket(lat, k, 20.0));
            const double err = std::abs(r.transmitted_probability - transmission(lambda, k));
            c.require(err <= 0.02, "lambda=" + num(lambda) + " k=" + num(k) + " error " + num(err));
            c.require(r.norm_drift < 1e-10, "norm drift " + num(r.norm_drift));
            worst = std::max(worst, err);
            drift = std::max(drift, r.norm_drift);
        }
    }
    c.detail << "runs=21 max_abs_error=" << num(worst) << " max_norm_drift=" << num(drift);
}

void circuit(Check& c) {
    const auto top = derive_coupler(reference_at_cos(1.0));
    const double target = 2 * pi * 22.14e9;
    const double rel = std::abs(top.omega_b - target) / target;
    c.require(rel <= 0.005, "omega_b off by " + num(rel));

    double g_min = INFINITY, g_max = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double cos_f = 0.02 + (1.0 - 0.02) * i / 200.0;
        const double g = std::abs(derive_coupler(reference_at_cos(cos_f)).g_eff);
        g_min = std::min(g_min, g);
        g_max = std::max(g_max, g);
    }
    c.require(std::abs(g_min / 1.1e6 - 1.0) <= 0.5, "g_min " + num(g_min));
    c.require(std::abs(g_max / 23e6 - 1.0) <= 0.5, "g_max " + num(g_max));
    c.detail << "omega_b/2pi=" << num(top.omega_b / (2 * pi)) << " g_range=[" << num(g_min) << ", " << num(g_max)
             << "]";
}

void adiabatic(Check& c) {
    double previous = INFINITY;
    for (double ratio : {10.0, 20.0, 40.0}) {
        const double gp = 1.0, delta = ratio * gp;
        const auto rep = validate_adiabatic_elimination(coupler_from_modes(0.0, 0.0, delta, delta, gp, gp), 0.0, 0.0);
        const double expected = pi / (2.0 * gp * gp / delta);
        const double err = std::abs(rep.transfer_time_full - expected) / expected;
        const double bound = 1.5 * 4.0 * (gp / delta) * (gp / delta);
        c.require(err <= 0.05, "ratio " + num(ratio) + " transfer time error " + num(err));
        c.require(err < previous, "error not decreasing at ratio " + num(ratio));
        c.require(rep.max_cpb_population <= bound, "ratio " + num(ratio) + " CPB population " +
                                                       num(rep.max_cpb_population) + " > " + num(bound));
        c.detail << "ratio=" << ratio << ":err=" << num(err) << ",cpb=" << num(rep.max_cpb_population) << " ";
        previous = err;
    }
}

void switch_map(Check& c) {
    // transparent point: uniform hopping equal to the coupling at cos(pi f) = 0.3
    const double t_match = derive_coupler(reference_at_cos(0.3)).g_eff;
    const auto match = flux_to_lambda(reference_at_cos(0.3), t_match);
    const double t_one = transmission(match.lambda, pi / 4);
    c.require(std::abs(t_one - 1.0) < 1e-12, "T at g = t is " + num(t_one));

    // opaque points: every flux with |g| < 0.02 t
    const double t = derive_coupler(reference_at_cos(0.02)).g_eff;
    int opaque = 0;
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double cos_f = 1e-4 + (1.0 - 1e-4) * i / 4000.0;
        const auto sp = flux_to_lambda(reference_at_cos(cos_f), t);
        if (std::abs(sp.coupler.g_eff) < 0.02 * t) {
            ++opaque;
            worst = std::max(worst, transmission(sp.lambda, pi / 4));
        }
    }
    c.require(opaque > 0, "no flux point with |g| < 0.02 t");
    c.require(worst < 1e-3, "T with |g| < 0.02 t reaches " + num(worst));

    SweepConfig cfg;
    cfg.mode = Command::SwitchMap;
    cfg.params = Config::parse("lattice.t_from_cos = 0.02\nsweep.cos_min = 0.0001\nsweep.points = 400\n"
                               "sweep.k = pi/8, pi/4, pi/2\n");
    const auto first = render(run_sweep(cfg), cfg);
    cfg.params = Config::parse("lattice.t_from_cos = 0.02\nsweep.cos_min = 0.0001\nsweep.points = 400\n"
                               "sweep.k = pi/8, pi/4, pi/2\n");
    const auto second = render(run_sweep(cfg), cfg);
    c.require(first == second, "CSV output differs between runs");
    c.detail << "T(g=t)=" << num(t_one) << " opaque_points=" << opaque << " max_T_opaque=" << num(worst)
             << " csv_bytes=" << first.size();
}

} // namespace

int main() {
    criterion(1, "closed-form fidelity", closed_form);
    criterion(2, "symmetry suite", symmetry);
    criterion(3, "ansatz residual", ansatz);
    criterion(4, "wavepacket oracle equivalence", oracle);
    criterion(5, "circuit numbers", circuit);
    criterion(6, "adiabatic elimination", adiabatic);
    criterion(7, "end-to-end switch map", switch_map);
    return failures == 0 ? 0 : 1;
}
