#include "qswitch/circuit.hpp"
#include "qswitch/errors.hpp"
#include "qswitch/scattering.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qswitch;
using std::numbers::pi;

namespace {

CircuitParams at_cos(double c, UnitSystem units = UnitSystem::Paper) {
    auto p = CircuitParams::reference_device(units);
    p.flux_ratio = std::acos(c) / pi;
    return p;
}

} // namespace

TEST_CASE("cos_pi is exact at the special points") {
    CHECK(cos_pi(0.0) == 1.0);
    CHECK(cos_pi(0.5) == 0.0);
    CHECK(cos_pi(-0.5) == 0.0);
    CHECK(cos_pi(1.5) == 0.0);
    CHECK(cos_pi(1.0) == -1.0);
    CHECK(cos_pi(0.3) == cos_pi(-0.3));
    CHECK(cos_pi(0.3) == doctest::Approx(cos_pi(2.3)).epsilon(1e-15));
    CHECK(josephson_energy(5.0, 0.0) == 10.0);
    CHECK(josephson_energy(5.0, 0.5) == 0.0);
}

TEST_CASE("charging energy in both unit systems") {
    const double cj = 104.6e-15;
    const double ec_paper = charging_energy(6e-15, 6e-15, cj, UnitSystem::Paper);
    const double ec_si = charging_energy(6e-15, 6e-15, cj, UnitSystem::SI);
    CHECK(ec_paper == doctest::Approx(ec_si / constants::hbar).epsilon(1e-12));
    CHECK(ec_paper / (2 * pi) == doctest::Approx(0.35028e9).epsilon(1e-4));
    CHECK(constants::flux_quantum == doctest::Approx(2.0678338484619e-15).epsilon(1e-12));
}

TEST_CASE("reference device at zero flux") {
    const auto d = derive_coupler(at_cos(1.0));
    CHECK(d.charging_energy == doctest::Approx(2 * pi * 0.35e9).epsilon(1e-12));
    CHECK(d.josephson_energy / d.charging_energy == doctest::Approx(2000.0));
    CHECK(d.omega_b / (2 * pi) == doctest::Approx(22.136e9).epsilon(1e-4));
    CHECK(d.g_l == doctest::Approx(-3.650e8).epsilon(1e-3));
    CHECK(d.g_l == d.g_r);
    CHECK(d.delta_l == doctest::Approx(1.239e11).epsilon(1e-3));
    CHECK(d.g_eff == doctest::Approx(1.0750e6).epsilon(1e-3));
    CHECK(d.harmonic_regime_ok);
    CHECK(d.dispersive_regime_ok);
}

TEST_CASE("reference device near half flux") {
    const auto d = derive_coupler(at_cos(0.02));
    CHECK(d.omega_b / (2 * pi) == doctest::Approx(3.1305e9).epsilon(1e-4));
    CHECK(d.g_l == doctest::Approx(-1.3727e8).epsilon(1e-3));
    CHECK(d.delta_l == doctest::Approx(1.2824e9).epsilon(1e-3));
    CHECK(d.g_eff == doctest::Approx(1.4693e7).epsilon(1e-3));
    CHECK_FALSE(d.harmonic_regime_ok);

    const auto deep = derive_coupler(at_cos(1e-4));
    CHECK_FALSE(deep.harmonic_regime_ok);
    CHECK(deep.delta_l < 0.0);
    CHECK(deep.g_eff < 0.0);
}

TEST_CASE("SI and paper routes agree") {
    for (double c : {1.0, 0.5, 0.1, 0.02}) {
        const auto a = derive_coupler(at_cos(c, UnitSystem::Paper));
        const auto b = derive_coupler(at_cos(c, UnitSystem::SI));
        CHECK(a.omega_b == doctest::Approx(b.omega_b).epsilon(1e-9));
        CHECK(a.omega_l == doctest::Approx(b.omega_l).epsilon(1e-9));
        CHECK(a.omega_b_prime == doctest::Approx(b.omega_b_prime).epsilon(1e-9));
        CHECK(a.g_l == doctest::Approx(b.g_l).epsilon(1e-9));
        CHECK(a.g_eff == doctest::Approx(b.g_eff).epsilon(1e-9));
        CHECK(a.omega_b_doubleprime == doctest::Approx(b.omega_b_doubleprime).epsilon(1e-9));
    }
}

TEST_CASE("explicit junction capacitance gives the quoted charging energy") {
    auto p = CircuitParams::reference_device();
    p.charging_energy.reset();
    p.junction_capacitance = 104.6e-15;
    p.josephson_energy_scale = 1000 * 2 * pi * 0.35e9;
    const auto d = derive_coupler(p);
    CHECK(d.charging_energy / (2 * pi) == doctest::Approx(0.35028e9).epsilon(1e-4));
}

TEST_CASE("effective coupling") {
    const auto e = effective_coupling(2.0, 3.0, 10.0, 20.0);
    CHECK(e.g == doctest::Approx(2.0 * 3.0 * 30.0 / (2 * 10.0 * 20.0)));
    CHECK(e.stark_shift_l == doctest::Approx(0.4));
    CHECK(e.stark_shift_r == doctest::Approx(0.45));
    CHECK(effective_coupling(1.0, 1.0, 10.0, 10.0).g == doctest::Approx(0.1));
    CHECK_THROWS_AS(effective_coupling(1.0, 1.0, 0.0, 10.0), PreconditionError);
}

TEST_CASE("coupling vanishes with a coupling capacitance") {
    auto p = CircuitParams::reference_device();
    p.coupling_capacitance_right = 0.0;
    const auto d = derive_coupler(p);
    CHECK(d.g_r == 0.0);
    CHECK(d.g_eff == 0.0);
}

TEST_CASE("invalid parameters") {
    auto p = CircuitParams::reference_device();
    p.tlr_frequency = -1.0;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
    p = CircuitParams::reference_device();
    p.coupling_capacitance_left = -1e-15;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
    p = CircuitParams::reference_device();
    p.flux_ratio = 0.5;
    CHECK_THROWS_AS(derive_coupler(p), PreconditionError);
    p = CircuitParams::reference_device();
    p.charging_energy.reset();
    CHECK_THROWS_AS(derive_coupler(p), PreconditionError);
    CHECK_THROWS_AS(cpb_frequency(1.0, -1.0, UnitSystem::Paper), PreconditionError);
}

TEST_CASE("coupler_from_modes requires a shared CPB frequency") {
    CHECK_NOTHROW(coupler_from_modes(0.0, 1.0, 20.0, 19.0, 1.0, 1.0));
    CHECK_THROWS_AS(coupler_from_modes(0.0, 1.0, 20.0, 20.0, 1.0, 1.0), PreconditionError);
}

TEST_CASE("flux to lambda") {
    const double t = derive_coupler(at_cos(0.3)).g_eff;
    const auto sp = flux_to_lambda(at_cos(0.3), t);
    CHECK(sp.lambda == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(transmission(sp.lambda, pi / 4) == doctest::Approx(1.0).epsilon(1e-12));
    const auto weak = flux_to_lambda(at_cos(1.0), 100.0 * t);
    CHECK(weak.lambda > -1.0);
    CHECK(weak.lambda < -0.9);
    CHECK(direct_coupling_ratio(CircuitParams::reference_device()) == doctest::Approx(134.3333).epsilon(1e-5));
}

TEST_CASE("plasma frequency identity and scaling") {
    for (double c : {1.0, 0.4, 0.02}) {
        const auto d = derive_coupler(at_cos(c));
        CHECK(d.omega_b * d.omega_b == doctest::Approx(2.0 * d.charging_energy * d.josephson_energy).epsilon(1e-12));
        CHECK(d.harmonic_regime_ok == (d.josephson_energy >= harmonic_regime_ratio * d.charging_energy));
    }
    const double ec = 2 * pi * 0.35e9, ej = 2 * pi * 700e9;
    CHECK(cpb_frequency(ec, ej, UnitSystem::Paper) / (2 * pi) == doctest::Approx(22.136e9).epsilon(1e-4));
    CHECK(cpb_frequency(ec, 4 * ej, UnitSystem::Paper) ==
          doctest::Approx(2 * cpb_frequency(ec, ej, UnitSystem::Paper)).epsilon(1e-14));
    CHECK(josephson_energy(10.0, std::acos(0.02) / pi) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("charging energy scaling") {
    const double a = charging_energy(6e-15, 6e-15, 100e-15, UnitSystem::SI);
    CHECK(charging_energy(12e-15, 12e-15, 200e-15, UnitSystem::SI) == doctest::Approx(a / 2).epsilon(1e-14));
    CHECK(charging_energy(6e-15, 6e-15, 1e-3, UnitSystem::SI) < 1e-9 * a);
    CHECK_THROWS_AS(charging_energy(6e-15, 6e-15, 0.0, UnitSystem::SI), PreconditionError);
}

TEST_CASE("renormalized frequencies") {
    const auto d = derive_coupler(at_cos(1.0));
    CHECK(d.omega_l / (2 * pi) == doctest::Approx(3.01125e9).epsilon(1e-12));
    CHECK((d.omega_b_prime - d.omega_b) / (2 * pi) == doctest::Approx(0.59996e9).epsilon(1e-4));

    auto p = at_cos(1.0);
    p.coupling_capacitance_left = p.coupling_capacitance_right = 0.0;
    const auto free = derive_coupler(p);
    CHECK(free.omega_l == p.tlr_frequency);
    CHECK(free.omega_b_prime == free.omega_b);
    CHECK(free.g_l == 0.0);
}

TEST_CASE("coupling scalings") {
    auto p = at_cos(0.7);
    const auto base = derive_coupler(p);
    p.coupling_capacitance_left *= 2.0;
    const auto doubled = coupling_strengths(p, base.omega_b, base.charging_energy, base.josephson_energy);
    CHECK(doubled.g_l == doctest::Approx(2.0 * base.g_l).epsilon(1e-14));

    const auto hi = derive_coupler(at_cos(1.0));
    const auto lo = derive_coupler(at_cos(0.0625));
    CHECK(hi.g_l / lo.g_l == doctest::Approx(std::pow(hi.josephson_energy / lo.josephson_energy, 0.25)).epsilon(1e-12));
}

TEST_CASE("effective coupling is symmetric under left-right exchange") {
    CHECK(effective_coupling(1.0, 3.0, 7.0, 11.0).g == doctest::Approx(effective_coupling(3.0, 1.0, 11.0, 7.0).g));
    CHECK(effective_coupling(0.0, 3.0, 7.0, 11.0).g == 0.0);
    auto p = at_cos(0.5);
    p.coupling_capacitance_left = 4e-15;
    auto q = p;
    std::swap(q.coupling_capacitance_left, q.coupling_capacitance_right);
    CHECK(derive_coupler(p).g_eff == doctest::Approx(derive_coupler(q).g_eff).epsilon(1e-14));
}

TEST_CASE("switch map examples") {
    const auto p = at_cos(0.6);
    const double g = derive_coupler(p).g_eff;
    const auto doubled = flux_to_lambda(p, g / 2.0);
    CHECK(doubled.lambda == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(transmission(doubled.lambda, pi / 2) == doctest::Approx(0.64).epsilon(1e-12));
    auto off = p;
    off.coupling_capacitance_left = 0.0;
    const auto cut = flux_to_lambda(off, g);
    CHECK(cut.lambda == -1.0);
    CHECK(transmission(cut.lambda, pi / 3) == 0.0);
    const auto deep = flux_to_lambda(at_cos(1e-4), derive_coupler(at_cos(0.02)).g_eff);
    CHECK(deep.negative_defect_hopping);
    CHECK(transmission(deep.lambda, pi / 4) < 1e-3);
    CHECK_THROWS_AS(flux_to_lambda(p, 0.0), PreconditionError);
}

TEST_CASE("direct coupling ratio limits") {
    auto p = CircuitParams::reference_device();
    p.coupling_capacitance_left = p.coupling_capacitance_right = p.tlr_total_capacitance / 2.0;
    CHECK(direct_coupling_ratio(p) == doctest::Approx(2.0));
    p.coupling_capacitance_left = 0.0;
    CHECK(std::isinf(direct_coupling_ratio(p)) == false);
    p.coupling_capacitance_right = 0.0;
    CHECK(std::isinf(direct_coupling_ratio(p)));
}
