#include "qswitch/qswitch.h"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

using std::numbers::pi;

TEST_CASE("lattice handle") {
    qs_lattice* lat = nullptr;
    REQUIRE(qs_lattice_create(5, 0.0, 1.0, 2, 0.5, &lat) == QS_OK);
    int n = 0;
    CHECK(qs_lattice_size(lat, &n) == QS_OK);
    CHECK(n == 5);
    std::vector<double> h(25);
    CHECK(qs_lattice_hamiltonian(lat, h.data(), h.size()) == QS_OK);
    CHECK(h[1 * 5 + 2] == doctest::Approx(-1.5));
    CHECK(qs_lattice_hamiltonian(lat, h.data(), 24) == QS_ERR_INVALID_ARGUMENT);
    qs_lattice_destroy(lat);
    qs_lattice_destroy(nullptr);

    CHECK(qs_lattice_create(2, 0.0, 1.0, 1, 0.0, &lat) == QS_ERR_PRECONDITION);
    CHECK(lat == nullptr);
    CHECK(std::string{qs_last_error()}.size() > 0);
}

TEST_CASE("scattering functions") {
    double t = -1.0;
    CHECK(qs_transmission(1.0, pi / 2, &t) == QS_OK);
    CHECK(t == doctest::Approx(0.64));
    CHECK(qs_transmission(NAN, 0.3, &t) == QS_ERR_PRECONDITION);
    CHECK(qs_transmission(0.0, 0.3, nullptr) == QS_ERR_INVALID_ARGUMENT);
    qs_amplitudes a{};
    CHECK(qs_scattering_amplitudes(0.5, 1.0, 4, &a) == QS_OK);
    CHECK(a.r_re * a.r_re + a.r_im * a.r_im + a.s_re * a.s_re + a.s_im * a.s_im == doctest::Approx(1.0));
    double res = 1.0;
    CHECK(qs_verify_ansatz_residual(0.5, 1.0, 10, 30, &res) == QS_OK);
    CHECK(res < 1e-10);
    CHECK(qs_dispersion(pi / 2, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(qs_group_velocity(pi / 2, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("circuit functions") {
    qs_circuit_params p{};
    REQUIRE(qs_circuit_reference(QS_UNITS_SI, &p) == QS_OK);
    qs_coupler_derived d{};
    CHECK(qs_coupler_derive(&p, &d) == QS_OK);
    CHECK(d.omega_b / (2 * pi) == doctest::Approx(22.136e9).epsilon(1e-4));
    CHECK(d.harmonic_regime_ok == 1);
    double lambda = 0.0;
    CHECK(qs_flux_to_lambda(&p, d.g_eff, &lambda, nullptr) == QS_OK);
    CHECK(std::abs(lambda) < 1e-12);
    double ratio = 0.0;
    CHECK(qs_direct_coupling_ratio(&p, &ratio) == QS_OK);
    CHECK(ratio > 100.0);
    p.flux_ratio = 0.5;
    CHECK(qs_coupler_derive(&p, &d) == QS_ERR_PRECONDITION);
}

TEST_CASE("adiabatic validation through the C API") {
    qs_coupler_derived c{};
    c.delta_l = c.delta_r = 20.0;
    c.g_l = c.g_r = 1.0;
    c.omega_l_prime = c.omega_r_prime = 0.05;
    c.g_eff = 0.05;
    c.omega_b_prime = 20.0;
    qs_adiabatic_report rep{};
    CHECK(qs_validate_adiabatic(&c, 0.0, 0.0, &rep) == QS_OK);
    CHECK(rep.validity == QS_VALID);
    CHECK(rep.contract_ok == 1);
}

TEST_CASE("wavepacket oracle through the C API") {
    qs_lattice* lat = nullptr;
    REQUIRE(qs_lattice_create(201, 0.0, 1.0, 100, 0.0, &lat) == QS_OK);
    qs_wavepacket wp{0, pi / 2, 8.0, 0, 10};
    qs_propagation_result r{};
    CHECK(qs_measure_transmission(lat, &wp, &r) == QS_OK);
    CHECK(r.transmitted_probability == doctest::Approx(1.0).epsilon(0.02));
    wp.center_wavevector = 0.01;
    CHECK(qs_measure_transmission(lat, &wp, &r) == QS_ERR_PRECONDITION);
    qs_lattice_destroy(lat);
}

TEST_CASE("command runner") {
    qs_run_options opts;
    qs_run_options_default(&opts);
    qs_run_result* res = nullptr;
    CHECK(qs_run("transmission-sweep", "sweep.lambda = 0\nsweep.k = pi/4\n", &opts, &res) == QS_OK);
    CHECK(std::string{qs_run_result_output(res)} == "lambda,k,T,R\n0,0.78539816339744828,1,0\n# max_unitarity_error=0\n");
    qs_run_result_destroy(res);

    CHECK(qs_run("bogus", "", &opts, &res) == QS_ERR_CONFIG);
    const std::string report = qs_run_result_report(res);
    CHECK(report.find("\"code\":2") != std::string::npos);
    CHECK(report.find("config_error") != std::string::npos);
    qs_run_result_destroy(res);

    CHECK(qs_run("validate-adiabatic", "adiabatic.delta = 0.5\nadiabatic.g = 1\n", &opts, &res) ==
          QS_ERR_PRECONDITION);
    CHECK(std::string{qs_run_result_output(res)}.size() > 0);
    qs_run_result_destroy(res);
    CHECK(std::string{qs_status_name(QS_ERR_CONTRACT)} == "contract_violation");
}
