// qswitch command-line front end. Talks to the library only through the C API.
#include "qswitch/qswitch.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string units = "paper";
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
};

void report(int code, const std::string& command, const std::string& message) {
    // same shape as qs_run_result_report
    std::string escaped;
    for (char c : message) {
        if (c == '"' || c == '\\')
            escaped += '\\';
        if (c == '\n') {
            escaped += "\\n";
            continue;
        }
        escaped += c;
    }
    std::cerr << "{\"status\":\"" << qs_status_name(static_cast<qs_status>(code)) << "\",\"code\":" << code
              << ",\"command\":\"" << command << "\",\"message\":\"" << escaped << "\"}\n";
}

int run(const std::string& command, const Options& opts) {
    std::string text;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) {
            report(QS_ERR_CONFIG, command, "cannot read config file '" + opts.config_path + "'");
            return QS_ERR_CONFIG;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }

    qs_run_options ro;
    qs_run_options_default(&ro);
    ro.format = opts.format == "json" ? QS_FORMAT_JSON : QS_FORMAT_CSV;
    ro.units = opts.units == "si" ? QS_UNITS_SI : QS_UNITS_PAPER;
    if (opts.seed_set)
        ro.seed = opts.seed;
    ro.threads = opts.threads;
    if (opts.config_path.size() >= 5 && opts.config_path.ends_with(".json"))
        ro.syntax = QS_SYNTAX_JSON;

    qs_run_result* raw = nullptr;
    const qs_status status = qs_run(command.c_str(), text.c_str(), &ro, &raw);
    std::unique_ptr<qs_run_result, decltype(&qs_run_result_destroy)> result(raw, qs_run_result_destroy);
    if (!result) {
        report(QS_ERR_INTERNAL, command, qs_last_error());
        return QS_ERR_INTERNAL;
    }

    const std::string output = qs_run_result_output(result.get());
    if (!output.empty()) {
        if (opts.out_path.empty() || opts.out_path == "-") {
            std::cout << output;
            std::cout.flush();
        } else {
            std::ofstream out(opts.out_path, std::ios::binary);
            out << output;
            if (!out) {
                report(QS_ERR_CONFIG, command, "cannot write output file '" + opts.out_path + "'");
                return QS_ERR_CONFIG;
            }
        }
    }
    if (status != QS_OK)
        std::cerr << qs_run_result_report(result.get()) << "\n";
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tunable-defect resonator chain: dispersion, scattering, coupler design"};
    app.set_version_flag("--version", std::string{qs_version()});
    app.require_subcommand(1);

    Options opts;
    const char* commands[][2] = {
        {"dispersion", "band structure of the uniform ring"},
        {"transmission-sweep", "analytic T and R over lambda and k"},
        {"scatter-sim", "wavepacket transmission compared with the analytic result"},
        {"coupler-design", "coupler quantities along a flux sweep"},
        {"switch-map", "flux to lambda to transmission"},
        {"validate-adiabatic", "three-mode dynamics against the effective two-mode model"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config_path, "key=value or JSON configuration file");
        sub->add_option("--out", opts.out_path, "output file (default stdout)");
        sub->add_option("--format", opts.format, "output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--units", opts.units, "energy units of circuit inputs and outputs")
            ->check(CLI::IsMember({"paper", "si"}));
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t& s) { opts.seed = s, opts.seed_set = true; }, "random seed");
        sub->add_option("--threads", opts.threads, "worker threads (0: all cores)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        const auto subs = app.get_subcommands();
        report(QS_ERR_CONFIG, subs.empty() ? "" : subs.front()->get_name(), e.what());
        return QS_ERR_CONFIG;
    }

    return run(app.get_subcommands().front()->get_name(), opts);
}
