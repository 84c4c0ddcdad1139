#pragma once

#include "qswitch/circuit.hpp"
#include "qswitch/config.hpp"
#include "qswitch/table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qswitch {

enum class Command { Dispersion, TransmissionSweep, ScatterSim, CouplerDesign, SwitchMap, ValidateAdiabatic };

std::string_view to_string(Command command);
Command command_from_string(std::string_view name);  // throws ConfigError

/// Everything one CLI invocation needs apart from file I/O.
struct SweepConfig {
    Command mode = Command::TransmissionSweep;
    Config params;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::Csv;
    UnitSystem units = UnitSystem::Paper;
    std::uint64_t seed = 20240601;
    unsigned threads = 0;  ///< 0: hardware concurrency
};

enum class RunStatus { Ok = 0, PreconditionFailed = 3, ContractFailed = 4 };

struct RunOutcome {
    Table table;
    RunStatus status = RunStatus::Ok;
    std::string message;
};

/// Runs one command. Configuration problems throw ConfigError and invalid
/// physics throws PreconditionError before any computation starts; a failed
/// numerical contract is reported through the outcome together with the table.
RunOutcome run_sweep(const SweepConfig& config);

/// Renders the outcome table in the configured format.
std::string render(const RunOutcome& outcome, const SweepConfig& config);

// Individual commands. Each reads its keys from config.params.
RunOutcome run_dispersion(const SweepConfig& config);
RunOutcome run_transmission_sweep(const SweepConfig& config);
RunOutcome run_scatter_sim(const SweepConfig& config);
RunOutcome run_coupler_design(const SweepConfig& config);
RunOutcome run_switch_map(const SweepConfig& config);
RunOutcome run_validate_adiabatic(const SweepConfig& config);

/// Circuit parameters from "circuit.*" keys, reference-device values for
/// anything absent. Energies are read in `units`.
CircuitParams circuit_params_from_config(const Config& config, UnitSystem units);

} // namespace qswitch
