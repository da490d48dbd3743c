#pragma once

#include "carbonsched/grid.hpp"
#include "carbonsched/scheduler.hpp"
#include "carbonsched/sci.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace carbonsched {

enum class OutputFormat { Json, Csv };

// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitCoverage = 3,
    kExitInternal = 4,
};

// Settings shared by every command. Defaults, then the JSON file named by
// CARBONSCHED_CONFIG, then command-line flags.
struct CliConfig {
    OutputFormat format = OutputFormat::Json;
    FillPolicy fill_policy = FillPolicy::Reject;
    double pue = 1.0;
    double embodied_grams = 0.0;
    PausesDenominator pauses_denominator = PausesDenominator::Window;
    EquivalenceFactors equivalences;
};

inline constexpr const char* kConfigEnvVar = "CARBONSCHED_CONFIG";

CliConfig parse_cli_config(std::string_view json_text);
CliConfig load_cli_config(const std::filesystem::path& path);

// Runs the `carbonsched` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace carbonsched
