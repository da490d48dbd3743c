#pragma once

#include "carbonsched/scheduler.hpp"

#include <cstddef>
#include <span>

namespace carbonsched {

// Largest window the exhaustive subset search accepts.
inline constexpr std::size_t kMaxExhaustiveWindow = 26;

enum class OracleMode {
    Auto,              // exhaustive when the window allows, otherwise threshold sweep
    ExhaustiveSubsets, // every n-subset of the window
    ThresholdSweep,    // best threshold_schedule over the window's distinct intensities
};

// Reference answer for pause_resume, computed by brute force. Uses the same
// chronological profile assignment as pause_resume but shares none of its
// selection logic.
OptimizationOutcome oracle_pause_resume(std::span<const double> profile, std::span<const double> intensities,
                                        std::size_t start, std::size_t slack, OracleMode mode = OracleMode::Auto);

OptimizationOutcome oracle_pause_resume(const EnergyProfile& profile, const IntensitySeries& series, Timestamp t0,
                                        const SlackBudget& slack, OracleMode mode = OracleMode::Auto);

} // namespace carbonsched
