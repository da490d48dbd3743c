#pragma once

#include "carbonsched/evaluation.hpp"
#include "carbonsched/grid.hpp"
#include "carbonsched/sci.hpp"
#include "carbonsched/scheduler.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace carbonsched {

using Json = nlohmann::ordered_json;

// Everything describing how a sweep was sampled; echoed in its report.
struct SweepMetadata {
    SamplingSpec sampling;
};

Json sci_to_json(const SciReport& report, const std::vector<Equivalence>& equivalences);
std::string sci_to_csv(const SciReport& report, const std::vector<Equivalence>& equivalences);

Json equivalences_to_json(double grams, const std::vector<Equivalence>& equivalences);
std::string equivalences_to_csv(double grams, const std::vector<Equivalence>& equivalences);

Json outcome_to_json(const OptimizationOutcome& outcome, Algorithm algorithm, const IntensitySeries& series);
std::string outcome_to_csv(const OptimizationOutcome& outcome, Algorithm algorithm, const IntensitySeries& series);

Json threshold_to_json(const ThresholdOutcome& outcome, double threshold, const IntensitySeries& series);

Json sweep_to_json(const SweepReport& report, const SweepMetadata& metadata);
// Columns: model,region,slack_kind,slack_value,algorithm,mean_gain,mean_pauses_per_hour,samples
std::string sweep_to_csv(const SweepReport& report);

Json regions_to_json(const std::vector<RegionStats>& stats);
std::string regions_to_csv(const std::vector<RegionStats>& stats);

Json time_of_day_to_json(const TimeOfDayTable& table);
std::string time_of_day_to_csv(const TimeOfDayTable& table);

// Active runs of a schedule as (first interval start, interval count).
Json schedule_runs(const Schedule& schedule, const IntensitySeries& series);

std::string slack_kind_name(SlackBudget::Kind kind);
std::string denominator_name(PausesDenominator denominator);

// Rounds every number in a document to `digits` significant digits.
Json rounded(const Json& doc, int digits = 6);
double round_significant(double value, int digits = 6);

} // namespace carbonsched
