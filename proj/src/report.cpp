#include "carbonsched/report.hpp"

#include <cmath>
#include <sstream>

namespace carbonsched {

namespace {

std::string csv_field(const std::string& text)
{
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    return quoted + "\"";
}

std::string mode_name(SamplingSpec::Mode mode)
{
    return mode == SamplingSpec::Mode::FixedDays ? "fixed_days" : "seeded_random";
}

Json cell_to_json(const SweepCell& cell)
{
    return Json{{"mean_gain", cell.mean_gain},
                {"mean_pauses_per_hour", cell.mean_pauses_per_hour},
                {"samples", cell.samples},
                {"excluded", cell.excluded}};
}

void cell_to_csv(std::ostream& out, const SweepCell& cell)
{
    out << csv_field(cell.model) << ',' << csv_field(cell.region) << ',' << slack_kind_name(cell.slack.kind) << ','
        << format_decimal(cell.slack.value) << ',' << algorithm_name(cell.algorithm) << ','
        << format_decimal(cell.mean_gain) << ',' << format_decimal(cell.mean_pauses_per_hour) << ',' << cell.samples
        << '\n';
}

} // namespace

std::string slack_kind_name(SlackBudget::Kind kind)
{
    return kind == SlackBudget::Kind::AbsoluteHours ? "absolute_hours" : "relative_fraction";
}

std::string denominator_name(PausesDenominator denominator)
{
    return denominator == PausesDenominator::Window ? "window" : "job_duration";
}

Json sci_to_json(const SciReport& report, const std::vector<Equivalence>& equivalences)
{
    Json equiv = Json::object();
    for (const auto& e : equivalences) {
        equiv[e.label] = e.quantity;
    }
    return Json{{"e_kwh", report.e_kwh},
                {"i_effective_g_per_kwh", report.i_effective_g_per_kwh},
                {"o_grams", report.o_grams},
                {"m_grams", report.m_grams},
                {"c_grams", report.c_grams},
                {"r", report.r},
                {"pue", report.pue},
                {"equivalences", equiv}};
}

std::string sci_to_csv(const SciReport& report, const std::vector<Equivalence>& equivalences)
{
    std::ostringstream out;
    out << "e_kwh,i_effective_g_per_kwh,o_grams,m_grams,c_grams,r,pue";
    for (const auto& e : equivalences) {
        out << ",equivalences." << e.label;
    }
    out << '\n'
        << format_decimal(report.e_kwh) << ',' << format_decimal(report.i_effective_g_per_kwh) << ','
        << format_decimal(report.o_grams) << ',' << format_decimal(report.m_grams) << ','
        << format_decimal(report.c_grams) << ',' << csv_field(report.r) << ',' << format_decimal(report.pue);
    for (const auto& e : equivalences) {
        out << ',' << format_decimal(e.quantity);
    }
    out << '\n';
    return out.str();
}

Json equivalences_to_json(double grams, const std::vector<Equivalence>& equivalences)
{
    Json equiv = Json::object();
    for (const auto& e : equivalences) {
        equiv[e.label] = e.quantity;
    }
    return Json{{"grams", grams}, {"equivalences", equiv}};
}

std::string equivalences_to_csv(double grams, const std::vector<Equivalence>& equivalences)
{
    std::ostringstream out;
    out << "grams";
    for (const auto& e : equivalences) {
        out << ',' << e.label;
    }
    out << '\n' << format_decimal(grams);
    for (const auto& e : equivalences) {
        out << ',' << format_decimal(e.quantity);
    }
    out << '\n';
    return out.str();
}

Json schedule_runs(const Schedule& schedule, const IntensitySeries& series)
{
    Json runs = Json::array();
    const auto idx = schedule.indices();
    std::size_t run_start = 0;
    for (std::size_t j = 1; j <= idx.size(); ++j) {
        if (j == idx.size() || idx[j] != idx[j - 1] + 1) {
            runs.push_back(Json{{"start", format_rfc3339(series.time_at(idx[run_start]))}, {"intervals", j - run_start}});
            run_start = j;
        }
    }
    return runs;
}

Json outcome_to_json(const OptimizationOutcome& outcome, Algorithm algorithm, const IntensitySeries& series)
{
    return Json{{"algorithm", algorithm_name(algorithm)},
                {"region", series.region_id()},
                {"baseline_grams", outcome.baseline_grams},
                {"optimized_grams", outcome.optimized_grams},
                {"savings_fraction", outcome.savings_fraction},
                {"n_pauses", outcome.n_pauses},
                {"pauses_per_hour", outcome.pauses_per_hour},
                {"window_intervals", outcome.window_intervals},
                {"slack_intervals", outcome.slack_intervals},
                {"forecast_limited", outcome.forecast_limited},
                {"schedule", schedule_runs(outcome.schedule, series)}};
}

std::string outcome_to_csv(const OptimizationOutcome& outcome, Algorithm algorithm, const IntensitySeries& series)
{
    std::ostringstream out;
    out << "algorithm,region,baseline_grams,optimized_grams,savings_fraction,n_pauses,pauses_per_hour,"
           "window_intervals,slack_intervals,forecast_limited,schedule_start,schedule_end\n";
    out << algorithm_name(algorithm) << ',' << csv_field(series.region_id()) << ','
        << format_decimal(outcome.baseline_grams) << ',' << format_decimal(outcome.optimized_grams) << ','
        << format_decimal(outcome.savings_fraction) << ',' << outcome.n_pauses << ','
        << format_decimal(outcome.pauses_per_hour) << ',' << outcome.window_intervals << ','
        << outcome.slack_intervals << ',' << (outcome.forecast_limited ? "true" : "false") << ','
        << format_rfc3339(series.time_at(outcome.schedule.front())) << ','
        << format_rfc3339(series.time_at(outcome.schedule.back() + 1)) << '\n';
    return out.str();
}

Json threshold_to_json(const ThresholdOutcome& outcome, double threshold, const IntensitySeries& series)
{
    return Json{{"threshold", threshold},
                {"slack_used_intervals", outcome.slack_used},
                {"n_pauses", outcome.schedule.n_pauses()},
                {"schedule", schedule_runs(outcome.schedule, series)}};
}

Json sweep_to_json(const SweepReport& report, const SweepMetadata& metadata)
{
    Json starts = Json::array();
    for (const auto ts : report.planned_starts) {
        starts.push_back(format_rfc3339(ts));
    }
    Json meta{{"year", metadata.sampling.year},
              {"samples_per_month", metadata.sampling.samples_per_month},
              {"sampling_mode", mode_name(metadata.sampling.mode)},
              {"planned_samples", report.planned_starts.size()},
              {"sample_starts", starts},
              {"pauses_denominator", denominator_name(report.denominator)},
              {"gain", "(baseline_grams - optimized_grams) / baseline_grams, averaged over included samples"},
              {"profile_assumption", "energy spread uniformly over 5-minute intervals unless a profile is given"}};
    if (metadata.sampling.mode == SamplingSpec::Mode::SeededRandom) {
        meta["seed"] = metadata.sampling.seed;
    }

    Json results = Json::object();
    for (const auto& cell : report.cells) {
        results[cell.model][cell.region][cell.slack.label()][algorithm_name(cell.algorithm)] = cell_to_json(cell);
    }
    Json averages = Json::object();
    for (const auto& cell : report.region_averages) {
        averages[cell.model][cell.slack.label()][algorithm_name(cell.algorithm)] = cell_to_json(cell);
    }
    return Json{{"metadata", meta}, {"results", results}, {"region_average", averages}};
}

std::string sweep_to_csv(const SweepReport& report)
{
    std::ostringstream out;
    out << "model,region,slack_kind,slack_value,algorithm,mean_gain,mean_pauses_per_hour,samples\n";
    for (const auto& cell : report.cells) {
        cell_to_csv(out, cell);
    }
    for (const auto& cell : report.region_averages) {
        cell_to_csv(out, cell);
    }
    return out.str();
}

Json regions_to_json(const std::vector<RegionStats>& stats)
{
    Json regions = Json::array();
    for (const auto& s : stats) {
        regions.push_back(Json{{"region", s.region_id},
                               {"min", s.min},
                               {"q1", s.q1},
                               {"median", s.median},
                               {"mean", s.mean},
                               {"q3", s.q3},
                               {"max", s.max},
                               {"samples", s.samples},
                               {"skipped", s.skipped}});
    }
    return Json{{"quartile_method", "linear interpolation between order statistics"}, {"regions", regions}};
}

std::string regions_to_csv(const std::vector<RegionStats>& stats)
{
    std::ostringstream out;
    out << "region,min,q1,median,mean,q3,max,samples,skipped\n";
    for (const auto& s : stats) {
        out << csv_field(s.region_id) << ',' << format_decimal(s.min) << ',' << format_decimal(s.q1) << ','
            << format_decimal(s.median) << ',' << format_decimal(s.mean) << ',' << format_decimal(s.q3) << ','
            << format_decimal(s.max) << ',' << s.samples << ',' << s.skipped << '\n';
    }
    return out.str();
}

Json time_of_day_to_json(const TimeOfDayTable& table)
{
    Json rows = Json::array();
    for (std::size_t d = 0; d < table.dates.size(); ++d) {
        Json cells = Json::array();
        for (std::size_t h = 0; h < table.hours.size(); ++h) {
            cells.push_back(Json{{"hour", table.hours[h]}, {"grams", table.grams[d][h]}});
        }
        rows.push_back(Json{{"date", format_rfc3339(table.dates[d]).substr(0, 10)}, {"cells", cells}});
    }
    return Json{{"rows", rows}};
}

std::string time_of_day_to_csv(const TimeOfDayTable& table)
{
    std::ostringstream out;
    out << "date";
    for (const double h : table.hours) {
        out << ",h" << format_decimal(h);
    }
    out << '\n';
    for (std::size_t d = 0; d < table.dates.size(); ++d) {
        out << format_rfc3339(table.dates[d]).substr(0, 10);
        for (const double g : table.grams[d]) {
            out << ',' << format_decimal(g);
        }
        out << '\n';
    }
    return out.str();
}

double round_significant(double value, int digits)
{
    if (value == 0.0 || !std::isfinite(value)) {
        return value;
    }
    const double magnitude = std::floor(std::log10(std::abs(value)));
    const double scale = std::pow(10.0, static_cast<double>(digits) - 1.0 - magnitude);
    return std::round(value * scale) / scale;
}

Json rounded(const Json& doc, int digits)
{
    if (doc.is_number_float()) {
        return round_significant(doc.get<double>(), digits);
    }
    if (doc.is_array() || doc.is_object()) {
        Json copy = doc;
        for (auto it = copy.begin(); it != copy.end(); ++it) {
            *it = rounded(*it, digits);
        }
        return copy;
    }
    return doc;
}

} // namespace carbonsched
