#include "carbonsched/cli.hpp"

#include "carbonsched/error.hpp"
#include "carbonsched/evaluation.hpp"
#include "carbonsched/report.hpp"
#include "carbonsched/workload.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace carbonsched {

namespace {

struct GlobalFlags {
    std::string format;
    std::string fill_policy;
    std::string pauses_denominator;
    bool pretty = false;
    std::string plot_data;
};

struct SharedInputs {
    std::string grid;
    std::string job;
    std::string start;
};

OutputFormat parse_format(const std::string& text)
{
    if (text == "json") {
        return OutputFormat::Json;
    }
    if (text == "csv") {
        return OutputFormat::Csv;
    }
    fail_validation("unknown format '" + text + "', expected json or csv");
}

FillPolicy parse_fill_policy(const std::string& text)
{
    if (text == "reject") {
        return FillPolicy::Reject;
    }
    if (text == "forward_fill") {
        return FillPolicy::ForwardFill;
    }
    fail_validation("unknown fill policy '" + text + "', expected reject or forward_fill");
}

PausesDenominator parse_denominator(const std::string& text)
{
    if (text == "window") {
        return PausesDenominator::Window;
    }
    if (text == "job_duration") {
        return PausesDenominator::JobDuration;
    }
    fail_validation("unknown pauses denominator '" + text + "', expected window or job_duration");
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what)
{
    std::vector<double> values;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            fail_validation("malformed " + what + " '" + item + "'");
        }
    }
    return values;
}

// Accepts a full RFC 3339 timestamp or a bare UTC date.
Timestamp parse_start(const std::string& text)
{
    return text.size() == 10 ? parse_utc_date(text) : parse_rfc3339_utc(text);
}

void write_text_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail_validation("cannot write " + path);
    }
    out << contents;
}

class Emitter {
public:
    Emitter(const CliConfig& config, const GlobalFlags& flags, std::ostream& out)
        : config_(config), flags_(flags), out_(out)
    {
    }

    void emit(const Json& doc, const std::string& csv) const
    {
        if (config_.format == OutputFormat::Csv) {
            out_ << csv;
            return;
        }
        out_ << (flags_.pretty ? rounded(doc) : doc).dump(2) << '\n';
    }

    void plot_data(const std::string& csv) const
    {
        if (!flags_.plot_data.empty()) {
            write_text_file(flags_.plot_data, csv);
        }
    }

private:
    const CliConfig& config_;
    const GlobalFlags& flags_;
    std::ostream& out_;
};

std::string run_plot_csv(const IntensitySeries& series, const EnergyProfile& profile, const Schedule& baseline,
                         const Schedule& chosen)
{
    std::ostringstream out;
    out << "timestamp,intensity_gco2_per_kwh,baseline_kwh,optimized_kwh\n";
    const std::size_t first = std::min(baseline.front(), chosen.front());
    const std::size_t last = std::max(baseline.back(), chosen.back());
    std::vector<double> base_kwh(last - first + 1, 0.0);
    std::vector<double> opt_kwh(last - first + 1, 0.0);
    for (std::size_t j = 0; j < profile.size(); ++j) {
        base_kwh[baseline.indices()[j] - first] = profile[j];
        opt_kwh[chosen.indices()[j] - first] = profile[j];
    }
    for (std::size_t k = first; k <= last; ++k) {
        out << format_rfc3339(series.time_at(k)) << ',' << format_decimal(series[k]) << ','
            << format_decimal(base_kwh[k - first]) << ',' << format_decimal(opt_kwh[k - first]) << '\n';
    }
    return out.str();
}

SamplingSpec sampling_from_flags(int year, int per_month, const std::string& mode, std::uint64_t seed,
                                 const std::string& days)
{
    SamplingSpec spec;
    spec.year = year;
    spec.samples_per_month = per_month;
    spec.seed = seed;
    if (mode == "fixed_days") {
        spec.mode = SamplingSpec::Mode::FixedDays;
    } else if (mode == "seeded_random") {
        spec.mode = SamplingSpec::Mode::SeededRandom;
    } else {
        fail_validation("unknown sampling mode '" + mode + "', expected fixed_days or seeded_random");
    }
    if (!days.empty()) {
        spec.fixed_days.clear();
        for (const double d : parse_numbers(days, "sampling day")) {
            if (d != std::floor(d) || d < 1) {
                fail_validation("sampling days must be whole day numbers");
            }
            spec.fixed_days.push_back(static_cast<unsigned>(d));
        }
    }
    spec.validate();
    return spec;
}

struct SyntheticFixture {
    std::vector<SyntheticGridSpec> regions;
};

SyntheticFixture load_synthetic_fixture(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail_validation("cannot open fixture " + path);
    }
    SyntheticFixture fixture;
    try {
        const auto doc = nlohmann::json::parse(in);
        const Timestamp epoch = parse_start(doc.at("epoch_start").get<std::string>());
        const auto days = doc.at("days").get<std::int64_t>();
        for (const auto& r : doc.at("regions")) {
            SyntheticGridSpec spec;
            spec.region_id = r.at("region_id").get<std::string>();
            spec.epoch_start = epoch;
            spec.days = days;
            spec.base = r.at("base").get<double>();
            spec.amplitude = r.value("amplitude", 0.0);
            spec.period_hours = r.value("period_hours", 24.0);
            spec.phase_hours = r.value("phase_hours", 0.0);
            spec.noise_stddev = r.value("noise_stddev", 0.0);
            spec.seed = r.value("seed", std::uint64_t{0});
            spec.validate();
            fixture.regions.push_back(spec);
        }
    } catch (const nlohmann::json::exception& e) {
        fail_validation("fixture " + path + ": " + e.what());
    }
    return fixture;
}

} // namespace

CliConfig parse_cli_config(std::string_view json_text)
{
    CliConfig config;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        if (!doc.is_object()) {
            fail_validation("config must be a JSON object");
        }
        if (doc.contains("format")) {
            config.format = parse_format(doc["format"].get<std::string>());
        }
        if (doc.contains("fill_policy")) {
            config.fill_policy = parse_fill_policy(doc["fill_policy"].get<std::string>());
        }
        if (doc.contains("pue")) {
            config.pue = doc["pue"].get<double>();
        }
        if (doc.contains("embodied_grams")) {
            config.embodied_grams = doc["embodied_grams"].get<double>();
        }
        if (doc.contains("pauses_denominator")) {
            config.pauses_denominator = parse_denominator(doc["pauses_denominator"].get<std::string>());
        }
        if (doc.contains("equivalences")) {
            const auto& eq = doc["equivalences"];
            auto& f = config.equivalences;
            f.phone_charge_t = eq.value("phone_charge_t", f.phone_charge_t);
            f.mile_driven_t = eq.value("mile_driven_t", f.mile_driven_t);
            f.gallon_gasoline_t = eq.value("gallon_gasoline_t", f.gallon_gasoline_t);
            f.barrel_oil_t = eq.value("barrel_oil_t", f.barrel_oil_t);
            f.home_year_t = eq.value("home_year_t", f.home_year_t);
            f.railcar_coal_t = eq.value("railcar_coal_t", f.railcar_coal_t);
        }
    } catch (const nlohmann::json::exception& e) {
        fail_validation(std::string("config: ") + e.what());
    }
    if (!(config.pue >= 1.0)) {
        fail_validation("config: pue must be >= 1");
    }
    if (!(config.embodied_grams >= 0.0)) {
        fail_validation("config: embodied_grams must be >= 0");
    }
    config.equivalences.validate();
    return config;
}

CliConfig load_cli_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail_validation("cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cli_config(buf.str());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Carbon-aware scheduling and software carbon intensity for compute jobs", "carbonsched"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--format", flags.format, "Output format: json or csv");
    app.add_option("--fill-policy", flags.fill_policy, "Missing grid slots: reject or forward_fill");
    app.add_option("--pauses-denominator", flags.pauses_denominator, "Pauses per hour over: window or job_duration");
    app.add_flag("--pretty", flags.pretty, "Round numbers for reading (JSON only)");
    app.add_option("--emit-plot-data", flags.plot_data, "Write plot-ready CSV data to this file");

    SharedInputs in;
    std::optional<double> pue_flag;
    std::optional<double> embodied_flag;
    std::string functional_unit(kDefaultFunctionalUnit);

    auto* emissions = app.add_subcommand("emissions", "SCI report for a job run unshifted from --start");
    emissions->add_option("--grid", in.grid, "Grid intensity CSV")->required();
    emissions->add_option("--job", in.job, "Job spec JSON")->required();
    emissions->add_option("--start", in.start, "RFC 3339 UTC start")->required();
    emissions->add_option("--pue", pue_flag, "Power usage effectiveness (>= 1)");
    emissions->add_option("--embodied", embodied_flag, "Embodied emissions in grams");
    emissions->add_option("--functional-unit", functional_unit, "Description of the functional unit R");

    std::optional<double> window_hours;
    std::optional<double> window_percent;
    std::optional<double> horizon_hours;
    auto* fs = app.add_subcommand("flexible-start", "Best single start time within a window");
    fs->add_option("--grid", in.grid)->required();
    fs->add_option("--job", in.job)->required();
    fs->add_option("--start", in.start)->required();
    auto* fs_hours = fs->add_option("--window-hours", window_hours, "Start window in hours");
    auto* fs_pct = fs->add_option("--window-percent", window_percent, "Start window as % of job duration");
    fs_hours->excludes(fs_pct);
    fs->add_option("--horizon-hours", horizon_hours, "Clamp the window to a forecast horizon");

    std::optional<double> slack_hours;
    std::optional<double> slack_percent;
    auto* pr = app.add_subcommand("pause-resume", "Run only in the cheapest intervals of an extended window");
    pr->add_option("--grid", in.grid)->required();
    pr->add_option("--job", in.job)->required();
    pr->add_option("--start", in.start)->required();
    auto* pr_hours = pr->add_option("--slack-hours", slack_hours, "Allowed extra duration in hours");
    auto* pr_pct = pr->add_option("--slack-percent", slack_percent, "Allowed extra duration as % of job duration");
    pr_hours->excludes(pr_pct);
    pr->add_option("--horizon-hours", horizon_hours, "Clamp the window to a forecast horizon");

    std::optional<double> threshold_window_hours;
    double threshold = 0.0;
    auto* th = app.add_subcommand("threshold", "Run whenever intensity is below a threshold");
    th->add_option("--grid", in.grid)->required();
    th->add_option("--job", in.job)->required();
    th->add_option("--start", in.start)->required();
    th->add_option("--window-hours", threshold_window_hours, "Total window in hours")->required();
    th->add_option("--threshold", threshold, "gCO2eq/kWh")->required();

    std::string grids_dir;
    std::string jobs_dir;
    int year = 2020;
    int per_month = 5;
    std::string slack_set = "6h,12h,18h,24h,25%,50%,75%,100%";
    std::string sampling_mode = "fixed_days";
    std::uint64_t seed = 0;
    std::string sampling_days;
    unsigned threads = 1;
    auto* sweep = app.add_subcommand("sweep", "Year-long optimizer gains per job, region and slack");
    sweep->add_option("--grids", grids_dir, "Directory of <region>.csv files")->required();
    sweep->add_option("--jobs", jobs_dir, "Directory of job spec JSON files")->required();
    sweep->add_option("--year", year);
    sweep->add_option("--samples-per-month", per_month);
    sweep->add_option("--slack-set", slack_set, "Comma list such as 6h,12h,25%,100%");
    sweep->add_option("--sampling", sampling_mode, "fixed_days or seeded_random");
    sweep->add_option("--seed", seed);
    sweep->add_option("--days", sampling_days, "Days of month for fixed_days sampling");
    sweep->add_option("--threads", threads, "Worker threads (output does not depend on it)");

    double grams = 0.0;
    auto* equiv = app.add_subcommand("equiv", "Express grams CO2eq as everyday equivalents");
    equiv->add_option("--grams", grams)->required();

    SyntheticGridSpec gen;
    std::string gen_start = "2020-01-01";
    std::string gen_out;
    std::string gen_fixture;
    std::string gen_out_dir;
    auto* gen_grid = app.add_subcommand("gen-grid", "Generate a synthetic sinusoidal grid");
    gen_grid->add_option("--region", gen.region_id);
    gen_grid->add_option("--start", gen_start, "UTC date or RFC 3339 timestamp");
    gen_grid->add_option("--days", gen.days);
    gen_grid->add_option("--base", gen.base);
    gen_grid->add_option("--amplitude", gen.amplitude);
    gen_grid->add_option("--period-hours", gen.period_hours);
    gen_grid->add_option("--phase-hours", gen.phase_hours);
    gen_grid->add_option("--noise-stddev", gen.noise_stddev);
    gen_grid->add_option("--seed", gen.seed);
    gen_grid->add_option("--out", gen_out, "Output CSV (default stdout)");
    gen_grid->add_option("--fixture", gen_fixture, "Multi-region fixture JSON");
    gen_grid->add_option("--out-dir", gen_out_dir, "Directory for --fixture output");

    auto* compare = app.add_subcommand("compare-regions", "Unshifted emissions of one job across regions");
    compare->add_option("--grids", grids_dir)->required();
    compare->add_option("--job", in.job)->required();
    compare->add_option("--year", year);
    compare->add_option("--samples-per-month", per_month);
    compare->add_option("--sampling", sampling_mode);
    compare->add_option("--seed", seed);
    compare->add_option("--days", sampling_days);

    std::string tod_dates;
    std::string tod_hours = "0,3,6,9,12,15,18,21";
    auto* tod = app.add_subcommand("time-of-day", "Emissions by start hour on given days");
    tod->add_option("--grid", in.grid)->required();
    tod->add_option("--job", in.job)->required();
    tod->add_option("--dates", tod_dates, "Comma list of UTC dates")->required();
    tod->add_option("--hours", tod_hours, "Comma list of hour offsets from 00:00 UTC");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("carbonsched");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        CliConfig config;
        if (const char* path = std::getenv(kConfigEnvVar); path != nullptr && *path != '\0') {
            config = load_cli_config(path);
        }
        if (!flags.format.empty()) {
            config.format = parse_format(flags.format);
        }
        if (!flags.fill_policy.empty()) {
            config.fill_policy = parse_fill_policy(flags.fill_policy);
        }
        if (!flags.pauses_denominator.empty()) {
            config.pauses_denominator = parse_denominator(flags.pauses_denominator);
        }
        if (pue_flag) {
            config.pue = *pue_flag;
        }
        if (embodied_flag) {
            config.embodied_grams = *embodied_flag;
        }
        const Emitter emitter(config, flags, out);

        if (emissions->parsed()) {
            const auto series = load_series(in.grid, config.fill_policy).series;
            const auto profile = quantize(load_job(in.job));
            const std::size_t first = series.index_of(parse_start(in.start));
            series.require_coverage(first, profile.size());
            const auto schedule = Schedule::contiguous(first, profile.size());
            const auto report = sci_report(profile, series, schedule, config.embodied_grams, functional_unit, config.pue);
            const auto eq = to_equivalences(report.c_grams, config.equivalences);
            emitter.emit(sci_to_json(report, eq), sci_to_csv(report, eq));
            emitter.plot_data(run_plot_csv(series, profile, schedule, schedule));
            return kExitOk;
        }

        if (fs->parsed() || pr->parsed()) {
            const bool is_fs = fs->parsed();
            const auto& hours = is_fs ? window_hours : slack_hours;
            const auto& percent = is_fs ? window_percent : slack_percent;
            if (!hours && !percent) {
                fail_validation(is_fs ? "one of --window-hours or --window-percent is required"
                                      : "one of --slack-hours or --slack-percent is required");
            }
            const SlackBudget budget = hours ? SlackBudget::hours(*hours) : SlackBudget::fraction(*percent / 100.0);
            budget.validate();
            const auto series = load_series(in.grid, config.fill_policy).series;
            const auto profile = quantize(load_job(in.job));
            const Timestamp t0 = parse_start(in.start);
            const Algorithm algorithm = is_fs ? Algorithm::FlexibleStart : Algorithm::PauseResume;
            const auto outcome =
                horizon_hours ? forecast_clamped(algorithm, profile, series, t0, budget, *horizon_hours,
                                                 config.pauses_denominator)
                : is_fs       ? flexible_start(profile, series, t0, budget)
                              : pause_resume(profile, series, t0, budget, config.pauses_denominator);
            emitter.emit(outcome_to_json(outcome, algorithm, series), outcome_to_csv(outcome, algorithm, series));
            emitter.plot_data(run_plot_csv(series, profile, Schedule::contiguous(series.index_of(t0), profile.size()),
                                           outcome.schedule));
            return kExitOk;
        }

        if (th->parsed()) {
            const auto series = load_series(in.grid, config.fill_policy).series;
            const auto profile = quantize(load_job(in.job));
            const std::size_t window = SlackBudget::hours(*threshold_window_hours).slack_intervals(profile.size());
            const auto outcome = threshold_schedule(profile, series, parse_start(in.start), window, threshold);
            const Json doc = threshold_to_json(outcome, threshold, series);
            std::ostringstream csv;
            csv << "threshold,slack_used_intervals,n_pauses\n"
                << format_decimal(threshold) << ',' << outcome.slack_used << ',' << outcome.schedule.n_pauses() << '\n';
            emitter.emit(doc, csv.str());
            return kExitOk;
        }

        if (sweep->parsed()) {
            const auto regions = load_region_dir(grids_dir, config.fill_policy);
            const auto jobs = load_job_dir(jobs_dir);
            std::vector<SlackBudget> slacks;
            for (const auto& item : split_list(slack_set)) {
                slacks.push_back(SlackBudget::parse(item));
            }
            if (slacks.empty()) {
                fail_validation("--slack-set is empty");
            }
            const SweepMetadata meta{sampling_from_flags(year, per_month, sampling_mode, seed, sampling_days)};
            const auto starts = sampling_plan(meta.sampling);
            SweepOptions options;
            options.threads = threads;
            options.denominator = config.pauses_denominator;
            options.keep_samples = !flags.plot_data.empty();
            const auto report = gains_sweep(jobs, regions, slacks, starts, options);
            emitter.emit(sweep_to_json(report, meta), sweep_to_csv(report));
            if (options.keep_samples) {
                std::ostringstream plot;
                plot << "model,region,slack,algorithm,start,gain,pauses_per_hour\n";
                for (const auto& s : report.samples) {
                    const auto& cell = report.cells[s.cell];
                    plot << cell.model << ',' << cell.region << ',' << cell.slack.label() << ','
                         << algorithm_name(cell.algorithm) << ',' << format_rfc3339(s.start) << ','
                         << format_decimal(s.gain) << ',' << format_decimal(s.pauses_per_hour) << '\n';
                }
                emitter.plot_data(plot.str());
            }
            return kExitOk;
        }

        if (equiv->parsed()) {
            const auto eq = to_equivalences(grams, config.equivalences);
            emitter.emit(equivalences_to_json(grams, eq), equivalences_to_csv(grams, eq));
            return kExitOk;
        }

        if (gen_grid->parsed()) {
            if (!gen_fixture.empty()) {
                if (gen_out_dir.empty()) {
                    fail_validation("--fixture requires --out-dir");
                }
                std::filesystem::create_directories(gen_out_dir);
                for (const auto& spec : load_synthetic_fixture(gen_fixture).regions) {
                    write_series(generate_synthetic(spec), std::filesystem::path(gen_out_dir) / (spec.region_id + ".csv"));
                }
                return kExitOk;
            }
            gen.epoch_start = parse_start(gen_start);
            const auto series = generate_synthetic(gen);
            if (gen_out.empty()) {
                write_series(series, out);
            } else {
                write_series(series, std::filesystem::path(gen_out));
            }
            return kExitOk;
        }

        if (compare->parsed()) {
            const auto regions = load_region_dir(grids_dir, config.fill_policy);
            const auto profile = quantize(load_job(in.job));
            const auto starts = sampling_plan(sampling_from_flags(year, per_month, sampling_mode, seed, sampling_days));
            const auto stats = region_comparison(profile, regions, starts);
            emitter.emit(regions_to_json(stats), regions_to_csv(stats));
            std::ostringstream plot;
            plot << "region,start,grams\n";
            for (const auto& s : stats) {
                for (std::size_t i = 0; i < s.grams.size(); ++i) {
                    plot << s.region_id << ',' << format_rfc3339(s.starts[i]) << ',' << format_decimal(s.grams[i])
                         << '\n';
                }
            }
            emitter.plot_data(plot.str());
            return kExitOk;
        }

        if (tod->parsed()) {
            const auto series = load_series(in.grid, config.fill_policy).series;
            const auto profile = quantize(load_job(in.job));
            std::vector<Timestamp> dates;
            for (const auto& d : split_list(tod_dates)) {
                dates.push_back(parse_utc_date(d));
            }
            const auto hours = parse_numbers(tod_hours, "hour offset");
            const auto table = time_of_day_sweep(profile, series, dates, hours);
            const std::string csv = time_of_day_to_csv(table);
            emitter.emit(time_of_day_to_json(table), csv);
            emitter.plot_data(csv);
            return kExitOk;
        }

        fail_internal("no command selected");
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.kind()) {
        case ErrorKind::Validation:
            return kExitValidation;
        case ErrorKind::Coverage:
            return kExitCoverage;
        case ErrorKind::Internal:
            return kExitInternal;
        }
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

} // namespace carbonsched
