#include "carbonsched/workload.hpp"

#include "carbonsched/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace carbonsched {

namespace {

constexpr double kIntervalMinutes = 5.0;
constexpr double kEnergyRelTolerance = 1e-6;

double sum(std::span<const double> values) { return std::accumulate(values.begin(), values.end(), 0.0); }

} // namespace

void JobSpec::validate() const
{
    if (gpu_count <= 0) {
        fail_validation("job '" + name + "': gpu_count must be positive");
    }
    if (!(duration_minutes > 0.0) || !std::isfinite(duration_minutes)) {
        fail_validation("job '" + name + "': duration_minutes must be positive");
    }
    if (!total_kwh && !profile_kwh) {
        fail_validation("job '" + name + "': one of total_kwh or profile_kwh is required");
    }
    if (total_kwh && (!(*total_kwh > 0.0) || !std::isfinite(*total_kwh))) {
        fail_validation("job '" + name + "': total_kwh must be positive");
    }
    if (profile_kwh) {
        if (profile_kwh->size() != n_intervals()) {
            fail_validation("job '" + name + "': profile has " + std::to_string(profile_kwh->size()) +
                            " entries, expected ceil(duration/5) = " + std::to_string(n_intervals()));
        }
        for (double v : *profile_kwh) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                fail_validation("job '" + name + "': profile entries must be non-negative");
            }
        }
        if (total_kwh && std::abs(*total_kwh - sum(*profile_kwh)) > kEnergyRelTolerance * *total_kwh) {
            fail_validation("job '" + name + "': total_kwh disagrees with the profile sum");
        }
    }
}

std::size_t JobSpec::n_intervals() const
{
    // Tolerance keeps e.g. 10.000000000000002 minutes at 2 intervals.
    return static_cast<std::size_t>(std::ceil(duration_minutes / kIntervalMinutes - 1e-9));
}

double JobSpec::energy_kwh() const { return total_kwh ? *total_kwh : sum(*profile_kwh); }

EnergyProfile::EnergyProfile(std::vector<double> per_interval_kwh) : kwh_(std::move(per_interval_kwh))
{
    if (kwh_.empty()) {
        fail_validation("energy profile must have at least one interval");
    }
    for (double v : kwh_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            fail_validation("energy profile entries must be non-negative and finite");
        }
    }
}

double EnergyProfile::total_kwh() const { return sum(kwh_); }

EnergyProfile EnergyProfile::scaled(double factor) const
{
    std::vector<double> out(kwh_);
    for (double& v : out) {
        v *= factor;
    }
    return EnergyProfile(std::move(out));
}

EnergyProfile quantize(const JobSpec& job)
{
    job.validate();
    if (job.profile_kwh) {
        return EnergyProfile(*job.profile_kwh);
    }
    const double total = *job.total_kwh;
    const std::size_t n = job.n_intervals();
    const double per_full = total * (kIntervalMinutes / job.duration_minutes);
    std::vector<double> profile(n, per_full);
    double assigned = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        assigned += profile[j];
    }
    profile.back() = std::max(0.0, total - assigned);
    return EnergyProfile(std::move(profile));
}

DerivedMetrics derived_metrics(const JobSpec& job)
{
    job.validate();
    DerivedMetrics m;
    m.duration_hours = job.duration_hours();
    m.gpu_hours = static_cast<double>(job.gpu_count) * m.duration_hours;
    m.kwh_per_gpu_hour = job.energy_kwh() / m.gpu_hours;
    return m;
}

double extrapolate_full_run(double partial_kwh, double fraction_complete)
{
    if (!(fraction_complete > 0.0) || fraction_complete > 1.0) {
        fail_validation("fraction_complete must be in (0, 1]");
    }
    if (!(partial_kwh >= 0.0)) {
        fail_validation("partial energy must be non-negative");
    }
    return partial_kwh / fraction_complete;
}

std::vector<ComponentShare> component_fraction(std::span<const ComponentPower> components)
{
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.watts >= 0.0) || !std::isfinite(c.watts)) {
            fail_validation("component '" + c.label + "' has negative power");
        }
        total += c.watts;
    }
    if (!(total > 0.0)) {
        fail_validation("component powers sum to zero");
    }
    std::vector<ComponentShare> shares;
    shares.reserve(components.size());
    for (const auto& c : components) {
        shares.push_back({c.label, c.watts / total});
    }
    return shares;
}

JobSpec parse_job(std::string_view json_text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail_validation(std::string("job file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        fail_validation("job file must contain a single JSON object");
    }
    JobSpec job;
    try {
        job.name = doc.at("name").get<std::string>();
        job.gpu_count = doc.at("gpu_count").get<int>();
        job.gpu_type = doc.at("gpu_type").get<std::string>();
        job.duration_minutes = doc.at("duration_minutes").get<double>();
        const bool has_total = doc.contains("total_kwh");
        const bool has_profile = doc.contains("profile_kwh");
        if (has_total == has_profile) {
            fail_validation("job '" + job.name + "': exactly one of total_kwh or profile_kwh must be given");
        }
        if (has_total) {
            job.total_kwh = doc.at("total_kwh").get<double>();
        } else {
            job.profile_kwh = doc.at("profile_kwh").get<std::vector<double>>();
        }
    } catch (const nlohmann::json::exception& e) {
        fail_validation(std::string("job file: ") + e.what());
    }
    job.validate();
    return job;
}

JobSpec load_job(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail_validation("cannot open job file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_job(buf.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::vector<JobSpec> load_job_dir(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir)) {
        fail_validation("job directory " + dir.string() + " does not exist");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        fail_validation("no *.json job files in " + dir.string());
    }
    std::vector<JobSpec> jobs;
    jobs.reserve(files.size());
    for (const auto& f : files) {
        jobs.push_back(load_job(f));
    }
    return jobs;
}

std::string job_to_json(const JobSpec& job)
{
    nlohmann::ordered_json doc;
    doc["name"] = job.name;
    doc["gpu_count"] = job.gpu_count;
    doc["gpu_type"] = job.gpu_type;
    doc["duration_minutes"] = job.duration_minutes;
    if (job.total_kwh) {
        doc["total_kwh"] = *job.total_kwh;
    }
    if (job.profile_kwh) {
        doc["profile_kwh"] = *job.profile_kwh;
    }
    return doc.dump(2);
}

} // namespace carbonsched
