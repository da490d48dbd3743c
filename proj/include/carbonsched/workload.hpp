#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace carbonsched {

// A training job as measured: GPU allocation, wall-clock duration and energy.
// Energy is given either as a total or as a per-5-minute profile.
struct JobSpec {
    std::string name;
    int gpu_count = 1;
    std::string gpu_type;
    double duration_minutes = 0.0;
    std::optional<double> total_kwh;
    std::optional<std::vector<double>> profile_kwh;

    void validate() const;

    // ceil(duration_minutes / 5)
    std::size_t n_intervals() const;
    double duration_hours() const { return duration_minutes / 60.0; }
    double energy_kwh() const;
};

class EnergyProfile {
public:
    explicit EnergyProfile(std::vector<double> per_interval_kwh);

    std::span<const double> kwh() const { return kwh_; }
    std::size_t size() const { return kwh_.size(); }
    double operator[](std::size_t j) const { return kwh_[j]; }
    double total_kwh() const;

    EnergyProfile scaled(double factor) const;

private:
    std::vector<double> kwh_;
};

// Spreads the job energy uniformly over its 5-minute intervals; a trailing
// partial interval gets its proportional share and absorbs rounding residue.
// A supplied profile passes through unchanged.
EnergyProfile quantize(const JobSpec& job);

struct DerivedMetrics {
    double kwh_per_gpu_hour = 0.0;
    double duration_hours = 0.0;
    double gpu_hours = 0.0;
};

DerivedMetrics derived_metrics(const JobSpec& job);

// Energy of a full run given the energy of a partial one.
double extrapolate_full_run(double partial_kwh, double fraction_complete);

struct ComponentPower {
    std::string label;
    double watts = 0.0;
};

struct ComponentShare {
    std::string label;
    double fraction = 0.0;
};

std::vector<ComponentShare> component_fraction(std::span<const ComponentPower> components);

JobSpec parse_job(std::string_view json_text);
JobSpec load_job(const std::filesystem::path& path);
// Every *.json file in `dir`, ordered by file name.
std::vector<JobSpec> load_job_dir(const std::filesystem::path& dir);
std::string job_to_json(const JobSpec& job);

} // namespace carbonsched
