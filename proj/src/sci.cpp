#include "carbonsched/sci.hpp"

#include "carbonsched/error.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace carbonsched {

namespace {

constexpr double kGramsPerMetricTon = 1e6;

std::array<std::pair<std::string_view, double>, 6> factor_table(const EquivalenceFactors& f)
{
    return {{{"phone_charges", f.phone_charge_t},
             {"miles_driven", f.mile_driven_t},
             {"gallons_gasoline", f.gallon_gasoline_t},
             {"barrels_oil", f.barrel_oil_t},
             {"home_years", f.home_year_t},
             {"railcars_coal", f.railcar_coal_t}}};
}

} // namespace

double operational_emissions(std::span<const double> profile_kwh, std::span<const double> intensities,
                             std::span<const std::size_t> indices)
{
    if (profile_kwh.size() != indices.size()) {
        fail_validation("schedule has " + std::to_string(indices.size()) + " intervals but the profile has " +
                        std::to_string(profile_kwh.size()));
    }
    double grams = 0.0;
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] >= intensities.size()) {
            fail_coverage("schedule index " + std::to_string(indices[j]) + " beyond series length " +
                          std::to_string(intensities.size()));
        }
        grams += profile_kwh[j] * intensities[indices[j]];
    }
    return grams;
}

double operational_emissions(const EnergyProfile& profile, const IntensitySeries& series, const Schedule& schedule)
{
    return operational_emissions(profile.kwh(), series.values(), schedule.indices());
}

SciReport sci_report(const EnergyProfile& profile, const IntensitySeries& series, const Schedule& schedule,
                     double embodied_grams, std::string functional_unit, double pue)
{
    if (!(pue >= 1.0) || !std::isfinite(pue)) {
        fail_validation("pue must be >= 1");
    }
    if (!std::isfinite(embodied_grams) || embodied_grams < 0.0) {
        fail_validation("embodied grams must be non-negative");
    }
    const EnergyProfile effective = pue == 1.0 ? profile : profile.scaled(pue);
    SciReport report;
    report.e_kwh = effective.total_kwh();
    report.o_grams = operational_emissions(effective, series, schedule);
    report.i_effective_g_per_kwh = report.e_kwh > 0.0 ? report.o_grams / report.e_kwh : 0.0;
    report.m_grams = embodied_grams;
    report.c_grams = report.o_grams + report.m_grams;
    report.r = std::move(functional_unit);
    report.pue = pue;
    return report;
}

void EquivalenceFactors::validate() const
{
    for (const auto& [label, tons] : factor_table(*this)) {
        if (!(tons > 0.0) || !std::isfinite(tons)) {
            fail_validation("equivalence factor for " + std::string(label) + " must be positive");
        }
    }
}

std::vector<Equivalence> to_equivalences(double grams, const EquivalenceFactors& factors)
{
    factors.validate();
    if (!(grams >= 0.0)) {
        fail_validation("emissions must be non-negative");
    }
    const double tons = grams / kGramsPerMetricTon;
    std::vector<Equivalence> out;
    for (const auto& [label, factor] : factor_table(factors)) {
        out.push_back({std::string(label), tons / factor});
    }
    return out;
}

double grams_from_equivalence(std::string_view label, double quantity, const EquivalenceFactors& factors)
{
    for (const auto& [name, factor] : factor_table(factors)) {
        if (name == label) {
            return quantity * factor * kGramsPerMetricTon;
        }
    }
    fail_validation("unknown equivalence '" + std::string(label) + "'");
}

double percent_change(double a, double b)
{
    if (b == 0.0) {
        fail_validation("percent change relative to zero is undefined");
    }
    return (a - b) / b;
}

} // namespace carbonsched
