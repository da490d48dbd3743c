#pragma once

#include "carbonsched/grid.hpp"
#include "carbonsched/schedule.hpp"
#include "carbonsched/workload.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace carbonsched {

// grams = sum_j profile[j] * intensities[indices[j]]   (kWh * g/kWh)
double operational_emissions(std::span<const double> profile_kwh, std::span<const double> intensities,
                             std::span<const std::size_t> indices);

// Same sum for the contiguous run starting at `start`; no bounds checks.
inline double contiguous_emissions(std::span<const double> profile_kwh, std::span<const double> intensities,
                                   std::size_t start)
{
    double grams = 0.0;
    const double* v = intensities.data() + start;
    for (std::size_t j = 0; j < profile_kwh.size(); ++j) {
        grams += profile_kwh[j] * v[j];
    }
    return grams;
}

double operational_emissions(const EnergyProfile& profile, const IntensitySeries& series, const Schedule& schedule);

/**
 * Software carbon intensity of one functional unit.
 *
 * C = O + M, where O is energy integrated against the marginal intensity of
 * the intervals the job actually ran in and M is an embodied-carbon constant
 * supplied by the caller. When a PUE above 1 is requested the energy, and
 * therefore O, include datacenter overhead.
 */
struct SciReport {
    double e_kwh = 0.0;
    double i_effective_g_per_kwh = 0.0;
    double o_grams = 0.0;
    double m_grams = 0.0;
    double c_grams = 0.0;
    std::string r;
    double pue = 1.0;
};

inline constexpr std::string_view kDefaultFunctionalUnit = "one training job";

SciReport sci_report(const EnergyProfile& profile, const IntensitySeries& series, const Schedule& schedule,
                     double embodied_grams = 0.0, std::string functional_unit = std::string(kDefaultFunctionalUnit),
                     double pue = 1.0);

// Metric tons CO2eq per unit, US EPA equivalencies.
struct EquivalenceFactors {
    double phone_charge_t = 8.22e-6;
    double mile_driven_t = 3.98e-4;
    double gallon_gasoline_t = 8.887e-3;
    double barrel_oil_t = 0.43;
    double home_year_t = 8.30;
    double railcar_coal_t = 181.29;

    void validate() const;
};

struct Equivalence {
    std::string label;
    double quantity = 0.0;
};

// Labels: phone_charges, miles_driven, gallons_gasoline, barrels_oil, home_years, railcars_coal.
std::vector<Equivalence> to_equivalences(double grams, const EquivalenceFactors& factors = {});
double grams_from_equivalence(std::string_view label, double quantity, const EquivalenceFactors& factors = {});

// (a - b) / b as a fraction.
double percent_change(double a, double b);

} // namespace carbonsched
