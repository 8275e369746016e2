#pragma once

#include <cstdint>
#include <utility>

namespace evgrid {

struct HourStamp {
    int month = 1;  // 1..12
    int hour = 0;   // 0..23

    void validate() const;
};

/// A fleet of distributed wind and PV sources. Output profiles are
/// synthetic but calibrated so the configured per-source means are met.
struct RenewableFleet {
    int n_wind = 100;
    int n_pv = 100;
    double wind_mean_wh = 386.5;  // long-run mean hourly output per source
    double pv_mean_wh = 371.0;    // mean over daylight hours per source
    double seasonal_amplitude = 0.6;
    double noise_sigma = 0.25;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Hourly PV output in Wh: zero at night, sinusoidal over the daylight
/// window, amplified in summer, with multiplicative noise.
double pv_output(const RenewableFleet& fleet, const HourStamp& t);

/// Hourly wind output in Wh: autocorrelated fluctuation around a seasonal
/// mean that is mildly higher in winter.
double wind_output(const RenewableFleet& fleet, const HourStamp& t);

/// (total wind, total pv) at the given hour.
std::pair<double, double> aggregate_renewables(const RenewableFleet& fleet,
                                               const HourStamp& t);

}  // namespace evgrid
