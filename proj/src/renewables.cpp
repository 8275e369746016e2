#include "evgrid/renewables.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "evgrid/rng.hpp"

namespace evgrid {

namespace {

// London-like daylight windows per month (solar hours, no geometry).
constexpr std::array<double, 12> kSunriseHour = {8.0, 7.5, 6.5, 5.5, 5.0, 4.5,
                                                 5.0, 5.5, 6.5, 7.5, 7.0, 8.0};
constexpr std::array<double, 12> kDaylength = {8.0, 9.5, 11.5, 13.5, 15.5, 16.5,
                                               16.0, 14.5, 12.5, 10.5, 8.5, 7.5};

constexpr double kPi = 3.14159265358979323846;

// Summer-peaked multiplier for PV, winter-peaked for wind.
double pv_season(int month, double amplitude) {
    return 1.0 + amplitude * std::cos(2.0 * kPi * (month - 6.5) / 12.0);
}

double wind_season(int month, double amplitude) {
    return 1.0 + amplitude * std::cos(2.0 * kPi * (month - 1) / 12.0);
}

// Raw solar elevation shape at an hour (sampled at the hour centre).
double pv_shape(int month, int hour) {
    const double sr = kSunriseHour[static_cast<std::size_t>(month - 1)];
    const double dl = kDaylength[static_cast<std::size_t>(month - 1)];
    const double x = (hour + 0.5 - sr) / dl;
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::sin(kPi * x);
}

// Mean of shape*season over all daylight cells of the year; dividing by it
// makes the configured per-source mean exact over the daytime grid.
double pv_grid_mean(double amplitude) {
    double sum = 0.0;
    int cells = 0;
    for (int m = 1; m <= 12; ++m) {
        for (int h = 0; h < 24; ++h) {
            const double s = pv_shape(m, h);
            if (s > 0.0) {
                sum += s * pv_season(m, amplitude);
                ++cells;
            }
        }
    }
    return sum / cells;
}

double gaussian_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    auto rng = make_rng(derive_seed(seed, stream, index));
    std::normal_distribution<double> n(0.0, 1.0);
    return n(rng);
}

}  // namespace

void HourStamp::validate() const {
    if (month < 1 || month > 12) throw std::invalid_argument("month must be in 1..12");
    if (hour < 0 || hour > 23) throw std::invalid_argument("hour must be in 0..23");
}

void RenewableFleet::validate() const {
    if (n_wind < 0 || n_pv < 0) throw std::invalid_argument("source counts must be >= 0");
    if (wind_mean_wh < 0.0 || pv_mean_wh < 0.0) {
        throw std::invalid_argument("per-source means must be >= 0");
    }
    if (noise_sigma < 0.0) throw std::invalid_argument("noise_sigma must be >= 0");
}

double pv_output(const RenewableFleet& fleet, const HourStamp& t) {
    t.validate();
    fleet.validate();
    if (fleet.n_pv == 0) return 0.0;

    const double shape = pv_shape(t.month, t.hour);
    if (shape <= 0.0) return 0.0;

    static thread_local double cached_amp = -1.0;
    static thread_local double cached_mean = 1.0;
    if (cached_amp != fleet.seasonal_amplitude) {
        cached_amp = fleet.seasonal_amplitude;
        cached_mean = pv_grid_mean(cached_amp);
    }

    const std::uint64_t idx =
        static_cast<std::uint64_t>((t.month - 1) * 24 + t.hour);
    const double eps = gaussian_draw(fleet.rng_seed, rng_stream::renewables_pv, idx);
    const double noise_factor = std::max(0.0, 1.0 + 0.6 * fleet.noise_sigma * eps);

    const double per_source = fleet.pv_mean_wh * shape *
                              pv_season(t.month, fleet.seasonal_amplitude) / cached_mean;
    return fleet.n_pv * per_source * noise_factor;
}

double wind_output(const RenewableFleet& fleet, const HourStamp& t) {
    t.validate();
    fleet.validate();
    if (fleet.n_wind == 0) return 0.0;

    // AR(1) fluctuation reconstructed from counter-based innovations so the
    // output is a pure function of (seed, timestamp).
    const int idx = (t.month - 1) * 24 + t.hour;
    const double phi = 0.7;
    double x = 0.0;
    for (int n = 0; n <= idx; ++n) {
        const double eps = gaussian_draw(fleet.rng_seed, rng_stream::renewables_wind,
                                         static_cast<std::uint64_t>(n));
        x = phi * x + fleet.noise_sigma * eps;
    }
    const double factor = std::max(0.0, 1.0 + x);

    // Wind seasonality is mild next to the PV swing.
    const double season = wind_season(t.month, 0.4 * fleet.seasonal_amplitude);
    return fleet.n_wind * fleet.wind_mean_wh * season * factor;
}

std::pair<double, double> aggregate_renewables(const RenewableFleet& fleet,
                                               const HourStamp& t) {
    return {wind_output(fleet, t), pv_output(fleet, t)};
}

}  // namespace evgrid
