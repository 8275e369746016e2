#include "evgrid/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "evgrid/game.hpp"

namespace evgrid {

namespace {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

void SOCDistribution::validate() const {
    if (!(sigma_log > 0.0)) throw std::invalid_argument("sigma_log must be > 0");
    if (!std::isfinite(mu_log)) throw std::invalid_argument("mu_log must be finite");
}

double SOCDistribution::mean() const {
    return std::exp(mu_log + 0.5 * sigma_log * sigma_log);
}

double lognormal_tail(const SOCDistribution& dist, double threshold, TailSide side) {
    dist.validate();
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
    const double z = (std::log(threshold) - dist.mu_log) / dist.sigma_log;
    const double below = normal_cdf(z);
    return side == TailSide::BelowMin ? below : 1.0 - below;
}

ClassBounds supply_demand_upper_bounds(int n_ev, double class_prob,
                                       const SOCDistribution& dist,
                                       const SOCState& soc_cfg, double alpha,
                                       bool demand_tail_above) {
    if (n_ev < 0) throw std::invalid_argument("n_ev must be >= 0");
    if (class_prob < 0.0 || class_prob > 1.0) {
        throw std::invalid_argument("class_prob must lie in [0, 1]");
    }
    const double p_above = lognormal_tail(dist, soc_cfg.max_wh, TailSide::AboveMax);
    const double p_below = lognormal_tail(dist, soc_cfg.min_wh, TailSide::BelowMin);
    const double demand_tail = demand_tail_above ? p_above : p_below;

    ClassBounds b;
    b.s_ub = n_ev * class_prob * p_above * alpha * dist.mean();
    b.d_ub = n_ev * class_prob * demand_tail * (soc_cfg.max_wh - soc_cfg.current_wh);
    return b;
}

void StationLayout::validate() const {
    if (n_stations < 1) throw std::invalid_argument("n_stations must be >= 1");
    if (lambda_supp < 0.0 || lambda_dem < 0.0) {
        throw std::invalid_argument("arrival rates must be >= 0");
    }
}

double expected_sellers_per_station(const StationLayout& layout) {
    layout.validate();
    const double rate = layout.lambda_supp / layout.n_stations;
    if (rate == 0.0) return 0.0;
    // Running-term evaluation of sum_{k=0}^{N} k e^{-rate} rate^k / k!.
    double term = std::exp(-rate);  // k = 0 mass
    double mean = 0.0;
    for (int k = 1; k <= layout.n_stations; ++k) {
        term *= rate / k;
        mean += k * term;
    }
    return mean;
}

double expected_buyers_per_station(const StationLayout& layout) {
    layout.validate();
    return layout.lambda_dem / layout.n_stations;
}

StationPlan optimal_station_count(const StationPlanInputs& inputs, int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min) {
        throw std::invalid_argument("candidate range must satisfy 1 <= n_min <= n_max");
    }
    if (inputs.n_coop_reference < 1) {
        throw std::invalid_argument("n_coop_reference must be >= 1");
    }
    const double threshold =
        conspiracy_threshold(inputs.road_charge, inputs.n_coop_reference);

    StationPlan best{n_min, -1.0};
    for (int n = n_min; n <= n_max; ++n) {
        const double trip = inputs.road_length_m / (2.0 * n);
        int qualified = 0;
        for (const auto& cand : inputs.candidates) {
            SupplyOffer offer;
            offer.ev_id = 0;
            offer.offered = cand.offered;
            offer.trip_m = trip;
            offer.delta = cand.delta;
            if (ev_utility(inputs.grid, offer, cand.offered) >= threshold) {
                ++qualified;
            }
        }
        StationLayout layout;
        layout.road_length_m = inputs.road_length_m;
        layout.mean_trip_m = trip;
        layout.n_stations = n;
        layout.lambda_supp = static_cast<double>(qualified);
        const double score = expected_sellers_per_station(layout);
        if (score > best.expected_sellers) {
            best.n_stations = n;
            best.expected_sellers = score;
        }
    }
    if (best.expected_sellers < 0.0) best.expected_sellers = 0.0;
    return best;
}

}  // namespace evgrid
