#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evgrid/ev_model.hpp"
#include "evgrid/mobility.hpp"
#include "evgrid/optimizer.hpp"
#include "evgrid/renewables.hpp"

namespace evgrid {

/// Per-class population model for the post-route remaining charge: the
/// generative draw is lognormal around median_wh, and the current charge is
/// constructed so the drawn remainder is realized after the planned route
/// (clamped to the battery).
struct SOCPopulation {
    double median_wh = 5e3;
    double sigma_log = 0.1;
    double min_frac = 0.2;  // lower SOC limit as a share of capacity
    double max_frac = 0.8;  // upper SOC limit as a share of capacity
    double surplus_fraction = 0.2;
};

struct SweepAxes {
    std::vector<double> p_ev;
    std::vector<double> m_g;
    std::vector<double> s_g_cap;
    std::vector<int> n_ev;
    int repetitions = 100;
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    int n_ev = 500;
    int rounds = 1;
    int traffic_seconds = 3600;
    double forecast_segment_m = 100.0;
    double market_unit_wh = 1000.0;  // energy per abstract market unit
    double road_charge = 150.0;
    int coop_threshold = 5;
    std::string output_dir = "out";

    RoadConfig road;
    DrivingParams driving;
    RouteDistribution routes;
    Environment environment;
    RenewableFleet fleet;
    GridParams grid;
    Forecaster forecaster;
    std::array<double, 3> class_weights{0.6, 0.4, 0.4};  // car, bus, lorry
    std::array<SOCPopulation, 3> soc{};                  // car, bus, lorry
    SweepAxes sweep_axes;

    void validate() const;
    std::array<double, 3> normalized_class_weights() const;
};

/// All stock defaults, matching the standard parameter set.
ScenarioConfig default_config();

/// The seeded scenario used by the experiment suite: stock parameters with
/// a recalibrated battery population that produces both demanders and
/// surplus sellers at realistic magnitudes.
ScenarioConfig reference_scenario();

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Reads and validates a JSON config file; absent fields keep defaults.
ScenarioConfig load_config(const std::string& path);

/// Stable 64-bit hash of the canonical serialized config.
std::uint64_t config_hash(const ScenarioConfig& cfg);

// Snapshot/solution JSON for the optimize subcommand and result dumps.
nlohmann::json snapshot_to_json(const MarketSnapshot& snapshot);
MarketSnapshot snapshot_from_json(const nlohmann::json& j);
nlohmann::json solution_to_json(const DispatchSolution& solution);

}  // namespace evgrid
