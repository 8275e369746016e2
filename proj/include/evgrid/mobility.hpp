#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "evgrid/ev_model.hpp"

namespace evgrid {

struct RoadConfig {
    double length_m = 20e3;
    int lane_count = 3;
    double speed_limit_car_m_s = 31.29;
    double speed_limit_bus_m_s = 31.29;
    double speed_limit_lorry_m_s = 26.82;
    std::vector<double> station_positions_m;

    double speed_limit(EVClass c) const;
    void validate() const;
};

struct VehicleState {
    int id = 0;
    EVClass vehicle_class = EVClass::Car;
    double position_m = 0.0;
    int lane = 0;
    double velocity_m_s = 0.0;
    double route_length_m = 0.0;  // planned route for the energy model
    double supply_trip_m = 0.0;   // detour to the chosen charging station
};

enum class ForecasterKind { Oracle, SpeedLimit, MovingAverage };

struct Forecaster {
    ForecasterKind kind = ForecasterKind::Oracle;
    int window = 3;  // MovingAverage only

    void validate() const;
};

/// Driver behaviour constants for the car-following update.
struct DrivingParams {
    double dt_s = 1.0;
    double reaction_s = 1.0;
    double accel_car_m_s2 = 1.5;
    double accel_bus_m_s2 = 1.5;
    double accel_lorry_m_s2 = 1.0;
    double max_decel_m_s2 = 4.5;
    double length_car_m = 5.0;
    double length_bus_m = 12.0;
    double length_lorry_m = 16.0;
    double min_gap_m = 2.5;

    double accel(EVClass c) const;
    double vehicle_length(EVClass c) const;
};

/// Route-length sampling parameters (log-scale medians, log-scale sigma).
struct RouteDistribution {
    double route_median_m = 10e3;
    double supply_trip_median_m = 6e3;
    double sigma_log = 1.0;
};

/// Collision-free upper bound on a follower's next velocity given its
/// leader's state and the available gap.
double krauss_safe_velocity(const VehicleState& follower, const VehicleState& leader,
                            double gap_m, double reaction_s, double max_decel_m_s2);

std::vector<VehicleState> spawn_traffic(const RoadConfig& road, int n_ev,
                                        const std::vector<double>& class_weights,
                                        const RouteDistribution& routes,
                                        std::uint64_t rng_seed,
                                        const DrivingParams& driving = {});

/// Ring-road traffic world. Vehicles keep their spawn lane; a vehicle that
/// wraps past the end of the road is recycled with a freshly drawn route.
class TrafficWorld {
public:
    TrafficWorld(RoadConfig road, std::vector<VehicleState> vehicles,
                 RouteDistribution routes, std::uint64_t rng_seed,
                 DrivingParams driving = {});

    void step(double dt_s);
    void run(int steps, double dt_s);

    const std::vector<VehicleState>& vehicles() const { return vehicles_; }
    const RoadConfig& road() const { return road_; }

    /// Realized per-step velocities for one vehicle, in step order.
    const std::vector<double>& velocity_history(int vehicle_id) const;

    /// Distance-indexed trace of a vehicle's realized travel, truncated or
    /// extended (at the final observed speed) to route_length_m.
    VelocityTrace realized_route_trace(int vehicle_id, double route_length_m) const;

private:
    RoadConfig road_;
    std::vector<VehicleState> vehicles_;
    RouteDistribution routes_;
    DrivingParams driving_;
    std::mt19937_64 rng_;
    std::vector<std::vector<int>> lane_order_;          // per lane, sorted by position
    std::vector<std::vector<double>> velocity_log_;     // per vehicle id
    double dt_last_ = 1.0;

    void rebuild_lane_order();
};

/// Predicts the velocity profile over a planned route. Oracle mode passes
/// the supplied history through (resampled to the requested segmentation);
/// the other modes produce constant-velocity traces.
VelocityTrace forecast_route_velocities(const Forecaster& forecaster,
                                        const VelocityTrace& history,
                                        double route_length_m, double segment_length_m,
                                        double speed_limit_m_s);

}  // namespace evgrid
