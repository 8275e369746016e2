#include "evgrid/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "evgrid/rng.hpp"

namespace evgrid {

double RoadConfig::speed_limit(EVClass c) const {
    switch (c) {
        case EVClass::Car: return speed_limit_car_m_s;
        case EVClass::Bus: return speed_limit_bus_m_s;
        case EVClass::Lorry: return speed_limit_lorry_m_s;
    }
    return speed_limit_car_m_s;
}

void RoadConfig::validate() const {
    if (!(length_m > 0.0)) throw std::invalid_argument("road length must be > 0");
    if (lane_count < 1) throw std::invalid_argument("lane_count must be >= 1");
    for (double p : station_positions_m) {
        if (p < 0.0 || p > length_m) {
            throw std::invalid_argument("station position outside road");
        }
    }
}

void Forecaster::validate() const {
    if (kind == ForecasterKind::MovingAverage && window < 1) {
        throw std::invalid_argument("moving-average window must be >= 1");
    }
}

double DrivingParams::accel(EVClass c) const {
    switch (c) {
        case EVClass::Car: return accel_car_m_s2;
        case EVClass::Bus: return accel_bus_m_s2;
        case EVClass::Lorry: return accel_lorry_m_s2;
    }
    return accel_car_m_s2;
}

double DrivingParams::vehicle_length(EVClass c) const {
    switch (c) {
        case EVClass::Car: return length_car_m;
        case EVClass::Bus: return length_bus_m;
        case EVClass::Lorry: return length_lorry_m;
    }
    return length_car_m;
}

double krauss_safe_velocity(const VehicleState& follower, const VehicleState& leader,
                            double gap_m, double reaction_s, double max_decel_m_s2) {
    if (gap_m < 0.0) {
        throw std::runtime_error("negative gap: vehicles overlap (collision state)");
    }
    const double v_l = leader.velocity_m_s;
    const double v_f = follower.velocity_m_s;
    const double denom = (v_l + v_f) / (2.0 * max_decel_m_s2) + reaction_s;
    return v_l + (gap_m - v_l * reaction_s) / denom;
}

std::vector<VehicleState> spawn_traffic(const RoadConfig& road, int n_ev,
                                        const std::vector<double>& class_weights,
                                        const RouteDistribution& routes,
                                        std::uint64_t rng_seed,
                                        const DrivingParams& driving) {
    road.validate();
    if (n_ev < 0) throw std::invalid_argument("n_ev must be >= 0");
    if (class_weights.size() != 3) {
        throw std::invalid_argument("class_weights must have 3 entries (car, bus, lorry)");
    }
    const double wsum = std::accumulate(class_weights.begin(), class_weights.end(), 0.0);
    if (!(wsum > 0.0)) throw std::invalid_argument("class weights must sum to > 0");

    auto rng = make_rng(rng_seed);
    std::discrete_distribution<int> class_dist(class_weights.begin(), class_weights.end());
    std::uniform_int_distribution<int> lane_dist(0, road.lane_count - 1);
    std::lognormal_distribution<double> route_dist(std::log(routes.route_median_m),
                                                   routes.sigma_log);
    std::lognormal_distribution<double> trip_dist(std::log(routes.supply_trip_median_m),
                                                  routes.sigma_log);
    std::uniform_real_distribution<double> speed_frac(0.3, 0.9);

    std::vector<VehicleState> vehicles(static_cast<std::size_t>(n_ev));
    std::vector<std::vector<int>> per_lane(static_cast<std::size_t>(road.lane_count));
    for (int i = 0; i < n_ev; ++i) {
        VehicleState& v = vehicles[static_cast<std::size_t>(i)];
        v.id = i;
        v.vehicle_class = static_cast<EVClass>(class_dist(rng));
        v.lane = lane_dist(rng);
        v.velocity_m_s = speed_frac(rng) * road.speed_limit(v.vehicle_class);
        v.route_length_m = route_dist(rng);
        v.supply_trip_m = trip_dist(rng);
        per_lane[static_cast<std::size_t>(v.lane)].push_back(i);
    }

    // Uniform placement with guaranteed headway: shrink the road by the sum
    // of the per-vehicle slots, draw sorted uniforms in the remainder, then
    // re-insert the slots cumulatively.
    for (const auto& lane : per_lane) {
        double slot_total = 0.0;
        for (int idx : lane) {
            slot_total += driving.vehicle_length(vehicles[static_cast<std::size_t>(idx)]
                                                     .vehicle_class) +
                          driving.min_gap_m;
        }
        if (slot_total > road.length_m) {
            throw std::runtime_error("road too short for requested traffic density");
        }
        std::vector<double> offsets(lane.size());
        std::uniform_real_distribution<double> u(0.0, road.length_m - slot_total);
        for (auto& o : offsets) o = u(rng);
        std::sort(offsets.begin(), offsets.end());
        double cum = 0.0;
        for (std::size_t k = 0; k < lane.size(); ++k) {
            VehicleState& v = vehicles[static_cast<std::size_t>(lane[k])];
            v.position_m = offsets[k] + cum;
            cum += driving.vehicle_length(v.vehicle_class) + driving.min_gap_m;
        }
    }
    return vehicles;
}

TrafficWorld::TrafficWorld(RoadConfig road, std::vector<VehicleState> vehicles,
                           RouteDistribution routes, std::uint64_t rng_seed,
                           DrivingParams driving)
    : road_(std::move(road)),
      vehicles_(std::move(vehicles)),
      routes_(routes),
      driving_(driving),
      rng_(make_rng(rng_seed)) {
    road_.validate();
    velocity_log_.resize(vehicles_.size());
    rebuild_lane_order();
}

void TrafficWorld::rebuild_lane_order() {
    lane_order_.assign(static_cast<std::size_t>(road_.lane_count), {});
    for (const auto& v : vehicles_) {
        lane_order_[static_cast<std::size_t>(v.lane)].push_back(v.id);
    }
    for (auto& lane : lane_order_) {
        std::sort(lane.begin(), lane.end(), [this](int a, int b) {
            return vehicles_[static_cast<std::size_t>(a)].position_m <
                   vehicles_[static_cast<std::size_t>(b)].position_m;
        });
    }
}

void TrafficWorld::step(double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
    dt_last_ = dt_s;

    std::vector<double> new_velocity(vehicles_.size(), 0.0);
    for (const auto& lane : lane_order_) {
        const std::size_t n = lane.size();
        for (std::size_t k = 0; k < n; ++k) {
            VehicleState& veh = vehicles_[static_cast<std::size_t>(lane[k])];
            const double limit = road_.speed_limit(veh.vehicle_class);
            double desired = std::min(veh.velocity_m_s + driving_.accel(veh.vehicle_class) * dt_s,
                                      limit);
            if (n > 1) {
                const VehicleState& lead = vehicles_[static_cast<std::size_t>(lane[(k + 1) % n])];
                double gap = lead.position_m - veh.position_m -
                             driving_.vehicle_length(lead.vehicle_class);
                if (k + 1 == n) gap += road_.length_m;  // ring wrap for the front vehicle
                gap = std::max(gap, 0.0);
                desired = std::min(desired,
                                   krauss_safe_velocity(veh, lead, gap, driving_.reaction_s,
                                                        driving_.max_decel_m_s2));
            }
            new_velocity[static_cast<std::size_t>(veh.id)] = std::max(desired, 0.0);
        }
    }

    // Advance, keeping the per-lane order collision-free: a follower may not
    // move past its leader's new rear bumper.
    for (const auto& lane : lane_order_) {
        const std::size_t n = lane.size();
        for (std::size_t k_it = n; k_it-- > 0;) {
            VehicleState& veh = vehicles_[static_cast<std::size_t>(lane[k_it])];
            double new_pos = veh.position_m + new_velocity[static_cast<std::size_t>(veh.id)] * dt_s;
            if (n > 1 && k_it + 1 < n) {
                const VehicleState& lead = vehicles_[static_cast<std::size_t>(lane[k_it + 1])];
                const double ceiling =
                    lead.position_m - driving_.vehicle_length(lead.vehicle_class);
                if (new_pos > ceiling) {
                    new_pos = std::max(ceiling, veh.position_m);
                }
            }
            const double moved = new_pos - veh.position_m;
            veh.velocity_m_s = std::max(moved / dt_s, 0.0);
            veh.position_m = new_pos;
            velocity_log_[static_cast<std::size_t>(veh.id)].push_back(veh.velocity_m_s);
        }

        // Recycle vehicles that completed the loop with fresh routes.
        for (int id : lane) {
            VehicleState& veh = vehicles_[static_cast<std::size_t>(id)];
            if (veh.position_m >= road_.length_m) {
                veh.position_m -= road_.length_m;
                std::lognormal_distribution<double> route_dist(
                    std::log(routes_.route_median_m), routes_.sigma_log);
                std::lognormal_distribution<double> trip_dist(
                    std::log(routes_.supply_trip_median_m), routes_.sigma_log);
                veh.route_length_m = route_dist(rng_);
                veh.supply_trip_m = trip_dist(rng_);
            }
        }
    }
    rebuild_lane_order();
}

void TrafficWorld::run(int steps, double dt_s) {
    for (int i = 0; i < steps; ++i) step(dt_s);
}

const std::vector<double>& TrafficWorld::velocity_history(int vehicle_id) const {
    return velocity_log_.at(static_cast<std::size_t>(vehicle_id));
}

VelocityTrace TrafficWorld::realized_route_trace(int vehicle_id, double route_length_m) const {
    const auto& history = velocity_log_.at(static_cast<std::size_t>(vehicle_id));
    std::vector<TraceSegment> segs;
    double covered = 0.0;
    double last_v = 0.0;
    for (double v : history) {
        if (covered >= route_length_m) break;
        const double d = v * dt_last_;
        if (d <= 0.0) continue;  // stationary steps add no distance (and no traction energy)
        const double len = std::min(d, route_length_m - covered);
        segs.push_back({len, v});
        covered += len;
        last_v = v;
    }
    if (covered < route_length_m) {
        // Not enough recorded travel; extend at the last moving speed.
        const double fill_v = last_v > 0.5
                                  ? last_v
                                  : road_.speed_limit(
                                        vehicles_[static_cast<std::size_t>(vehicle_id)]
                                            .vehicle_class);
        segs.push_back({route_length_m - covered, fill_v});
    }
    return VelocityTrace::from_segments(std::move(segs));
}

VelocityTrace forecast_route_velocities(const Forecaster& forecaster,
                                        const VelocityTrace& history,
                                        double route_length_m, double segment_length_m,
                                        double speed_limit_m_s) {
    forecaster.validate();
    if (!(route_length_m > 0.0)) throw std::invalid_argument("route length must be > 0");
    if (!(segment_length_m > 0.0)) throw std::invalid_argument("segment length must be > 0");

    auto constant_trace = [&](double v) {
        std::vector<TraceSegment> segs;
        double remaining = route_length_m;
        while (remaining > 0.0) {
            const double len = std::min(segment_length_m, remaining);
            segs.push_back({len, v});
            remaining -= len;
        }
        return VelocityTrace::from_segments(std::move(segs));
    };

    switch (forecaster.kind) {
        case ForecasterKind::Oracle: {
            if (history.empty()) return constant_trace(speed_limit_m_s);
            std::vector<TraceSegment> segs;
            double covered = 0.0;
            for (const auto& s : history.segments) {
                if (covered >= route_length_m) break;
                const double len = std::min(s.length_m, route_length_m - covered);
                segs.push_back({len, s.velocity_m_s});
                covered += len;
            }
            if (covered < route_length_m) {
                const double fill_v = history.segments.back().velocity_m_s > 0.5
                                          ? history.segments.back().velocity_m_s
                                          : speed_limit_m_s;
                segs.push_back({route_length_m - covered, fill_v});
            }
            return VelocityTrace::from_segments(std::move(segs));
        }
        case ForecasterKind::SpeedLimit:
            return constant_trace(speed_limit_m_s);
        case ForecasterKind::MovingAverage: {
            if (history.empty()) return constant_trace(speed_limit_m_s);
            const std::size_t w = std::min<std::size_t>(
                static_cast<std::size_t>(forecaster.window), history.segments.size());
            double sum = 0.0;
            for (std::size_t i = history.segments.size() - w; i < history.segments.size(); ++i) {
                sum += history.segments[i].velocity_m_s;
            }
            return constant_trace(sum / static_cast<double>(w));
        }
    }
    throw std::logic_error("unreachable forecaster kind");
}

}  // namespace evgrid
