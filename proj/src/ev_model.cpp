#include "evgrid/ev_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evgrid {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

void require_positive(double v, const char* what) {
    require_finite(v, what);
    if (v <= 0.0) {
        throw std::invalid_argument(std::string(what) + " must be > 0");
    }
}

}  // namespace

const char* to_string(EVClass c) {
    switch (c) {
        case EVClass::Car: return "car";
        case EVClass::Bus: return "bus";
        case EVClass::Lorry: return "lorry";
    }
    return "unknown";
}

EVClass ev_class_from_string(const std::string& s) {
    if (s == "car") return EVClass::Car;
    if (s == "bus") return EVClass::Bus;
    if (s == "lorry") return EVClass::Lorry;
    throw std::invalid_argument("unknown EV class: " + s);
}

void EVSpec::validate() const {
    require_positive(mass_kg, "mass_kg");
    require_positive(frontal_area_m2, "frontal_area_m2");
    require_positive(rolling_resist, "rolling_resist");
    require_positive(drag_coeff, "drag_coeff");
    require_positive(wheel_radius_m, "wheel_radius_m");
    require_positive(gear_ratio, "gear_ratio");
    require_positive(motor_power_w, "motor_power_w");
    require_positive(battery_capacity_wh, "battery_capacity_wh");
    require_positive(per_unit_consumption, "per_unit_consumption");
}

EVSpec car_spec() {
    EVSpec s;
    s.vehicle_class = EVClass::Car;
    s.mass_kg = 1619.0;
    s.frontal_area_m2 = 2.56;
    s.rolling_resist = 0.01;
    s.drag_coeff = 0.28;
    s.wheel_radius_m = 0.2;
    s.gear_ratio = 7.94;
    s.motor_power_w = 110e3;
    s.battery_capacity_wh = 40e3;
    s.per_unit_consumption = 0.1;
    return s;
}

EVSpec bus_spec() {
    EVSpec s;
    s.vehicle_class = EVClass::Bus;
    s.mass_kg = 2375.0;
    s.frontal_area_m2 = 2.56;
    s.rolling_resist = 0.08;
    s.drag_coeff = 0.6;
    s.wheel_radius_m = 0.28;
    s.gear_ratio = 3.98;
    s.motor_power_w = 200e3;
    s.battery_capacity_wh = 320e3;
    s.per_unit_consumption = 0.1;
    return s;
}

EVSpec lorry_spec() {
    EVSpec s;
    s.vehicle_class = EVClass::Lorry;
    s.mass_kg = 3556.0;
    s.frontal_area_m2 = 5.98;
    s.rolling_resist = 0.011;
    s.drag_coeff = 0.8;
    s.wheel_radius_m = 0.28;
    s.gear_ratio = 3.73;
    s.motor_power_w = 220e3;
    s.battery_capacity_wh = 112e3;
    s.per_unit_consumption = 0.1;
    return s;
}

const EVSpec& spec_for(EVClass c) {
    static const EVSpec car = car_spec();
    static const EVSpec bus = bus_spec();
    static const EVSpec lorry = lorry_spec();
    switch (c) {
        case EVClass::Bus: return bus;
        case EVClass::Lorry: return lorry;
        case EVClass::Car: break;
    }
    return car;
}

void Environment::validate() const {
    require_positive(air_density_kg_m3, "air_density_kg_m3");
    require_positive(gravity_m_s2, "gravity_m_s2");
    require_finite(road_grade, "road_grade");
    if (std::abs(road_grade) >= 1.0) {
        throw std::invalid_argument("road_grade must satisfy |grade| < 1");
    }
}

VelocityTrace VelocityTrace::from_segments(std::vector<TraceSegment> segs) {
    VelocityTrace t;
    t.segments = std::move(segs);
    for (const auto& s : t.segments) {
        t.total_length_m += s.length_m;
        if (s.velocity_m_s > 0.0) {
            t.total_time_s += s.length_m / s.velocity_m_s;
        }
    }
    t.validate();
    return t;
}

void VelocityTrace::validate() const {
    double sum = 0.0;
    for (const auto& s : segments) {
        if (!(s.length_m > 0.0) || !std::isfinite(s.length_m)) {
            throw std::invalid_argument("trace segment length must be > 0 and finite");
        }
        if (s.velocity_m_s < 0.0 || !std::isfinite(s.velocity_m_s)) {
            throw std::invalid_argument("trace segment velocity must be >= 0 and finite");
        }
        sum += s.length_m;
    }
    const double scale = std::max(std::abs(sum), std::abs(total_length_m));
    if (scale > 0.0 && std::abs(sum - total_length_m) > 1e-9 * scale) {
        throw std::invalid_argument("trace segment lengths do not sum to total_length_m");
    }
}

void SOCState::validate(double battery_capacity_wh) const {
    if (!(min_wh >= 0.0) || !(min_wh < max_wh) || !(max_wh <= battery_capacity_wh)) {
        throw std::invalid_argument("SOC limits must satisfy 0 <= min < max <= capacity");
    }
    if (!(current_wh >= 0.0) || !(current_wh <= battery_capacity_wh)) {
        throw std::invalid_argument("current SOC must lie within [0, capacity]");
    }
    if (!(surplus_fraction > 0.0) || !(surplus_fraction <= 1.0)) {
        throw std::invalid_argument("surplus_fraction must lie in (0, 1]");
    }
}

double traction_force(const EVSpec& spec, const Environment& env, double v_prev_m_s,
                      double v_m_s, double segment_length_m) {
    require_finite(v_prev_m_s, "v_prev");
    require_finite(v_m_s, "v");
    require_positive(segment_length_m, "segment_length_m");
    if (v_prev_m_s < 0.0 || v_m_s < 0.0) {
        throw std::invalid_argument("velocities must be >= 0");
    }

    const double grade_term =
        spec.mass_kg * env.gravity_m_s2 * std::sin(env.road_grade);
    const double rolling_term =
        spec.mass_kg * env.gravity_m_s2 * std::cos(env.road_grade) * spec.rolling_resist;
    const double aero_term =
        0.5 * env.air_density_kg_m3 * spec.frontal_area_m2 * spec.drag_coeff * v_m_s * v_m_s;
    const double accel = (v_m_s * v_m_s - v_prev_m_s * v_prev_m_s) / (2.0 * segment_length_m);
    const double inertial_term = spec.mass_kg * accel;

    return grade_term + rolling_term + aero_term + inertial_term;
}

Efficiency drivetrain_efficiency(const EVSpec& spec, double force_n, double v_m_s,
                                 double eta_floor) {
    require_finite(force_n, "force_n");
    require_finite(v_m_s, "v");
    if (v_m_s <= 0.0) {
        throw std::invalid_argument("drivetrain efficiency undefined at zero velocity");
    }
    // Torque * rotational speed cancels the gearing: eta = F*v / MP.
    const double raw = force_n * v_m_s / spec.motor_power_w;
    Efficiency eff;
    if (raw > 1.0) {
        eff.value = 1.0;
        eff.saturated = true;
    } else if (raw <= eta_floor) {
        eff.value = eta_floor;
        eff.saturated = true;
    } else {
        eff.value = raw;
    }
    return eff;
}

RouteEnergy route_energy(const EVSpec& spec, const Environment& env,
                         const VelocityTrace& trace, const EnergyModelConfig& cfg) {
    trace.validate();
    RouteEnergy result;
    if (trace.segments.empty()) {
        return result;
    }

    // Total route time, only needed for the literal whole-route weighting.
    double total_time_s = 0.0;
    if (cfg.literal_route_time) {
        for (const auto& seg : trace.segments) {
            total_time_s += seg.length_m / std::max(seg.velocity_m_s, cfg.velocity_floor_m_s);
        }
    }

    double energy_j = 0.0;
    double v_prev = trace.segments.front().velocity_m_s;
    for (const auto& seg : trace.segments) {
        const double v = seg.velocity_m_s;
        const double dt =
            cfg.literal_route_time
                ? total_time_s
                : seg.length_m / std::max(v, cfg.velocity_floor_m_s);
        const double force = traction_force(spec, env, v_prev, v, seg.length_m);
        v_prev = v;

        if (v <= 0.0) {
            continue;  // no traction power while stationary
        }
        if (force < 0.0) {
            ++result.regen_segments;
            if (cfg.regen_efficiency > 0.0) {
                energy_j += cfg.regen_efficiency * force * v * dt;
            }
            continue;
        }
        const Efficiency eta = drivetrain_efficiency(spec, force, v, cfg.eta_floor);
        if (eta.saturated) {
            ++result.saturated_segments;
        }
        energy_j += force * v / eta.value * dt;
    }

    result.energy_wh = energy_j / 3600.0;
    if (!std::isfinite(result.energy_wh)) {
        throw std::runtime_error("route energy is not finite");
    }
    return result;
}

EnergyPosition energy_position(const SOCState& soc, double route_energy_wh) {
    if (!(route_energy_wh >= 0.0) || !std::isfinite(route_energy_wh)) {
        throw std::invalid_argument("route energy must be >= 0 and finite");
    }
    EnergyPosition pos;
    pos.remaining_wh = soc.current_wh - route_energy_wh;
    pos.battery_infeasible = pos.remaining_wh < 0.0;

    if (pos.remaining_wh <= soc.min_wh) {
        // Recharge to the ceiling. Clamped at zero for the corner where the
        // current charge already sits above the ceiling but a long route
        // drains it below the floor.
        pos.demand_wh = std::max(0.0, soc.max_wh - soc.current_wh);
    } else if (pos.remaining_wh >= soc.max_wh) {
        pos.supply_wh = soc.surplus_fraction * pos.remaining_wh;
    }
    return pos;
}

}  // namespace evgrid
