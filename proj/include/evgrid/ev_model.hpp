#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace evgrid {

enum class EVClass { Car, Bus, Lorry };

const char* to_string(EVClass c);
EVClass ev_class_from_string(const std::string& s);

/// Static vehicle parameters per vehicle class.
struct EVSpec {
    EVClass vehicle_class = EVClass::Car;
    double mass_kg = 0.0;
    double frontal_area_m2 = 0.0;
    double rolling_resist = 0.0;    // rolling resistance coefficient
    double drag_coeff = 0.0;        // aerodynamic drag coefficient
    double wheel_radius_m = 0.0;
    double gear_ratio = 0.0;
    double motor_power_w = 0.0;
    double battery_capacity_wh = 0.0;
    double per_unit_consumption = 0.0;  // travel cost rate per metre of supply trip

    void validate() const;
};

// Presets with stock parameters for the three supported classes.
EVSpec car_spec();
EVSpec bus_spec();
EVSpec lorry_spec();
const EVSpec& spec_for(EVClass c);

struct Environment {
    double road_grade = 0.0;          // slope ratio, |grade| < 1
    double air_density_kg_m3 = 1.28;
    double gravity_m_s2 = 9.81;

    void validate() const;
};

struct TraceSegment {
    double length_m = 0.0;
    double velocity_m_s = 0.0;
};

/// A planned route discretized into segments of known length, each with a
/// (predicted or realized) travel velocity.
struct VelocityTrace {
    std::vector<TraceSegment> segments;
    double total_length_m = 0.0;
    double total_time_s = 0.0;

    static VelocityTrace from_segments(std::vector<TraceSegment> segs);
    void validate() const;
    bool empty() const { return segments.empty(); }
};

/// Battery state used to classify an EV as demander or surplus supplier.
struct SOCState {
    double current_wh = 0.0;
    double min_wh = 0.0;
    double max_wh = 0.0;
    double surplus_fraction = 0.2;  // share of remaining charge offered for sale

    void validate(double battery_capacity_wh) const;
};

struct EnergyPosition {
    double demand_wh = 0.0;
    double supply_wh = 0.0;
    double remaining_wh = 0.0;
    bool battery_infeasible = false;  // projected remaining charge below zero
};

/// Knobs for the route-energy integration.
struct EnergyModelConfig {
    // When true, every segment's power is weighted by the whole-route travel
    // time instead of the segment's own time. Kept selectable for
    // comparison; the default is the dimensionally consistent per-segment
    // weighting.
    bool literal_route_time = false;
    double regen_efficiency = 0.0;  // 0 disables recuperation on braking segments
    double eta_floor = 0.05;
    double velocity_floor_m_s = 0.1;  // avoids division by zero on stopped segments
};

struct Efficiency {
    double value = 0.0;
    bool saturated = false;  // raw conversion ratio fell outside (floor, 1]
};

struct RouteEnergy {
    double energy_wh = 0.0;
    std::size_t saturated_segments = 0;
    std::size_t regen_segments = 0;
};

/// Longitudinal traction force over one segment, including grade, rolling,
/// aerodynamic, and inertial terms. Negative while decelerating.
double traction_force(const EVSpec& spec, const Environment& env, double v_prev_m_s,
                      double v_m_s, double segment_length_m);

/// Electrical-to-mechanical conversion ratio at an operating point, clamped
/// into (eta_floor, 1]. Throws when v == 0 (callers treat stopped segments
/// as consuming no traction power).
Efficiency drivetrain_efficiency(const EVSpec& spec, double force_n, double v_m_s,
                                 double eta_floor = 0.05);

/// Total electrical energy for a route trace, in Wh.
RouteEnergy route_energy(const EVSpec& spec, const Environment& env,
                         const VelocityTrace& trace, const EnergyModelConfig& cfg = {});

/// Classifies the battery position after a planned route: demand when the
/// projected remainder dips to the floor, surplus offer when it clears the
/// ceiling, neither otherwise.
EnergyPosition energy_position(const SOCState& soc, double route_energy_wh);

}  // namespace evgrid
