#include "evgrid/config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "evgrid/errors.hpp"

namespace evgrid {

namespace {

using nlohmann::json;

double get_number(const json& j, const char* key, double fallback, const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) {
        throw ConfigError("field '" + ctx + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int fallback, const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) {
        throw ConfigError("field '" + ctx + key + "' must be an integer");
    }
    return j.at(key).get<int>();
}

std::uint64_t get_u64(const json& j, const char* key, std::uint64_t fallback,
                      const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_unsigned() && !j.at(key).is_number_integer()) {
        throw ConfigError("field '" + ctx + key + "' must be an unsigned integer");
    }
    return j.at(key).get<std::uint64_t>();
}

std::string get_string(const json& j, const char* key, const std::string& fallback,
                       const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) {
        throw ConfigError("field '" + ctx + key + "' must be a string");
    }
    return j.at(key).get<std::string>();
}

SOCPopulation soc_from_json(const json& j, SOCPopulation fallback, const std::string& ctx) {
    SOCPopulation s = fallback;
    s.median_wh = get_number(j, "median_wh", s.median_wh, ctx);
    s.sigma_log = get_number(j, "sigma_log", s.sigma_log, ctx);
    s.min_frac = get_number(j, "min_frac", s.min_frac, ctx);
    s.max_frac = get_number(j, "max_frac", s.max_frac, ctx);
    s.surplus_fraction = get_number(j, "surplus_fraction", s.surplus_fraction, ctx);
    return s;
}

json soc_to_json(const SOCPopulation& s) {
    return json{{"median_wh", s.median_wh},
                {"sigma_log", s.sigma_log},
                {"min_frac", s.min_frac},
                {"max_frac", s.max_frac},
                {"surplus_fraction", s.surplus_fraction}};
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("field '" + field + "' " + why);
    };
    if (n_ev < 0) fail("n_ev", "must be >= 0");
    if (rounds < 1) fail("rounds", "must be >= 1");
    if (traffic_seconds < 1) fail("traffic_seconds", "must be >= 1");
    if (!(forecast_segment_m > 0.0)) fail("forecast_segment_m", "must be > 0");
    if (!(market_unit_wh > 0.0)) fail("market_unit_wh", "must be > 0");
    if (road_charge < 0.0) fail("road_charge", "must be >= 0");
    if (coop_threshold < 1) fail("coop_threshold", "must be >= 1");

    try {
        road.validate();
    } catch (const std::exception& e) {
        fail("road", e.what());
    }
    try {
        environment.validate();
    } catch (const std::exception& e) {
        fail("environment", e.what());
    }
    try {
        fleet.validate();
    } catch (const std::exception& e) {
        fail("fleet", e.what());
    }
    try {
        grid.validate();
    } catch (const std::exception& e) {
        fail("grid", e.what());
    }
    try {
        forecaster.validate();
    } catch (const std::exception& e) {
        fail("forecaster", e.what());
    }

    const double wsum = class_weights[0] + class_weights[1] + class_weights[2];
    if (!(wsum > 0.0)) fail("class_weights", "must sum to > 0");
    for (double w : class_weights) {
        if (w < 0.0) fail("class_weights", "entries must be >= 0");
    }
    static const char* kClassNames[3] = {"soc.car", "soc.bus", "soc.lorry"};
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& s = soc[c];
        if (!(s.median_wh > 0.0)) fail(kClassNames[c], "median_wh must be > 0");
        if (!(s.sigma_log > 0.0)) fail(kClassNames[c], "sigma_log must be > 0");
        if (!(s.min_frac >= 0.0) || !(s.min_frac < s.max_frac) || !(s.max_frac <= 1.0)) {
            fail(kClassNames[c], "needs 0 <= min_frac < max_frac <= 1");
        }
        if (!(s.surplus_fraction > 0.0) || !(s.surplus_fraction <= 1.0)) {
            fail(kClassNames[c], "surplus_fraction must lie in (0, 1]");
        }
    }
    if (sweep_axes.p_ev.empty() || sweep_axes.m_g.empty() || sweep_axes.s_g_cap.empty() ||
        sweep_axes.n_ev.empty()) {
        fail("sweep", "axes must be non-empty");
    }
    if (sweep_axes.repetitions < 1) fail("sweep.repetitions", "must be >= 1");
    for (double v : sweep_axes.p_ev) {
        if (v < 0.0) fail("sweep.p_ev", "entries must be >= 0");
    }
    for (double v : sweep_axes.m_g) {
        if (v < 0.0) fail("sweep.m_g", "entries must be >= 0");
    }
    for (double v : sweep_axes.s_g_cap) {
        if (v < 0.0) fail("sweep.s_g_cap", "entries must be >= 0");
    }
    for (int v : sweep_axes.n_ev) {
        if (v < 0) fail("sweep.n_ev", "entries must be >= 0");
    }
}

std::array<double, 3> ScenarioConfig::normalized_class_weights() const {
    const double wsum = class_weights[0] + class_weights[1] + class_weights[2];
    return {class_weights[0] / wsum, class_weights[1] / wsum, class_weights[2] / wsum};
}

ScenarioConfig default_config() {
    ScenarioConfig cfg;
    cfg.soc[0] = SOCPopulation{5e3, 0.1, 0.2, 0.8, 0.2};    // car
    cfg.soc[1] = SOCPopulation{50e3, 0.1, 0.2, 0.8, 0.2};   // bus
    cfg.soc[2] = SOCPopulation{10e3, 0.1, 0.2, 0.8, 0.2};   // lorry
    cfg.sweep_axes.p_ev = {cfg.grid.p_ev};
    cfg.sweep_axes.m_g = {cfg.grid.m_g};
    cfg.sweep_axes.s_g_cap = {cfg.grid.s_g_cap};
    cfg.sweep_axes.n_ev = {cfg.n_ev};
    return cfg;
}

ScenarioConfig reference_scenario() {
    ScenarioConfig cfg = default_config();
    // Battery population with a realistic mix of demanders and sellers:
    // heavy-tailed remainders centred per class (cars low, buses high).
    cfg.soc[0] = SOCPopulation{10e3, 1.3, 0.2, 0.8, 0.2};    // car: 0.25 of capacity
    cfg.soc[1] = SOCPopulation{176e3, 1.3, 0.2, 0.8, 0.2};   // bus: 0.55 of capacity
    cfg.soc[2] = SOCPopulation{44.8e3, 1.3, 0.2, 0.8, 0.2};  // lorry: 0.40 of capacity
    cfg.grid.p_ev = 6.0;
    cfg.sweep_axes.p_ev = {6.0};
    return cfg;
}

ScenarioConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    ScenarioConfig cfg = default_config();

    cfg.seed = get_u64(j, "seed", cfg.seed, "");
    cfg.n_ev = get_int(j, "n_ev", cfg.n_ev, "");
    cfg.rounds = get_int(j, "rounds", cfg.rounds, "");
    cfg.traffic_seconds = get_int(j, "traffic_seconds", cfg.traffic_seconds, "");
    cfg.forecast_segment_m = get_number(j, "forecast_segment_m", cfg.forecast_segment_m, "");
    cfg.market_unit_wh = get_number(j, "market_unit_wh", cfg.market_unit_wh, "");
    cfg.road_charge = get_number(j, "road_charge", cfg.road_charge, "");
    cfg.coop_threshold = get_int(j, "coop_threshold", cfg.coop_threshold, "");
    cfg.output_dir = get_string(j, "output_dir", cfg.output_dir, "");

    if (j.contains("road")) {
        const auto& r = j.at("road");
        cfg.road.length_m = get_number(r, "length_m", cfg.road.length_m, "road.");
        cfg.road.lane_count = get_int(r, "lane_count", cfg.road.lane_count, "road.");
        cfg.road.speed_limit_car_m_s =
            get_number(r, "speed_limit_car_m_s", cfg.road.speed_limit_car_m_s, "road.");
        cfg.road.speed_limit_bus_m_s =
            get_number(r, "speed_limit_bus_m_s", cfg.road.speed_limit_bus_m_s, "road.");
        cfg.road.speed_limit_lorry_m_s =
            get_number(r, "speed_limit_lorry_m_s", cfg.road.speed_limit_lorry_m_s, "road.");
        if (r.contains("station_positions_m")) {
            if (!r.at("station_positions_m").is_array()) {
                throw ConfigError("field 'road.station_positions_m' must be an array");
            }
            cfg.road.station_positions_m =
                r.at("station_positions_m").get<std::vector<double>>();
        }
    }
    if (j.contains("routes")) {
        const auto& r = j.at("routes");
        cfg.routes.route_median_m =
            get_number(r, "route_median_m", cfg.routes.route_median_m, "routes.");
        cfg.routes.supply_trip_median_m = get_number(r, "supply_trip_median_m",
                                                     cfg.routes.supply_trip_median_m,
                                                     "routes.");
        cfg.routes.sigma_log = get_number(r, "sigma_log", cfg.routes.sigma_log, "routes.");
    }
    if (j.contains("environment")) {
        const auto& e = j.at("environment");
        cfg.environment.road_grade =
            get_number(e, "road_grade", cfg.environment.road_grade, "environment.");
        cfg.environment.air_density_kg_m3 = get_number(
            e, "air_density_kg_m3", cfg.environment.air_density_kg_m3, "environment.");
        cfg.environment.gravity_m_s2 =
            get_number(e, "gravity_m_s2", cfg.environment.gravity_m_s2, "environment.");
    }
    if (j.contains("fleet")) {
        const auto& f = j.at("fleet");
        cfg.fleet.n_wind = get_int(f, "n_wind", cfg.fleet.n_wind, "fleet.");
        cfg.fleet.n_pv = get_int(f, "n_pv", cfg.fleet.n_pv, "fleet.");
        cfg.fleet.wind_mean_wh = get_number(f, "wind_mean_wh", cfg.fleet.wind_mean_wh, "fleet.");
        cfg.fleet.pv_mean_wh = get_number(f, "pv_mean_wh", cfg.fleet.pv_mean_wh, "fleet.");
        cfg.fleet.seasonal_amplitude =
            get_number(f, "seasonal_amplitude", cfg.fleet.seasonal_amplitude, "fleet.");
        cfg.fleet.noise_sigma = get_number(f, "noise_sigma", cfg.fleet.noise_sigma, "fleet.");
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.grid.p_g = get_number(g, "p_g", cfg.grid.p_g, "grid.");
        cfg.grid.m_g = get_number(g, "m_g", cfg.grid.m_g, "grid.");
        cfg.grid.penalty_charge =
            get_number(g, "penalty_charge", cfg.grid.penalty_charge, "grid.");
        cfg.grid.p_ev = get_number(g, "p_ev", cfg.grid.p_ev, "grid.");
        cfg.grid.beta = get_number(g, "beta", cfg.grid.beta, "grid.");
        cfg.grid.a = get_number(g, "a", cfg.grid.a, "grid.");
        cfg.grid.b = get_number(g, "b", cfg.grid.b, "grid.");
        cfg.grid.loss_fraction = get_number(g, "loss_fraction", cfg.grid.loss_fraction, "grid.");
        cfg.grid.s_g_cap = get_number(g, "s_g_cap", cfg.grid.s_g_cap, "grid.");
        cfg.grid.u_min = get_number(g, "u_min", cfg.grid.u_min, "grid.");
    }
    if (j.contains("forecaster")) {
        const auto& f = j.at("forecaster");
        const std::string kind = get_string(f, "kind", "oracle", "forecaster.");
        if (kind == "oracle") {
            cfg.forecaster.kind = ForecasterKind::Oracle;
        } else if (kind == "speed_limit") {
            cfg.forecaster.kind = ForecasterKind::SpeedLimit;
        } else if (kind == "moving_average") {
            cfg.forecaster.kind = ForecasterKind::MovingAverage;
        } else {
            throw ConfigError("field 'forecaster.kind' must be one of "
                              "oracle|speed_limit|moving_average");
        }
        cfg.forecaster.window = get_int(f, "window", cfg.forecaster.window, "forecaster.");
    }
    if (j.contains("class_weights")) {
        if (!j.at("class_weights").is_array() || j.at("class_weights").size() != 3) {
            throw ConfigError("field 'class_weights' must be an array of 3 numbers");
        }
        for (std::size_t i = 0; i < 3; ++i) {
            cfg.class_weights[i] = j.at("class_weights").at(i).get<double>();
        }
    }
    if (j.contains("soc")) {
        const auto& s = j.at("soc");
        if (s.contains("car")) cfg.soc[0] = soc_from_json(s.at("car"), cfg.soc[0], "soc.car.");
        if (s.contains("bus")) cfg.soc[1] = soc_from_json(s.at("bus"), cfg.soc[1], "soc.bus.");
        if (s.contains("lorry")) {
            cfg.soc[2] = soc_from_json(s.at("lorry"), cfg.soc[2], "soc.lorry.");
        }
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        auto read_axis = [&](const char* key, auto& target) {
            if (!s.contains(key)) return;
            if (!s.at(key).is_array()) {
                throw ConfigError(std::string("field 'sweep.") + key + "' must be an array");
            }
            target = s.at(key).get<std::decay_t<decltype(target)>>();
        };
        read_axis("p_ev", cfg.sweep_axes.p_ev);
        read_axis("m_g", cfg.sweep_axes.m_g);
        read_axis("s_g_cap", cfg.sweep_axes.s_g_cap);
        read_axis("n_ev", cfg.sweep_axes.n_ev);
        cfg.sweep_axes.repetitions =
            get_int(s, "repetitions", cfg.sweep_axes.repetitions, "sweep.");
    }

    cfg.validate();
    return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["n_ev"] = cfg.n_ev;
    j["rounds"] = cfg.rounds;
    j["traffic_seconds"] = cfg.traffic_seconds;
    j["forecast_segment_m"] = cfg.forecast_segment_m;
    j["market_unit_wh"] = cfg.market_unit_wh;
    j["road_charge"] = cfg.road_charge;
    j["coop_threshold"] = cfg.coop_threshold;
    j["output_dir"] = cfg.output_dir;
    j["road"] = json{{"length_m", cfg.road.length_m},
                     {"lane_count", cfg.road.lane_count},
                     {"speed_limit_car_m_s", cfg.road.speed_limit_car_m_s},
                     {"speed_limit_bus_m_s", cfg.road.speed_limit_bus_m_s},
                     {"speed_limit_lorry_m_s", cfg.road.speed_limit_lorry_m_s},
                     {"station_positions_m", cfg.road.station_positions_m}};
    j["routes"] = json{{"route_median_m", cfg.routes.route_median_m},
                       {"supply_trip_median_m", cfg.routes.supply_trip_median_m},
                       {"sigma_log", cfg.routes.sigma_log}};
    j["environment"] = json{{"road_grade", cfg.environment.road_grade},
                            {"air_density_kg_m3", cfg.environment.air_density_kg_m3},
                            {"gravity_m_s2", cfg.environment.gravity_m_s2}};
    j["fleet"] = json{{"n_wind", cfg.fleet.n_wind},
                      {"n_pv", cfg.fleet.n_pv},
                      {"wind_mean_wh", cfg.fleet.wind_mean_wh},
                      {"pv_mean_wh", cfg.fleet.pv_mean_wh},
                      {"seasonal_amplitude", cfg.fleet.seasonal_amplitude},
                      {"noise_sigma", cfg.fleet.noise_sigma}};
    j["grid"] = json{{"p_g", cfg.grid.p_g},
                     {"m_g", cfg.grid.m_g},
                     {"penalty_charge", cfg.grid.penalty_charge},
                     {"p_ev", cfg.grid.p_ev},
                     {"beta", cfg.grid.beta},
                     {"a", cfg.grid.a},
                     {"b", cfg.grid.b},
                     {"loss_fraction", cfg.grid.loss_fraction},
                     {"s_g_cap", cfg.grid.s_g_cap},
                     {"u_min", cfg.grid.u_min}};
    const char* kind = cfg.forecaster.kind == ForecasterKind::Oracle        ? "oracle"
                       : cfg.forecaster.kind == ForecasterKind::SpeedLimit ? "speed_limit"
                                                                            : "moving_average";
    j["forecaster"] = json{{"kind", kind}, {"window", cfg.forecaster.window}};
    j["class_weights"] = cfg.class_weights;
    j["soc"] = json{{"car", soc_to_json(cfg.soc[0])},
                    {"bus", soc_to_json(cfg.soc[1])},
                    {"lorry", soc_to_json(cfg.soc[2])}};
    j["sweep"] = json{{"p_ev", cfg.sweep_axes.p_ev},
                      {"m_g", cfg.sweep_axes.m_g},
                      {"s_g_cap", cfg.sweep_axes.s_g_cap},
                      {"n_ev", cfg.sweep_axes.n_ev},
                      {"repetitions", cfg.sweep_axes.repetitions}};
    return j;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    return fnv1a(config_to_json(cfg).dump());
}

json snapshot_to_json(const MarketSnapshot& snapshot) {
    json offers = json::array();
    for (const auto& o : snapshot.offers) {
        offers.push_back(json{{"ev_id", o.ev_id},
                              {"offered", o.offered},
                              {"trip_m", o.trip_m},
                              {"delta", o.delta}});
    }
    return json{{"offers", offers},
                {"total_demand", snapshot.total_demand},
                {"renewables", snapshot.renewables},
                {"grid",
                 {{"p_g", snapshot.grid.p_g},
                  {"m_g", snapshot.grid.m_g},
                  {"penalty_charge", snapshot.grid.penalty_charge},
                  {"p_ev", snapshot.grid.p_ev},
                  {"beta", snapshot.grid.beta},
                  {"a", snapshot.grid.a},
                  {"b", snapshot.grid.b},
                  {"loss_fraction", snapshot.grid.loss_fraction},
                  {"s_g_cap", snapshot.grid.s_g_cap},
                  {"u_min", snapshot.grid.u_min}}}};
}

MarketSnapshot snapshot_from_json(const json& j) {
    MarketSnapshot s;
    s.total_demand = get_number(j, "total_demand", 0.0, "");
    s.renewables = get_number(j, "renewables", 0.0, "");
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        s.grid.p_g = get_number(g, "p_g", s.grid.p_g, "grid.");
        s.grid.m_g = get_number(g, "m_g", s.grid.m_g, "grid.");
        s.grid.penalty_charge = get_number(g, "penalty_charge", s.grid.penalty_charge, "grid.");
        s.grid.p_ev = get_number(g, "p_ev", s.grid.p_ev, "grid.");
        s.grid.beta = get_number(g, "beta", s.grid.beta, "grid.");
        s.grid.a = get_number(g, "a", s.grid.a, "grid.");
        s.grid.b = get_number(g, "b", s.grid.b, "grid.");
        s.grid.loss_fraction = get_number(g, "loss_fraction", s.grid.loss_fraction, "grid.");
        s.grid.s_g_cap = get_number(g, "s_g_cap", s.grid.s_g_cap, "grid.");
        s.grid.u_min = get_number(g, "u_min", s.grid.u_min, "grid.");
    }
    if (j.contains("offers")) {
        if (!j.at("offers").is_array()) {
            throw ConfigError("field 'offers' must be an array");
        }
        for (const auto& o : j.at("offers")) {
            SupplyOffer offer;
            offer.ev_id = get_int(o, "ev_id", 0, "offers.");
            offer.offered = get_number(o, "offered", 0.0, "offers.");
            offer.trip_m = get_number(o, "trip_m", 0.0, "offers.");
            offer.delta = get_number(o, "delta", 0.0, "offers.");
            s.offers.push_back(offer);
        }
    }
    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid snapshot: ") + e.what());
    }
    return s;
}

json solution_to_json(const DispatchSolution& solution) {
    json accepted = json::object();
    for (const auto& [id, s] : solution.accepted) {
        accepted[std::to_string(id)] = s;
    }
    return json{{"status", solution.status == SolveStatus::Optimal ? "optimal" : "infeasible"},
                {"s_g", solution.s_g},
                {"accepted", accepted},
                {"cost", solution.cost},
                {"nodes_explored", solution.nodes_explored}};
}

}  // namespace evgrid
