#include "evgrid/game.hpp"

#include <cmath>
#include <stdexcept>

#include "evgrid/rng.hpp"

namespace evgrid {

void GameConfig::validate() const {
    if (road_charge < 0.0) throw std::invalid_argument("road_charge must be >= 0");
    if (n_threshold < 1) throw std::invalid_argument("n_threshold must be >= 1");
    if (players.empty()) throw std::invalid_argument("players must be non-empty");
}

int ActionProfile::n_coop() const {
    int n = 0;
    for (Action a : actions) {
        if (a == Action::Coop) ++n;
    }
    return n;
}

void ActionProfile::validate(const GameConfig& config) const {
    if (actions.size() != config.players.size()) {
        throw std::invalid_argument("profile size does not match player count");
    }
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (actions[i] == Action::Coop && !config.players[i].has_surplus) {
            throw std::invalid_argument("player without surplus cannot cooperate");
        }
    }
}

double payoff(const GameConfig& config, const ActionProfile& profile, int player_idx) {
    config.validate();
    profile.validate(config);
    if (player_idx < 0 || static_cast<std::size_t>(player_idx) >= profile.actions.size()) {
        throw std::out_of_range("player index out of range");
    }
    const int coop = profile.n_coop();
    if (coop >= config.n_threshold) {
        return -config.road_charge / coop;
    }
    if (profile.actions[static_cast<std::size_t>(player_idx)] == Action::Coop) {
        return config.players[static_cast<std::size_t>(player_idx)].utility_if_coop;
    }
    return -config.road_charge;
}

Action best_response(const GameConfig& config, int player_idx,
                     const ActionProfile& others) {
    if (player_idx < 0 || static_cast<std::size_t>(player_idx) >= config.players.size()) {
        throw std::out_of_range("player index out of range");
    }
    if (!config.players[static_cast<std::size_t>(player_idx)].has_surplus) {
        throw std::invalid_argument("best response queried for a player without surplus");
    }
    ActionProfile trial = others;
    trial.actions[static_cast<std::size_t>(player_idx)] = Action::Coop;
    const double coop_value = payoff(config, trial, player_idx);
    trial.actions[static_cast<std::size_t>(player_idx)] = Action::NonCoop;
    const double defect_value = payoff(config, trial, player_idx);
    return coop_value >= defect_value ? Action::Coop : Action::NonCoop;
}

double conspiracy_threshold(double road_charge, int n_coop) {
    if (n_coop < 1) throw std::invalid_argument("n_coop must be >= 1");
    return road_charge - road_charge / n_coop;
}

double expected_conspiracy_gain(double q, double q_prime, int n_threshold, double u_i,
                                double road_charge, int n_coop,
                                ConspiracyExponent exponent) {
    if (q < 0.0 || q > 1.0 || q_prime < 0.0 || q_prime > 1.0) {
        throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
    if (n_coop < 1) throw std::invalid_argument("n_coop must be >= 1");
    const double base = exponent == ConspiracyExponent::Knowledge ? q_prime : q;
    const double knowledge = std::pow(base, n_threshold);
    return -q * knowledge * (u_i - road_charge + road_charge / n_coop);
}

TournamentResult simulate_tournament(const GameConfig& config, int rounds,
                                     std::uint64_t rng_seed) {
    config.validate();
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");

    const std::size_t n = config.players.size();
    auto rng = make_rng(derive_seed(rng_seed, rng_stream::game));
    std::bernoulli_distribution coin(0.5);

    ActionProfile profile;
    profile.actions.assign(n, Action::NonCoop);
    for (std::size_t i = 0; i < n; ++i) {
        if (config.players[i].has_surplus && coin(rng)) {
            profile.actions[i] = Action::Coop;
        }
    }

    TournamentResult result;
    result.cumulative_payoff.assign(n, 0.0);
    result.cooperation_rate.assign(n, 0.0);
    result.n_coop_history.reserve(static_cast<std::size_t>(rounds));

    for (int r = 0; r < rounds; ++r) {
        ActionProfile next;
        next.actions.assign(n, Action::NonCoop);
        for (std::size_t i = 0; i < n; ++i) {
            if (config.players[i].has_surplus) {
                next.actions[i] = best_response(config, static_cast<int>(i), profile);
            }
        }
        profile = std::move(next);
        result.n_coop_history.push_back(profile.n_coop());
        for (std::size_t i = 0; i < n; ++i) {
            result.cumulative_payoff[i] += payoff(config, profile, static_cast<int>(i));
            if (profile.actions[i] == Action::Coop) {
                result.cooperation_rate[i] += 1.0;
            }
        }
    }
    for (auto& rate : result.cooperation_rate) rate /= rounds;
    return result;
}

}  // namespace evgrid
