#pragma once

#include <cstdint>
#include <vector>

namespace evgrid {

enum class Action : unsigned char { Coop, NonCoop };

struct Player {
    double utility_if_coop = 0.0;
    bool has_surplus = false;
};

struct GameConfig {
    double road_charge = 150.0;
    int n_threshold = 5;  // cooperator count at which the charge is shared
    std::vector<Player> players;

    void validate() const;
};

struct ActionProfile {
    std::vector<Action> actions;

    int n_coop() const;
    void validate(const GameConfig& config) const;
};

/// Payoff for one player under the shared-road-charge rule: when enough
/// players cooperate everyone splits the charge, otherwise cooperators keep
/// their selling utility and everyone else pays the full charge.
double payoff(const GameConfig& config, const ActionProfile& profile, int player_idx);

/// The action maximising the player's payoff given the others' choices.
/// Ties resolve to Coop.
Action best_response(const GameConfig& config, int player_idx,
                     const ActionProfile& others);

/// Minimum selling utility at which staying cooperative beats defecting
/// even with advance knowledge of the others' actions.
double conspiracy_threshold(double road_charge, int n_coop);

enum class ConspiracyExponent { Knowledge, Population };

/// Expected advantage of conspiring (acting on leaked knowledge of the
/// cooperator count) over acting blindly. Non-positive exactly when the
/// utility clears the conspiracy threshold.
double expected_conspiracy_gain(double q, double q_prime, int n_threshold, double u_i,
                                double road_charge, int n_coop,
                                ConspiracyExponent exponent = ConspiracyExponent::Knowledge);

struct TournamentResult {
    std::vector<double> cumulative_payoff;
    std::vector<double> cooperation_rate;
    std::vector<int> n_coop_history;
};

/// Iterated play: each round the surplus holders best-respond to the
/// previous round's profile. Deterministic for a fixed seed.
TournamentResult simulate_tournament(const GameConfig& config, int rounds,
                                     std::uint64_t rng_seed);

}  // namespace evgrid
