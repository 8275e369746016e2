#include "evgrid/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace evgrid {

namespace {

constexpr double kEps = 1e-9;

struct OfferBounds {
    double lo = 0.0;
    double hi = 0.0;
    bool usable = false;  // nonempty utility-feasible interval
};

std::vector<OfferBounds> compute_bounds(const MarketSnapshot& snapshot) {
    std::vector<OfferBounds> bounds(snapshot.offers.size());
    for (std::size_t i = 0; i < snapshot.offers.size(); ++i) {
        const auto interval = feasible_supply_interval(snapshot.grid, snapshot.offers[i]);
        if (interval) {
            bounds[i] = {interval->lo, interval->hi, true};
        }
    }
    return bounds;
}

struct FillResult {
    bool feasible = false;
    double cost = 0.0;
    double s_g = 0.0;
    std::vector<double> supplies;
};

// Minimum-cost continuous completion for one activation pattern. Active
// offers must ship at least their floor; Free offers may ship anything up
// to their ceiling (the relaxed problem); Inactive offers ship nothing.
// Residual demand is covered cheapest-per-delivered-unit first, so the
// result is the exact optimum of the continuous problem.
FillResult fill_dispatch(const MarketSnapshot& snapshot,
                         const std::vector<OfferBounds>& bounds,
                         const std::vector<BranchState>& states) {
    const GridParams& g = snapshot.grid;
    const double deliver_per_unit = 1.0 - g.loss_fraction;
    const double ev_unit_cost = g.p_ev;
    const double grid_delivered_cost = g.grid_unit_cost();

    FillResult r;
    r.supplies.assign(snapshot.offers.size(), 0.0);

    double covered = 0.0;
    double cost = 0.0;
    for (std::size_t i = 0; i < snapshot.offers.size(); ++i) {
        if (states[i] == BranchState::Active) {
            r.supplies[i] = bounds[i].lo;
            covered += bounds[i].lo;
            cost += ev_unit_cost * bounds[i].lo;
        }
    }

    const double need = std::max(0.0, snapshot.total_demand - snapshot.renewables);
    double remaining = need - covered;

    auto fill_from_offers = [&](double want) {
        double taken = 0.0;
        for (std::size_t i = 0; i < snapshot.offers.size() && want > taken + kEps; ++i) {
            double headroom = 0.0;
            if (states[i] == BranchState::Active) {
                headroom = bounds[i].hi - r.supplies[i];
            } else if (states[i] == BranchState::Free && bounds[i].usable) {
                headroom = bounds[i].hi - r.supplies[i];
            }
            if (headroom <= 0.0) continue;
            const double take = std::min(headroom, want - taken);
            r.supplies[i] += take;
            taken += take;
            cost += ev_unit_cost * take;
        }
        return taken;
    };

    auto fill_from_grid = [&](double want) {
        const double max_delivered = g.s_g_cap * deliver_per_unit;
        const double delivered = std::min(want, max_delivered - r.s_g * deliver_per_unit);
        if (delivered <= 0.0) return 0.0;
        const double generated = delivered / deliver_per_unit;
        r.s_g += generated;
        cost += (g.p_g + g.m_g * g.penalty_charge) * generated;
        return delivered;
    };

    if (remaining > kEps) {
        if (ev_unit_cost <= grid_delivered_cost) {
            remaining -= fill_from_offers(remaining);
            if (remaining > kEps) remaining -= fill_from_grid(remaining);
        } else {
            remaining -= fill_from_grid(remaining);
            if (remaining > kEps) remaining -= fill_from_offers(remaining);
        }
        if (remaining > kEps) {
            return r;  // infeasible: all sources exhausted
        }
    }

    r.feasible = true;
    r.cost = cost;
    return r;
}

bool integral(const MarketSnapshot& snapshot, const std::vector<double>& supplies,
              const std::vector<OfferBounds>& bounds,
              const std::vector<BranchState>& states, std::size_t* violator) {
    // A Free offer violates semicontinuity when it ships a positive volume
    // below its floor. The cheapest-first fill leaves at most one such
    // offer, but the scan is written generally: most-fractional activation
    // indicator first, ties broken toward the larger offer.
    bool ok = true;
    double best_rank = std::numeric_limits<double>::infinity();
    double best_offered = -1.0;
    for (std::size_t i = 0; i < supplies.size(); ++i) {
        if (states[i] != BranchState::Free || !bounds[i].usable) continue;
        const double s = supplies[i];
        if (s > kEps && s < bounds[i].lo - kEps) {
            ok = false;
            const double rank = std::abs(s / bounds[i].lo - 0.5);
            const double offered = snapshot.offers[i].offered;
            if (rank < best_rank - 1e-12 ||
                (rank <= best_rank + 1e-12 && offered > best_offered)) {
                best_rank = std::min(rank, best_rank);
                best_offered = offered;
                if (violator != nullptr) *violator = i;
            }
        }
    }
    return ok;
}

DispatchSolution make_solution(const MarketSnapshot& snapshot, const FillResult& fill) {
    DispatchSolution sol;
    sol.status = SolveStatus::Optimal;
    sol.s_g = fill.s_g;
    sol.cost = fill.cost;
    for (std::size_t i = 0; i < fill.supplies.size(); ++i) {
        if (fill.supplies[i] > 0.0) {
            sol.accepted[snapshot.offers[i].ev_id] = fill.supplies[i];
        }
    }
    return sol;
}

}  // namespace

void GridParams::validate() const {
    auto nonneg = [](double v, const char* what) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + " must be >= 0 and finite");
        }
    };
    nonneg(p_g, "p_g");
    nonneg(m_g, "m_g");
    nonneg(penalty_charge, "penalty_charge");
    nonneg(p_ev, "p_ev");
    nonneg(beta, "beta");
    nonneg(s_g_cap, "s_g_cap");
    nonneg(loss_fraction, "loss_fraction");
    if (loss_fraction >= 1.0) throw std::invalid_argument("loss_fraction must be < 1");
    if (!(a > 0.0)) throw std::invalid_argument("a must be > 0");
    if (!(b > 0.0)) throw std::invalid_argument("b must be > 0");
}

double GridParams::grid_unit_cost() const {
    return (p_g + m_g * penalty_charge) / (1.0 - loss_fraction);
}

void SupplyOffer::validate() const {
    if (!(offered > 0.0) || !std::isfinite(offered)) {
        throw std::invalid_argument("offered volume must be > 0");
    }
    if (trip_m < 0.0 || !std::isfinite(trip_m)) {
        throw std::invalid_argument("trip_m must be >= 0");
    }
}

void MarketSnapshot::validate() const {
    grid.validate();
    if (!(total_demand >= 0.0)) throw std::invalid_argument("total_demand must be >= 0");
    if (!(renewables >= 0.0)) throw std::invalid_argument("renewables must be >= 0");
    for (const auto& o : offers) o.validate();
}

double DispatchSolution::accepted_total() const {
    double total = 0.0;
    for (const auto& [id, s] : accepted) total += s;
    return total;
}

double grid_cost(const GridParams& params, double s_g, double accepted_total) {
    return params.p_g * s_g + params.m_g * s_g * params.penalty_charge +
           params.p_ev * accepted_total;
}

double ev_utility(const GridParams& params, const SupplyOffer& offer, double s) {
    return (params.p_ev + params.beta) * s - offer.delta * offer.trip_m -
           params.a * s * s - params.b * s;
}

std::optional<SupplyInterval> feasible_supply_interval(const GridParams& params,
                                                       const SupplyOffer& offer) {
    offer.validate();
    // Solve a*s^2 - p*s + c <= 0 with p the net marginal revenue and c the
    // fixed travel cost plus the utility tolerance.
    const double p = params.p_ev + params.beta - params.b;
    const double c = offer.delta * offer.trip_m + params.u_min;
    if (p <= 0.0) return std::nullopt;
    const double disc = p * p - 4.0 * params.a * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double r_hi = (p + sq) / (2.0 * params.a);
    const double r_lo = (2.0 * c) / (p + sq);  // cancellation-safe lower root
    SupplyInterval iv;
    iv.lo = std::max(r_lo, 0.0);
    iv.hi = std::min(offer.offered, r_hi);
    if (iv.lo > iv.hi) return std::nullopt;
    return iv;
}

Relaxation lp_relaxation(const MarketSnapshot& snapshot,
                         const std::vector<BranchState>& states_in) {
    snapshot.validate();
    std::vector<BranchState> states = states_in;
    if (states.empty()) states.assign(snapshot.offers.size(), BranchState::Free);
    if (states.size() != snapshot.offers.size()) {
        throw std::invalid_argument("branch state vector size mismatch");
    }
    const auto bounds = compute_bounds(snapshot);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == BranchState::Active && !bounds[i].usable) {
            throw std::invalid_argument("offer with empty feasible interval fixed active");
        }
    }
    const FillResult fill = fill_dispatch(snapshot, bounds, states);
    Relaxation rel;
    rel.feasible = fill.feasible;
    rel.lower_bound = fill.cost;
    rel.s_g = fill.s_g;
    rel.supplies = fill.supplies;
    return rel;
}

DispatchSolution branch_and_bound_solve(const MarketSnapshot& snapshot,
                                        const SolveOptions& options,
                                        std::string* search_log) {
    snapshot.validate();
    const auto bounds = compute_bounds(snapshot);
    const std::size_t n = snapshot.offers.size();

    std::ostringstream log;
    if (options.log_search) log << "node,depth,bound,incumbent,action\n";

    DispatchSolution best;
    best.status = SolveStatus::Infeasible;
    double incumbent = std::numeric_limits<double>::infinity();

    struct Node {
        std::vector<BranchState> states;
        int depth = 0;
    };

    std::vector<Node> stack;
    {
        Node root;
        root.states.assign(n, BranchState::Free);
        for (std::size_t i = 0; i < n; ++i) {
            if (!bounds[i].usable) root.states[i] = BranchState::Inactive;
        }
        stack.push_back(std::move(root));
    }

    std::size_t nodes = 0;
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        ++nodes;

        const FillResult fill = fill_dispatch(snapshot, bounds, node.states);
        if (!fill.feasible) {
            if (options.log_search) {
                log << nodes << ',' << node.depth << ",inf," << incumbent << ",infeasible\n";
            }
            continue;
        }
        if (fill.cost >= incumbent) {
            if (options.log_search) {
                log << nodes << ',' << node.depth << ',' << fill.cost << ',' << incumbent
                    << ",pruned\n";
            }
            continue;
        }

        std::size_t violator = n;
        if (integral(snapshot, fill.supplies, bounds, node.states, &violator)) {
            incumbent = fill.cost;
            best = make_solution(snapshot, fill);
            if (options.log_search) {
                log << nodes << ',' << node.depth << ',' << fill.cost << ',' << incumbent
                    << ",incumbent\n";
            }
            continue;
        }

        if (options.log_search) {
            log << nodes << ',' << node.depth << ',' << fill.cost << ',' << incumbent
                << ",branch:" << snapshot.offers[violator].ev_id << '\n';
        }

        Node active = node;
        active.states[violator] = BranchState::Active;
        active.depth = node.depth + 1;
        Node inactive = std::move(node);
        inactive.states[violator] = BranchState::Inactive;
        inactive.depth = active.depth;

        // Explore the child nearer the fractional volume first.
        const bool inactive_first =
            fill.supplies[violator] < 0.5 * bounds[violator].lo;
        if (inactive_first) {
            stack.push_back(std::move(active));
            stack.push_back(std::move(inactive));
        } else {
            stack.push_back(std::move(inactive));
            stack.push_back(std::move(active));
        }
    }

    best.nodes_explored = nodes;
    if (search_log != nullptr) *search_log = log.str();
    return best;
}

DispatchSolution brute_force_solve(const MarketSnapshot& snapshot) {
    snapshot.validate();
    const auto bounds = compute_bounds(snapshot);
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (bounds[i].usable) usable.push_back(i);
    }
    if (usable.size() > 20) {
        throw std::invalid_argument("brute force limited to 20 usable offers");
    }

    DispatchSolution best;
    best.status = SolveStatus::Infeasible;
    double best_cost = std::numeric_limits<double>::infinity();

    const std::size_t subsets = std::size_t{1} << usable.size();
    std::vector<BranchState> states(snapshot.offers.size(), BranchState::Inactive);
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        for (std::size_t k = 0; k < usable.size(); ++k) {
            states[usable[k]] =
                (mask >> k) & 1 ? BranchState::Active : BranchState::Inactive;
        }
        const FillResult fill = fill_dispatch(snapshot, bounds, states);
        if (fill.feasible && fill.cost < best_cost) {
            best_cost = fill.cost;
            best = make_solution(snapshot, fill);
        }
    }
    best.nodes_explored = subsets;
    return best;
}

double verify_net_zero(const MarketSnapshot& snapshot, const DispatchSolution& solution) {
    return solution.s_g + snapshot.renewables + solution.accepted_total() -
           snapshot.total_demand - snapshot.grid.loss_fraction * solution.s_g;
}

}  // namespace evgrid
