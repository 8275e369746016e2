#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evgrid {

/// Grid-side market parameters. Energy quantities throughout the dispatch
/// problem are in one abstract unit chosen by the caller; prices are per
/// unit of that choice.
struct GridParams {
    double p_g = 12.0;           // generation price per unit
    double m_g = 0.05;           // emission mass per generated unit
    double penalty_charge = 10.0;  // fee per unit of emission mass
    double p_ev = 6.0;           // price paid per accepted prosumer unit
    double beta = 10.0;          // regulator incentive per prosumer unit sold
    double a = 0.01;             // quadratic prosumer cost factor
    double b = 0.1;              // linear prosumer cost factor
    double loss_fraction = 0.02;  // transmission loss, share of grid output
    double s_g_cap = 29e3;       // grid output ceiling
    double u_min = 1e-6;         // tolerance closing the strict positive-utility constraint

    void validate() const;
    /// Cost per unit of demand actually delivered through the lossy grid path.
    double grid_unit_cost() const;
};

struct SupplyOffer {
    int ev_id = 0;
    double offered = 0.0;  // surplus volume on offer
    double trip_m = 0.0;   // travel to the charging point
    double delta = 0.0;    // travel cost rate per metre

    void validate() const;
};

struct MarketSnapshot {
    std::vector<SupplyOffer> offers;
    double total_demand = 0.0;
    double renewables = 0.0;
    GridParams grid;

    void validate() const;
};

enum class SolveStatus { Optimal, Infeasible };

struct DispatchSolution {
    SolveStatus status = SolveStatus::Infeasible;
    double s_g = 0.0;
    std::map<int, double> accepted;  // ev_id -> volume, only positive entries
    double cost = 0.0;
    std::size_t nodes_explored = 0;

    double accepted_total() const;
};

struct SupplyInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Total outlay for the grid: generation, emission penalty, prosumer payments.
double grid_cost(const GridParams& params, double s_g, double accepted_total);

/// Seller's profit for shipping s units: revenue minus travel cost minus the
/// quadratic acquisition cost. Concave in s.
double ev_utility(const GridParams& params, const SupplyOffer& offer, double s);

/// The volume range over which the seller's utility clears u_min, clipped to
/// the offered amount. Empty when no profitable volume exists.
std::optional<SupplyInterval> feasible_supply_interval(const GridParams& params,
                                                       const SupplyOffer& offer);

enum class BranchState : unsigned char { Free, Active, Inactive };

struct Relaxation {
    bool feasible = false;
    double lower_bound = 0.0;
    double s_g = 0.0;
    std::vector<double> supplies;  // aligned with snapshot.offers
};

/// Continuous lower-bounding problem: semicontinuity is dropped for Free
/// offers (volume may fall anywhere in [0, hi]); Active offers keep their
/// minimum-volume floor; Inactive offers ship nothing. Residual demand is
/// filled cheapest-delivered-unit first.
Relaxation lp_relaxation(const MarketSnapshot& snapshot,
                         const std::vector<BranchState>& states = {});

struct SolveOptions {
    bool log_search = false;
};

/// Exact minimiser of the dispatch cost subject to the grid cap, the
/// per-seller positive-utility volume ranges, and the supply-demand balance.
/// Branches on per-seller activation, depth first, pruning on the relaxation
/// bound; exploration order is fixed so results are reproducible.
DispatchSolution branch_and_bound_solve(const MarketSnapshot& snapshot,
                                        const SolveOptions& options = {},
                                        std::string* search_log = nullptr);

/// Exhaustive reference solver over all activation subsets (at most 20 offers).
DispatchSolution brute_force_solve(const MarketSnapshot& snapshot);

/// Supply-demand balance slack: grid output net of losses plus renewables
/// plus accepted prosumer volume minus demand. Must be >= -1e-6 for a
/// solution reported Optimal.
double verify_net_zero(const MarketSnapshot& snapshot, const DispatchSolution& solution);

}  // namespace evgrid
