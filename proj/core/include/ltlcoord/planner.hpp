#pragma once

// Offline synthesis over the product of an agent transition system and a task
// automaton, plus the shortest-path primitive reused online for detours.

#include "ltlcoord/logic.hpp"
#include "ltlcoord/models.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ltlcoord::planner {

struct ShortestPath {
    std::vector<std::size_t> path;  // FTS states, src first
    std::vector<double> costs;      // per-edge durations, |path| - 1 entries
    std::vector<std::size_t> edges; // FTS edge indices

    double total() const;
};

// Minimum-duration path; nullopt when dst is unreachable. Ties are resolved
// toward lower state ids.
std::optional<ShortestPath> dijkstra_with_costs(const models::AgentFts& fts, std::size_t src, std::size_t dst);

class InfeasibleTask : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProductState {
    std::size_t fts;
    logic::StateId nba;
};

struct ProductEdge {
    std::size_t dst;
    double cost;
    std::size_t fts_edge;
};

struct Product {
    std::vector<ProductState> states;
    std::vector<std::vector<ProductEdge>> out;
    std::vector<std::size_t> initial;
    std::vector<bool> accepting;
    // |FTS| x |NBA|, the size of the unpruned product.
    std::size_t full_size = 0;

    std::size_t size() const noexcept { return states.size(); }
};

// Reachable part of the product. The automaton reads the label of the state
// being entered; the initial step reads the label of the FTS initial state.
// Throws InfeasibleTask when no accepting state is reachable.
Product build_product(const models::AgentFts& fts, const logic::Nba& nba);

struct Run {
    std::vector<std::size_t> prefix;      // product states, ends at the suffix head
    std::vector<std::size_t> prefix_edges;
    std::vector<std::size_t> suffix;      // cycle, starts at the head; the closing edge returns to it
    std::vector<std::size_t> suffix_edges;
    double prefix_cost = 0.0;
    double suffix_cost = 0.0;

    double total_cost() const { return prefix_cost + suffix_cost; }
};

// Minimum prefix+cycle lasso through an accepting state. Ties: lower suffix
// cost, then lower accepting-state index.
Run optimal_run(const Product& product);

struct PlanStep {
    models::ActionId action;
    double duration = 0.0;
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t edge = 0;
    models::StepKind kind = models::StepKind::Move;
};

// tau lists the prefix followed by one copy of the cycle; rho[k] moves
// tau[k] to tau[next(k)], so the last step closes the cycle at suffix_start.
struct Plan {
    std::vector<std::size_t> tau;
    std::vector<PlanStep> rho;
    std::size_t suffix_start = 0;
    double prefix_cost = 0.0;
    double suffix_cost = 0.0;

    std::size_t size() const noexcept { return rho.size(); }
    std::size_t next(std::size_t k) const { return k + 1 < tau.size() ? k + 1 : suffix_start; }
};

Plan plan_of(const models::AgentFts& fts, const Product& product, const Run& run);

// build_product + optimal_run + plan_of.
Plan synthesize(const models::AgentFts& fts, const logic::Nba& nba);

// Labels of tau split into the lasso's prefix and cycle.
std::pair<std::vector<logic::PropSet>, std::vector<logic::PropSet>> plan_trace(const models::AgentFts& fts,
                                                                               const Plan& plan);
bool plan_satisfies(const models::AgentFts& fts, const logic::Nba& nba, const Plan& plan);

// One step of the live (possibly adapted) plan.
struct LiveStep {
    PlanStep step;
    std::uint64_t serial = 0;
    // Index of the base plan step this realizes; nullopt for inserted steps.
    std::optional<std::size_t> base_index;
    bool delay = false;
};

// The infinite unrolling of a plan as a mutable queue. Steps are materialized
// on demand; the front is the step being (or about to be) executed.
class LivePlan {
public:
    explicit LivePlan(const Plan& base);

    const Plan& base() const noexcept { return *base_; }
    std::size_t current_state() const;

    // Materializes steps up to index k.
    const LiveStep& at(std::size_t k);
    LiveStep& mutable_at(std::size_t k);
    std::optional<std::size_t> position_of(std::uint64_t serial);
    std::size_t materialized() const noexcept { return steps_.size(); }

    // Removes the front step; returns true when it closed a cycle of the base
    // plan.
    bool pop_front();
    std::size_t cycles() const noexcept { return cycles_; }

    // Replaces step k with `steps`, which must leave from the same state and
    // reach the same state. The last new step takes over k's identity.
    void replace(std::size_t k, std::vector<PlanStep> steps);
    // Inserts idle loops before step k (which must start at an idle-capable
    // state, i.e. any state). Returns the number inserted.
    std::size_t insert_delay(std::size_t k, const models::AgentFts& fts, std::size_t count);

private:
    LiveStep make(const PlanStep& s, std::optional<std::size_t> base_index);

    const Plan* base_;
    std::deque<LiveStep> steps_;
    std::size_t next_base_ = 0;
    std::size_t cycles_ = 0;
    std::uint64_t next_serial_ = 1;
};

} // namespace ltlcoord::planner
