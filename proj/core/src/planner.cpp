#include "ltlcoord/planner.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

namespace ltlcoord::planner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

struct Arc {
    std::size_t dst;
    double cost;
    std::size_t id;
};

struct SearchTree {
    std::vector<double> dist;
    std::vector<std::size_t> parent;
    std::vector<std::size_t> via;
};

// Multi-source Dijkstra over an adjacency given by `arcs(v)`. Queue order is
// (distance, node), so equal-cost alternatives settle toward lower ids and
// relaxation keeps the first parent found.
template <class Arcs>
SearchTree dijkstra(std::size_t n, const std::vector<std::size_t>& sources, Arcs&& arcs)
{
    SearchTree t{std::vector<double>(n, kInf), std::vector<std::size_t>(n, kNoNode),
                 std::vector<std::size_t>(n, kNoNode)};
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (auto s : sources) {
        if (t.dist[s] > 0.0) {
            t.dist[s] = 0.0;
            pq.emplace(0.0, s);
        }
    }
    std::vector<bool> done(n, false);
    while (!pq.empty()) {
        const auto [d, v] = pq.top();
        pq.pop();
        if (done[v])
            continue;
        done[v] = true;
        for (const Arc& a : arcs(v)) {
            const double nd = d + a.cost;
            if (nd < t.dist[a.dst]) {
                t.dist[a.dst] = nd;
                t.parent[a.dst] = v;
                t.via[a.dst] = a.id;
                pq.emplace(nd, a.dst);
            }
        }
    }
    return t;
}

// Path from the search-tree root to `v`, as (nodes, arc ids).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> unwind(const SearchTree& t, std::size_t v)
{
    std::vector<std::size_t> nodes{v};
    std::vector<std::size_t> arcs;
    while (t.parent[v] != kNoNode) {
        arcs.push_back(t.via[v]);
        v = t.parent[v];
        nodes.push_back(v);
    }
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(arcs.begin(), arcs.end());
    return {nodes, arcs};
}

} // namespace

double ShortestPath::total() const
{
    return std::accumulate(costs.begin(), costs.end(), 0.0);
}

std::optional<ShortestPath> dijkstra_with_costs(const models::AgentFts& fts, std::size_t src, std::size_t dst)
{
    if (src >= fts.size() || dst >= fts.size())
        throw std::out_of_range("dijkstra_with_costs: state out of range");
    std::vector<Arc> buf;
    auto arcs = [&](std::size_t v) -> const std::vector<Arc>& {
        buf.clear();
        for (auto ei : fts.out[v])
            buf.push_back({fts.edges[ei].dst, fts.edges[ei].duration, ei});
        return buf;
    };
    const SearchTree t = dijkstra(fts.size(), {src}, arcs);
    if (t.dist[dst] == kInf)
        return std::nullopt;
    auto [nodes, edges] = unwind(t, dst);
    ShortestPath out;
    out.path = std::move(nodes);
    out.edges = std::move(edges);
    for (auto ei : out.edges)
        out.costs.push_back(fts.edges[ei].duration);
    return out;
}

Product build_product(const models::AgentFts& fts, const logic::Nba& nba)
{
    Product p;
    p.full_size = fts.size() * nba.num_states;
    std::map<std::pair<std::size_t, logic::StateId>, std::size_t> ids;
    std::deque<std::size_t> queue;
    auto intern = [&](std::size_t s, logic::StateId q) {
        auto [it, inserted] = ids.emplace(std::make_pair(s, q), p.states.size());
        if (inserted) {
            p.states.push_back({s, q});
            p.out.emplace_back();
            p.accepting.push_back(nba.accepting[q]);
            queue.push_back(it->second);
        }
        return it->second;
    };

    const std::set<logic::StateId> init(nba.initial.begin(), nba.initial.end());
    for (auto q : logic::advance_monitor(nba, init, fts.labels[fts.initial]).next)
        p.initial.push_back(intern(fts.initial, q));

    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        const auto [s, q] = p.states[v];
        for (auto ei : fts.out[s]) {
            const auto& e = fts.edges[ei];
            const auto& label = fts.labels[e.dst];
            for (auto ti : nba.out[q]) {
                const auto& t = nba.transitions[ti];
                if (!t.guard.satisfied_by(label))
                    continue;
                const std::size_t w = intern(e.dst, t.dst);
                p.out[v].push_back({w, e.duration, ei});
            }
        }
    }
    if (std::find(p.accepting.begin(), p.accepting.end(), true) == p.accepting.end())
        throw InfeasibleTask("task infeasible: no accepting product state is reachable");
    return p;
}

Run optimal_run(const Product& product)
{
    const std::size_t n = product.size();
    auto arcs = [&](std::size_t v) {
        std::vector<Arc> a;
        a.reserve(product.out[v].size());
        for (std::size_t i = 0; i < product.out[v].size(); ++i)
            a.push_back({product.out[v][i].dst, product.out[v][i].cost, i});
        return a;
    };
    const SearchTree pre = dijkstra(n, product.initial, arcs);

    struct Best {
        double total = kInf;
        double suffix = kInf;
        std::size_t f = kNoNode;
        std::size_t last = kNoNode;  // predecessor of f on the cycle
        std::size_t closing = kNoNode;
        SearchTree tree;
    } best;

    for (std::size_t f = 0; f < n; ++f) {
        if (!product.accepting[f] || pre.dist[f] == kInf)
            continue;
        SearchTree cyc = dijkstra(n, {f}, arcs);
        double c_best = kInf;
        std::size_t u_best = kNoNode;
        std::size_t a_best = kNoNode;
        for (std::size_t u = 0; u < n; ++u) {
            if (cyc.dist[u] == kInf)
                continue;
            for (std::size_t i = 0; i < product.out[u].size(); ++i) {
                const auto& e = product.out[u][i];
                if (e.dst != f)
                    continue;
                const double c = cyc.dist[u] + e.cost;
                if (c < c_best) {
                    c_best = c;
                    u_best = u;
                    a_best = i;
                }
            }
        }
        if (u_best == kNoNode)
            continue;
        const double total = pre.dist[f] + c_best;
        if (total < best.total || (total == best.total && c_best < best.suffix)) {
            best.total = total;
            best.suffix = c_best;
            best.f = f;
            best.last = u_best;
            best.closing = a_best;
            best.tree = std::move(cyc);
        }
    }
    if (best.f == kNoNode)
        throw InfeasibleTask("task infeasible: no accepting cycle is reachable");

    Run run;
    auto [pnodes, parcs] = unwind(pre, best.f);
    run.prefix = std::move(pnodes);
    for (std::size_t k = 0; k + 1 < run.prefix.size(); ++k)
        run.prefix_edges.push_back(product.out[run.prefix[k]][parcs[k]].fts_edge);
    run.prefix_cost = pre.dist[best.f];

    auto [snodes, sarcs] = unwind(best.tree, best.last);
    run.suffix = std::move(snodes);
    for (std::size_t k = 0; k + 1 < run.suffix.size(); ++k)
        run.suffix_edges.push_back(product.out[run.suffix[k]][sarcs[k]].fts_edge);
    run.suffix_edges.push_back(product.out[best.last][best.closing].fts_edge);
    run.suffix_cost = best.suffix;
    return run;
}

Plan plan_of(const models::AgentFts& fts, const Product& product, const Run& run)
{
    Plan plan;
    for (auto v : run.prefix)
        plan.tau.push_back(product.states[v].fts);
    plan.suffix_start = plan.tau.size() - 1;
    for (std::size_t k = 1; k < run.suffix.size(); ++k)
        plan.tau.push_back(product.states[run.suffix[k]].fts);

    std::vector<std::size_t> edges = run.prefix_edges;
    edges.insert(edges.end(), run.suffix_edges.begin(), run.suffix_edges.end());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = fts.edges[edges[k]];
        plan.rho.push_back({e.action, e.duration, e.src, e.dst, edges[k], e.kind});
    }
    plan.prefix_cost = run.prefix_cost;
    plan.suffix_cost = run.suffix_cost;
    return plan;
}

Plan synthesize(const models::AgentFts& fts, const logic::Nba& nba)
{
    const Product p = build_product(fts, nba);
    return plan_of(fts, p, optimal_run(p));
}

std::pair<std::vector<logic::PropSet>, std::vector<logic::PropSet>> plan_trace(const models::AgentFts& fts,
                                                                               const Plan& plan)
{
    std::vector<logic::PropSet> prefix, cycle;
    for (std::size_t k = 0; k < plan.tau.size(); ++k)
        (k < plan.suffix_start ? prefix : cycle).push_back(fts.labels[plan.tau[k]]);
    return {prefix, cycle};
}

bool plan_satisfies(const models::AgentFts& fts, const logic::Nba& nba, const Plan& plan)
{
    const auto [prefix, cycle] = plan_trace(fts, plan);
    return logic::accepts_lasso(nba, prefix, cycle);
}

// ---------------------------------------------------------------------------
// LivePlan

LivePlan::LivePlan(const Plan& base) : base_(&base)
{
    if (base.rho.empty())
        throw std::invalid_argument("plan has no steps");
}

LiveStep LivePlan::make(const PlanStep& s, std::optional<std::size_t> base_index)
{
    LiveStep l;
    l.step = s;
    l.serial = next_serial_++;
    l.base_index = base_index;
    return l;
}

const LiveStep& LivePlan::at(std::size_t k)
{
    return mutable_at(k);
}

LiveStep& LivePlan::mutable_at(std::size_t k)
{
    while (steps_.size() <= k) {
        steps_.push_back(make(base_->rho[next_base_], next_base_));
        next_base_ = next_base_ + 1 < base_->rho.size() ? next_base_ + 1 : base_->suffix_start;
    }
    return steps_[k];
}

std::size_t LivePlan::current_state() const
{
    if (!steps_.empty())
        return steps_.front().step.from;
    return base_->rho[next_base_].from;
}

std::optional<std::size_t> LivePlan::position_of(std::uint64_t serial)
{
    for (std::size_t k = 0; k < steps_.size(); ++k) {
        if (steps_[k].serial == serial)
            return k;
    }
    return std::nullopt;
}

bool LivePlan::pop_front()
{
    at(0);
    const bool closes = steps_.front().base_index == base_->rho.size() - 1;
    steps_.pop_front();
    if (closes)
        ++cycles_;
    return closes;
}

void LivePlan::replace(std::size_t k, std::vector<PlanStep> steps)
{
    LiveStep& old = mutable_at(k);
    if (steps.empty())
        throw std::invalid_argument("replacement must contain at least one step");
    if (steps.front().from != old.step.from || steps.back().to != old.step.to)
        throw std::invalid_argument("replacement does not connect the same states");
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        if (steps[i].to != steps[i + 1].from)
            throw std::invalid_argument("replacement steps are not contiguous");
    }
    LiveStep last = old;
    last.step = steps.back();
    std::vector<LiveStep> fresh;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
        fresh.push_back(make(steps[i], std::nullopt));
    fresh.push_back(std::move(last));
    steps_.erase(steps_.begin() + static_cast<std::ptrdiff_t>(k));
    steps_.insert(steps_.begin() + static_cast<std::ptrdiff_t>(k), fresh.begin(), fresh.end());
}

std::size_t LivePlan::insert_delay(std::size_t k, const models::AgentFts& fts, std::size_t count)
{
    if (count == 0)
        return 0;
    LiveStep& target = mutable_at(k);
    const std::size_t from = target.step.from;
    const auto& roi = fts.states[from].roi;
    const auto idle_state = fts.find(roi, models::kNone);
    if (!idle_state)
        throw std::logic_error("no idle state at " + roi);

    auto find_edge = [&](std::size_t src, const models::ActionId& action, std::size_t dst) {
        for (auto ei : fts.out[src]) {
            if (fts.edges[ei].action == action && fts.edges[ei].dst == dst)
                return ei;
        }
        throw std::logic_error("missing edge " + fts.state_name(src) + " -" + action + "-> " + fts.state_name(dst));
    };

    // After idling the agent sits in (roi, None), so the delayed step now
    // leaves from there.
    const auto tail = find_edge(*idle_state, target.step.action, target.step.to);
    target.step.from = *idle_state;
    target.step.edge = tail;

    std::vector<LiveStep> loops;
    std::size_t at_state = from;
    for (std::size_t i = 0; i < count; ++i) {
        const auto ei = find_edge(at_state, models::kNone, *idle_state);
        const auto& e = fts.edges[ei];
        LiveStep l = make({e.action, e.duration, e.src, e.dst, ei, e.kind}, std::nullopt);
        l.delay = true;
        loops.push_back(std::move(l));
        at_state = *idle_state;
    }
    steps_.insert(steps_.begin() + static_cast<std::ptrdiff_t>(k), loops.begin(), loops.end());
    return count;
}

} // namespace ltlcoord::planner
