#pragma once

// Independent reference implementations used by the unit, property and
// acceptance tests. Everything here is deliberately naive.

#include "ltlcoord/logic.hpp"
#include "ltlcoord/models.hpp"
#include "ltlcoord/planner.hpp"
#include "ltlcoord/protocol.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using ltlcoord::logic::PathFormula;
using ltlcoord::logic::PropSet;
using ltlcoord::logic::RecurringFormula;
using Word = std::vector<PropSet>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Small deterministic generator for the property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::mt19937_64& rng() { return rng_; }

    PathFormula formula(std::size_t depth, const std::vector<std::string>& props)
    {
        if (depth == 0 || coin(0.25)) {
            switch (below(4)) {
            case 0:
                return PathFormula::top();
            case 1:
                return PathFormula::negated(props[below(props.size())]);
            default:
                return PathFormula::atom(props[below(props.size())]);
            }
        }
        if (coin())
            return PathFormula::eventually(formula(depth - 1, props));
        return PathFormula::conj(formula(depth - 1, props), formula(depth - 1, props));
    }

    // Recurrent part never rooted at eventually, as the parser requires.
    RecurringFormula recurring(std::size_t depth, const std::vector<std::string>& props)
    {
        RecurringFormula f;
        f.prefix = formula(depth, props);
        do {
            f.recurrent = formula(depth, props);
        } while (f.recurrent.kind() == PathFormula::Kind::Eventually);
        return f;
    }

    Word word(std::size_t len, const std::vector<std::string>& props)
    {
        Word w(len);
        for (auto& l : w)
            for (const auto& p : props)
                if (coin())
                    l.insert(p);
        return w;
    }

private:
    std::mt19937_64 rng_;
};

// All subsets of props, in binary-counter order.
inline std::vector<PropSet> alphabet(const std::vector<std::string>& props)
{
    std::vector<PropSet> out;
    for (std::size_t m = 0; m < (std::size_t{1} << props.size()); ++m) {
        PropSet s;
        for (std::size_t i = 0; i < props.size(); ++i)
            if (m >> i & 1)
                s.insert(props[i]);
        out.push_back(s);
    }
    return out;
}

// Every word of length in [min_len, max_len].
inline std::vector<Word> all_words(const std::vector<std::string>& props, std::size_t min_len, std::size_t max_len)
{
    const auto sigma = alphabet(props);
    std::vector<Word> out;
    std::vector<Word> layer{Word{}};
    for (std::size_t len = 0; len <= max_len; ++len) {
        if (len >= min_len)
            out.insert(out.end(), layer.begin(), layer.end());
        std::vector<Word> next;
        for (const auto& w : layer)
            for (const auto& l : sigma) {
                next.push_back(w);
                next.back().push_back(l);
            }
        layer = std::move(next);
    }
    return out;
}

// Finite-word semantics: w, i |= phi with 0 <= i <= |w|.
inline bool holds_finite(const PathFormula& f, const Word& w, std::size_t i)
{
    using K = PathFormula::Kind;
    switch (f.kind()) {
    case K::True:
        return true;
    case K::Atom:
        return i < w.size() && w[i].contains(f.prop());
    case K::NegAtom:
        return i < w.size() && !w[i].contains(f.prop());
    case K::And:
        return holds_finite(f.lhs(), w, i) && holds_finite(f.rhs(), w, i);
    case K::Eventually:
        for (std::size_t j = i; j <= w.size(); ++j)
            if (holds_finite(f.lhs(), w, j))
                return true;
        return false;
    }
    return false;
}

// Semantics on the infinite word u v^omega, position i < |u| + |v|.
inline bool holds_lasso(const PathFormula& f, const Word& u, const Word& v, std::size_t i)
{
    using K = PathFormula::Kind;
    const auto letter = [&](std::size_t k) -> const PropSet& { return k < u.size() ? u[k] : v[k - u.size()]; };
    switch (f.kind()) {
    case K::True:
        return true;
    case K::Atom:
        return letter(i).contains(f.prop());
    case K::NegAtom:
        return !letter(i).contains(f.prop());
    case K::And:
        return holds_lasso(f.lhs(), u, v, i) && holds_lasso(f.rhs(), u, v, i);
    case K::Eventually: {
        const std::size_t from = i < u.size() ? i : u.size();
        for (std::size_t j = from; j < u.size() + v.size(); ++j)
            if (holds_lasso(f.lhs(), u, v, j))
                return true;
        return false;
    }
    }
    return false;
}

inline bool accepts_lasso(const RecurringFormula& f, const Word& u, const Word& v)
{
    if (!holds_lasso(f.prefix, u, v, 0))
        return false;
    for (std::size_t j = u.size(); j < u.size() + v.size(); ++j)
        if (holds_lasso(f.recurrent, u, v, j))
            return true;
    return false;
}

// Minimum cost of a walk with at most max_hops edges, by plain enumeration.
inline double bounded_walk_cost(const ltlcoord::models::AgentFts& fts, std::size_t src, std::size_t dst,
                                std::size_t max_hops)
{
    double best = src == dst ? 0.0 : kInf;
    std::function<void(std::size_t, std::size_t, double)> go = [&](std::size_t s, std::size_t hops, double c) {
        if (c >= best || hops == max_hops)
            return;
        for (auto ei : fts.out[s]) {
            const auto& e = fts.edges[ei];
            const double nc = c + e.duration;
            if (e.dst == dst)
                best = std::min(best, nc);
            go(e.dst, hops + 1, nc);
        }
    };
    go(src, 0, 0.0);
    return best;
}

// Floyd-Warshall over the product; returns the minimum prefix + cycle cost of
// any lasso through an accepting state.
inline double lasso_cost(const ltlcoord::planner::Product& p)
{
    const std::size_t n = p.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
    for (std::size_t s = 0; s < n; ++s) {
        d[s][s] = 0.0;
        for (const auto& e : p.out[s])
            d[s][e.dst] = std::min(d[s][e.dst], e.cost);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    double best = kInf;
    for (std::size_t a = 0; a < n; ++a) {
        if (!p.accepting[a])
            continue;
        double pre = kInf;
        for (auto i : p.initial)
            pre = std::min(pre, d[i][a]);
        double cyc = kInf;
        for (const auto& e : p.out[a])
            cyc = std::min(cyc, e.cost + d[e.dst][a]);
        best = std::min(best, pre + cyc);
    }
    return best;
}

// Exhaustive minimum over injective action -> agent maps with b = true.
inline double brute_force_assignment(const ltlcoord::protocol::AssignmentInstance& inst)
{
    double best = kInf;
    std::vector<bool> used(inst.size(), false);
    std::function<void(std::size_t, double)> go = [&](std::size_t d, double c) {
        if (d == inst.M) {
            best = std::min(best, c);
            return;
        }
        for (std::size_t j = 0; j < inst.size(); ++j) {
            if (used[j] || !inst.b[j][d])
                continue;
            used[j] = true;
            go(d + 1, c + inst.delta[j][d]);
            used[j] = false;
        }
    };
    go(0, 0.0);
    return best;
}

// Random instance around T_c = 50; feasible when `feasible` (agent d < M is
// forced able for action d).
inline ltlcoord::protocol::AssignmentInstance random_instance(Gen& g, std::size_t N, std::size_t M, bool feasible,
                                                              bool integer_delta = false)
{
    ltlcoord::protocol::AssignmentInstance inst;
    inst.M = M;
    for (std::size_t j = 0; j < N; ++j) {
        inst.agents.push_back("a" + std::to_string(j));
        std::vector<bool> b(M);
        std::vector<double> t(M), delta(M);
        for (std::size_t d = 0; d < M; ++d) {
            b[d] = g.coin(0.6) || (feasible && j == d);
            delta[d] = integer_delta ? static_cast<double>(g.below(10)) : g.uniform(0.0, 100.0);
            t[d] = 50.0 + delta[d];
            if (!b[d]) {
                t[d] = 500.0;
                delta[d] = 450.0;
            }
        }
        inst.b.push_back(b);
        inst.t.push_back(t);
        inst.delta.push_back(delta);
    }
    return inst;
}

// Product over the full |FTS| x |NBA| space, built independently of
// build_product, followed by all-pairs shortest paths.
inline double reference_lasso_cost(const ltlcoord::models::AgentFts& fts, const ltlcoord::logic::Nba& nba)
{
    const std::size_t Q = nba.num_states;
    const std::size_t n = fts.size() * Q;
    auto id = [&](std::size_t s, std::size_t q) { return s * Q + q; };
    std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
    for (std::size_t i = 0; i < n; ++i)
        d[i][i] = 0.0;
    std::vector<std::vector<std::pair<std::size_t, double>>> out(n);
    for (const auto& e : fts.edges)
        for (const auto& t : nba.transitions)
            if (t.guard.satisfied_by(fts.labels[e.dst])) {
                const auto a = id(e.src, t.src), b = id(e.dst, t.dst);
                d[a][b] = std::min(d[a][b], e.duration);
                out[a].emplace_back(b, e.duration);
            }
    std::vector<std::size_t> init;
    for (const auto& t : nba.transitions)
        if (std::find(nba.initial.begin(), nba.initial.end(), t.src) != nba.initial.end() &&
            t.guard.satisfied_by(fts.labels[fts.initial]))
            init.push_back(id(fts.initial, t.dst));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    double best = kInf;
    for (std::size_t s = 0; s < fts.size(); ++s)
        for (std::size_t q = 0; q < Q; ++q) {
            if (!nba.accepting[q])
                continue;
            const auto a = id(s, q);
            double pre = kInf;
            for (auto i : init)
                pre = std::min(pre, d[i][a]);
            double cyc = kInf;
            for (const auto& [b, c] : out[a])
                cyc = std::min(cyc, c + d[b][a]);
            best = std::min(best, pre + cyc);
        }
    return best;
}

struct Toy {
    ltlcoord::models::AgentFts fts;
    ltlcoord::logic::Nba nba;
    RecurringFormula task;
};

// 2-3 ROIs with random edge durations, one or two local actions.
inline Toy random_toy(oracle::Gen& g)
{
    const std::size_t nroi = 2 + g.below(2);
    ltlcoord::models::MotionFts m;
    std::vector<std::string> props;
    for (std::size_t i = 0; i < nroi; ++i) {
        const std::string r = "R" + std::to_string(i);
        m.rois.push_back({r, {r}});
        props.push_back(r);
    }
    m.initial = "R0";
    for (const auto& a : m.rois)
        for (const auto& b : m.rois)
            if (a.id != b.id)
                m.edges.push_back({a.id, "goto_" + b.id, b.id, static_cast<double>(1 + g.below(5))});
    ltlcoord::models::ActionModel am(static_cast<double>(1 + g.below(2)));
    const std::size_t nact = 1 + g.below(2);
    for (std::size_t i = 0; i < nact; ++i) {
        const std::string a = "x" + std::to_string(i);
        am.add({a, ltlcoord::models::ActionKind::Local, {m.rois[g.below(nroi)].id}, static_cast<double>(1 + g.below(4)), {}});
        props.push_back(a);
    }
    Toy t;
    t.fts = ltlcoord::models::build_agent_fts(m, am).fts;
    t.task = g.recurring(2, props);
    t.nba = ltlcoord::logic::nba_of(t.task);
    return t;
}

} // namespace oracle
