#include "ltlcoord/logic.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

namespace ltlcoord::logic {

// ---------------------------------------------------------------------------
// PathFormula

struct PathFormula::Node {
    Kind kind;
    Prop prop;
    std::optional<PathFormula> lhs;
    std::optional<PathFormula> rhs;
};

PathFormula PathFormula::top()
{
    static const auto node = std::make_shared<const Node>(Node{Kind::True, {}, std::nullopt, std::nullopt});
    return PathFormula(node);
}

PathFormula PathFormula::atom(Prop p)
{
    return PathFormula(std::make_shared<const Node>(Node{Kind::Atom, std::move(p), std::nullopt, std::nullopt}));
}

PathFormula PathFormula::negated(Prop p)
{
    return PathFormula(std::make_shared<const Node>(Node{Kind::NegAtom, std::move(p), std::nullopt, std::nullopt}));
}

PathFormula PathFormula::conj(PathFormula lhs, PathFormula rhs)
{
    return PathFormula(std::make_shared<const Node>(Node{Kind::And, {}, std::move(lhs), std::move(rhs)}));
}

PathFormula PathFormula::eventually(PathFormula inner)
{
    return PathFormula(std::make_shared<const Node>(Node{Kind::Eventually, {}, std::move(inner), std::nullopt}));
}

PathFormula::Kind PathFormula::kind() const noexcept { return node_->kind; }
const Prop& PathFormula::prop() const noexcept { return node_->prop; }
const PathFormula& PathFormula::lhs() const noexcept { return *node_->lhs; }
const PathFormula& PathFormula::rhs() const noexcept { return *node_->rhs; }

std::size_t PathFormula::depth() const noexcept
{
    switch (kind()) {
    case Kind::True:
    case Kind::Atom:
    case Kind::NegAtom:
        return 0;
    case Kind::And:
        return 1 + std::max(lhs().depth(), rhs().depth());
    case Kind::Eventually:
        return 1 + lhs().depth();
    }
    return 0;
}

void PathFormula::collect_props(PropSet& out) const
{
    switch (kind()) {
    case Kind::True:
        break;
    case Kind::Atom:
    case Kind::NegAtom:
        out.insert(prop());
        break;
    case Kind::And:
        lhs().collect_props(out);
        rhs().collect_props(out);
        break;
    case Kind::Eventually:
        lhs().collect_props(out);
        break;
    }
}

std::string PathFormula::to_string() const
{
    switch (kind()) {
    case Kind::True:
        return "true";
    case Kind::Atom:
        return prop();
    case Kind::NegAtom:
        return "!" + prop();
    case Kind::And:
        return "(" + lhs().to_string() + " && " + rhs().to_string() + ")";
    case Kind::Eventually:
        return "<>" + lhs().to_string();
    }
    return {};
}

bool operator==(const PathFormula& a, const PathFormula& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case PathFormula::Kind::True:
        return true;
    case PathFormula::Kind::Atom:
    case PathFormula::Kind::NegAtom:
        return a.prop() == b.prop();
    case PathFormula::Kind::And:
        return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case PathFormula::Kind::Eventually:
        return a.lhs() == b.lhs();
    }
    return false;
}

std::string RecurringFormula::to_string() const
{
    std::string rec = "[]<>" + recurrent.to_string();
    if (prefix.kind() == PathFormula::Kind::True)
        return rec;
    return prefix.to_string() + " && " + rec;
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(std::size_t position, const std::string& what)
    : std::runtime_error("at offset " + std::to_string(position) + ": " + what), position_(position)
{
}

namespace {

enum class Tok { Ident, And, Not, Eventually, Always, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), i});
            i = j;
            continue;
        }
        if (s.compare(i, 2, "&&") == 0) {
            out.push_back({Tok::And, "&&", i});
            i += 2;
        } else if (s.compare(i, 2, "<>") == 0) {
            out.push_back({Tok::Eventually, "<>", i});
            i += 2;
        } else if (s.compare(i, 2, "[]") == 0) {
            out.push_back({Tok::Always, "[]", i});
            i += 2;
        } else if (c == '!') {
            out.push_back({Tok::Not, "!", i++});
        } else if (c == '(') {
            out.push_back({Tok::LParen, "(", i++});
        } else if (c == ')') {
            out.push_back({Tok::RParen, ")", i++});
        } else {
            throw ParseError(i, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const PropSet& universe) : tokens_(tokenize(text)), universe_(universe) {}

    RecurringFormula parse()
    {
        struct Conjunct {
            PathFormula formula;
            bool recurrent;
            std::size_t pos;
        };
        std::vector<Conjunct> conjuncts;
        for (;;) {
            const Token& t = peek();
            if (t.kind == Tok::Always) {
                next();
                expect(Tok::Eventually, "expected '<>' after '[]'");
                const std::size_t body_pos = peek().pos;
                PathFormula body = unary();
                if (body.kind() == PathFormula::Kind::Eventually)
                    throw ParseError(body_pos, "recurrent subformula may not start with <>");
                conjuncts.push_back({std::move(body), true, t.pos});
            } else {
                conjuncts.push_back({unary(), false, t.pos});
            }
            if (peek().kind != Tok::And)
                break;
            next();
        }
        if (peek().kind != Tok::End)
            throw ParseError(peek().pos, "unexpected '" + peek().text + "'");

        if (!conjuncts.back().recurrent)
            throw ParseError(conjuncts.back().pos, "formula must end with a []<> conjunct");
        for (std::size_t i = 0; i + 1 < conjuncts.size(); ++i) {
            if (conjuncts[i].recurrent)
                throw ParseError(conjuncts[i].pos, "only one []<> conjunct is allowed, and it must come last");
        }

        RecurringFormula out;
        out.recurrent = conjuncts.back().formula;
        if (conjuncts.size() > 1) {
            PathFormula acc = conjuncts[conjuncts.size() - 2].formula;
            for (std::size_t i = conjuncts.size() - 2; i-- > 0;)
                acc = PathFormula::conj(conjuncts[i].formula, acc);
            out.prefix = acc;
        }
        return out;
    }

private:
    const Token& peek() const { return tokens_[cursor_]; }
    const Token& next() { return tokens_[cursor_++]; }

    void expect(Tok kind, const char* message)
    {
        if (peek().kind != kind)
            throw ParseError(peek().pos, message);
        next();
    }

    PathFormula identifier(const Token& t, bool negate)
    {
        if (t.text == "true") {
            if (negate)
                throw ParseError(t.pos, "'!' applies to propositions only");
            return PathFormula::top();
        }
        if (!universe_.contains(t.text))
            throw ParseError(t.pos, "unknown proposition '" + t.text + "'");
        return negate ? PathFormula::negated(t.text) : PathFormula::atom(t.text);
    }

    PathFormula unary()
    {
        const Token& t = next();
        switch (t.kind) {
        case Tok::Ident:
            return identifier(t, false);
        case Tok::Not: {
            const Token& id = next();
            if (id.kind != Tok::Ident)
                throw ParseError(id.pos, "'!' applies to propositions only");
            return identifier(id, true);
        }
        case Tok::Eventually:
            return PathFormula::eventually(unary());
        case Tok::LParen: {
            PathFormula inner = path();
            expect(Tok::RParen, "expected ')'");
            return inner;
        }
        case Tok::Always:
            throw ParseError(t.pos, "[]<> is only allowed as the last top-level conjunct");
        default:
            throw ParseError(t.pos, t.kind == Tok::End ? "unexpected end of formula" : "unexpected '" + t.text + "'");
        }
    }

    PathFormula path()
    {
        PathFormula lhs = unary();
        if (peek().kind != Tok::And)
            return lhs;
        next();
        return PathFormula::conj(std::move(lhs), path());
    }

    std::vector<Token> tokens_;
    std::size_t cursor_ = 0;
    const PropSet& universe_;
};

} // namespace

RecurringFormula parse_formula(std::string_view text, const PropSet& universe)
{
    return Parser(text, universe).parse();
}

// ---------------------------------------------------------------------------
// Guard

Guard::Guard(PropSet positive, PropSet negative) : positive_(std::move(positive)), negative_(std::move(negative))
{
    for (const auto& p : positive_) {
        if (negative_.contains(p))
            throw std::invalid_argument("unsatisfiable guard: '" + p + "' both required and forbidden");
    }
}

bool Guard::satisfied_by(const PropSet& label) const
{
    for (const auto& p : positive_) {
        if (!label.contains(p))
            return false;
    }
    for (const auto& p : negative_) {
        if (label.contains(p))
            return false;
    }
    return true;
}

std::optional<Guard> Guard::conjoin(const Guard& a, const Guard& b)
{
    PropSet pos = a.positive_;
    pos.insert(b.positive_.begin(), b.positive_.end());
    PropSet neg = a.negative_;
    neg.insert(b.negative_.begin(), b.negative_.end());
    for (const auto& p : pos) {
        if (neg.contains(p))
            return std::nullopt;
    }
    Guard g;
    g.positive_ = std::move(pos);
    g.negative_ = std::move(neg);
    return g;
}

std::string Guard::to_string() const
{
    if (is_top())
        return "true";
    std::string out;
    for (const auto& p : positive_)
        out += (out.empty() ? "" : " & ") + p;
    for (const auto& p : negative_)
        out += (out.empty() ? "!" : " & !") + p;
    return out;
}

// ---------------------------------------------------------------------------
// Automata construction

namespace {

struct RawAutomaton {
    std::size_t num_states = 0;
    std::vector<StateId> initial;
    std::vector<Transition> transitions;
    std::vector<bool> accepting;
};

// Keeps states reachable from the initial set, renumbered in BFS order, and
// drops duplicate transitions.
RawAutomaton trim(const RawAutomaton& in)
{
    std::vector<std::vector<std::size_t>> out(in.num_states);
    for (std::size_t i = 0; i < in.transitions.size(); ++i)
        out[in.transitions[i].src].push_back(i);

    constexpr StateId unset = ~StateId{0};
    std::vector<StateId> remap(in.num_states, unset);
    std::vector<StateId> order;
    std::deque<StateId> queue;
    for (StateId s : in.initial) {
        if (remap[s] == unset) {
            remap[s] = static_cast<StateId>(order.size());
            order.push_back(s);
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const StateId s = queue.front();
        queue.pop_front();
        for (std::size_t ti : out[s]) {
            const StateId d = in.transitions[ti].dst;
            if (remap[d] == unset) {
                remap[d] = static_cast<StateId>(order.size());
                order.push_back(d);
                queue.push_back(d);
            }
        }
    }

    RawAutomaton res;
    res.num_states = order.size();
    for (StateId s : in.initial)
        res.initial.push_back(remap[s]);
    std::sort(res.initial.begin(), res.initial.end());
    res.initial.erase(std::unique(res.initial.begin(), res.initial.end()), res.initial.end());
    res.accepting.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        res.accepting[i] = in.accepting[order[i]];

    std::set<Transition> seen;
    for (StateId s : order) {
        for (std::size_t ti : out[s]) {
            const Transition& t = in.transitions[ti];
            Transition mapped{remap[t.src], t.guard, remap[t.dst]};
            if (seen.insert(mapped).second)
                res.transitions.push_back(std::move(mapped));
        }
    }
    return res;
}

Nfa to_nfa(RawAutomaton raw)
{
    RawAutomaton t = trim(raw);
    Nfa nfa;
    nfa.num_states = t.num_states;
    nfa.initial = t.initial.at(0);
    nfa.transitions = std::move(t.transitions);
    nfa.accepting = std::move(t.accepting);
    return nfa;
}

RawAutomaton to_raw(const Nfa& nfa)
{
    return {nfa.num_states, {nfa.initial}, nfa.transitions, nfa.accepting};
}

Nfa literal_nfa(Guard guard)
{
    Nfa nfa;
    nfa.num_states = 2;
    nfa.initial = 0;
    nfa.transitions.push_back({0, std::move(guard), 1});
    nfa.accepting = {false, true};
    return nfa;
}

Nfa product_nfa(const Nfa& a, const Nfa& b)
{
    auto outgoing = [](const Nfa& n) {
        std::vector<std::vector<std::size_t>> out(n.num_states);
        for (std::size_t i = 0; i < n.transitions.size(); ++i)
            out[n.transitions[i].src].push_back(i);
        return out;
    };
    const auto out_a = outgoing(a);
    const auto out_b = outgoing(b);

    // A component that already accepted stays put on every letter.
    auto moves = [](const Nfa& n, const std::vector<std::vector<std::size_t>>& out, StateId s) {
        std::vector<std::pair<Guard, StateId>> m;
        if (n.accepting[s]) {
            m.emplace_back(Guard::top(), s);
            return m;
        }
        for (std::size_t ti : out[s])
            m.emplace_back(n.transitions[ti].guard, n.transitions[ti].dst);
        return m;
    };

    std::map<std::pair<StateId, StateId>, StateId> ids;
    std::deque<std::pair<StateId, StateId>> queue;
    RawAutomaton raw;
    auto intern = [&](std::pair<StateId, StateId> key) {
        auto [it, inserted] = ids.emplace(key, static_cast<StateId>(raw.num_states));
        if (inserted) {
            ++raw.num_states;
            raw.accepting.push_back(a.accepting[key.first] && b.accepting[key.second]);
            queue.push_back(key);
        }
        return it->second;
    };

    raw.initial.push_back(intern({a.initial, b.initial}));
    while (!queue.empty()) {
        const auto key = queue.front();
        queue.pop_front();
        const StateId id = ids.at(key);
        if (raw.accepting[id])
            continue;
        for (const auto& [ga, da] : moves(a, out_a, key.first)) {
            for (const auto& [gb, db] : moves(b, out_b, key.second)) {
                auto g = Guard::conjoin(ga, gb);
                if (!g)
                    continue;
                const StateId dst = intern({da, db});
                raw.transitions.push_back({id, std::move(*g), dst});
            }
        }
    }
    return to_nfa(std::move(raw));
}

Nfa eventually_nfa(const Nfa& inner)
{
    if (inner.accepting[inner.initial])
        return inner;
    RawAutomaton raw = to_raw(inner);
    const auto wait = static_cast<StateId>(raw.num_states++);
    raw.accepting.push_back(false);
    raw.transitions.push_back({wait, Guard::top(), wait});
    for (const auto& t : inner.transitions) {
        if (t.src == inner.initial)
            raw.transitions.push_back({wait, t.guard, t.dst});
    }
    raw.initial = {wait};
    return to_nfa(std::move(raw));
}

std::vector<std::string> validate_common(std::size_t num_states, std::span<const StateId> initial,
                                         std::span<const Transition> transitions, const std::vector<bool>& accepting)
{
    std::vector<std::string> v;
    if (num_states == 0)
        v.emplace_back("automaton has no states");
    if (accepting.size() != num_states)
        v.emplace_back("accepting mask size does not match state count");
    for (StateId s : initial) {
        if (s >= num_states)
            v.push_back("initial state " + std::to_string(s) + " out of range");
    }
    for (const auto& t : transitions) {
        if (t.src >= num_states || t.dst >= num_states)
            v.push_back("transition " + std::to_string(t.src) + "->" + std::to_string(t.dst) + " out of range");
    }
    if (!v.empty())
        return v;

    std::vector<bool> seen(num_states, false);
    std::deque<StateId> queue(initial.begin(), initial.end());
    for (StateId s : initial)
        seen[s] = true;
    bool reach_accepting = false;
    while (!queue.empty()) {
        const StateId s = queue.front();
        queue.pop_front();
        reach_accepting = reach_accepting || accepting[s];
        for (const auto& t : transitions) {
            if (t.src == s && !seen[t.dst]) {
                seen[t.dst] = true;
                queue.push_back(t.dst);
            }
        }
    }
    if (!reach_accepting)
        v.emplace_back("no accepting state is reachable from the initial state");
    return v;
}

} // namespace

Nfa nfa_of(const PathFormula& phi)
{
    switch (phi.kind()) {
    case PathFormula::Kind::True: {
        Nfa nfa;
        nfa.num_states = 1;
        nfa.initial = 0;
        nfa.accepting = {true};
        return nfa;
    }
    case PathFormula::Kind::Atom:
        return literal_nfa(Guard::require(phi.prop()));
    case PathFormula::Kind::NegAtom:
        return literal_nfa(Guard::forbid(phi.prop()));
    case PathFormula::Kind::And:
        return product_nfa(nfa_of(phi.lhs()), nfa_of(phi.rhs()));
    case PathFormula::Kind::Eventually:
        return eventually_nfa(nfa_of(phi.lhs()));
    }
    throw std::logic_error("unhandled formula kind");
}

bool Nfa::accepts(std::span<const PropSet> word) const
{
    std::set<StateId> current{initial};
    for (std::size_t i = 0;; ++i) {
        for (StateId s : current) {
            if (accepting[s])
                return true;
        }
        if (i == word.size() || current.empty())
            return false;
        std::set<StateId> next;
        for (const auto& t : transitions) {
            if (current.contains(t.src) && t.guard.satisfied_by(word[i]))
                next.insert(t.dst);
        }
        current = std::move(next);
    }
}

std::vector<std::string> Nfa::validate() const
{
    const StateId init[] = {initial};
    auto v = validate_common(num_states, init, transitions, accepting);
    for (const auto& t : transitions) {
        if (t.src < accepting.size() && accepting[t.src])
            v.push_back("accepting state " + std::to_string(t.src) + " has an outgoing transition");
    }
    return v;
}

Nba nba_of(const RecurringFormula& phi)
{
    const Nfa first = nfa_of(phi.prefix);
    const Nfa loop = nfa_of(PathFormula::eventually(phi.recurrent));

    RawAutomaton raw;
    raw.num_states = loop.num_states;
    raw.accepting = loop.accepting;
    raw.transitions = loop.transitions;

    // Each completion of the recurrent part restarts it, as if from the
    // waiting state.
    for (StateId f = 0; f < loop.num_states; ++f) {
        if (!loop.accepting[f] || f == loop.initial)
            continue;
        for (const auto& t : loop.transitions) {
            if (t.src == loop.initial)
                raw.transitions.push_back({f, t.guard, t.dst});
        }
    }
    if (loop.accepting[loop.initial])
        raw.transitions.push_back({loop.initial, Guard::top(), loop.initial});

    // The prefix recognizer hands over to the loop when it accepts.
    std::vector<StateId> remap(first.num_states);
    for (StateId s = 0; s < first.num_states; ++s) {
        if (first.accepting[s]) {
            remap[s] = loop.initial;
        } else {
            remap[s] = static_cast<StateId>(raw.num_states++);
            raw.accepting.push_back(false);
        }
    }
    for (const auto& t : first.transitions)
        raw.transitions.push_back({remap[t.src], t.guard, remap[t.dst]});
    raw.initial = {remap[first.initial]};

    RawAutomaton t = trim(raw);
    Nba nba;
    nba.num_states = t.num_states;
    nba.initial = std::move(t.initial);
    nba.transitions = std::move(t.transitions);
    nba.accepting = std::move(t.accepting);
    nba.index();
    return nba;
}

void Nba::index()
{
    out.assign(num_states, {});
    for (std::size_t i = 0; i < transitions.size(); ++i)
        out.at(transitions[i].src).push_back(i);
}

std::vector<std::string> Nba::validate() const
{
    auto v = validate_common(num_states, initial, transitions, accepting);
    if (initial.empty())
        v.emplace_back("no initial state");
    if (std::find(accepting.begin(), accepting.end(), true) == accepting.end())
        v.emplace_back("accepting set is empty");
    return v;
}

// ---------------------------------------------------------------------------
// Monitoring

MonitorStep advance_monitor(const Nba& nba, const std::set<StateId>& current, const PropSet& label)
{
    MonitorStep step;
    for (StateId s : current) {
        for (std::size_t ti : nba.out.at(s)) {
            const Transition& t = nba.transitions[ti];
            if (t.guard.satisfied_by(label))
                step.next.insert(t.dst);
        }
    }
    for (StateId s : step.next) {
        if (nba.accepting[s]) {
            step.accepting_hit = true;
            break;
        }
    }
    return step;
}

Monitor::Monitor(const Nba& nba) : nba_(&nba), current_(nba.initial.begin(), nba.initial.end()) {}

bool Monitor::step(const PropSet& label)
{
    MonitorStep s = advance_monitor(*nba_, current_, label);
    current_ = std::move(s.next);
    if (s.accepting_hit)
        ++hits_;
    return s.accepting_hit;
}

bool accepts_lasso(const Nba& nba, std::span<const PropSet> prefix, std::span<const PropSet> cycle)
{
    if (cycle.empty())
        throw std::invalid_argument("accepts_lasso: cycle must be nonempty");
    const std::size_t len = prefix.size() + cycle.size();
    const std::size_t n = nba.num_states;
    auto label_at = [&](std::size_t pos) -> const PropSet& {
        return pos < prefix.size() ? prefix[pos] : cycle[pos - prefix.size()];
    };
    auto succ_pos = [&](std::size_t pos) { return pos + 1 < len ? pos + 1 : prefix.size(); };

    // Node (pos, q): q is reached after consuming the letters before pos.
    auto successors = [&](std::size_t node) {
        const std::size_t pos = node / n;
        const auto q = static_cast<StateId>(node % n);
        std::vector<std::size_t> res;
        for (std::size_t ti : nba.out[q]) {
            const Transition& t = nba.transitions[ti];
            if (t.guard.satisfied_by(label_at(pos)))
                res.push_back(succ_pos(pos) * n + t.dst);
        }
        return res;
    };

    std::vector<bool> reached(len * n, false);
    std::deque<std::size_t> queue;
    for (StateId q : nba.initial) {
        if (!reached[q]) {
            reached[q] = true;
            queue.push_back(q);
        }
    }
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w : successors(v)) {
            if (!reached[w]) {
                reached[w] = true;
                queue.push_back(w);
            }
        }
    }

    for (std::size_t v = 0; v < reached.size(); ++v) {
        if (!reached[v] || !nba.accepting[v % n])
            continue;
        std::vector<bool> seen(len * n, false);
        std::deque<std::size_t> q2;
        for (std::size_t w : successors(v)) {
            if (!seen[w]) {
                seen[w] = true;
                q2.push_back(w);
            }
        }
        while (!q2.empty()) {
            const std::size_t u = q2.front();
            q2.pop_front();
            if (u == v)
                return true;
            for (std::size_t w : successors(u)) {
                if (!seen[w]) {
                    seen[w] = true;
                    q2.push_back(w);
                }
            }
        }
    }
    return false;
}

} // namespace ltlcoord::logic
