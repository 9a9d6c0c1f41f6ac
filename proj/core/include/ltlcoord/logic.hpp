#pragma once

// Recurring-LTL fragment: formulas of the form  phi1 && []<> phi2  where the
// path formulas use only true, literals, conjunction and eventually.
// Formulas compile to symbolic automata whose edges carry literal guards, so
// the 2^props alphabet is never materialized.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltlcoord::logic {

using Prop = std::string;
using PropSet = std::set<Prop>;
using StateId = std::uint32_t;

class PathFormula {
public:
    enum class Kind : std::uint8_t { True, Atom, NegAtom, And, Eventually };

    static PathFormula top();
    static PathFormula atom(Prop p);
    static PathFormula negated(Prop p);
    static PathFormula conj(PathFormula lhs, PathFormula rhs);
    static PathFormula eventually(PathFormula inner);

    Kind kind() const noexcept;
    // Only meaningful for Atom / NegAtom.
    const Prop& prop() const noexcept;
    // lhs() is the operand of Eventually; lhs()/rhs() are the And operands.
    const PathFormula& lhs() const noexcept;
    const PathFormula& rhs() const noexcept;

    std::size_t depth() const noexcept;
    void collect_props(PropSet& out) const;
    std::string to_string() const;

    friend bool operator==(const PathFormula& a, const PathFormula& b);

private:
    struct Node;
    explicit PathFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct RecurringFormula {
    PathFormula prefix = PathFormula::top();
    PathFormula recurrent = PathFormula::top();

    std::string to_string() const;
    friend bool operator==(const RecurringFormula&, const RecurringFormula&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& what);
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Grammar:  phi := phi1 '&&' '[]<>' phi2 | '[]<>' phi2
// with && (right-associative), prefix ! on identifiers only, prefix <> and
// parentheses. 'true' denotes the trivially satisfied formula. The []<> term
// must be the last top-level conjunct and phi2 may not be rooted at <>.
// Every identifier must belong to `universe`.
RecurringFormula parse_formula(std::string_view text, const PropSet& universe);

class Guard {
public:
    Guard() = default;
    // Throws std::invalid_argument when positive and negative overlap.
    Guard(PropSet positive, PropSet negative);

    static Guard top() { return {}; }
    static Guard require(Prop p) { return Guard({std::move(p)}, {}); }
    static Guard forbid(Prop p) { return Guard({}, {std::move(p)}); }

    const PropSet& positive() const noexcept { return positive_; }
    const PropSet& negative() const noexcept { return negative_; }
    bool is_top() const noexcept { return positive_.empty() && negative_.empty(); }

    bool satisfied_by(const PropSet& label) const;
    // Conjunction; nullopt when the result is unsatisfiable.
    static std::optional<Guard> conjoin(const Guard& a, const Guard& b);

    std::string to_string() const;
    friend auto operator<=>(const Guard&, const Guard&) = default;

private:
    PropSet positive_;
    PropSet negative_;
};

struct Transition {
    StateId src;
    Guard guard;
    StateId dst;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

// Finite-word recognizer. Accepting states are terminal: a word is accepted as
// soon as some run reaches an accepting state, and accepting states carry no
// outgoing transitions of their own.
struct Nfa {
    std::size_t num_states = 0;
    StateId initial = 0;
    std::vector<Transition> transitions;
    std::vector<bool> accepting;

    bool is_accepting(StateId s) const { return accepting.at(s); }
    // True iff some prefix of `word` drives a run into an accepting state.
    bool accepts(std::span<const PropSet> word) const;
    std::vector<std::string> validate() const;
};

struct Nba {
    std::size_t num_states = 0;
    std::vector<StateId> initial;
    std::vector<Transition> transitions;
    std::vector<bool> accepting;
    // Per-state outgoing transition indices, filled by index().
    std::vector<std::vector<std::size_t>> out;

    bool is_accepting(StateId s) const { return accepting.at(s); }
    void index();
    std::vector<std::string> validate() const;
};

Nfa nfa_of(const PathFormula& phi);
Nba nba_of(const RecurringFormula& phi);

struct MonitorStep {
    std::set<StateId> next;
    bool accepting_hit = false;
    // Empty `next`: no run of the automaton can be extended.
    bool rejected() const { return next.empty(); }
};

MonitorStep advance_monitor(const Nba& nba, const std::set<StateId>& current, const PropSet& label);

// Runtime acceptance monitor over a stream of labels.
class Monitor {
public:
    explicit Monitor(const Nba& nba);
    // Consumes one label; returns true on an accepting hit.
    bool step(const PropSet& label);
    std::size_t hits() const noexcept { return hits_; }
    bool rejected() const noexcept { return current_.empty(); }
    const std::set<StateId>& current() const noexcept { return current_; }

private:
    const Nba* nba_;
    std::set<StateId> current_;
    std::size_t hits_ = 0;
};

// Büchi acceptance of the ultimately periodic word prefix . cycle^omega.
// `cycle` must be nonempty.
bool accepts_lasso(const Nba& nba, std::span<const PropSet> prefix, std::span<const PropSet> cycle);

} // namespace ltlcoord::logic
