#pragma once

#include "ltlcoord/models.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ltlcoord::sim {

// A nonnegative random duration: zero, a constant, or uniform on [lo, hi].
struct DelayModel {
    enum class Kind { None, Fixed, Uniform };

    Kind kind = Kind::None;
    double lo = 0.0;
    double hi = 0.0;

    static DelayModel none() { return {}; }
    static DelayModel fixed(double d) { return {Kind::Fixed, d, d}; }
    static DelayModel uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }

    double max() const { return kind == Kind::None ? 0.0 : hi; }
    std::vector<std::string> validate() const;
    std::string to_string() const;
    friend bool operator==(const DelayModel&, const DelayModel&) = default;
};

// Parses "none", "fixed:D" or "uniform:LO:HI".
std::optional<DelayModel> parse_delay(const std::string& text);

double sample_delay(const DelayModel& model, std::mt19937_64& rng);

// Injected overrun per step kind. Idle loops are never delayed.
struct DelayConfig {
    DelayModel move;
    DelayModel local;
    DelayModel collaborative;
    DelayModel assisting;

    static DelayConfig all(const DelayModel& m) { return {m, m, m, m}; }
    const DelayModel& for_kind(models::StepKind k) const;
    friend bool operator==(const DelayConfig&, const DelayConfig&) = default;
};

} // namespace ltlcoord::sim
