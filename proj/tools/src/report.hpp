#pragma once

#include "ltlcoord/scenario.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ltlcoord::cli {

struct TraceRow {
    std::string agent;
    std::string action;
    std::string roi;
    double start = 0.0;
    double end = 0.0;
    std::string collab_id;
};

// Reads the trace CSV written by `run`. Throws std::runtime_error with the
// line number on malformed input.
std::vector<TraceRow> parse_trace_csv(std::string_view text);

struct AgentVerdict {
    std::string agent;
    std::size_t steps = 0;
    std::size_t hits = 0;
    bool rejected = false;
    bool satisfied = false;
};

// Replays every agent's trace through its task monitor.
std::vector<AgentVerdict> verify_trace(const std::vector<scenario::CompiledAgent>& agents,
                                       const std::vector<TraceRow>& rows, std::size_t min_hits);

struct SpreadRow {
    std::string collab_id;
    std::size_t participants = 0;
    double start = 0.0;
    double spread = 0.0;
};

// Start-time spread of each collaboration, ordered by first start.
std::vector<SpreadRow> sync_spreads(const std::vector<TraceRow>& rows);

} // namespace ltlcoord::cli
