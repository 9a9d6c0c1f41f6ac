#pragma once

// Deterministic discrete-event execution of a scenario: agents run their
// plans, coordinate through a latency bus, and every executed step is traced.

#include "ltlcoord/delay.hpp"
#include "ltlcoord/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ltlcoord::sim {

struct SimOptions {
    // Stop once every agent has closed this many cycles of its base plan.
    std::size_t cycles = 3;
    std::optional<double> max_time;
    std::optional<std::uint64_t> seed;
    std::optional<DelayConfig> delays;
    std::optional<DelayModel> latency;
};

struct TraceRecord {
    std::string agent;
    std::string action;
    std::string roi;  // ROI of the state the step ends in
    double start = 0.0;
    double end = 0.0;
    std::string collab_id;
    models::StepKind kind = models::StepKind::Move;
};

struct Participant {
    std::string agent;
    std::string action;
    std::string roi;
    std::optional<double> start;
};

struct CollabRecord {
    std::string id;
    std::string requester;
    std::string action;
    std::string roi;
    double requested_at = 0.0;  // first request for this collaborative step
    double confirmed_at = 0.0;
    std::size_t retries = 0;
    std::vector<Participant> participants;  // requester first

    bool started() const;
    // max - min start time over participants; 0 when not started.
    double spread() const;
    std::optional<double> start_time() const;
};

struct AgentSummary {
    std::string id;
    std::size_t cycles = 0;
    std::size_t accepting_hits = 0;
    bool monitor_rejected = false;
    std::size_t steps = 0;
    std::size_t requests = 0;
    std::size_t retries = 0;
    double added_delay = 0.0;
    std::size_t assists = 0;
    double plan_prefix_cost = 0.0;
    double plan_suffix_cost = 0.0;
};

struct SimReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::size_t cycles_target = 0;
    std::string stop_reason;
    std::string diagnosis;
    double end_time = 0.0;
    std::size_t events = 0;
    std::map<std::string, std::size_t> messages;
    std::size_t sentinel_violations = 0;
    std::size_t degenerate_sentinels = 0;
    std::size_t protocol_violations = 0;
    std::size_t double_bookings = 0;
    std::vector<std::string> warnings;
    std::vector<TraceRecord> trace;
    std::vector<CollabRecord> collaborations;
    std::vector<AgentSummary> agents;

    bool deadlocked() const { return stop_reason == "deadlock"; }
    bool all_synchronized() const;
    std::size_t unstarted_collaborations() const;
};

class World {
public:
    World(const scenario::Scenario& s, SimOptions options);
    ~World();
    World(const World&) = delete;
    World& operator=(const World&) = delete;

    double now() const;
    // Processes one event; false when nothing is left to do.
    bool step();
    bool finished() const;
    SimReport run();
    SimReport report() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SimReport run_simulation(const scenario::Scenario& s, const SimOptions& options);

std::string trace_csv(const SimReport& r);
std::string collaborations_csv(const SimReport& r);
std::string report_json(const SimReport& r);

} // namespace ltlcoord::sim
