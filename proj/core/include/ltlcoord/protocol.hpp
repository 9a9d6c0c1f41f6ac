#pragma once

// Request / reply / confirmation messages, the agent filter and assignment
// solver, detour synthesis, and the ready/start handshake.

#include "ltlcoord/models.hpp"
#include "ltlcoord/planner.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ltlcoord::protocol {

using AgentId = std::string;
using models::ActionId;
using models::RoiId;

struct RequestEntry {
    ActionId sigma_d;
    RoiId pi_d;
    double T_c = 0.0;
    friend bool operator==(const RequestEntry&, const RequestEntry&) = default;
};

struct RequestMsg {
    AgentId requester;
    std::string request_id;
    ActionId collab_action;
    std::vector<RequestEntry> entries;

    double T_c() const { return entries.empty() ? 0.0 : entries.front().T_c; }
    // Cost reported by agents that cannot help.
    double sentinel() const { return 10.0 * T_c(); }
    friend bool operator==(const RequestMsg&, const RequestMsg&) = default;
};

struct ReplyEntry {
    ActionId sigma_d;
    RoiId pi_d;
    bool b = false;
    double t = 0.0;
    friend bool operator==(const ReplyEntry&, const ReplyEntry&) = default;
};

struct ReplyMsg {
    AgentId replier;
    std::string request_id;
    std::vector<ReplyEntry> entries;
    friend bool operator==(const ReplyMsg&, const ReplyMsg&) = default;
};

struct ConfirmEntry {
    ActionId sigma_d;
    RoiId pi_d;
    bool c = false;
    double T_d = -1.0;
    friend bool operator==(const ConfirmEntry&, const ConfirmEntry&) = default;
};

struct ConfirmMsg {
    AgentId requester;
    std::string request_id;
    std::vector<ConfirmEntry> entries;

    // Index of the entry this recipient was selected for.
    std::optional<std::size_t> selected() const;
    friend bool operator==(const ConfirmMsg&, const ConfirmMsg&) = default;
};

struct ReadyMsg {
    AgentId sender;
    std::string request_id;
    friend bool operator==(const ReadyMsg&, const ReadyMsg&) = default;
};

struct StartMsg {
    AgentId requester;
    std::string request_id;
    double start_at = 0.0;
    friend bool operator==(const StartMsg&, const StartMsg&) = default;
};

using Message = std::variant<RequestMsg, ReplyMsg, ConfirmMsg, ReadyMsg, StartMsg>;

const char* message_type(const Message& m);
std::string to_json(const Message& m);
// Throws std::invalid_argument on malformed input.
Message message_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Request (horizon check)

struct ChooseRoiRule {
    ActionId collab;
    RoiId collab_roi;
    ActionId assist;
    RoiId target;
    friend bool operator==(const ChooseRoiRule&, const ChooseRoiRule&) = default;
};

// Rules keyed by (collaborative action, its ROI, assisting action); without a
// matching rule the first candidate of the dependency is used.
class ChooseRoi {
public:
    ChooseRoi() = default;
    explicit ChooseRoi(std::vector<ChooseRoiRule> rules) : rules_(std::move(rules)) {}

    std::optional<RoiId> choose(const ActionId& collab, const RoiId& collab_roi, const models::Dependency& dep) const;
    const std::vector<ChooseRoiRule>& rules() const noexcept { return rules_; }

private:
    std::vector<ChooseRoiRule> rules_;
};

// One entry of an action sequence as seen by the horizon check.
struct UpcomingAction {
    ActionId action;
    RoiId roi;
    double duration = 0.0;
    bool collaborative = false;
};

struct RequestDraft {
    std::size_t offset = 0;  // s: the collaborative action is rho[l + s]
    ActionId collab_action;
    RoiId collab_roi;
    std::vector<RequestEntry> entries;
    double T_c = 0.0;
};

struct RequestOutcome {
    std::optional<RequestDraft> draft;
    std::string diagnostic;
};

// Scans rho[l+1], rho[l+2], ... while the accumulated time T_c (starting at
// T_rem) stays below H, and drafts a request for the first collaborative
// action found. Stops quietly when rho runs out.
RequestOutcome build_request(std::size_t l, std::span<const UpcomingAction> rho, double H, double T_rem,
                             const models::ActionModel& actions, const ChooseRoi& choose_roi);

// ---------------------------------------------------------------------------
// Reply (detour synthesis)

struct Detour {
    std::vector<std::size_t> path;
    std::vector<double> costs;
    std::vector<std::size_t> edges;
    std::size_t target_pos = 0;  // index of (pi_d, sigma_d) in path
    double t_d = 0.0;

    // Steps of the detour; the assisting step is at target_pos - 1.
    std::vector<planner::PlanStep> steps(const models::AgentFts& fts) const;
};

using DetourDict = std::map<std::pair<ActionId, RoiId>, Detour>;

struct ReplyOutcome {
    ReplyMsg reply;
    DetourDict detours;
};

// Reply of `self` while at tau[m] executing the action towards tau[m+1]; a
// detour is planned from tau[m+1] through (pi_d, sigma_d) to tau[m+2].
ReplyOutcome build_reply(const RequestMsg& req, const AgentId& self, std::size_t m, std::span<const std::size_t> tau,
                         const models::AgentFts& fts, bool available, double T_rem);

// ---------------------------------------------------------------------------
// Assignment

struct AssignmentInstance {
    std::size_t M = 0;
    std::vector<AgentId> agents;
    std::vector<std::vector<bool>> b;       // agents x M
    std::vector<std::vector<double>> t;     // agents x M, reply times
    std::vector<std::vector<double>> delta; // agents x M, |t - T_c|

    std::size_t size() const noexcept { return agents.size(); }
    // Subinstance over the given agent indices, kept in the given order.
    AssignmentInstance restrict_to(std::span<const std::size_t> keep) const;
    std::vector<std::string> validate() const;
};

// Replies are matched to the request entries by position.
AssignmentInstance instance_from_replies(const RequestMsg& req, std::span<const ReplyMsg> replies);

struct FilterResult {
    AssignmentInstance instance;
    std::vector<std::size_t> kept;  // indices into the input instance, ascending
};

// Per action, the M able agents closest in time (ties by agent position).
FilterResult filter_agents(const AssignmentInstance& inst);

// Incremental version of filter_agents for replies arriving one at a time.
class StreamingFilter {
public:
    explicit StreamingFilter(std::size_t M);

    // Agent index is the arrival position.
    void add(const ReplyMsg& reply, double T_c);
    std::size_t seen() const noexcept { return agents_.size(); }
    FilterResult result() const;

private:
    struct Candidate {
        double delta;
        std::size_t agent;
        auto operator<=>(const Candidate&) const = default;
    };
    std::size_t M_;
    std::vector<std::vector<Candidate>> best_;
    AssignmentInstance all_;
    std::vector<AgentId> agents_;
};

struct Assignment {
    bool feasible = false;
    std::vector<std::size_t> agent_for_action;  // indices into the instance
    double cost = 0.0;
};

// Exact minimum of sum(delta) over injective action->agent maps restricted to
// b = true. Lexicographically first optimum on ties.
Assignment solve_assignment(const AssignmentInstance& inst);

// Confirmation for every agent in `all_agents`. `inst` is the instance the
// assignment was solved on.
std::map<AgentId, ConfirmMsg> build_confirmations(const RequestMsg& req, const AssignmentInstance& inst,
                                                  const Assignment& assignment, std::span<const AgentId> all_agents);

// ---------------------------------------------------------------------------
// Synchronization

class SyncGroup {
public:
    SyncGroup(AgentId requester, std::set<AgentId> assisters);

    enum class Result { Wait, Start, Violation };

    Result ready(const AgentId& agent);
    Result requester_ready();

    bool started() const noexcept { return started_; }
    const AgentId& requester() const noexcept { return requester_; }
    const std::set<AgentId>& assisters() const noexcept { return assisters_; }
    const std::set<AgentId>& ready_set() const noexcept { return ready_; }
    const std::string& diagnostic() const noexcept { return diagnostic_; }

private:
    Result check();

    AgentId requester_;
    std::set<AgentId> assisters_;
    std::set<AgentId> ready_;
    bool requester_ready_ = false;
    bool started_ = false;
    std::string diagnostic_;
};

// Number of idle loops realizing a delay of T_delay.
std::size_t delay_loops(double T_delay, double idle_duration);

} // namespace ltlcoord::protocol
