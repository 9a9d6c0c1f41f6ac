#include "ltlcoord/protocol.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ltlcoord::protocol {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Messages

std::optional<std::size_t> ConfirmMsg::selected() const
{
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].c)
            return i;
    }
    return std::nullopt;
}

const char* message_type(const Message& m)
{
    struct Visitor {
        const char* operator()(const RequestMsg&) const { return "request"; }
        const char* operator()(const ReplyMsg&) const { return "reply"; }
        const char* operator()(const ConfirmMsg&) const { return "confirm"; }
        const char* operator()(const ReadyMsg&) const { return "ready"; }
        const char* operator()(const StartMsg&) const { return "start"; }
    };
    return std::visit(Visitor{}, m);
}

namespace {

json encode(const RequestMsg& m)
{
    json entries = json::array();
    for (const auto& e : m.entries)
        entries.push_back({{"sigma_d", e.sigma_d}, {"pi_d", e.pi_d}, {"T_c", e.T_c}});
    return {{"requester", m.requester},
            {"request_id", m.request_id},
            {"collab_action", m.collab_action},
            {"entries", entries}};
}

json encode(const ReplyMsg& m)
{
    json entries = json::array();
    for (const auto& e : m.entries)
        entries.push_back({{"sigma_d", e.sigma_d}, {"pi_d", e.pi_d}, {"b", e.b}, {"t", e.t}});
    return {{"replier", m.replier}, {"request_id", m.request_id}, {"entries", entries}};
}

json encode(const ConfirmMsg& m)
{
    json entries = json::array();
    for (const auto& e : m.entries)
        entries.push_back({{"sigma_d", e.sigma_d}, {"pi_d", e.pi_d}, {"c", e.c}, {"T_d", e.T_d}});
    return {{"requester", m.requester}, {"request_id", m.request_id}, {"entries", entries}};
}

json encode(const ReadyMsg& m)
{
    return {{"sender", m.sender}, {"request_id", m.request_id}};
}

json encode(const StartMsg& m)
{
    return {{"requester", m.requester}, {"request_id", m.request_id}, {"start_at", m.start_at}};
}

} // namespace

std::string to_json(const Message& m)
{
    json body = std::visit([](const auto& msg) { return encode(msg); }, m);
    body["type"] = message_type(m);
    return body.dump();
}

Message message_from_json(std::string_view text)
{
    try {
        const json j = json::parse(text);
        const std::string type = j.at("type").get<std::string>();
        if (type == "request") {
            RequestMsg m;
            m.requester = j.at("requester").get<std::string>();
            m.request_id = j.at("request_id").get<std::string>();
            m.collab_action = j.at("collab_action").get<std::string>();
            for (const auto& e : j.at("entries"))
                m.entries.push_back({e.at("sigma_d").get<std::string>(), e.at("pi_d").get<std::string>(),
                                     e.at("T_c").get<double>()});
            return m;
        }
        if (type == "reply") {
            ReplyMsg m;
            m.replier = j.at("replier").get<std::string>();
            m.request_id = j.at("request_id").get<std::string>();
            for (const auto& e : j.at("entries"))
                m.entries.push_back({e.at("sigma_d").get<std::string>(), e.at("pi_d").get<std::string>(),
                                     e.at("b").get<bool>(), e.at("t").get<double>()});
            return m;
        }
        if (type == "confirm") {
            ConfirmMsg m;
            m.requester = j.at("requester").get<std::string>();
            m.request_id = j.at("request_id").get<std::string>();
            for (const auto& e : j.at("entries"))
                m.entries.push_back({e.at("sigma_d").get<std::string>(), e.at("pi_d").get<std::string>(),
                                     e.at("c").get<bool>(), e.at("T_d").get<double>()});
            return m;
        }
        if (type == "ready")
            return ReadyMsg{j.at("sender").get<std::string>(), j.at("request_id").get<std::string>()};
        if (type == "start")
            return StartMsg{j.at("requester").get<std::string>(), j.at("request_id").get<std::string>(),
                            j.at("start_at").get<double>()};
        throw std::invalid_argument("unknown message type '" + type + "'");
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed message: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Request

std::optional<RoiId> ChooseRoi::choose(const ActionId& collab, const RoiId& collab_roi,
                                       const models::Dependency& dep) const
{
    for (const auto& r : rules_) {
        if (r.collab == collab && r.collab_roi == collab_roi && r.assist == dep.action)
            return r.target;
    }
    if (dep.candidates.empty())
        return std::nullopt;
    return dep.candidates.front();
}

RequestOutcome build_request(std::size_t l, std::span<const UpcomingAction> rho, double H, double T_rem,
                             const models::ActionModel& actions, const ChooseRoi& choose_roi)
{
    RequestOutcome out;
    double T_c = T_rem;
    for (std::size_t s = 1; T_c < H; ++s) {
        if (l + s >= rho.size())
            return out;
        const UpcomingAction& a = rho[l + s];
        if (a.collaborative) {
            const models::ActionSpec* spec = actions.find(a.action);
            if (!spec || spec->kind != models::ActionKind::Collaborative) {
                out.diagnostic = "action '" + a.action + "' is not collaborative in the action model";
                return out;
            }
            RequestDraft d;
            d.offset = s;
            d.collab_action = a.action;
            d.collab_roi = a.roi;
            d.T_c = T_c;
            for (const auto& dep : spec->depd) {
                auto roi = choose_roi.choose(a.action, a.roi, dep);
                if (!roi) {
                    out.diagnostic = "no ROI for '" + dep.action + "' assisting '" + a.action + "' at " + a.roi;
                    return out;
                }
                d.entries.push_back({dep.action, *roi, T_c});
            }
            out.draft = std::move(d);
            return out;
        }
        T_c += a.duration;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reply

std::vector<planner::PlanStep> Detour::steps(const models::AgentFts& fts) const
{
    std::vector<planner::PlanStep> out;
    for (auto ei : edges) {
        const auto& e = fts.edges[ei];
        out.push_back({e.action, e.duration, e.src, e.dst, ei, e.kind});
    }
    return out;
}

ReplyOutcome build_reply(const RequestMsg& req, const AgentId& self, std::size_t m, std::span<const std::size_t> tau,
                         const models::AgentFts& fts, bool available, double T_rem)
{
    ReplyOutcome out;
    out.reply.replier = self;
    out.reply.request_id = req.request_id;
    const double K = req.sentinel();
    const bool can_plan = available && self != req.requester && m + 2 < tau.size();

    for (const auto& e : req.entries) {
        std::optional<std::size_t> target = can_plan ? fts.find(e.pi_d, e.sigma_d) : std::nullopt;
        if (!target) {
            out.reply.entries.push_back({e.sigma_d, e.pi_d, false, K});
            continue;
        }
        const std::size_t init = tau[m + 1];
        const std::size_t fin = tau[m + 2];

        // From the target state itself the detour must still perform the
        // assisting action, so D1 becomes its self-loop.
        std::optional<planner::ShortestPath> d1;
        if (init == *target) {
            for (auto ei : fts.out[init]) {
                if (fts.edges[ei].dst == init && fts.edges[ei].action == e.sigma_d) {
                    d1 = planner::ShortestPath{{init, init}, {fts.edges[ei].duration}, {ei}};
                    break;
                }
            }
        } else {
            d1 = planner::dijkstra_with_costs(fts, init, *target);
        }
        auto d2 = planner::dijkstra_with_costs(fts, *target, fin);
        if (!d1 || !d2) {
            out.reply.entries.push_back({e.sigma_d, e.pi_d, false, K});
            continue;
        }

        Detour d;
        d.path = d1->path;
        d.path.insert(d.path.end(), d2->path.begin() + 1, d2->path.end());
        d.costs = d1->costs;
        d.costs.insert(d.costs.end(), d2->costs.begin(), d2->costs.end());
        d.edges = d1->edges;
        d.edges.insert(d.edges.end(), d2->edges.begin(), d2->edges.end());
        d.target_pos = d1->path.size() - 1;
        d.t_d = 0.0;
        for (std::size_t i = 0; i + 1 < d1->costs.size(); ++i)
            d.t_d += d1->costs[i];
        out.reply.entries.push_back({e.sigma_d, e.pi_d, true, T_rem + d.t_d});
        out.detours[{e.sigma_d, e.pi_d}] = std::move(d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Assignment

AssignmentInstance AssignmentInstance::restrict_to(std::span<const std::size_t> keep) const
{
    AssignmentInstance r;
    r.M = M;
    for (auto i : keep) {
        r.agents.push_back(agents.at(i));
        r.b.push_back(b[i]);
        r.t.push_back(t[i]);
        r.delta.push_back(delta[i]);
    }
    return r;
}

std::vector<std::string> AssignmentInstance::validate() const
{
    std::vector<std::string> v;
    if (M == 0)
        v.emplace_back("instance has no actions");
    if (b.size() != agents.size() || t.size() != agents.size() || delta.size() != agents.size())
        v.emplace_back("matrix row count does not match agent count");
    for (std::size_t j = 0; j < std::min({b.size(), t.size(), delta.size()}); ++j) {
        if (b[j].size() != M || t[j].size() != M || delta[j].size() != M)
            v.push_back("row " + std::to_string(j) + " does not have M columns");
        for (double d : delta[j]) {
            if (!(d >= 0.0))
                v.push_back("row " + std::to_string(j) + " has a negative delta");
        }
    }
    return v;
}

AssignmentInstance instance_from_replies(const RequestMsg& req, std::span<const ReplyMsg> replies)
{
    AssignmentInstance inst;
    inst.M = req.entries.size();
    const double T_c = req.T_c();
    for (const auto& r : replies) {
        if (r.entries.size() != inst.M)
            throw std::invalid_argument("reply from '" + r.replier + "' does not match the request");
        inst.agents.push_back(r.replier);
        std::vector<bool> b;
        std::vector<double> t, delta;
        for (const auto& e : r.entries) {
            b.push_back(e.b);
            t.push_back(e.t);
            delta.push_back(std::abs(e.t - T_c));
        }
        inst.b.push_back(std::move(b));
        inst.t.push_back(std::move(t));
        inst.delta.push_back(std::move(delta));
    }
    return inst;
}

FilterResult filter_agents(const AssignmentInstance& inst)
{
    std::set<std::size_t> keep;
    std::vector<std::size_t> order(inst.size());
    for (std::size_t d = 0; d < inst.M; ++d) {
        order.clear();
        for (std::size_t j = 0; j < inst.size(); ++j) {
            if (inst.b[j][d])
                order.push_back(j);
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return inst.delta[a][d] < inst.delta[b][d]; });
        for (std::size_t k = 0; k < std::min(order.size(), inst.M); ++k)
            keep.insert(order[k]);
    }
    FilterResult r;
    r.kept.assign(keep.begin(), keep.end());
    r.instance = inst.restrict_to(r.kept);
    return r;
}

StreamingFilter::StreamingFilter(std::size_t M) : M_(M), best_(M)
{
    all_.M = M;
}

void StreamingFilter::add(const ReplyMsg& reply, double T_c)
{
    if (reply.entries.size() != M_)
        throw std::invalid_argument("reply from '" + reply.replier + "' does not match the request");
    const std::size_t j = agents_.size();
    agents_.push_back(reply.replier);
    std::vector<bool> b;
    std::vector<double> t, delta;
    for (std::size_t d = 0; d < M_; ++d) {
        const auto& e = reply.entries[d];
        b.push_back(e.b);
        t.push_back(e.t);
        delta.push_back(std::abs(e.t - T_c));
        if (!e.b)
            continue;
        auto& top = best_[d];
        const Candidate c{delta.back(), j};
        if (top.size() == M_ && !(c < top.back()))
            continue;
        top.insert(std::upper_bound(top.begin(), top.end(), c), c);
        if (top.size() > M_)
            top.pop_back();
    }
    all_.agents.push_back(reply.replier);
    all_.b.push_back(std::move(b));
    all_.t.push_back(std::move(t));
    all_.delta.push_back(std::move(delta));
}

FilterResult StreamingFilter::result() const
{
    std::set<std::size_t> keep;
    for (const auto& top : best_) {
        for (const auto& c : top)
            keep.insert(c.agent);
    }
    FilterResult r;
    r.kept.assign(keep.begin(), keep.end());
    r.instance = all_.restrict_to(r.kept);
    return r;
}

namespace {

class Search {
public:
    Search(const AssignmentInstance& inst, bool prune) : inst_(inst), prune_(prune), used_(inst.size(), false)
    {
        current_.resize(inst.M);
        // Cheapest able delta per remaining action, for the pruning bound.
        if (prune_) {
            bound_.assign(inst.M + 1, 0.0);
            for (std::size_t d = inst.M; d-- > 0;) {
                double lo = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < inst.size(); ++j) {
                    if (inst.b[j][d])
                        lo = std::min(lo, inst.delta[j][d]);
                }
                bound_[d] = bound_[d + 1] + lo;
            }
        }
    }

    Assignment run()
    {
        visit(0, 0.0);
        return best_;
    }

private:
    void visit(std::size_t d, double cost)
    {
        if (d == inst_.M) {
            if (!best_.feasible || cost < best_.cost) {
                best_.feasible = true;
                best_.cost = cost;
                best_.agent_for_action = current_;
            }
            return;
        }
        if (prune_ && best_.feasible && cost + bound_[d] >= best_.cost)
            return;
        for (std::size_t j = 0; j < inst_.size(); ++j) {
            if (used_[j] || !inst_.b[j][d])
                continue;
            used_[j] = true;
            current_[d] = j;
            visit(d + 1, cost + inst_.delta[j][d]);
            used_[j] = false;
        }
    }

    const AssignmentInstance& inst_;
    bool prune_;
    std::vector<bool> used_;
    std::vector<std::size_t> current_;
    std::vector<double> bound_;
    Assignment best_;
};

} // namespace

Assignment solve_assignment(const AssignmentInstance& inst)
{
    if (inst.M == 0)
        return {true, {}, 0.0};
    return Search(inst, inst.M > 6).run();
}

std::map<AgentId, ConfirmMsg> build_confirmations(const RequestMsg& req, const AssignmentInstance& inst,
                                                  const Assignment& assignment, std::span<const AgentId> all_agents)
{
    std::map<AgentId, std::size_t> chosen;  // agent -> action
    if (assignment.feasible) {
        for (std::size_t d = 0; d < assignment.agent_for_action.size(); ++d)
            chosen[inst.agents.at(assignment.agent_for_action[d])] = d;
    }
    std::map<AgentId, ConfirmMsg> out;
    for (const auto& a : all_agents) {
        ConfirmMsg m;
        m.requester = req.requester;
        m.request_id = req.request_id;
        auto it = chosen.find(a);
        for (std::size_t d = 0; d < req.entries.size(); ++d) {
            const auto& e = req.entries[d];
            if (it != chosen.end() && it->second == d) {
                const std::size_t j = assignment.agent_for_action[d];
                m.entries.push_back({e.sigma_d, e.pi_d, true, inst.t[j][d]});
            } else {
                m.entries.push_back({e.sigma_d, e.pi_d, false, -1.0});
            }
        }
        out.emplace(a, std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synchronization

SyncGroup::SyncGroup(AgentId requester, std::set<AgentId> assisters)
    : requester_(std::move(requester)), assisters_(std::move(assisters))
{
}

SyncGroup::Result SyncGroup::ready(const AgentId& agent)
{
    if (!assisters_.contains(agent)) {
        diagnostic_ = "Ready from non-participant '" + agent + "'";
        return Result::Violation;
    }
    if (started_) {
        diagnostic_ = "Ready from '" + agent + "' after Start";
        return Result::Violation;
    }
    ready_.insert(agent);
    return check();
}

SyncGroup::Result SyncGroup::requester_ready()
{
    if (started_) {
        diagnostic_ = "requester ready after Start";
        return Result::Violation;
    }
    requester_ready_ = true;
    return check();
}

SyncGroup::Result SyncGroup::check()
{
    if (requester_ready_ && ready_ == assisters_) {
        started_ = true;
        return Result::Start;
    }
    return Result::Wait;
}

std::size_t delay_loops(double T_delay, double idle_duration)
{
    if (!(idle_duration > 0.0))
        throw std::invalid_argument("idle duration must be positive");
    if (!(T_delay > 0.0))
        return 0;
    return static_cast<std::size_t>(std::ceil(T_delay / idle_duration - 1e-9));
}

} // namespace ltlcoord::protocol
