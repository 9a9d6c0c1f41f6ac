#include "ltlcoord/sim.hpp"

#include "ltlcoord/planner.hpp"
#include "ltlcoord/protocol.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <random>
#include <set>
#include <tuple>

namespace ltlcoord::sim {

bool CollabRecord::started() const
{
    return !participants.empty() &&
           std::all_of(participants.begin(), participants.end(), [](const Participant& p) { return p.start.has_value(); });
}

double CollabRecord::spread() const
{
    if (!started())
        return 0.0;
    double lo = *participants.front().start;
    double hi = lo;
    for (const auto& p : participants) {
        lo = std::min(lo, *p.start);
        hi = std::max(hi, *p.start);
    }
    return hi - lo;
}

std::optional<double> CollabRecord::start_time() const
{
    if (participants.empty())
        return std::nullopt;
    return participants.front().start;
}

bool SimReport::all_synchronized() const
{
    return std::all_of(collaborations.begin(), collaborations.end(),
                       [](const CollabRecord& c) { return c.started() && c.spread() == 0.0; });
}

std::size_t SimReport::unstarted_collaborations() const
{
    return static_cast<std::size_t>(
        std::count_if(collaborations.begin(), collaborations.end(), [](const CollabRecord& c) { return !c.started(); }));
}

namespace {

using namespace protocol;
using models::StepKind;

enum class EventKind { ActionCompleted, MessageDelivered, TimerFired };
enum class TimerKind { Retry, SyncStart };

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::ActionCompleted;
    std::size_t agent = 0;
    std::size_t from = 0;
    std::optional<Message> msg;
    TimerKind timer = TimerKind::Retry;
    std::uint64_t token = 0;
    std::string collab;
};

struct Later {
    bool operator()(const Event& a, const Event& b) const
    {
        return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
    }
};

enum class Phase { Idle, Executing, Holding, AwaitRrc, AwaitReady, AwaitStart };

const char* phase_name(Phase p)
{
    switch (p) {
    case Phase::Idle:
        return "idle";
    case Phase::Executing:
        return "executing";
    case Phase::Holding:
        return "holding for confirmation";
    case Phase::AwaitRrc:
        return "waiting for its own request to resolve";
    case Phase::AwaitReady:
        return "waiting for Ready";
    case Phase::AwaitStart:
        return "waiting for Start";
    }
    return "?";
}

enum class Status { Requested, Confirmed, Retry };

struct PendingReply {
    std::string request_id;
    std::size_t requester = 0;
    std::uint64_t serial = 0;
    DetourDict detours;
};

struct OwnRrc {
    RequestMsg req;
    std::uint64_t serial = 0;
    StreamingFilter filter;
    std::size_t replies = 0;
};

planner::Plan plan_for(const scenario::CompiledAgent& c)
{
    try {
        return planner::synthesize(c.fts, c.nba);
    } catch (const planner::InfeasibleTask& e) {
        throw planner::InfeasibleTask("agent " + c.config.id + ": " + e.what());
    }
}

struct Runtime {
    Runtime(std::size_t i, const scenario::CompiledAgent& c)
        : index(i), ca(&c), plan(plan_for(c)), monitor(c.nba)
    {
        live = std::make_unique<planner::LivePlan>(plan);
        monitor.step(c.fts.labels[c.fts.initial]);
        summary.id = c.config.id;
        summary.plan_prefix_cost = plan.prefix_cost;
        summary.plan_suffix_cost = plan.suffix_cost;
    }

    std::size_t index;
    const scenario::CompiledAgent* ca;
    planner::Plan plan;
    std::unique_ptr<planner::LivePlan> live;
    logic::Monitor monitor;

    Phase phase = Phase::Idle;
    double started = 0.0;
    double nominal = 0.0;
    bool available = true;
    std::size_t active_assists = 0;

    std::optional<PendingReply> pending;
    std::optional<OwnRrc> own;
    std::map<std::uint64_t, Status> status;
    std::map<std::uint64_t, std::string> requester_tag;
    std::map<std::uint64_t, std::string> assist_tag;
    std::set<std::uint64_t> restore_at;
    std::set<std::uint64_t> uncoordinated;
    std::map<std::uint64_t, std::size_t> retries_for;
    std::map<std::uint64_t, double> first_request_at;
    std::size_t request_counter = 0;
    AgentSummary summary;

    const models::AgentFts& fts() const { return ca->fts; }
    const std::string& id() const { return ca->config.id; }
};

struct Collab {
    std::size_t record = 0;
    std::size_t requester = 0;
    std::map<std::size_t, std::size_t> participant_of;  // agent index -> participant slot
    SyncGroup group;
};

} // namespace

struct World::Impl {
    scenario::Scenario scen;
    SimOptions opt;
    std::vector<scenario::CompiledAgent> compiled;
    std::vector<std::unique_ptr<Runtime>> agents;
    std::vector<AgentId> ids;
    std::map<AgentId, std::size_t> index_of;
    protocol::ChooseRoi choose_roi;

    DelayConfig delays;
    DelayModel latency;
    double max_time = 0.0;
    std::mt19937_64 delay_rng;
    std::mt19937_64 latency_rng;

    std::priority_queue<Event, std::vector<Event>, Later> queue;
    std::uint64_t seq = 0;
    double clock = 0.0;
    std::map<std::pair<std::size_t, std::size_t>, double> channel_last;
    std::map<std::string, Collab> collabs;
    std::size_t unstarted = 0;
    std::set<std::string> warned;

    SimReport rep;
    bool done = false;

    Impl(const scenario::Scenario& s, SimOptions o) : scen(s), opt(std::move(o))
    {
        const auto report = scenario::validate(scen);
        if (!report.ok())
            throw scenario::ScenarioError(report.errors);
        compiled = scenario::compile(scen);
        choose_roi = protocol::ChooseRoi(scen.choose_roi);
        delays = opt.delays.value_or(scen.delays);
        latency = opt.latency.value_or(scen.latency);
        max_time = opt.max_time.value_or(scen.max_time);
        const std::uint64_t seed = opt.seed.value_or(scen.seed);
        std::seed_seq dseq{seed, std::uint64_t{1}};
        std::seed_seq lseq{seed, std::uint64_t{2}};
        delay_rng.seed(dseq);
        latency_rng.seed(lseq);

        rep.scenario = scen.name;
        rep.seed = seed;
        rep.cycles_target = opt.cycles;
        for (const auto& c : compiled) {
            for (const auto& w : c.warnings)
                rep.warnings.push_back(c.config.id + ": " + w);
        }
        for (std::size_t i = 0; i < compiled.size(); ++i) {
            agents.push_back(std::make_unique<Runtime>(i, compiled[i]));
            ids.push_back(compiled[i].config.id);
            index_of[compiled[i].config.id] = i;
        }
        for (std::size_t i = 0; i < agents.size(); ++i)
            try_advance(i);
    }

    void warn(const std::string& w)
    {
        if (warned.insert(w).second)
            rep.warnings.push_back(w);
    }

    void schedule(Event e)
    {
        e.seq = seq++;
        queue.push(std::move(e));
    }

    double reserve(std::size_t from, std::size_t to)
    {
        const double lat = sample_delay(latency, latency_rng);
        double& last = channel_last[{from, to}];
        const double d = std::max(clock + lat, last);
        last = d;
        return d;
    }

    void deliver(std::size_t from, std::size_t to, Message msg, double at)
    {
        ++rep.messages[message_type(msg)];
        Event e;
        e.time = at;
        e.kind = EventKind::MessageDelivered;
        e.agent = to;
        e.from = from;
        e.msg = std::move(msg);
        schedule(std::move(e));
    }

    void send(std::size_t from, std::size_t to, Message msg) { deliver(from, to, std::move(msg), reserve(from, to)); }

    void timer(std::size_t agent, double at, TimerKind kind, std::uint64_t token, std::string collab = {})
    {
        Event e;
        e.time = at;
        e.kind = EventKind::TimerFired;
        e.agent = agent;
        e.timer = kind;
        e.token = token;
        e.collab = std::move(collab);
        schedule(std::move(e));
    }

    double remaining(const Runtime& a) const { return std::max(a.nominal - (clock - a.started), 0.0); }

    // -----------------------------------------------------------------------
    // Execution

    void try_advance(std::size_t i)
    {
        Runtime& a = *agents[i];
        const planner::LiveStep& front = a.live->at(0);
        const std::uint64_t serial = front.serial;
        if (a.pending && a.pending->serial == serial) {
            a.phase = Phase::Holding;
            return;
        }
        if (front.step.kind == StepKind::Collaborative && !a.uncoordinated.contains(serial)) {
            auto st = a.status.find(serial);
            if (st == a.status.end()) {
                // Reached without a request in flight: ask now, with no slack.
                if (!a.own) {
                    std::vector<UpcomingAction> rho = {{}, upcoming(a, 0)};
                    auto out = build_request(0, rho, a.ca->horizon, 0.0, a.ca->actions, choose_roi);
                    if (out.draft) {
                        send_request(i, *out.draft, serial);
                    } else {
                        warn(a.id() + ": " + out.diagnostic + "; running the step uncoordinated");
                        a.uncoordinated.insert(serial);
                    }
                }
                if (!a.uncoordinated.contains(serial)) {
                    a.phase = Phase::AwaitRrc;
                    return;
                }
            } else if (st->second != Status::Confirmed) {
                a.phase = Phase::AwaitRrc;
                return;
            } else {
                Collab& c = collabs.at(a.requester_tag.at(serial));
                a.phase = Phase::AwaitReady;
                const auto res = c.group.requester_ready();
                if (res == SyncGroup::Result::Start)
                    begin_sync(c);
                else if (res == SyncGroup::Result::Violation)
                    violation(c.group.diagnostic());
                return;
            }
        }
        if (auto t = a.assist_tag.find(serial); t != a.assist_tag.end()) {
            const Collab& c = collabs.at(t->second);
            a.phase = Phase::AwaitStart;
            send(i, c.requester, ReadyMsg{a.id(), t->second});
            return;
        }
        start_step(i);
    }

    UpcomingAction upcoming(Runtime& a, std::size_t k)
    {
        const auto& s = a.live->at(k).step;
        return {s.action, a.fts().states[s.to].roi, s.duration, s.kind == StepKind::Collaborative};
    }

    std::string collab_of(const Runtime& a, std::uint64_t serial) const
    {
        if (auto t = a.requester_tag.find(serial); t != a.requester_tag.end())
            return t->second;
        if (auto t = a.assist_tag.find(serial); t != a.assist_tag.end())
            return t->second;
        return {};
    }

    void start_step(std::size_t i)
    {
        Runtime& a = *agents[i];
        const planner::LiveStep& front = a.live->at(0);
        a.phase = Phase::Executing;
        a.started = clock;
        a.nominal = front.step.duration;
        const double overrun = front.delay ? 0.0 : sample_delay(delays.for_kind(front.step.kind), delay_rng);

        if (const std::string cid = collab_of(a, front.serial); !cid.empty()) {
            Collab& c = collabs.at(cid);
            auto& rec = rep.collaborations[c.record];
            auto& slot = rec.participants[c.participant_of.at(i)];
            if (slot.start)
                violation("collaboration " + cid + ": " + a.id() + " started twice");
            slot.start = clock;
            if (rec.started())
                --unstarted;
        }

        Event e;
        e.time = clock + a.nominal + overrun;
        e.kind = EventKind::ActionCompleted;
        e.agent = i;
        schedule(std::move(e));

        if (!a.own && !a.pending)
            horizon_check(i, a.nominal);
    }

    void horizon_check(std::size_t i, double T_rem)
    {
        Runtime& a = *agents[i];
        const double H = a.ca->horizon;
        std::vector<UpcomingAction> rho;
        rho.push_back(upcoming(a, 0));
        double acc = T_rem;
        for (std::size_t k = 1; acc < H && k < 4096; ++k) {
            rho.push_back(upcoming(a, k));
            acc += rho.back().duration;
        }
        auto out = build_request(0, rho, H, T_rem, a.ca->actions, choose_roi);
        if (!out.draft) {
            if (!out.diagnostic.empty())
                warn(a.id() + ": " + out.diagnostic);
            return;
        }
        const std::uint64_t serial = a.live->at(out.draft->offset).serial;
        if (a.status.contains(serial) || a.uncoordinated.contains(serial))
            return;
        send_request(i, *out.draft, serial);
    }

    void send_request(std::size_t i, const RequestDraft& draft, std::uint64_t serial)
    {
        Runtime& a = *agents[i];
        RequestMsg req;
        req.requester = a.id();
        req.request_id = a.id() + "#" + std::to_string(++a.request_counter);
        req.collab_action = draft.collab_action;
        req.entries = draft.entries;
        if (draft.T_c <= 0.0)
            ++rep.degenerate_sentinels;

        a.own = OwnRrc{req, serial, StreamingFilter(req.entries.size()), 0};
        a.status[serial] = Status::Requested;
        a.first_request_at.emplace(serial, clock);
        ++a.summary.requests;

        // The requester never assists itself.
        const auto self = build_reply(req, a.id(), 0, {}, a.fts(), false, 0.0);
        a.own->filter.add(self.reply, req.T_c());

        for (std::size_t j = 0; j < agents.size(); ++j) {
            if (j != i)
                send(i, j, req);
        }
        if (agents.size() == 1)
            resolve(i);
    }

    void resolve(std::size_t i)
    {
        Runtime& a = *agents[i];
        OwnRrc own = std::move(*a.own);
        a.own.reset();
        const FilterResult fr = own.filter.result();
        const Assignment asg = solve_assignment(fr.instance);
        const auto confs = build_confirmations(own.req, fr.instance, asg, ids);
        for (std::size_t j = 0; j < agents.size(); ++j) {
            if (j != i)
                send(i, j, confs.at(ids[j]));
        }

        if (asg.feasible) {
            const std::string rid = own.req.request_id;
            CollabRecord rec;
            rec.id = rid;
            rec.requester = a.id();
            rec.action = own.req.collab_action;
            const auto k = a.live->position_of(own.serial);
            rec.roi = a.fts().states[a.live->at(*k).step.to].roi;
            rec.requested_at = a.first_request_at.at(own.serial);
            rec.confirmed_at = clock;
            rec.retries = a.retries_for[own.serial];
            rec.participants.push_back({a.id(), rec.action, rec.roi, std::nullopt});

            Collab c{rep.collaborations.size(), i, {}, SyncGroup(a.id(), {})};
            c.participant_of[i] = 0;
            std::set<AgentId> assisters;
            for (std::size_t d = 0; d < asg.agent_for_action.size(); ++d) {
                const AgentId& who = fr.instance.agents[asg.agent_for_action[d]];
                c.participant_of[index_of.at(who)] = rec.participants.size();
                rec.participants.push_back({who, own.req.entries[d].sigma_d, own.req.entries[d].pi_d, std::nullopt});
                assisters.insert(who);
            }
            c.group = SyncGroup(a.id(), assisters);
            rep.collaborations.push_back(std::move(rec));
            collabs.emplace(rid, std::move(c));
            ++unstarted;

            a.status[own.serial] = Status::Confirmed;
            a.requester_tag[own.serial] = rid;
            a.available = false;
        } else {
            a.status[own.serial] = Status::Retry;
            ++a.retries_for[own.serial];
            ++a.summary.retries;
            const auto k = a.live->position_of(own.serial);
            const std::size_t n = delay_loops(a.ca->t_delay, a.ca->actions.idle_duration());
            a.live->insert_delay(*k, a.fts(), n);
            a.summary.added_delay += static_cast<double>(n) * a.ca->actions.idle_duration();
            timer(i, clock + a.ca->t_delay, TimerKind::Retry, own.serial);
        }
        if (a.phase == Phase::AwaitRrc)
            try_advance(i);
    }

    void begin_sync(Collab& c)
    {
        Runtime& r = *agents[c.requester];
        const std::string& rid = rep.collaborations[c.record].id;
        std::vector<std::pair<std::size_t, double>> out;
        double start_at = clock;
        for (const auto& [agent, slot] : c.participant_of) {
            if (agent == c.requester)
                continue;
            const double d = reserve(c.requester, agent);
            out.emplace_back(agent, d);
            start_at = std::max(start_at, d);
        }
        for (const auto& [agent, d] : out)
            deliver(c.requester, agent, StartMsg{r.id(), rid, start_at}, d);
        r.phase = Phase::AwaitStart;
        timer(c.requester, start_at, TimerKind::SyncStart, 0, rid);
    }

    void violation(const std::string& what)
    {
        ++rep.protocol_violations;
        warn("protocol violation: " + what);
    }

    // -----------------------------------------------------------------------
    // Event handlers

    void on_completed(std::size_t i)
    {
        Runtime& a = *agents[i];
        const planner::LiveStep front = a.live->at(0);
        const auto& to = a.fts().states[front.step.to];
        rep.trace.push_back({a.id(), front.step.action, to.roi, a.started, clock, collab_of(a, front.serial),
                             front.step.kind});
        a.monitor.step(a.fts().labels[front.step.to]);
        ++a.summary.steps;

        if (a.restore_at.erase(front.serial)) {
            a.available = true;
            --a.active_assists;
        }
        if (a.requester_tag.erase(front.serial))
            a.available = true;
        a.assist_tag.erase(front.serial);
        a.status.erase(front.serial);
        a.retries_for.erase(front.serial);
        a.first_request_at.erase(front.serial);
        a.uncoordinated.erase(front.serial);

        a.live->pop_front();
        a.phase = Phase::Idle;
        try_advance(i);
    }

    void on_request(std::size_t j, std::size_t from, const RequestMsg& req)
    {
        Runtime& a = *agents[j];
        const bool busy = !a.available || a.own || a.pending || a.phase != Phase::Executing;
        std::vector<std::size_t> tau;
        if (!busy)
            tau = {a.live->at(0).step.from, a.live->at(0).step.to, a.live->at(1).step.to};
        auto out = build_reply(req, a.id(), 0, tau, a.fts(), !busy, remaining(a));
        const bool positive =
            std::any_of(out.reply.entries.begin(), out.reply.entries.end(), [](const ReplyEntry& e) { return e.b; });
        if (positive)
            a.pending = PendingReply{req.request_id, from, a.live->at(1).serial, std::move(out.detours)};
        send(j, from, std::move(out.reply));
    }

    void on_reply(std::size_t i, const ReplyMsg& reply)
    {
        Runtime& a = *agents[i];
        if (!a.own || a.own->req.request_id != reply.request_id) {
            violation("stray reply from " + reply.replier + " to " + a.id());
            return;
        }
        const double T_c = a.own->req.T_c();
        const double K = a.own->req.sentinel();
        for (const auto& e : reply.entries) {
            if (e.b && T_c > 0.0 && !(e.t < K))
                ++rep.sentinel_violations;
        }
        a.own->filter.add(reply, T_c);
        if (++a.own->replies == agents.size() - 1)
            resolve(i);
    }

    void on_confirm(std::size_t j, const ConfirmMsg& conf)
    {
        Runtime& a = *agents[j];
        if (!a.pending || a.pending->request_id != conf.request_id)
            return;
        PendingReply p = std::move(*a.pending);
        a.pending.reset();
        if (auto sel = conf.selected()) {
            const auto& entry = conf.entries[*sel];
            const Detour& detour = p.detours.at({entry.sigma_d, entry.pi_d});
            const auto k = a.live->position_of(p.serial);
            if (!k) {
                violation(a.id() + " lost the step its detour was planned for");
            } else {
                const auto steps = detour.steps(a.fts());
                a.live->replace(*k, steps);
                const std::uint64_t assist = a.live->at(*k + detour.target_pos - 1).serial;
                const std::uint64_t last = a.live->at(*k + steps.size() - 1).serial;
                a.assist_tag[assist] = conf.request_id;
                a.restore_at.insert(last);
                if (a.active_assists > 0)
                    ++rep.double_bookings;
                ++a.active_assists;
                a.available = false;
                ++a.summary.assists;
            }
        }
        if (a.phase == Phase::Holding)
            try_advance(j);
    }

    void on_ready(std::size_t i, const ReadyMsg& m)
    {
        auto it = collabs.find(m.request_id);
        if (it == collabs.end() || it->second.requester != i) {
            violation("Ready for unknown collaboration " + m.request_id);
            return;
        }
        const auto res = it->second.group.ready(m.sender);
        if (res == SyncGroup::Result::Violation)
            violation(it->second.group.diagnostic());
        else if (res == SyncGroup::Result::Start)
            begin_sync(it->second);
    }

    void on_start(std::size_t j, const StartMsg& m) { timer(j, std::max(m.start_at, clock), TimerKind::SyncStart, 0, m.request_id); }

    void on_timer(const Event& e)
    {
        Runtime& a = *agents[e.agent];
        if (e.timer == TimerKind::SyncStart) {
            const planner::LiveStep& front = a.live->at(0);
            if (collab_of(a, front.serial) != e.collab || a.phase != Phase::AwaitStart) {
                violation(a.id() + " got Start for " + e.collab + " while not waiting for it");
                return;
            }
            start_step(e.agent);
            return;
        }
        auto st = a.status.find(e.token);
        if (st == a.status.end() || st->second != Status::Retry)
            return;
        a.status.erase(st);
        if (a.phase == Phase::AwaitRrc)
            try_advance(e.agent);
        else if (a.phase == Phase::Executing && !a.own && !a.pending)
            horizon_check(e.agent, remaining(a));
    }

    bool goal_reached() const
    {
        if (unstarted > 0)
            return false;
        return std::all_of(agents.begin(), agents.end(),
                           [&](const auto& a) { return a->live->cycles() >= opt.cycles; });
    }

    bool step()
    {
        if (done)
            return false;
        if (queue.empty()) {
            done = true;
            rep.stop_reason = "deadlock";
            std::string d = "no pending events;";
            for (const auto& a : agents) {
                d += " " + a->id() + " is " + phase_name(a->phase) + " before " + a->live->at(0).step.action;
                d += ";";
            }
            rep.diagnosis = d;
            return false;
        }
        if (queue.top().time > max_time) {
            done = true;
            rep.stop_reason = "max_time";
            rep.diagnosis = "simulation time limit reached before every agent completed its cycles";
            return false;
        }
        Event e = queue.top();
        queue.pop();
        clock = std::max(clock, e.time);
        ++rep.events;
        switch (e.kind) {
        case EventKind::ActionCompleted:
            on_completed(e.agent);
            break;
        case EventKind::TimerFired:
            on_timer(e);
            break;
        case EventKind::MessageDelivered:
            std::visit(
                [&](const auto& m) {
                    using T = std::decay_t<decltype(m)>;
                    if constexpr (std::is_same_v<T, RequestMsg>)
                        on_request(e.agent, e.from, m);
                    else if constexpr (std::is_same_v<T, ReplyMsg>)
                        on_reply(e.agent, m);
                    else if constexpr (std::is_same_v<T, ConfirmMsg>)
                        on_confirm(e.agent, m);
                    else if constexpr (std::is_same_v<T, ReadyMsg>)
                        on_ready(e.agent, m);
                    else
                        on_start(e.agent, m);
                },
                *e.msg);
            break;
        }
        if (goal_reached()) {
            done = true;
            rep.stop_reason = "cycles";
        }
        return !done;
    }

    SimReport report() const
    {
        SimReport r = rep;
        r.end_time = clock;
        r.agents.clear();
        for (const auto& a : agents) {
            AgentSummary s = a->summary;
            s.cycles = a->live->cycles();
            s.accepting_hits = a->monitor.hits();
            s.monitor_rejected = a->monitor.rejected();
            r.agents.push_back(std::move(s));
        }
        return r;
    }
};

World::World(const scenario::Scenario& s, SimOptions options) : impl_(std::make_unique<Impl>(s, std::move(options)))
{
}

World::~World() = default;

double World::now() const
{
    return impl_->clock;
}

bool World::step()
{
    return impl_->step();
}

bool World::finished() const
{
    return impl_->done;
}

SimReport World::run()
{
    if (impl_->goal_reached()) {
        impl_->done = true;
        impl_->rep.stop_reason = "cycles";
    }
    while (impl_->step()) {
    }
    return report();
}

SimReport World::report() const
{
    return impl_->report();
}

SimReport run_simulation(const scenario::Scenario& s, const SimOptions& options)
{
    World w(s, options);
    return w.run();
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::string trace_csv(const SimReport& r)
{
    std::string out = "agent,action,roi,start,end,collab_id\n";
    for (const auto& t : r.trace)
        out += t.agent + "," + t.action + "," + t.roi + "," + fmt6(t.start) + "," + fmt6(t.end) + "," + t.collab_id + "\n";
    return out;
}

std::string collaborations_csv(const SimReport& r)
{
    std::string out = "collab_id,requester,action,roi,requested_at,confirmed_at,start,spread,retries,participants\n";
    for (const auto& c : r.collaborations) {
        std::string parts;
        for (const auto& p : c.participants) {
            if (!parts.empty())
                parts += ";";
            parts += p.agent + ":" + p.action + "@" + p.roi;
        }
        const auto start = c.start_time();
        out += c.id + "," + c.requester + "," + c.action + "," + c.roi + "," + fmt6(c.requested_at) + "," +
               fmt6(c.confirmed_at) + "," + (start ? fmt6(*start) : std::string()) + "," + fmt6(c.spread()) + "," +
               std::to_string(c.retries) + "," + parts + "\n";
    }
    return out;
}

std::string report_json(const SimReport& r)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["cycles_target"] = r.cycles_target;
    j["stop_reason"] = r.stop_reason;
    j["diagnosis"] = r.diagnosis;
    j["end_time"] = r.end_time;
    j["events"] = r.events;
    j["messages"] = r.messages;
    j["collaborations"] = r.collaborations.size();
    j["unstarted_collaborations"] = r.unstarted_collaborations();
    double max_spread = 0.0;
    for (const auto& c : r.collaborations)
        max_spread = std::max(max_spread, c.spread());
    j["max_start_spread"] = max_spread;
    j["all_synchronized"] = r.all_synchronized();
    j["sentinel_violations"] = r.sentinel_violations;
    j["degenerate_sentinels"] = r.degenerate_sentinels;
    j["protocol_violations"] = r.protocol_violations;
    j["double_bookings"] = r.double_bookings;
    ordered_json agents = ordered_json::array();
    for (const auto& a : r.agents) {
        agents.push_back({{"id", a.id},
                          {"cycles", a.cycles},
                          {"accepting_hits", a.accepting_hits},
                          {"monitor_rejected", a.monitor_rejected},
                          {"steps", a.steps},
                          {"requests", a.requests},
                          {"retries", a.retries},
                          {"added_delay", a.added_delay},
                          {"assists", a.assists},
                          {"plan_prefix_cost", a.plan_prefix_cost},
                          {"plan_suffix_cost", a.plan_suffix_cost}});
    }
    j["agents"] = agents;
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

} // namespace ltlcoord::sim
