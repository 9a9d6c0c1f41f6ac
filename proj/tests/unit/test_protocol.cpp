#include "oracles.hpp"

#include "ltlcoord/protocol.hpp"
#include "ltlcoord/scenario.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace ltlcoord;
using namespace ltlcoord::protocol;

namespace {

models::ActionModel turtlebot_actions()
{
    return scenario::canopies_9().find_class("Turtlebot")->action_model(1.0);
}

ChooseRoi canopies_rules()
{
    return ChooseRoi(scenario::canopies_9().choose_roi);
}

AssignmentInstance instance(std::vector<std::vector<double>> delta, std::vector<std::vector<bool>> b = {})
{
    AssignmentInstance inst;
    inst.M = delta.front().size();
    for (std::size_t j = 0; j < delta.size(); ++j) {
        inst.agents.push_back(std::string(1, static_cast<char>('A' + j)));
        inst.b.push_back(b.empty() ? std::vector<bool>(inst.M, true) : b[j]);
        std::vector<double> t;
        for (double d : delta[j])
            t.push_back(10.0 + d);
        inst.t.push_back(t);
    }
    inst.delta = std::move(delta);
    return inst;
}

// Agent FTS where (C, hold) is only reachable through B:
// A -2-> B -3-> C -1-> A, hold takes 4.
models::AgentFts chain_fts()
{
    models::MotionFts m{{{"A", {"A"}}, {"B", {"B"}}, {"C", {"C"}}},
                        "A",
                        {{"A", "goto_B", "B", 2.0}, {"B", "goto_C", "C", 3.0}, {"C", "goto_A", "A", 1.0}}};
    models::ActionModel am;
    am.add({"hold", models::ActionKind::Assisting, {"C"}, 4.0, {}});
    am.add({"x", models::ActionKind::Local, {"A"}, 2.0, {}});
    return models::build_agent_fts(m, am).fts;
}

RequestMsg chain_request(double T_c)
{
    return {"req", "req#1", "lift", {{"hold", "C", T_c}}};
}

} // namespace

// ---------------------------------------------------------------------------
// Horizon check

TEST(Request, FindsCollaborativeActionWithinHorizon)
{
    const auto am = turtlebot_actions();
    const std::vector<UpcomingAction> rho = {
        {"p", "P1", 4.0, false}, {"goto_C1", "C1", 2.0, false}, {"cc", "C1", 4.0, true}};
    const auto out = build_request(0, rho, 6.0, 3.0, am, canopies_rules());
    ASSERT_TRUE(out.draft);
    EXPECT_EQ(out.draft->offset, 2u);
    EXPECT_EQ(out.draft->collab_action, "cc");
    EXPECT_DOUBLE_EQ(out.draft->T_c, 5.0);
    ASSERT_EQ(out.draft->entries.size(), 1u);
    EXPECT_EQ(out.draft->entries[0].sigma_d, "hcc");
    EXPECT_EQ(out.draft->entries[0].pi_d, "C3");
    EXPECT_DOUBLE_EQ(out.draft->entries[0].T_c, 5.0);
}

TEST(Request, HorizonBoundaryIsExclusive)
{
    const auto am = turtlebot_actions();
    const std::vector<UpcomingAction> rho = {
        {"p", "P1", 4.0, false}, {"goto_C2", "C2", 2.0, false}, {"cc", "C2", 4.0, true}};
    // T_c reaches exactly H before the collaborative step is examined.
    EXPECT_FALSE(build_request(0, rho, 6.0, 4.0, am, canopies_rules()).draft);
    const auto out = build_request(0, rho, 6.5, 4.0, am, canopies_rules());
    ASSERT_TRUE(out.draft);
    EXPECT_DOUBLE_EQ(out.draft->T_c, 6.0);
    EXPECT_EQ(out.draft->entries[0].pi_d, "C4");
}

TEST(Request, ImmediateNextStep)
{
    const auto am = turtlebot_actions();
    const std::vector<UpcomingAction> rho = {{"goto_G", "G", 2.0, false}, {"g", "G", 4.0, true}};
    const auto out = build_request(0, rho, 6.0, 0.5, am, canopies_rules());
    ASSERT_TRUE(out.draft);
    EXPECT_EQ(out.draft->offset, 1u);
    EXPECT_DOUBLE_EQ(out.draft->T_c, 0.5);
    EXPECT_EQ(out.draft->entries[0].pi_d, "G");
}

TEST(Request, NoCollaborativeAction)
{
    const auto am = turtlebot_actions();
    const std::vector<UpcomingAction> rho = {{"p", "P1", 4.0, false}, {"goto_P2", "P2", 2.0, false}};
    const auto out = build_request(0, rho, 100.0, 0.0, am, canopies_rules());
    EXPECT_FALSE(out.draft);
    EXPECT_TRUE(out.diagnostic.empty());
}

TEST(Request, SentinelIsTenTimesTc)
{
    RequestMsg r{"a", "a#1", "cc", {{"hcc", "C3", 7.5}}};
    EXPECT_DOUBLE_EQ(r.sentinel(), 75.0);
}

// ---------------------------------------------------------------------------
// Reply

TEST(Reply, DetourTimeExcludesTheAssistingEdge)
{
    const auto fts = chain_fts();
    const auto a_idle = *fts.find("A", models::kNone);
    const auto a_x = *fts.find("A", "x");
    // Executing x at A (1 s left), then idling at A.
    const std::vector<std::size_t> tau = {a_idle, a_x, a_idle};
    const auto out = build_reply(chain_request(8.0), "helper", 0, tau, fts, true, 1.0);
    ASSERT_EQ(out.reply.entries.size(), 1u);
    const auto& e = out.reply.entries[0];
    EXPECT_TRUE(e.b);
    // D1 = goto_B (2), goto_C (3), hold (4): t_d = 2 + 3.
    const auto& d = out.detours.at({"hold", "C"});
    EXPECT_EQ(d.costs, (std::vector<double>{2.0, 3.0, 4.0, 1.0}));
    EXPECT_DOUBLE_EQ(d.t_d, 5.0);
    EXPECT_DOUBLE_EQ(e.t, 1.0 + 5.0);
    EXPECT_EQ(d.target_pos, 3u);
    const auto steps = d.steps(fts);
    EXPECT_EQ(steps[d.target_pos - 1].action, "hold");
    EXPECT_EQ(steps.front().from, a_x);
    EXPECT_EQ(steps.back().to, a_idle);
}

TEST(Reply, AlreadyAtTargetUsesTheSelfLoop)
{
    const auto fts = chain_fts();
    const auto c_idle = *fts.find("C", models::kNone);
    const auto c_hold = *fts.find("C", "hold");
    const std::vector<std::size_t> tau = {c_idle, c_hold, c_idle};
    const auto out = build_reply(chain_request(8.0), "helper", 0, tau, fts, true, 2.0);
    ASSERT_TRUE(out.reply.entries[0].b);
    const auto& d = out.detours.at({"hold", "C"});
    EXPECT_EQ(d.path.front(), c_hold);
    EXPECT_EQ(d.path[1], c_hold);
    EXPECT_EQ(d.target_pos, 1u);
    EXPECT_DOUBLE_EQ(d.t_d, 0.0);
    EXPECT_DOUBLE_EQ(out.reply.entries[0].t, 2.0);
}

TEST(Reply, NegativeCases)
{
    const auto fts = chain_fts();
    const auto a_idle = *fts.find("A", models::kNone);
    const std::vector<std::size_t> tau = {a_idle, a_idle, a_idle};
    const auto req = chain_request(3.0);
    for (const auto& out : {build_reply(req, "req", 0, tau, fts, true, 0.0),      // requester itself
                            build_reply(req, "helper", 0, tau, fts, false, 0.0),  // busy
                            build_reply(req, "helper", 0, {}, fts, true, 0.0)}) { // no plan context
        ASSERT_EQ(out.reply.entries.size(), 1u);
        EXPECT_FALSE(out.reply.entries[0].b);
        EXPECT_DOUBLE_EQ(out.reply.entries[0].t, 30.0);
        EXPECT_TRUE(out.detours.empty());
    }
    // Agent without the ability.
    const RequestMsg other{"req", "req#2", "cc", {{"hcc", "C3", 3.0}}};
    EXPECT_FALSE(build_reply(other, "helper", 0, tau, fts, true, 0.0).reply.entries[0].b);
}

// ---------------------------------------------------------------------------
// Filter and solver

TEST(Filter, SingleActionKeepsTheClosest)
{
    const auto inst = instance({{4.0}, {2.0}, {7.0}});
    const auto fr = filter_agents(inst);
    EXPECT_EQ(fr.kept, std::vector<std::size_t>{1});
    EXPECT_DOUBLE_EQ(solve_assignment(fr.instance).cost, oracle::brute_force_assignment(inst));
    EXPECT_DOUBLE_EQ(solve_assignment(inst).cost, 2.0);
}

TEST(Filter, BoundedByMSquared)
{
    const auto inst = instance({{1, 9}, {2, 8}, {3, 7}, {4, 6}, {5, 5}});
    const auto fr = filter_agents(inst);
    EXPECT_LE(fr.kept.size(), 4u);
    EXPECT_GE(fr.kept.size(), 2u);
    EXPECT_EQ(fr.kept, (std::vector<std::size_t>{0, 1, 3, 4}));
}

TEST(Filter, TiesBrokenByPosition)
{
    const auto inst = instance({{3.0}, {1.0}, {1.0}});
    EXPECT_EQ(filter_agents(inst).kept, std::vector<std::size_t>{1});
}

TEST(Solver, SmallExample)
{
    const auto inst = instance({{1, 5}, {4, 2}, {3, 3}});
    const auto a = solve_assignment(inst);
    ASSERT_TRUE(a.feasible);
    EXPECT_DOUBLE_EQ(a.cost, 3.0);
    EXPECT_EQ(a.agent_for_action, (std::vector<std::size_t>{0, 1}));
}

TEST(Solver, LexicographicTieBreak)
{
    const auto inst = instance({{1, 1}, {1, 1}, {1, 1}});
    EXPECT_EQ(solve_assignment(inst).agent_for_action, (std::vector<std::size_t>{0, 1}));
}

TEST(Solver, InfeasibleWhenTooFewAbleAgents)
{
    const auto inst = instance({{1, 1}, {1, 1}}, {{true, false}, {true, false}});
    EXPECT_FALSE(solve_assignment(inst).feasible);
}

TEST(Solver, NeverAssignsUnableAgents)
{
    // Agent A would be cheapest for action 1 were b ignored.
    const auto inst = instance({{0, 0}, {5, 9}, {9, 5}}, {{false, false}, {true, true}, {true, true}});
    const auto a = solve_assignment(inst);
    ASSERT_TRUE(a.feasible);
    EXPECT_EQ(a.agent_for_action, (std::vector<std::size_t>{1, 2}));
}

// Filtering never changes the optimum; the filtered set is between M and
// M^2; returned assignments respect every constraint.
TEST(SolverProperty, FilteringPreservesOptimum)
{
    oracle::Gen g(2024);
    for (int i = 0; i < 500; ++i) {
        const std::size_t M = 1 + g.below(4);
        const std::size_t N = M + g.below(31 - M);
        const auto inst = oracle::random_instance(g, N, M, true, i % 3 == 0);
        const auto fr = filter_agents(inst);
        EXPECT_GE(fr.kept.size(), M);
        EXPECT_LE(fr.kept.size(), M * M);
        const double brute = oracle::brute_force_assignment(inst);
        const auto full = solve_assignment(inst);
        const auto filt = solve_assignment(fr.instance);
        ASSERT_TRUE(full.feasible && filt.feasible);
        EXPECT_DOUBLE_EQ(full.cost, brute);
        EXPECT_DOUBLE_EQ(filt.cost, brute);
        for (const auto* a : {&full, &filt}) {
            const auto& in = a == &full ? inst : fr.instance;
            std::vector<std::size_t> agents = a->agent_for_action;
            std::sort(agents.begin(), agents.end());
            EXPECT_EQ(std::adjacent_find(agents.begin(), agents.end()), agents.end());
            double c = 0.0;
            for (std::size_t d = 0; d < M; ++d) {
                EXPECT_TRUE(in.b[a->agent_for_action[d]][d]);
                c += in.delta[a->agent_for_action[d]][d];
            }
            EXPECT_DOUBLE_EQ(c, a->cost);
        }
    }
}

TEST(SolverProperty, PruningAgreesWithEnumerationAboveSix)
{
    oracle::Gen g(77);
    for (int i = 0; i < 20; ++i) {
        const auto inst = oracle::random_instance(g, 8 + g.below(2), 7, true, i % 2 == 0);
        EXPECT_DOUBLE_EQ(solve_assignment(inst).cost, oracle::brute_force_assignment(inst));
    }
}

TEST(StreamingFilter, MatchesBatchFilter)
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const std::size_t M = 1 + seed % 4;
        const auto pop = scenario::bench_filtering(5 + seed * 3, M, seed);
        const auto inst = instance_from_replies(pop.request, pop.replies);
        StreamingFilter sf(M);
        for (const auto& r : pop.replies)
            sf.add(r, pop.request.T_c());
        EXPECT_EQ(sf.seen(), pop.replies.size());
        const auto a = sf.result();
        const auto b = filter_agents(inst);
        EXPECT_EQ(a.kept, b.kept);
        EXPECT_EQ(a.instance.agents, b.instance.agents);
        EXPECT_EQ(a.instance.delta, b.instance.delta);
    }
}

TEST(Confirmations, SelectedAndOthers)
{
    const RequestMsg req{"R", "R#1", "cc", {{"h1", "X", 5.0}, {"h2", "Y", 5.0}}};
    const auto inst = instance({{1, 5}, {4, 2}, {3, 3}});
    const auto a = solve_assignment(inst);
    const std::vector<AgentId> all = {"R", "A", "B", "C"};
    const auto confs = build_confirmations(req, inst, a, all);
    ASSERT_EQ(confs.size(), 4u);
    EXPECT_EQ(confs.at("A").selected(), 0u);
    EXPECT_DOUBLE_EQ(confs.at("A").entries[0].T_d, inst.t[0][0]);
    EXPECT_EQ(confs.at("B").selected(), 1u);
    for (const auto* id : {"R", "C"}) {
        EXPECT_FALSE(confs.at(id).selected());
        for (const auto& e : confs.at(id).entries) {
            EXPECT_FALSE(e.c);
            EXPECT_DOUBLE_EQ(e.T_d, -1.0);
        }
    }
}

// ---------------------------------------------------------------------------
// Synchronization and delays

TEST(Sync, StartsWhenEveryoneIsReady)
{
    SyncGroup g("R", {"A", "B"});
    EXPECT_EQ(g.ready("A"), SyncGroup::Result::Wait);
    EXPECT_EQ(g.requester_ready(), SyncGroup::Result::Wait);
    EXPECT_EQ(g.ready("B"), SyncGroup::Result::Start);
    EXPECT_TRUE(g.started());
    EXPECT_EQ(g.ready("A"), SyncGroup::Result::Violation);
}

TEST(Sync, RequesterLast)
{
    SyncGroup g("R", {"A"});
    EXPECT_EQ(g.ready("A"), SyncGroup::Result::Wait);
    EXPECT_EQ(g.requester_ready(), SyncGroup::Result::Start);
}

TEST(Sync, StrangerIsAViolation)
{
    SyncGroup g("R", {"A"});
    EXPECT_EQ(g.ready("Z"), SyncGroup::Result::Violation);
    EXPECT_FALSE(g.diagnostic().empty());
    EXPECT_FALSE(g.started());
}

TEST(Delay, LoopCount)
{
    EXPECT_EQ(delay_loops(4.0, 1.0), 4u);
    EXPECT_EQ(delay_loops(4.5, 1.0), 5u);
    EXPECT_EQ(delay_loops(3.0, 2.0), 2u);
    EXPECT_EQ(delay_loops(0.0, 1.0), 0u);
}

// ---------------------------------------------------------------------------
// Wire format

TEST(Messages, JsonRoundTrip)
{
    const std::vector<Message> msgs = {
        RequestMsg{"a", "a#1", "cc", {{"hcc", "C3", 2.5}}},
        ReplyMsg{"b", "a#1", {{"hcc", "C3", true, 3.25}}},
        ConfirmMsg{"a", "a#1", {{"hcc", "C3", true, 3.25}}},
        ReadyMsg{"b", "a#1"},
        StartMsg{"a", "a#1", 12.5},
    };
    for (const auto& m : msgs) {
        const auto text = to_json(m);
        EXPECT_EQ(message_from_json(text), m) << text;
    }
    EXPECT_THROW(message_from_json("{\"type\":\"nope\"}"), std::invalid_argument);
    EXPECT_THROW(message_from_json("not json"), std::invalid_argument);
    EXPECT_STREQ(message_type(msgs[3]), "ready");
}
