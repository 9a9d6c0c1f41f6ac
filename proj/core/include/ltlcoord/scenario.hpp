#pragma once

// Scenario files: agent classes, agent instances, task formulas, choose-ROI
// rules and protocol / simulation parameters. The format is documented in
// docs/scenario-format.md.

#include "ltlcoord/delay.hpp"
#include "ltlcoord/logic.hpp"
#include "ltlcoord/models.hpp"
#include "ltlcoord/protocol.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ltlcoord::scenario {

struct AgentClass {
    std::string name;
    std::vector<models::Roi> rois;
    // Complete connectivity with this transit time when set; otherwise the
    // explicit edge list is used.
    std::optional<double> transit;
    std::vector<models::MotionEdge> edges;
    // Declared actions, None excluded.
    std::vector<models::ActionSpec> actions;
    // Grid used as a state-count comparator.
    std::optional<std::pair<std::size_t, std::size_t>> grid;

    models::MotionFts motion(const models::RoiId& initial) const;
    models::ActionModel action_model(double idle_duration) const;
    const models::ActionSpec* find_action(const models::ActionId& id) const;
};

struct AgentConfig {
    std::string id;
    std::string cls;
    models::RoiId start;
    std::string task;
    std::optional<double> horizon;
    std::optional<double> t_delay;
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    double idle_duration = 1.0;
    double max_time = 100000.0;
    sim::DelayModel latency = sim::DelayModel::fixed(0.01);
    sim::DelayConfig delays;
    std::vector<AgentClass> classes;
    std::vector<AgentConfig> agents;
    std::vector<protocol::ChooseRoiRule> choose_roi;

    const AgentClass* find_class(std::string_view name) const;
};

struct Violation {
    std::string where;
    std::string what;
    std::string to_string() const { return where.empty() ? what : where + ": " + what; }
};

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

struct ValidationReport {
    std::vector<Violation> errors;
    std::vector<Violation> warnings;
    bool ok() const { return errors.empty(); }
};

ValidationReport validate(const Scenario& s);

// Parse + validate; throws ScenarioError with every located violation.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
// Canonical JSON text (sorted keys, two-space indent).
std::string serialize_scenario(const Scenario& s);

std::vector<std::string> builtin_names();
std::optional<Scenario> builtin(std::string_view name);

Scenario canopies_9();
// `teams` disjoint copies of canopies_9 sharing one bus.
Scenario scale_90(std::size_t teams = 10);

struct FilteringPopulation {
    protocol::RequestMsg request;
    std::vector<protocol::ReplyMsg> replies;
};

// N synthetic replies to an M-action request; always feasible.
FilteringPopulation bench_filtering(std::size_t N, std::size_t M, std::uint64_t seed = 1);

// Everything an agent needs at run time, derived from the scenario.
struct CompiledAgent {
    AgentConfig config;
    models::MotionFts motion;
    models::ActionModel actions;
    models::AgentFts fts;
    logic::RecurringFormula task;
    logic::Nba nba;
    double horizon = 0.0;
    double t_delay = 0.0;
    std::vector<std::string> warnings;
};

// Horizon default: 1.5 x the longest action. Delay default: mean action
// duration. None is excluded from both.
double default_horizon(const models::ActionModel& actions);
double default_t_delay(const models::ActionModel& actions);

// Builds models and task automata for every agent of a validated scenario.
std::vector<CompiledAgent> compile(const Scenario& s);

} // namespace ltlcoord::scenario
