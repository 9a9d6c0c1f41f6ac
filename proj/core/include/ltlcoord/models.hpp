#pragma once

// World and capability model of one agent: the ROI-level motion system, the
// action model, and their composition into the agent transition system.

#include "ltlcoord/logic.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ltlcoord::models {

using logic::Prop;
using logic::PropSet;
using RoiId = std::string;
using ActionId = std::string;

inline const ActionId kNone = "None";

struct Roi {
    RoiId id;
    PropSet labels;
};

struct MotionEdge {
    RoiId src;
    ActionId action;
    RoiId dst;
    double duration = 0.0;
};

struct MotionFts {
    std::vector<Roi> rois;
    RoiId initial;
    std::vector<MotionEdge> edges;

    std::optional<std::size_t> index_of(const RoiId& id) const;
    const Roi* find(const RoiId& id) const;
    PropSet props() const;
};

// Fully connected motion system; every ordered pair of distinct ROIs gets an
// edge "goto_<dst>" of the given duration.
MotionFts complete_motion(std::vector<Roi> rois, RoiId initial, double transit);

// Empty iff the invariants hold and every ROI is reachable from, and can
// return to, the initial ROI.
std::vector<std::string> validate_motion_fts(const MotionFts& fts);

enum class ActionKind { Local, Collaborative, Assisting };

const char* to_string(ActionKind k);
std::optional<ActionKind> action_kind_from(std::string_view s);

struct Dependency {
    ActionId action;
    std::vector<RoiId> candidates;
    friend bool operator==(const Dependency&, const Dependency&) = default;
};

struct ActionSpec {
    ActionId id;
    ActionKind kind = ActionKind::Local;
    PropSet cond;
    double dura = 0.0;
    std::vector<Dependency> depd;
};

// Actions in declaration order; `None` is always first and its duration is
// the idle self-loop duration.
class ActionModel {
public:
    explicit ActionModel(double idle_duration = 1.0);

    // Replaces an existing action of the same id.
    void add(ActionSpec spec);

    const std::vector<ActionSpec>& actions() const noexcept { return actions_; }
    const ActionSpec* find(const ActionId& id) const;
    const ActionSpec& at(const ActionId& id) const;
    double idle_duration() const { return actions_.front().dura; }

    // L_A: {id} for every action but None, which is unlabeled.
    PropSet labels(const ActionId& id) const;
    PropSet props() const;

private:
    std::vector<ActionSpec> actions_;
};

std::vector<std::string> validate_action_model(const ActionModel& model);

// {sigma_c} U Depd(sigma_c). Throws std::invalid_argument unless sigma_c is
// collaborative.
std::vector<Dependency> collaboration_set(const ActionModel& model, const ActionId& sigma_c);

enum class StepKind { Move, Idle, Local, Collaborative, Assisting };

const char* to_string(StepKind k);

struct FtsState {
    RoiId roi;
    ActionId action;
    friend bool operator==(const FtsState&, const FtsState&) = default;
};

struct FtsEdge {
    std::size_t src = 0;
    ActionId action;
    std::size_t dst = 0;
    double duration = 0.0;
    StepKind kind = StepKind::Move;
};

struct AgentFts {
    std::vector<FtsState> states;
    std::size_t initial = 0;
    std::vector<FtsEdge> edges;
    std::vector<PropSet> labels;
    std::vector<std::vector<std::size_t>> out;

    std::size_t size() const noexcept { return states.size(); }
    std::optional<std::size_t> find(const RoiId& roi, const ActionId& action) const;
    PropSet props() const;
    std::string state_name(std::size_t s) const;
};

struct FtsBuild {
    AgentFts fts;
    std::vector<std::string> warnings;
};

// States are the cond-valid (roi, action) pairs, ordered ROI-major then by
// action declaration order. Moves land in (dst, None); actions run in place.
// States unreachable from (initial, None) are pruned with a warning.
FtsBuild build_agent_fts(const MotionFts& motion, const ActionModel& actions);

std::size_t grid_state_count(std::size_t rows, std::size_t cols);

// 1 - reduced/baseline.
double reduction(std::size_t reduced, std::size_t baseline);

} // namespace ltlcoord::models
