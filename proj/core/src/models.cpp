#include "ltlcoord/models.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace ltlcoord::models {

std::optional<std::size_t> MotionFts::index_of(const RoiId& id) const
{
    for (std::size_t i = 0; i < rois.size(); ++i) {
        if (rois[i].id == id)
            return i;
    }
    return std::nullopt;
}

const Roi* MotionFts::find(const RoiId& id) const
{
    auto i = index_of(id);
    return i ? &rois[*i] : nullptr;
}

PropSet MotionFts::props() const
{
    PropSet out;
    for (const auto& r : rois)
        out.insert(r.labels.begin(), r.labels.end());
    return out;
}

MotionFts complete_motion(std::vector<Roi> rois, RoiId initial, double transit)
{
    MotionFts fts;
    fts.initial = std::move(initial);
    for (const auto& a : rois) {
        for (const auto& b : rois) {
            if (a.id != b.id)
                fts.edges.push_back({a.id, "goto_" + b.id, b.id, transit});
        }
    }
    fts.rois = std::move(rois);
    return fts;
}

namespace {

std::vector<bool> reach(std::size_t n, std::size_t from, const std::vector<std::vector<std::size_t>>& adj)
{
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    return seen;
}

} // namespace

std::vector<std::string> validate_motion_fts(const MotionFts& fts)
{
    std::vector<std::string> v;
    if (fts.rois.empty()) {
        v.emplace_back("motion system has no ROIs");
        return v;
    }
    std::map<RoiId, std::size_t> index;
    for (std::size_t i = 0; i < fts.rois.size(); ++i) {
        const auto& r = fts.rois[i];
        if (r.id.empty())
            v.push_back("ROI #" + std::to_string(i) + " has an empty id");
        if (!index.emplace(r.id, i).second)
            v.push_back("duplicate ROI '" + r.id + "'");
    }
    if (!index.contains(fts.initial))
        v.push_back("initial ROI '" + fts.initial + "' is not declared");

    const std::size_t n = fts.rois.size();
    std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
    for (std::size_t i = 0; i < fts.edges.size(); ++i) {
        const auto& e = fts.edges[i];
        const std::string where = "edge #" + std::to_string(i) + " (" + e.src + " -> " + e.dst + ")";
        auto s = index.find(e.src);
        auto d = index.find(e.dst);
        if (s == index.end())
            v.push_back(where + ": unknown source ROI");
        if (d == index.end())
            v.push_back(where + ": unknown destination ROI");
        if (!(e.duration > 0.0))
            v.push_back(where + ": duration must be positive");
        if (e.action.empty() || e.action == kNone)
            v.push_back(where + ": movement action needs a proper id");
        if (s != index.end() && d != index.end()) {
            fwd[s->second].push_back(d->second);
            bwd[d->second].push_back(s->second);
        }
    }

    auto init = index.find(fts.initial);
    if (init != index.end()) {
        const auto f = reach(n, init->second, fwd);
        const auto b = reach(n, init->second, bwd);
        for (std::size_t i = 0; i < n; ++i) {
            if (!f[i] || !b[i])
                v.push_back("ROI '" + fts.rois[i].id + "' is not strongly connected to the initial ROI");
        }
    }
    return v;
}

const char* to_string(ActionKind k)
{
    switch (k) {
    case ActionKind::Local:
        return "local";
    case ActionKind::Collaborative:
        return "collaborative";
    case ActionKind::Assisting:
        return "assisting";
    }
    return "?";
}

std::optional<ActionKind> action_kind_from(std::string_view s)
{
    if (s == "local")
        return ActionKind::Local;
    if (s == "collaborative")
        return ActionKind::Collaborative;
    if (s == "assisting")
        return ActionKind::Assisting;
    return std::nullopt;
}

ActionModel::ActionModel(double idle_duration)
{
    actions_.push_back({kNone, ActionKind::Local, {}, idle_duration, {}});
}

void ActionModel::add(ActionSpec spec)
{
    for (auto& a : actions_) {
        if (a.id == spec.id) {
            a = std::move(spec);
            return;
        }
    }
    actions_.push_back(std::move(spec));
}

const ActionSpec* ActionModel::find(const ActionId& id) const
{
    for (const auto& a : actions_) {
        if (a.id == id)
            return &a;
    }
    return nullptr;
}

const ActionSpec& ActionModel::at(const ActionId& id) const
{
    if (const auto* a = find(id))
        return *a;
    throw std::out_of_range("unknown action '" + id + "'");
}

PropSet ActionModel::labels(const ActionId& id) const
{
    if (id == kNone)
        return {};
    return {id};
}

PropSet ActionModel::props() const
{
    PropSet out;
    for (const auto& a : actions_) {
        if (a.id != kNone)
            out.insert(a.id);
    }
    return out;
}

std::vector<std::string> validate_action_model(const ActionModel& model)
{
    std::vector<std::string> v;
    const auto& acts = model.actions();
    if (acts.empty() || acts.front().id != kNone)
        v.emplace_back("action model must start with None");
    std::set<ActionId> seen;
    for (const auto& a : acts) {
        const std::string where = "action '" + a.id + "'";
        if (a.id.empty())
            v.emplace_back("action with empty id");
        if (!seen.insert(a.id).second)
            v.push_back("duplicate " + where);
        if (!(a.dura > 0.0))
            v.push_back(where + ": duration must be positive");
        if (a.id == kNone && (a.kind != ActionKind::Local || !a.cond.empty()))
            v.emplace_back("None must be local with an empty cond");
        if (a.kind == ActionKind::Collaborative && a.depd.empty())
            v.push_back(where + ": collaborative action without dependencies");
        if (a.kind != ActionKind::Collaborative && !a.depd.empty())
            v.push_back(where + ": only collaborative actions may declare dependencies");
        for (const auto& d : a.depd) {
            if (d.candidates.empty())
                v.push_back(where + ": dependency '" + d.action + "' has no candidate ROI");
        }
    }
    return v;
}

std::vector<Dependency> collaboration_set(const ActionModel& model, const ActionId& sigma_c)
{
    const ActionSpec* spec = model.find(sigma_c);
    if (!spec)
        throw std::invalid_argument("unknown action '" + sigma_c + "'");
    if (spec->kind != ActionKind::Collaborative)
        throw std::invalid_argument("action '" + sigma_c + "' is not collaborative");
    std::vector<Dependency> out;
    out.push_back({sigma_c, {}});
    out.insert(out.end(), spec->depd.begin(), spec->depd.end());
    return out;
}

const char* to_string(StepKind k)
{
    switch (k) {
    case StepKind::Move:
        return "move";
    case StepKind::Idle:
        return "idle";
    case StepKind::Local:
        return "local";
    case StepKind::Collaborative:
        return "collaborative";
    case StepKind::Assisting:
        return "assisting";
    }
    return "?";
}

std::optional<std::size_t> AgentFts::find(const RoiId& roi, const ActionId& action) const
{
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].roi == roi && states[i].action == action)
            return i;
    }
    return std::nullopt;
}

PropSet AgentFts::props() const
{
    PropSet out;
    for (const auto& l : labels)
        out.insert(l.begin(), l.end());
    return out;
}

std::string AgentFts::state_name(std::size_t s) const
{
    return "<" + states.at(s).roi + "," + states.at(s).action + ">";
}

FtsBuild build_agent_fts(const MotionFts& motion, const ActionModel& actions)
{
    auto step_kind = [](const ActionSpec& a) {
        if (a.id == kNone)
            return StepKind::Idle;
        switch (a.kind) {
        case ActionKind::Collaborative:
            return StepKind::Collaborative;
        case ActionKind::Assisting:
            return StepKind::Assisting;
        case ActionKind::Local:
            break;
        }
        return StepKind::Local;
    };
    auto valid_at = [](const ActionSpec& a, const Roi& r) {
        return std::includes(r.labels.begin(), r.labels.end(), a.cond.begin(), a.cond.end());
    };

    AgentFts full;
    std::map<std::pair<RoiId, ActionId>, std::size_t> index;
    for (const auto& r : motion.rois) {
        for (const auto& a : actions.actions()) {
            if (!valid_at(a, r))
                continue;
            index[{r.id, a.id}] = full.states.size();
            full.states.push_back({r.id, a.id});
            PropSet l = r.labels;
            const PropSet la = actions.labels(a.id);
            l.insert(la.begin(), la.end());
            full.labels.push_back(std::move(l));
        }
    }
    if (full.states.empty())
        throw std::invalid_argument("agent transition system has no states");

    for (std::size_t s = 0; s < full.states.size(); ++s) {
        const auto& st = full.states[s];
        for (const auto& e : motion.edges) {
            if (e.src != st.roi)
                continue;
            full.edges.push_back({s, e.action, index.at({e.dst, kNone}), e.duration, StepKind::Move});
        }
        for (const auto& a : actions.actions()) {
            auto it = index.find({st.roi, a.id});
            if (it == index.end())
                continue;
            full.edges.push_back({s, a.id, it->second, a.dura, step_kind(a)});
        }
    }

    const auto init = index.find({motion.initial, kNone});
    if (init == index.end())
        throw std::invalid_argument("initial ROI '" + motion.initial + "' is not part of the motion system");

    std::vector<std::vector<std::size_t>> adj(full.states.size());
    for (const auto& e : full.edges)
        adj[e.src].push_back(e.dst);
    const auto reachable = reach(full.states.size(), init->second, adj);

    FtsBuild out;
    std::vector<std::size_t> remap(full.states.size(), 0);
    for (std::size_t s = 0; s < full.states.size(); ++s) {
        if (!reachable[s]) {
            out.warnings.push_back("state " + full.state_name(s) + " is unreachable and was pruned");
            continue;
        }
        remap[s] = out.fts.states.size();
        out.fts.states.push_back(full.states[s]);
        out.fts.labels.push_back(full.labels[s]);
    }
    out.fts.initial = remap[init->second];
    out.fts.out.resize(out.fts.states.size());
    for (const auto& e : full.edges) {
        if (!reachable[e.src])
            continue;
        out.fts.out[remap[e.src]].push_back(out.fts.edges.size());
        out.fts.edges.push_back({remap[e.src], e.action, remap[e.dst], e.duration, e.kind});
    }
    return out;
}

std::size_t grid_state_count(std::size_t rows, std::size_t cols)
{
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("grid dimensions must be positive");
    return rows * cols;
}

double reduction(std::size_t reduced, std::size_t baseline)
{
    return 1.0 - static_cast<double>(reduced) / static_cast<double>(baseline);
}

} // namespace ltlcoord::models
