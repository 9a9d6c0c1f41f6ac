#include "ltlcoord/scenario.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace ltlcoord::scenario {

using nlohmann::json;

models::MotionFts AgentClass::motion(const models::RoiId& initial) const
{
    if (transit)
        return models::complete_motion(rois, initial, *transit);
    models::MotionFts m;
    m.rois = rois;
    m.initial = initial;
    m.edges = edges;
    return m;
}

models::ActionModel AgentClass::action_model(double idle_duration) const
{
    models::ActionModel m(idle_duration);
    for (const auto& a : actions)
        m.add(a);
    return m;
}

const models::ActionSpec* AgentClass::find_action(const models::ActionId& id) const
{
    for (const auto& a : actions) {
        if (a.id == id)
            return &a;
    }
    return nullptr;
}

const AgentClass* Scenario::find_class(std::string_view name) const
{
    for (const auto& c : classes) {
        if (c.name == name)
            return &c;
    }
    return nullptr;
}

namespace {

std::string join(const std::vector<Violation>& vs)
{
    std::string out = "invalid scenario";
    for (const auto& v : vs)
        out += "\n  " + v.to_string();
    return out;
}

} // namespace

ScenarioError::ScenarioError(std::vector<Violation> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations))
{
}

// ---------------------------------------------------------------------------
// Validation

double default_horizon(const models::ActionModel& actions)
{
    double longest = 0.0;
    for (const auto& a : actions.actions()) {
        if (a.id != models::kNone)
            longest = std::max(longest, a.dura);
    }
    return longest > 0.0 ? 1.5 * longest : 1.5 * actions.idle_duration();
}

double default_t_delay(const models::ActionModel& actions)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& a : actions.actions()) {
        if (a.id != models::kNone) {
            sum += a.dura;
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : actions.idle_duration();
}

ValidationReport validate(const Scenario& s)
{
    ValidationReport r;
    auto err = [&](std::string where, std::string what) { r.errors.push_back({std::move(where), std::move(what)}); };
    auto warn = [&](std::string where, std::string what) {
        r.warnings.push_back({std::move(where), std::move(what)});
    };

    if (!(s.idle_duration > 0.0))
        err("idle_duration", "must be positive");
    if (!(s.max_time > 0.0))
        err("max_time", "must be positive");
    for (const auto& m : s.latency.validate())
        err("latency", m);
    const std::pair<const char*, const sim::DelayModel*> delays[] = {{"delays.move", &s.delays.move},
                                                                     {"delays.local", &s.delays.local},
                                                                     {"delays.collaborative", &s.delays.collaborative},
                                                                     {"delays.assisting", &s.delays.assisting}};
    for (const auto& [where, d] : delays) {
        for (const auto& m : d->validate())
            err(where, m);
    }

    if (s.classes.empty())
        err("classes", "at least one agent class is required");
    std::set<std::string> class_names;
    std::map<models::ActionId, models::ActionKind> all_actions;
    std::set<models::RoiId> all_rois;
    for (const auto& c : s.classes) {
        for (const auto& a : c.actions)
            all_actions.emplace(a.id, a.kind);
        for (const auto& roi : c.rois)
            all_rois.insert(roi.id);
    }

    for (std::size_t i = 0; i < s.classes.size(); ++i) {
        const auto& c = s.classes[i];
        const std::string where = "classes[" + std::to_string(i) + "]" + (c.name.empty() ? "" : " (" + c.name + ")");
        if (c.name.empty())
            err(where, "class name is empty");
        if (!class_names.insert(c.name).second)
            err(where, "duplicate class name");
        if (c.rois.empty()) {
            err(where, "class has no ROIs");
            continue;
        }
        if (c.transit && !(*c.transit > 0.0))
            err(where + ".transit", "must be positive");
        if (c.grid && (c.grid->first == 0 || c.grid->second == 0))
            err(where + ".grid", "dimensions must be positive");
        for (const auto& m : models::validate_motion_fts(c.motion(c.rois.front().id)))
            err(where, m);

        const auto model = c.action_model(s.idle_duration > 0.0 ? s.idle_duration : 1.0);
        for (std::size_t k = 0; k < c.actions.size(); ++k) {
            if (c.actions[k].id == models::kNone)
                err(where + ".actions[" + std::to_string(k) + "]", "None is implicit and may not be declared");
        }
        for (const auto& m : models::validate_action_model(model))
            err(where, m);
        for (const auto& a : c.actions) {
            const std::string aw = where + ".actions." + a.id;
            const bool somewhere = std::any_of(c.rois.begin(), c.rois.end(), [&](const models::Roi& roi) {
                return std::includes(roi.labels.begin(), roi.labels.end(), a.cond.begin(), a.cond.end());
            });
            if (!somewhere)
                warn(aw, "cond matches no ROI of this class");
            for (const auto& d : a.depd) {
                auto it = all_actions.find(d.action);
                if (it == all_actions.end())
                    err(aw, "dependency '" + d.action + "' is not declared by any class");
                else if (it->second != models::ActionKind::Assisting)
                    err(aw, "dependency '" + d.action + "' is not an assisting action");
                for (const auto& roi : d.candidates) {
                    if (!all_rois.contains(roi))
                        err(aw, "dependency ROI '" + roi + "' is not declared by any class");
                }
            }
        }
    }

    if (s.agents.empty())
        err("agents", "at least one agent is required");
    std::set<std::string> agent_ids;
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
        const auto& a = s.agents[i];
        const std::string where = "agents[" + std::to_string(i) + "]" + (a.id.empty() ? "" : " (" + a.id + ")");
        if (a.id.empty())
            err(where, "agent id is empty");
        if (!agent_ids.insert(a.id).second)
            err(where, "duplicate agent id");
        if (a.horizon && !(*a.horizon > 0.0))
            err(where + ".horizon", "must be positive");
        if (a.t_delay && !(*a.t_delay > 0.0))
            err(where + ".t_delay", "must be positive");
        const AgentClass* c = s.find_class(a.cls);
        if (!c) {
            err(where + ".class", "unknown class '" + a.cls + "'");
            continue;
        }
        if (std::none_of(c->rois.begin(), c->rois.end(), [&](const models::Roi& r) { return r.id == a.start; }))
            err(where + ".start", "start ROI '" + a.start + "' is not an ROI of class '" + c->name + "'");
        logic::PropSet universe;
        for (const auto& roi : c->rois)
            universe.insert(roi.labels.begin(), roi.labels.end());
        for (const auto& act : c->actions)
            universe.insert(act.id);
        try {
            logic::parse_formula(a.task, universe);
        } catch (const logic::ParseError& e) {
            err(where + ".task", e.what());
        }
    }

    for (std::size_t i = 0; i < s.choose_roi.size(); ++i) {
        const auto& rule = s.choose_roi[i];
        const std::string where = "choose_roi[" + std::to_string(i) + "]";
        auto collab = all_actions.find(rule.collab);
        if (collab == all_actions.end() || collab->second != models::ActionKind::Collaborative)
            err(where, "'" + rule.collab + "' is not a collaborative action");
        auto assist = all_actions.find(rule.assist);
        if (assist == all_actions.end() || assist->second != models::ActionKind::Assisting)
            err(where, "'" + rule.assist + "' is not an assisting action");
        if (!all_rois.contains(rule.collab_roi))
            err(where, "unknown ROI '" + rule.collab_roi + "'");
        if (!all_rois.contains(rule.target))
            err(where, "unknown ROI '" + rule.target + "'");
    }
    return r;
}

// ---------------------------------------------------------------------------
// JSON reading

namespace {

class Reader {
public:
    std::vector<Violation> violations;

    void fail(const std::string& where, const std::string& what) { violations.push_back({where, what}); }

    const json* field(const json& obj, const std::string& where, const char* key, bool required)
    {
        if (!obj.is_object()) {
            fail(where, "expected an object");
            return nullptr;
        }
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required)
                fail(where, std::string("missing field '") + key + "'");
            return nullptr;
        }
        return &*it;
    }

    std::optional<std::string> str(const json& obj, const std::string& where, const char* key, bool required = true)
    {
        const json* v = field(obj, where, key, required);
        if (!v)
            return std::nullopt;
        if (!v->is_string()) {
            fail(where + "." + key, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<double> num(const json& obj, const std::string& where, const char* key, bool required = true)
    {
        const json* v = field(obj, where, key, required);
        if (!v)
            return std::nullopt;
        if (!v->is_number()) {
            fail(where + "." + key, "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::vector<std::string> strings(const json& obj, const std::string& where, const char* key, bool required)
    {
        std::vector<std::string> out;
        const json* v = field(obj, where, key, required);
        if (!v)
            return out;
        if (!v->is_array()) {
            fail(where + "." + key, "expected an array of strings");
            return out;
        }
        for (std::size_t i = 0; i < v->size(); ++i) {
            if ((*v)[i].is_string())
                out.push_back((*v)[i].get<std::string>());
            else
                fail(where + "." + key + "[" + std::to_string(i) + "]", "expected a string");
        }
        return out;
    }

    const json* array(const json& obj, const std::string& where, const char* key, bool required)
    {
        const json* v = field(obj, where, key, required);
        if (v && !v->is_array()) {
            fail(where + "." + key, "expected an array");
            return nullptr;
        }
        return v;
    }

    sim::DelayModel delay(const json& v, const std::string& where)
    {
        if (!v.is_string()) {
            fail(where, "expected a delay string (none | fixed:D | uniform:LO:HI)");
            return {};
        }
        auto d = sim::parse_delay(v.get<std::string>());
        if (!d) {
            fail(where, "cannot parse delay '" + v.get<std::string>() + "'");
            return {};
        }
        return *d;
    }
};

logic::PropSet to_set(const std::vector<std::string>& v)
{
    return {v.begin(), v.end()};
}

AgentClass read_class(Reader& rd, const json& j, const std::string& where)
{
    AgentClass c;
    c.name = rd.str(j, where, "name").value_or("");
    if (const json* rois = rd.array(j, where, "rois", true)) {
        for (std::size_t i = 0; i < rois->size(); ++i) {
            const std::string w = where + ".rois[" + std::to_string(i) + "]";
            models::Roi r;
            r.id = rd.str((*rois)[i], w, "id").value_or("");
            r.labels = to_set(rd.strings((*rois)[i], w, "labels", false));
            c.rois.push_back(std::move(r));
        }
    }
    c.transit = rd.num(j, where, "transit", false);
    if (const json* edges = rd.array(j, where, "edges", false)) {
        for (std::size_t i = 0; i < edges->size(); ++i) {
            const std::string w = where + ".edges[" + std::to_string(i) + "]";
            const json& e = (*edges)[i];
            c.edges.push_back({rd.str(e, w, "src").value_or(""), rd.str(e, w, "action").value_or(""),
                               rd.str(e, w, "dst").value_or(""), rd.num(e, w, "duration").value_or(0.0)});
        }
    }
    if (c.transit && !c.edges.empty())
        rd.fail(where, "give either 'transit' or 'edges', not both");
    if (!c.transit && c.edges.empty())
        rd.fail(where, "motion needs 'transit' (complete connectivity) or 'edges'");

    if (const json* acts = rd.array(j, where, "actions", true)) {
        for (std::size_t i = 0; i < acts->size(); ++i) {
            const std::string w = where + ".actions[" + std::to_string(i) + "]";
            const json& a = (*acts)[i];
            models::ActionSpec spec;
            spec.id = rd.str(a, w, "id").value_or("");
            const std::string kind = rd.str(a, w, "kind").value_or("local");
            if (auto k = models::action_kind_from(kind))
                spec.kind = *k;
            else
                rd.fail(w + ".kind", "unknown action kind '" + kind + "'");
            spec.cond = to_set(rd.strings(a, w, "cond", false));
            spec.dura = rd.num(a, w, "duration").value_or(0.0);
            if (const json* depd = rd.array(a, w, "depd", false)) {
                for (std::size_t k = 0; k < depd->size(); ++k) {
                    const std::string dw = w + ".depd[" + std::to_string(k) + "]";
                    spec.depd.push_back(
                        {rd.str((*depd)[k], dw, "action").value_or(""), rd.strings((*depd)[k], dw, "rois", true)});
                }
            }
            c.actions.push_back(std::move(spec));
        }
    }
    if (const json* g = rd.field(j, where, "grid", false)) {
        if (g->is_array() && g->size() == 2 && (*g)[0].is_number_unsigned() && (*g)[1].is_number_unsigned())
            c.grid = std::make_pair((*g)[0].get<std::size_t>(), (*g)[1].get<std::size_t>());
        else
            rd.fail(where + ".grid", "expected [rows, cols]");
    }
    return c;
}

} // namespace

Scenario parse_scenario(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::vector<Violation>{
            {"byte " + std::to_string(e.byte), std::string("JSON syntax error: ") + e.what()}});
    }
    Reader rd;
    Scenario s;
    if (!j.is_object())
        throw ScenarioError(std::vector<Violation>{{"", "scenario must be a JSON object"}});

    s.name = rd.str(j, "", "name", false).value_or("");
    if (const json* seed = rd.field(j, "", "seed", false)) {
        if (seed->is_number_unsigned())
            s.seed = seed->get<std::uint64_t>();
        else
            rd.fail("seed", "expected a nonnegative integer");
    }
    s.idle_duration = rd.num(j, "", "idle_duration", false).value_or(s.idle_duration);
    s.max_time = rd.num(j, "", "max_time", false).value_or(s.max_time);
    if (const json* lat = rd.field(j, "", "latency", false))
        s.latency = rd.delay(*lat, "latency");
    if (const json* d = rd.field(j, "", "delays", false)) {
        if (d->is_string()) {
            s.delays = sim::DelayConfig::all(rd.delay(*d, "delays"));
        } else if (d->is_object()) {
            const std::pair<const char*, sim::DelayModel*> keys[] = {{"move", &s.delays.move},
                                                                     {"local", &s.delays.local},
                                                                     {"collaborative", &s.delays.collaborative},
                                                                     {"assisting", &s.delays.assisting}};
            for (const auto& [k, target] : keys) {
                if (auto it = d->find(k); it != d->end())
                    *target = rd.delay(*it, std::string("delays.") + k);
            }
            for (const auto& [k, v] : d->items()) {
                if (std::none_of(std::begin(keys), std::end(keys), [&](const auto& p) { return k == p.first; }))
                    rd.fail("delays." + k, "unknown step kind");
            }
        } else {
            rd.fail("delays", "expected a delay string or an object keyed by step kind");
        }
    }

    if (const json* classes = rd.array(j, "", "classes", true)) {
        for (std::size_t i = 0; i < classes->size(); ++i)
            s.classes.push_back(read_class(rd, (*classes)[i], "classes[" + std::to_string(i) + "]"));
    }
    if (const json* agents = rd.array(j, "", "agents", true)) {
        for (std::size_t i = 0; i < agents->size(); ++i) {
            const std::string w = "agents[" + std::to_string(i) + "]";
            const json& a = (*agents)[i];
            AgentConfig c;
            c.id = rd.str(a, w, "id").value_or("");
            c.cls = rd.str(a, w, "class").value_or("");
            c.start = rd.str(a, w, "start").value_or("");
            c.task = rd.str(a, w, "task").value_or("");
            c.horizon = rd.num(a, w, "horizon", false);
            c.t_delay = rd.num(a, w, "t_delay", false);
            s.agents.push_back(std::move(c));
        }
    }
    if (const json* rules = rd.array(j, "", "choose_roi", false)) {
        for (std::size_t i = 0; i < rules->size(); ++i) {
            const std::string w = "choose_roi[" + std::to_string(i) + "]";
            const json& r = (*rules)[i];
            s.choose_roi.push_back({rd.str(r, w, "collab").value_or(""), rd.str(r, w, "collab_roi").value_or(""),
                                    rd.str(r, w, "assist").value_or(""), rd.str(r, w, "target").value_or("")});
        }
    }

    if (!rd.violations.empty())
        throw ScenarioError(rd.violations);
    auto report = validate(s);
    if (!report.ok())
        throw ScenarioError(report.errors);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ScenarioError(std::vector<Violation>{{path.string(), "cannot open scenario file"}});
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s)
{
    json j;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["idle_duration"] = s.idle_duration;
    j["max_time"] = s.max_time;
    j["latency"] = s.latency.to_string();
    j["delays"] = {{"move", s.delays.move.to_string()},
                   {"local", s.delays.local.to_string()},
                   {"collaborative", s.delays.collaborative.to_string()},
                   {"assisting", s.delays.assisting.to_string()}};
    json classes = json::array();
    for (const auto& c : s.classes) {
        json jc;
        jc["name"] = c.name;
        json rois = json::array();
        for (const auto& r : c.rois)
            rois.push_back({{"id", r.id}, {"labels", r.labels}});
        jc["rois"] = rois;
        if (c.transit) {
            jc["transit"] = *c.transit;
        } else {
            json edges = json::array();
            for (const auto& e : c.edges)
                edges.push_back({{"src", e.src}, {"action", e.action}, {"dst", e.dst}, {"duration", e.duration}});
            jc["edges"] = edges;
        }
        json acts = json::array();
        for (const auto& a : c.actions) {
            json ja = {{"id", a.id}, {"kind", models::to_string(a.kind)}, {"cond", a.cond}, {"duration", a.dura}};
            if (!a.depd.empty()) {
                json depd = json::array();
                for (const auto& d : a.depd)
                    depd.push_back({{"action", d.action}, {"rois", d.candidates}});
                ja["depd"] = depd;
            }
            acts.push_back(ja);
        }
        jc["actions"] = acts;
        if (c.grid)
            jc["grid"] = {c.grid->first, c.grid->second};
        classes.push_back(jc);
    }
    j["classes"] = classes;
    json agents = json::array();
    for (const auto& a : s.agents) {
        json ja = {{"id", a.id}, {"class", a.cls}, {"start", a.start}, {"task", a.task}};
        if (a.horizon)
            ja["horizon"] = *a.horizon;
        if (a.t_delay)
            ja["t_delay"] = *a.t_delay;
        agents.push_back(ja);
    }
    j["agents"] = agents;
    json rules = json::array();
    for (const auto& r : s.choose_roi)
        rules.push_back({{"collab", r.collab}, {"collab_roi", r.collab_roi}, {"assist", r.assist}, {"target", r.target}});
    j["choose_roi"] = rules;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Built-ins

namespace {

using models::ActionKind;

// The experimental team. `sfx` renames ROIs, classes and agents so that
// several copies can share one simulation.
void add_team(Scenario& s, const std::string& sfx)
{
    auto r = [&](const std::string& id) { return id + sfx; };

    AgentClass rosie;
    rosie.name = "Rosie" + sfx;
    for (int k = 1; k <= 4; ++k)
        rosie.rois.push_back({r("H" + std::to_string(k)), {r("H" + std::to_string(k)), "harvest_row"}});
    for (const char* id : {"D", "L", "M", "S"})
        rosie.rois.push_back({r(id), {r(id)}});
    rosie.transit = 2.0;
    rosie.grid = std::make_pair(std::size_t{6}, std::size_t{7});
    rosie.actions = {
        {"l", ActionKind::Collaborative, {r("L")}, 4.0, {{"hl", {r("L")}}}},
        {"hl", ActionKind::Assisting, {r("L")}, 4.0, {}},
        {"hro", ActionKind::Assisting, {r("M")}, 4.0, {}},
        {"h", ActionKind::Local, {"harvest_row"}, 4.0, {}},
        {"m", ActionKind::Local, {r("M")}, 4.0, {}},
        {"d", ActionKind::Local, {r("D")}, 4.0, {}},
        {"s", ActionKind::Local, {r("S")}, 4.0, {}},
    };

    AgentClass bot;
    bot.name = "Turtlebot" + sfx;
    for (int k = 1; k <= 2; ++k)
        bot.rois.push_back({r("C" + std::to_string(k)), {r("C" + std::to_string(k)), "connection_point"}});
    for (int k = 3; k <= 4; ++k)
        bot.rois.push_back({r("C" + std::to_string(k)), {r("C" + std::to_string(k)), "connection_aux"}});
    for (int k = 1; k <= 12; ++k)
        bot.rois.push_back({r("P" + std::to_string(k)), {r("P" + std::to_string(k)), "patrol_point"}});
    bot.rois.push_back({r("M"), {r("M")}});
    bot.rois.push_back({r("G"), {r("G")}});
    bot.transit = 2.0;
    bot.grid = std::make_pair(std::size_t{20}, std::size_t{25});
    bot.actions = {
        {"cc", ActionKind::Collaborative, {"connection_point"}, 4.0, {{"hcc", {r("C3"), r("C4")}}}},
        {"g", ActionKind::Collaborative, {r("G")}, 4.0, {{"hg", {r("G")}}}},
        {"ro", ActionKind::Collaborative, {r("M")}, 4.0, {{"hro", {r("M")}}}},
        {"hcc", ActionKind::Assisting, {"connection_aux"}, 4.0, {}},
        {"hg", ActionKind::Assisting, {r("G")}, 4.0, {}},
        {"p", ActionKind::Local, {"patrol_point"}, 4.0, {}},
    };

    s.classes.push_back(std::move(rosie));
    s.classes.push_back(std::move(bot));

    struct Spec {
        const char* id;
        const char* cls;
        const char* start;
        std::string task;
    };
    const std::vector<Spec> agents = {
        {"rosie_0", "Rosie", "H1", "[]<>(h && " + r("H1") + " && <>(h && " + r("H3") + " && <>d))"},
        {"rosie_1", "Rosie", "M", "[]<>(s && <>(l && <>m))"},
        {"rosie_2", "Rosie", "H2", "[]<>(h && " + r("H2") + " && <>(h && " + r("H4") + " && <>d))"},
        {"turtlebot_0", "Turtlebot", "P1", "[]<>(p && " + r("P1") + " && <>(p && " + r("P11") + "))"},
        {"turtlebot_1", "Turtlebot", "P2", "[]<>(p && " + r("P2") + " && <>(p && " + r("P10") + "))"},
        {"turtlebot_2", "Turtlebot", "P4", "[]<>(p && " + r("P4") + " && <>(p && " + r("P6") + "))"},
        {"turtlebot_3", "Turtlebot", "P12",
         "[]<>(p && " + r("P12") + " && <>(p && " + r("P9") + " && <>(cc && " + r("C1") + ")))"},
        {"turtlebot_4", "Turtlebot", "P3", "[]<>(p && " + r("P3") + " && <>(p && " + r("P8") + " && <>g))"},
        {"turtlebot_5", "Turtlebot", "M",
         "<>(ro && <>(p && " + r("P5") + " && <>(cc && " + r("C2") + "))) && []<>(p && " + r("P5") + " && <>(p && " +
             r("P7") + "))"},
    };
    for (const auto& a : agents)
        s.agents.push_back({a.id + sfx, a.cls + sfx, r(a.start), a.task, std::nullopt, std::nullopt});

    s.choose_roi.push_back({"cc", r("C1"), "hcc", r("C3")});
    s.choose_roi.push_back({"cc", r("C2"), "hcc", r("C4")});
}

} // namespace

Scenario canopies_9()
{
    Scenario s;
    s.name = "canopies_9";
    s.seed = 7;
    s.delays = sim::DelayConfig::all(sim::DelayModel::uniform(0.0, 2.0));
    add_team(s, "");
    return s;
}

Scenario scale_90(std::size_t teams)
{
    Scenario s;
    s.name = teams == 10 ? "scale_90" : "scale_" + std::to_string(9 * teams);
    s.seed = 7;
    s.delays = sim::DelayConfig::all(sim::DelayModel::uniform(0.0, 2.0));
    for (std::size_t t = 0; t < teams; ++t)
        add_team(s, "_t" + std::to_string(t));
    return s;
}

std::vector<std::string> builtin_names()
{
    return {"canopies_9", "scale_90"};
}

std::optional<Scenario> builtin(std::string_view name)
{
    if (name == "canopies_9")
        return canopies_9();
    if (name == "scale_90")
        return scale_90();
    return std::nullopt;
}

FilteringPopulation bench_filtering(std::size_t N, std::size_t M, std::uint64_t seed)
{
    if (M == 0 || N < M)
        throw std::invalid_argument("bench_filtering needs 1 <= M <= N");
    std::mt19937_64 rng(seed * 1000003u + N * 31u + M);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    FilteringPopulation p;
    p.request.requester = "requester";
    p.request.request_id = "bench-" + std::to_string(N) + "-" + std::to_string(M);
    p.request.collab_action = "c";
    const double T_c = 100.0;
    for (std::size_t d = 0; d < M; ++d)
        p.request.entries.push_back({"a" + std::to_string(d + 1), "R" + std::to_string(d + 1), T_c});
    const double K = p.request.sentinel();

    for (std::size_t j = 0; j < N; ++j) {
        protocol::ReplyMsg r;
        r.replier = "agent_" + std::to_string(j);
        r.request_id = p.request.request_id;
        for (std::size_t d = 0; d < M; ++d) {
            // The first M agents cover one action each, so every instance is
            // feasible.
            const bool able = (j < M && j == d) || unit() < 0.9;
            const double t = T_c + (unit() * 2.0 - 1.0) * 100.0;
            r.entries.push_back({p.request.entries[d].sigma_d, p.request.entries[d].pi_d, able, able ? t : K});
        }
        p.replies.push_back(std::move(r));
    }
    return p;
}

std::vector<CompiledAgent> compile(const Scenario& s)
{
    std::vector<CompiledAgent> out;
    for (const auto& a : s.agents) {
        const AgentClass* c = s.find_class(a.cls);
        if (!c)
            throw ScenarioError(std::vector<Violation>{{"agent " + a.id, "unknown class '" + a.cls + "'"}});
        CompiledAgent ca{a, c->motion(a.start), c->action_model(s.idle_duration), {}, {}, {}, 0.0, 0.0, {}};
        auto built = models::build_agent_fts(ca.motion, ca.actions);
        ca.fts = std::move(built.fts);
        ca.warnings = std::move(built.warnings);
        logic::PropSet universe = ca.motion.props();
        const logic::PropSet action_props = ca.actions.props();
        universe.insert(action_props.begin(), action_props.end());
        ca.task = logic::parse_formula(a.task, universe);
        ca.nba = logic::nba_of(ca.task);
        ca.horizon = a.horizon.value_or(default_horizon(ca.actions));
        ca.t_delay = a.t_delay.value_or(default_t_delay(ca.actions));
        out.push_back(std::move(ca));
    }
    return out;
}

} // namespace ltlcoord::scenario
