#include "report.hpp"

#include "ltlcoord/logic.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ltlcoord::cli {
namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

} // namespace

std::vector<TraceRow> parse_trace_csv(std::string_view text)
{
    std::vector<TraceRow> rows;
    std::stringstream ss{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (lineno == 1) {
            if (line.rfind("agent,action,roi,start,end", 0) != 0)
                throw std::runtime_error("trace line 1: unexpected header");
            continue;
        }
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != 6)
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": expected 6 fields");
        TraceRow r{cells[0], cells[1], cells[2], 0.0, 0.0, cells[5]};
        try {
            r.start = std::stod(cells[3]);
            r.end = std::stod(cells[4]);
        } catch (const std::exception&) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": bad time");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<AgentVerdict> verify_trace(const std::vector<scenario::CompiledAgent>& agents,
                                       const std::vector<TraceRow>& rows, std::size_t min_hits)
{
    std::vector<AgentVerdict> out;
    for (const auto& a : agents) {
        const auto& fts = a.fts;
        logic::Monitor monitor(a.nba);
        monitor.step(fts.labels[fts.initial]);
        AgentVerdict v;
        v.agent = a.config.id;
        for (const auto& r : rows) {
            if (r.agent != v.agent)
                continue;
            auto s = fts.find(r.roi, r.action);
            if (!s)
                s = fts.find(r.roi, models::kNone);
            if (!s) {
                v.rejected = true;
                break;
            }
            monitor.step(fts.labels[*s]);
            ++v.steps;
        }
        v.hits = monitor.hits();
        v.rejected = v.rejected || monitor.rejected();
        v.satisfied = !v.rejected && v.hits >= min_hits;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<SpreadRow> sync_spreads(const std::vector<TraceRow>& rows)
{
    std::map<std::string, SpreadRow> by_id;
    std::map<std::string, double> hi;
    for (const auto& r : rows) {
        if (r.collab_id.empty())
            continue;
        auto [it, fresh] = by_id.try_emplace(r.collab_id, SpreadRow{r.collab_id, 0, r.start, 0.0});
        ++it->second.participants;
        it->second.start = std::min(it->second.start, r.start);
        double& h = hi.try_emplace(r.collab_id, r.start).first->second;
        h = std::max(h, r.start);
    }
    std::vector<SpreadRow> out;
    for (auto& [id, row] : by_id) {
        row.spread = hi[id] - row.start;
        out.push_back(row);
    }
    std::stable_sort(out.begin(), out.end(), [](const SpreadRow& a, const SpreadRow& b) { return a.start < b.start; });
    return out;
}

} // namespace ltlcoord::cli
