#include "gantt.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <vector>

namespace ltlcoord::cli {
namespace {

bool shown(const sim::TraceRecord& t)
{
    return t.kind != models::StepKind::Move && t.kind != models::StepKind::Idle;
}

const char* fill_for(models::StepKind k)
{
    switch (k) {
    case models::StepKind::Collaborative:
        return "#d1495b";
    case models::StepKind::Assisting:
        return "#edae49";
    default:
        return "#00798c";
    }
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string gantt_csv(const sim::SimReport& r)
{
    std::string out = "agent,action,kind,roi,start,end,collab_id\n";
    for (const auto& t : r.trace) {
        if (!shown(t))
            continue;
        out += fmt::format("{},{},{},{},{:.6f},{:.6f},{}\n", t.agent, t.action, models::to_string(t.kind), t.roi,
                           t.start, t.end, t.collab_id);
    }
    return out;
}

std::string gantt_svg(const sim::SimReport& r)
{
    constexpr double kLeft = 110.0;
    constexpr double kRow = 22.0;
    constexpr double kTop = 30.0;
    constexpr double kPlotWidth = 1200.0;

    std::vector<std::string> rows;
    for (const auto& a : r.agents)
        rows.push_back(a.id);
    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < rows.size(); ++i)
        row_of[rows[i]] = i;

    double horizon = 1.0;
    for (const auto& t : r.trace)
        horizon = std::max(horizon, t.end);
    const double scale = kPlotWidth / horizon;
    const double width = kLeft + kPlotWidth + 20.0;
    const double height = kTop + kRow * static_cast<double>(rows.size()) + 30.0;

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" font-family=\"sans-serif\" "
        "font-size=\"11\">\n",
        width, height);
    out += fmt::format("<text x=\"{:.1f}\" y=\"18\">{} (seed {})</text>\n", kLeft, escape(r.scenario), r.seed);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = kTop + kRow * static_cast<double>(i);
        out += fmt::format("<text x=\"4\" y=\"{:.1f}\">{}</text>\n", y + 15.0, escape(rows[i]));
        out += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", kLeft,
                           y + kRow, kLeft + kPlotWidth, y + kRow);
    }

    for (const auto& t : r.trace) {
        if (!shown(t))
            continue;
        const auto it = row_of.find(t.agent);
        if (it == row_of.end())
            continue;
        const double x = kLeft + t.start * scale;
        const double w = std::max((t.end - t.start) * scale, 1.0);
        const double y = kTop + kRow * static_cast<double>(it->second) + 3.0;
        out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.1f}\" width=\"{:.2f}\" height=\"{:.1f}\" fill=\"{}\"{}>",
                           x, y, w, kRow - 6.0, fill_for(t.kind), t.collab_id.empty() ? "" : " stroke=\"#222\"");
        out += fmt::format("<title>{} {} @ {} [{:.3f}, {:.3f}]{}</title></rect>\n", escape(t.agent), escape(t.action),
                           escape(t.roi), t.start, t.end, t.collab_id.empty() ? "" : " " + escape(t.collab_id));
        if (w > 24.0)
            out += fmt::format("<text x=\"{:.2f}\" y=\"{:.1f}\" fill=\"#fff\">{}</text>\n", x + 2.0, y + 12.0,
                               escape(t.action));
    }

    const double axis_y = kTop + kRow * static_cast<double>(rows.size()) + 14.0;
    const double tick = horizon > 400.0 ? 100.0 : horizon > 80.0 ? 20.0 : 5.0;
    for (double s = 0.0; s <= horizon; s += tick)
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.0f}</text>\n",
                           kLeft + s * scale, axis_y, s);
    out += "</svg>\n";
    return out;
}

} // namespace ltlcoord::cli
