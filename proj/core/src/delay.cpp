#include "ltlcoord/delay.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ltlcoord::sim {

std::vector<std::string> DelayModel::validate() const
{
    std::vector<std::string> v;
    if (kind == Kind::None)
        return v;
    if (!std::isfinite(lo) || !std::isfinite(hi))
        v.emplace_back("delay bounds must be finite");
    if (lo < 0.0)
        v.emplace_back("delay must be nonnegative");
    if (hi < lo)
        v.emplace_back("delay upper bound below lower bound");
    return v;
}

std::string DelayModel::to_string() const
{
    char buf[96];
    switch (kind) {
    case Kind::None:
        return "none";
    case Kind::Fixed:
        std::snprintf(buf, sizeof buf, "fixed:%g", lo);
        return buf;
    case Kind::Uniform:
        std::snprintf(buf, sizeof buf, "uniform:%g:%g", lo, hi);
        return buf;
    }
    return "none";
}

std::optional<DelayModel> parse_delay(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    try {
        if (parts.size() == 1 && parts[0] == "none")
            return DelayModel::none();
        if (parts.size() == 2 && parts[0] == "fixed")
            return DelayModel::fixed(std::stod(parts[1]));
        if (parts.size() == 3 && parts[0] == "uniform")
            return DelayModel::uniform(std::stod(parts[1]), std::stod(parts[2]));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return std::nullopt;
}

double sample_delay(const DelayModel& model, std::mt19937_64& rng)
{
    switch (model.kind) {
    case DelayModel::Kind::None:
        return 0.0;
    case DelayModel::Kind::Fixed:
        return model.lo;
    case DelayModel::Kind::Uniform: {
        // 53 random mantissa bits, same stream on every standard library.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return model.lo + (model.hi - model.lo) * u;
    }
    }
    return 0.0;
}

const DelayModel& DelayConfig::for_kind(models::StepKind k) const
{
    static const DelayModel zero;
    switch (k) {
    case models::StepKind::Move:
        return move;
    case models::StepKind::Local:
        return local;
    case models::StepKind::Collaborative:
        return collaborative;
    case models::StepKind::Assisting:
        return assisting;
    case models::StepKind::Idle:
        break;
    }
    return zero;
}

} // namespace ltlcoord::sim
