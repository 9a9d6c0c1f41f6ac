#pragma once

#include "ltlcoord/sim.hpp"

#include <string>

namespace ltlcoord::cli {

// Timeline of non-movement actions; idle loops are left out as well.
std::string gantt_csv(const sim::SimReport& r);
std::string gantt_svg(const sim::SimReport& r);

} // namespace ltlcoord::cli
