#pragma once

#include "ltlcoord/scenario.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace ltlcoord::cli {

enum ExitCode : int {
    kOk = 0,
    kUnsatisfied = 1,
    kValidation = 2,
    kInfeasible = 3,
    kDeadlock = 4,
};

inline constexpr const char* kScenarioDirEnv = "LTLCOORD_SCENARIO_DIR";

// Built-in name, file path, or a file in $LTLCOORD_SCENARIO_DIR (with or
// without the .json suffix).
scenario::Scenario resolve_scenario(const std::string& name);

// args excludes the program name.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ltlcoord::cli
