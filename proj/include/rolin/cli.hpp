#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rolin/lifter.hpp"
#include "rolin/statistic.hpp"

namespace rolin {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

nlohmann::ordered_json to_json(const TestResult& r);
nlohmann::ordered_json to_json(const LifterConstants& c);

// Entry point of the `rolin` tool; output goes to `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rolin
