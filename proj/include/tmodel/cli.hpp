#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tmodel/workspace.hpp"

namespace tmodel {

struct CliOptions {
  std::string out_dir = "out";
  std::optional<std::size_t> budget_filler, budget_reindex;
  std::uint64_t seed = 1;
  std::optional<int> degree;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnknown = 2;

const std::vector<std::string>& command_names();

/// Runs one subcommand, writing its tables under opt.out_dir and echoing them to out.
/// Returns kExitOk or kExitUnknown; throws UnknownCommand, MissingArgument and the
/// library errors.
int run_command(const Workspace& ws, const std::string& command, const std::vector<std::string>& args,
                const CliOptions& opt, std::ostream& out);

/// Seeded invariant suites; returns true when every check passes.
bool selftest(std::uint64_t seed, std::ostream& out, const std::string& out_dir);

}  // namespace tmodel
