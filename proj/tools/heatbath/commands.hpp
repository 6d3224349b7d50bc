#pragma once

#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "artifacts.hpp"

namespace heatbath::cli {

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  /// Runs the experiment, writes artifacts and summary.json, returns the exit status.
  std::function<int(const Globals&)> run;
};

/// Adds every subcommand with its flags. Storage for the flag values lives
/// in the returned closures.
std::vector<Command> register_commands(CLI::App& app);

}  // namespace heatbath::cli
