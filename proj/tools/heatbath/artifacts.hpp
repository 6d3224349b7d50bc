#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace heatbath::cli {

namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  std::string out = "heatbath-out";
};

/// Creates `dir` if needed and writes a file through `fill`.
void write_file(const fs::path& dir, const std::string& name, const std::function<void(std::ostream&)>& fill);
void write_json(const fs::path& dir, const std::string& name, const json& doc);

/// summary.json: {command, seed, params, checks, passed}.
json make_summary(const std::string& command, std::uint64_t seed, const json& params,
                  const std::vector<experiments::Check>& checks);

/// Prints one line per check; failures go to stderr.
void print_checks(const std::vector<experiments::Check>& checks);

/// Merges summary.json files from each directory. Returns the exit status.
int report(const std::vector<std::string>& dirs, const std::string& out);

/// C1 < C2 < ... < C10, then other ids alphabetically.
bool criterion_less(const std::string& a, const std::string& b);

}  // namespace heatbath::cli
