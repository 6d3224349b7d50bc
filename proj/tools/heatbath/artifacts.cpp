#include "artifacts.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace heatbath::cli {

namespace {

std::optional<int> criterion_number(const std::string& id) {
  if (id.size() < 2 || id[0] != 'C') return std::nullopt;
  if (!std::all_of(id.begin() + 1, id.end(), [](unsigned char ch) { return std::isdigit(ch); }))
    return std::nullopt;
  return std::stoi(id.substr(1));
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

void write_file(const fs::path& dir, const std::string& name, const std::function<void(std::ostream&)>& fill) {
  fs::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  fill(os);
}

void write_json(const fs::path& dir, const std::string& name, const json& doc) {
  write_file(dir, name, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

json make_summary(const std::string& command, std::uint64_t seed, const json& params,
                  const std::vector<experiments::Check>& checks) {
  json list = json::array();
  for (const auto& c : checks) list.push_back(experiments::to_json(c));
  return {{"command", command}, {"seed", seed}, {"params", params}, {"checks", list},
          {"passed", experiments::all_passed(checks)}};
}

void print_checks(const std::vector<experiments::Check>& checks) {
  for (const auto& c : checks) {
    auto& os = c.passed ? std::cout : std::cerr;
    os << (c.passed ? "PASS " : "FAIL ") << '[' << c.id << "] " << c.name << ": " << format_value(c.value)
       << " (threshold " << format_value(c.threshold) << ")\n";
  }
}

bool criterion_less(const std::string& a, const std::string& b) {
  const auto na = criterion_number(a), nb = criterion_number(b);
  if (na && nb) return *na < *nb;
  if (na || nb) return na.has_value();
  return a < b;
}

int report(const std::vector<std::string>& dirs, const std::string& out) {
  if (dirs.empty()) {
    std::cerr << "report: no run directories given\n";
    return 2;
  }
  struct Entry {
    bool passed = true;
    int checks = 0;
    std::vector<std::string> failed;
    std::vector<std::string> sources;
  };
  std::map<std::string, Entry, decltype(&criterion_less)> table(&criterion_less);
  json missing = json::array();
  for (const std::string& d : dirs) {
    const fs::path file = fs::path(d) / "summary.json";
    std::ifstream is(file);
    if (!is) {
      std::cerr << "report: missing " << file.string() << '\n';
      missing.push_back(d);
      continue;
    }
    json s;
    try {
      s = json::parse(is);
    } catch (const json::exception& e) {
      std::cerr << "report: unreadable " << file.string() << ": " << e.what() << '\n';
      missing.push_back(d);
      continue;
    }
    const std::string source = s.value("command", std::string("?")) + "@" + d;
    for (const json& c : s.at("checks")) {
      Entry& e = table[c.at("id").get<std::string>()];
      ++e.checks;
      if (!c.at("passed").get<bool>()) {
        e.passed = false;
        e.failed.push_back(c.at("name").get<std::string>());
      }
      if (std::find(e.sources.begin(), e.sources.end(), source) == e.sources.end()) e.sources.push_back(source);
    }
  }

  json rows = json::array();
  bool ok = missing.empty();
  for (const auto& [id, e] : table) {
    ok = ok && e.passed;
    std::cout << (e.passed ? "PASS " : "FAIL ") << id << " (" << e.checks << " checks)";
    for (const auto& f : e.failed) std::cout << "\n     failed: " << f;
    std::cout << '\n';
    rows.push_back({{"id", id}, {"passed", e.passed}, {"checks", e.checks}, {"failed", e.failed},
                    {"sources", e.sources}});
  }
  for (const auto& m : missing) std::cout << "MISSING " << m.get<std::string>() << '\n';
  if (!out.empty())
    write_json(out, "report.json", {{"criteria", rows}, {"missing", missing}, {"passed", ok}});
  return ok ? 0 : 1;
}

}  // namespace heatbath::cli
