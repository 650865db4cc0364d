#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace opforge {

using Json = nlohmann::json;

// Per-law tally of checks with a bounded list of witnesses for failures.
struct Report {
  struct Violation {
    std::string law;
    Json witness;
  };

  std::map<std::string, std::size_t> checked;
  std::map<std::string, std::size_t> failed;
  std::vector<Violation> violations;
  std::size_t max_witnesses_per_law = 5;

  bool ok() const { return violations.empty() && failed.empty(); }

  // Records one check; returns `holds` so callers can chain.
  bool check(const std::string& law, bool holds, const std::function<Json()>& witness = {}) {
    ++checked[law];
    if (!holds) {
      std::size_t n = ++failed[law];
      if (n <= max_witnesses_per_law) violations.push_back({law, witness ? witness() : Json::object()});
    }
    return holds;
  }

  void merge(const Report& other) {
    for (const auto& [k, v] : other.checked) checked[k] += v;
    for (const auto& [k, v] : other.failed) failed[k] += v;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }

  Json to_json() const {
    Json laws = Json::object();
    for (const auto& [k, v] : checked) {
      std::size_t f = failed.count(k) ? failed.at(k) : 0;
      laws[k] = {{"checked", v}, {"failed", f}, {"pass", f == 0}};
    }
    Json vs = Json::array();
    for (const auto& v : violations) vs.push_back({{"law", v.law}, {"witness", v.witness}});
    return {{"pass", ok()}, {"laws", laws}, {"violations", vs}};
  }
};

}  // namespace opforge
