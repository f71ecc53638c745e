#pragma once

#include <string>
#include <vector>

#include "greenop/manifest.hpp"

namespace greenop::cli {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string anchor;
};

struct Summary {
  std::string command;
  std::vector<Check> checks;
  double wall_time = 0.0;
  std::string error;

  bool pass() const;
  // value <= threshold, or value >= threshold when `at_least` is set.
  void add(const std::string& name, double value, double threshold, const std::string& anchor,
           bool at_least = false);
  nlohmann::json to_json() const;
};

// Exit statuses.
enum Status : int { ok = 0, check_failed = 1, bad_input = 2, not_converged = 3 };

// Runs one manifest, writes summary.json and the artifacts under m.out.
int run(const RunManifest& m);

}  // namespace greenop::cli
