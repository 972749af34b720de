#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ksynth {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool skipped = false;  // quick mode leaves heavier scopes out
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  bool quick = false;  // restrict to L <= 3 scopes
  int jobs = 2;
  std::uint64_t seed = 0;
};

/// Runs every acceptance criterion and returns one result per criterion.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options);

/// One pass/fail line per criterion plus a summary line.
void print_check_results(std::ostream& out, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace ksynth
