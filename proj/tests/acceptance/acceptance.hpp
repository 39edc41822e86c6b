#pragma once

#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::set<int> only;       // empty = all criteria
  int workers = 0;          // grid worker threads, 0 = hardware concurrency
  std::ostream* log = nullptr;
};

inline constexpr int kCriterionCount = 9;

std::vector<CriterionResult> run(const Options& options);

/// "PASS [3] title: detail" style line.
std::string format_line(const CriterionResult& result);

}  // namespace acceptance
