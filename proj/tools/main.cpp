#include "acceptance.hpp"
#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  const auto verify = [](const std::set<int>& only, int workers, std::ostream& out) {
    const auto results = acceptance::run({.only = only, .workers = workers, .log = &out});
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    out << results.size() - failed << "/" << results.size() << " criteria passed\n";
    return failed;
  };
  return gssl::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr, verify);
}
