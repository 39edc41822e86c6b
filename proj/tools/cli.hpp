#pragma once

#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace gssl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs the selected acceptance criteria, printing one line each; returns the
/// number of failed criteria.
using VerifyHook = std::function<int(const std::set<int>& only, int workers, std::ostream& out)>;

/// Entry point without the program name; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const VerifyHook& verify = {});

}  // namespace gssl::cli
