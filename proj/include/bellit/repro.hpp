#pragma once

#include <string>
#include <vector>

namespace bellit {

// The verification suite: one entry per headline result the library is
// expected to reproduce, each with its tolerance pinned in code.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct ReproOptions {
    std::string catalog_path;  // empty = default
    int workers = 0;
    uint64_t seed = 1;
};

// Runs the selected criteria (all when `only` is empty), printing one
// PASS/FAIL line per criterion to stdout.
std::vector<CriterionResult> run_repro(const ReproOptions& opts, const std::vector<int>& only = {});

}  // namespace bellit
