#pragma once

#include <cstdint>
#include <vector>

#include "bellit/bell.hpp"

namespace bellit {

struct LhvReport {
    Rational bound;                 // max over all deterministic strategies
    std::vector<Rational> spectrum; // sorted, deduplicated attained values
    uint64_t argmax_count = 0;      // strategies attaining the bound
    uint64_t strategies = 0;        // d^(2n), strategies enumerated

    std::string to_json() const;
};

struct LhvOptions {
    uint64_t budget = 100'000'000;  // max strategy evaluations
    int workers = 0;                // 0 = all hardware threads
};

// Exact classical bound and deterministic value spectrum by exhaustive
// enumeration of all d^(2n) local strategies. Throws if the enumeration
// exceeds the budget; raise it explicitly for larger scenarios.
LhvReport lhv_bound(const BellFunction& f, const LhvOptions& opts = {});

bool spectrum_matches(const BellFunction& f, const std::vector<Rational>& target,
                      const LhvOptions& opts = {});

}  // namespace bellit
