#pragma once

#include <string>
#include <vector>

#include "bellit/catalog.hpp"
#include "bellit/quantum.hpp"

namespace bellit {

struct SearchConfig {
    std::string seed00;        // catalog id used as the fixed (n-1)-party block
    std::string orbit_source;  // catalog id whose equivalence orbit supplies the other block
    int restarts = 16;          // optimizer restarts per candidate, first pass
    int refine_restarts = 64;   // restarts for the provisional winner set
    double tol = 1e-9;
    int max_evals = 20000;      // per restart, refinement pass
    int triage_max_evals = 4000;  // per restart, first pass
    uint64_t seed = 1;
    double tie_tol = 1e-6;        // winners lie within this of the minimum vc
    double refine_window = 2e-3;  // candidates re-optimized before final thresholding
    uint64_t orbit_budget = 10'000'000;
    uint64_t lhv_budget = 100'000'000;
    int workers = 0;
};

struct SearchWinner {
    BellFunction function;
    double vc = 0.0;
    Rational lhv;
    double nl_psi = 0.0;
    size_t orbit_index = 0;
};

struct SearchResult {
    uint64_t candidates_evaluated = 0;
    uint64_t optimized_count = 0;  // candidates not excluded by the exact bound
    double min_vc = 0.0;
    std::vector<SearchWinner> winners;
    uint64_t raw_winner_count = 0;    // before exact-coefficient dedup
    uint64_t dedup_winner_count = 0;  // after
    // vc histogram on a 1e-4 grid so the tie threshold can be audited
    std::vector<std::pair<double, uint64_t>> histogram;
    double wall_seconds = 0.0;

    std::string to_json(bool include_winner_functions = false) const;
};

// The discovery procedure: iterate the fixed seed with every element of the
// orbit, score each candidate by critical visibility, and report the set of
// minimal-vc constructions.
SearchResult run_search(const BellFunction& seed00, const std::vector<BellFunction>& orbit_elements,
                        const SearchConfig& cfg);
SearchResult run_search(const Catalog& catalog, const SearchConfig& cfg);

struct CandidateReport {
    bool spectrum_ok = false;
    bool vc_ok = false;
    double vc = 0.0;
    double nl_psi = 0.0;
    Rational lhv;
    std::vector<Rational> spectrum;

    bool pass() const { return spectrum_ok && vc_ok; }
    std::string to_json() const;
};

// Confirms a candidate's deterministic value spectrum (exactly) and its
// critical visibility (within tol).
CandidateReport verify_candidate(const BellFunction& f, const std::vector<Rational>& expected_spectrum,
                                 double expected_vc, double tol, const QuantumOptions& opts = {});

}  // namespace bellit
