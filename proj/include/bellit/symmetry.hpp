#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bellit/bell.hpp"

namespace bellit {

// Element of the equivalence group: per-observable cyclic outcome shifts,
// then per-party setting swaps, then a party permutation (applied in that
// order). Group order is n! * 2^n * d^(2n).
struct Transformation {
    std::vector<int> party_perm;                    // party p moves to party_perm[p]
    std::vector<uint8_t> setting_swap;              // per party
    std::vector<std::array<int, 2>> outcome_shift;  // [party][setting], values in Z_d

    static Transformation identity(int n);
    bool is_identity() const;

    std::string to_json() const;
    static Transformation from_json(const std::string& text, int d);
};

Transformation compose(const Transformation& g, const Transformation& h, int d);
Transformation inverse(const Transformation& g, int d);

BellFunction apply(const Transformation& g, const BellFunction& f);

// Parses the recipe notation used to relate catalog entries, e.g.
//   "a1+2, B0<->B1, ABC->CBA"
// where "a1+2" shifts the outcomes of observable A_1 by 2 (mod d),
// "B0<->B1" swaps party B's settings, and "ABC->CBA" permutes parties.
// All items refer to the original labels, as in simultaneous replacement.
Transformation parse_recipe(const std::string& recipe, int n, int d);

mpz_class group_order(int n, int d);

struct OrbitReport {
    uint64_t size = 0;
    mpz_class stabilizer_order;
    std::vector<BellFunction> elements;  // filled when keep_elements is set

    std::string to_json() const;
};

struct OrbitOptions {
    uint64_t budget = 10'000'000;  // max distinct orbit elements
    bool keep_elements = false;
};

// Breadth-first closure of f under the group generators with exact
// coefficient equality as the dedup key.
OrbitReport orbit(const BellFunction& f, const OrbitOptions& opts = {});

// Lexicographically minimal serialization over the full group; equivalence
// of two functions is then equality of canonical forms. Throws when the
// group order exceeds the budget.
BellFunction canonical_form(const BellFunction& f, uint64_t group_budget = 10'000'000);

// Multiset, over setting tuples, of cyclic-shift classes of the mean-zero
// alpha vectors. Invariant under the full group: differing certificates
// prove inequivalence, equal certificates are inconclusive.
std::string invariant_certificate(const BellFunction& f);

enum class Equivalence { Equivalent, Inequivalent, Unknown };

struct EquivalenceReport {
    Equivalence verdict = Equivalence::Unknown;
    std::string method;  // "shape" | "certificate" | "canonical" | "random-search"
};

EquivalenceReport decide_equivalent(const BellFunction& a, const BellFunction& b,
                                    uint64_t group_budget = 10'000'000,
                                    uint64_t random_trials = 200'000, uint64_t seed = 1);

Transformation random_transformation(int n, int d, std::mt19937_64& rng);

}  // namespace bellit
