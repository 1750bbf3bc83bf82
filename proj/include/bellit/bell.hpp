#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellit/outcome.hpp"

namespace bellit {

// Deterministic local assignment: one outcome in Z_d per (party, setting).
struct DeterministicStrategy {
    int n = 0;
    int d = 0;
    std::vector<std::array<int, 2>> outcomes;  // [party][setting]
};

// Full-correlated multi-component Bell function for an (n,2,d) scenario:
// one Coefficient per joint setting choice, no marginal terms.
//
// Setting tuples are packed into a mask with the first party (A) in the
// most significant bit, so mask bit (n-1-p) is party p's setting and the
// JSON key bitstring reads left to right as A,B,C,...
class BellFunction {
  public:
    BellFunction() = default;
    BellFunction(int n, int d);

    int n() const { return n_; }
    int d() const { return d_; }
    int num_settings() const { return 1 << n_; }

    int setting_of(uint32_t mask, int party) const { return (mask >> (n_ - 1 - party)) & 1; }
    static uint32_t with_bit(uint32_t mask, int n, int party, int value);

    const Coefficient& coeff(uint32_t mask) const { return coeffs_[mask]; }
    void set_coeff(uint32_t mask, Coefficient c);

    BellFunction scaled(const Rational& s) const;
    BellFunction operator+(const BellFunction& o) const;
    bool operator==(const BellFunction& o) const = default;

    // Stable serialization; exact-equality key for dedup and ordering.
    std::string key() const;

    std::string to_json() const;
    static BellFunction from_json(const std::string& text);

  private:
    int n_ = 0;
    int d_ = 0;
    std::vector<Coefficient> coeffs_;
};

// Affine functional on coincidence probability tables, one exact weight per
// (setting tuple, residue) plus a constant offset. Forms produced from a
// BellFunction are mean-zero per setting row with zero constant.
struct ProbabilityForm {
    int n = 0;
    int d = 0;
    std::vector<std::vector<Rational>> weights;  // [mask][residue]
    Rational constant = Rational(0);

    std::string to_json() const;
    static ProbabilityForm from_json(const std::string& text);
};

// Coincidence probability table P(sum of outcomes = r | settings).
template <typename Scalar>
struct BasicProbabilityTable {
    int n = 0;
    int d = 0;
    std::vector<std::vector<Scalar>> p;  // [mask][residue]
};
using ProbabilityTable = BasicProbabilityTable<Rational>;
using RealProbabilityTable = BasicProbabilityTable<double>;

// weights[s][r] = d*alpha_{s,(-r) mod d}/(d-1) in mean-zero gauge.
ProbabilityForm to_probability_form(const BellFunction& f);

Rational evaluate(const ProbabilityForm& pf, const ProbabilityTable& t);
double evaluate(const ProbabilityForm& pf, const RealProbabilityTable& t);

// Value attained by a deterministic strategy; agrees exactly with
// evaluating the probability form on the strategy's delta table.
Rational evaluate_deterministic(const BellFunction& f, const DeterministicStrategy& strat);

// Delta table of a deterministic strategy.
ProbabilityTable strategy_table(const BellFunction& f, const DeterministicStrategy& strat);

// Fixes the last party's observables to outcome labels k0 (setting 0) and
// k1 (setting 1), producing the (n-1)-party function with
// w'_s = shift(w_{s,0}, k0) + shift(w_{s,1}, k1).
BellFunction restrict_last(const BellFunction& f, int k0, int k1);

// Builds the n-party function from two (n-1)-party ones by the prime-d
// iteration rule. Appends a new last party; restrict_last(.,0,0) recovers
// f00 and restrict_last(.,0,1) recovers f01 exactly.
BellFunction iterate(const BellFunction& f00, const BellFunction& f01);

// Swaps the two settings of every party (used by the d=2 chain that
// produces the MABK family).
BellFunction swap_all_settings(const BellFunction& f);

// Affine-normalized comparison: true iff the mean-zero linear parts are
// positively proportional. If bounds are supplied for both sides, also
// requires bound_a = lambda*bound_b + (constant_a - lambda*constant_b)
// with the per-row means folded into the constants.
struct AffineMatch {
    bool proportional = false;
    bool bounds_consistent = false;
    Rational scale = Rational(0);   // lambda such that a ~ lambda * b
    Rational offset = Rational(0);  // total affine offset of a relative to lambda*b
};
AffineMatch affine_compare(const ProbabilityForm& a, const ProbabilityForm& b,
                           const std::optional<Rational>& bound_a = std::nullopt,
                           const std::optional<Rational>& bound_b = std::nullopt);

std::string mask_bits(uint32_t mask, int n);
uint32_t parse_mask(const std::string& bits, int n);

}  // namespace bellit
