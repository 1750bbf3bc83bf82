#pragma once

#include <string>
#include <vector>

#include "bellit/rational.hpp"

namespace bellit {

// k-th vertex of the regular simplex with d vertices in d-1 dimensions.
// Unit norm, pairwise dot -1/(d-1), vertices sum to zero. Verification-only:
// all exact computation routes through Coefficient index algebra instead.
struct OutcomeVector {
    int d = 0;
    std::vector<double> components;  // length d-1

    double dot(const OutcomeVector& other) const;
    double norm() const;
};

OutcomeVector outcome_vector(int k, int d);

// (a + b) mod d, the composition rule for outcome labels.
int compose(int a, int b, int d);

bool is_prime(int d);

// Element of the outcome-label group ring modulo the relation that the d
// labels sum to zero. Stored as d exact rationals in mean-zero gauge, which
// makes equality decidable: two coefficients agree iff their alpha arrays
// agree entrywise.
class Coefficient {
  public:
    Coefficient() = default;
    static Coefficient zero(int d);
    // The coefficient consisting of the single label v_k.
    static Coefficient basis(int k, int d);
    // Canonicalizes an arbitrary-gauge alpha array to mean zero.
    static Coefficient from_alphas(std::vector<Rational> raw);

    int d() const { return d_; }
    const std::vector<Rational>& alphas() const { return alpha_; }
    const Rational& alpha(int k) const { return alpha_[k]; }
    bool is_zero() const;

    Coefficient operator+(const Coefficient& o) const;
    Coefficient operator-(const Coefficient& o) const;
    Coefficient operator-() const;
    Coefficient operator*(const Rational& s) const;
    bool operator==(const Coefficient& o) const = default;

    // Cyclic convolution: z_m = sum over k+j = m (mod d) of x_k y_j.
    Coefficient convolve(const Coefficient& y) const;
    // Convolution with v_c, i.e. the alphas cyclically shifted by c.
    Coefficient shift(int c) const;
    // Scalar product against the first simplex component (1 for v_0,
    // -1/(d-1) otherwise); equals d*alpha_0/(d-1) in mean-zero gauge.
    Rational first_component() const;

    // Compact stable rendering, used for hashing and lexicographic order.
    std::string key() const;

  private:
    void normalize();

    int d_ = 0;
    std::vector<Rational> alpha_;
};

Coefficient coeff_convolve(const Coefficient& x, const Coefficient& y);
Coefficient coeff_shift(const Coefficient& x, int c);
Rational first_component(const Coefficient& x);

}  // namespace bellit
