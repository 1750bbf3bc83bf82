#include <doctest.h>

#include <cmath>
#include <random>

#include "bellit/bell.hpp"

using namespace bellit;

namespace {

BellFunction chsh() {
    // -(1/2)(v_1 Q00 + v_1 Q01 + v_1 Q10 - v_1 Q11)
    BellFunction f(2, 2);
    Coefficient v1 = Coefficient::basis(1, 2) * rat(-1, 2);
    f.set_coeff(0b00, v1);
    f.set_coeff(0b01, v1);
    f.set_coeff(0b10, v1);
    f.set_coeff(0b11, -v1);
    return f;
}

BellFunction random_function(int n, int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    BellFunction f(n, d);
    for (int mask = 0; mask < f.num_settings(); ++mask) {
        std::vector<Rational> a(d);
        for (auto& x : a) x = rat(num(rng), den(rng));
        f.set_coeff(mask, Coefficient::from_alphas(a));
    }
    return f;
}

DeterministicStrategy random_strategy(int n, int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, d - 1);
    DeterministicStrategy s;
    s.n = n;
    s.d = d;
    s.outcomes.resize(n);
    for (int p = 0; p < n; ++p) {
        s.outcomes[p][0] = pick(rng);
        s.outcomes[p][1] = pick(rng);
    }
    return s;
}

// Closed forms of the restrictions of an iterated function:
// I^{0,l} = -(v_1 + ... + v_{l-1}) f00 + (v_0 + ... + v_{l-1}) f01.
BellFunction restriction_closed_form(const BellFunction& f00, const BellFunction& f01, int l) {
    int d = f00.d();
    if (l == 0) l = d;  // the label sums below are periodic with period d
    Coefficient c00 = Coefficient::zero(d);
    Coefficient c01 = Coefficient::zero(d);
    for (int k = 1; k < l; ++k) c00 = c00 - Coefficient::basis(k, d);
    for (int k = 0; k < l; ++k) c01 = c01 + Coefficient::basis(k, d);
    BellFunction out(f00.n(), d);
    for (int s = 0; s < f00.num_settings(); ++s)
        out.set_coeff(s, f00.coeff(s).convolve(c00) + f01.coeff(s).convolve(c01));
    return out;
}

}  // namespace

TEST_CASE("CHSH probability form has weights +-1/2") {
    ProbabilityForm pf = to_probability_form(chsh());
    for (int mask = 0; mask < 4; ++mask) {
        Rational sign = mask == 0b11 ? rat(-1) : rat(1);
        CHECK(pf.weights[mask][0] == sign * rat(1, 2));
        CHECK(pf.weights[mask][1] == sign * rat(-1, 2));
    }
    CHECK(pf.constant == rat(0));
}

TEST_CASE("zero function maps to zero weights") {
    BellFunction f(2, 3);
    ProbabilityForm pf = to_probability_form(f);
    for (const auto& row : pf.weights)
        for (const auto& w : row) CHECK(w == rat(0));
}

TEST_CASE("uniform table evaluates to zero; deterministic all-zero CHSH gives 1") {
    std::mt19937_64 rng(5);
    for (int d : {2, 3, 5}) {
        BellFunction f = random_function(2, d, rng);
        ProbabilityTable uniform;
        uniform.n = 2;
        uniform.d = d;
        uniform.p.assign(4, std::vector<Rational>(d, rat(1, d)));
        CHECK(evaluate(to_probability_form(f), uniform) == rat(0));
    }

    DeterministicStrategy zeros{2, 2, {{0, 0}, {0, 0}}};
    CHECK(evaluate_deterministic(chsh(), zeros) == rat(1));
    CHECK(evaluate(to_probability_form(chsh()), strategy_table(chsh(), zeros)) == rat(1));
}

TEST_CASE("constant offset is returned on the zero table") {
    ProbabilityForm pf = to_probability_form(chsh());
    pf.constant = rat(7, 3);
    ProbabilityTable zero;
    zero.n = 2;
    zero.d = 2;
    zero.p.assign(4, std::vector<Rational>(2, rat(0)));
    CHECK(evaluate(pf, zero) == rat(7, 3));
}

TEST_CASE("deterministic evaluation equals the delta-table route") {
    std::mt19937_64 rng(23);
    for (int d : {2, 3, 5}) {
        for (int n = 1; n <= 3; ++n) {
            BellFunction f = random_function(n, d, rng);
            ProbabilityForm pf = to_probability_form(f);
            for (int rep = 0; rep < 8; ++rep) {
                DeterministicStrategy s = random_strategy(n, d, rng);
                CHECK(evaluate_deterministic(f, s) == evaluate(pf, strategy_table(f, s)));
            }
        }
    }
}

TEST_CASE("uniformly shifting one observable shifts the function") {
    std::mt19937_64 rng(29);
    BellFunction f = random_function(2, 3, rng);
    // shift outcomes of B_1 by c: equivalent to convolving the s=_1 coefficients
    int c = 2;
    BellFunction g(2, 3);
    for (int mask = 0; mask < 4; ++mask)
        g.set_coeff(mask, (mask & 1) ? f.coeff(mask).shift(c) : f.coeff(mask));
    for (int rep = 0; rep < 10; ++rep) {
        DeterministicStrategy s = random_strategy(2, 3, rng);
        DeterministicStrategy shifted = s;
        shifted.outcomes[1][1] = (s.outcomes[1][1] + c) % 3;
        CHECK(evaluate_deterministic(f, shifted) == evaluate_deterministic(g, s));
    }
}

TEST_CASE("restrict of a 2-party function has one party") {
    std::mt19937_64 rng(31);
    BellFunction f = random_function(2, 3, rng);
    BellFunction r = restrict_last(f, 0, 2);
    CHECK(r.n() == 1);
    CHECK(r.num_settings() == 2);
    BellFunction one(1, 3);
    CHECK_THROWS(restrict_last(one, 0, 0));
}

TEST_CASE("iterate rejects non-prime d and shape mismatch") {
    std::mt19937_64 rng(37);
    BellFunction f4 = random_function(2, 4, rng);
    CHECK_THROWS(iterate(f4, f4));
    BellFunction a = random_function(2, 3, rng);
    BellFunction b = random_function(1, 3, rng);
    CHECK_THROWS(iterate(a, b));
}

TEST_CASE("restriction round-trip recovers both blocks exactly") {
    std::mt19937_64 rng(41);
    for (int d : {2, 3, 5, 7}) {
        for (int n1 : {1, 2}) {
            for (int rep = 0; rep < 5; ++rep) {
                BellFunction f00 = random_function(n1, d, rng);
                BellFunction f01 = random_function(n1, d, rng);
                BellFunction up = iterate(f00, f01);
                CHECK(restrict_last(up, 0, 0) == f00);
                CHECK(restrict_last(up, 0, 1) == f01);
            }
        }
    }
}

TEST_CASE("all restrictions match the closed forms") {
    std::mt19937_64 rng(43);
    for (int d : {3, 5, 7}) {
        BellFunction f00 = random_function(2, d, rng);
        BellFunction f01 = random_function(2, d, rng);
        BellFunction up = iterate(f00, f01);
        for (int l = 0; l < d; ++l)
            CHECK(restrict_last(up, 0, l) == restriction_closed_form(f00, f01, l));
    }
}

TEST_CASE("iterate is linear over rational scalars") {
    std::mt19937_64 rng(47);
    for (int d : {3, 5}) {
        BellFunction a = random_function(2, d, rng);
        BellFunction b = random_function(2, d, rng);
        BellFunction c = random_function(2, d, rng);
        BellFunction e = random_function(2, d, rng);
        Rational s = rat(3, 7);
        CHECK(iterate(a.scaled(s) + b, c.scaled(s) + e) ==
              iterate(a, c).scaled(s) + iterate(b, e));
    }
}

TEST_CASE("reconstruction from the full restriction family") {
    // averaging shifted restrictions recovers the last party's blocks:
    // w_(s,0) = (1/d) sum_k0 shift(I^{k0,k1}_s, -k0) for any fixed k1.
    std::mt19937_64 rng(53);
    for (int d : {3, 5}) {
        BellFunction f = random_function(3, d, rng);
        for (int k1 : {0, 1}) {
            BellFunction sum0(2, d);
            for (int k0 = 0; k0 < d; ++k0) {
                BellFunction r = restrict_last(f, k0, k1);
                for (int s = 0; s < 4; ++s)
                    sum0.set_coeff(s, sum0.coeff(s) + r.coeff(s).shift((d - k0) % d));
            }
            for (int s = 0; s < 4; ++s)
                CHECK(sum0.coeff(s) * rat(1, d) == f.coeff((uint32_t(s) << 1)));
        }
    }
}

TEST_CASE("JSON round trip and gauge canonicalization on load") {
    std::mt19937_64 rng(59);
    BellFunction f = random_function(3, 3, rng);
    CHECK(BellFunction::from_json(f.to_json()) == f);

    // arbitrary-gauge input canonicalizes
    BellFunction g = BellFunction::from_json(
        R"({"n":1,"d":3,"coeffs":{"0":["1","1","1"],"1":["5/3","2/3","2/3"]}})");
    CHECK(g.coeff(0).is_zero());
    CHECK(g.coeff(1) == Coefficient::basis(0, 3));
}

TEST_CASE("affine comparison identifies proportional forms") {
    BellFunction f = chsh();
    ProbabilityForm a = to_probability_form(f);
    ProbabilityForm b = a;
    for (auto& row : b.weights) {
        for (auto& w : row) w = w * rat(3) + rat(1, 4);  // scale and per-row offset
    }
    b.constant = rat(-2);
    AffineMatch m = affine_compare(b, a, rat(3) * rat(1) + rat(1, 4) * rat(4) + rat(-2), rat(1));
    CHECK(m.proportional);
    CHECK(m.scale == rat(3));
    CHECK(m.bounds_consistent);

    // non-proportional
    ProbabilityForm c = a;
    c.weights[0][0] += rat(1, 7);
    CHECK_FALSE(affine_compare(c, a).proportional);
}
