#include <doctest.h>

#include <random>

#include "bellit/symmetry.hpp"

using namespace bellit;

namespace {

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

BellFunction cglmp3() {
    BellFunction f(2, 3);
    std::vector<Rational> a00{rat(0), rat(-2, 3), rat(-1, 3)};
    std::vector<Rational> a01{rat(0), rat(-1, 3), rat(-2, 3)};
    std::vector<Rational> a11{rat(0), rat(1, 3), rat(2, 3)};
    f.set_coeff(0b00, Coefficient::from_alphas(a00));
    f.set_coeff(0b01, Coefficient::from_alphas(a01));
    f.set_coeff(0b10, Coefficient::from_alphas(a01));
    f.set_coeff(0b11, Coefficient::from_alphas(a11));
    return f;
}

}  // namespace

TEST_CASE("identity leaves functions unchanged") {
    std::mt19937_64 rng(5);
    BellFunction f = random_function(3, 3, rng);
    CHECK(apply(Transformation::identity(3), f) == f);
}

TEST_CASE("apply respects composition and inverses") {
    std::mt19937_64 rng(7);
    for (int d : {2, 3, 5}) {
        for (int n : {2, 3}) {
            BellFunction f = random_function(n, d, rng);
            for (int rep = 0; rep < 12; ++rep) {
                Transformation g = random_transformation(n, d, rng);
                Transformation h = random_transformation(n, d, rng);
                CHECK(apply(compose(g, h, d), f) == apply(g, apply(h, f)));
                CHECK(apply(inverse(g, d), apply(g, f)) == f);
                CHECK(compose(g, inverse(g, d), d).is_identity());
            }
        }
    }
}

TEST_CASE("composition is associative") {
    std::mt19937_64 rng(11);
    int n = 3, d = 3;
    for (int rep = 0; rep < 20; ++rep) {
        Transformation a = random_transformation(n, d, rng);
        Transformation b = random_transformation(n, d, rng);
        Transformation c = random_transformation(n, d, rng);
        Transformation left = compose(compose(a, b, d), c, d);
        Transformation right = compose(a, compose(b, c, d), d);
        BellFunction f = random_function(n, d, rng);
        CHECK(apply(left, f) == apply(right, f));
        CHECK(left.party_perm == right.party_perm);
        CHECK(left.setting_swap == right.setting_swap);
        CHECK(left.outcome_shift == right.outcome_shift);
    }
}

TEST_CASE("recipe parser matches hand-built transformations") {
    int n = 2, d = 3;
    Transformation g = parse_recipe("a1+2, B0<->B1", n, d);
    CHECK(g.outcome_shift[0][1] == 2);
    CHECK(g.setting_swap[1] == 1);
    CHECK(g.party_perm == std::vector<int>{0, 1});

    Transformation p = parse_recipe("ABC->CBA", 3, d);
    CHECK(p.party_perm == std::vector<int>{2, 1, 0});

    // permutation letters past the party count must map to themselves
    Transformation q = parse_recipe("ABCD->CBAD", 3, d);
    CHECK(q.party_perm == std::vector<int>{2, 1, 0});
    CHECK_THROWS(parse_recipe("ABC->CAB, x", 3, d));
    CHECK_THROWS(parse_recipe("e0+1", 3, d));
}

TEST_CASE("orbit of the d=3 CGLMP function has 54 elements") {
    OrbitReport r = orbit(cglmp3());
    CHECK(r.size == 54);
    CHECK(r.stabilizer_order * mpz_class(54) == group_order(2, 3));
}

TEST_CASE("orbit budget guard") {
    std::mt19937_64 rng(13);
    BellFunction f = random_function(2, 3, rng);
    OrbitOptions opts;
    opts.budget = 10;
    CHECK_THROWS(orbit(f, opts));
}

TEST_CASE("canonical form is constant on orbits and separates classes") {
    std::mt19937_64 rng(17);
    BellFunction f = cglmp3();
    BellFunction cf = canonical_form(f);
    for (int rep = 0; rep < 8; ++rep) {
        Transformation g = random_transformation(2, 3, rng);
        CHECK(canonical_form(apply(g, f)) == cf);
    }
    // a generic random function should not be equivalent to CGLMP
    BellFunction other = random_function(2, 3, rng);
    CHECK(canonical_form(other) != cf);
}

TEST_CASE("invariant certificate is invariant and sometimes conclusive") {
    std::mt19937_64 rng(19);
    BellFunction f = random_function(3, 3, rng);
    std::string cert = invariant_certificate(f);
    for (int rep = 0; rep < 10; ++rep) {
        Transformation g = random_transformation(3, 3, rng);
        CHECK(invariant_certificate(apply(g, f)) == cert);
    }
}

TEST_CASE("equivalence decision") {
    std::mt19937_64 rng(23);
    BellFunction f = cglmp3();
    Transformation g = random_transformation(2, 3, rng);
    EquivalenceReport r = decide_equivalent(f, apply(g, f));
    CHECK(r.verdict == Equivalence::Equivalent);

    BellFunction other = random_function(2, 3, rng);
    EquivalenceReport r2 = decide_equivalent(f, other);
    CHECK(r2.verdict == Equivalence::Inequivalent);
}

TEST_CASE("empty recipe is the identity") {
    Transformation g = parse_recipe("", 3, 5);
    CHECK(g.is_identity());
}

TEST_CASE("transformation JSON round trip") {
    std::mt19937_64 rng(29);
    Transformation g = random_transformation(3, 5, rng);
    Transformation back = Transformation::from_json(g.to_json(), 5);
    CHECK(back.party_perm == g.party_perm);
    CHECK(back.setting_swap == g.setting_swap);
    CHECK(back.outcome_shift == g.outcome_shift);
}
