#include <doctest.h>

#include <cmath>
#include <random>

#include "bellit/outcome.hpp"

using namespace bellit;

namespace {

Coefficient random_coeff(int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-12, 12);
    std::uniform_int_distribution<int> den(1, 6);
    std::vector<Rational> a(d);
    for (auto& x : a) x = rat(num(rng), den(rng));
    return Coefficient::from_alphas(a);
}

}  // namespace

TEST_CASE("outcome vectors satisfy the simplex identities") {
    for (int d = 2; d <= 11; ++d) {
        std::vector<OutcomeVector> v(d);
        for (int k = 0; k < d; ++k) v[k] = outcome_vector(k, d);
        for (int k = 0; k < d; ++k) CHECK(std::abs(v[k].norm() - 1.0) < 1e-12);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                CHECK(std::abs(v[i].dot(v[j]) + 1.0 / (d - 1)) < 1e-12);
        for (int c = 0; c < d - 1; ++c) {
            double sum = 0.0;
            for (int k = 0; k < d; ++k) sum += v[k].components[c];
            CHECK(std::abs(sum) < 1e-12);
        }
    }
}

TEST_CASE("known vector entries") {
    CHECK(outcome_vector(0, 2).components[0] == doctest::Approx(1.0));
    CHECK(outcome_vector(1, 2).components[0] == doctest::Approx(-1.0));
    auto v13 = outcome_vector(1, 3);
    CHECK(v13.components[0] == doctest::Approx(-0.5));
    CHECK(v13.components[1] == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK_THROWS(outcome_vector(3, 3));
    CHECK_THROWS(outcome_vector(0, 1));
}

TEST_CASE("compose is addition mod d") {
    CHECK(compose(1, 2, 3) == 0);
    CHECK(compose(0, 4, 5) == 4);
    CHECK(compose(4, 4, 5) == 3);
    CHECK_THROWS(compose(5, 0, 5));
}

TEST_CASE("gauge soundness: adding a constant changes nothing") {
    std::mt19937_64 rng(7);
    for (int d : {2, 3, 5, 7}) {
        for (int rep = 0; rep < 20; ++rep) {
            Coefficient a = random_coeff(d, rng);
            std::vector<Rational> raw = a.alphas();
            Rational t = rat(rep - 10, 3);
            for (auto& x : raw) x += t;
            CHECK(Coefficient::from_alphas(raw) == a);
        }
    }
}

TEST_CASE("convolution examples") {
    // v_1 o v_2 = v_0 for d = 3
    auto v1 = Coefficient::basis(1, 3);
    auto v2 = Coefficient::basis(2, 3);
    CHECK(v1.convolve(v2) == Coefficient::basis(0, 3));

    // v_0 is the identity
    std::mt19937_64 rng(3);
    for (int d : {2, 3, 5, 7}) {
        Coefficient x = random_coeff(d, rng);
        CHECK(Coefficient::basis(0, d).convolve(x) == x);
    }

    // (v_1 + v_2) o v_1 = v_2 + v_0, by explicit index addition
    auto sum12 = Coefficient::basis(1, 3) + Coefficient::basis(2, 3);
    auto expect = Coefficient::basis(2, 3) + Coefficient::basis(0, 3);
    CHECK(sum12.convolve(Coefficient::basis(1, 3)) == expect);
}

TEST_CASE("ring axioms on random coefficients") {
    std::mt19937_64 rng(11);
    for (int d : {2, 3, 5, 7}) {
        for (int rep = 0; rep < 25; ++rep) {
            Coefficient x = random_coeff(d, rng);
            Coefficient y = random_coeff(d, rng);
            Coefficient z = random_coeff(d, rng);
            CHECK(x.convolve(y) == y.convolve(x));
            CHECK(x.convolve(y.convolve(z)) == x.convolve(y).convolve(z));
            CHECK(x.convolve(y + z) == x.convolve(y) + x.convolve(z));
        }
    }
}

TEST_CASE("shift is convolution with a basis label") {
    std::mt19937_64 rng(13);
    for (int d : {2, 3, 5, 7}) {
        Coefficient x = random_coeff(d, rng);
        CHECK(x.shift(0) == x);
        for (int a = 0; a < d; ++a) {
            CHECK(x.shift(a) == x.convolve(Coefficient::basis(a, d)));
            for (int b = 0; b < d; ++b) CHECK(x.shift(a).shift(b) == x.shift((a + b) % d));
        }
    }
    CHECK(Coefficient::basis(1, 3).shift(2) == Coefficient::basis(0, 3));
}

TEST_CASE("first component") {
    CHECK(Coefficient::basis(0, 3).first_component() == rat(1));
    CHECK(Coefficient::basis(1, 3).first_component() == rat(-1, 2));
    auto v12 = Coefficient::basis(1, 3) + Coefficient::basis(2, 3);
    CHECK(v12.first_component() == rat(-1));
    // cross-check against -v_0
    CHECK(v12 == -Coefficient::basis(0, 3));
}

TEST_CASE("exact first component agrees with float geometry") {
    std::mt19937_64 rng(17);
    for (int d : {2, 3, 5, 7, 11}) {
        std::vector<OutcomeVector> v(d);
        for (int k = 0; k < d; ++k) v[k] = outcome_vector(k, d);
        for (int rep = 0; rep < 10; ++rep) {
            Coefficient x = random_coeff(d, rng);
            for (int c = 0; c < d; ++c) {
                // first component of v_c o x via vector arithmetic
                double expect = 0.0;
                for (int k = 0; k < d; ++k)
                    expect += rat_double(x.alphas()[k]) * v[(k + c) % d].components[0];
                CHECK(std::abs(rat_double(x.shift(c).first_component()) - expect) < 1e-12);
            }
        }
    }
}
