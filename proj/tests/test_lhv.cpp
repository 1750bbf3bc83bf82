#include <doctest.h>

#include <cmath>
#include <random>

#include "bellit/lhv.hpp"
#include "bellit/symmetry.hpp"

using namespace bellit;

namespace {

BellFunction chsh() {
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

// Independent oracle: enumerate strategies as raw digit odometers and
// evaluate through the probability form on the delta table.
LhvReport brute_force(const BellFunction& f) {
    ProbabilityForm pf = to_probability_form(f);
    int n = f.n(), d = f.d();
    uint64_t total = 1;
    for (int i = 0; i < 2 * n; ++i) total *= uint64_t(d);
    LhvReport rep;
    rep.strategies = total;
    std::vector<Rational> values;
    for (uint64_t id = 0; id < total; ++id) {
        DeterministicStrategy s;
        s.n = n;
        s.d = d;
        s.outcomes.resize(n);
        uint64_t rest = id;
        for (int p = n - 1; p >= 0; --p)
            for (int i = 1; i >= 0; --i) {
                s.outcomes[p][i] = int(rest % d);
                rest /= d;
            }
        values.push_back(evaluate(pf, strategy_table(f, s)));
    }
    rep.bound = values[0];
    for (const auto& v : values)
        if (v > rep.bound) rep.bound = v;
    for (const auto& v : values)
        if (v == rep.bound) ++rep.argmax_count;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    rep.spectrum = values;
    return rep;
}

}  // namespace

TEST_CASE("CHSH classical bound and spectrum") {
    LhvReport r = lhv_bound(chsh());
    CHECK(r.bound == rat(1));
    CHECK(r.strategies == 16);
    CHECK(r.spectrum == std::vector<Rational>{rat(-1), rat(1)});
    CHECK(spectrum_matches(chsh(), {rat(1), rat(-1)}));
    CHECK_FALSE(spectrum_matches(chsh(), {}));
}

TEST_CASE("matches the brute-force oracle on random functions") {
    std::mt19937_64 rng(61);
    for (int d : {2, 3, 5}) {
        for (int n = 1; n <= 2; ++n) {
            BellFunction f = random_function(n, d, rng);
            LhvReport fast = lhv_bound(f);
            LhvReport slow = brute_force(f);
            CHECK(fast.bound == slow.bound);
            CHECK(fast.spectrum == slow.spectrum);
            CHECK(fast.argmax_count == slow.argmax_count);
            CHECK(fast.strategies == slow.strategies);
        }
    }
}

TEST_CASE("budget guard") {
    std::mt19937_64 rng(1);
    BellFunction f = random_function(3, 3, rng);
    LhvOptions opts;
    opts.budget = 100;  // 3^6 = 729 strategies needed
    CHECK_THROWS(lhv_bound(f, opts));
}

TEST_CASE("(5,3) enumeration covers exactly 3^10 strategies") {
    std::mt19937_64 rng(67);
    BellFunction f = random_function(5, 3, rng);
    LhvReport r = lhv_bound(f);
    CHECK(r.strategies == 59049);
}

TEST_CASE("bound and spectrum are invariant under the symmetry group") {
    std::mt19937_64 rng(71);
    for (int d : {2, 3}) {
        BellFunction f = random_function(2, d, rng);
        LhvReport base = lhv_bound(f);
        for (int rep = 0; rep < 6; ++rep) {
            Transformation g = random_transformation(2, d, rng);
            LhvReport moved = lhv_bound(apply(g, f));
            CHECK(moved.bound == base.bound);
            CHECK(moved.spectrum == base.spectrum);
            CHECK(moved.argmax_count == base.argmax_count);
        }
    }
}

TEST_CASE("fallback path agrees with the fast path") {
    // huge numerators force the exact fallback
    BellFunction f(2, 3);
    std::vector<Rational> a{rat_parse("123456789123456789"), rat_parse("-1/1000003"), rat(0)};
    f.set_coeff(0, Coefficient::from_alphas(a));
    LhvReport slow = lhv_bound(f);
    LhvReport oracle = brute_force(f);
    CHECK(slow.bound == oracle.bound);
    CHECK(slow.spectrum == oracle.spectrum);
}
