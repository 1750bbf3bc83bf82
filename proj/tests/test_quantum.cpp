#include <doctest.h>

#include <cmath>
#include <random>

#include "bellit/quantum.hpp"
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

PhaseConfig random_phases(int n, int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 2.0 * 3.14159265358979323846);
    PhaseConfig pc(n, d);
    for (auto& v : pc.phases) v = uni(rng);
    return pc;
}

}  // namespace

TEST_CASE("closed form at zero phases, n=2 d=2") {
    PhaseConfig pc(2, 2);
    CHECK(coincidence_probability(pc, 0b00, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coincidence_probability(pc, 0b00, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("residue probabilities are normalized") {
    std::mt19937_64 rng(3);
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 3}, {3, 3}, {2, 5}, {3, 5}, {2, 7}}) {
        for (int rep = 0; rep < 5; ++rep) {
            PhaseConfig pc = random_phases(n, d, rng);
            for (uint32_t mask = 0; mask < (uint32_t(1) << n); ++mask) {
                double sum = 0.0;
                for (int r = 0; r < d; ++r) {
                    double p = coincidence_probability(pc, mask, r);
                    CHECK(p >= -1e-12);
                    CHECK(p <= 1.0 + 1e-12);
                    sum += p;
                }
                CHECK(std::abs(sum - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("phase gauge invariance") {
    std::mt19937_64 rng(5);
    PhaseConfig pc = random_phases(3, 3, rng);
    PhaseConfig shifted = pc;
    for (int j = 0; j < 3; ++j) shifted.at(1, 0, j) += 0.7331;
    for (uint32_t mask = 0; mask < 8; ++mask)
        for (int r = 0; r < 3; ++r)
            CHECK(std::abs(coincidence_probability(pc, mask, r) -
                           coincidence_probability(shifted, mask, r)) < 1e-12);
}

TEST_CASE("oracle agrees with the closed form") {
    std::mt19937_64 rng(7);
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}, {2, 5}}) {
        StateVector ghz = ghz_state(n, d);
        for (int rep = 0; rep < 10; ++rep) {
            PhaseConfig pc = random_phases(n, d, rng);
            for (uint32_t mask = 0; mask < (uint32_t(1) << n); ++mask)
                for (int r = 0; r < d; ++r)
                    CHECK(std::abs(oracle_coincidence(ghz, pc, mask, r) -
                                   coincidence_probability(pc, mask, r)) < 1e-10);
        }
    }
}

TEST_CASE("oracle factorizes on product states") {
    std::mt19937_64 rng(11);
    int n = 2, d = 3;
    StateVector prod = basis_state(n, d, {0, 0});
    PhaseConfig pc = random_phases(n, d, rng);
    // joint = product of single-party distributions
    StateVector one0 = basis_state(1, d, {0});
    PhaseConfig pcA(1, d), pcB(1, d);
    for (int s = 0; s < 2; ++s)
        for (int j = 0; j < d; ++j) {
            pcA.at(0, s, j) = pc.at(0, s, j);
            pcB.at(0, s, j) = pc.at(1, s, j);
        }
    for (uint32_t mask = 0; mask < 4; ++mask) {
        int sa = (mask >> 1) & 1, sb = mask & 1;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double joint = oracle_probability(prod, pc, mask, {a, b});
                double pa = oracle_probability(one0, pcA, sa, {a});
                double pb = oracle_probability(one0, pcB, sb, {b});
                CHECK(std::abs(joint - pa * pb) < 1e-12);
            }
    }
}

TEST_CASE("maximally mixed input gives uniform residues by linearity") {
    std::mt19937_64 rng(13);
    int n = 2, d = 3;
    PhaseConfig pc = random_phases(n, d, rng);
    for (uint32_t mask = 0; mask < 4; ++mask)
        for (int r = 0; r < d; ++r) {
            double total = 0.0;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    total += oracle_coincidence(basis_state(n, d, {a, b}), pc, mask, r);
            CHECK(std::abs(total / (d * d) - 1.0 / d) < 1e-12);
        }
}

TEST_CASE("critical visibility") {
    CHECK(critical_visibility(1.0, 5.0 / 3.0, 0.0) == doctest::Approx(0.6));
    CHECK(critical_visibility(1.0, 2.0, 0.0) == doctest::Approx(0.5));
    // boundary: no violation, the quotient is still defined
    CHECK(critical_visibility(1.0, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(critical_visibility(1.0, 1.0, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS(critical_visibility(1.0, 1.0, 1.0));
}

TEST_CASE("projector reconstruction identity") {
    for (int d : {2, 3, 5}) {
        ProjectorCheck c = verify_projector_identity(d, 5, 42);
        CHECK(c.pass);
        CHECK(c.max_residual < 1e-10);
    }
    CHECK_THROWS(verify_projector_identity(4, 1));
}

TEST_CASE("optimizer reaches the CHSH quantum maximum") {
    QuantumOptions opts;
    opts.restarts = 8;
    opts.seed = 9;
    QuantumReport rep = optimize_phases(chsh(), opts);
    CHECK(rep.lhv == rat(1));
    CHECK(rep.nl_psi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
    CHECK(rep.nl_mix == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.vc == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(rep.violation);
}

TEST_CASE("optimum is covariant under symmetry transformations") {
    std::mt19937_64 rng(17);
    QuantumOptions opts;
    opts.restarts = 8;
    opts.seed = 11;
    QuantumReport base = optimize_phases(chsh(), opts);
    for (int rep = 0; rep < 2; ++rep) {
        Transformation g = random_transformation(2, 2, rng);
        QuantumReport moved = optimize_phases(apply(g, chsh()), opts);
        CHECK(std::abs(moved.nl_psi - base.nl_psi) < 1e-6);
    }
}

TEST_CASE("optimization is deterministic for a fixed seed") {
    QuantumOptions opts;
    opts.restarts = 4;
    opts.seed = 123;
    QuantumReport a = optimize_phases(chsh(), opts);
    QuantumReport b = optimize_phases(chsh(), opts);
    CHECK(a.nl_psi == b.nl_psi);
    CHECK(a.best_phases.phases == b.best_phases.phases);
}
