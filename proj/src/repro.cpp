#include "bellit/repro.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "bellit/catalog.hpp"
#include "bellit/lhv.hpp"
#include "bellit/quantum.hpp"
#include "bellit/search.hpp"
#include "bellit/symmetry.hpp"

namespace bellit {

namespace {

struct Check {
    std::ostringstream detail;
    bool pass = true;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << (detail.tellp() > 0 ? "; " : "") << "FAILED: " << what;
        }
    }
    void note(const std::string& what) {
        detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
};

Coefficient random_coeff(int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-12, 12);
    std::uniform_int_distribution<int> den(1, 6);
    std::vector<Rational> a(d);
    for (auto& x : a) x = rat(num(rng), den(rng));
    return Coefficient::from_alphas(a);
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

double vc_of(const Catalog& cat, const std::string& id, int restarts, uint64_t seed, int workers,
             double* nl_out = nullptr) {
    const BellFunction& f = cat.function(id);
    QuantumOptions qo;
    qo.restarts = restarts;
    qo.seed = seed;
    qo.workers = workers;
    QuantumReport q = optimize_phases(f, qo);
    if (nl_out) *nl_out = q.nl_psi;
    return q.vc;
}

const PrintedForm& printed_form(const Catalog& cat, const std::string& id) {
    for (const auto& pf : cat.printed_forms())
        if (pf.id == id) return pf;
    throw std::runtime_error("missing printed form " + id);
}

bool printed_form_matches(const Catalog& cat, const std::string& id) {
    const PrintedForm& pf = printed_form(cat, id);
    const CatalogEntry& target = cat.get(pf.target);
    BellFunction tf = target.function;
    if (!pf.relabel.empty()) tf = apply(parse_recipe(pf.relabel, tf.n(), tf.d()), tf);
    AffineMatch m = affine_compare(pf.form, to_probability_form(tf), pf.bound,
                                   target.expected_lhv);
    return m.proportional && m.bounds_consistent;
}

}  // namespace

std::vector<CriterionResult> run_repro(const ReproOptions& opts, const std::vector<int>& only) {
    Catalog cat = opts.catalog_path.empty() ? Catalog::load_default()
                                            : Catalog::load(opts.catalog_path);
    int workers = opts.workers;
    uint64_t seed = opts.seed;

    using Fn = std::function<void(Check&)>;
    struct Criterion {
        int id;
        const char* name;
        Fn fn;
    };

    std::vector<Criterion> criteria;

    criteria.push_back({1, "label algebra and simplex geometry", [&](Check& c) {
        for (int d = 2; d <= 11; ++d) {
            std::vector<OutcomeVector> v(d);
            for (int k = 0; k < d; ++k) v[k] = outcome_vector(k, d);
            for (int i = 0; i < d; ++i) {
                c.expect(std::abs(v[i].norm() - 1.0) < 1e-12, "unit norm d=" + std::to_string(d));
                for (int j = i + 1; j < d; ++j)
                    c.expect(std::abs(v[i].dot(v[j]) + 1.0 / (d - 1)) < 1e-12, "pair dot");
            }
            for (int comp = 0; comp < d - 1; ++comp) {
                double s = 0;
                for (int k = 0; k < d; ++k) s += v[k].components[comp];
                c.expect(std::abs(s) < 1e-12, "zero sum");
            }
        }
        std::mt19937_64 rng(seed);
        for (int d : {2, 3, 5, 7}) {
            for (int rep = 0; rep < 40; ++rep) {
                Coefficient x = random_coeff(d, rng), y = random_coeff(d, rng),
                            z = random_coeff(d, rng);
                c.expect(x.convolve(y) == y.convolve(x), "commutative");
                c.expect(x.convolve(y.convolve(z)) == x.convolve(y).convolve(z), "associative");
                c.expect(x.convolve(y + z) == x.convolve(y) + x.convolve(z), "distributive");
                c.expect(Coefficient::basis(0, d).convolve(x) == x, "identity");
                std::vector<Rational> raw = x.alphas();
                for (auto& a : raw) a += rat(rep - 7, 5);
                c.expect(Coefficient::from_alphas(raw) == x, "gauge invariance");
            }
        }
    }});

    criteria.push_back({2, "iteration and restriction round trips", [&](Check& c) {
        std::mt19937_64 rng(seed + 2);
        int seeds_done = 0;
        for (int d : {3, 5, 7}) {
            for (int rep = 0; rep < 34 && seeds_done < 100; ++rep, ++seeds_done) {
                int n1 = 1 + (rep % 2);
                BellFunction f00 = random_function(n1, d, rng);
                BellFunction f01 = random_function(n1, d, rng);
                BellFunction up = iterate(f00, f01);
                c.expect(restrict_last(up, 0, 0) == f00, "round trip f00");
                c.expect(restrict_last(up, 0, 1) == f01, "round trip f01");
                for (int l = 0; l < d; ++l) {
                    int ll = l == 0 ? d : l;
                    Coefficient c00 = Coefficient::zero(d), c01 = Coefficient::zero(d);
                    for (int k = 1; k < ll; ++k) c00 = c00 - Coefficient::basis(k, d);
                    for (int k = 0; k < ll; ++k) c01 = c01 + Coefficient::basis(k, d);
                    BellFunction closed(n1, d);
                    for (int s = 0; s < f00.num_settings(); ++s)
                        closed.set_coeff(s, f00.coeff(s).convolve(c00) + f01.coeff(s).convolve(c01));
                    c.expect(restrict_last(up, 0, l) == closed,
                             "closed form l=" + std::to_string(l));
                }
            }
        }
        c.note("seeds=" + std::to_string(seeds_done));
    }});

    criteria.push_back({3, "setting-swapped d=2 chain (MABK)", [&](Check& c) {
        LhvOptions lo;
        lo.workers = workers;
        LhvReport l3 = lhv_bound(cat.function("MABK_3"), lo);
        LhvReport l4 = lhv_bound(cat.function("MABK_4"), lo);
        c.expect(l3.bound == rat(1), "three-qubit classical bound 1");
        c.expect(l4.bound == rat(1), "four-qubit classical bound 1");
        double vc = vc_of(cat, "MABK_3", 24, seed + 3, workers);
        c.expect(std::abs(vc - 0.5) < 1e-4, "three-qubit visibility 0.5");
        c.note("vc3=" + std::to_string(vc));
    }});

    criteria.push_back({4, "two-party family (CGLMP) d=3,5,7", [&](Check& c) {
        c.expect(printed_form_matches(cat, "B_2_3"), "printed d=3 display matches");
        LhvOptions lo;
        lo.workers = workers;
        c.expect(lhv_bound(cat.function("I_2_3"), lo).bound == rat(1), "classical bound 1");
        double vc3 = vc_of(cat, "I_2_3", 24, seed + 4, workers);
        double vc5 = vc_of(cat, "I_2_5", 32, seed + 5, workers);
        double vc7 = vc_of(cat, "I_2_7", 32, seed + 6, workers);
        c.expect(std::abs(vc3 - 0.6962) < 2e-3, "vc d=3 ~ 0.6962");
        c.expect(std::abs(vc5 - 0.687157) < 1e-4, "vc d=5 ~ 0.687157");
        c.expect(std::abs(vc7 - 0.683256) < 1e-4, "vc d=7 ~ 0.683256");
        std::ostringstream os;
        os << "vc3=" << vc3 << " vc5=" << vc5 << " vc7=" << vc7;
        c.note(os.str());
    }});

    criteria.push_back({5, "(3,2,3) family", [&](Check& c) {
        LhvOptions lo;
        lo.workers = workers;
        c.expect(lhv_bound(cat.function("I_3_3_1"), lo).bound == rat(1), "classical bound 1");
        double nl = 0;
        double vc = vc_of(cat, "I_3_3_1", 24, seed + 7, workers, &nl);
        c.expect(std::abs(nl - 5.0 / 3.0) < 1e-6, "GHZ value 5/3");
        c.expect(std::abs(vc - 0.6) < 1e-4, "visibility 0.6");
        c.expect(printed_form_matches(cat, "B_3_3_5"), "party-symmetric display matches");
        std::ostringstream os;
        os << "nl=" << nl << " vc=" << vc;
        c.note(os.str());
    }});

    criteria.push_back({6, "(4,2,3) family and its 648-orbit search", [&](Check& c) {
        LhvOptions lo;
        lo.workers = workers;
        std::vector<BellFunction> four;
        for (int i = 1; i <= 4; ++i) {
            std::string id = "I_4_3_" + std::to_string(i);
            c.expect(lhv_bound(cat.function(id), lo).bound == rat(1), id + " classical bound 1");
            double nl = 0;
            double vc = vc_of(cat, id, 24, seed + 8 + i, workers, &nl);
            c.expect(std::abs(nl - 2.0) < 1e-6, id + " GHZ value 2");
            c.expect(std::abs(vc - 0.5) < 1e-4, id + " visibility 0.5");
            four.push_back(cat.function(id));
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                c.expect(!(canonical_form(four[i]) == canonical_form(four[j])),
                         "members " + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             " canonical forms differ");
        SearchConfig sc;
        sc.seed00 = "I_3_3_3";
        sc.orbit_source = "I_3_3_3";
        sc.seed = seed + 20;
        sc.workers = workers;
        SearchResult sr = run_search(cat, sc);
        c.expect(sr.candidates_evaluated == 648, "648 candidates");
        c.expect(std::abs(sr.min_vc - 0.5) < 1e-4, "minimum visibility 0.5");
        c.expect(sr.dedup_winner_count == 16, "16 winners");
        std::ostringstream os;
        os << "min_vc=" << sr.min_vc << " winners=" << sr.dedup_winner_count
           << " optimized=" << sr.optimized_count;
        c.note(os.str());
    }});

    criteria.push_back({7, "(5,2,3) spot checks and first search row", [&](Check& c) {
        LhvOptions lo;
        lo.workers = workers;
        LhvReport l1 = lhv_bound(cat.function("I_5_3_1"), lo);
        LhvReport l2 = lhv_bound(cat.function("I_5_3_2"), lo);
        c.expect(l1.strategies == 59049, "3^10 strategies enumerated");
        c.expect(l1.bound == rat(1), "member 1 classical bound 1");
        c.expect(l2.bound == rat(1), "member 2 classical bound 1");
        double vc1 = vc_of(cat, "I_5_3_1", 48, seed + 30, workers);
        double vc2 = vc_of(cat, "I_5_3_2", 48, seed + 31, workers);
        c.expect(std::abs(vc1 - 0.488756) < 2e-4, "member 1 visibility ~ 0.488756");
        c.expect(std::abs(vc2 - 0.488756) < 2e-4, "member 2 visibility ~ 0.488756");
        // the published coefficient transcription of member 2 is separated
        // from member 1 by the shift-class certificate; the archived member 2
        // has a coinciding certificate, so its inequivalence is established
        // by the complete sector decision instead
        c.expect(invariant_certificate(cat.function("I_5_3_1")) !=
                     invariant_certificate(cat.function("I_5_3_2_printed")),
                 "certificate separates member 1 from the printed transcription");
        bool cert_sep = invariant_certificate(cat.function("I_5_3_1")) !=
                        invariant_certificate(cat.function("I_5_3_2"));
        EquivalenceReport eq =
            decide_equivalent(cat.function("I_5_3_1"), cat.function("I_5_3_2"));
        c.expect(cert_sep || eq.verdict == Equivalence::Inequivalent,
                 "members 1 and 2 are inequivalent");
        c.note(cert_sep ? "members separated by certificate"
                        : "member certificates coincide; inequivalence by " + eq.method);
        SearchConfig sc;
        sc.seed00 = "I_4_3_1";
        sc.orbit_source = "I_4_3_1";
        sc.seed = seed + 32;
        sc.workers = workers;
        SearchResult sr = run_search(cat, sc);
        c.expect(sr.dedup_winner_count == 12, "first row: 12 winners");
        c.expect(std::abs(sr.min_vc - 0.488756) < 2e-4, "first row minimum visibility");
        std::ostringstream os;
        os << "vc1=" << vc1 << " vc2=" << vc2 << " row1_winners=" << sr.dedup_winner_count
           << " row1_min_vc=" << sr.min_vc << " (candidates=" << sr.candidates_evaluated
           << ", optimized=" << sr.optimized_count << ")";
        c.note(os.str());
    }});

    criteria.push_back({8, "(3,2,5) family", [&](Check& c) {
        double vc = vc_of(cat, "I_3_5_1", 32, seed + 40, workers);
        c.expect(std::abs(vc - 0.595047) < 1e-4, "visibility ~ 0.595047");
        c.expect(printed_form_matches(cat, "B_3_5_1"), "printed display matches");
        for (const char* id : {"I_3_5_2", "I_3_5_3"}) {
            const CatalogEntry& e = cat.get(id);
            bool ok = false;
            for (const auto& r : e.recipes) {
                const BellFunction& src = cat.function(r.source);
                if (apply(parse_recipe(r.recipe, src.n(), src.d()), src) == e.function) ok = true;
            }
            c.expect(ok, std::string(id) + " recipe from member 1 verifies");
        }
        c.note("vc=" + std::to_string(vc));
    }});

    criteria.push_back({9, "orbit counts 54 / 648 / 1250", [&](Check& c) {
        c.expect(orbit(cat.function("I_2_3")).size == 54, "two-party d=3 orbit 54");
        c.expect(orbit(cat.function("I_3_3_1")).size == 648, "three-party d=3 orbit 648");
        c.expect(orbit(cat.function("I_3_5_1")).size == 1250, "three-party d=5 orbit 1250");
    }});

    criteria.push_back({10, "deterministic value spectra", [&](Check& c) {
        auto spec = [&](const char* id) { return cat.get(id).expected_spectrum.value(); };
        LhvOptions lo;
        lo.workers = workers;
        c.expect(spectrum_matches(cat.function("I_2_5"), spec("I_2_5"), lo),
                 "d=5 spectrum {-3/2,-1/4,1}");
        c.expect(spectrum_matches(cat.function("I_2_7"), spec("I_2_7"), lo),
                 "d=7 spectrum {-4/3,-1/6,1}");
        QuantumOptions qo;
        qo.workers = workers;
        qo.restarts = 32;
        for (const char* id : {"I_2_5_2", "I_2_7_2", "I_2_7_3", "I_2_7_4"}) {
            const CatalogEntry& e = cat.get(id);
            qo.seed = seed + 50 + id[6];
            CandidateReport rep =
                verify_candidate(e.function, *e.expected_spectrum, *e.expected_vc, 1e-4, qo);
            c.expect(rep.spectrum_ok, std::string(id) + " spectrum");
            c.expect(rep.vc_ok, std::string(id) + " visibility (got " + std::to_string(rep.vc) + ")");
        }
    }});

    criteria.push_back({11, "closed form vs state-vector oracle", [&](Check& c) {
        std::mt19937_64 rng(seed + 60);
        std::uniform_real_distribution<double> uni(0.0, 2 * 3.14159265358979323846);
        std::vector<std::pair<int, int>> scenarios{{2, 3}, {3, 3}, {2, 5}, {3, 5}, {2, 7}};
        int per = 200;  // 5 x 200 = 1000 configurations
        double worst = 0;
        for (auto [n, d] : scenarios) {
            StateVector ghz = ghz_state(n, d);
            for (int rep = 0; rep < per; ++rep) {
                PhaseConfig pc(n, d);
                for (auto& v : pc.phases) v = uni(rng);
                uint32_t mask = uint32_t(rng() % (1u << n));
                double sum = 0;
                for (int r = 0; r < d; ++r) {
                    double closed = coincidence_probability(pc, mask, r);
                    double oracle = oracle_coincidence(ghz, pc, mask, r);
                    worst = std::max(worst, std::abs(closed - oracle));
                    sum += closed;
                }
                c.expect(std::abs(sum - 1.0) < 1e-12, "normalization");
            }
        }
        c.expect(worst < 1e-10, "agreement 1e-10");
        c.note("worst=" + std::to_string(worst));
    }});

    criteria.push_back({12, "observable-power projector reconstruction", [&](Check& c) {
        for (int d : {2, 3, 5, 7}) {
            ProjectorCheck pc = verify_projector_identity(d, 50, seed + d);
            c.expect(pc.pass, "d=" + std::to_string(d));
            c.expect(pc.max_residual < 1e-10, "residual d=" + std::to_string(d));
        }
    }});

    criteria.push_back({13, "catalog recipes and printed forms", [&](Check& c) {
        CatalogVerifyReport rep = verify_recipes(cat);
        c.expect(rep.failures.empty(), "all recipes verify");
        for (const auto& f : rep.failures) c.note(f);
        std::ostringstream os;
        os << rep.recipes_checked << " recipes, " << rep.constructions_checked
           << " constructions, " << rep.restrictions_checked << " restrictions, "
           << rep.forms_checked << " printed forms";
        if (!rep.suspects.empty()) {
            os << "; transcription-suspect: ";
            for (size_t i = 0; i < rep.suspects.size(); ++i)
                os << (i ? " | " : "") << rep.suspects[i];
        }
        c.note(os.str());
    }});

    std::vector<CriterionResult> results;
    for (auto& crit : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), crit.id) == only.end()) continue;
        Check check;
        auto t0 = std::chrono::steady_clock::now();
        try {
            crit.fn(check);
        } catch (const std::exception& e) {
            check.pass = false;
            check.note(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back({crit.id, crit.name, check.pass, check.detail.str(), secs});
        std::printf("[%2d] %s  %-45s (%.1fs)%s%s\n", crit.id, check.pass ? "PASS" : "FAIL",
                    crit.name, secs, check.detail.str().empty() ? "" : "  ",
                    check.detail.str().c_str());
        std::fflush(stdout);
    }
    return results;
}

}  // namespace bellit
