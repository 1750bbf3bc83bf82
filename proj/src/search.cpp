#include "bellit/search.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <thread>
#include <unordered_set>

#include "bellit/lhv.hpp"

namespace bellit {

using nlohmann::json;

namespace {

uint64_t mix_seed(uint64_t master, uint64_t index) {
    uint64_t x = master ^ (0x9e3779b97f4a7c15ULL + index * 0xbf58476d1ce4e5b9ULL);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

SearchResult run_search(const BellFunction& seed00, const std::vector<BellFunction>& orbit_elements,
                        const SearchConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();

    struct Scored {
        double vc = std::numeric_limits<double>::infinity();
        double nl = 0.0;
        Rational lhv;
        double vc_floor = 0.0;  // exact lower bound L / (sum of per-setting maxima)
    };
    std::vector<BellFunction> candidates;
    candidates.reserve(orbit_elements.size());
    for (const auto& g : orbit_elements) candidates.push_back(iterate(seed00, g));

    std::vector<Scored> scored(candidates.size());

    // Exact pre-bounds: per setting, the GHZ value is bounded both by the
    // largest weight (the table row is a distribution) and by the Fourier
    // amplitudes of the row (each pair term is a cosine of the phases), so
    // vc = L/NL is at least L over the summed bound. Sorting by this floor
    // lets the scan stop once the floor clears the running minimum; pruned
    // candidates provably cannot reach the tie window.
    LhvOptions lo;
    lo.budget = cfg.lhv_budget;
    lo.workers = cfg.workers;
    for (size_t i = 0; i < candidates.size(); ++i) {
        scored[i].lhv = lhv_bound(candidates[i], lo).bound;
        ProbabilityForm pf = to_probability_form(candidates[i]);
        int d = pf.d;
        double upper = 0.0;
        for (const auto& row : pf.weights) {
            double mx = rat_double(row[0]), mean = 0.0;
            for (const auto& w : row) {
                mx = std::max(mx, rat_double(w));
                mean += rat_double(w);
            }
            mean /= d;
            double fourier = mean;
            for (int g = 1; g < d; ++g) {
                double cw = 0.0, sw = 0.0;
                for (int r = 0; r < d; ++r) {
                    double w = rat_double(row[r]) - mean;
                    cw += w * std::cos(2.0 * 3.14159265358979323846 * g * r / d);
                    sw += w * std::sin(2.0 * 3.14159265358979323846 * g * r / d);
                }
                fourier += 2.0 * (d - g) * std::hypot(cw, sw) / double(d * d);
            }
            upper += std::min(mx, fourier);
        }
        scored[i].vc_floor = upper > 0 ? rat_double(scored[i].lhv) / upper
                                       : std::numeric_limits<double>::infinity();
    }
    std::vector<size_t> order(candidates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return scored[a].vc_floor != scored[b].vc_floor ? scored[a].vc_floor < scored[b].vc_floor
                                                        : a < b;
    });

    auto score = [&](size_t i, int restarts, int max_evals) {
        QuantumOptions qo;
        qo.restarts = restarts;
        qo.tol = cfg.tol;
        qo.max_evals = max_evals;
        qo.seed = mix_seed(cfg.seed, i);
        qo.workers = 1;  // parallelism lives across candidates
        qo.lhv_budget = cfg.lhv_budget;
        QuantumReport rep = optimize_phases(candidates[i], scored[i].lhv, qo);
        scored[i].vc = rep.nl_psi > rep.nl_mix ? rep.vc : std::numeric_limits<double>::infinity();
        scored[i].nl = rep.nl_psi;
    };

    unsigned workers = cfg.workers > 0 ? unsigned(cfg.workers)
                                       : std::max(1u, std::thread::hardware_concurrency());
    auto parallel_over = [&](const std::vector<size_t>& idx, int restarts, int max_evals) {
        if (workers <= 1 || idx.size() <= 1) {
            for (size_t i : idx) score(i, restarts, max_evals);
            return;
        }
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        unsigned k = std::min<unsigned>(workers, unsigned(idx.size()));
        for (unsigned w = 0; w < k; ++w)
            pool.emplace_back([&] {
                for (size_t j = next.fetch_add(1); j < idx.size(); j = next.fetch_add(1))
                    score(idx[j], restarts, max_evals);
            });
        for (auto& th : pool) th.join();
    };

    double min_vc = std::numeric_limits<double>::infinity();
    uint64_t optimized = 0;
    for (size_t pos = 0; pos < order.size();) {
        size_t chunk = std::max<size_t>(workers, 8);
        std::vector<size_t> wave;
        while (pos < order.size() && wave.size() < chunk) {
            size_t i = order[pos];
            if (scored[i].vc_floor > min_vc + cfg.refine_window) {
                pos = order.size();  // sorted: everything beyond is pruned too
                break;
            }
            wave.push_back(i);
            ++pos;
        }
        if (wave.empty()) break;
        parallel_over(wave, cfg.restarts, cfg.triage_max_evals);
        optimized += wave.size();
        for (size_t i : wave) min_vc = std::min(min_vc, scored[i].vc);
    }

    // refinement pass on everything near the provisional minimum
    std::vector<size_t> provisional;
    for (size_t i = 0; i < scored.size(); ++i)
        if (scored[i].vc <= min_vc + cfg.refine_window) provisional.push_back(i);
    parallel_over(provisional, cfg.refine_restarts, cfg.max_evals);

    min_vc = std::numeric_limits<double>::infinity();
    for (const auto& s : scored) min_vc = std::min(min_vc, s.vc);

    SearchResult result;
    result.candidates_evaluated = candidates.size();
    result.optimized_count = optimized;
    result.min_vc = min_vc;

    std::unordered_set<std::string> seen;
    for (size_t i = 0; i < scored.size(); ++i) {
        if (scored[i].vc > min_vc + cfg.tie_tol) continue;
        ++result.raw_winner_count;
        if (!seen.insert(candidates[i].key()).second) continue;
        result.winners.push_back({candidates[i], scored[i].vc, scored[i].lhv, scored[i].nl, i});
    }
    result.dedup_winner_count = result.winners.size();

    std::map<long long, uint64_t> buckets;
    for (const auto& s : scored)
        if (std::isfinite(s.vc)) buckets[llround(s.vc * 10000.0)] += 1;
    for (const auto& [bucket, count] : buckets)
        result.histogram.push_back({double(bucket) / 10000.0, count});

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

SearchResult run_search(const Catalog& catalog, const SearchConfig& cfg) {
    const BellFunction& seed00 = catalog.function(cfg.seed00);
    const BellFunction& source = catalog.function(cfg.orbit_source);
    if (seed00.d() != source.d() || seed00.n() != source.n())
        throw std::invalid_argument("run_search: seed and orbit source shapes differ");
    OrbitOptions oo;
    oo.budget = cfg.orbit_budget;
    oo.keep_elements = true;
    OrbitReport orb = orbit(source, oo);
    return run_search(seed00, orb.elements, cfg);
}

CandidateReport verify_candidate(const BellFunction& f, const std::vector<Rational>& expected_spectrum,
                                 double expected_vc, double tol, const QuantumOptions& opts) {
    CandidateReport rep;
    LhvOptions lo;
    lo.budget = opts.lhv_budget;
    lo.workers = opts.workers;
    LhvReport lhv = lhv_bound(f, lo);
    rep.lhv = lhv.bound;
    rep.spectrum = lhv.spectrum;
    std::vector<Rational> want = expected_spectrum;
    std::sort(want.begin(), want.end());
    rep.spectrum_ok = (lhv.spectrum == want);

    QuantumReport q = optimize_phases(f, lhv.bound, opts);
    rep.vc = q.vc;
    rep.nl_psi = q.nl_psi;
    rep.vc_ok = std::abs(q.vc - expected_vc) <= tol;
    return rep;
}

std::string SearchResult::to_json(bool include_winner_functions) const {
    json winners_json = json::array();
    for (const auto& w : winners) {
        json jw{{"vc", w.vc},
                {"nl_psi", w.nl_psi},
                {"lhv", rat_str(w.lhv)},
                {"orbit_index", w.orbit_index}};
        if (include_winner_functions) jw["function"] = json::parse(w.function.to_json());
        winners_json.push_back(jw);
    }
    json hist = json::array();
    for (const auto& [vc, count] : histogram) hist.push_back({{"vc", vc}, {"count", count}});
    json j{{"candidates_evaluated", candidates_evaluated},
           {"optimized_count", optimized_count},
           {"min_vc", min_vc},
           {"raw_winner_count", raw_winner_count},
           {"dedup_winner_count", dedup_winner_count},
           {"winners", winners_json},
           {"vc_histogram", hist},
           {"wall_seconds", wall_seconds}};
    return j.dump();
}

std::string CandidateReport::to_json() const {
    json spec = json::array();
    for (const auto& v : spectrum) spec.push_back(rat_str(v));
    json j{{"spectrum_ok", spectrum_ok}, {"vc_ok", vc_ok},          {"pass", pass()},
           {"vc", vc},                   {"nl_psi", nl_psi},        {"lhv", rat_str(lhv)},
           {"spectrum", spec}};
    return j.dump();
}

}  // namespace bellit
