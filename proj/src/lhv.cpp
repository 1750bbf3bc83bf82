#include "bellit/lhv.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace bellit {

using nlohmann::json;

namespace {

// Per-setting lookup: value contribution of setting `mask` when the
// strategy's outcome total is t (mod d). Everything is placed over one
// common denominator so a strategy evaluates as a sum of integers.
struct IntTables {
    std::vector<std::vector<long long>> num;  // [mask][t]
    mpz_class denom;
    bool ok = false;                          // numerators fit the fast path
};

IntTables build_tables(const BellFunction& f) {
    IntTables t;
    int d = f.d();
    std::vector<std::vector<Rational>> fc(f.num_settings(), std::vector<Rational>(d));
    mpz_class lcm_den(1);
    for (int mask = 0; mask < f.num_settings(); ++mask)
        for (int shift = 0; shift < d; ++shift) {
            fc[mask][shift] = f.coeff(mask).shift(shift).first_component();
            mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), fc[mask][shift].get_den().get_mpz_t());
        }
    t.denom = lcm_den;
    t.num.assign(f.num_settings(), std::vector<long long>(d, 0));
    t.ok = true;
    const mpz_class limit = (mpz_class(1) << 40);
    for (int mask = 0; mask < f.num_settings() && t.ok; ++mask)
        for (int shift = 0; shift < d; ++shift) {
            mpz_class scaled = fc[mask][shift].get_num() * (lcm_den / fc[mask][shift].get_den());
            if (abs(scaled) > limit) {
                t.ok = false;
                break;
            }
            t.num[mask][shift] = scaled.get_si();
        }
    return t;
}

struct IntAccumulator {
    long long best = 0;
    bool any = false;
    uint64_t best_count = 0;
    std::unordered_set<long long> values;

    void record(long long v) {
        values.insert(v);
        if (!any || v > best) {
            best = v;
            best_count = 1;
            any = true;
        } else if (v == best) {
            ++best_count;
        }
    }
};

struct RatAccumulator {
    Rational best;
    bool any = false;
    uint64_t best_count = 0;
    std::set<Rational> values;

    void record(const Rational& v) {
        values.insert(v);
        if (!any || v > best) {
            best = v;
            best_count = 1;
            any = true;
        } else if (v == best) {
            ++best_count;
        }
    }
};

// DFS over parties, two outcome digits per party (setting 0 then setting 1,
// party-major), keeping running per-setting totals mod d.
template <typename Table, typename Acc>
void enumerate(const BellFunction& f, const Table& tab, Acc& acc,
               int first_o0_lo, int first_o0_hi) {
    int n = f.n();
    int d = f.d();
    int nm = f.num_settings();
    std::vector<std::vector<int>> tot(n + 1, std::vector<int>(nm, 0));

    auto dfs = [&](auto&& self, int p) -> void {
        if (p == n) {
            const auto& tp = tot[n];
            auto v = tab[0][tp[0]];
            for (int mask = 1; mask < nm; ++mask) v += tab[mask][tp[mask]];
            acc.record(v);
            return;
        }
        int lo = (p == 0) ? first_o0_lo : 0;
        int hi = (p == 0) ? first_o0_hi : d;
        for (int o0 = lo; o0 < hi; ++o0)
            for (int o1 = 0; o1 < d; ++o1) {
                const auto& cur = tot[p];
                auto& nxt = tot[p + 1];
                for (int mask = 0; mask < nm; ++mask) {
                    int o = ((mask >> (n - 1 - p)) & 1) ? o1 : o0;
                    int s = cur[mask] + o;
                    nxt[mask] = s >= d ? s - d : s;
                }
                self(self, p + 1);
            }
    };
    dfs(dfs, 0);
}

}  // namespace

LhvReport lhv_bound(const BellFunction& f, const LhvOptions& opts) {
    int d = f.d();
    uint64_t strategies = 1;
    for (int i = 0; i < 2 * f.n(); ++i) {
        if (strategies > opts.budget / uint64_t(d) + 1) {
            strategies = opts.budget + 1;
            break;
        }
        strategies *= uint64_t(d);
    }
    if (strategies > opts.budget)
        throw std::runtime_error("lhv_bound: enumeration of d^(2n) strategies exceeds budget; raise --budget");

    LhvReport report;
    report.strategies = strategies;

    IntTables tab = build_tables(f);
    if (tab.ok) {
        unsigned workers = opts.workers > 0 ? unsigned(opts.workers)
                                            : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min<unsigned>(workers, unsigned(d));
        std::vector<IntAccumulator> accs(workers);
        if (workers <= 1) {
            enumerate(f, tab.num, accs[0], 0, d);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                int lo = int(uint64_t(w) * d / workers);
                int hi = int(uint64_t(w + 1) * d / workers);
                pool.emplace_back([&, w, lo, hi] { enumerate(f, tab.num, accs[w], lo, hi); });
            }
            for (auto& th : pool) th.join();
        }
        IntAccumulator merged;
        for (const auto& a : accs) {
            if (!a.any) continue;
            if (!merged.any || a.best > merged.best) {
                merged.best = a.best;
                merged.best_count = a.best_count;
                merged.any = true;
            } else if (a.best == merged.best) {
                merged.best_count += a.best_count;
            }
            merged.values.insert(a.values.begin(), a.values.end());
        }
        std::vector<long long> sorted(merged.values.begin(), merged.values.end());
        std::sort(sorted.begin(), sorted.end());
        for (long long v : sorted) {
            Rational q(mpz_class(long(v)), tab.denom);
            q.canonicalize();
            report.spectrum.push_back(q);
        }
        Rational b(mpz_class(long(merged.best)), tab.denom);
        b.canonicalize();
        report.bound = b;
        report.argmax_count = merged.best_count;
        return report;
    }

    // Exact fallback when numerators do not fit the integer fast path.
    std::vector<std::vector<Rational>> fc(f.num_settings(), std::vector<Rational>(d));
    for (int mask = 0; mask < f.num_settings(); ++mask)
        for (int shift = 0; shift < d; ++shift)
            fc[mask][shift] = f.coeff(mask).shift(shift).first_component();
    RatAccumulator acc;
    enumerate(f, fc, acc, 0, d);
    report.spectrum.assign(acc.values.begin(), acc.values.end());
    report.bound = acc.best;
    report.argmax_count = acc.best_count;
    return report;
}

bool spectrum_matches(const BellFunction& f, const std::vector<Rational>& target,
                      const LhvOptions& opts) {
    LhvReport r = lhv_bound(f, opts);
    std::vector<Rational> want = target;
    std::sort(want.begin(), want.end());
    return r.spectrum == want;
}

std::string LhvReport::to_json() const {
    json spec = json::array();
    for (const auto& v : spectrum) spec.push_back(rat_str(v));
    json j{{"bound", rat_str(bound)},
           {"bound_decimal", rat_double(bound)},
           {"spectrum", spec},
           {"argmax_count", argmax_count},
           {"strategies", strategies}};
    return j.dump();
}

}  // namespace bellit
