#include "bellit/symmetry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace bellit {

using nlohmann::json;

Transformation Transformation::identity(int n) {
    Transformation g;
    g.party_perm.resize(n);
    for (int p = 0; p < n; ++p) g.party_perm[p] = p;
    g.setting_swap.assign(n, 0);
    g.outcome_shift.assign(n, {0, 0});
    return g;
}

bool Transformation::is_identity() const {
    for (size_t p = 0; p < party_perm.size(); ++p) {
        if (party_perm[p] != int(p) || setting_swap[p]) return false;
        if (outcome_shift[p][0] || outcome_shift[p][1]) return false;
    }
    return true;
}

Transformation compose(const Transformation& g, const Transformation& h, int d) {
    int n = int(g.party_perm.size());
    if (h.party_perm.size() != size_t(n)) throw std::invalid_argument("compose: size mismatch");
    Transformation k = Transformation::identity(n);
    for (int p = 0; p < n; ++p) {
        int q = h.party_perm[p];
        k.party_perm[p] = g.party_perm[q];
        k.setting_swap[p] = h.setting_swap[p] ^ g.setting_swap[q];
        for (int i = 0; i < 2; ++i)
            k.outcome_shift[p][i] =
                (h.outcome_shift[p][i] + g.outcome_shift[q][i ^ h.setting_swap[p]]) % d;
    }
    return k;
}

Transformation inverse(const Transformation& g, int d) {
    int n = int(g.party_perm.size());
    Transformation k = Transformation::identity(n);
    for (int p = 0; p < n; ++p) {
        int q = g.party_perm[p];
        k.party_perm[q] = p;
        k.setting_swap[q] = g.setting_swap[p];
        for (int j = 0; j < 2; ++j)
            k.outcome_shift[q][j] = (d - g.outcome_shift[p][j ^ g.setting_swap[p]] % d) % d;
    }
    return k;
}

BellFunction apply(const Transformation& g, const BellFunction& f) {
    int n = f.n();
    if (int(g.party_perm.size()) != n) throw std::invalid_argument("apply: party count mismatch");
    BellFunction out(n, f.d());
    for (int s = 0; s < f.num_settings(); ++s) {
        int shift = 0;
        uint32_t target = 0;
        for (int p = 0; p < n; ++p) {
            int sp = f.setting_of(s, p);
            shift += g.outcome_shift[p][sp];
            int bit = sp ^ g.setting_swap[p];
            if (bit) target |= uint32_t(1) << (n - 1 - g.party_perm[p]);
        }
        out.set_coeff(target, f.coeff(s).shift(shift % f.d()));
    }
    return out;
}

Transformation parse_recipe(const std::string& recipe, int n, int d) {
    Transformation g = Transformation::identity(n);
    Transformation perm_part = Transformation::identity(n);
    std::string item;
    std::vector<std::string> items;
    for (char c : recipe) {
        if (c == ',' || c == ';') {
            items.push_back(item);
            item.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            item += c;
        }
    }
    if (!item.empty()) items.push_back(item);

    for (const auto& it : items) {
        if (it.empty()) continue;
        auto arrow = it.find("->");
        if (std::isupper(static_cast<unsigned char>(it[0])) && it.find("<->") != std::string::npos) {
            // setting swap "B0<->B1"
            int p = it[0] - 'A';
            if (p < 0 || p >= n) throw std::invalid_argument("recipe: unknown party in " + it);
            g.setting_swap[p] ^= 1;
        } else if (std::isupper(static_cast<unsigned char>(it[0])) && arrow != std::string::npos) {
            // party permutation "ABCD->CBAD"
            std::string from = it.substr(0, arrow);
            std::string to = it.substr(arrow + 2);
            if (from.size() != to.size()) throw std::invalid_argument("recipe: bad permutation " + it);
            std::vector<int> perm(n);
            for (int p = 0; p < n; ++p) perm[p] = p;
            for (size_t pos = 0; pos < from.size(); ++pos) {
                int src = from[pos] - 'A';
                int dst = to[pos] - 'A';
                if (src < n) {
                    if (dst >= n) throw std::invalid_argument("recipe: permutation leaves party range " + it);
                    perm[src] = dst;
                } else if (src != dst) {
                    throw std::invalid_argument("recipe: permutation of nonexistent party " + it);
                }
            }
            std::vector<int> seen(n, 0);
            for (int p = 0; p < n; ++p) seen[perm[p]] += 1;
            for (int p = 0; p < n; ++p)
                if (seen[p] != 1) throw std::invalid_argument("recipe: not a permutation " + it);
            for (int p = 0; p < n; ++p) perm_part.party_perm[p] = perm[p];
        } else if (std::islower(static_cast<unsigned char>(it[0]))) {
            // outcome shift "a1+2"
            auto plus = it.find('+');
            if (plus == std::string::npos || plus < 2)
                throw std::invalid_argument("recipe: bad outcome shift " + it);
            int p = it[0] - 'a';
            int setting = it[1] - '0';
            int amount = std::stoi(it.substr(plus + 1));
            if (p < 0 || p >= n || setting < 0 || setting > 1)
                throw std::invalid_argument("recipe: bad observable in " + it);
            g.outcome_shift[p][setting] = ((g.outcome_shift[p][setting] + amount) % d + d) % d;
        } else {
            throw std::invalid_argument("recipe: cannot parse item " + it);
        }
    }
    // The permutation renames parties before the shift and swap items bind,
    // so those items refer to the permuted labels.
    return compose(g, perm_part, d);
}

mpz_class group_order(int n, int d) {
    mpz_class order(1);
    for (int i = 2; i <= n; ++i) order *= i;
    order <<= n;
    for (int i = 0; i < 2 * n; ++i) order *= d;
    return order;
}

static std::vector<Transformation> generators(int n, int d) {
    std::vector<Transformation> gens;
    for (int p = 0; p + 1 < n; ++p) {
        Transformation g = Transformation::identity(n);
        g.party_perm[p] = p + 1;
        g.party_perm[p + 1] = p;
        gens.push_back(g);
    }
    for (int p = 0; p < n; ++p) {
        Transformation g = Transformation::identity(n);
        g.setting_swap[p] = 1;
        gens.push_back(g);
    }
    for (int p = 0; p < n; ++p)
        for (int i = 0; i < 2; ++i) {
            Transformation g = Transformation::identity(n);
            g.outcome_shift[p][i] = 1 % d;
            gens.push_back(g);
        }
    return gens;
}

OrbitReport orbit(const BellFunction& f, const OrbitOptions& opts) {
    auto gens = generators(f.n(), f.d());
    OrbitReport report;
    std::unordered_set<std::string> seen;
    std::deque<BellFunction> frontier;
    seen.insert(f.key());
    frontier.push_back(f);
    if (opts.keep_elements) report.elements.push_back(f);
    while (!frontier.empty()) {
        BellFunction cur = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : gens) {
            BellFunction img = apply(g, cur);
            auto [it, inserted] = seen.insert(img.key());
            (void)it;
            if (!inserted) continue;
            if (seen.size() > opts.budget)
                throw std::runtime_error("orbit: budget exceeded; raise --budget");
            if (opts.keep_elements) report.elements.push_back(img);
            frontier.push_back(img);
        }
    }
    report.size = seen.size();
    report.stabilizer_order = group_order(f.n(), f.d()) / mpz_class(static_cast<unsigned long>(report.size));
    return report;
}

namespace {

// Exhaustive scan of the full group keeping the lexicographically smallest
// serialization. Shift assignments are enumerated innermost by DFS so the
// per-setting net shifts update incrementally.
struct CanonicalScan {
    const BellFunction& f;
    int n, d, nm;
    std::vector<std::vector<std::string>> shifted_keys;  // [mask][net shift]
    std::vector<uint32_t> mask_map;                      // source mask -> target mask
    std::vector<std::vector<int>> net;                   // per-party DFS levels
    std::vector<const std::string*> slot;                // target mask -> key piece
    std::string best;
    bool has_best = false;

    explicit CanonicalScan(const BellFunction& fn)
        : f(fn), n(fn.n()), d(fn.d()), nm(fn.num_settings()) {
        shifted_keys.assign(nm, std::vector<std::string>(d));
        for (int mask = 0; mask < nm; ++mask)
            for (int c = 0; c < d; ++c) shifted_keys[mask][c] = f.coeff(mask).shift(c).key();
        mask_map.assign(nm, 0);
        net.assign(n + 1, std::vector<int>(nm, 0));
        slot.assign(nm, nullptr);
    }

    void leaf() {
        const auto& totals = net[n];
        for (int s = 0; s < nm; ++s) slot[mask_map[s]] = &shifted_keys[s][totals[s]];
        std::string candidate;
        candidate.reserve(best.size() + 16);
        for (int t = 0; t < nm; ++t) {
            candidate += *slot[t];
            candidate += '|';
            if (has_best && candidate.compare(0, candidate.size(), best, 0, candidate.size()) > 0)
                return;  // already larger on a prefix
        }
        if (!has_best || candidate < best) {
            best = std::move(candidate);
            has_best = true;
        }
    }

    void dfs_shifts(int p) {
        if (p == n) {
            leaf();
            return;
        }
        for (int c0 = 0; c0 < d; ++c0)
            for (int c1 = 0; c1 < d; ++c1) {
                const auto& cur = net[p];
                auto& nxt = net[p + 1];
                for (int s = 0; s < nm; ++s) {
                    int c = ((s >> (n - 1 - p)) & 1) ? c1 : c0;
                    int v = cur[s] + c;
                    nxt[s] = v >= d ? v - d : v;
                }
                dfs_shifts(p + 1);
            }
    }

    void run() {
        std::vector<int> perm(n);
        for (int p = 0; p < n; ++p) perm[p] = p;
        do {
            for (uint32_t swap = 0; swap < uint32_t(1) << n; ++swap) {
                for (int s = 0; s < nm; ++s) {
                    uint32_t target = 0;
                    for (int p = 0; p < n; ++p) {
                        int bit = ((s >> (n - 1 - p)) & 1) ^ ((swap >> p) & 1);
                        if (bit) target |= uint32_t(1) << (n - 1 - perm[p]);
                    }
                    mask_map[s] = target;
                }
                dfs_shifts(0);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
};

}  // namespace

BellFunction canonical_form(const BellFunction& f, uint64_t group_budget) {
    if (group_order(f.n(), f.d()) > mpz_class(static_cast<unsigned long>(group_budget)))
        throw std::runtime_error("canonical_form: group order exceeds budget");
    CanonicalScan scan(f);
    scan.run();
    // Recover the function from its serialized pieces.
    BellFunction out(f.n(), f.d());
    std::istringstream is(scan.best);
    std::string piece;
    for (int mask = 0; mask < f.num_settings(); ++mask) {
        std::getline(is, piece, '|');
        std::vector<Rational> alphas;
        std::istringstream ps(piece);
        std::string token;
        while (std::getline(ps, token, ',')) alphas.push_back(rat_parse(token));
        out.set_coeff(mask, Coefficient::from_alphas(std::move(alphas)));
    }
    return out;
}

std::string invariant_certificate(const BellFunction& f) {
    std::vector<std::string> classes;
    classes.reserve(f.num_settings());
    for (int mask = 0; mask < f.num_settings(); ++mask) {
        std::string min_key = f.coeff(mask).key();
        for (int c = 1; c < f.d(); ++c) min_key = std::min(min_key, f.coeff(mask).shift(c).key());
        classes.push_back(min_key);
    }
    std::sort(classes.begin(), classes.end());
    std::string cert;
    for (const auto& c : classes) {
        cert += c;
        cert += '|';
    }
    return cert;
}

namespace {

// Complete equivalence decision for prime d. For every party permutation
// and setting-swap assignment, matching coefficients pins the net outcome
// shift of each setting tuple (shift-periodic coefficients stay free), and
// the per-observable shifts must solve the resulting linear system over
// Z_d, which is a field for prime d.
bool sector_equivalent(const BellFunction& a, const BellFunction& b) {
    int n = a.n(), d = a.d(), nm = a.num_settings();
    std::vector<int> perm(n);
    for (int p = 0; p < n; ++p) perm[p] = p;

    // modular inverse by Fermat, d prime
    auto inv = [&](int x) {
        int r = 1, e = d - 2, base = x % d;
        while (e) {
            if (e & 1) r = r * base % d;
            base = base * base % d;
            e >>= 1;
        }
        return r;
    };

    do {
        for (uint32_t swap = 0; swap < (uint32_t(1) << n); ++swap) {
            bool feasible = true;
            // rows: 2n shift variables + rhs
            std::vector<std::vector<int>> rows;
            for (int s = 0; s < nm && feasible; ++s) {
                uint32_t t = 0;
                for (int p = 0; p < n; ++p) {
                    int bit = ((s >> (n - 1 - p)) & 1) ^ ((swap >> p) & 1);
                    if (bit) t |= uint32_t(1) << (n - 1 - perm[p]);
                }
                int matches = 0, net = 0;
                for (int c = 0; c < d; ++c)
                    if (a.coeff(s).shift(c) == b.coeff(t)) {
                        net = c;
                        ++matches;
                    }
                if (matches == 0) {
                    feasible = false;
                } else if (matches < d) {  // prime d: a unique shift
                    std::vector<int> row(2 * n + 1, 0);
                    for (int p = 0; p < n; ++p) row[2 * p + ((s >> (n - 1 - p)) & 1)] += 1;
                    for (auto& x : row) x %= d;
                    row[2 * n] = net;
                    rows.push_back(std::move(row));
                }
            }
            if (!feasible) continue;
            // Gaussian elimination over Z_d
            int rank = 0;
            bool consistent = true;
            for (int col = 0; col < 2 * n && consistent; ++col) {
                int pivot = -1;
                for (size_t r = rank; r < rows.size(); ++r)
                    if (rows[r][col] % d != 0) {
                        pivot = int(r);
                        break;
                    }
                if (pivot < 0) continue;
                std::swap(rows[rank], rows[pivot]);
                int scale = inv(((rows[rank][col] % d) + d) % d);
                for (int c2 = col; c2 <= 2 * n; ++c2)
                    rows[rank][c2] = rows[rank][c2] * scale % d;
                for (size_t r = 0; r < rows.size(); ++r) {
                    if (int(r) == rank) continue;
                    int factor = ((rows[r][col] % d) + d) % d;
                    if (!factor) continue;
                    for (int c2 = col; c2 <= 2 * n; ++c2)
                        rows[r][c2] = ((rows[r][c2] - factor * rows[rank][c2]) % d + d) % d;
                }
                ++rank;
            }
            for (size_t r = rank; r < rows.size(); ++r)
                if (rows[r][2 * n] % d != 0) consistent = false;
            if (consistent) return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace

EquivalenceReport decide_equivalent(const BellFunction& a, const BellFunction& b,
                                    uint64_t group_budget, uint64_t random_trials, uint64_t seed) {
    EquivalenceReport rep;
    if (a.n() != b.n() || a.d() != b.d()) {
        rep.verdict = Equivalence::Inequivalent;
        rep.method = "shape";
        return rep;
    }
    if (invariant_certificate(a) != invariant_certificate(b)) {
        rep.verdict = Equivalence::Inequivalent;
        rep.method = "certificate";
        return rep;
    }
    if (is_prime(a.d()) && a.n() <= 8) {
        rep.verdict = sector_equivalent(a, b) ? Equivalence::Equivalent : Equivalence::Inequivalent;
        rep.method = "sector-solve";
        return rep;
    }
    if (group_order(a.n(), a.d()) <= mpz_class(static_cast<unsigned long>(group_budget))) {
        rep.verdict = canonical_form(a, group_budget) == canonical_form(b, group_budget)
                          ? Equivalence::Equivalent
                          : Equivalence::Inequivalent;
        rep.method = "canonical";
        return rep;
    }
    std::mt19937_64 rng(seed);
    std::string want = b.key();
    for (uint64_t t = 0; t < random_trials; ++t) {
        Transformation g = random_transformation(a.n(), a.d(), rng);
        if (apply(g, a).key() == want) {
            rep.verdict = Equivalence::Equivalent;
            rep.method = "random-search";
            return rep;
        }
    }
    rep.verdict = Equivalence::Unknown;
    rep.method = "random-search";
    return rep;
}

Transformation random_transformation(int n, int d, std::mt19937_64& rng) {
    Transformation g = Transformation::identity(n);
    for (int p = n - 1; p > 0; --p) {
        std::uniform_int_distribution<int> pick(0, p);
        std::swap(g.party_perm[p], g.party_perm[pick(rng)]);
    }
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> shift(0, d - 1);
    for (int p = 0; p < n; ++p) {
        g.setting_swap[p] = uint8_t(bit(rng));
        g.outcome_shift[p][0] = shift(rng);
        g.outcome_shift[p][1] = shift(rng);
    }
    return g;
}

std::string Transformation::to_json() const {
    json shifts = json::array();
    for (const auto& s : outcome_shift) shifts.push_back({s[0], s[1]});
    json swaps = json::array();
    for (auto b : setting_swap) swaps.push_back(bool(b));
    json j{{"perm", party_perm}, {"swap", swaps}, {"shift", shifts}};
    return j.dump();
}

Transformation Transformation::from_json(const std::string& text, int d) {
    json j = json::parse(text);
    Transformation g;
    g.party_perm = j.at("perm").get<std::vector<int>>();
    for (bool b : j.at("swap")) g.setting_swap.push_back(uint8_t(b));
    for (const auto& s : j.at("shift"))
        g.outcome_shift.push_back({((s[0].get<int>() % d) + d) % d, ((s[1].get<int>() % d) + d) % d});
    if (g.setting_swap.size() != g.party_perm.size() || g.outcome_shift.size() != g.party_perm.size())
        throw std::invalid_argument("Transformation JSON: inconsistent sizes");
    return g;
}

std::string OrbitReport::to_json() const {
    json j{{"size", size}, {"stabilizer_order", stabilizer_order.get_str()}};
    return j.dump();
}

}  // namespace bellit
