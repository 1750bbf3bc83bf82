#include "bellit/quantum.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace bellit {

using nlohmann::json;

static constexpr double kTwoPi = 2.0 * std::numbers::pi;

PhaseConfig PhaseConfig::gauge_fixed() const {
    PhaseConfig out = *this;
    for (int p = 0; p < n; ++p)
        for (int s = 0; s < 2; ++s) {
            double base = out.at(p, s, 0);
            for (int j = 0; j < d; ++j) {
                double v = std::fmod(out.at(p, s, j) - base, kTwoPi);
                if (v < 0) v += kTwoPi;
                out.at(p, s, j) = v;
            }
        }
    return out;
}

double coincidence_probability(const PhaseConfig& pc, uint32_t mask, int residue) {
    int d = pc.d;
    int n = pc.n;
    double acc = double(d);
    for (int t = 0; t < d; ++t)
        for (int s = t + 1; s < d; ++s) {
            double delta = 0.0;
            for (int p = 0; p < n; ++p) {
                int setting = (mask >> (n - 1 - p)) & 1;
                delta += pc.at(p, setting, s) - pc.at(p, setting, t);
            }
            acc += 2.0 * std::cos(delta + kTwoPi * double((s - t) * residue) / d);
        }
    return acc / double(d * d);
}

RealProbabilityTable coincidence_table(const PhaseConfig& pc) {
    RealProbabilityTable t;
    t.n = pc.n;
    t.d = pc.d;
    t.p.assign(size_t(1) << pc.n, std::vector<double>(pc.d, 0.0));
    for (uint32_t mask = 0; mask < t.p.size(); ++mask)
        for (int r = 0; r < pc.d; ++r) t.p[mask][r] = coincidence_probability(pc, mask, r);
    return t;
}

CompiledForm::CompiledForm(const ProbabilityForm& pf) : n_(pf.n), d_(pf.d) {
    int nm = 1 << n_;
    cosw_.assign(nm, std::vector<double>(d_ - 1, 0.0));
    sinw_.assign(nm, std::vector<double>(d_ - 1, 0.0));
    const_term_ = rat_double(pf.constant);
    for (int mask = 0; mask < nm; ++mask) {
        double mean = 0.0;
        for (int r = 0; r < d_; ++r) mean += rat_double(pf.weights[mask][r]);
        mean /= d_;
        const_term_ += mean;
        for (int g = 1; g < d_; ++g) {
            double cw = 0.0, sw = 0.0;
            for (int r = 0; r < d_; ++r) {
                double w = rat_double(pf.weights[mask][r]) - mean;
                cw += w * std::cos(kTwoPi * double(g) * r / d_);
                sw += w * std::sin(kTwoPi * double(g) * r / d_);
            }
            cosw_[mask][g - 1] = cw;
            sinw_[mask][g - 1] = sw;
        }
    }
}

double CompiledForm::value(const PhaseConfig& pc) const {
    int nm = 1 << n_;
    double total = 0.0;
    for (int mask = 0; mask < nm; ++mask) {
        const auto& cw = cosw_[mask];
        const auto& sw = sinw_[mask];
        for (int t = 0; t < d_; ++t)
            for (int s = t + 1; s < d_; ++s) {
                double delta = 0.0;
                for (int p = 0; p < n_; ++p) {
                    int setting = (mask >> (n_ - 1 - p)) & 1;
                    delta += pc.at(p, setting, s) - pc.at(p, setting, t);
                }
                int g = s - t;
                total += cw[g - 1] * std::cos(delta) - sw[g - 1] * std::sin(delta);
            }
    }
    return const_term_ + 2.0 * total / double(d_ * d_);
}

double quantum_value(const BellFunction& f, const PhaseConfig& pc) {
    if (f.n() != pc.n || f.d() != pc.d) throw std::invalid_argument("quantum_value: shape mismatch");
    CompiledForm compiled(to_probability_form(f));
    return compiled.value(pc);
}

// --- state-vector oracle -------------------------------------------------

StateVector ghz_state(int n, int d) {
    StateVector s;
    s.n = n;
    s.d = d;
    size_t dim = 1;
    for (int i = 0; i < n; ++i) dim *= d;
    s.amplitudes.assign(dim, {0.0, 0.0});
    double amp = 1.0 / std::sqrt(double(d));
    size_t stride = 0;
    for (int i = 0; i < n; ++i) stride = stride * d + 1;
    for (int j = 0; j < d; ++j) s.amplitudes[stride * j] = {amp, 0.0};
    return s;
}

StateVector basis_state(int n, int d, const std::vector<int>& levels) {
    StateVector s;
    s.n = n;
    s.d = d;
    size_t dim = 1, idx = 0;
    for (int i = 0; i < n; ++i) dim *= d;
    for (int i = 0; i < n; ++i) idx = idx * d + levels[i];
    s.amplitudes.assign(dim, {0.0, 0.0});
    s.amplitudes[idx] = {1.0, 0.0};
    return s;
}

namespace {

// Applies the measurement unitary of every party for the given settings:
// per party, row a, column j: (1/sqrt d) exp(i 2pi a j / d) exp(i phi_j).
std::vector<std::complex<double>> transform_state(const StateVector& state, const PhaseConfig& pc,
                                                  uint32_t mask) {
    int n = state.n, d = state.d;
    std::vector<std::complex<double>> psi = state.amplitudes;
    std::vector<std::complex<double>> u(size_t(d) * d);
    double norm = 1.0 / std::sqrt(double(d));
    size_t dim = psi.size();
    for (int p = 0; p < n; ++p) {
        int setting = (mask >> (n - 1 - p)) & 1;
        for (int a = 0; a < d; ++a)
            for (int j = 0; j < d; ++j)
                u[size_t(a) * d + j] =
                    std::polar(norm, kTwoPi * double(a) * j / d + pc.at(p, setting, j));
        // contract index p
        size_t inner = 1;
        for (int q = p + 1; q < n; ++q) inner *= d;
        size_t outer = dim / (inner * d);
        std::vector<std::complex<double>> next(dim, {0.0, 0.0});
        for (size_t o = 0; o < outer; ++o)
            for (int a = 0; a < d; ++a)
                for (int j = 0; j < d; ++j) {
                    auto w = u[size_t(a) * d + j];
                    const auto* src = &psi[(o * d + j) * inner];
                    auto* dst = &next[(o * d + a) * inner];
                    for (size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
                }
        psi.swap(next);
    }
    return psi;
}

}  // namespace

double oracle_probability(const StateVector& state, const PhaseConfig& pc, uint32_t mask,
                          const std::vector<int>& outcomes) {
    if (state.n != pc.n || state.d != pc.d)
        throw std::invalid_argument("oracle_probability: shape mismatch");
    auto psi = transform_state(state, pc, mask);
    size_t idx = 0;
    for (int p = 0; p < state.n; ++p) idx = idx * state.d + outcomes[p];
    return std::norm(psi[idx]);
}

double oracle_coincidence(const StateVector& state, const PhaseConfig& pc, uint32_t mask,
                          int residue) {
    auto psi = transform_state(state, pc, mask);
    double total = 0.0;
    for (size_t idx = 0; idx < psi.size(); ++idx) {
        size_t rest = idx;
        int sum = 0;
        for (int p = 0; p < state.n; ++p) {
            sum += int(rest % state.d);
            rest /= state.d;
        }
        if (sum % state.d == residue) total += std::norm(psi[idx]);
    }
    return total;
}

// --- visibility ------------------------------------------------------------

double critical_visibility(double lhv, double nl_psi, double nl_mix) {
    if (nl_psi == nl_mix)
        throw std::invalid_argument("critical_visibility: nl_psi equals nl_mix");
    return (lhv - nl_mix) / (nl_psi - nl_mix);
}

// --- Nelder-Mead -----------------------------------------------------------

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, double step, double tol, int max_evals) {
    size_t m = start.size();
    // adaptive coefficients, better behaved as the dimension grows
    double alpha = 1.0;
    double gamma = 1.0 + 2.0 / double(m);
    double rho = 0.75 - 0.5 / double(m);
    double sigma = 1.0 - 1.0 / double(m);

    NelderMeadResult res;
    std::vector<std::vector<double>> pts(m + 1, start);
    std::vector<double> vals(m + 1);
    for (size_t i = 1; i <= m; ++i) pts[i][i - 1] += step;
    for (size_t i = 0; i <= m; ++i) vals[i] = objective(pts[i]);
    res.evals = int(m + 1);

    std::vector<size_t> order(m + 1);
    std::vector<double> centroid(m), xr(m), xe(m), xc(m);
    while (res.evals < max_evals) {
        for (size_t i = 0; i <= m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vals[a] < vals[b]; });
        size_t best = order[0], worst = order[m], second = order[m - 1];
        if (vals[worst] - vals[best] < tol) {
            res.converged = true;
            break;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (size_t i = 0; i <= m; ++i) {
            if (i == worst) continue;
            for (size_t k = 0; k < m; ++k) centroid[k] += pts[i][k];
        }
        for (size_t k = 0; k < m; ++k) centroid[k] /= double(m);

        for (size_t k = 0; k < m; ++k) xr[k] = centroid[k] + alpha * (centroid[k] - pts[worst][k]);
        double fr = objective(xr);
        ++res.evals;
        if (fr < vals[best]) {
            for (size_t k = 0; k < m; ++k) xe[k] = centroid[k] + gamma * (xr[k] - centroid[k]);
            double fe = objective(xe);
            ++res.evals;
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            bool outside = fr < vals[worst];
            const std::vector<double>& pivot = outside ? xr : pts[worst];
            for (size_t k = 0; k < m; ++k) xc[k] = centroid[k] + rho * (pivot[k] - centroid[k]);
            double fc = objective(xc);
            ++res.evals;
            if (fc < (outside ? fr : vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                for (size_t i = 0; i <= m; ++i) {
                    if (i == best) continue;
                    for (size_t k = 0; k < m; ++k)
                        pts[i][k] = pts[best][k] + sigma * (pts[i][k] - pts[best][k]);
                    vals[i] = objective(pts[i]);
                    ++res.evals;
                }
            }
        }
    }
    size_t best = 0;
    for (size_t i = 1; i <= m; ++i)
        if (vals[i] < vals[best]) best = i;
    res.x = pts[best];
    res.value = vals[best];
    return res;
}

// --- phase optimization -----------------------------------------------------

namespace {

PhaseConfig phases_from_params(int n, int d, const std::vector<double>& x) {
    PhaseConfig pc(n, d);
    size_t idx = 0;
    for (int p = 0; p < n; ++p)
        for (int s = 0; s < 2; ++s)
            for (int j = 1; j < d; ++j) pc.at(p, s, j) = x[idx++];
    return pc;
}

std::vector<double> params_from_phases(const PhaseConfig& pc) {
    PhaseConfig g = pc.gauge_fixed();
    std::vector<double> x;
    x.reserve(size_t(pc.n) * 2 * (pc.d - 1));
    for (int p = 0; p < pc.n; ++p)
        for (int s = 0; s < 2; ++s)
            for (int j = 1; j < pc.d; ++j) x.push_back(g.at(p, s, j));
    return x;
}

// Pre-optimization over phases linear in the level index (phi_j = j*theta),
// the subspace containing the known optima of the CGLMP-type forms.
std::vector<double> linear_seed(const CompiledForm& compiled, int n, int d, std::mt19937_64& rng) {
    auto expand = [&](const std::vector<double>& theta) {
        PhaseConfig pc(n, d);
        for (int p = 0; p < n; ++p)
            for (int s = 0; s < 2; ++s)
                for (int j = 1; j < d; ++j) pc.at(p, s, j) = theta[size_t(p) * 2 + s] * j;
        return pc;
    };
    auto objective = [&](const std::vector<double>& theta) { return -compiled.value(expand(theta)); };

    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    std::vector<double> best_theta(size_t(n) * 2, 0.0);
    double best = objective(best_theta);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> theta(size_t(n) * 2);
        for (auto& t : theta) t = uni(rng);
        auto r = nelder_mead(objective, theta, 0.7, 1e-10, 4000);
        if (r.value < best) {
            best = r.value;
            best_theta = r.x;
        }
    }
    return params_from_phases(expand(best_theta));
}

}  // namespace

QuantumReport optimize_phases(const BellFunction& f, const Rational& lhv,
                              const QuantumOptions& opts) {
    if (opts.restarts < 1) throw std::invalid_argument("optimize_phases: restarts must be >= 1");
    int n = f.n(), d = f.d();
    CompiledForm compiled(to_probability_form(f));
    size_t m = size_t(n) * 2 * (d - 1);
    auto objective = [&](const std::vector<double>& x) {
        return -compiled.value(phases_from_params(n, d, x));
    };

    struct RestartOutcome {
        double value = 0.0;
        std::vector<double> x;
        bool converged = false;
    };
    std::vector<RestartOutcome> outcomes(opts.restarts);

    auto run_restart = [&](int r) {
        std::seed_seq seq{opts.seed, uint64_t(r) + 1};
        std::mt19937_64 rng(seq);
        std::vector<double> start(m);
        if (r == 0) {
            start = linear_seed(compiled, n, d, rng);
        } else {
            std::uniform_real_distribution<double> uni(0.0, kTwoPi);
            for (auto& v : start) v = uni(rng);
        }
        auto nm = nelder_mead(objective, start, 0.6, opts.tol, opts.max_evals);
        // polish from the found point with a tighter simplex
        auto polish = nelder_mead(objective, nm.x, 0.03, opts.tol, opts.max_evals / 2);
        if (polish.value < nm.value) nm = polish;
        outcomes[r] = {nm.value, nm.x, nm.converged};
    };

    unsigned workers = opts.workers > 0 ? unsigned(opts.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, unsigned(opts.restarts));
    if (workers <= 1) {
        for (int r = 0; r < opts.restarts; ++r) run_restart(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < opts.restarts; r = next.fetch_add(1))
                    run_restart(r);
            });
        for (auto& th : pool) th.join();
    }

    int best = 0;
    for (int r = 1; r < opts.restarts; ++r)
        if (outcomes[r].value < outcomes[best].value) best = r;  // ties keep lowest index

    QuantumReport rep;
    rep.lhv = lhv;
    rep.nl_psi = -outcomes[best].value;
    rep.best_phases = phases_from_params(n, d, outcomes[best].x).gauge_fixed();
    rep.restarts_used = opts.restarts;
    rep.converged = outcomes[best].converged;

    ProbabilityForm pf = to_probability_form(f);
    RealProbabilityTable uniform;
    uniform.n = n;
    uniform.d = d;
    uniform.p.assign(size_t(1) << n, std::vector<double>(d, 1.0 / d));
    rep.nl_mix = evaluate(pf, uniform);

    rep.violation = rep.nl_psi > rat_double(lhv);
    rep.vc = critical_visibility(rat_double(lhv), rep.nl_psi, rep.nl_mix);
    return rep;
}

QuantumReport optimize_phases(const BellFunction& f, const QuantumOptions& opts) {
    LhvOptions lhv_opts;
    lhv_opts.budget = opts.lhv_budget;
    lhv_opts.workers = opts.workers;
    return optimize_phases(f, lhv_bound(f, lhv_opts).bound, opts);
}

// --- projector reconstruction check ----------------------------------------

ProjectorCheck verify_projector_identity(int d, int trials, uint64_t seed) {
    if (!is_prime(d)) throw std::invalid_argument("verify_projector_identity: d must be prime");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<OutcomeVector> v(d);
    for (int k = 0; k < d; ++k) v[k] = outcome_vector(k, d);

    ProjectorCheck check;
    check.pass = true;

    using Mat = std::vector<std::complex<double>>;  // d x d, row major
    const Mat zero_mat(size_t(d) * d, {0.0, 0.0});

    for (int trial = 0; trial <= trials; ++trial) {
        // basis columns: computational basis first, then random unitaries
        std::vector<std::vector<std::complex<double>>> basis(d,
                                                             std::vector<std::complex<double>>(d));
        if (trial == 0) {
            for (int i = 0; i < d; ++i)
                for (int r = 0; r < d; ++r) basis[i][r] = (i == r) ? 1.0 : 0.0;
        } else {
            // Gram-Schmidt on a random complex Gaussian matrix
            for (int i = 0; i < d; ++i) {
                for (int r = 0; r < d; ++r) basis[i][r] = {gauss(rng), gauss(rng)};
                for (int j = 0; j < i; ++j) {
                    std::complex<double> dot{0.0, 0.0};
                    for (int r = 0; r < d; ++r) dot += std::conj(basis[j][r]) * basis[i][r];
                    for (int r = 0; r < d; ++r) basis[i][r] -= dot * basis[j][r];
                }
                double norm = 0.0;
                for (int r = 0; r < d; ++r) norm += std::norm(basis[i][r]);
                norm = std::sqrt(norm);
                for (int r = 0; r < d; ++r) basis[i][r] /= norm;
            }
        }
        std::vector<Mat> proj(d, zero_mat);
        for (int i = 0; i < d; ++i)
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) proj[i][size_t(r) * d + c] = basis[i][r] * std::conj(basis[i][c]);

        // For every projector index i and simplex component c, reconstruct
        // v_0[c]*Pi_i from (1/d) sum_k v_{-ki} o X^k, X^k = sum_t v_{kt} Pi_t.
        for (int i = 0; i < d && check.pass; ++i) {
            for (int comp = 0; comp < d - 1; ++comp) {
                Mat rhs = zero_mat;
                for (int k = 0; k < d; ++k)
                    for (int t = 0; t < d; ++t) {
                        int label = ((k * (t - i)) % d + d) % d;
                        double w = v[label].components[comp] / d;
                        for (size_t e = 0; e < rhs.size(); ++e) rhs[e] += w * proj[t][e];
                    }
                double resid = 0.0;
                for (size_t e = 0; e < rhs.size(); ++e)
                    resid = std::max(resid,
                                     std::abs(rhs[e] - v[0].components[comp] * proj[i][e]));
                check.max_residual = std::max(check.max_residual, resid);
                if (resid > 1e-10) check.pass = false;
            }
        }
        if (!check.pass) break;
    }
    return check;
}

// --- JSON ------------------------------------------------------------------

std::string PhaseConfig::to_json() const {
    json parties = json::array();
    for (int p = 0; p < n; ++p) {
        json settings = json::array();
        for (int s = 0; s < 2; ++s) {
            json levels = json::array();
            for (int j = 0; j < d; ++j) levels.push_back(at(p, s, j));
            settings.push_back(levels);
        }
        parties.push_back(settings);
    }
    json j{{"n", n}, {"d", d}, {"phases", parties}};
    return j.dump();
}

PhaseConfig PhaseConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    PhaseConfig pc(j.at("n").get<int>(), j.at("d").get<int>());
    const auto& parties = j.at("phases");
    for (int p = 0; p < pc.n; ++p)
        for (int s = 0; s < 2; ++s)
            for (int jj = 0; jj < pc.d; ++jj) pc.at(p, s, jj) = parties[p][s][jj].get<double>();
    return pc;
}

std::string QuantumReport::to_json() const {
    json j{{"nl_psi", nl_psi},
           {"nl_mix", nl_mix},
           {"vc", vc},
           {"violation", violation},
           {"lhv", rat_str(lhv)},
           {"restarts_used", restarts_used},
           {"converged", converged},
           {"best_phases", json::parse(best_phases.to_json())}};
    return j.dump();
}

}  // namespace bellit
