#include "bellit/bell.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace bellit {

using nlohmann::json;

namespace {

Rational rat_from_json(const json& j) {
    if (j.is_string()) return rat_parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("expected rational as string or integer");
}

}  // namespace

BellFunction::BellFunction(int n, int d) : n_(n), d_(d) {
    if (n < 1) throw std::invalid_argument("BellFunction: n must be >= 1");
    if (d < 2) throw std::invalid_argument("BellFunction: d must be >= 2");
    coeffs_.assign(size_t(1) << n, Coefficient::zero(d));
}

uint32_t BellFunction::with_bit(uint32_t mask, int n, int party, int value) {
    uint32_t bit = uint32_t(1) << (n - 1 - party);
    return value ? (mask | bit) : (mask & ~bit);
}

void BellFunction::set_coeff(uint32_t mask, Coefficient c) {
    if (c.d() != d_) throw std::invalid_argument("BellFunction::set_coeff: dimension mismatch");
    coeffs_[mask] = std::move(c);
}

BellFunction BellFunction::scaled(const Rational& s) const {
    BellFunction r = *this;
    for (auto& c : r.coeffs_) c = c * s;
    return r;
}

BellFunction BellFunction::operator+(const BellFunction& o) const {
    if (n_ != o.n_ || d_ != o.d_) throw std::invalid_argument("BellFunction: shape mismatch");
    BellFunction r = *this;
    for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = coeffs_[i] + o.coeffs_[i];
    return r;
}

std::string BellFunction::key() const {
    std::ostringstream os;
    os << n_ << '|' << d_;
    for (const auto& c : coeffs_) os << '|' << c.key();
    return os.str();
}

std::string mask_bits(uint32_t mask, int n) {
    std::string s(n, '0');
    for (int p = 0; p < n; ++p)
        if ((mask >> (n - 1 - p)) & 1) s[p] = '1';
    return s;
}

uint32_t parse_mask(const std::string& bits, int n) {
    if (int(bits.size()) != n) throw std::invalid_argument("setting bitstring has wrong length: " + bits);
    uint32_t mask = 0;
    for (int p = 0; p < n; ++p) {
        char c = bits[p];
        if (c != '0' && c != '1') throw std::invalid_argument("setting bitstring must be binary: " + bits);
        if (c == '1') mask |= uint32_t(1) << (n - 1 - p);
    }
    return mask;
}

std::string BellFunction::to_json() const {
    json coeffs = json::object();
    for (uint32_t mask = 0; mask < uint32_t(num_settings()); ++mask) {
        json arr = json::array();
        for (const auto& a : coeffs_[mask].alphas()) arr.push_back(rat_str(a));
        coeffs[mask_bits(mask, n_)] = arr;
    }
    json j{{"n", n_}, {"d", d_}, {"coeffs", coeffs}};
    return j.dump();
}

BellFunction BellFunction::from_json(const std::string& text) {
    json j = json::parse(text);
    int n = j.at("n").get<int>();
    int d = j.at("d").get<int>();
    BellFunction f(n, d);
    const auto& coeffs = j.at("coeffs");
    if (int(coeffs.size()) != (1 << n))
        throw std::invalid_argument("BellFunction JSON: expected one coefficient per setting tuple");
    for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
        uint32_t mask = parse_mask(it.key(), n);
        const json& arr = it.value();
        if (int(arr.size()) != d) throw std::invalid_argument("BellFunction JSON: alpha array must have d entries");
        std::vector<Rational> alphas;
        alphas.reserve(d);
        for (const auto& e : arr) alphas.push_back(rat_from_json(e));
        f.set_coeff(mask, Coefficient::from_alphas(std::move(alphas)));
    }
    return f;
}

ProbabilityForm to_probability_form(const BellFunction& f) {
    ProbabilityForm pf;
    pf.n = f.n();
    pf.d = f.d();
    pf.weights.assign(f.num_settings(), std::vector<Rational>(f.d(), Rational(0)));
    Rational scale = Rational(f.d()) / (f.d() - 1);
    for (int mask = 0; mask < f.num_settings(); ++mask) {
        const auto& alpha = f.coeff(mask).alphas();
        for (int r = 0; r < f.d(); ++r) pf.weights[mask][r] = alpha[(f.d() - r) % f.d()] * scale;
    }
    return pf;
}

template <typename Scalar, typename Out>
static Out evaluate_impl(const ProbabilityForm& pf, const BasicProbabilityTable<Scalar>& t, Out acc) {
    if (pf.n != t.n || pf.d != t.d) throw std::invalid_argument("evaluate: shape mismatch");
    for (size_t mask = 0; mask < pf.weights.size(); ++mask)
        for (int r = 0; r < pf.d; ++r) {
            if constexpr (std::is_same_v<Out, double>)
                acc += rat_double(pf.weights[mask][r]) * t.p[mask][r];
            else
                acc += pf.weights[mask][r] * t.p[mask][r];
        }
    return acc;
}

Rational evaluate(const ProbabilityForm& pf, const ProbabilityTable& t) {
    return evaluate_impl(pf, t, pf.constant);
}

double evaluate(const ProbabilityForm& pf, const RealProbabilityTable& t) {
    return evaluate_impl(pf, t, rat_double(pf.constant));
}

Rational evaluate_deterministic(const BellFunction& f, const DeterministicStrategy& strat) {
    if (strat.n != f.n() || strat.d != f.d())
        throw std::invalid_argument("evaluate_deterministic: shape mismatch");
    Rational total(0);
    for (int mask = 0; mask < f.num_settings(); ++mask) {
        int t = 0;
        for (int p = 0; p < f.n(); ++p) t += strat.outcomes[p][f.setting_of(mask, p)];
        total += f.coeff(mask).shift(t % f.d()).first_component();
    }
    return total;
}

ProbabilityTable strategy_table(const BellFunction& f, const DeterministicStrategy& strat) {
    ProbabilityTable t;
    t.n = f.n();
    t.d = f.d();
    t.p.assign(f.num_settings(), std::vector<Rational>(f.d(), Rational(0)));
    for (int mask = 0; mask < f.num_settings(); ++mask) {
        int sum = 0;
        for (int p = 0; p < f.n(); ++p) sum += strat.outcomes[p][f.setting_of(mask, p)];
        t.p[mask][sum % f.d()] = 1;
    }
    return t;
}

BellFunction restrict_last(const BellFunction& f, int k0, int k1) {
    if (f.n() < 2) throw std::invalid_argument("restrict_last: need at least 2 parties");
    if (k0 < 0 || k0 >= f.d() || k1 < 0 || k1 >= f.d())
        throw std::out_of_range("restrict_last: outcome label out of range");
    BellFunction r(f.n() - 1, f.d());
    for (int s = 0; s < r.num_settings(); ++s) {
        uint32_t m0 = (uint32_t(s) << 1);
        r.set_coeff(s, f.coeff(m0).shift(k0) + f.coeff(m0 | 1).shift(k1));
    }
    return r;
}

BellFunction iterate(const BellFunction& f00, const BellFunction& f01) {
    if (f00.n() != f01.n() || f00.d() != f01.d())
        throw std::invalid_argument("iterate: operand shapes differ");
    int d = f00.d();
    if (!is_prime(d)) throw std::invalid_argument("iterate: d must be prime");

    std::vector<Rational> m00(d, Rational(0)), m01(d, Rational(0)), m11(d, Rational(0));
    for (int k = 1; k < d; ++k) {
        m00[k] = Rational(-(d - k));  // -sum (d-k) v_k
        m01[k] = Rational(-k);        // -sum k v_k (also the off-diagonal weight)
        m11[k] = Rational(k);         // +sum k v_k
    }
    Coefficient w00 = Coefficient::from_alphas(m00);
    Coefficient w01 = Coefficient::from_alphas(m01);
    Coefficient w11 = Coefficient::from_alphas(m11);

    Rational inv_d = rat(1, d);
    BellFunction out(f00.n() + 1, d);
    for (int s = 0; s < f00.num_settings(); ++s) {
        const Coefficient& a = f00.coeff(s);
        const Coefficient& b = f01.coeff(s);
        uint32_t m = uint32_t(s) << 1;
        out.set_coeff(m, (a.convolve(w00) + b.convolve(w01)) * inv_d);
        out.set_coeff(m | 1, (a.convolve(w01) + b.convolve(w11)) * inv_d);
    }
    return out;
}

BellFunction swap_all_settings(const BellFunction& f) {
    BellFunction r(f.n(), f.d());
    uint32_t all = uint32_t(f.num_settings()) - 1;
    for (int mask = 0; mask < f.num_settings(); ++mask) r.set_coeff(uint32_t(mask) ^ all, f.coeff(mask));
    return r;
}

AffineMatch affine_compare(const ProbabilityForm& a, const ProbabilityForm& b,
                           const std::optional<Rational>& bound_a,
                           const std::optional<Rational>& bound_b) {
    AffineMatch m;
    if (a.n != b.n || a.d != b.d) return m;

    auto mean_zero = [](const ProbabilityForm& pf, Rational& total_const) {
        std::vector<std::vector<Rational>> lin = pf.weights;
        total_const = pf.constant;
        for (auto& row : lin) {
            Rational mean(0);
            for (const auto& w : row) mean += w;
            mean /= int(row.size());
            for (auto& w : row) w -= mean;
            total_const += mean;  // rows act on normalized distributions
        }
        return lin;
    };

    Rational ca(0), cb(0);
    auto la = mean_zero(a, ca);
    auto lb = mean_zero(b, cb);

    Rational lambda(0);
    for (size_t s = 0; s < la.size() && lambda == 0; ++s)
        for (int r = 0; r < a.d && lambda == 0; ++r)
            if (lb[s][r] != 0) lambda = la[s][r] / lb[s][r];
    if (lambda <= 0) return m;

    for (size_t s = 0; s < la.size(); ++s)
        for (int r = 0; r < a.d; ++r)
            if (la[s][r] != lambda * lb[s][r]) return m;

    m.proportional = true;
    m.scale = lambda;
    m.offset = ca - lambda * cb;
    if (bound_a && bound_b) m.bounds_consistent = (*bound_a == lambda * (*bound_b) + m.offset);
    return m;
}

std::string ProbabilityForm::to_json() const {
    json weights_json = json::object();
    for (uint32_t mask = 0; mask < weights.size(); ++mask) {
        json arr = json::array();
        for (const auto& w : weights[mask]) arr.push_back(rat_str(w));
        weights_json[mask_bits(mask, n)] = arr;
    }
    json j{{"n", n}, {"d", d}, {"weights", weights_json}, {"constant", rat_str(constant)}};
    return j.dump();
}

ProbabilityForm ProbabilityForm::from_json(const std::string& text) {
    json j = json::parse(text);
    ProbabilityForm pf;
    pf.n = j.at("n").get<int>();
    pf.d = j.at("d").get<int>();
    pf.weights.assign(size_t(1) << pf.n, std::vector<Rational>(pf.d, Rational(0)));
    const auto& weights = j.at("weights");
    for (auto it = weights.begin(); it != weights.end(); ++it) {
        uint32_t mask = parse_mask(it.key(), pf.n);
        const json& arr = it.value();
        if (int(arr.size()) != pf.d)
            throw std::invalid_argument("ProbabilityForm JSON: weight row must have d entries");
        for (int r = 0; r < pf.d; ++r) pf.weights[mask][r] = rat_from_json(arr[r]);
    }
    if (j.contains("constant")) pf.constant = rat_from_json(j.at("constant"));
    return pf;
}

}  // namespace bellit
