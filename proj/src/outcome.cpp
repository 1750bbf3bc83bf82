#include "bellit/outcome.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bellit {

double OutcomeVector::dot(const OutcomeVector& other) const {
    double s = 0.0;
    for (size_t i = 0; i < components.size(); ++i) s += components[i] * other.components[i];
    return s;
}

double OutcomeVector::norm() const { return std::sqrt(dot(*this)); }

OutcomeVector outcome_vector(int k, int d) {
    if (d < 2) throw std::invalid_argument("outcome_vector: d must be >= 2");
    if (k < 0 || k >= d) throw std::out_of_range("outcome_vector: k out of range");
    OutcomeVector v;
    v.d = d;
    v.components.assign(d - 1, 0.0);
    // Vertex 0 of an m-vertex simplex is e_1; vertices 1..m-1 share first
    // coordinate -1/(m-1) and recurse on an (m-1)-vertex simplex scaled to
    // keep unit norm.
    double scale = 1.0;
    int offset = 0;
    int m = d;
    int kk = k;
    while (true) {
        if (kk == 0) {
            v.components[offset] = scale;
            break;
        }
        v.components[offset] = -scale / (m - 1);
        if (m == 2) break;  // two-vertex base case: (scale) and (-scale)
        scale *= std::sqrt(1.0 - 1.0 / double((m - 1) * (m - 1)));
        offset += 1;
        m -= 1;
        kk -= 1;
    }
    return v;
}

int compose(int a, int b, int d) {
    if (a < 0 || a >= d || b < 0 || b >= d) throw std::out_of_range("compose: index out of range");
    return (a + b) % d;
}

bool is_prime(int d) {
    if (d < 2) return false;
    for (int p = 2; p * p <= d; ++p)
        if (d % p == 0) return false;
    return true;
}

Coefficient Coefficient::zero(int d) {
    Coefficient c;
    c.d_ = d;
    c.alpha_.assign(d, Rational(0));
    return c;
}

Coefficient Coefficient::basis(int k, int d) {
    if (k < 0 || k >= d) throw std::out_of_range("Coefficient::basis: k out of range");
    Coefficient c = zero(d);
    c.alpha_[k] = 1;
    c.normalize();
    return c;
}

Coefficient Coefficient::from_alphas(std::vector<Rational> raw) {
    if (raw.size() < 2) throw std::invalid_argument("Coefficient: need at least 2 alphas");
    Coefficient c;
    c.d_ = int(raw.size());
    c.alpha_ = std::move(raw);
    c.normalize();
    return c;
}

void Coefficient::normalize() {
    Rational mean(0);
    for (const auto& a : alpha_) mean += a;
    mean /= d_;
    for (auto& a : alpha_) a -= mean;
}

bool Coefficient::is_zero() const {
    for (const auto& a : alpha_)
        if (a != 0) return false;
    return true;
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
    if (d_ != o.d_) throw std::invalid_argument("Coefficient: dimension mismatch");
    Coefficient r = *this;
    for (int k = 0; k < d_; ++k) r.alpha_[k] += o.alpha_[k];
    return r;
}

Coefficient Coefficient::operator-(const Coefficient& o) const { return *this + (-o); }

Coefficient Coefficient::operator-() const {
    Coefficient r = *this;
    for (auto& a : r.alpha_) a = -a;
    return r;
}

Coefficient Coefficient::operator*(const Rational& s) const {
    Coefficient r = *this;
    for (auto& a : r.alpha_) a *= s;
    return r;
}

Coefficient Coefficient::convolve(const Coefficient& y) const {
    if (d_ != y.d_) throw std::invalid_argument("coeff_convolve: dimension mismatch");
    Coefficient r = zero(d_);
    for (int k = 0; k < d_; ++k) {
        if (alpha_[k] == 0) continue;
        for (int j = 0; j < d_; ++j) {
            if (y.alpha_[j] == 0) continue;
            r.alpha_[(k + j) % d_] += alpha_[k] * y.alpha_[j];
        }
    }
    r.normalize();
    return r;
}

Coefficient Coefficient::shift(int c) const {
    c = ((c % d_) + d_) % d_;
    Coefficient r = zero(d_);
    for (int k = 0; k < d_; ++k) r.alpha_[(k + c) % d_] = alpha_[k];
    return r;
}

Rational Coefficient::first_component() const {
    // In mean-zero gauge: alpha_0 - (sum - alpha_0)/(d-1) = d*alpha_0/(d-1).
    return alpha_[0] * d_ / (d_ - 1);
}

std::string Coefficient::key() const {
    std::ostringstream os;
    for (int k = 0; k < d_; ++k) {
        if (k) os << ',';
        os << rat_str(alpha_[k]);
    }
    return os.str();
}

Coefficient coeff_convolve(const Coefficient& x, const Coefficient& y) { return x.convolve(y); }
Coefficient coeff_shift(const Coefficient& x, int c) { return x.shift(c); }
Rational first_component(const Coefficient& x) { return x.first_component(); }

}  // namespace bellit
