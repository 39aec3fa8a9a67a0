/*
   Copyright 2026 The polyembed Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef POLYEMBED_POLY_HPP
#define POLYEMBED_POLY_HPP

#include <algorithm>
#include <cassert>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace polyembed {

namespace detail {
// a '+' or '-' outside parentheses, past the leading sign
inline bool top_level_sum(const std::string& s) {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (depth == 0 && i > 0 && (s[i] == '+' || s[i] == '-') && s[i - 1] != '^') return true;
    }
    return false;
}

inline std::string fraction_string(const std::string& num, const std::string& den) {
    const bool bare_den = !top_level_sum(den) && den.find_first_of("*/-") == std::string::npos;
    return (top_level_sum(num) ? "(" + num + ")" : num) + "/" + (bare_den ? den : "(" + den + ")");
}
}  // namespace detail

namespace adl {
// Unqualified calls resolve by argument-dependent lookup at instantiation,
// so element types declared after this header still work.
template <class F>
bool zero_test(const F& x) { return is_zero(x); }
template <class F>
std::string text(const F& x) { return to_string(x); }
}  // namespace adl

/*
 * Dense univariate polynomials over an exact field F.
 *
 * F must provide + - * / and unary -, operator==, and the free functions
 * is_zero(F), zero_like(F), one_like(F), to_string(F). A zero prototype is
 * stored with every polynomial so that elements of context-dependent fields
 * (tower elements) can be produced from an empty coefficient list.
 */
template <class F>
class Poly {
public:
    Poly() : zero_() {}
    explicit Poly(F zero) : zero_(zero_like(zero)) {}
    Poly(std::vector<F> coeffs, F zero) : c_(std::move(coeffs)), zero_(zero_like(zero)) { trim(); }

    static Poly constant(const F& c) { return Poly(std::vector<F>{c}, c); }
    static Poly monomial(const F& c, int n) {
        std::vector<F> v(static_cast<std::size_t>(n) + 1, zero_like(c));
        v.back() = c;
        return Poly(std::move(v), c);
    }
    /// The polynomial x over the field of `like`.
    static Poly variable(const F& like) { return monomial(one_like(like), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<F>& coeffs() const { return c_; }
    const F& zero() const { return zero_; }
    F one() const { return one_like(zero_); }

    const F& coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return zero_;
        return c_[static_cast<std::size_t>(i)];
    }
    const F& lead() const { return c_.empty() ? zero_ : c_.back(); }

    void set_coeff(int i, const F& v) {
        if (i >= static_cast<int>(c_.size())) c_.resize(static_cast<std::size_t>(i) + 1, zero_);
        c_[static_cast<std::size_t>(i)] = v;
        trim();
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly(a.zero_);
        std::vector<F> r(a.c_.size() + b.c_.size() - 1, a.zero_);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (adl::zero_test(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r), a.zero_);
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const F& s) const {
        if (adl::zero_test(s)) return Poly(zero_);
        Poly r = *this;
        for (auto& x : r.c_) x = x * s;
        r.trim();
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Euclidean division; b must be nonzero.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        assert(!b.is_zero());
        Poly q(a.zero_), r = a;
        if (a.degree() < b.degree()) return {q, r};
        std::vector<F> qc(static_cast<std::size_t>(a.degree() - b.degree()) + 1, a.zero_);
        const F inv_lead = one_like(a.zero_) / b.lead();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            const int shift = r.degree() - b.degree();
            const F factor = r.lead() * inv_lead;
            qc[static_cast<std::size_t>(shift)] = factor;
            for (int i = 0; i <= b.degree(); ++i) {
                auto& slot = r.c_[static_cast<std::size_t>(i + shift)];
                slot = slot - factor * b.c_[static_cast<std::size_t>(i)];
            }
            // the leading slot is exactly zero now; drop it even if trim would
            r.c_.pop_back();
            r.trim();
        }
        q = Poly(std::move(qc), a.zero_);
        return {q, r};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    /// Quotient if b divides a exactly.
    static std::optional<Poly> exact_div(const Poly& a, const Poly& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) return std::nullopt;
        return q;
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return scaled(one_like(zero_) / lead());
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly(zero_);
        std::vector<F> r;
        r.reserve(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * F(Rational(static_cast<long>(i))));
        return Poly(std::move(r), zero_);
    }

    F eval(const F& x) const {
        F acc = zero_;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    /// Horner evaluation at any ring element supporting the needed operations.
    template <class R>
    R eval_in(const R& x, const R& zero) const {
        R acc = zero;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + R::constant(*it);
        return acc;
    }

    /// this(h), functional composition.
    Poly compose(const Poly& h) const {
        Poly acc(zero_);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * h + constant(*it);
        return acc;
    }

    Poly pow(unsigned n) const {
        Poly result = constant(one_like(zero_));
        Poly base = *this;
        while (n) {
            if (n & 1u) result = result * base;
            n >>= 1u;
            if (n) base = base * base;
        }
        return result;
    }

    /// Applies a coefficient map; the result lives over the field of `target_zero`.
    template <class G, class Fn>
    Poly<G> map(Fn&& fn, const G& target_zero) const {
        std::vector<G> r;
        r.reserve(c_.size());
        for (const auto& x : c_) r.push_back(fn(x));
        return Poly<G>(std::move(r), target_zero);
    }

    /// Smallest positive exponent gcd over the support (0 for constants).
    int support_gcd() const {
        int g = 0;
        for (int i = 1; i <= degree(); ++i)
            if (!adl::zero_test(coeff(i))) g = std::gcd(g, i);
        return g;
    }

    std::string to_string(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const F& c = coeff(i);
            if (adl::zero_test(c)) continue;
            std::string cs = adl::text(c);
            bool negative = !cs.empty() && cs[0] == '-' && !detail::top_level_sum(cs);
            if (negative) cs = cs.substr(1);
            bool compound = detail::top_level_sum(cs);
            if (!first) os << (negative ? " - " : " + ");
            else if (negative) os << "-";
            first = false;
            if (i == 0) {
                os << (compound ? "(" + cs + ")" : cs);
                continue;
            }
            if (cs != "1") os << (compound ? "(" + cs + ")" : cs) << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && adl::zero_test(c_.back())) c_.pop_back();
    }

    std::vector<F> c_;
    F zero_;
};

/// Monic gcd; gcd(0, 0) is 0.
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        Poly<F> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g monic.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> ext_gcd(const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r0 = a, r1 = b;
    Poly<F> s0 = Poly<F>::constant(a.one()), s1(a.zero());
    Poly<F> t0(a.zero()), t1 = Poly<F>::constant(a.one());
    while (!r1.is_zero()) {
        auto [q, r] = Poly<F>::divmod(r0, r1);
        r0 = std::exchange(r1, r);
        s0 = std::exchange(s1, s0 - q * s1);
        t0 = std::exchange(t1, t0 - q * t1);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    F inv = a.one() / r0.lead();
    return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

/// Resultant by the Euclidean remainder sequence.
template <class F>
F resultant(Poly<F> a, Poly<F> b) {
    const F zero = a.zero();
    if (a.is_zero() || b.is_zero()) return zero;
    F res = one_like(zero);
    while (b.degree() > 0) {
        const int da = a.degree(), db = b.degree();
        Poly<F> r = a % b;
        if (r.is_zero()) return zero;
        if ((da % 2 == 1) && (db % 2 == 1)) res = -res;
        F lb = b.lead();
        F factor = one_like(zero);
        for (int i = 0; i < da - r.degree(); ++i) factor = factor * lb;
        res = res * factor;
        a = std::move(b);
        b = std::move(r);
    }
    F lb = b.lead();
    for (int i = 0; i < a.degree(); ++i) res = res * lb;
    return res;
}

/// Squarefree test in characteristic zero.
template <class F>
bool is_squarefree(const Poly<F>& f) {
    if (f.degree() <= 0) return true;
    return gcd(f, f.derivative()).degree() == 0;
}

/// Yun's squarefree decomposition: f = lc * prod parts[i]^(i+1), parts monic and pairwise coprime.
template <class F>
std::vector<Poly<F>> squarefree_decomposition(const Poly<F>& f) {
    std::vector<Poly<F>> parts;
    if (f.degree() <= 0) return parts;
    Poly<F> a = f.monic();
    Poly<F> b = a.derivative();
    Poly<F> c = gcd(a, b);
    Poly<F> w = a / c;
    Poly<F> y = b / c;
    Poly<F> z = y - w.derivative();
    while (w.degree() > 0) {
        Poly<F> g = gcd(w, z);
        parts.push_back(g);
        w = w / g;
        y = z / g;
        z = y - w.derivative();
    }
    while (!parts.empty() && parts.back().degree() == 0) parts.pop_back();
    return parts;
}

/// Lagrange-free Newton interpolation through (xs[i], ys[i]).
template <class F>
Poly<F> interpolate(const std::vector<F>& xs, const std::vector<F>& ys) {
    assert(xs.size() == ys.size() && !xs.empty());
    const F zero = zero_like(ys[0]);
    std::vector<F> dd = ys;
    const std::size_t n = xs.size();
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    Poly<F> result = Poly<F>::constant(dd[n - 1]);
    for (std::size_t k = n - 1; k-- > 0;) {
        Poly<F> lin(std::vector<F>{-xs[k], one_like(zero)}, zero);
        result = result * lin + Poly<F>::constant(dd[k]);
    }
    return result;
}

/*
 * Right composition factor of prescribed degree.
 *
 * If f = g(h) with deg h = e, returns (g, h) with h monic and h(0) = 0; this
 * normalization makes h unique in characteristic zero. The top e coefficients
 * of f determine h (approximate e-th root); g follows from the h-adic
 * expansion of f, whose digits must all be constants.
 */
template <class F>
std::optional<std::pair<Poly<F>, Poly<F>>> decompose_right(const Poly<F>& f, int e) {
    const int n = f.degree();
    if (e <= 0 || n < 0 || n % e != 0)
        throw Error(ErrorKind::DegreeMismatch, "right factor degree " + std::to_string(e) +
                                                   " does not divide deg f = " + std::to_string(n));
    const F zero = f.zero();
    const F one = one_like(zero);
    if (n == 0) return std::nullopt;
    const int r = n / e;
    const Poly<F> fm = f.monic();
    Poly<F> h = Poly<F>::monomial(one, e);
    for (int i = 1; i < e; ++i) {
        Poly<F> hp = h.pow(static_cast<unsigned>(r));
        F delta = fm.coeff(n - i) - hp.coeff(n - i);
        h.set_coeff(e - i, delta / F(Rational(r)));
    }
    // h-adic digits of f
    std::vector<F> digits;
    Poly<F> rest = f;
    while (!rest.is_zero()) {
        auto [q, rem] = Poly<F>::divmod(rest, h);
        if (rem.degree() > 0) return std::nullopt;
        digits.push_back(rem.coeff(0));
        rest = q;
    }
    Poly<F> g(std::move(digits), zero);
    if (g.compose(h) != f) return std::nullopt;
    return std::make_pair(g, h);
}

/// Rational function num/den with den monic and gcd(num, den) = 1.
template <class F>
class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(Poly<F> num) : num_(std::move(num)), den_(Poly<F>::constant(num_.one())) {}
    RationalFunction(Poly<F> num, Poly<F> den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error(ErrorKind::DenominatorVanishes, "zero denominator");
        normalize();
    }

    const Poly<F>& num() const { return num_; }
    const Poly<F>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    /// max(deg num, deg den): the index [k(x) : k(f)] for non-constant f.
    int degree() const { return std::max(num_.degree(), den_.degree()); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw Error(ErrorKind::DenominatorVanishes, "division by zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    std::string to_string(const std::string& var = "x") const {
        if (den_.degree() == 0) return num_.to_string(var);
        return detail::fraction_string(num_.to_string(var), den_.to_string(var));
    }

private:
    void normalize() {
        if (num_.is_zero()) {
            den_ = Poly<F>::constant(den_.one());
            return;
        }
        Poly<F> g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        F lc = den_.lead();
        F inv = one_like(lc) / lc;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }

    Poly<F> num_;
    Poly<F> den_;
};

}  // namespace polyembed

#endif  // POLYEMBED_POLY_HPP
