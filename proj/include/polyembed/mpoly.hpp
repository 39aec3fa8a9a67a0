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

#ifndef POLYEMBED_MPOLY_HPP
#define POLYEMBED_MPOLY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace polyembed {

/// Sparse polynomial in a fixed number of variables over Q; terms keyed lexicographically.
class MPoly {
public:
    using Exp = std::vector<int>;
    using Terms = std::map<Exp, Rational>;

    MPoly() = default;
    explicit MPoly(int nvars) : n_(nvars) {}

    static MPoly constant(int nvars, const Rational& c) {
        MPoly p(nvars);
        p.add_term(Exp(static_cast<std::size_t>(nvars), 0), c);
        return p;
    }
    static MPoly variable(int nvars, int i) { return monomial(nvars, unit(nvars, i), Rational(1)); }
    static MPoly monomial(int nvars, const Exp& e, const Rational& c) {
        MPoly p(nvars);
        p.add_term(e, c);
        return p;
    }
    /// p(x_var) as an element of the n-variable ring.
    static MPoly from_univariate(const Poly<Rational>& p, int nvars, int var) {
        MPoly out(nvars);
        for (int i = 0; i <= p.degree(); ++i) {
            Exp e(static_cast<std::size_t>(nvars), 0);
            e[static_cast<std::size_t>(var)] = i;
            out.add_term(e, p.coeff(i));
        }
        return out;
    }

    int nvars() const { return n_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && total(t_.begin()->first) == 0); }
    Rational constant_value() const {
        auto it = t_.find(Exp(static_cast<std::size_t>(n_), 0));
        return it == t_.end() ? Rational(0) : it->second;
    }
    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : t_) d = std::max(d, total(e));
        return d;
    }
    int degree_in(int i) const {
        int d = -1;
        for (const auto& [e, c] : t_) d = std::max(d, e[static_cast<std::size_t>(i)]);
        return d;
    }
    /// Univariate view when only variable `var` occurs.
    std::optional<Poly<Rational>> as_univariate(int var) const {
        std::vector<Rational> c;
        for (const auto& [e, x] : t_) {
            for (int j = 0; j < n_; ++j)
                if (j != var && e[static_cast<std::size_t>(j)] != 0) return std::nullopt;
            const auto d = static_cast<std::size_t>(e[static_cast<std::size_t>(var)]);
            if (c.size() <= d) c.resize(d + 1, Rational(0));
            c[d] = x;
        }
        return Poly<Rational>(c, Rational(0));
    }

    void add_term(const Exp& e, const Rational& c) {
        if (c == 0) return;
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    friend MPoly operator+(MPoly a, const MPoly& b) {
        a.fit(b);
        for (const auto& [e, c] : b.t_) a.add_term(e, c);
        return a;
    }
    friend MPoly operator-(MPoly a, const MPoly& b) {
        a.fit(b);
        for (const auto& [e, c] : b.t_) a.add_term(e, -c);
        return a;
    }
    friend MPoly operator-(const MPoly& a) { return MPoly(a.n_) - a; }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly out(std::max(a.n_, b.n_));
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_) {
                Exp e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }
    MPoly scaled(const Rational& c) const {
        MPoly out(n_);
        for (const auto& [e, x] : t_) out.add_term(e, x * c);
        return out;
    }
    MPoly& operator+=(const MPoly& b) { return *this = *this + b; }
    MPoly& operator-=(const MPoly& b) { return *this = *this - b; }
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    MPoly pow(unsigned k) const {
        MPoly out = constant(n_, Rational(1)), base = *this;
        while (k) {
            if (k & 1u) out = out * base;
            k >>= 1u;
            if (k) base = base * base;
        }
        return out;
    }

    MPoly derivative(int i) const {
        MPoly out(n_);
        for (const auto& [e, c] : t_) {
            const int d = e[static_cast<std::size_t>(i)];
            if (d == 0) continue;
            Exp f(e);
            --f[static_cast<std::size_t>(i)];
            out.add_term(f, c * d);
        }
        return out;
    }

    /// Replaces x_i by images[i]; the result lives in the images' ring.
    MPoly substitute(const std::vector<MPoly>& images) const {
        const int m = images.empty() ? 0 : images[0].n_;
        MPoly out(m);
        for (const auto& [e, c] : t_) {
            MPoly term = constant(m, c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) term = term * images[i].pow(static_cast<unsigned>(e[i]));
            out += term;
        }
        return out;
    }

    /// Exact quotient a / b, or none when b does not divide a.
    static std::optional<MPoly> divide(const MPoly& a, const MPoly& b) {
        if (b.is_zero()) throw Error(ErrorKind::PreconditionFailed, "division by the zero polynomial");
        const auto& [lb, cb] = *b.t_.rbegin();
        MPoly q(std::max(a.n_, b.n_)), r = a;
        while (!r.is_zero()) {
            const auto [lr, cr] = *r.t_.rbegin();
            Exp e(lr);
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] -= lb[i];
                if (e[i] < 0) return std::nullopt;
            }
            MPoly t = monomial(q.n_, e, cr / cb);
            q += t;
            r -= t * b;
        }
        return q;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        if (t_.empty()) return "0";
        std::string out;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [e, c] = *it;
            std::string mono;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i]) continue;
                if (!mono.empty()) mono += "*";
                mono += names[i];
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            Rational a = abs(c);
            std::string term;
            if (mono.empty()) term = polyembed::to_string(a);
            else if (a == 1) term = mono;
            else term = polyembed::to_string(a) + "*" + mono;
            if (out.empty()) out = (c < 0 ? "-" : "") + term;
            else out += (c < 0 ? " - " : " + ") + term;
        }
        return out;
    }

private:
    static Exp unit(int n, int i) {
        Exp e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        return e;
    }
    static int total(const Exp& e) {
        int s = 0;
        for (int x : e) s += x;
        return s;
    }
    void fit(const MPoly& b) {
        if (n_ < b.n_) n_ = b.n_;
    }

    int n_ = 0;
    Terms t_;
};

}  // namespace polyembed

#endif  // POLYEMBED_MPOLY_HPP
