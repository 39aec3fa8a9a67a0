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

#ifndef POLYEMBED_FACTOR_Q_HPP
#define POLYEMBED_FACTOR_Q_HPP

// Factorization of univariate polynomials over Q: squarefree decomposition,
// Cantor-Zassenhaus modulo a small prime, quadratic Hensel lifting, and
// exhaustive recombination of the lifted factors.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "poly.hpp"
#include "rational.hpp"

namespace polyembed {

namespace detail {

using u64 = std::uint64_t;
using PolyP = std::vector<u64>;  // coefficients mod p, low degree first, trimmed

struct ModP {
    u64 p;

    u64 add(u64 a, u64 b) const { return (a + b) % p; }
    u64 sub(u64 a, u64 b) const { return (a + p - b) % p; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }
    u64 pow(u64 a, u64 e) const {
        u64 r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }
    u64 reduce(const Integer& z) const {
        Integer r = z % Integer(static_cast<unsigned long>(p));
        if (r < 0) r += static_cast<unsigned long>(p);
        return r.get_ui();
    }

    void trim(PolyP& a) const {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    PolyP sub(const PolyP& a, const PolyP& b) const {
        PolyP r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
        trim(r);
        return r;
    }
    PolyP mul(const PolyP& a, const PolyP& b) const {
        if (a.empty() || b.empty()) return {};
        PolyP r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = add(r[i + j], mul(a[i], b[j]));
        trim(r);
        return r;
    }
    std::pair<PolyP, PolyP> divmod(PolyP a, const PolyP& b) const {
        if (a.size() < b.size()) return {{}, a};
        PolyP q(a.size() - b.size() + 1, 0);
        u64 il = inv(b.back());
        for (std::size_t k = a.size(); k-- >= b.size();) {
            u64 f = mul(a[k], il);
            q[k - (b.size() - 1)] = f;
            if (f)
                for (std::size_t i = 0; i < b.size(); ++i) a[k - (b.size() - 1) + i] = sub(a[k - (b.size() - 1) + i], mul(f, b[i]));
            if (k == b.size() - 1) break;
        }
        trim(a);
        trim(q);
        return {q, a};
    }
    PolyP mod(const PolyP& a, const PolyP& b) const { return divmod(a, b).second; }
    PolyP monic(PolyP a) const {
        if (a.empty()) return a;
        u64 il = inv(a.back());
        for (auto& x : a) x = mul(x, il);
        return a;
    }
    PolyP gcd(PolyP a, PolyP b) const {
        while (!b.empty()) {
            PolyP r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(a);
    }
    /// (g, s, t) with s*a + t*b = g monic.
    std::tuple<PolyP, PolyP, PolyP> ext_gcd(PolyP a, PolyP b) const {
        PolyP s0{1}, s1{}, t0{}, t1{1};
        while (!b.empty()) {
            auto [q, r] = divmod(a, b);
            a = std::exchange(b, r);
            s0 = std::exchange(s1, sub(s0, mul(q, s1)));
            t0 = std::exchange(t1, sub(t0, mul(q, t1)));
        }
        u64 il = inv(a.back());
        for (auto* v : {&a, &s0, &t0})
            for (auto& x : *v) x = mul(x, il);
        return {a, s0, t0};
    }
    PolyP derivative(const PolyP& a) const {
        if (a.size() <= 1) return {};
        PolyP r(a.size() - 1);
        for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = mul(a[i], i % p);
        trim(r);
        return r;
    }
    /// base^e mod m for a big exponent.
    PolyP powmod(PolyP base, const Integer& e, const PolyP& m) const {
        PolyP result{1};
        base = mod(base, m);
        const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            result = mod(mul(result, result), m);
            if (mpz_tstbit(e.get_mpz_t(), i)) result = mod(mul(result, base), m);
        }
        return result;
    }
};

/// Splits a squarefree monic f mod p all of whose irreducible factors have degree d.
inline void equal_degree_split(const ModP& F, const PolyP& f, int d, std::mt19937_64& rng, std::vector<PolyP>& out) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n == d) {
        out.push_back(f);
        return;
    }
    Integer exponent;
    mpz_ui_pow_ui(exponent.get_mpz_t(), static_cast<unsigned long>(F.p), static_cast<unsigned long>(d));
    exponent = (exponent - 1) / 2;
    for (;;) {
        PolyP a(static_cast<std::size_t>(n));
        for (auto& x : a) x = rng() % F.p;
        F.trim(a);
        if (a.size() <= 1) continue;
        PolyP b = F.powmod(a, exponent, f);
        b = F.sub(b, PolyP{1});
        PolyP g = F.gcd(f, b);
        const int dg = static_cast<int>(g.size()) - 1;
        if (dg > 0 && dg < n) {
            equal_degree_split(F, g, d, rng, out);
            equal_degree_split(F, F.divmod(f, g).first, d, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors of a squarefree monic polynomial mod p (p odd).
inline std::vector<PolyP> factor_mod_p(const ModP& F, PolyP f, std::mt19937_64& rng) {
    std::vector<PolyP> out;
    PolyP x{0, 1};
    PolyP h = x;
    for (int d = 1; static_cast<int>(f.size()) - 1 >= 2 * d; ++d) {
        h = F.powmod(h, Integer(static_cast<unsigned long>(F.p)), f);
        PolyP g = F.gcd(f, F.sub(h, x));
        if (g.size() > 1) {
            equal_degree_split(F, g, d, rng, out);
            f = F.divmod(f, g).first;
            h = F.mod(h, f);
        }
    }
    if (f.size() > 1) out.push_back(F.monic(f));
    return out;
}

using PolyZ = std::vector<Integer>;  // integer coefficients, low degree first

inline void trim_z(PolyZ& a) {
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

inline PolyZ mod_z(PolyZ a, const Integer& m) {
    for (auto& x : a) {
        x %= m;
        if (x < 0) x += m;
    }
    trim_z(a);
    return a;
}

inline PolyZ mul_z(const PolyZ& a, const PolyZ& b, const Integer& m) {
    if (a.empty() || b.empty()) return {};
    PolyZ r(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return mod_z(r, m);
}

inline PolyZ add_z(const PolyZ& a, const PolyZ& b, const Integer& m) {
    PolyZ r(std::max(a.size(), b.size()), Integer(0));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    return mod_z(r, m);
}

inline PolyZ sub_z(const PolyZ& a, const PolyZ& b, const Integer& m) {
    PolyZ nb = b;
    for (auto& x : nb) x = -x;
    return add_z(a, nb, m);
}

/// Division by a monic polynomial modulo m.
inline std::pair<PolyZ, PolyZ> divmod_monic_z(PolyZ a, const PolyZ& b, const Integer& m) {
    a = mod_z(a, m);
    if (a.size() < b.size()) return {{}, a};
    PolyZ q(a.size() - b.size() + 1, Integer(0));
    for (std::size_t k = a.size(); k-- >= b.size();) {
        Integer f = a[k];
        q[k - (b.size() - 1)] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[k - (b.size() - 1) + i] -= f * b[i];
        for (auto& x : a) {
            x %= m;
            if (x < 0) x += m;
        }
        if (k == b.size() - 1) break;
    }
    trim_z(a);
    return {mod_z(q, m), a};
}

inline PolyZ lift_p(const PolyP& a) {
    PolyZ r;
    for (u64 x : a) r.emplace_back(static_cast<unsigned long>(x));
    return r;
}

/*
 * One quadratic Hensel step: from f = g*h, s*g + t*h = 1 mod m to the same
 * identities mod m^2. h stays monic; g carries the leading coefficient.
 */
inline void hensel_step(const PolyZ& f, PolyZ& g, PolyZ& h, PolyZ& s, PolyZ& t, const Integer& m2) {
    PolyZ e = sub_z(f, mul_z(g, h, m2), m2);
    auto [q, r] = divmod_monic_z(mul_z(s, e, m2), h, m2);
    PolyZ g2 = add_z(add_z(g, mul_z(t, e, m2), m2), mul_z(q, g, m2), m2);
    PolyZ h2 = add_z(h, r, m2);
    PolyZ b = sub_z(add_z(mul_z(s, g2, m2), mul_z(t, h2, m2), m2), PolyZ{Integer(1)}, m2);
    auto [c, d] = divmod_monic_z(mul_z(s, b, m2), h2, m2);
    s = sub_z(s, d, m2);
    t = sub_z(sub_z(t, mul_z(t, b, m2), m2), mul_z(c, g2, m2), m2);
    g = std::move(g2);
    h = std::move(h2);
}

/// Lifts f = lc * prod(factors) mod p to mod p^(2^k) >= bound; returns monic lifted factors.
inline std::vector<PolyZ> hensel_lift(const ModP& F, const PolyZ& f, std::vector<PolyP> factors, const Integer& modulus_target,
                                      Integer& modulus_out) {
    std::vector<PolyZ> lifted;
    PolyZ current = f;
    const Integer p(static_cast<unsigned long>(F.p));
    while (factors.size() > 1) {
        PolyP h_p = factors.front();
        factors.erase(factors.begin());
        PolyP g_p{F.reduce(current.back())};
        for (const auto& u : factors) g_p = F.mul(g_p, u);
        auto [one, s_p, t_p] = F.ext_gcd(g_p, h_p);
        PolyZ g = lift_p(g_p), h = lift_p(h_p), s = lift_p(s_p), t = lift_p(t_p);
        Integer m = p;
        while (m < modulus_target) {
            m = m * m;
            hensel_step(current, g, h, s, t, m);
        }
        modulus_out = m;
        lifted.push_back(h);
        current = g;
        // the rest is lifted as a factorization of g modulo the same target
    }
    // last factor: current / lc, made monic mod the target modulus
    Integer m = modulus_out;
    if (lifted.empty()) {
        m = p;
        while (m < modulus_target) m = m * m;
        modulus_out = m;
    }
    Integer lc = current.back();
    Integer inv;
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), m.get_mpz_t());
    PolyZ last = current;
    for (auto& x : last) x = x * inv;
    lifted.push_back(mod_z(last, m));
    return lifted;
}

inline Integer content_z(const PolyZ& a) {
    Integer g(0);
    for (const auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

inline PolyZ symmetric(PolyZ a, const Integer& m) {
    Integer half = m / 2;
    for (auto& x : a) {
        x %= m;
        if (x < 0) x += m;
        if (x > half) x -= m;
    }
    trim_z(a);
    return a;
}

/// Exact quotient over Z, if b divides a.
inline std::optional<PolyZ> exact_div_z(PolyZ a, const PolyZ& b) {
    if (a.size() < b.size()) return std::nullopt;
    PolyZ q(a.size() - b.size() + 1, Integer(0));
    for (std::size_t k = a.size(); k-- >= b.size();) {
        if (!mpz_divisible_p(a[k].get_mpz_t(), b.back().get_mpz_t())) return std::nullopt;
        Integer f = a[k] / b.back();
        q[k - (b.size() - 1)] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[k - (b.size() - 1) + i] -= f * b[i];
        if (k == b.size() - 1) break;
    }
    trim_z(a);
    if (!a.empty()) return std::nullopt;
    return q;
}

inline bool is_prime_small(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Irreducible factors of a primitive squarefree integer polynomial of degree >= 1.
inline std::vector<PolyZ> zassenhaus(PolyZ f) {
    const std::size_t n = f.size() - 1;
    if (n == 1) return {f};
    std::mt19937_64 rng(0x5eedULL);

    // choose the prime giving the fewest modular factors among a few candidates
    std::optional<ModP> best;
    std::vector<PolyP> best_factors;
    int tried = 0;
    for (u64 p = 3; tried < 6 && p < 100000; p += 2) {
        if (!is_prime_small(p)) continue;
        ModP F{p};
        if (F.reduce(f.back()) == 0) continue;
        PolyP fp;
        for (const auto& c : f) fp.push_back(F.reduce(c));
        F.trim(fp);
        if (F.gcd(fp, F.derivative(fp)).size() != 1) continue;
        ++tried;
        auto facs = factor_mod_p(F, F.monic(fp), rng);
        if (!best || facs.size() < best_factors.size()) {
            best = F;
            best_factors = std::move(facs);
        }
        if (best_factors.size() == 1) break;
    }
    if (best_factors.size() <= 1) return {f};

    // Mignotte-style coefficient bound for any factor, times |lc|
    Integer maxc(0);
    for (const auto& c : f) maxc = std::max(maxc, Integer(abs(c)));
    Integer bound = maxc * Integer(abs(f.back()));
    mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<mp_bitcnt_t>(n + 1));
    bound *= static_cast<unsigned long>(n + 2);
    Integer modulus;
    std::vector<PolyZ> lifted = hensel_lift(*best, f, best_factors, Integer(2) * bound + 1, modulus);

    std::vector<PolyZ> result;
    std::size_t size = 1;
    while (2 * size <= lifted.size()) {
        bool found = false;
        std::vector<std::size_t> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            PolyZ cand{f.back()};
            for (auto i : idx) cand = mul_z(cand, lifted[i], modulus);
            cand = symmetric(cand, modulus);
            Integer c = content_z(cand);
            if (sgn(c) != 0) {
                for (auto& x : cand) x /= c;
                if (auto q = exact_div_z(f, cand)) {
                    result.push_back(cand);
                    f = *q;
                    if (f.back() < 0)
                        for (auto& x : f) x = -x;
                    for (std::size_t k = idx.size(); k-- > 0;) lifted.erase(lifted.begin() + static_cast<long>(idx[k]));
                    found = true;
                    break;
                }
            }
            // next combination
            std::size_t k = size;
            while (k > 0 && idx[k - 1] == lifted.size() - size + (k - 1)) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++size;
    }
    if (f.size() > 1) result.push_back(f);
    return result;
}

}  // namespace detail

/// One irreducible factor and its multiplicity.
template <class P>
struct Factor {
    P factor;
    int multiplicity;
};

/// Monic irreducible factors of f over Q with multiplicities (constants omitted).
inline std::vector<Factor<Poly<Rational>>> factor_rational(const Poly<Rational>& f) {
    std::vector<Factor<Poly<Rational>>> out;
    auto parts = squarefree_decomposition(f);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& part = parts[i];
        if (part.degree() <= 0) continue;
        // clear denominators to a primitive integer polynomial
        Integer den(1);
        for (const auto& c : part.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
        detail::PolyZ z;
        for (const auto& c : part.coeffs()) z.push_back(Integer(c * den));
        Integer cont = detail::content_z(z);
        for (auto& x : z) x /= cont;
        for (auto& fz : detail::zassenhaus(z)) {
            std::vector<Rational> coeffs;
            for (const auto& c : fz) coeffs.emplace_back(c);
            out.push_back({Poly<Rational>(std::move(coeffs), Rational(0)).monic(), static_cast<int>(i) + 1});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
        return a.factor.to_string() < b.factor.to_string();
    });
    return out;
}

inline bool is_irreducible_rational(const Poly<Rational>& f) {
    if (f.degree() <= 0) return false;
    auto facs = factor_rational(f);
    return facs.size() == 1 && facs[0].multiplicity == 1;
}

}  // namespace polyembed

#endif  // POLYEMBED_FACTOR_Q_HPP
