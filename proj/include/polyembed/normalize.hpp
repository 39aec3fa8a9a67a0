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

#ifndef POLYEMBED_NORMALIZE_HPP
#define POLYEMBED_NORMALIZE_HPP

/*
 * Lüroth generators, integral closure and conductor for subrings
 * k ⊂ R ⊂ k[s] of transcendence degree one.
 *
 * The closure is O = k[theta] with k(theta) = frac(R). theta is recovered
 * from a Lüroth generator t0 = n/d by the bivariate condition
 *
 *     theta(x) - theta(y)  divisible by  n(x) d(y) - n(y) d(x),
 *
 * which is linear in the coefficients of theta once theta is normalized
 * monic with zero constant term.
 */

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "embed.hpp"
#include "linalg.hpp"

namespace polyembed {

using KRational = RationalFunction<FieldElement>;

namespace detail {

/// x^i y^j -> coefficient
using Bivariate = std::map<std::pair<int, int>, FieldElement>;

inline void bi_add(Bivariate& m, int i, int j, const FieldElement& c) {
    if (c.is_zero()) return;
    auto it = m.find({i, j});
    if (it == m.end()) {
        m.emplace(std::make_pair(i, j), c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) m.erase(it);
    }
}

/// n(x) d(y) - n(y) d(x)
inline Bivariate kernel_poly(const KPoly& n, const KPoly& d) {
    Bivariate k;
    for (int i = 0; i <= n.degree(); ++i)
        for (int j = 0; j <= d.degree(); ++j) {
            bi_add(k, i, j, n.coeff(i) * d.coeff(j));
            bi_add(k, j, i, -(n.coeff(i) * d.coeff(j)));
        }
    return k;
}

inline KPoly normalize_monic_zero(const KPoly& f) {
    KPoly g = f.monic();
    g.set_coeff(0, f.zero());
    return g;
}

inline FieldElement lower_to(const FieldElement& c, const TowerPtr& k) {
    auto x = c.tower()->lower(c, *k);
    if (!x) throw Error(ErrorKind::CoefficientsOutsideField, c.to_string() + " is not in " + k->describe());
    return *x;
}

inline KPoly lower_poly_to(const KPoly& f, const TowerPtr& k) {
    return f.map<FieldElement>([&](const FieldElement& c) { return lower_to(c, k); }, k->zero());
}

/// Writes f as P(t0)/Q(t0) over k, when possible, with deg P, deg Q <= deg f / deg t0.
inline std::optional<std::pair<KPoly, KPoly>> express_in(const KRational& f, const KRational& t0, const TowerPtr& k) {
    const int e = t0.degree();
    if (e <= 0 || f.degree() % e != 0) return std::nullopt;
    const int D = f.degree() / e;
    const KPoly& a = t0.num();
    const KPoly& b = t0.den();
    // columns: p_0..p_D then q_0..q_D
    std::vector<KPoly> cols;
    for (int j = 0; j <= D; ++j) cols.push_back(-(f.den() * a.pow(static_cast<unsigned>(j)) * b.pow(static_cast<unsigned>(D - j))));
    for (int j = 0; j <= D; ++j) cols.push_back(f.num() * a.pow(static_cast<unsigned>(j)) * b.pow(static_cast<unsigned>(D - j)));
    int rows = 0;
    for (const auto& c : cols) rows = std::max(rows, c.degree() + 1);
    std::vector<std::vector<FieldElement>> m(static_cast<std::size_t>(rows), std::vector<FieldElement>(cols.size(), k->zero()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i <= cols[j].degree(); ++i) m[static_cast<std::size_t>(i)][j] = k->lift(cols[j].coeff(i));
    auto sol = solve_linear(m, std::vector<FieldElement>(static_cast<std::size_t>(rows), k->zero()), cols.size(), k->zero());
    for (const auto& v : sol.nullspace) {
        KPoly p(std::vector<FieldElement>(v.begin(), v.begin() + D + 1), k->zero());
        KPoly q(std::vector<FieldElement>(v.begin() + D + 1, v.end()), k->zero());
        if (!q.is_zero()) return std::make_pair(p, q);
    }
    return std::nullopt;
}

/// Finds P, Q in k[X_1..X_m] of total degree <= cap with t0 = P(f)/Q(f), Q(f) != 0.
inline bool recover_from(const KRational& t0, const std::vector<KRational>& fs, const TowerPtr& k, int cap) {
    for (int B = 1; B <= cap; ++B) {
        std::vector<std::vector<int>> exps;
        std::vector<int> ones(fs.size(), 1), caps(fs.size(), B);
        try {
            exps = enumerate_exponents(ones, caps, B, 4000);
        } catch (const Error&) {
            return false;
        }
        std::vector<KRational> mons;
        for (const auto& e : exps) {
            KRational m(KPoly::constant(k->one()));
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int r = 0; r < e[i]; ++r) m = m * fs[i];
            mons.push_back(m);
        }
        // columns: c_alpha (Q part, multiplied by t0), then d_alpha (P part, negated)
        std::vector<KRational> terms;
        for (const auto& m : mons) terms.push_back(m * t0);
        for (const auto& m : mons) terms.push_back(KRational(-m.num(), m.den()));
        KPoly L = KPoly::constant(k->one());
        for (const auto& t : terms) L = (L * t.den()) / gcd(L, t.den());
        std::vector<KPoly> cols;
        int rows = 0;
        for (const auto& t : terms) {
            KPoly c = L * t.num() / t.den();
            rows = std::max(rows, c.degree() + 1);
            cols.push_back(c);
        }
        std::vector<std::vector<FieldElement>> m(static_cast<std::size_t>(rows), std::vector<FieldElement>(cols.size(), k->zero()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (int i = 0; i <= cols[j].degree(); ++i) m[static_cast<std::size_t>(i)][j] = cols[j].coeff(i);
        auto sol = solve_linear(m, std::vector<FieldElement>(static_cast<std::size_t>(rows), k->zero()), cols.size(), k->zero());
        for (const auto& v : sol.nullspace) {
            KRational q(KPoly(k->zero()));
            for (std::size_t a = 0; a < mons.size(); ++a)
                if (!v[a].is_zero()) q = q + KRational(mons[a].num().scaled(v[a]), mons[a].den());
            if (!q.is_zero()) return true;
        }
    }
    return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lüroth

struct LurothResult {
    KRational generator;  // t0, normalized when it is a polynomial
    int index = 0;        // [k(s) : k(t0)]
    int gcd_degree = 0;   // deg_x of the gcd polynomial
};

/*
 * gcd over k(y)[x] of n_i(x) d_i(y) - n_i(y) d_i(x); any coefficient of the
 * monic gcd outside k generates the field. Both inclusions are re-verified.
 */
inline LurothResult luroth_generator(const std::vector<KRational>& fs, const TowerPtr& k) {
    std::vector<KRational> nonconst;
    for (const auto& f : fs)
        if (!f.is_constant()) nonconst.push_back(f);
    if (nonconst.empty()) throw Error(ErrorKind::AllConstant, "every function is constant");
    const TowerPtr ky = Tower::extend_transcendental(k, "y");
    auto yp = [&](const KPoly& p) { return detail::make_frac(ky, p, KPoly::constant(k->one())); };
    KPoly g(ky->zero());
    for (const auto& f : nonconst) {
        const int m = f.degree();
        std::vector<FieldElement> c;
        for (int i = 0; i <= m; ++i) c.push_back(yp(f.den()) * ky->lift(f.num().coeff(i)) - yp(f.num()) * ky->lift(f.den().coeff(i)));
        g = gcd(g, KPoly(c, ky->zero()));
    }
    g = g.monic();
    LurothResult r;
    r.gcd_degree = g.degree();
    std::optional<KRational> t0;
    for (int j = g.degree() - 1; j >= 0 && !t0; --j) {
        const FieldElement& c = g.coeff(j);
        if (ky->lower(c, *k)) continue;
        t0 = KRational(detail::as_poly(c.frac_num(), k), detail::as_poly(c.frac_den(), k));
    }
    if (!t0) throw Error(ErrorKind::InconsistentSystem, "gcd polynomial has constant coefficients");
    if (t0->den().degree() == 0) t0 = KRational(detail::normalize_monic_zero(t0->num().scaled(t0->den().coeff(0).inverse())));
    r.generator = *t0;
    r.index = t0->degree();
    for (const auto& f : nonconst)
        if (!detail::express_in(f, *t0, k))
            throw Error(ErrorKind::InconsistentSystem, "function " + f.to_string("s") + " not recovered from the generator");
    int cap = 1;
    for (const auto& f : nonconst) cap = std::max(cap, f.degree());
    if (!detail::recover_from(*t0, nonconst, k, cap))
        throw Error(ErrorKind::InconsistentSystem, "generator not recovered from the functions");
    return r;
}

// ---------------------------------------------------------------------------
// Common right factors

/// Right factor of largest degree shared by all non-constant polynomials, normalized monic with h(0) = 0.
inline KPoly common_right_factor(const std::vector<KPoly>& fs) {
    int g = 0;
    const KPoly* first = nullptr;
    for (const auto& f : fs)
        if (f.degree() > 0) {
            g = std::gcd(g, f.degree());
            if (!first) first = &f;
        }
    if (!first) throw Error(ErrorKind::AllConstant, "every polynomial is constant");
    for (int e = g; e >= 1; --e) {
        if (g % e) continue;
        auto d = decompose_right(*first, e);
        if (!d) continue;
        bool ok = true;
        for (const auto& f : fs) {
            if (f.degree() <= 0) continue;
            auto o = decompose_right(f, e);
            if (!o || o->second != d->second) {
                ok = false;
                break;
            }
        }
        if (ok) return d->second;
    }
    throw Error(ErrorKind::InconsistentSystem, "no common right factor, not even of degree one");
}

// ---------------------------------------------------------------------------
// Normalization

struct NormalizationResult {
    TowerPtr field;                 // k
    KPoly theta;                    // in s, monic, theta(0) = 0
    int e = 0;                      // deg theta
    std::vector<KPoly> expressions;  // generator i = expressions[i](theta)
    KRational luroth;
};

namespace detail {

/// A witness that some coefficient lies outside k, preferably a ratio of leading coefficients.
inline std::string outside_witness(const Presentation& p) {
    if (p.ambient->transcendental_above(*p.coeff) || p.ambient->depth() > p.coeff->depth()) {
        CoefficientFieldReport rep = discover_coefficient_field(p, p.max_degree());
        if (!rep.generators.empty()) return rep.generators[0].to_string() + " from " + rep.sources[0];
    }
    for (const auto& g : p.gens)
        for (const auto& c : g.coeffs())
            if (!p.ambient->lower(p.ambient->lift(c), *p.coeff)) return c.to_string();
    return "";
}

}  // namespace detail

inline NormalizationResult normalize_curve(const Presentation& p) {
    p.validate();
    const TowerPtr& k = p.coeff;
    for (const auto& g : p.gens)
        for (const auto& c : g.coeffs())
            if (!p.ambient->lower(p.ambient->lift(c), *k)) {
                const std::string w = detail::outside_witness(p);
                throw WitnessError(ErrorKind::CoefficientsOutsideField,
                                   "generator coefficients lie outside " + k->describe() + ", so frac(R) is not a subfield of " +
                                       k->describe() + "(s)",
                                   w);
            }
    std::vector<KPoly> gens;
    std::vector<KRational> fs;
    for (const auto& g : p.gens) {
        gens.push_back(detail::lower_poly_to(g, k));
        fs.emplace_back(gens.back());
    }
    NormalizationResult res;
    res.field = k;
    LurothResult lr = luroth_generator(fs, k);
    res.luroth = lr.generator;
    const int e = lr.index;
    res.e = e;

    // theta = x^e + sum_{1<=j<e} th_j x^j; K_e(y) (theta(x) - theta(y)) = K(x, y)
    detail::Bivariate K = detail::kernel_poly(lr.generator.num(), lr.generator.den());
    std::map<int, FieldElement> Ke;
    for (const auto& [ij, c] : K)
        if (ij.first == e) Ke.emplace(ij.second, c);
    std::vector<detail::Bivariate> cols(static_cast<std::size_t>(std::max(e - 1, 0)));
    for (int j = 1; j < e; ++j)
        for (const auto& [l, c] : Ke) {
            detail::bi_add(cols[static_cast<std::size_t>(j - 1)], j, l, c);
            detail::bi_add(cols[static_cast<std::size_t>(j - 1)], 0, j + l, -c);
        }
    detail::Bivariate rhs = K;
    for (const auto& [l, c] : Ke) {
        detail::bi_add(rhs, e, l, -c);
        detail::bi_add(rhs, 0, e + l, c);
    }
    std::map<std::pair<int, int>, std::size_t> row_of;
    auto row = [&](const std::pair<int, int>& key) {
        auto it = row_of.find(key);
        if (it != row_of.end()) return it->second;
        const std::size_t r = row_of.size();
        row_of.emplace(key, r);
        return r;
    };
    for (const auto& col : cols)
        for (const auto& [key, c] : col) row(key);
    for (const auto& [key, c] : rhs) row(key);
    std::vector<std::vector<FieldElement>> A(row_of.size(), std::vector<FieldElement>(cols.size(), k->zero()));
    std::vector<FieldElement> b(row_of.size(), k->zero());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [key, c] : cols[j]) A[row_of.at(key)][j] = k->lift(c);
    for (const auto& [key, c] : rhs) b[row_of.at(key)] = k->lift(c);
    auto sol = solve_linear(A, b, cols.size(), k->zero());
    if (!sol.particular || !sol.nullspace.empty())
        throw Error(ErrorKind::InconsistentSystem, "theta system for the generator " + lr.generator.to_string("s") +
                                                       (sol.particular ? " is underdetermined" : " has no solution"));
    std::vector<FieldElement> th(static_cast<std::size_t>(e) + 1, k->zero());
    th[static_cast<std::size_t>(e)] = k->one();
    for (int j = 1; j < e; ++j) th[static_cast<std::size_t>(j)] = (*sol.particular)[static_cast<std::size_t>(j - 1)];
    res.theta = KPoly(th, k->zero());

    // exact recheck of the divisibility identity
    detail::Bivariate lhs;
    for (int j = 1; j <= e; ++j)
        for (const auto& [l, c] : Ke) {
            detail::bi_add(lhs, j, l, th[static_cast<std::size_t>(j)] * c);
            detail::bi_add(lhs, 0, j + l, -(th[static_cast<std::size_t>(j)] * c));
        }
    if (lhs != K) throw Error(ErrorKind::InconsistentSystem, "theta fails the divisibility identity");

    Presentation in_theta{k, k, {res.theta}};
    for (const auto& g : gens) {
        SubductionResult s = subduct(g, in_theta, std::max(g.degree(), e));
        if (!s.member || !s.verified) throw Error(ErrorKind::InconsistentSystem, "generator " + g.to_string("s") + " not in k[theta]");
        std::vector<FieldElement> c;
        for (const auto& [exps, x] : s.expression) {
            if (c.size() <= static_cast<std::size_t>(exps[0])) c.resize(static_cast<std::size_t>(exps[0]) + 1, k->zero());
            c[static_cast<std::size_t>(exps[0])] = x;
        }
        res.expressions.push_back(KPoly(c, k->zero()));
        if (res.expressions.back().compose(res.theta) != g)
            throw Error(ErrorKind::InconsistentSystem, "expression in theta does not reproduce the generator");
    }
    return res;
}

/// Every element of `elems` lies in k[gens] (subduction with exact re-expansion).
inline bool contains_all(const Presentation& p, const std::vector<KPoly>& elems) {
    int bound = 0;
    for (const auto& f : elems) bound = std::max(bound, f.degree());
    GradedPiece g = filtration_basis(p, std::max(bound, 0));
    for (const auto& f : elems) {
        SubductionResult s = subduct(f, g);
        if (!s.member || !s.verified) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Conductor

struct ConductorResult {
    bool exact = false;     // semigroup case
    int exponent = -1;      // c with conductor theta^c k[theta] (exact case)
    std::optional<KPoly> h;  // generator candidate, as a polynomial in theta
    std::vector<KPoly> basis;  // conductor elements of theta-degree <= bound, in theta
    int bound = 0;
    bool verified = false;  // every basis element re-checked in R by subduction
};

namespace detail {

inline bool is_monomial(const KPoly& f) {
    int terms = 0;
    for (const auto& c : f.coeffs())
        if (!c.is_zero()) ++terms;
    return terms == 1;
}

}  // namespace detail

/*
 * Exact in the semigroup case (every generator a monomial in theta). In
 * general: for n = 0, 1, ... the space of a with deg a <= n and
 * a theta^j in R for all j <= bound - n is computed from residues of theta^m
 * modulo the degree-bounded span of R; the first n carrying an element of
 * degree exactly n gives h.
 */
inline ConductorResult conductor(const NormalizationResult& norm, int bound) {
    const TowerPtr& k = norm.field;
    ConductorResult res;
    res.bound = bound;
    Presentation R{k, k, norm.expressions, "theta"};
    bool monomial = true;
    for (const auto& x : norm.expressions) monomial = monomial && (x.degree() <= 0 || detail::is_monomial(x));
    GradedPiece piece = filtration_basis(R, bound);
    auto theta_pow = [&](int m) { return KPoly::monomial(k->one(), m); };
    if (monomial) {
        std::vector<int> degs;
        for (const auto& x : norm.expressions) degs.push_back(x.degree());
        NumericalSemigroup sg = make_semigroup(degs);
        if (sg.d != 1) throw Error(ErrorKind::InconsistentSystem, "theta-degree semigroup has gcd " + std::to_string(sg.d));
        res.exact = true;
        res.exponent = sg.conductor;
        res.h = theta_pow(sg.conductor);
        for (int m = sg.conductor; m <= bound; ++m) res.basis.push_back(theta_pow(m));
    } else {
        std::vector<CoordVec> rho;
        for (int m = 0; m <= bound; ++m) rho.push_back(piece.echelon.reduce(*flatten(theta_pow(m), k->one(), k, k)).first);
        for (int n = 0; n <= bound && !res.h; ++n) {
            std::map<std::pair<int, Column>, std::size_t> row_of;
            std::vector<std::vector<FieldElement>> A;
            for (int j = 0; j + n <= bound; ++j)
                for (int i = 0; i <= n; ++i)
                    for (const auto& [col, x] : rho[static_cast<std::size_t>(i + j)]) {
                        auto key = std::make_pair(j, col);
                        auto it = row_of.find(key);
                        if (it == row_of.end()) {
                            it = row_of.emplace(key, A.size()).first;
                            A.emplace_back(static_cast<std::size_t>(n) + 1, k->zero());
                        }
                        A[it->second][static_cast<std::size_t>(i)] = x;
                    }
            auto sol = solve_linear(A, std::vector<FieldElement>(A.size(), k->zero()), static_cast<std::size_t>(n) + 1, k->zero());
            for (const auto& v : sol.nullspace)
                if (!v[static_cast<std::size_t>(n)].is_zero()) {
                    res.h = KPoly(v, k->zero()).monic();
                    break;
                }
        }
        if (res.h)
            for (int j = 0; res.h->degree() + j <= bound; ++j) res.basis.push_back(*res.h * theta_pow(j));
    }
    res.verified = true;
    for (const auto& a : res.basis) {
        SubductionResult s = subduct(a, piece);
        res.verified = res.verified && s.member && s.verified;
    }
    return res;
}

/// Bounded check of C(R[x]) = C(R) k[theta][x] at bidegree (bound, bound).
struct PolynomialExtensionCheck {
    int exponent = 0;
    int bound = 0;
    bool contains = false;       // theta^c k[theta][x] lies in R[x] through the bound
    bool smaller_fails = false;  // theta^(c-1) does not (vacuous when c = 0)
    std::string witness;         // a monomial theta^(c-1+a) x^b outside R[x]
};

inline PolynomialExtensionCheck polynomial_extension_check(const NormalizationResult& norm, int exponent, int bound) {
    const TowerPtr& k = norm.field;
    PolynomialExtensionCheck out;
    out.exponent = exponent;
    out.bound = bound;
    GradedPiece piece = filtration_basis(Presentation{k, k, norm.expressions, "theta"}, bound);
    // R[x] through bidegree (bound, bound): rows of R times x^b; columns (x-degree, theta-degree)
    using Key = std::pair<int, int>;
    SparseEchelon<Key, FieldElement> ech;
    int tag = 0;
    for (int b = 0; b <= bound; ++b)
        for (const auto& [pivot, row] : piece.echelon.rows()) {
            std::map<Key, FieldElement> v;
            for (const auto& [col, x] : row.v) v.emplace(Key{b, col.sdeg}, x);
            ech.insert(std::move(v), tag++, k->one());
        }
    auto in_rx = [&](int a, int b) {
        std::map<Key, FieldElement> v{{Key{b, a}, k->one()}};
        return ech.reduce(std::move(v)).first.empty();
    };
    out.contains = true;
    for (int a = exponent; a <= bound; ++a)
        for (int b = 0; b <= bound; ++b) out.contains = out.contains && in_rx(a, b);
    if (exponent == 0) {
        out.smaller_fails = true;
    } else {
        for (int a = exponent - 1; a <= bound && !out.smaller_fails; ++a)
            for (int b = 0; b <= bound && !out.smaller_fails; ++b)
                if (!in_rx(a, b)) {
                    out.smaller_fails = true;
                    auto pw = [](const char* v, int n) { return n == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(n); };
                    if (a == 0 && b == 0) out.witness = "1";
                    else if (a == 0) out.witness = pw("x", b);
                    else out.witness = b == 0 ? pw("theta", a) : pw("theta", a) + "*" + pw("x", b);
                }
    }
    return out;
}

}  // namespace polyembed

#endif  // POLYEMBED_NORMALIZE_HPP
