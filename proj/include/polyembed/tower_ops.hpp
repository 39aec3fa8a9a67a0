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

#ifndef POLYEMBED_TOWER_OPS_HPP
#define POLYEMBED_TOWER_OPS_HPP

/*
 * Checked tower construction: factoring over number-field towers, exact
 * p-th power tests, adjunction of e-th roots, and specialization of the
 * transcendental generator.
 *
 * Factoring over a number-field tower uses Trager's norm method: shift
 * f(x - k*a) until its norm down one step is squarefree, factor the norm
 * one level lower (recursively, ending in Zassenhaus over Q), and pull the
 * factors back by gcd.
 */

#include <numeric>
#include <string>
#include <vector>

#include "factor_q.hpp"
#include "field.hpp"

namespace polyembed {

namespace detail {

inline Poly<Rational> to_rational_poly(const KPoly& f) {
    std::vector<Rational> c;
    for (const auto& x : f.coeffs()) {
        auto q = Tower::rationals();
        auto low = x.tower()->lower(x, *q);
        if (!low) throw Error(ErrorKind::PreconditionFailed, "coefficient " + x.to_string() + " is not rational");
        c.push_back(low->rational());
    }
    return Poly<Rational>(std::move(c), Rational(0));
}

inline KPoly from_rational_poly(const Poly<Rational>& f, const TowerPtr& t) {
    return f.map<FieldElement>([&](const Rational& q) { return t->from_rational(q); }, t->zero());
}

inline KPoly lift_poly(const KPoly& f, const TowerPtr& t) {
    return f.map<FieldElement>([&](const FieldElement& c) { return t->lift(c); }, t->zero());
}

/// Rewrites f over `below` when every coefficient lies there.
inline std::optional<KPoly> lower_poly(const KPoly& f, const TowerPtr& from, const TowerPtr& below) {
    std::vector<FieldElement> c;
    for (const auto& x : f.coeffs()) {
        auto low = from->lower(x, *below);
        if (!low) return std::nullopt;
        c.push_back(*low);
    }
    return KPoly(std::move(c), below->zero());
}

/// N_{T/parent}(b) for b in an algebraic node T.
inline FieldElement element_norm(const FieldElement& b, const Tower& t) {
    const TowerPtr& p = t.parent();
    if (b.is_zero()) return p->zero();
    return resultant(t.minpoly(), KPoly(t.lift(b).alg_coeffs(), p->zero()));
}

/// Norm of a polynomial over an algebraic node down to its parent, by interpolation.
inline KPoly poly_norm(const KPoly& g, const TowerPtr& t) {
    const TowerPtr& p = t->parent();
    const int n = t->step_degree() * g.degree();
    std::vector<FieldElement> xs, ys;
    for (int j = 0; j <= n; ++j) {
        FieldElement x = p->from_rational(Rational(j));
        xs.push_back(x);
        ys.push_back(element_norm(g.eval(t->lift(x)), *t));
    }
    return interpolate(xs, ys);
}

}  // namespace detail

std::vector<Factor<KPoly>> factor_over(const KPoly& f);

namespace detail {

inline std::vector<KPoly> factor_squarefree_over(const KPoly& g) {
    const TowerPtr t = g.zero().tower();
    if (g.degree() <= 1) return {g.monic()};
    if (t->kind() == StepKind::Base) {
        std::vector<KPoly> out;
        for (const auto& fac : factor_rational(to_rational_poly(g))) out.push_back(from_rational_poly(fac.factor, t));
        return out;
    }
    if (t->kind() != StepKind::Algebraic || t->has_transcendental())
        throw Error(ErrorKind::UnsupportedTowerShape, "factoring is only available over number-field towers, not " + t->describe());
    const FieldElement a = t->generator();
    const KPoly x = KPoly::variable(t->one());
    for (long k = 0;; k = (k <= 0) ? 1 - k : -k) {
        // g(x - k a)
        KPoly shifted = g.compose(x - KPoly::constant(a * FieldElement(k)));
        KPoly norm = poly_norm(shifted, t);
        if (!is_squarefree(norm)) {
            if (k > 64) throw Error(ErrorKind::InconsistentSystem, "no squarefree norm shift found");
            continue;
        }
        auto low = factor_over(norm);
        if (low.size() <= 1) return {g.monic()};
        std::vector<KPoly> out;
        KPoly back = x + KPoly::constant(a * FieldElement(k));
        for (const auto& h : low) {
            KPoly d = gcd(shifted, lift_poly(h.factor, t));
            if (d.degree() > 0) out.push_back(d.compose(back).monic());
        }
        return out;
    }
}

}  // namespace detail

/// Monic irreducible factors with multiplicities over a number-field tower.
inline std::vector<Factor<KPoly>> factor_over(const KPoly& f) {
    std::vector<Factor<KPoly>> out;
    auto parts = squarefree_decomposition(f);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].degree() <= 0) continue;
        for (auto& h : detail::factor_squarefree_over(parts[i])) out.push_back({h, static_cast<int>(i) + 1});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
        return a.factor.to_string() < b.factor.to_string();
    });
    return out;
}

// ---------------------------------------------------------------------------
// Power tests

namespace detail {

inline std::vector<int> prime_factors(int n) {
    std::vector<int> ps;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) ps.push_back(n);
    return ps;
}

/// p-th root of a monic polynomial over a field, if it is a p-th power.
inline std::optional<KPoly> monic_poly_root(const KPoly& f, int p) {
    if (f.degree() == 0) return f;
    auto parts = squarefree_decomposition(f);
    KPoly root = KPoly::constant(f.one());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].degree() <= 0) continue;
        const int mult = static_cast<int>(i) + 1;
        if (mult % p != 0) return std::nullopt;
        root = root * parts[i].pow(static_cast<unsigned>(mult / p));
    }
    return root;
}

}  // namespace detail

/// Returns b with b^p = x when x is a p-th power in its own field.
inline std::optional<FieldElement> pth_root(const FieldElement& x, int p) {
    const TowerPtr& t = x.tower();
    if (x.is_zero()) return x;
    if (t->kind() == StepKind::Base) {
        auto r = rational_root(x.rational(), static_cast<unsigned long>(p));
        if (!r) return std::nullopt;
        return FieldElement(*r);
    }
    if (!t->has_transcendental()) {
        KPoly b = KPoly::monomial(t->one(), p) - KPoly::constant(x);
        for (const auto& fac : factor_over(b))
            if (fac.factor.degree() == 1) return -fac.factor.coeff(0);
        return std::nullopt;
    }
    if (t->kind() == StepKind::Transcendental) {
        const TowerPtr& below = t->parent();
        KPoly num(x.frac_num(), below->zero()), den(x.frac_den(), below->zero());
        auto lc_root = pth_root(num.lead(), p);
        if (!lc_root) return std::nullopt;
        auto nr = detail::monic_poly_root(num.monic(), p);
        auto dr = detail::monic_poly_root(den, p);
        if (!nr || !dr) return std::nullopt;
        FieldElement r = detail::make_frac(t, nr->scaled(*lc_root), *dr);
        if (r.pow(p) != x) throw Error(ErrorKind::InconsistentSystem, "power root check failed");
        return r;
    }
    throw Error(ErrorKind::UnsupportedTowerShape,
                "power test over an algebraic extension of a function field (" + t->describe() + ")");
}

/*
 * Irreducibility of x^e - k by Capelli's criterion: irreducible iff k is not
 * a p-th power for any prime p | e, and k is not -4b^4 when 4 | e.
 * Returns a proper factor as witness when reducible.
 */
inline std::optional<KPoly> binomial_factor(const FieldElement& k, int e) {
    const TowerPtr& t = k.tower();
    for (int p : detail::prime_factors(e))
        if (auto b = pth_root(k, p))
            return KPoly::monomial(t->one(), e / p) - KPoly::constant(*b);
    if (e % 4 == 0)
        if (auto b = pth_root(k / t->from_rational(-4), 4)) {
            KPoly f = KPoly::monomial(t->one(), e / 2) + KPoly::monomial(*b * FieldElement(2), e / 4) +
                      KPoly::constant(*b * *b * FieldElement(2));
            return f;
        }
    return std::nullopt;
}

namespace detail {

/// Recognizes x^e - k with k in the field.
inline std::optional<FieldElement> as_binomial(const KPoly& f) {
    for (int i = 1; i < f.degree(); ++i)
        if (!f.coeff(i).is_zero()) return std::nullopt;
    if (!f.lead().is_one() || f.coeff(0).is_zero()) return std::nullopt;
    return -f.coeff(0);
}

}  // namespace detail

/// A proper factor of f over its tower, or none when f is irreducible.
inline std::optional<KPoly> proper_factor(const KPoly& f) {
    const TowerPtr t = f.zero().tower();
    if (f.degree() <= 1) return std::nullopt;
    if (!t->has_transcendental()) {
        auto facs = factor_over(f);
        if (facs.size() == 1 && facs[0].multiplicity == 1) return std::nullopt;
        return facs[0].factor;
    }
    if (auto k = detail::as_binomial(f)) return binomial_factor(*k, f.degree());
    // constants below a top transcendental step: k is algebraically closed in k(u)
    if (t->kind() == StepKind::Transcendental)
        if (auto low = detail::lower_poly(f, t, t->parent())) {
            auto w = proper_factor(*low);
            if (!w) return std::nullopt;
            return detail::lift_poly(*w, t);
        }
    throw Error(ErrorKind::UnsupportedTowerShape,
                "irreducibility test over " + t->describe() + " is limited to binomials and constant polynomials");
}

/// Adjoins a root of `minpoly` after checking that it is monic, of degree >= 2, and irreducible.
inline TowerPtr adjoin_algebraic(const TowerPtr& tower, const std::string& name, const KPoly& minpoly) {
    KPoly m = detail::lift_poly(minpoly, tower);
    if (m.degree() < 2) throw Error(ErrorKind::ReducibleMinimalPolynomial, "minimal polynomial must have degree >= 2");
    if (!m.lead().is_one()) throw Error(ErrorKind::ReducibleMinimalPolynomial, "minimal polynomial must be monic");
    if (auto w = proper_factor(m))
        throw WitnessError(ErrorKind::ReducibleMinimalPolynomial, m.to_string(name) + " is reducible over " + tower->describe(),
                           w->to_string(name));
    return Tower::extend_algebraic(tower, name, m);
}

// ---------------------------------------------------------------------------
// e-th roots

/// One adjunction recorded for certificates.
struct Adjunction {
    std::string name;
    std::string kind;      // "algebraic" or "reparametrization"
    std::string relation;  // minimal polynomial, or the substitution for the old generator
};

struct RootExtension {
    TowerPtr field;           // F
    FieldElement root;        // c in F with c^e = embedding(k)
    TowerMap embedding;       // original tower -> F
    int degree = 1;           // [F : original tower]
    bool reducible_binomial = false;
    std::vector<Adjunction> adjunctions;
};

namespace detail {

inline long ext_euclid(long a, long b, long& x, long& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return a >= 0 ? a : -a;
    }
    long x1 = 0, y1 = 0;
    long g = ext_euclid(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

/// k = g * u^m with g constant, for k in a top-level function field.
inline std::optional<std::pair<FieldElement, int>> as_monomial(const FieldElement& k) {
    const TowerPtr& t = k.tower();
    if (t->kind() != StepKind::Transcendental) return std::nullopt;
    const auto& num = k.frac_num();
    const auto& den = k.frac_den();
    int mn = -1, md = -1;
    for (std::size_t i = 0; i < num.size(); ++i)
        if (!num[i].is_zero()) {
            if (mn >= 0) return std::nullopt;
            mn = static_cast<int>(i);
        }
    for (std::size_t i = 0; i < den.size(); ++i)
        if (!den[i].is_zero()) {
            if (md >= 0) return std::nullopt;
            md = static_cast<int>(i);
        }
    return std::make_pair(num[static_cast<std::size_t>(mn)], mn - md);
}

}  // namespace detail

/*
 * Returns a field F with an embedding of k's tower and c in F, c^e = k.
 * Perfect-power parts are peeled first, so the final adjunction is an
 * irreducible binomial; when k = g*u^m over Q(u) with gcd(m, e) = 1 the
 * function field is reparametrized (u = g^-a v^e) instead of extended,
 * unless reparam_name is empty.
 */
inline RootExtension eth_root_extend(const FieldElement& k, int e, const std::string& name = "c",
                                     const std::string& reparam_name = "v") {
    if (k.is_zero()) throw Error(ErrorKind::PreconditionFailed, "root of zero requested");
    if (e < 1) throw Error(ErrorKind::PreconditionFailed, "root index must be positive");
    RootExtension r;
    const TowerPtr base = k.tower();
    r.field = base;
    r.embedding = TowerMap::inclusion(base, base);
    FieldElement cur = k;
    int E = e;
    bool root_set = false;
    auto extend_by = [&](const TowerPtr& nf, const TowerMap& step) {
        r.embedding = r.embedding.then(step);
        cur = step(cur);
        r.field = nf;
    };
    while (E > 1) {
        bool reduced = false;
        for (int p : detail::prime_factors(E))
            if (auto b = pth_root(cur, p)) {
                cur = *b;
                E /= p;
                reduced = true;
                break;
            }
        if (reduced) continue;
        if (E % 4 == 0) {
            if (auto b = pth_root(cur / r.field->from_rational(-4), 4)) {
                // x^4 + 4b^4 = (x^2 - 2bx + 2b^2)(x^2 + 2bx + 2b^2); b(1+i) is a root
                FieldElement i_elem;
                if (auto sq = pth_root(r.field->from_rational(-1), 2)) {
                    i_elem = *sq;
                } else {
                    KPoly m = KPoly::monomial(r.field->one(), 2) + KPoly::constant(r.field->one());
                    TowerPtr nf = Tower::extend_algebraic(r.field, "i", m);
                    r.adjunctions.push_back({"i", "algebraic", "i^2 + 1"});
                    r.degree *= 2;
                    FieldElement bl = nf->lift(*b);
                    extend_by(nf, TowerMap::inclusion(r.embedding.target(), nf));
                    b = bl;
                    i_elem = nf->generator();
                }
                cur = *b * (r.field->one() + i_elem);
                E /= 4;
                continue;
            }
        }
        // x^E - cur is irreducible now
        if (auto mono = detail::as_monomial(cur); !reparam_name.empty() && mono && mono->second != 0) {
            long a = 0, bb = 0;
            const long m = mono->second;
            if (detail::ext_euclid(m, E, a, bb) == 1) {
                const FieldElement& g = mono->first;
                const TowerPtr& below = r.field->parent();
                TowerPtr nf = Tower::extend_transcendental(below, reparam_name);
                FieldElement v = nf->generator();
                FieldElement gl = nf->lift(g);
                std::vector<FieldElement> images;
                for (int d = 1; d < r.field->depth(); ++d) images.push_back(nf->lift(below->at_depth(d)->generator()));
                FieldElement u_image = gl.pow(-a) * v.pow(E);
                images.push_back(u_image);
                TowerMap phi(r.field, nf, images);
                r.adjunctions.push_back({reparam_name, "reparametrization", r.field->name() + " = " + u_image.to_string()});
                extend_by(nf, phi);
                r.root = gl.pow(bb) * v.pow(m);
                r.degree *= E;
                root_set = true;
                if (r.root.pow(E) != cur) throw Error(ErrorKind::InconsistentSystem, "reparametrized root check failed");
                E = 1;
                break;
            }
        }
        KPoly m = KPoly::monomial(r.field->one(), E) - KPoly::constant(cur);
        TowerPtr nf = Tower::extend_algebraic(r.field, name, m);
        r.adjunctions.push_back({name, "algebraic", m.to_string(name)});
        extend_by(nf, TowerMap::inclusion(r.field, nf));
        r.root = nf->generator();
        root_set = true;
        r.degree *= E;
        E = 1;
    }
    if (!root_set) r.root = cur;
    r.reducible_binomial = r.degree > 1 && r.degree < e;
    if (r.root.pow(e) != r.embedding(k))
        throw Error(ErrorKind::InconsistentSystem, "root witness c^e - k did not vanish");
    return r;
}

// ---------------------------------------------------------------------------
// Specialization

/// The evaluation map u -> u0 on a tower whose top step is transcendental.
inline TowerMap specialize(const TowerPtr& tower, const FieldElement& u0) {
    TowerPtr tn = tower->transcendental_node();
    if (!tn) throw Error(ErrorKind::PreconditionFailed, "tower " + tower->describe() + " has no transcendental generator");
    if (tn != tower)
        throw Error(ErrorKind::UnsupportedTowerShape, "specialization with algebraic steps above the transcendental generator");
    const TowerPtr& below = tn->parent();
    std::vector<FieldElement> images;
    for (int d = 1; d < tn->depth(); ++d) images.push_back(below->lift(below->at_depth(d)->generator()));
    images.push_back(below->lift(u0));
    return TowerMap(tower, below, std::move(images));
}

/// Applies a partial homomorphism to every coefficient; the degree may drop.
inline KPoly map_coefficients(const KPoly& f, const TowerMap& phi) { return phi.apply_poly(f); }

}  // namespace polyembed

#endif  // POLYEMBED_TOWER_OPS_HPP
