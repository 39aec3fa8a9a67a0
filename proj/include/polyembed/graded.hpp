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

#ifndef POLYEMBED_GRADED_HPP
#define POLYEMBED_GRADED_HPP

/*
 * Graded linear algebra for subalgebras R = k[w_1, ..., w_m] of K[s].
 *
 * All monomials in the generators of nominal degree <= N are expanded and
 * written in k-coordinates: K is viewed as a k-space through the power
 * products of the generators above k (u-exponents included once common
 * denominators are cleared). Columns are ordered by s-degree, highest first,
 * so the echelon form exposes leading forms directly.
 */

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "field.hpp"
#include "linalg.hpp"

namespace polyembed {

/// A coordinate of K[s] over k: s-degree and exponents of the tower generators above k.
struct Column {
    int sdeg = 0;
    std::vector<int> key;

    friend bool operator<(const Column& a, const Column& b) {
        if (a.sdeg != b.sdeg) return a.sdeg > b.sdeg;
        return a.key < b.key;
    }
    friend bool operator==(const Column& a, const Column& b) { return a.sdeg == b.sdeg && a.key == b.key; }
};

using CoordVec = std::map<Column, FieldElement>;
using Echelon = SparseEchelon<Column, FieldElement>;
/// Formal polynomial in the generators: exponent vector -> coefficient in k.
using GenExpression = std::map<std::vector<int>, FieldElement>;

struct Presentation {
    TowerPtr ambient;  // K
    TowerPtr coeff;    // k, an ancestor of K (or K itself)
    std::vector<KPoly> gens;
    std::string var = "s";

    void validate() const {
        if (!ambient || !coeff) throw Error(ErrorKind::PreconditionFailed, "presentation without fields");
        if (!coeff->is_ancestor_of(*ambient))
            throw Error(ErrorKind::PreconditionFailed, coeff->describe() + " is not a subfield of " + ambient->describe());
        if (gens.empty()) throw Error(ErrorKind::PreconditionFailed, "no generators");
        bool positive = false;
        for (const auto& g : gens) {
            if (g.is_zero()) throw Error(ErrorKind::PreconditionFailed, "zero generator");
            if (g.degree() > 0) positive = true;
        }
        if (!positive) throw Error(ErrorKind::PreconditionFailed, "every generator is constant, so R lies in K");
    }

    int max_degree() const {
        int d = 0;
        for (const auto& g : gens) d = std::max(d, g.degree());
        return d;
    }
};

struct GradedOptions {
    long monomial_limit = 20000;
    int u_cap = -1;  // < 0: 2 * bound
};

struct Monomial {
    std::vector<int> exps;
    int nominal = 0;
    KPoly value;
};

struct Relation {
    int nominal = 0;
    GenExpression expr;
};

/// The value of a coordinate key: the product of tower generators above k.
inline FieldElement key_value(const std::vector<int>& key, const Tower& coeff, const TowerPtr& ambient) {
    FieldElement v = ambient->one();
    for (std::size_t i = 0; i < key.size(); ++i)
        if (key[i] != 0) v = v * ambient->at_depth(coeff.depth() + 1 + static_cast<int>(i))->generator().pow(key[i]);
    return v;
}

/// Coordinates of f * d; none if f * d still has denominators over k.
inline std::optional<CoordVec> flatten(const KPoly& f, const FieldElement& d, const TowerPtr& coeff, const TowerPtr& ambient) {
    CoordVec out;
    for (int n = 0; n <= f.degree(); ++n) {
        if (f.coeff(n).is_zero()) continue;
        FieldElement c = ambient->lift(f.coeff(n)) * d;
        std::vector<KPoly> dens;
        collect_denominators(c, *ambient, dens);
        if (!dens.empty() && ambient->transcendental_above(*coeff)) return std::nullopt;
        for (auto& [key, v] : coordinates(c, *coeff, *ambient)) out.emplace(Column{n, key}, v);
    }
    return out;
}

struct GradedPiece {
    int bound = 0;
    TowerPtr ambient, coeff;
    std::vector<KPoly> gens;
    std::vector<Monomial> monomials;
    FieldElement denominator;  // D with D * R free of denominators over k
    int u_cap = 0;
    int u_max = 0;             // largest u-exponent met (0 without a transcendental step above k)
    Echelon echelon;           // reduced row echelon form of span(monomials)
    std::vector<int> rank_by_nominal;  // [n]: rank of monomials of nominal degree <= n
    std::vector<int> dim_by_degree;    // [n]: dim of span ∩ K[s]_{<=n}
    std::vector<Relation> relations;   // k-linear relations among monomials
    std::vector<std::vector<FieldElement>> leading_space;  // [n]: basis of Λ_n in K

    /// The element of K[s] built by a tag combination.
    KPoly element(const Echelon::Expr& expr) const {
        KPoly acc(ambient->zero());
        for (const auto& [tag, c] : expr) acc += monomials[static_cast<std::size_t>(tag)].value.scaled(ambient->lift(c));
        return acc;
    }

    GenExpression to_gen_expression(const Echelon::Expr& expr) const {
        GenExpression out;
        for (const auto& [tag, c] : expr) out.emplace(monomials[static_cast<std::size_t>(tag)].exps, c);
        return out;
    }

    std::vector<int> realized_degrees() const {
        std::vector<int> out;
        for (int n = 0; n <= bound; ++n)
            if (dim_by_degree[static_cast<std::size_t>(n)] > (n == 0 ? 0 : dim_by_degree[static_cast<std::size_t>(n) - 1]))
                out.push_back(n);
        return out;
    }
};

/// Evaluates a formal polynomial in the generators.
inline KPoly evaluate(const GenExpression& expr, const std::vector<KPoly>& gens, const TowerPtr& ambient) {
    KPoly acc(ambient->zero());
    for (const auto& [exps, c] : expr) {
        KPoly term = KPoly::constant(ambient->lift(c));
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] > 0) term = term * gens[i].pow(static_cast<unsigned>(exps[i]));
        acc += term;
    }
    return acc;
}

inline std::string expression_to_string(const GenExpression& expr, const std::vector<std::string>& names) {
    if (expr.empty()) return "0";
    std::string out;
    for (auto it = expr.rbegin(); it != expr.rend(); ++it) {
        std::string mono;
        for (std::size_t i = 0; i < it->first.size(); ++i) {
            if (it->first[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += names[i];
            if (it->first[i] > 1) mono += "^" + std::to_string(it->first[i]);
        }
        std::string c = it->second.to_string();
        bool neg = c[0] == '-' && c.find_first_of("+-", 1) == std::string::npos;
        if (neg) c = c.substr(1);
        if (c.find_first_of("+-", 1) != std::string::npos) c = "(" + c + ")";
        std::string term = mono.empty() ? c : (c == "1" ? mono : c + "*" + mono);
        if (out.empty()) out = neg ? "-" + term : term;
        else out += (neg ? " - " : " + ") + term;
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<int>> enumerate_exponents(const std::vector<int>& degs, const std::vector<int>& caps, int bound,
                                                          long limit) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(degs.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i == degs.size()) {
            out.push_back(cur);
            if (static_cast<long>(out.size()) > limit)
                throw Error(ErrorKind::BoundTooLarge, "more than " + std::to_string(limit) + " monomials below degree " +
                                                          std::to_string(bound) + "; lower the bound");
            return;
        }
        for (int e = 0;; ++e) {
            if (degs[i] > 0 && e * degs[i] > remaining) break;
            if (degs[i] == 0 && e > caps[i]) break;
            cur[i] = e;
            self(self, i + 1, remaining - e * degs[i]);
        }
        cur[i] = 0;
    };
    rec(rec, 0, bound);
    auto nominal = [&](const std::vector<int>& e) {
        int n = 0;
        for (std::size_t i = 0; i < e.size(); ++i) n += e[i] * degs[i];
        return n;
    };
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        int na = nominal(a), nb = nominal(b);
        if (na != nb) return na < nb;
        return a < b;
    });
    return out;
}

}  // namespace detail

/// Canonical bases of R ∩ K[s]_{<=n} (as spans of generator monomials of nominal degree <= N).
inline GradedPiece filtration_basis(const Presentation& p, int bound, const GradedOptions& opts = {}) {
    p.validate();
    GradedPiece g;
    g.bound = bound;
    g.ambient = p.ambient;
    g.coeff = p.coeff;
    for (const auto& x : p.gens)
        g.gens.push_back(x.map<FieldElement>([&](const FieldElement& c) { return p.ambient->lift(c); }, p.ambient->zero()));
    g.u_cap = opts.u_cap >= 0 ? opts.u_cap : 2 * bound;

    std::vector<int> degs, caps;
    const bool u_above = p.ambient->transcendental_above(*p.coeff);
    for (const auto& x : g.gens) {
        degs.push_back(x.degree());
        int cap = 0;
        if (x.degree() == 0) {
            if (u_above && !derivative_u(x.coeff(0)).is_zero())
                throw Error(ErrorKind::PreconditionFailed,
                            "degree-0 generator " + x.coeff(0).to_string() + " is transcendental over " + p.coeff->describe());
            cap = p.ambient->algebraic_degree_over(*p.coeff) - 1;
        }
        caps.push_back(cap);
    }
    auto exps = detail::enumerate_exponents(degs, caps, bound, opts.monomial_limit);

    std::map<std::vector<int>, std::size_t> index;
    for (const auto& e : exps) {
        Monomial m;
        m.exps = e;
        for (std::size_t i = 0; i < e.size(); ++i) m.nominal += e[i] * degs[i];
        std::size_t first = 0;
        while (first < e.size() && e[first] == 0) ++first;
        if (first == e.size()) {
            m.value = KPoly::constant(p.ambient->one());
        } else {
            std::vector<int> prev = e;
            --prev[first];
            m.value = g.monomials[index.at(prev)].value * g.gens[first];
        }
        index.emplace(e, g.monomials.size());
        g.monomials.push_back(std::move(m));
    }

    g.denominator = p.ambient->one();
    if (u_above) {
        std::vector<FieldElement> cs;
        for (const auto& m : g.monomials)
            for (const auto& c : m.value.coeffs()) cs.push_back(c);
        g.denominator = common_denominator(cs, p.ambient);
    }
    int u_index = -1;
    if (u_above) u_index = p.ambient->transcendental_node()->depth() - p.coeff->depth() - 1;

    g.rank_by_nominal.assign(static_cast<std::size_t>(bound) + 1, 0);
    const FieldElement one = p.coeff->one();
    for (std::size_t t = 0; t < g.monomials.size(); ++t) {
        const Monomial& m = g.monomials[t];
        auto v = flatten(m.value, g.denominator, p.coeff, p.ambient);
        if (!v) throw Error(ErrorKind::InconsistentSystem, "denominator clearing failed");
        if (u_index >= 0)
            for (const auto& [col, x] : *v) g.u_max = std::max(g.u_max, col.key[static_cast<std::size_t>(u_index)]);
        if (g.u_max > g.u_cap)
            throw Error(ErrorKind::BoundTooLarge, "u-degree " + std::to_string(g.u_max) + " exceeds the cap " + std::to_string(g.u_cap));
        if (auto rel = g.echelon.insert(std::move(*v), static_cast<int>(t), one))
            g.relations.push_back({m.nominal, g.to_gen_expression(*rel)});
        for (int n = m.nominal; n <= bound; ++n) g.rank_by_nominal[static_cast<std::size_t>(n)] = static_cast<int>(g.echelon.rank());
    }
    g.echelon.to_rref();

    g.dim_by_degree.assign(static_cast<std::size_t>(bound) + 1, 0);
    g.leading_space.assign(static_cast<std::size_t>(bound) + 1, {});
    const FieldElement dinv = g.denominator.inverse();
    for (const auto& [pivot, row] : g.echelon.rows()) {
        for (int n = pivot.sdeg; n <= bound; ++n) ++g.dim_by_degree[static_cast<std::size_t>(n)];
        FieldElement lc = p.ambient->zero();
        for (const auto& [col, x] : row.v) {
            if (col.sdeg != pivot.sdeg) break;
            lc = lc + x * key_value(col.key, *p.coeff, p.ambient);
        }
        g.leading_space[static_cast<std::size_t>(pivot.sdeg)].push_back(lc * dinv);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Subduction

struct SubductionResult {
    KPoly remainder;
    GenExpression expression;  // f - remainder = expression(w)
    bool member = false;
    bool verified = false;     // expression re-expanded exactly
};

/*
 * Cancels leading forms top-down with the canonical basis rows. Stops at the
 * first degree whose leading form is not in the span; f - remainder is then
 * the explicit combination returned.
 */
inline SubductionResult subduct(const KPoly& f0, const GradedPiece& g) {
    SubductionResult r;
    KPoly f = f0.map<FieldElement>([&](const FieldElement& c) { return g.ambient->lift(c); }, g.ambient->zero());
    r.remainder = f;
    auto vec = flatten(f, g.denominator, g.coeff, g.ambient);
    if (!vec) return r;
    Echelon::Expr expr;
    CoordVec v = std::move(*vec);
    while (!v.empty()) {
        const int n = v.begin()->first.sdeg;
        std::vector<Column> block;
        for (const auto& [col, x] : v) {
            if (col.sdeg != n) break;
            block.push_back(col);
        }
        for (const auto& col : block) {
            auto hit = v.find(col);
            if (hit == v.end()) continue;
            auto row = g.echelon.rows().find(col);
            if (row == g.echelon.rows().end()) continue;
            const FieldElement c = hit->second;
            Echelon::axpy(v, row->second.v, c);
            Echelon::axpy(expr, row->second.expr, -c);
        }
        if (!v.empty() && v.begin()->first.sdeg == n) break;
    }
    // accumulate by exponent vector
    for (const auto& [tag, c] : expr) {
        const auto& e = g.monomials[static_cast<std::size_t>(tag)].exps;
        auto it = r.expression.find(e);
        if (it == r.expression.end()) r.expression.emplace(e, c);
        else it->second = it->second + c;
    }
    for (auto it = r.expression.begin(); it != r.expression.end();)
        it = it->second.is_zero() ? r.expression.erase(it) : std::next(it);
    r.remainder = f - evaluate(r.expression, g.gens, g.ambient);
    auto check = flatten(r.remainder, g.denominator, g.coeff, g.ambient);
    r.verified = check && *check == v;
    r.member = r.remainder.is_zero();
    return r;
}

inline SubductionResult subduct(const KPoly& f, const Presentation& p, int bound, const GradedOptions& opts = {}) {
    if (f.degree() > bound) throw Error(ErrorKind::PreconditionFailed, "element degree exceeds the bound");
    return subduct(f, filtration_basis(p, bound, opts));
}

// ---------------------------------------------------------------------------
// Numerical semigroups

struct NumericalSemigroup {
    std::vector<int> generators;  // minimal
    int d = 0;                    // gcd
    int frobenius = -1;           // largest gap of the normalized semigroup (-1: none)
    int conductor = 0;            // frobenius + 1

    bool contains(int n) const {
        if (n == 0) return true;
        if (n < 0 || d == 0 || n % d != 0) return false;
        const int m = n / d;
        if (m > frobenius) return true;
        std::vector<bool> reach(static_cast<std::size_t>(m) + 1, false);
        reach[0] = true;
        for (int i = 1; i <= m; ++i)
            for (int g : generators)
                if (g / d <= i && reach[static_cast<std::size_t>(i - g / d)]) {
                    reach[static_cast<std::size_t>(i)] = true;
                    break;
                }
        return reach[static_cast<std::size_t>(m)];
    }
};

/// Minimal generators, gcd and Frobenius data of the semigroup generated by `degrees` (zeros ignored).
inline NumericalSemigroup make_semigroup(std::vector<int> degrees) {
    NumericalSemigroup s;
    degrees.erase(std::remove_if(degrees.begin(), degrees.end(), [](int x) { return x <= 0; }), degrees.end());
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    if (degrees.empty()) return s;
    const int top = degrees.back();
    std::vector<bool> reach(static_cast<std::size_t>(top) + 1, false);
    reach[0] = true;
    for (int x : degrees) {
        if (reach[static_cast<std::size_t>(x)]) continue;
        s.generators.push_back(x);
        for (int i = x; i <= top; ++i)
            if (reach[static_cast<std::size_t>(i - x)]) reach[static_cast<std::size_t>(i)] = true;
    }
    for (int x : s.generators) s.d = std::gcd(s.d, x);
    std::vector<int> norm;
    for (int x : s.generators) norm.push_back(x / s.d);
    const int limit = norm.front() * norm.back() + 1;
    std::vector<bool> in(static_cast<std::size_t>(limit) + 1, false);
    in[0] = true;
    for (int i = 1; i <= limit; ++i)
        for (int x : norm)
            if (x <= i && in[static_cast<std::size_t>(i - x)]) {
                in[static_cast<std::size_t>(i)] = true;
                break;
            }
    s.frobenius = -1;
    for (int i = limit; i >= 1; --i)
        if (!in[static_cast<std::size_t>(i)]) {
            s.frobenius = i;
            break;
        }
    s.conductor = s.frobenius + 1;
    return s;
}

/// Semigroup of degrees realized by elements of R up to the bound.
inline NumericalSemigroup degree_data(const Presentation& p, int bound, const GradedOptions& opts = {}) {
    if (bound < p.max_degree()) throw Error(ErrorKind::PreconditionFailed, "bound below the largest generator degree");
    return make_semigroup(filtration_basis(p, bound, opts).realized_degrees());
}

// ---------------------------------------------------------------------------
// Completion

struct SagbiResult {
    Presentation completed;
    std::vector<GenExpression> added;  // each new generator in terms of the generators before it
    int bound = 0;
    bool bounded = false;      // true when k != K: only valid up to the bound
    bool stable_last_two = true;  // no generator added in the two top degrees
};

namespace detail {

/// Scales an expression to coprime integer coefficients (rational case) or to a monic first term.
inline FieldElement normalizing_scale(const GenExpression& expr) {
    auto q = Tower::rationals();
    Integer den(1), num(0);
    bool rational = true;
    for (const auto& [e, c] : expr) {
        auto low = c.tower()->lower(c, *q);
        if (!low) {
            rational = false;
            break;
        }
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), low->rational().get_den_mpz_t());
    }
    const FieldElement first = expr.rbegin()->second;
    if (!rational) return first.inverse();
    for (const auto& [e, c] : expr) {
        Rational x = c.tower()->lower(c, *q)->rational() * den;
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), x.get_num_mpz_t());
    }
    Rational scale(den, num);
    scale.canonicalize();
    if (sgn(first.tower()->lower(first, *q)->rational()) < 0) scale = -scale;
    return FieldElement(scale);
}

}  // namespace detail

/// Adds generators until leading forms of generator products span every Λ_n up to the bound.
inline SagbiResult sagbi_complete(const Presentation& p, int bound, const GradedOptions& opts = {}) {
    SagbiResult out;
    out.completed = p;
    out.bound = bound;
    out.bounded = p.coeff != p.ambient;
    for (int round = 0; round < 64; ++round) {
        GradedPiece g = filtration_basis(out.completed, bound, opts);
        std::map<int, Echelon> expected;
        for (std::size_t t = 0; t < g.monomials.size(); ++t) {
            const auto& m = g.monomials[t];
            auto v = flatten(KPoly::monomial(m.value.lead(), m.nominal), g.denominator, g.coeff, g.ambient);
            expected[m.nominal].insert(std::move(*v), static_cast<int>(t), g.coeff->one());
        }
        std::optional<Echelon::Expr> pick;
        int pick_degree = 0;
        for (const auto& [pivot, row] : g.echelon.rows()) {
            CoordVec top;
            for (const auto& [col, x] : row.v) {
                if (col.sdeg != pivot.sdeg) break;
                top.emplace(col, x);
            }
            auto residue = expected[pivot.sdeg].reduce(top).first;
            if (residue.empty()) continue;
            if (!pick || pivot.sdeg < pick_degree) {
                pick = row.expr;
                pick_degree = pivot.sdeg;
            }
        }
        if (!pick) return out;
        GenExpression expr = g.to_gen_expression(*pick);
        FieldElement scale = detail::normalizing_scale(expr);
        for (auto& [e, c] : expr) c = c * scale;
        out.completed.gens.push_back(evaluate(expr, g.gens, g.ambient));
        out.added.push_back(std::move(expr));
        if (pick_degree >= bound - 1) out.stable_last_two = false;
    }
    throw Error(ErrorKind::BoundTooLarge, "completion did not settle within 64 rounds");
}

}  // namespace polyembed

#endif  // POLYEMBED_GRADED_HPP
