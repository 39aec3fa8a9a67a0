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

#ifndef POLYEMBED_FIELD_HPP
#define POLYEMBED_FIELD_HPP

/*
 * Exact arithmetic in field towers
 *
 *     Q = T_0 ⊂ T_1 ⊂ ... ⊂ T_n
 *
 * where each step is either algebraic (T_i = T_{i-1}[x]/(m_i), m_i monic
 * irreducible) or transcendental (T_i = T_{i-1}(u)). At most one step is
 * transcendental. Every tower node is immutable and shared; an element points
 * at the node it lives in.
 *
 * Representation at a node:
 *   - base:           a reduced rational;
 *   - algebraic:      coefficients over the parent, degree < deg m_i;
 *   - transcendental: num/den over the parent, den monic, gcd(num, den) = 1.
 * This representation is canonical, so equality is structural.
 *
 * Elements of an ancestor node are lifted automatically when combined with
 * elements of a descendant; elements of unrelated towers do not mix.
 */

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace polyembed {

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

enum class StepKind { Base, Algebraic, Transcendental };

class FieldElement {
public:
    FieldElement();
    FieldElement(const Rational& q);  // NOLINT(google-explicit-constructor): rationals embed everywhere
    FieldElement(long n) : FieldElement(Rational(n)) {}  // NOLINT(google-explicit-constructor)
    FieldElement(int n) : FieldElement(Rational(n)) {}   // NOLINT(google-explicit-constructor)

    const TowerPtr& tower() const { return tower_; }
    bool is_zero() const;
    bool is_one() const;

    /// Rational value for elements of the base node.
    const Rational& rational() const { return std::get<Rational>(rep_); }
    /// Coefficients over the parent (algebraic node).
    const std::vector<FieldElement>& alg_coeffs() const { return std::get<Coeffs>(rep_); }
    /// Numerator and denominator over the parent (transcendental node).
    const std::vector<FieldElement>& frac_num() const { return std::get<Frac>(rep_).num; }
    const std::vector<FieldElement>& frac_den() const { return std::get<Frac>(rep_).den; }

    FieldElement operator-() const;
    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
    friend bool operator==(const FieldElement& a, const FieldElement& b);
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    FieldElement inverse() const;
    FieldElement pow(long e) const;

    std::string to_string() const;

    using Coeffs = std::vector<FieldElement>;
    struct Frac {
        std::vector<FieldElement> num;
        std::vector<FieldElement> den;
    };
    using Rep = std::variant<Rational, Coeffs, Frac>;

    /// Raw constructor; the representation must already be canonical for `tower`.
    FieldElement(TowerPtr tower, Rep rep) : tower_(std::move(tower)), rep_(std::move(rep)) {}
    const Rep& rep() const { return rep_; }

private:
    TowerPtr tower_;
    Rep rep_;
};

inline bool is_zero(const FieldElement& x) { return x.is_zero(); }
FieldElement zero_like(const FieldElement& x);
FieldElement one_like(const FieldElement& x);
inline std::string to_string(const FieldElement& x) { return x.to_string(); }

using KPoly = Poly<FieldElement>;

class Tower : public std::enable_shared_from_this<Tower> {
    struct Key {};

public:
    Tower(Key, TowerPtr parent, StepKind kind, std::string name, std::optional<KPoly> minpoly)
        : parent_(std::move(parent)), kind_(kind), name_(std::move(name)), minpoly_(std::move(minpoly)),
          depth_(parent_ ? parent_->depth_ + 1 : 0) {}

    /// The shared base node Q.
    static TowerPtr rationals() {
        static const TowerPtr q = std::make_shared<const Tower>(Key{}, nullptr, StepKind::Base, "Q", std::nullopt);
        return q;
    }

    /// Adjoins a root of `minpoly` (monic, irreducible over `parent`; not rechecked here).
    static TowerPtr extend_algebraic(const TowerPtr& parent, std::string name, const KPoly& minpoly) {
        if (minpoly.degree() < 2) throw Error(ErrorKind::ReducibleMinimalPolynomial, "minimal polynomial degree < 2");
        KPoly m = minpoly.map<FieldElement>([&](const FieldElement& c) { return parent->lift(c); }, parent->zero());
        if (!m.lead().is_one()) throw Error(ErrorKind::ReducibleMinimalPolynomial, "minimal polynomial is not monic");
        return std::make_shared<const Tower>(Key{}, parent, StepKind::Algebraic, std::move(name), std::move(m));
    }

    static TowerPtr extend_transcendental(const TowerPtr& parent, std::string name) {
        if (parent->has_transcendental())
            throw Error(ErrorKind::UnsupportedTowerShape,
                        "at most one transcendental generator is supported (adjoining " + name + " to " +
                            parent->describe() + ")");
        return std::make_shared<const Tower>(Key{}, parent, StepKind::Transcendental, std::move(name), std::nullopt);
    }

    StepKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const TowerPtr& parent() const { return parent_; }
    int depth() const { return depth_; }
    const KPoly& minpoly() const { return *minpoly_; }
    int step_degree() const { return kind_ == StepKind::Algebraic ? minpoly_->degree() : 0; }

    TowerPtr self() const { return shared_from_this(); }

    /// The node at the given depth along this tower's chain.
    TowerPtr at_depth(int d) const {
        TowerPtr t = self();
        while (t->depth_ > d) t = t->parent_;
        return t;
    }

    bool is_ancestor_of(const Tower& other) const {
        if (other.depth_ < depth_) return false;
        const Tower* t = &other;
        while (t->depth_ > depth_) t = t->parent_.get();
        return t == this;
    }

    bool has_transcendental() const {
        for (const Tower* t = this; t; t = t->parent_.get())
            if (t->kind_ == StepKind::Transcendental) return true;
        return false;
    }

    /// The transcendental node of this tower, if any.
    TowerPtr transcendental_node() const {
        for (TowerPtr t = self(); t; t = t->parent_)
            if (t->kind_ == StepKind::Transcendental) return t;
        return nullptr;
    }

    /// True when some transcendental step lies strictly above `ancestor`.
    bool transcendental_above(const Tower& ancestor) const {
        for (const Tower* t = this; t && t != &ancestor; t = t->parent_.get())
            if (t->kind_ == StepKind::Transcendental) return true;
        return false;
    }

    /// Product of algebraic step degrees strictly above `ancestor`.
    int algebraic_degree_over(const Tower& ancestor) const {
        int d = 1;
        for (const Tower* t = this; t && t != &ancestor; t = t->parent_.get())
            if (t->kind_ == StepKind::Algebraic) d *= t->step_degree();
        return d;
    }

    /// True when no transcendental step lies anywhere in the tower.
    bool is_number_field() const { return !has_transcendental(); }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_rational(const Rational& q) const { return lift(FieldElement(q)); }
    /// The generator adjoined at this node (not defined for the base).
    FieldElement generator() const;

    /// Embeds an element of an ancestor node.
    FieldElement lift(const FieldElement& x) const;

    /// Rewrites x as an element of `ancestor`, if it lies there.
    std::optional<FieldElement> lower(const FieldElement& x, const Tower& ancestor) const;

    /// Names of generators from the base upward, e.g. "Q(a)(u)".
    std::string describe() const {
        if (!parent_) return "Q";
        std::string s = parent_->describe() + "(" + name_;
        if (kind_ == StepKind::Algebraic) s += " : " + minpoly_->to_string(name_) + " = 0";
        return s + ")";
    }

private:
    TowerPtr parent_;
    StepKind kind_;
    std::string name_;
    std::optional<KPoly> minpoly_;
    int depth_;
};

/// Structural equality of two towers (same steps, same names, same minimal polynomials).
inline bool same_structure(const Tower& a, const Tower& b) {
    if (&a == &b) return true;
    if (a.depth() != b.depth() || a.kind() != b.kind()) return false;
    if (a.kind() == StepKind::Base) return true;
    if (a.name() != b.name()) return false;
    if (!same_structure(*a.parent(), *b.parent())) return false;
    if (a.kind() == StepKind::Algebraic) {
        if (a.minpoly().degree() != b.minpoly().degree()) return false;
        for (int i = 0; i <= a.minpoly().degree(); ++i)
            if (a.minpoly().coeff(i).to_string() != b.minpoly().coeff(i).to_string()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// FieldElement implementation

namespace detail {

inline KPoly as_poly(const std::vector<FieldElement>& v, const TowerPtr& over) { return KPoly(v, over->zero()); }

inline void trim(std::vector<FieldElement>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

/// Brings both operands into the deeper of the two (related) towers.
inline std::pair<FieldElement, FieldElement> unify(const FieldElement& a, const FieldElement& b) {
    if (a.tower() == b.tower()) return {a, b};
    if (a.tower()->is_ancestor_of(*b.tower())) return {b.tower()->lift(a), b};
    if (b.tower()->is_ancestor_of(*a.tower())) return {a, a.tower()->lift(b)};
    throw Error(ErrorKind::UnsupportedTowerShape,
                "elements of unrelated fields " + a.tower()->describe() + " and " + b.tower()->describe());
}

inline FieldElement make_frac(const TowerPtr& t, KPoly num, KPoly den) {
    RationalFunction<FieldElement> rf(std::move(num), std::move(den));
    return FieldElement(t, FieldElement::Frac{rf.num().coeffs(), rf.den().coeffs()});
}

inline FieldElement make_alg(const TowerPtr& t, const KPoly& p) {
    KPoly r = p.degree() >= t->minpoly().degree() ? p % t->minpoly() : p;
    return FieldElement(t, r.coeffs());
}

}  // namespace detail

inline FieldElement::FieldElement() : tower_(Tower::rationals()), rep_(Rational(0)) {}
inline FieldElement::FieldElement(const Rational& q) : tower_(Tower::rationals()), rep_(q) {}

inline FieldElement Tower::zero() const {
    switch (kind_) {
        case StepKind::Base: return FieldElement(self(), Rational(0));
        case StepKind::Algebraic: return FieldElement(self(), FieldElement::Coeffs{});
        case StepKind::Transcendental: return FieldElement(self(), FieldElement::Frac{{}, {parent_->one()}});
    }
    return {};
}

inline FieldElement Tower::one() const { return lift(FieldElement(Rational(1))); }

inline FieldElement Tower::generator() const {
    switch (kind_) {
        case StepKind::Base: throw Error(ErrorKind::PreconditionFailed, "the base field has no generator");
        case StepKind::Algebraic:
            if (minpoly_->degree() == 1) return detail::make_alg(self(), KPoly::variable(parent_->zero()));
            return FieldElement(self(), FieldElement::Coeffs{parent_->zero(), parent_->one()});
        case StepKind::Transcendental:
            return FieldElement(self(), FieldElement::Frac{{parent_->zero(), parent_->one()}, {parent_->one()}});
    }
    return {};
}

inline FieldElement Tower::lift(const FieldElement& x) const {
    if (x.tower().get() == this) return x;
    if (!x.tower()->is_ancestor_of(*this))
        throw Error(ErrorKind::UnsupportedTowerShape,
                    "cannot embed an element of " + x.tower()->describe() + " into " + describe());
    FieldElement below = parent_->lift(x);
    if (kind_ == StepKind::Algebraic) {
        FieldElement::Coeffs c;
        if (!below.is_zero()) c.push_back(below);
        return FieldElement(self(), std::move(c));
    }
    FieldElement::Frac f{{}, {parent_->one()}};
    if (!below.is_zero()) f.num.push_back(below);
    return FieldElement(self(), std::move(f));
}

inline std::optional<FieldElement> Tower::lower(const FieldElement& x0, const Tower& ancestor) const {
    FieldElement x = lift(x0);
    if (this == &ancestor) return x;
    if (!ancestor.is_ancestor_of(*this)) return std::nullopt;
    FieldElement below = parent_->zero();
    if (kind_ == StepKind::Algebraic) {
        const auto& c = x.alg_coeffs();
        if (c.size() > 1) return std::nullopt;
        if (c.size() == 1) below = c[0];
    } else {
        const auto& num = x.frac_num();
        const auto& den = x.frac_den();
        if (den.size() != 1 || num.size() > 1) return std::nullopt;
        if (num.size() == 1) below = num[0];
    }
    return parent_->lower(below, ancestor);
}

inline FieldElement zero_like(const FieldElement& x) { return x.tower()->zero(); }
inline FieldElement one_like(const FieldElement& x) { return x.tower()->one(); }

inline bool FieldElement::is_zero() const {
    switch (rep_.index()) {
        case 0: return sgn(std::get<Rational>(rep_)) == 0;
        case 1: return std::get<Coeffs>(rep_).empty();
        default: return std::get<Frac>(rep_).num.empty();
    }
}

inline bool FieldElement::is_one() const { return *this == tower_->one(); }

inline FieldElement FieldElement::operator-() const {
    switch (rep_.index()) {
        case 0: return FieldElement(tower_, Rational(-std::get<Rational>(rep_)));
        case 1: {
            Coeffs c = std::get<Coeffs>(rep_);
            for (auto& x : c) x = -x;
            return FieldElement(tower_, std::move(c));
        }
        default: {
            Frac f = std::get<Frac>(rep_);
            for (auto& x : f.num) x = -x;
            return FieldElement(tower_, std::move(f));
        }
    }
}

inline FieldElement operator+(const FieldElement& a0, const FieldElement& b0) {
    auto [a, b] = detail::unify(a0, b0);
    const TowerPtr& t = a.tower();
    switch (t->kind()) {
        case StepKind::Base: return FieldElement(t, Rational(a.rational() + b.rational()));
        case StepKind::Algebraic: {
            const auto& x = a.alg_coeffs();
            const auto& y = b.alg_coeffs();
            FieldElement::Coeffs r(std::max(x.size(), y.size()), t->parent()->zero());
            for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i];
            for (std::size_t i = 0; i < y.size(); ++i) r[i] = r[i] + y[i];
            detail::trim(r);
            return FieldElement(t, std::move(r));
        }
        case StepKind::Transcendental: {
            if (a.is_zero()) return b;
            if (b.is_zero()) return a;
            const TowerPtr& p = t->parent();
            KPoly an = detail::as_poly(a.frac_num(), p), ad = detail::as_poly(a.frac_den(), p);
            KPoly bn = detail::as_poly(b.frac_num(), p), bd = detail::as_poly(b.frac_den(), p);
            if (ad == bd) return detail::make_frac(t, an + bn, ad);
            return detail::make_frac(t, an * bd + bn * ad, ad * bd);
        }
    }
    return {};
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

inline FieldElement operator*(const FieldElement& a0, const FieldElement& b0) {
    auto [a, b] = detail::unify(a0, b0);
    const TowerPtr& t = a.tower();
    switch (t->kind()) {
        case StepKind::Base: return FieldElement(t, Rational(a.rational() * b.rational()));
        case StepKind::Algebraic: {
            if (a.is_zero() || b.is_zero()) return t->zero();
            const TowerPtr& p = t->parent();
            return detail::make_alg(t, detail::as_poly(a.alg_coeffs(), p) * detail::as_poly(b.alg_coeffs(), p));
        }
        case StepKind::Transcendental: {
            if (a.is_zero() || b.is_zero()) return t->zero();
            const TowerPtr& p = t->parent();
            return detail::make_frac(t, detail::as_poly(a.frac_num(), p) * detail::as_poly(b.frac_num(), p),
                                     detail::as_poly(a.frac_den(), p) * detail::as_poly(b.frac_den(), p));
        }
    }
    return {};
}

inline FieldElement FieldElement::inverse() const {
    if (is_zero()) throw Error(ErrorKind::DenominatorVanishes, "inverse of zero");
    switch (tower_->kind()) {
        case StepKind::Base: return FieldElement(tower_, Rational(1 / std::get<Rational>(rep_)));
        case StepKind::Algebraic: {
            const TowerPtr& p = tower_->parent();
            auto [g, s, t] = ext_gcd(detail::as_poly(alg_coeffs(), p), tower_->minpoly());
            if (g.degree() != 0)
                throw Error(ErrorKind::ReducibleMinimalPolynomial,
                            "non-invertible element " + to_string() + " (minimal polynomial is reducible)");
            return detail::make_alg(tower_, s);
        }
        case StepKind::Transcendental: {
            const TowerPtr& p = tower_->parent();
            return detail::make_frac(tower_, detail::as_poly(frac_den(), p), detail::as_poly(frac_num(), p));
        }
    }
    return {};
}

inline FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    if (b.is_zero()) throw Error(ErrorKind::DenominatorVanishes, "division by zero");
    return a * b.inverse();
}

inline FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement result = tower_->one(), base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

inline bool operator==(const FieldElement& a0, const FieldElement& b0) {
    if (a0.tower() != b0.tower()) {
        if (!a0.tower()->is_ancestor_of(*b0.tower()) && !b0.tower()->is_ancestor_of(*a0.tower())) return false;
    }
    auto [a, b] = detail::unify(a0, b0);
    switch (a.tower()->kind()) {
        case StepKind::Base: return a.rational() == b.rational();
        case StepKind::Algebraic: return a.alg_coeffs() == b.alg_coeffs();
        case StepKind::Transcendental: return a.frac_num() == b.frac_num() && a.frac_den() == b.frac_den();
    }
    return false;
}

inline std::string FieldElement::to_string() const {
    switch (tower_->kind()) {
        case StepKind::Base: return std::get<Rational>(rep_).get_str();
        case StepKind::Algebraic: return detail::as_poly(alg_coeffs(), tower_->parent()).to_string(tower_->name());
        case StepKind::Transcendental: {
            const TowerPtr& p = tower_->parent();
            KPoly num = detail::as_poly(frac_num(), p), den = detail::as_poly(frac_den(), p);
            if (den.degree() == 0) return num.to_string(tower_->name());
            return detail::fraction_string(num.to_string(tower_->name()), den.to_string(tower_->name()));
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Homomorphisms between towers

/*
 * A ring map from `source` to `target` fixed by the images of the source
 * generators (indexed by depth, 1..source->depth()). The base Q maps
 * identically. Defined on an element exactly when no transcendental
 * denominator evaluates to zero; otherwise DenominatorVanishes is thrown.
 */
class TowerMap {
public:
    TowerMap() = default;
    TowerMap(TowerPtr source, TowerPtr target, std::vector<FieldElement> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {}

    /// Inclusion of a tower into a descendant.
    static TowerMap inclusion(const TowerPtr& source, const TowerPtr& target) {
        std::vector<FieldElement> images;
        for (int d = 1; d <= source->depth(); ++d) images.push_back(target->lift(source->at_depth(d)->generator()));
        return TowerMap(source, target, std::move(images));
    }

    const TowerPtr& source() const { return source_; }
    const TowerPtr& target() const { return target_; }
    const std::vector<FieldElement>& images() const { return images_; }

    FieldElement operator()(const FieldElement& x) const { return apply(*source_->at_depth(x.tower()->depth()), source_->lift(x)); }

    KPoly apply_poly(const KPoly& p) const {
        return p.map<FieldElement>([&](const FieldElement& c) { return (*this)(c); }, target_->zero());
    }

    /// Composition: first this, then `next`.
    TowerMap then(const TowerMap& next) const {
        std::vector<FieldElement> images;
        for (const auto& img : images_) images.push_back(next(img));
        return TowerMap(source_, next.target_, std::move(images));
    }

private:
    FieldElement apply(const Tower& node, const FieldElement& x0) const {
        FieldElement x = node.lift(x0);
        switch (node.kind()) {
            case StepKind::Base: return target_->from_rational(x.rational());
            case StepKind::Algebraic: {
                const FieldElement& img = images_[static_cast<std::size_t>(node.depth() - 1)];
                FieldElement acc = target_->zero();
                const auto& c = x.alg_coeffs();
                for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * img + apply(*node.parent(), *it);
                return acc;
            }
            case StepKind::Transcendental: {
                const FieldElement& img = images_[static_cast<std::size_t>(node.depth() - 1)];
                auto horner = [&](const std::vector<FieldElement>& c) {
                    FieldElement acc = target_->zero();
                    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * img + apply(*node.parent(), *it);
                    return acc;
                };
                FieldElement den = horner(x.frac_den());
                if (den.is_zero())
                    throw WitnessError(ErrorKind::DenominatorVanishes,
                                       "denominator vanishes at " + node.name() + " = " + img.to_string(), x.to_string());
                return horner(x.frac_num()) / den;
            }
        }
        return {};
    }

    TowerPtr source_;
    TowerPtr target_;
    std::vector<FieldElement> images_;
};

// ---------------------------------------------------------------------------
// Utilities used by the graded linear algebra

/// Derivative with respect to the transcendental generator (zero on number fields).
inline FieldElement derivative_u(const FieldElement& x) {
    const TowerPtr& t = x.tower();
    switch (t->kind()) {
        case StepKind::Base: return t->zero();
        case StepKind::Transcendental: {
            const TowerPtr& p = t->parent();
            // coefficients below the transcendental step are constants
            KPoly num = detail::as_poly(x.frac_num(), p), den = detail::as_poly(x.frac_den(), p);
            return detail::make_frac(t, num.derivative() * den - num * den.derivative(), den * den);
        }
        case StepKind::Algebraic: {
            if (!t->has_transcendental()) return t->zero();
            const TowerPtr& p = t->parent();
            const FieldElement beta = t->generator();
            // implicit differentiation of m(beta) = 0
            const KPoly& m = t->minpoly();
            KPoly m_coeff_deriv = m.map<FieldElement>([](const FieldElement& c) { return derivative_u(c); }, p->zero());
            FieldElement dm_beta = t->zero(), dmx_beta = t->zero();
            KPoly mx = m.derivative();
            for (int i = m.degree(); i >= 0; --i) dm_beta = dm_beta * beta + m_coeff_deriv.coeff(i);
            for (int i = mx.degree(); i >= 0; --i) dmx_beta = dmx_beta * beta + mx.coeff(i);
            const FieldElement dbeta = -(dm_beta / dmx_beta);
            FieldElement acc = t->zero();
            const auto& c = x.alg_coeffs();
            for (std::size_t i = 0; i < c.size(); ++i) {
                acc = acc + derivative_u(c[i]) * beta.pow(static_cast<long>(i));
                if (i > 0) acc = acc + c[i] * FieldElement(Rational(static_cast<long>(i))) * beta.pow(static_cast<long>(i - 1)) * dbeta;
            }
            return acc;
        }
    }
    return {};
}

/// Coordinates of x over `ancestor`; key = exponents of the generators above it (lowest step first).
/// Transcendental denominators must already be cleared.
inline std::map<std::vector<int>, FieldElement> coordinates(const FieldElement& x0, const Tower& ancestor, const Tower& at) {
    std::map<std::vector<int>, FieldElement> out;
    FieldElement x = at.lift(x0);
    if (&at == &ancestor) {
        if (!x.is_zero()) out.emplace(std::vector<int>{}, x);
        return out;
    }
    const std::vector<FieldElement>* coeffs = nullptr;
    if (at.kind() == StepKind::Algebraic) {
        coeffs = &x.alg_coeffs();
    } else {
        if (x.frac_den().size() != 1)
            throw Error(ErrorKind::PreconditionFailed, "coordinates requested for an element with a denominator");
        coeffs = &x.frac_num();
    }
    for (std::size_t i = 0; i < coeffs->size(); ++i) {
        for (auto& [key, v] : coordinates((*coeffs)[i], ancestor, *at.parent())) {
            std::vector<int> k = key;
            k.push_back(static_cast<int>(i));
            out.emplace(std::move(k), v);
        }
    }
    return out;
}

/// Collects denominators (over the transcendental node) appearing in x.
inline void collect_denominators(const FieldElement& x, const Tower& at, std::vector<KPoly>& out) {
    switch (at.kind()) {
        case StepKind::Base: return;
        case StepKind::Transcendental:
            if (x.frac_den().size() > 1) out.push_back(detail::as_poly(x.frac_den(), at.parent()));
            return;
        case StepKind::Algebraic:
            for (const auto& c : x.alg_coeffs()) collect_denominators(c, *at.parent(), out);
            return;
    }
}

/// A nonzero element d of the transcendental node with d*x free of denominators for all x.
inline FieldElement common_denominator(const std::vector<FieldElement>& xs, const TowerPtr& tower) {
    TowerPtr tn = tower->transcendental_node();
    if (!tn) return tower->one();
    std::vector<KPoly> dens;
    for (const auto& x : xs) collect_denominators(tower->lift(x), *tower, dens);
    KPoly l = KPoly::constant(tn->parent()->one());
    for (const auto& d : dens) {
        KPoly g = gcd(l, d);
        l = l * (d / g);
    }
    l = l.monic();
    return tower->lift(FieldElement(tn, FieldElement::Frac{l.coeffs(), {tn->parent()->one()}}));
}

}  // namespace polyembed

#endif  // POLYEMBED_FIELD_HPP
