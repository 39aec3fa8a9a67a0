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

#ifndef POLYEMBED_EMBED_HPP
#define POLYEMBED_EMBED_HPP

/*
 * Embedding engine: R = k[w_1..w_m] ⊂ K[s]  ->  F[t], degree-preserving.
 *
 * Two routes.
 *
 *   AlgebraicCoefficients: every coefficient is algebraic over the part L0 of
 *   K seen by R. Take r in R of least positive degree m, let delta be the gcd
 *   of all exponents occurring in the generators, e = m / delta and kappa =
 *   lc(r). Adjoin c with c^e = kappa and put t = c * s^delta. Each generator
 *   is rewritten in t; the map is the restriction of K[s^delta] -> F[t], so it
 *   is injective without any bound.
 *
 *   Specialized: L0 is algebraic over k but some coefficient is not. The
 *   transcendental u is sent to a rational point u0; injectivity is certified
 *   only through degree N (per-degree ranks) plus transcendence degrees.
 */

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "graded.hpp"
#include "tower_ops.hpp"

namespace polyembed {

enum class EmbedCase { AlgebraicCoefficients, Specialized };

inline const char* to_string(EmbedCase c) {
    return c == EmbedCase::AlgebraicCoefficients ? "AlgebraicCoefficients" : "Specialized";
}

struct EmbeddingProblem {
    Presentation presentation;
    int bound = -1;  // < 0: 2 * (max generator degree) + conductor exponent
    std::uint64_t seed = 1;
    int retries = 8;
    GradedOptions graded;
};

// ---------------------------------------------------------------------------
// Transcendence degree

/// Rank of the Jacobian of the polynomials with respect to (u, s), or s alone when no u lies above k.
inline int jacobian_trdeg(const std::vector<KPoly>& gens, const TowerPtr& ambient, const TowerPtr& coeff) {
    const bool with_u = ambient->transcendental_above(*coeff);
    std::vector<KPoly> du, ds;
    for (const auto& g0 : gens) {
        KPoly g = detail::lift_poly(g0, ambient);
        ds.push_back(g.derivative());
        du.push_back(with_u ? g.map<FieldElement>([](const FieldElement& c) { return derivative_u(c); }, ambient->zero())
                            : KPoly(ambient->zero()));
    }
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (!(du[i] * ds[j] - du[j] * ds[i]).is_zero()) return 2;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!du[i].is_zero() || !ds[i].is_zero()) return 1;
    return 0;
}

// ---------------------------------------------------------------------------
// Coefficient field discovery

struct CoefficientFieldReport {
    int bound = 0;
    std::vector<std::vector<long>> lattice;  // integer kernel of the degree vector
    std::vector<FieldElement> generators;    // elements of L0 outside k
    std::vector<std::string> sources;        // how each generator arose
    int trdeg = 0;                           // of L0 over k
};

/// Integer kernel basis of a row vector, by unimodular column operations; first nonzero entry positive.
inline std::vector<std::vector<long>> integer_kernel(const std::vector<long>& v) {
    const std::size_t m = v.size();
    std::vector<long> row = v;
    std::vector<std::vector<long>> u(m, std::vector<long>(m, 0));  // columns of the transform
    for (std::size_t i = 0; i < m; ++i) u[i][i] = 1;
    auto colop = [&](std::size_t dst, std::size_t src, long q) {  // col_dst -= q * col_src
        row[dst] -= q * row[src];
        for (std::size_t i = 0; i < m; ++i) u[i][dst] -= q * u[i][src];
    };
    auto swapcol = [&](std::size_t a, std::size_t b) {
        std::swap(row[a], row[b]);
        for (std::size_t i = 0; i < m; ++i) std::swap(u[i][a], u[i][b]);
    };
    // Euclid across columns until only column 0 is nonzero
    for (;;) {
        std::size_t best = m;
        for (std::size_t j = 0; j < m; ++j)
            if (row[j] != 0 && (best == m || std::labs(row[j]) < std::labs(row[best]))) best = j;
        if (best == m) break;
        if (best != 0) swapcol(0, best);
        bool done = true;
        for (std::size_t j = 1; j < m; ++j)
            if (row[j] != 0) {
                colop(j, 0, row[j] / row[0]);
                if (row[j] != 0) done = false;
            }
        if (done) break;
    }
    std::vector<std::vector<long>> out;
    for (std::size_t j = (row[0] != 0 ? 1 : 0); j < m; ++j) {
        std::vector<long> col(m);
        for (std::size_t i = 0; i < m; ++i) col[i] = u[i][j];
        for (long x : col)
            if (x != 0) {
                if (x < 0)
                    for (auto& y : col) y = -y;
                break;
            }
        out.push_back(col);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a > b; });
    return out;
}

inline CoefficientFieldReport discover_coefficient_field(const Presentation& p, int bound, const GradedOptions& opts = {}) {
    CoefficientFieldReport rep;
    rep.bound = bound;
    const TowerPtr& K = p.ambient;
    auto in_k = [&](const FieldElement& x) { return K->lower(x, *p.coeff).has_value(); };
    auto add = [&](const FieldElement& x, const std::string& why) {
        if (x.is_zero() || in_k(x)) return;
        for (const auto& y : rep.generators)
            if (y == x) return;
        rep.generators.push_back(x);
        rep.sources.push_back(why);
    };
    std::vector<long> degs;
    for (const auto& g : p.gens) degs.push_back(g.degree());
    rep.lattice = integer_kernel(degs);
    for (const auto& a : rep.lattice) {
        FieldElement x = K->one();
        std::string why = "lattice (";
        for (std::size_t i = 0; i < a.size(); ++i) {
            x = x * K->lift(p.gens[i].lead()).pow(a[i]);
            why += (i ? "," : "") + std::to_string(a[i]);
        }
        add(x, why + ")");
    }
    GradedPiece g = filtration_basis(p, bound, opts);
    for (int n = 0; n <= bound; ++n) {
        const auto& lam = g.leading_space[static_cast<std::size_t>(n)];
        for (std::size_t j = 1; j < lam.size(); ++j) add(lam[j] / lam[0], "leading space " + std::to_string(n));
    }
    if (K->transcendental_above(*p.coeff))
        for (const auto& x : rep.generators)
            if (!derivative_u(x).is_zero()) rep.trdeg = 1;
    return rep;
}

// ---------------------------------------------------------------------------
// Certificates

struct Attempt {
    std::string u0;
    int bound = 0;
    std::string reason;
    std::string witness;  // for a rank drop: a nonzero element of R killed by the specialization
};

struct VerificationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    int bound = 0;
    std::vector<std::pair<int, int>> degree_table;  // (deg_s w_i, deg_t image_i)
    std::vector<int> ranks_source, ranks_image;     // cumulative, per nominal degree
    int trdeg_source = 0, trdeg_image = 0, trdeg_leading = 0;
    std::vector<std::string> witnesses;
    std::vector<VerificationCheck> checks;
    bool passed = false;

    const VerificationCheck* first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
};

struct EmbeddingCertificate {
    EmbedCase kind = EmbedCase::AlgebraicCoefficients;
    TowerPtr field;        // F
    TowerMap coefficient_map;  // K -> F
    std::string t = "t";
    int d = 1;             // gcd of the degree semigroup
    int t_weight = 1;      // t has s-degree t_weight
    FieldElement c;        // t = c * s^t_weight (AlgebraicCoefficients)
    std::optional<FieldElement> u0;  // Specialized
    std::vector<KPoly> images;
    std::vector<Adjunction> adjunctions;
    GenExpression r_expression;  // element of least positive degree, in the generators
    int e = 1;
    std::vector<Attempt> rejected;
    std::vector<CoefficientFieldReport> discovery;
    VerificationReport verification;
};

namespace detail {

inline GenExpression single_generator(std::size_t i, std::size_t m, const FieldElement& one) {
    std::vector<int> e(m, 0);
    e[i] = 1;
    return {{e, one}};
}

/// Largest degree in the transcendental generator appearing in x.
inline int u_degree(const FieldElement& x) {
    switch (x.tower()->kind()) {
        case StepKind::Base: return 0;
        case StepKind::Algebraic: {
            int m = 0;
            for (const auto& c : x.alg_coeffs()) m = std::max(m, u_degree(c));
            return m;
        }
        case StepKind::Transcendental:
            return static_cast<int>(std::max(x.frac_num().size(), x.frac_den().size())) - 1;
    }
    return 0;
}

inline int default_bound(const Presentation& p, const GradedOptions& opts) {
    const int maxdeg = p.max_degree();
    auto sg = make_semigroup(filtration_basis(p, 2 * maxdeg, opts).realized_degrees());
    return 2 * maxdeg + sg.conductor;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Verification

/*
 * Independent recheck of a certificate, in order:
 *   homomorphism  source relations hold on the images (and, for the
 *                 algebraic route, the images are the generators rewritten
 *                 under t = c s^weight);
 *   degrees       deg_s w_i = weight * deg_t image_i;
 *   ranks         per nominal degree, source and image spans agree;
 *   trdeg         Jacobian ranks agree;
 *   witnesses     t is a root of r(X) - image(r) with positive degree; the
 *                 minimal polynomials of F vanish on its generators.
 */
inline VerificationReport verify_certificate(const EmbeddingProblem& prob, const EmbeddingCertificate& cert) {
    const Presentation& p = prob.presentation;
    VerificationReport rep;
    const int bound = prob.bound >= 0 ? prob.bound : detail::default_bound(p, prob.graded);
    rep.bound = bound;
    const TowerPtr& F = cert.field;
    const TowerMap& phi = cert.coefficient_map;
    auto fail = [&](const std::string& name, const std::string& why) {
        rep.checks.push_back({name, false, why});
        for (const char* rest : {"homomorphism", "degrees", "ranks", "trdeg", "witnesses"}) {
            bool seen = false;
            for (const auto& c : rep.checks) seen = seen || c.name == rest;
            if (!seen) rep.checks.push_back({rest, false, "not reached"});
        }
        rep.passed = false;
        return rep;
    };
    if (cert.images.size() != p.gens.size()) return fail("homomorphism", "image count differs from generator count");
    std::vector<KPoly> images;
    for (const auto& im : cert.images) images.push_back(detail::lift_poly(im, F));

    // (a) homomorphism
    GradedPiece src = filtration_basis(p, bound, prob.graded);
    for (const auto& rel : src.relations) {
        GenExpression mapped;
        for (const auto& [e, c] : rel.expr) mapped.emplace(e, phi(p.ambient->lift(c)));
        KPoly v = evaluate(mapped, images, F);
        if (!v.is_zero())
            return fail("homomorphism", "relation " + expression_to_string(rel.expr, {}) + " of nominal degree " +
                                            std::to_string(rel.nominal) + " maps to " + v.to_string(cert.t));
    }
    std::string hom_detail = std::to_string(src.relations.size()) + " relations preserved";
    if (cert.kind == EmbedCase::AlgebraicCoefficients) {
        // image(s) evaluated at t = c s^weight must reproduce phi(w)
        KPoly t_of_s = KPoly::monomial(F->lift(cert.c), cert.t_weight);
        for (std::size_t i = 0; i < images.size(); ++i) {
            KPoly lhs = images[i].compose(t_of_s);
            KPoly rhs = phi.apply_poly(p.gens[i]);
            if (lhs != rhs)
                return fail("homomorphism", "image " + std::to_string(i + 1) + " is not w" + std::to_string(i + 1) +
                                                " rewritten in t: " + images[i].to_string(cert.t));
        }
        hom_detail += "; images equal generators under t = c*s^" + std::to_string(cert.t_weight);
    }
    rep.checks.push_back({"homomorphism", true, hom_detail});

    // (b) degrees
    for (std::size_t i = 0; i < images.size(); ++i) {
        rep.degree_table.emplace_back(p.gens[i].degree(), images[i].degree());
        if (p.gens[i].degree() != cert.t_weight * images[i].degree())
            return fail("degrees", "deg w" + std::to_string(i + 1) + " = " + std::to_string(p.gens[i].degree()) +
                                       " but image has t-degree " + std::to_string(images[i].degree()));
    }
    rep.checks.push_back({"degrees", true, "weight " + std::to_string(cert.t_weight)});

    // (c) ranks per nominal degree
    Presentation img{F, p.coeff, images, cert.t};
    GradedPiece tgt;
    try {
        // nominal degrees of the image are scaled by 1/weight
        GradedOptions o = prob.graded;
        if (o.u_cap < 0) {
            int scale = 1;
            for (const auto& im : images)
                for (const auto& x : im.coeffs()) scale = std::max(scale, detail::u_degree(x));
            o.u_cap = 2 * bound * scale;
        }
        tgt = filtration_basis(img, bound / cert.t_weight, o);
    } catch (const Error& e) {
        return fail("ranks", std::string("image filtration failed: ") + e.what());
    }
    rep.ranks_source = src.rank_by_nominal;
    for (int n = 0; n <= bound; ++n)
        rep.ranks_image.push_back(tgt.rank_by_nominal[static_cast<std::size_t>(n / cert.t_weight)]);
    for (int n = 0; n <= bound; ++n)
        if (rep.ranks_source[static_cast<std::size_t>(n)] != rep.ranks_image[static_cast<std::size_t>(n)])
            return fail("ranks", "rank drop at degree " + std::to_string(n) + ": " +
                                     std::to_string(rep.ranks_source[static_cast<std::size_t>(n)]) + " vs " +
                                     std::to_string(rep.ranks_image[static_cast<std::size_t>(n)]));
    rep.checks.push_back({"ranks", true, "equal through degree " + std::to_string(bound)});

    // (d) transcendence degree
    rep.trdeg_source = jacobian_trdeg(p.gens, p.ambient, p.coeff);
    rep.trdeg_image = jacobian_trdeg(images, F, p.coeff);
    std::vector<KPoly> leading;
    for (const auto& g : p.gens) leading.push_back(KPoly::monomial(g.lead(), g.degree()));
    rep.trdeg_leading = jacobian_trdeg(leading, p.ambient, p.coeff);
    if (rep.trdeg_source != rep.trdeg_image)
        return fail("trdeg", "source " + std::to_string(rep.trdeg_source) + ", image " + std::to_string(rep.trdeg_image));
    if (rep.trdeg_leading > rep.trdeg_source)
        return fail("trdeg", "leading forms have larger transcendence degree than R");
    rep.checks.push_back({"trdeg", true, std::to_string(rep.trdeg_source)});

    // (e) algebraicity witnesses
    if (cert.r_expression.empty()) return fail("witnesses", "missing least-degree element");
    KPoly r_src = evaluate(cert.r_expression, p.gens, p.ambient);
    KPoly r_img = evaluate(cert.r_expression, images, F);
    if (r_img.degree() <= 0) return fail("witnesses", "image of r has no positive t-degree");
    rep.witnesses.push_back("t: root of X-polynomial r(X) - r(t) with r(t) = " + r_img.to_string(cert.t) + " (deg_s r = " +
                            std::to_string(r_src.degree()) + ")");
    for (TowerPtr node = F; node && node->kind() != StepKind::Base; node = node->parent()) {
        if (node->kind() != StepKind::Algebraic) continue;
        FieldElement g = node->generator();
        FieldElement v = node->zero();
        for (int i = node->minpoly().degree(); i >= 0; --i) v = v * g + node->minpoly().coeff(i);
        if (!v.is_zero()) return fail("witnesses", "minimal polynomial of " + node->name() + " does not vanish");
        rep.witnesses.push_back(node->name() + ": " + node->minpoly().to_string(node->name()) + " = 0");
    }
    if (cert.kind == EmbedCase::AlgebraicCoefficients) {
        FieldElement lhs = F->lift(cert.c).pow(cert.e);
        FieldElement kappa = phi(p.ambient->lift(r_src.lead()));
        if (lhs != kappa) return fail("witnesses", "c^e differs from the leading coefficient of r");
        rep.witnesses.push_back("c: c^" + std::to_string(cert.e) + " = " + kappa.to_string() + ", the leading coefficient of r");
    }
    rep.checks.push_back({"witnesses", true, std::to_string(rep.witnesses.size()) + (rep.witnesses.size() == 1 ? " equation" : " equations")});
    rep.passed = true;
    return rep;
}

// ---------------------------------------------------------------------------
// Construction

namespace detail {

/// Element of least positive degree: a generator if one has that degree, else a basis row.
inline std::pair<GenExpression, int> least_degree_element(const Presentation& p, const GradedPiece& g) {
    int m = 0;
    for (int n : g.realized_degrees())
        if (n > 0) {
            m = n;
            break;
        }
    for (std::size_t i = 0; i < p.gens.size(); ++i)
        if (p.gens[i].degree() == m) return {single_generator(i, p.gens.size(), p.coeff->one()), m};
    for (const auto& [pivot, row] : g.echelon.rows())
        if (pivot.sdeg == m) return {g.to_gen_expression(row.expr), m};
    throw Error(ErrorKind::InconsistentSystem, "no element of least positive degree");
}

inline EmbeddingCertificate algebraic_route(const EmbeddingProblem& prob, int bound) {
    const Presentation& p = prob.presentation;
    const TowerPtr& K = p.ambient;
    EmbeddingCertificate cert;
    cert.kind = EmbedCase::AlgebraicCoefficients;
    GradedPiece g = filtration_basis(p, bound, prob.graded);
    cert.d = make_semigroup(g.realized_degrees()).d;
    auto [rexpr, m] = least_degree_element(p, g);
    cert.r_expression = rexpr;
    int delta = 0;
    for (const auto& w : p.gens) delta = std::gcd(delta, w.support_gcd());
    cert.t_weight = delta;
    cert.e = m / delta;
    KPoly r = evaluate(rexpr, p.gens, K);
    FieldElement kappa = r.lead();
    const bool reparam = K->transcendental_above(*p.coeff);
    RootExtension ext = eth_root_extend(kappa, cert.e, "c", reparam ? "v" : "");
    cert.field = ext.field;
    cert.coefficient_map = TowerMap::inclusion(K, K).then(ext.embedding);
    cert.c = ext.root;
    cert.adjunctions = ext.adjunctions;
    const FieldElement cinv = ext.root.inverse();
    for (const auto& w : p.gens) {
        std::vector<FieldElement> coeffs;
        for (int j = 0; j <= w.degree(); j += delta)
            coeffs.push_back(ext.embedding(K->lift(w.coeff(j))) * cinv.pow(j / delta));
        cert.images.push_back(KPoly(std::move(coeffs), ext.field->zero()));
    }
    return cert;
}

inline std::vector<long> candidate_points(std::uint64_t seed, int count) {
    std::vector<long> rest;
    for (long i = 1; static_cast<int>(rest.size()) < std::max(count, 1) * 2; ++i) {
        rest.push_back(i);
        rest.push_back(-i);
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = rest.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(rest[i - 1], rest[pick(rng)]);
    }
    std::vector<long> out{0};
    out.insert(out.end(), rest.begin(), rest.end());
    out.resize(static_cast<std::size_t>(std::max(count, 1)));
    return out;
}

}  // namespace detail

/// Builds and verifies an embedding; throws VerificationFailed if the emitted certificate does not recheck.
inline EmbeddingCertificate construct_embedding(const EmbeddingProblem& prob) {
    const Presentation& p = prob.presentation;
    p.validate();
    const TowerPtr& K = p.ambient;
    const int bound = prob.bound >= 0 ? prob.bound : detail::default_bound(p, prob.graded);
    EmbeddingProblem fixed = prob;
    fixed.bound = bound;

    auto finish = [&](EmbeddingCertificate cert) {
        cert.verification = verify_certificate(fixed, cert);
        if (!cert.verification.passed) {
            const auto* f = cert.verification.first_failure();
            throw WitnessError(ErrorKind::VerificationFailed, "emitted certificate failed check " + f->name, f->detail);
        }
        return cert;
    };

    if (!K->transcendental_above(*p.coeff)) return finish(detail::algebraic_route(fixed, bound));

    std::vector<Attempt> rejected;
    std::vector<CoefficientFieldReport> reports;
    std::vector<int> disc_bounds{p.max_degree(), bound, 2 * bound};
    for (int nd : disc_bounds) {
        CoefficientFieldReport rep = discover_coefficient_field(p, nd, prob.graded);
        reports.push_back(rep);
        if (rep.trdeg == 1) {
            EmbeddingCertificate cert = detail::algebraic_route(fixed, bound);
            cert.rejected = rejected;
            cert.discovery = reports;
            return finish(cert);
        }
        if (K->transcendental_node() != K)
            throw Error(ErrorKind::UnsupportedTowerShape,
                        "specialization needs the transcendental generator on top of " + K->describe());
        const TowerPtr below = K->parent();
        GradedPiece src = filtration_basis(p, bound, prob.graded);
        const int trdeg_src = jacobian_trdeg(p.gens, K, p.coeff);
        for (long pt : detail::candidate_points(prob.seed, prob.retries)) {
            const std::string label = std::to_string(pt);
            FieldElement u0 = below->from_rational(Rational(pt));
            TowerMap at_u0 = specialize(K, u0);
            std::vector<KPoly> images;
            std::string reason;
            try {
                for (const auto& w : p.gens) {
                    KPoly im = map_coefficients(w, at_u0);
                    if (im.degree() != w.degree()) {
                        reason = "leading coefficient vanishes";
                        break;
                    }
                    images.push_back(im);
                }
            } catch (const Error&) {
                reason = "denominator vanishes";
            }
            if (!reason.empty()) {
                rejected.push_back({label, nd, reason, ""});
                continue;
            }
            GradedPiece tgt = filtration_basis(Presentation{below, p.coeff, images, "t"}, bound, prob.graded);
            int drop = -1;
            for (int n = 0; n <= bound && drop < 0; ++n)
                if (tgt.rank_by_nominal[static_cast<std::size_t>(n)] != src.rank_by_nominal[static_cast<std::size_t>(n)]) drop = n;
            if (drop >= 0) {
                std::string witness;
                for (const auto& rel : tgt.relations) {
                    if (rel.nominal != drop) continue;
                    KPoly w = evaluate(rel.expr, p.gens, K);
                    if (w.is_zero()) continue;
                    if (w.lead().to_string().rfind('-', 0) == 0) w = -w;
                    witness = w.to_string(p.var);
                    break;
                }
                rejected.push_back({label, nd, "rank drop at degree " + std::to_string(drop), witness});
                continue;
            }
            const int trdeg_img = jacobian_trdeg(images, below, p.coeff);
            if (trdeg_img != trdeg_src) {
                // independent of the point: the coefficient field was under-detected
                rejected.push_back({label, nd,
                                    "transcendence degree " + std::to_string(trdeg_img) + " vs " + std::to_string(trdeg_src), ""});
                break;
            }
            EmbeddingCertificate cert;
            cert.kind = EmbedCase::Specialized;
            cert.field = below;
            cert.coefficient_map = at_u0;
            cert.u0 = u0;
            cert.images = images;
            cert.c = below->one();
            cert.t_weight = 1;
            cert.d = make_semigroup(src.realized_degrees()).d;
            auto [rexpr, m] = detail::least_degree_element(p, src);
            cert.r_expression = rexpr;
            cert.e = 1;
            cert.rejected = rejected;
            cert.discovery = reports;
            return finish(cert);
        }
    }
    std::string list;
    for (const auto& a : rejected) list += (list.empty() ? "" : "; ") + ("u0=" + a.u0 + " (" + a.reason + ")");
    throw WitnessError(ErrorKind::RetriesExhausted, "no admissible specialization point", list);
}

}  // namespace polyembed

#endif  // POLYEMBED_EMBED_HPP
