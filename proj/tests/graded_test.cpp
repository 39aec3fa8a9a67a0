// Copyright 2026 The polyembed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "polyembed/graded.hpp"
#include "test_util.hpp"

using namespace polyembed;
using namespace testutil;

namespace {

Presentation over_q(std::vector<KPoly> gens) { return Presentation{q(), q(), std::move(gens)}; }

// realizable sums of the given positive integers up to the bound
std::set<int> brute_force_sums(const std::vector<int>& gens, int bound) {
    std::set<int> out{0};
    bool grew = true;
    while (grew) {
        grew = false;
        for (int x : std::set<int>(out))
            for (int g : gens)
                if (x + g <= bound && out.insert(x + g).second) grew = true;
    }
    return out;
}

// Independent dense oracle: n is realized iff dim(V ∩ K[s]_{<=n}) jumps at n,
// with dim(V ∩ K[s]_{<=n}) = dim V - rank(columns above n), ranks by Bareiss.
std::vector<int> oracle_realized(const std::vector<Poly<Rational>>& gens, int bound) {
    std::vector<Poly<Rational>> monos{Poly<Rational>::constant(Rational(1))};
    std::vector<int> frontier{0};
    std::vector<std::vector<Poly<Rational>>> by_nominal(static_cast<std::size_t>(bound) + 1);
    by_nominal[0].push_back(monos[0]);
    // all products, deduplicated by exponent vector via a recursive walk
    std::vector<Poly<Rational>> all;
    std::vector<int> exps(gens.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, int left, Poly<Rational> acc) -> void {
        if (i == gens.size()) {
            all.push_back(acc);
            return;
        }
        Poly<Rational> cur = acc;
        for (int e = 0; e * gens[i].degree() <= left; ++e) {
            self(self, i + 1, left - e * gens[i].degree(), cur);
            cur = cur * gens[i];
        }
    };
    rec(rec, 0, bound, Poly<Rational>::constant(Rational(1)));
    auto rank_above = [&](int n) {
        std::vector<std::vector<Rational>> m;
        for (const auto& p : all) {
            std::vector<Rational> row;
            for (int j = bound; j > n; --j) row.push_back(p.coeff(j));
            m.push_back(row);
        }
        if (n >= bound) return std::size_t{0};
        return bareiss_rank(m, Rational(0));
    };
    std::vector<std::vector<Rational>> full;
    for (const auto& p : all) {
        std::vector<Rational> row;
        for (int j = bound; j >= 0; --j) row.push_back(p.coeff(j));
        full.push_back(row);
    }
    const std::size_t dim = bareiss_rank(full, Rational(0));
    std::vector<int> out;
    std::size_t prev = 0;
    for (int n = 0; n <= bound; ++n) {
        std::size_t d = dim - rank_above(n);
        if (d > prev) out.push_back(n);
        prev = d;
    }
    return out;
}

}  // namespace

TEST(DegreeData, TwoThree) {
    auto s = degree_data(over_q({mono(q(), 1, 2), mono(q(), 1, 3)}), 10);
    EXPECT_EQ(s.generators, (std::vector<int>{2, 3}));
    EXPECT_EQ(s.d, 1);
    EXPECT_EQ(s.frobenius, 1);
    EXPECT_EQ(s.conductor, 2);
    auto brute = brute_force_sums({2, 3}, 20);
    for (int n = 0; n <= 20; ++n) EXPECT_EQ(s.contains(n), brute.count(n) == 1) << n;
}

TEST(DegreeData, AlgebraicCoefficients) {
    auto k = sqrt2();
    FieldElement a = k->generator();
    Presentation p{k, k, {mono(k, a, 2), mono(k, a, 3)}};
    auto s = degree_data(p, 10);
    EXPECT_EQ(s.generators, (std::vector<int>{2, 3}));
    EXPECT_EQ(s.d, 1);
    Presentation pq{k, q(), {mono(k, a, 2), mono(k, a, 3)}};
    EXPECT_EQ(degree_data(pq, 10).generators, (std::vector<int>{2, 3}));
}

TEST(DegreeData, FullSemigroup) {
    auto s = degree_data(over_q({mono(q(), 1, 1)}), 4);
    EXPECT_EQ(s.generators, (std::vector<int>{1}));
    EXPECT_EQ(s.d, 1);
    EXPECT_EQ(s.conductor, 0);
}

TEST(DegreeData, AgreesWithDenseOracle) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        std::uniform_int_distribution<int> ndeg(2, 5), ngen(1, 3);
        std::vector<KPoly> gens;
        std::vector<Poly<Rational>> qgens;
        const int m = ngen(rng);
        for (int i = 0; i < m; ++i) {
            gens.push_back(random_poly(q(), ndeg(rng), rng, 3));
            qgens.push_back(detail::to_rational_poly(gens.back()));
        }
        const int bound = 10;
        GradedPiece g = filtration_basis(over_q(gens), bound);
        EXPECT_EQ(g.realized_degrees(), oracle_realized(qgens, bound)) << "trial " << trial;
    }
}

TEST(Filtration, TwoThreeDimensions) {
    GradedPiece g = filtration_basis(over_q({mono(q(), 1, 2), mono(q(), 1, 3)}), 5);
    EXPECT_EQ(g.dim_by_degree, (std::vector<int>{1, 1, 2, 3, 4, 5}));
}

TEST(Filtration, PolynomialRing) {
    GradedPiece g = filtration_basis(over_q({mono(q(), 1, 1)}), 3);
    EXPECT_EQ(g.dim_by_degree, (std::vector<int>{1, 2, 3, 4}));
}

TEST(Filtration, HiddenCoefficientInLeadingSpace) {
    auto k = qu();
    FieldElement u = k->generator();
    Presentation p{k, q(), {poly(k, {0, u, 1}), mono(k, 1, 3)}};
    GradedPiece g = filtration_basis(p, 6);
    // w1^3 - w2^2 = 3u s^5 + 3u^2 s^4 + u^3 s^3
    KPoly w = p.gens[0].pow(3) - p.gens[1].pow(2);
    EXPECT_EQ(w, poly(k, {0, 0, 0, u.pow(3), FieldElement(3) * u * u, FieldElement(3) * u}));
    const auto& lam5 = g.leading_space[5];
    ASSERT_EQ(lam5.size(), 2u);
    // 3u lies in the Q-span of Λ_5: the span is {1, u} here
    bool has_u = false;
    for (const auto& x : lam5)
        if (!derivative_u(x).is_zero()) has_u = true;
    EXPECT_TRUE(has_u);
    auto r = subduct(w, g);
    EXPECT_TRUE(r.member);
}

TEST(Subduct, Examples) {
    auto p = over_q({mono(q(), 1, 2), mono(q(), 1, 3)});
    auto r1 = subduct(mono(q(), 1, 5), p, 8);
    EXPECT_TRUE(r1.member);
    EXPECT_TRUE(r1.verified);
    EXPECT_EQ(expression_to_string(r1.expression, {"w1", "w2"}), "w1*w2");
    auto r2 = subduct(mono(q(), 1, 1), p, 8);
    EXPECT_FALSE(r2.member);
    EXPECT_EQ(r2.remainder, mono(q(), 1, 1));
    auto r3 = subduct(mono(q(), 1, 2) + mono(q(), 1, 3), p, 8);
    EXPECT_TRUE(r3.member);
    EXPECT_EQ(expression_to_string(r3.expression, {"w1", "w2"}), "w1 + w2");
}

TEST(Subduct, SoundnessOnRandomElements) {
    std::mt19937_64 rng(5);
    auto p = over_q({poly(q(), {0, 1, 1}), mono(q(), 1, 3)});
    GradedPiece g = filtration_basis(p, 9);
    for (int i = 0; i < 20; ++i) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(g.monomials.size()) - 1);
        std::uniform_int_distribution<long> c(-3, 3);
        KPoly f(q()->zero());
        for (int j = 0; j < 3; ++j) f += g.monomials[static_cast<std::size_t>(pick(rng))].value.scaled(FieldElement(c(rng)));
        auto r = subduct(f, g);
        EXPECT_TRUE(r.verified);
        EXPECT_TRUE(r.member);
        EXPECT_EQ(evaluate(r.expression, p.gens, q()) + r.remainder, f);
    }
}

TEST(Sagbi, AlreadyComplete) {
    auto r = sagbi_complete(over_q({mono(q(), 1, 2), mono(q(), 1, 3)}), 10);
    EXPECT_EQ(r.completed.gens.size(), 2u);
    EXPECT_FALSE(r.bounded);
}

TEST(Sagbi, CompleteOverFunctionField) {
    auto k = qu();
    FieldElement u = k->generator();
    Presentation p{k, k, {poly(k, {0, u, 1}), mono(k, 1, 3)}};
    auto r = sagbi_complete(p, 12);
    EXPECT_EQ(r.completed.gens.size(), 2u);
}

TEST(Sagbi, AddsHiddenLeadingForm) {
    auto k = qu();
    FieldElement u = k->generator();
    Presentation p{k, q(), {poly(k, {0, u, 1}), mono(k, 1, 3)}};
    auto r = sagbi_complete(p, 6);
    ASSERT_EQ(r.completed.gens.size(), 3u);
    EXPECT_TRUE(r.bounded);
    const KPoly& w3 = r.completed.gens[2];
    EXPECT_EQ(w3.degree(), 5);
    EXPECT_EQ(w3.lead(), FieldElement(3) * u);
}
