// Copyright 2026 The polyembed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "polyembed/embed.hpp"
#include "test_util.hpp"

using namespace polyembed;
using namespace testutil;

namespace {

EmbeddingProblem problem(const TowerPtr& ambient, const TowerPtr& coeff, std::vector<KPoly> gens, int bound = -1) {
    EmbeddingProblem p;
    p.presentation = Presentation{ambient, coeff, std::move(gens)};
    p.bound = bound;
    return p;
}

FieldElement u() { return qu()->generator(); }

long dot(const std::vector<long>& a, const std::vector<long>& b) {
    long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST(IntegerKernel, TwoThree) {
    auto k = integer_kernel({2, 3});
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k[0], (std::vector<long>{3, -2}));
}

TEST(IntegerKernel, SpansEverySmallKernelVector) {
    const std::vector<long> deg{4, 6, 9};
    auto k = integer_kernel(deg);
    ASSERT_EQ(k.size(), 2u);
    for (const auto& b : k) EXPECT_EQ(dot(b, deg), 0);
    // every kernel vector in a box is an integer combination of the basis
    for (long x = -9; x <= 9; ++x)
        for (long y = -9; y <= 9; ++y)
            for (long z = -9; z <= 9; ++z) {
                std::vector<long> v{x, y, z};
                if (dot(v, deg) != 0) continue;
                bool found = false;
                for (std::size_t i = 0; i < 3 && !found; ++i)
                    for (std::size_t j = i + 1; j < 3 && !found; ++j) {
                        const long det = k[0][i] * k[1][j] - k[0][j] * k[1][i];
                        if (det == 0) continue;
                        const Rational a = make_rational(v[i] * k[1][j] - v[j] * k[1][i], det);
                        const Rational b = make_rational(k[0][i] * v[j] - k[0][j] * v[i], det);
                        ASSERT_EQ(a.get_den(), 1) << x << "," << y << "," << z;
                        ASSERT_EQ(b.get_den(), 1) << x << "," << y << "," << z;
                        found = true;
                    }
                ASSERT_TRUE(found);
            }
}

TEST(Jacobian, Examples) {
    EXPECT_EQ(jacobian_trdeg({mono(qu(), u(), 2), mono(qu(), 1, 3)}, qu(), q()), 2);
    EXPECT_EQ(jacobian_trdeg({mono(q(), 1, 2), mono(q(), 1, 3)}, q(), q()), 1);
    EXPECT_EQ(jacobian_trdeg({poly(qu(), {0, u(), 1}), mono(qu(), 1, 3)}, qu(), qu()), 1);
    EXPECT_EQ(jacobian_trdeg({poly(q(), {5})}, q(), q()), 0);
}

TEST(Discover, LatticeRatio) {
    Presentation p{qu(), q(), {mono(qu(), u(), 2), mono(qu(), u(), 3)}};
    auto rep = discover_coefficient_field(p, 6);
    ASSERT_EQ(rep.lattice.size(), 1u);
    EXPECT_EQ(rep.lattice[0], (std::vector<long>{3, -2}));
    ASSERT_EQ(rep.generators.size(), 1u);
    EXPECT_EQ(rep.generators[0], u());
    EXPECT_EQ(rep.trdeg, 1);
}

TEST(Discover, HiddenInLeadingSpace) {
    Presentation p{qu(), q(), {poly(qu(), {0, u(), 1}), mono(qu(), 1, 3)}};
    EXPECT_EQ(discover_coefficient_field(p, 3).trdeg, 0);
    auto rep = discover_coefficient_field(p, 8);
    EXPECT_EQ(rep.trdeg, 1);
    ASSERT_FALSE(rep.sources.empty());
    EXPECT_EQ(rep.sources[0], "leading space 5");
}

TEST(Embed, AlgebraicLeadingCoefficient) {
    const TowerPtr K = sqrt2();
    const FieldElement a = K->generator();
    auto prob = problem(K, q(), {mono(K, a, 2), mono(K, a, 3)}, 10);
    auto cert = construct_embedding(prob);
    EXPECT_EQ(cert.kind, EmbedCase::AlgebraicCoefficients);
    EXPECT_EQ(cert.d, 1);
    EXPECT_EQ(cert.t_weight, 1);
    EXPECT_EQ(cert.c.pow(2), cert.field->lift(a));
    ASSERT_EQ(cert.adjunctions.size(), 1u);
    EXPECT_EQ(cert.adjunctions[0].relation, "c^2 - a");
    EXPECT_EQ(cert.images[0], mono(cert.field, 1, 2));
    EXPECT_EQ(cert.images[1], mono(cert.field, cert.c.inverse(), 3));
    EXPECT_TRUE(cert.verification.passed);
    EXPECT_EQ(cert.verification.bound, 10);
    EXPECT_EQ(cert.verification.trdeg_source, 1);
}

TEST(Embed, Identity) {
    auto cert = construct_embedding(problem(q(), q(), {mono(q(), 1, 1)}));
    EXPECT_EQ(cert.field, q());
    EXPECT_EQ(cert.images[0], mono(q(), 1, 1));
    EXPECT_TRUE(cert.adjunctions.empty());
}

TEST(Embed, WeightTwo) {
    auto cert = construct_embedding(problem(q(), q(), {mono(q(), 1, 4), mono(q(), 1, 6)}));
    EXPECT_EQ(cert.t_weight, 2);
    EXPECT_EQ(cert.d, 2);
    EXPECT_EQ(cert.images[0], mono(q(), 1, 2));
    EXPECT_EQ(cert.images[1], mono(q(), 1, 3));
}

TEST(Embed, HiddenCoefficientReclassified) {
    auto prob = problem(qu(), q(), {poly(qu(), {0, u(), 1}), mono(qu(), 1, 3)});
    auto cert = construct_embedding(prob);
    ASSERT_FALSE(cert.rejected.empty());
    EXPECT_EQ(cert.rejected[0].u0, "0");
    EXPECT_EQ(cert.rejected[0].reason, "rank drop at degree 6");
    EXPECT_EQ(cert.rejected[0].witness, "3*u*s^5 + 3*u^2*s^4 + u^3*s^3");
    EXPECT_EQ(cert.kind, EmbedCase::AlgebraicCoefficients);
    EXPECT_EQ(cert.field, qu());
    EXPECT_EQ(cert.images[0], prob.presentation.gens[0]);
    EXPECT_EQ(cert.images[1], prob.presentation.gens[1]);
}

TEST(Embed, Specialized) {
    auto cert = construct_embedding(problem(qu(), q(), {poly(qu(), {0, u(), 1})}));
    EXPECT_EQ(cert.kind, EmbedCase::Specialized);
    ASSERT_TRUE(cert.u0.has_value());
    EXPECT_TRUE(cert.u0->is_zero());
    EXPECT_EQ(cert.field, q());
    EXPECT_EQ(cert.images[0], mono(q(), 1, 2));
}

TEST(Embed, Reparametrized) {
    auto cert = construct_embedding(problem(qu(), q(), {mono(qu(), u(), 2), mono(qu(), 1, 3)}));
    EXPECT_EQ(cert.kind, EmbedCase::AlgebraicCoefficients);
    ASSERT_EQ(cert.adjunctions.size(), 1u);
    EXPECT_EQ(cert.adjunctions[0].kind, "reparametrization");
    EXPECT_EQ(cert.field->kind(), StepKind::Transcendental);
    EXPECT_EQ(cert.images[0], mono(cert.field, 1, 2));
    EXPECT_EQ(cert.coefficient_map(u()), cert.c.pow(2));
}

TEST(Embed, NoReparametrizationWhenUIsACoefficient) {
    auto cert = construct_embedding(problem(qu(), qu(), {mono(qu(), u(), 2), mono(qu(), 1, 3)}));
    ASSERT_EQ(cert.adjunctions.size(), 1u);
    EXPECT_EQ(cert.adjunctions[0].kind, "algebraic");
    EXPECT_EQ(cert.c.pow(2), cert.field->lift(u()));
}

TEST(Verify, TamperedImageFailsHomomorphism) {
    const TowerPtr K = sqrt2();
    const FieldElement a = K->generator();
    auto prob = problem(K, q(), {mono(K, a, 2), mono(K, a, 3)}, 10);
    auto cert = construct_embedding(prob);
    cert.images[1] = mono(cert.field, 1, 2);
    auto rep = verify_certificate(prob, cert);
    EXPECT_FALSE(rep.passed);
    ASSERT_NE(rep.first_failure(), nullptr);
    EXPECT_EQ(rep.first_failure()->name, "homomorphism");
}

TEST(Verify, TamperedSpecializationFailsDegrees) {
    auto prob = problem(qu(), q(), {poly(qu(), {0, u(), 1})});
    auto cert = construct_embedding(prob);
    cert.images[0] = mono(q(), 1, 3);
    auto rep = verify_certificate(prob, cert);
    ASSERT_NE(rep.first_failure(), nullptr);
    EXPECT_EQ(rep.first_failure()->name, "degrees");
}

TEST(EmbedProperty, DegreesPreservedOnRandomElements) {
    const TowerPtr K = sqrt2();
    const FieldElement a = K->generator();
    std::vector<EmbeddingProblem> probs{
        problem(K, q(), {mono(K, a, 2), mono(K, a, 3)}, 10),
        problem(q(), q(), {poly(q(), {0, 0, 1, 0, 1}), mono(q(), 3, 6)}),
        problem(qu(), q(), {poly(qu(), {0, u(), 1}), mono(qu(), 1, 3)}),
    };
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> ex(0, 3), co(-4, 4);
    for (const auto& prob : probs) {
        auto cert = construct_embedding(prob);
        const auto& gens = prob.presentation.gens;
        for (int trial = 0; trial < 50; ++trial) {
            GenExpression expr;
            for (int term = 0; term < 3; ++term) {
                std::vector<int> e(gens.size());
                for (auto& x : e) x = ex(rng);
                int c = co(rng);
                if (c != 0) expr[e] = prob.presentation.coeff->from_rational(Rational(c));
            }
            KPoly f = evaluate(expr, gens, prob.presentation.ambient);
            KPoly g = evaluate(expr, cert.images, cert.field);
            if (f.is_zero()) {
                EXPECT_TRUE(g.is_zero());
                continue;
            }
            EXPECT_EQ(f.degree(), cert.t_weight * g.degree());
        }
    }
}
