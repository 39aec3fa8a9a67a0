// Copyright 2026 The polyembed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "polyembed/lnd.hpp"
#include "test_util.hpp"

using namespace polyembed;
using namespace testutil;

namespace {

MPoly var(int n, int i) { return MPoly::variable(n, i); }
MPoly cst(int n, long c) { return MPoly::constant(n, Rational(c)); }

// D = x d/dy on Q[x, y]
PolyDerivation x_dy() { return {{"x", "y"}, {cst(2, 0), var(2, 0)}}; }

MPoly random_mpoly(int n, int maxdeg, std::mt19937_64& rng, int terms = 5) {
    std::uniform_int_distribution<int> e(0, maxdeg), c(-6, 6);
    MPoly p(n);
    for (int t = 0; t < terms; ++t) {
        MPoly::Exp ex(static_cast<std::size_t>(n));
        int left = maxdeg;
        for (auto& x : ex) {
            x = std::min(e(rng), left);
            left -= x;
        }
        p.add_term(ex, Rational(c(rng)));
    }
    return p;
}

Poly<Rational> qpoly(std::vector<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return Poly<Rational>(v, Rational(0));
}

Poly<Rational> theta_pow(int k) { return Poly<Rational>::monomial(Rational(1), k); }

// R = k[theta^2, theta^3] inside Q[theta, x]
CurveExtension cusp(std::vector<MPoly> gen_images, std::vector<MPoly> var_images, int n = 1) {
    CurveExtension ce;
    ce.gens = {theta_pow(2), theta_pow(3)};
    ce.n = n;
    ce.gen_images = std::move(gen_images);
    ce.var_images = std::move(var_images);
    return ce;
}

}  // namespace

TEST(Derivation, Leibniz) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        PolyDerivation d{{"x", "y", "z"}, {random_mpoly(3, 3, rng), random_mpoly(3, 3, rng), random_mpoly(3, 3, rng)}};
        MPoly f = random_mpoly(3, 4, rng), g = random_mpoly(3, 4, rng);
        EXPECT_EQ(d.apply(f * g), f * d.apply(g) + g * d.apply(f));
    }
}

TEST(Nilpotency, Examples) {
    auto v = is_locally_nilpotent(x_dy(), 3);
    EXPECT_EQ(v.verdict, Nilpotency::ProvenNilpotent);
    EXPECT_EQ(v.indices, (std::vector<int>{1, 2}));

    PolyDerivation eigen{{"y"}, {var(1, 0)}};
    auto e = is_locally_nilpotent(eigen, 5);
    EXPECT_EQ(e.verdict, Nilpotency::ProvenNot);
    EXPECT_FALSE(e.witness.empty());

    PolyDerivation tri{{"x", "y"}, {var(2, 1).pow(2), cst(2, 1)}};
    auto t = is_locally_nilpotent(tri, 4);
    EXPECT_EQ(t.verdict, Nilpotency::ProvenNilpotent);
    EXPECT_EQ(t.indices, (std::vector<int>{4, 2}));
}

TEST(Nilpotency, NonTriangular) {
    // (x + y)(d/dx - d/dy) is locally nilpotent but every image involves its own variable
    MPoly xy = var(2, 0) + var(2, 1);
    PolyDerivation d{{"x", "y"}, {xy, -xy}};
    auto v = is_locally_nilpotent(d);
    EXPECT_FALSE(v.triangular);
    EXPECT_EQ(v.verdict, Nilpotency::ProvenNilpotent);
    EXPECT_EQ(v.indices, (std::vector<int>{2, 2}));
    EXPECT_EQ(is_locally_nilpotent(d, 1).verdict, Nilpotency::UnknownAtBound);

    PolyDerivation rot{{"x", "y"}, {var(2, 1), -var(2, 0)}};
    EXPECT_EQ(is_locally_nilpotent(rot).verdict, Nilpotency::ProvenNot);
}

TEST(Slice, Examples) {
    const auto d = x_dy();
    SliceData sl = make_slice(d, var(2, 1));
    EXPECT_EQ(sl.ds, var(2, 0));

    auto sq = slice_expansion(d, sl, var(2, 1).pow(2));
    ASSERT_EQ(sq.size(), 3u);
    EXPECT_TRUE(sq[0].num.is_zero());
    EXPECT_TRUE(sq[1].num.is_zero());
    EXPECT_EQ(sq[2].num, cst(2, 1));
    EXPECT_EQ(sq[2].power, 0);

    auto k = slice_expansion(d, sl, var(2, 0));
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k[0].num, var(2, 0));

    auto lin = slice_expansion(d, sl, var(2, 0) * var(2, 1) + var(2, 1));
    ASSERT_EQ(lin.size(), 2u);
    EXPECT_TRUE(lin[0].num.is_zero());
    EXPECT_EQ(lin[1].num, var(2, 0) + cst(2, 1));
    EXPECT_EQ(lin[1].power, 0);
}

TEST(Slice, RejectsNonSlice) {
    EXPECT_THROW(make_slice(x_dy(), var(2, 0)), Error);
    EXPECT_THROW(make_slice(x_dy(), var(2, 1).pow(2)), Error);
}

TEST(Slice, ReconstructsRandomElements) {
    // oracle: with s = y the coefficient a_i is the y^i-coefficient of b, a polynomial in x
    const auto d = x_dy();
    SliceData sl = make_slice(d, var(2, 1));
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        MPoly b = random_mpoly(2, 8, rng, 6);
        auto coeffs = slice_expansion(d, sl, b);
        std::map<int, MPoly> by_y;
        for (const auto& [e, c] : b.terms()) {
            auto it = by_y.emplace(e[1], MPoly(2)).first;
            it->second.add_term({e[0], 0}, c);
        }
        MPoly acc(2);
        int P = 0;
        for (const auto& a : coeffs) P = std::max(P, a.power);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            MPoly expect = by_y.count(static_cast<int>(i)) ? by_y.at(static_cast<int>(i)) : MPoly(2);
            EXPECT_EQ(coeffs[i].num, expect * sl.ds.pow(static_cast<unsigned>(coeffs[i].power)));
            EXPECT_TRUE(d.apply(coeffs[i].num).is_zero());
            acc += coeffs[i].num * sl.s.pow(static_cast<unsigned>(i)) * sl.ds.pow(static_cast<unsigned>(P - coeffs[i].power));
        }
        EXPECT_EQ(acc, b * sl.ds.pow(static_cast<unsigned>(P)));
    }
}

TEST(Slice, LocalizedCoefficients) {
    // D = x d/dy + y d/dz, s = z has Ds = y, not a slice; s = y is one with Ds = x
    PolyDerivation d{{"x", "y", "z"}, {cst(3, 0), var(3, 0), var(3, 1)}};
    SliceData sl = make_slice(d, var(3, 1));
    auto coeffs = slice_expansion(d, sl, var(3, 2));
    // z = (2xz - y^2)/(2x) + (1/x) y^2 / 2 ... exact recheck happens inside; check kernel and powers
    ASSERT_EQ(coeffs.size(), 3u);
    EXPECT_EQ(coeffs[2].power, 1);
    EXPECT_EQ(coeffs[2].num, MPoly::constant(3, make_rational(1, 2)));
    EXPECT_EQ(coeffs[0].power, 1);
}

TEST(Slice, LinearOnBinaryForms) {
    const auto d = x_dy();
    for (int i = 2; i <= 3; ++i)
        for (int a = 0; a <= i; ++a) {
            MPoly img = d.apply(MPoly::monomial(2, {a, i - a}, Rational(1)));
            for (const auto& [e, c] : img.terms()) EXPECT_EQ(e[0] + e[1], i);
        }
}

TEST(DfInFb, Examples) {
    EXPECT_EQ(df_in_fb_check(x_dy(), var(2, 0)).verdict, DfVerdict::Kernel);
    EXPECT_EQ(df_in_fb_check(x_dy(), var(2, 1)).verdict, DfVerdict::NotDivisible);
    PolyDerivation tri{{"x", "y"}, {var(2, 1).pow(2), cst(2, 1)}};
    EXPECT_EQ(df_in_fb_check(tri, var(2, 1)).verdict, DfVerdict::NotDivisible);
    PolyDerivation eigen{{"y"}, {var(1, 0)}};
    EXPECT_EQ(df_in_fb_check(eigen, var(1, 0)).verdict, DfVerdict::Violated);
}

TEST(Extension, EulerType) {
    const MPoly th = var(1, 0);
    auto ext = extend_to_normalization(cusp({th.pow(2).scaled(Rational(2)), th.pow(3).scaled(Rational(3))}, {}, 0));
    EXPECT_EQ(ext.extended.images[0], th);
    EXPECT_EQ(ext.output.verdict, Nilpotency::ProvenNot);
    EXPECT_FALSE(ext.vasconcelos_checked);
}

TEST(Extension, NormalAndZero) {
    CurveExtension line;
    line.gens = {theta_pow(1)};
    line.n = 0;
    line.gen_images = {cst(1, 1)};
    auto a = extend_to_normalization(line);
    EXPECT_EQ(a.extended.images[0], cst(1, 1));
    EXPECT_EQ(a.output.verdict, Nilpotency::ProvenNilpotent);

    auto z = extend_to_normalization(cusp({MPoly(1), MPoly(1)}, {}, 0));
    EXPECT_TRUE(z.extended.images[0].is_zero());
    EXPECT_EQ(z.output.verdict, Nilpotency::ProvenNilpotent);
    EXPECT_TRUE(z.vasconcelos_checked);
}

TEST(Extension, NotClosed) {
    // D(theta^2) = theta leaves R
    try {
        extend_to_normalization(cusp({var(1, 0), MPoly(1)}, {}, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotClosed);
    }
}

TEST(Stability, Examples) {
    const MPoly th = var(2, 0);
    auto ext = extend_to_normalization(cusp({MPoly(2), MPoly(2)}, {cst(2, 1)}));
    auto cond = conductor(ext.norm, 10);
    auto st = conductor_stability(ext, cond);
    EXPECT_EQ(st.h, th.pow(2));
    EXPECT_TRUE(st.dh_zero);
    EXPECT_TRUE(st.stable);

    const MPoly t1 = var(1, 0);
    auto euler = extend_to_normalization(cusp({t1.pow(2).scaled(Rational(2)), t1.pow(3).scaled(Rational(3))}, {}, 0));
    auto se = conductor_stability(euler, conductor(euler.norm, 10));
    EXPECT_TRUE(se.stable);
    EXPECT_FALSE(se.dh_zero);
    ASSERT_TRUE(se.quotient.has_value());
    EXPECT_EQ(*se.quotient, cst(1, 2));
}

TEST(Cancellation, CuspWithDx) {
    auto tr = cancellation_trace(cusp({MPoly(2), MPoly(2)}, {cst(2, 1)}));
    EXPECT_EQ(tr.verdict, "D consistent with rigidity of R");
    EXPECT_FALSE(tr.h_is_unit);
    for (const auto& s : tr.steps) EXPECT_TRUE(s.verified) << s.name;
    EXPECT_EQ(tr.steps.back().statement, "Dh = 0; h = θ² ∉ k*; D kills R");
}

TEST(Cancellation, CuspWithThetaSquared) {
    auto tr = cancellation_trace(cusp({MPoly(2), MPoly(2)}, {var(2, 0).pow(2)}));
    EXPECT_EQ(tr.verdict, "D consistent with rigidity of R");
    EXPECT_EQ(tr.steps.back().statement, "Dh = 0; h = θ² ∉ k*; D kills R");
}

TEST(Cancellation, NormalRing) {
    CurveExtension line;
    line.gens = {theta_pow(1)};
    line.n = 1;
    line.gen_images = {MPoly(2)};
    line.var_images = {cst(2, 1)};
    auto tr = cancellation_trace(line);
    EXPECT_TRUE(tr.h_is_unit);
    EXPECT_EQ(tr.verdict, "R normal, no obstruction");
}

TEST(Cancellation, RejectsNonNilpotent) {
    const MPoly th = var(2, 0);
    auto ce = cusp({th.pow(2).scaled(Rational(2)), th.pow(3).scaled(Rational(3))}, {MPoly(2)});
    try {
        cancellation_trace(ce);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PreconditionFailed);
    }
}

TEST(SeidenbergVasconcelos, RandomTriangular) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> co(-3, 3);
    std::uniform_int_distribution<int> dg(2, 3);
    for (int trial = 0; trial < 20; ++trial) {
        CurveExtension ce;
        ce.n = 2;
        const int nv = 3;
        auto rpoly_in = [&](const MPoly& base, int deg) {
            MPoly out(nv);
            for (int i = 0; i <= deg; ++i) out += base.pow(static_cast<unsigned>(i)).scaled(Rational(co(rng)));
            return out;
        };
        if (trial % 2 == 0) {
            // R = k[p], normal; D moves p by a constant
            Poly<Rational> p = qpoly({0, co(rng), co(rng), 1});
            ce.gens = {p};
            MPoly pm = MPoly::from_univariate(p, nv, 0);
            long c = co(rng);
            ce.gen_images = {cst(nv, c == 0 ? 1 : c)};
            ce.var_images = {rpoly_in(pm, 2), rpoly_in(pm, 1) * var(nv, 1) + rpoly_in(pm, 2)};
        } else {
            // non-normal R, D kills R and is triangular on the x's
            const int a = dg(rng);
            ce.gens = {theta_pow(a), theta_pow(a + 1)};
            ce.gen_images = {MPoly(nv), MPoly(nv)};
            MPoly g = MPoly::from_univariate(theta_pow(a), nv, 0);
            ce.var_images = {rpoly_in(g, 2), rpoly_in(g, 1) * var(nv, 1).pow(2) + rpoly_in(g, 1)};
        }
        auto ext = extend_to_normalization(ce);
        ASSERT_EQ(ext.input.verdict, Nilpotency::ProvenNilpotent) << trial;
        EXPECT_TRUE(ext.vasconcelos_checked);
        EXPECT_EQ(ext.output.verdict, Nilpotency::ProvenNilpotent) << ext.extended.to_string();
    }
}

TEST(MlIntersection, Examples) {
    auto a = ml_intersection({x_dy()}, 2, 3);
    ASSERT_EQ(a.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(a[static_cast<std::size_t>(i)], var(2, 0).pow(static_cast<unsigned>(i)));

    PolyDerivation y_dx{{"x", "y"}, {var(2, 1), cst(2, 0)}};
    auto b = ml_intersection({x_dy(), y_dx}, 2, 2);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0], cst(2, 1));

    EXPECT_EQ(ml_intersection({}, 2, 2).size(), 6u);
}

TEST(SlicePipeline, AlgebraicClosureOfYSquared) {
    const MPoly y = var(2, 1);
    auto res = slice_pipeline(x_dy(), y, y.pow(2), {y.pow(2), y.pow(3)});
    ASSERT_TRUE(res.normalization.has_value());
    EXPECT_EQ(res.normalization->theta, mono(q(), 1, 1));
    EXPECT_TRUE(res.certificate.verification.passed);
    EXPECT_EQ(res.statement, "Alg_{k[y^2]}B ⊂ k[y]");
    auto sg = degree_data(res.presentation, 12);
    EXPECT_EQ(sg.generators, (std::vector<int>{2, 3}));
}

TEST(SlicePipeline, RejectsTranscendentalGenerator) {
    const MPoly y = var(2, 1);
    EXPECT_THROW(slice_pipeline(x_dy(), y, y.pow(2), {var(2, 0)}), Error);
}
