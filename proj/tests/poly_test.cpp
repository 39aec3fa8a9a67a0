// Copyright 2026 The polyembed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "polyembed/poly.hpp"

using namespace polyembed;
using P = Poly<Rational>;

namespace {

P from(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return P(v, Rational(0));
}

}  // namespace

TEST(Poly, DivmodRoundTrip) {
    P a = from({1, 2, 0, 5, 3}), b = from({-1, 0, 2});
    auto [q, r] = P::divmod(a, b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
}

TEST(Poly, GcdAndExtendedGcd) {
    P f = from({-1, 0, 1}), g = from({1, 2, 1});  // (x-1)(x+1), (x+1)^2
    EXPECT_EQ(gcd(f, g), from({1, 1}));
    auto [d, s, t] = ext_gcd(f, g);
    EXPECT_EQ(s * f + t * g, d);
}

// Sylvester determinant of two quadratics, expanded by hand.
TEST(Poly, ResultantMatchesSylvester) {
    P f = from({2, -3, 1}), g = from({5, 1, 1});
    // det [[1,-3,2,0],[0,1,-3,2],[1,1,5,0],[0,1,1,5]]
    const long a = 1, b = -3, c = 2, d = 1, e = 1, h = 5;
    long sylvester = (a * h - c * d) * (a * h - c * d) - (a * e - b * d) * (b * h - c * e);
    EXPECT_EQ(resultant(f, g), Rational(sylvester));
}

TEST(Poly, SquarefreeDecomposition) {
    P f = from({1, 1}) * from({-2, 1}).pow(2) * from({3, 0, 1}).pow(3);
    auto parts = squarefree_decomposition(f);
    ASSERT_EQ(parts.size(), 3u);
    EXPECT_EQ(parts[0], from({1, 1}));
    EXPECT_EQ(parts[1], from({-2, 1}));
    EXPECT_EQ(parts[2], from({3, 0, 1}));
}

TEST(Poly, InterpolationRecoversPolynomial) {
    P f = from({7, -1, 0, 2});
    std::vector<Rational> xs, ys;
    for (long i = 0; i < 4; ++i) {
        xs.emplace_back(i * 3 - 2);
        ys.push_back(f.eval(xs.back()));
    }
    EXPECT_EQ(interpolate(xs, ys), f);
}

TEST(Poly, RightDecomposition) {
    P h = from({0, 1, 0, 1});  // s^3 + s
    P g = from({1, 2, 1});
    P f = g.compose(h);
    auto gh = decompose_right(f, 3);
    ASSERT_TRUE(gh.has_value());
    EXPECT_EQ(gh->second, h);
    EXPECT_EQ(gh->first, g);
    EXPECT_FALSE(decompose_right(from({1, 0, 0, 1, 0, 0, 1}) + from({0, 1}), 3).has_value());
    EXPECT_THROW(decompose_right(f, 4), Error);
}
