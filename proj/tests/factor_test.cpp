// Copyright 2026 The polyembed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "polyembed/factor_q.hpp"

using namespace polyembed;
using P = Poly<Rational>;

namespace {

P from(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return P(v, Rational(0));
}

P product(const std::vector<Factor<P>>& fs) {
    P r = from({1});
    for (const auto& f : fs) r = r * f.factor.pow(static_cast<unsigned>(f.multiplicity));
    return r;
}

}  // namespace

TEST(FactorRational, XFourMinusTwoIsIrreducible) {
    P f = from({-2, 0, 0, 0, 1});
    EXPECT_TRUE(is_irreducible_rational(f));
    // brute force: any monic integer quadratic factor has |coeffs| <= 2*2^4
    for (long b = -32; b <= 32; ++b)
        for (long c = -32; c <= 32; ++c) {
            if (c == 0) continue;
            P q = from({c, b, 1});
            EXPECT_NE((f % q).degree() >= 0, false) << "divisor " << q.to_string();
        }
}

TEST(FactorRational, SplitsProducts) {
    P f = from({-1, 0, 1});
    auto fs = factor_rational(f);
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(product(fs), f);

    P g = from({-2, 0, 1}) * from({1, 1, 1}) * from({-2, 0, 1}) * from({3, 0, 0, 1});
    auto gs = factor_rational(g);
    EXPECT_EQ(product(gs), g);
    for (const auto& x : gs) EXPECT_TRUE(is_irreducible_rational(x.factor));
    EXPECT_EQ(gs.size(), 3u);
}

TEST(FactorRational, SwinnertonDyerStyleRecombination) {
    // x^4 - 10x^2 + 1 splits modulo every prime
    P f = from({1, 0, -10, 0, 1});
    EXPECT_TRUE(is_irreducible_rational(f));
    P g = from({-1, 0, 0, 0, 0, 0, 1});  // x^6 - 1
    EXPECT_EQ(factor_rational(g).size(), 4u);
}

TEST(FactorRational, RationalCoefficients) {
    P f = P(std::vector<Rational>{Rational(-1, 4), Rational(0), Rational(1)}, Rational(0));
    auto fs = factor_rational(f);
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(product(fs), f);
}
