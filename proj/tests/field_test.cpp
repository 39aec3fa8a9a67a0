// Copyright 2026 The polyembed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "polyembed/field.hpp"

using namespace polyembed;

namespace {

KPoly kp(const TowerPtr& t, std::initializer_list<long> c) {
    std::vector<FieldElement> v;
    for (long x : c) v.push_back(t->from_rational(Rational(x)));
    return KPoly(v, t->zero());
}

}  // namespace

TEST(Field, QuadraticExtensionArithmetic) {
    auto q = Tower::rationals();
    auto k = Tower::extend_algebraic(q, "a", kp(q, {-2, 0, 1}));
    FieldElement a = k->generator();
    EXPECT_EQ(a * a, k->from_rational(2));
    FieldElement x = a + FieldElement(1);
    EXPECT_EQ(x * x.inverse(), k->one());
    EXPECT_EQ((x * x).to_string(), "2*a + 3");
}

TEST(Field, RationalFunctionField) {
    auto q = Tower::rationals();
    auto k = Tower::extend_algebraic(q, "a", kp(q, {-2, 0, 1}));
    auto ku = Tower::extend_transcendental(k, "u");
    FieldElement u = ku->generator(), a = k->generator();
    FieldElement f = (u * u - FieldElement(2)) / (u - a);
    EXPECT_EQ(f, u + a);
    EXPECT_EQ(derivative_u(f), ku->one());
    EXPECT_THROW(Tower::extend_transcendental(ku, "v"), Error);
}

TEST(Field, ImplicitDerivativeAboveTranscendental) {
    auto q = Tower::rationals();
    auto qu = Tower::extend_transcendental(q, "u");
    FieldElement u = qu->generator();
    KPoly m(std::vector<FieldElement>{-u, qu->zero(), qu->one()}, qu->zero());  // c^2 = u
    auto t = Tower::extend_algebraic(qu, "c", m);
    FieldElement c = t->generator();
    // d/du sqrt(u) = 1/(2c)
    EXPECT_EQ(derivative_u(c) * c * FieldElement(2), t->one());
}

TEST(Field, SpecializationMap) {
    auto q = Tower::rationals();
    auto qu = Tower::extend_transcendental(q, "u");
    FieldElement u = qu->generator();
    TowerMap at2(qu, q, {q->from_rational(2)});
    EXPECT_EQ(at2((u * u + FieldElement(1)) / (u + FieldElement(1))), FieldElement(Rational(5, 3)));
    TowerMap at1(qu, q, {q->from_rational(-1)});
    EXPECT_THROW(at1(FieldElement(1) / (u + FieldElement(1))), Error);
}

TEST(Field, CoordinatesAndCommonDenominator) {
    auto q = Tower::rationals();
    auto qu = Tower::extend_transcendental(q, "u");
    auto k = Tower::extend_algebraic(qu, "b", KPoly(std::vector<FieldElement>{qu->from_rational(-3), qu->zero(), qu->one()}, qu->zero()));
    FieldElement u = qu->generator(), b = k->generator();
    FieldElement x = b / u + FieldElement(1) / (u + FieldElement(1));
    FieldElement d = common_denominator({x}, k);
    auto coords = coordinates(x * d, *q, *k);
    EXPECT_FALSE(coords.empty());
    FieldElement back = k->zero();
    for (auto& [key, v] : coords) back = back + v * u.pow(key[0]) * b.pow(key[1]);
    EXPECT_EQ(back, x * d);
}
