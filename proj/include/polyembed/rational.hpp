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

#ifndef POLYEMBED_RATIONAL_HPP
#define POLYEMBED_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

namespace polyembed {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Exact e-th root of an integer, if one exists.
inline std::optional<Integer> integer_root(const Integer& n, unsigned long e) {
    if (e == 0) return std::nullopt;
    if (sgn(n) < 0) {
        if (e % 2 == 0) return std::nullopt;
        auto r = integer_root(Integer(-n), e);
        if (!r) return std::nullopt;
        return Integer(-*r);
    }
    Integer r;
    if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), e) == 0) return std::nullopt;
    return r;
}

/// Exact e-th root of a rational number, if one exists.
inline std::optional<Rational> rational_root(const Rational& q, unsigned long e) {
    auto n = integer_root(q.get_num(), e);
    auto d = integer_root(q.get_den(), e);
    if (!n || !d) return std::nullopt;
    Rational r(*n, *d);
    r.canonicalize();
    return r;
}

}  // namespace polyembed

#endif  // POLYEMBED_RATIONAL_HPP
