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

#ifndef POLYEMBED_LINALG_HPP
#define POLYEMBED_LINALG_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace polyembed {

/*
 * Row echelon form over sparse vectors with ordered column keys.
 *
 * Every stored row remembers how it was built from the inserted vectors
 * (a combination over their integer tags), so a dependent insertion yields
 * an explicit linear relation and a reduction yields an explicit
 * expression. Pivots are the smallest key of each row.
 */
template <class Key, class F>
class SparseEchelon {
public:
    using Vec = std::map<Key, F>;
    using Expr = std::map<int, F>;
    struct Row {
        Vec v;
        Expr expr;
    };

    /// Adds `v` (tagged `tag`). Returns the relation sum expr[t]*vec[t] = 0 when v is dependent.
    std::optional<Expr> insert(Vec v, int tag, const F& one) {
        Expr expr{{tag, one}};
        eliminate(v, expr, false);
        if (v.empty()) return expr;
        const Key pivot = v.begin()->first;
        const F inv = one / v.begin()->second;
        scale(v, inv);
        scale(expr, inv);
        rows_.emplace(pivot, Row{std::move(v), std::move(expr)});
        return std::nullopt;
    }

    /// Reduces v against all pivots: v = residue + sum expr[t]*vec[t].
    std::pair<Vec, Expr> reduce(Vec v) const {
        Expr expr;
        eliminate(v, expr, true);
        return {std::move(v), std::move(expr)};
    }

    /// Makes every pivot column zero outside its own row.
    void to_rref() {
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            const Key& p = it->first;
            const Row& prow = it->second;
            for (auto jt = rows_.begin(); jt != rows_.end() && jt->first < p; ++jt) {
                auto hit = jt->second.v.find(p);
                if (hit == jt->second.v.end()) continue;
                const F c = hit->second;
                axpy(jt->second.v, prow.v, c);
                axpy(jt->second.expr, prow.expr, c);
            }
        }
    }

    const std::map<Key, Row>& rows() const { return rows_; }
    std::size_t rank() const { return rows_.size(); }

    template <class M>
    static void axpy(M& target, const M& source, const F& c) {
        for (const auto& [k, x] : source) {
            auto it = target.find(k);
            if (it == target.end()) {
                target.emplace(k, -(c * x));
            } else {
                it->second = it->second - c * x;
                if (adl::zero_test(it->second)) target.erase(it);
            }
        }
    }

private:
    template <class M>
    static void scale(M& m, const F& c) {
        for (auto& [k, x] : m) x = x * c;
    }

    /// Subtracts pivot rows from v; `add` chooses the sign of the tracked expression.
    void eliminate(Vec& v, Expr& expr, bool add) const {
        auto it = v.begin();
        while (it != v.end()) {
            auto row = rows_.find(it->first);
            if (row == rows_.end()) {
                ++it;
                continue;
            }
            const Key k = it->first;
            const F c = it->second;
            axpy(v, row->second.v, c);
            if (add) axpy(expr, row->second.expr, -c);
            else axpy(expr, row->second.expr, c);
            it = v.upper_bound(k);
        }
    }

    std::map<Key, Row> rows_;
};

/*
 * Dense exact linear systems. Columns are unknowns; returns a particular
 * solution of A x = b (if any) and a basis of the nullspace of A.
 */
template <class F>
struct LinearSolution {
    std::optional<std::vector<F>> particular;
    std::vector<std::vector<F>> nullspace;
};

template <class F>
LinearSolution<F> solve_linear(std::vector<std::vector<F>> a, std::vector<F> b, std::size_t ncols, const F& zero) {
    const F one = one_like(zero);
    const std::size_t nrows = a.size();
    for (auto& row : a) row.resize(ncols, zero);
    b.resize(nrows, zero);
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < nrows; ++c) {
        std::size_t p = r;
        while (p < nrows && adl::zero_test(a[p][c])) ++p;
        if (p == nrows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        const F inv = one / a[r][c];
        for (std::size_t j = c; j < ncols; ++j) a[r][j] = a[r][j] * inv;
        b[r] = b[r] * inv;
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == r || adl::zero_test(a[i][c])) continue;
            const F f = a[i][c];
            for (std::size_t j = c; j < ncols; ++j) a[i][j] = a[i][j] - f * a[r][j];
            b[i] = b[i] - f * b[r];
        }
        pivots.push_back(c);
        ++r;
    }
    LinearSolution<F> out;
    bool consistent = true;
    for (std::size_t i = r; i < nrows; ++i)
        if (!adl::zero_test(b[i])) consistent = false;
    if (consistent) {
        std::vector<F> x(ncols, zero);
        for (std::size_t i = 0; i < r; ++i) x[pivots[i]] = b[i];
        out.particular = std::move(x);
    }
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<F> v(ncols, zero);
        v[free] = one;
        for (std::size_t i = 0; i < r; ++i) v[pivots[i]] = -a[i][free];
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

/// Rank by fraction-free (Bareiss) elimination; independent of the routines above.
template <class F>
std::size_t bareiss_rank(std::vector<std::vector<F>> m, const F& zero) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    F prev = one_like(zero);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && adl::zero_test(m[p][c])) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) m[i][j] = (m[rank][c] * m[i][j] - m[i][c] * m[rank][j]) / prev;
            m[i][c] = zero;
        }
        prev = m[rank][c];
        ++rank;
    }
    return rank;
}

}  // namespace polyembed

#endif  // POLYEMBED_LINALG_HPP
