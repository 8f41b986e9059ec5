#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "torsionlab/integer.hpp"
#include "torsionlab/matrix.hpp"

namespace torsionlab {

/// U A V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... >= 0.
struct SmithDecomposition {
  Matrix<Integer> U, V, D;
  std::vector<Integer> invariant_factors;  ///< min(rows, cols) diagonal entries of D
  std::size_t rank = 0;
};

/// Invariant factors of the cokernel Z^rows / A Z^cols.
struct CokernelInvariants {
  std::vector<Integer> invariant_factors;  ///< nonzero factors, ascending by divisibility
  std::size_t rank = 0;
  std::size_t rows = 0;

  std::size_t betti() const { return rows - rank; }
  Integer torsion_order() const {
    Integer t(1);
    for (const auto& d : invariant_factors) t *= d;
    return t;
  }
};

namespace detail {

// Euclidean row/column reduction with the smallest nonzero entry as pivot.
// Transforms are recorded only when U / V are non-null.
inline void smith_reduce(Matrix<Integer>& d, Matrix<Integer>* u, Matrix<Integer>* v) {
  const std::size_t m = d.rows(), n = d.cols();
  Integer q;
  for (std::size_t s = 0; s < std::min(m, n); ++s) {
    while (true) {
      // smallest nonzero |entry| in the trailing block
      std::size_t pi = m, pj = n;
      for (std::size_t i = s; i < m; ++i)
        for (std::size_t j = s; j < n; ++j) {
          const Integer& x = d(i, j);
          if (x == 0) continue;
          if (pi == m || mpz_cmpabs(x.get_mpz_t(), d(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
            if (abs(x) == 1) break;
          }
        }
      if (pi == m) return;  // trailing block is zero
      d.swap_rows(s, pi);
      if (u) u->swap_rows(s, pi);
      d.swap_cols(s, pj);
      if (v) v->swap_cols(s, pj);

      bool clean = true;
      for (std::size_t i = s + 1; i < m; ++i) {
        if (d(i, s) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), d(i, s).get_mpz_t(), d(s, s).get_mpz_t());
        if (q != 0) {
          for (std::size_t j = s; j < n; ++j)
            if (d(s, j) != 0) mpz_submul(d(i, j).get_mpz_t(), q.get_mpz_t(), d(s, j).get_mpz_t());
          if (u)
            for (std::size_t j = 0; j < m; ++j)
              if ((*u)(s, j) != 0) mpz_submul((*u)(i, j).get_mpz_t(), q.get_mpz_t(), (*u)(s, j).get_mpz_t());
        }
        if (d(i, s) != 0) clean = false;
      }
      for (std::size_t j = s + 1; j < n; ++j) {
        if (d(s, j) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), d(s, j).get_mpz_t(), d(s, s).get_mpz_t());
        if (q != 0) {
          for (std::size_t i = s; i < m; ++i)
            if (d(i, s) != 0) mpz_submul(d(i, j).get_mpz_t(), q.get_mpz_t(), d(i, s).get_mpz_t());
          if (v)
            for (std::size_t i = 0; i < n; ++i)
              if ((*v)(i, s) != 0) mpz_submul((*v)(i, j).get_mpz_t(), q.get_mpz_t(), (*v)(i, s).get_mpz_t());
        }
        if (d(s, j) != 0) clean = false;
      }
      if (!clean) continue;

      // the pivot must divide the whole trailing block
      std::optional<std::size_t> bad;
      for (std::size_t i = s + 1; i < m && !bad; ++i)
        for (std::size_t j = s + 1; j < n; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(s, s).get_mpz_t())) {
            bad = i;
            break;
          }
      if (!bad) break;
      for (std::size_t j = s; j < n; ++j) d(s, j) += d(*bad, j);
      if (u)
        for (std::size_t j = 0; j < m; ++j) (*u)(s, j) += (*u)(*bad, j);
    }
    if (d(s, s) < 0) {
      for (std::size_t j = s; j < n; ++j) d(s, j) = -d(s, j);
      if (u)
        for (std::size_t j = 0; j < m; ++j) (*u)(s, j) = -(*u)(s, j);
    }
  }
}

}  // namespace detail

/// Exact Smith normal form with transforms.
inline SmithDecomposition smith_normal_form(const Matrix<Integer>& a) {
  SmithDecomposition out;
  out.D = a;
  out.U = identity(a.rows(), Integer(0), Integer(1));
  out.V = identity(a.cols(), Integer(0), Integer(1));
  detail::smith_reduce(out.D, &out.U, &out.V);
  for (std::size_t s = 0; s < std::min(a.rows(), a.cols()); ++s) {
    out.invariant_factors.push_back(out.D(s, s));
    if (out.D(s, s) != 0) ++out.rank;
  }
  return out;
}

/// Rank over Z/p for a prime p < 2^62.
inline std::size_t modular_rank(const Matrix<Integer>& a, std::uint64_t p) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::uint64_t> w(m * n);
  Integer r;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mpz_fdiv_r_ui(r.get_mpz_t(), a(i, j).get_mpz_t(), p);
      w[i * n + j] = r.get_ui();
    }
  auto mulmod = [p](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * y) % p);
  };
  auto inverse = [&](std::uint64_t x) {
    std::uint64_t result = 1, base = x, e = p - 2;
    while (e) {
      if (e & 1) result = mulmod(result, base);
      base = mulmod(base, base);
      e >>= 1;
    }
    return result;
  };
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t piv = m;
    for (std::size_t i = rank; i < m; ++i)
      if (w[i * n + col] != 0) {
        piv = i;
        break;
      }
    if (piv == m) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(w[piv * n + j], w[rank * n + j]);
    const std::uint64_t inv = inverse(w[rank * n + col]);
    for (std::size_t i = rank + 1; i < m; ++i) {
      const std::uint64_t f = mulmod(w[i * n + col], inv);
      if (f == 0) continue;
      for (std::size_t j = col; j < n; ++j) {
        const std::uint64_t sub = mulmod(f, w[rank * n + j]);
        w[i * n + j] = (w[i * n + j] + p - sub) % p;
      }
    }
    ++rank;
  }
  return rank;
}

/// Cokernel invariants without transforms. Unit pivots are eliminated first
/// on a sparse representation (Markowitz order), which is where block
/// circulant presentations spend almost all their size; the remaining core is
/// reduced densely with minimal pivots. A rank computed modulo a 61-bit prime
/// is checked against the exact result.
inline CokernelInvariants invariant_factors(const Matrix<Integer>& a) {
  using Row = std::vector<std::pair<std::size_t, Integer>>;
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<Row> rows(m);
  std::vector<std::size_t> col_count(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != 0) {
        rows[i].emplace_back(j, a(i, j));
        ++col_count[j];
      }
  std::vector<std::vector<std::size_t>> col_rows(n);  // may contain stale row ids
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& [j, x] : rows[i]) col_rows[j].push_back(i);
  std::vector<bool> row_alive(m, true), col_alive(n, true);
  std::size_t unit_pivots = 0;

  auto entry_in = [](const Row& r, std::size_t col) -> const Integer* {
    auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
    return (it != r.end() && it->first == col) ? &it->second : nullptr;
  };

  while (true) {
    std::size_t best_i = m, best_j = n;
    std::size_t best_cost = SIZE_MAX;
    for (std::size_t i = 0; i < m && best_cost > 0; ++i) {
      if (!row_alive[i]) continue;
      const std::size_t rlen = rows[i].size();
      for (const auto& [j, x] : rows[i]) {
        if (mpz_cmpabs_ui(x.get_mpz_t(), 1) != 0) continue;
        const std::size_t cost = (rlen - 1) * (col_count[j] - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best_i = i;
          best_j = j;
          if (cost == 0) break;
        }
      }
    }
    if (best_i == m) break;
    ++unit_pivots;
    const Row pivot_row = rows[best_i];
    const bool negative = *entry_in(pivot_row, best_j) < 0;
    row_alive[best_i] = false;
    col_alive[best_j] = false;
    for (const auto& [j, x] : pivot_row) --col_count[j];
    rows[best_i].clear();

    std::vector<std::size_t> targets;
    for (std::size_t k : col_rows[best_j])
      if (row_alive[k] && entry_in(rows[k], best_j)) targets.push_back(k);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    col_rows[best_j].clear();

    for (std::size_t k : targets) {
      // row_k -= (a_kj / a_ij) row_i with a_ij = +-1, then drop column j
      Integer factor = *entry_in(rows[k], best_j);
      if (negative) factor = -factor;
      Row merged;
      merged.reserve(rows[k].size() + pivot_row.size());
      auto it = rows[k].begin();
      auto jt = pivot_row.begin();
      while (it != rows[k].end() || jt != pivot_row.end()) {
        if (jt == pivot_row.end() || (it != rows[k].end() && it->first < jt->first)) {
          merged.push_back(std::move(*it));
          ++it;
        } else {
          const std::size_t col = jt->first;
          Integer val;
          bool existed = false;
          if (it != rows[k].end() && it->first == col) {
            val = std::move(it->second);
            existed = true;
            ++it;
          }
          mpz_submul(val.get_mpz_t(), factor.get_mpz_t(), jt->second.get_mpz_t());
          ++jt;
          if (col == best_j) {
            if (existed) --col_count[col];
            continue;
          }
          if (val == 0) {
            if (existed) --col_count[col];
            continue;
          }
          if (!existed) {
            ++col_count[col];
            col_rows[col].push_back(k);
          }
          merged.emplace_back(col, std::move(val));
        }
      }
      rows[k] = std::move(merged);
    }
  }

  std::vector<std::size_t> live_rows, live_cols;
  for (std::size_t i = 0; i < m; ++i)
    if (row_alive[i]) live_rows.push_back(i);
  for (std::size_t j = 0; j < n; ++j)
    if (col_alive[j]) live_cols.push_back(j);
  std::vector<std::size_t> col_pos(n, SIZE_MAX);
  for (std::size_t c = 0; c < live_cols.size(); ++c) col_pos[live_cols[c]] = c;
  Matrix<Integer> core(live_rows.size(), live_cols.size());
  for (std::size_t r = 0; r < live_rows.size(); ++r)
    for (const auto& [j, x] : rows[live_rows[r]]) core(r, col_pos[j]) = x;
  const std::size_t core_rank_mod_p = modular_rank(core, 2305843009213693951ULL);  // 2^61 - 1
  detail::smith_reduce(core, nullptr, nullptr);

  CokernelInvariants out;
  out.rows = m;
  for (std::size_t k = 0; k < unit_pivots; ++k) out.invariant_factors.emplace_back(1);
  out.rank = unit_pivots;
  for (std::size_t s = 0; s < std::min(core.rows(), core.cols()); ++s) {
    if (core(s, s) == 0) continue;
    out.invariant_factors.push_back(core(s, s));
    ++out.rank;
  }
  if (core_rank_mod_p > out.rank - unit_pivots)
    throw std::logic_error("invariant_factors: rank mod p exceeds the exact rank");
  return out;
}

}  // namespace torsionlab
