#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "torsionlab/integer.hpp"
#include "torsionlab/laurent.hpp"

// Dense univariate algorithms over Z[t]: exact division, remainders, gcd and
// square-free decomposition. Polynomials are ascending coefficient vectors
// with no trailing zeros; the zero polynomial is the empty vector.
namespace torsionlab::poly {

using Dense = std::vector<Integer>;

inline void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::int64_t degree(const Dense& a) { return static_cast<std::int64_t>(a.size()) - 1; }

/// Requires deg_lo >= 0.
inline Dense to_dense(const LaurentPoly& p) {
  if (p.is_zero()) return {};
  Dense out(static_cast<std::size_t>(p.deg_hi() + 1));
  for (const auto& [e, c] : p.terms()) out[static_cast<std::size_t>(e)] = c;
  return out;
}

inline LaurentPoly from_dense(const Dense& a, std::int64_t shift = 0) {
  return LaurentPoly::from_coeffs(std::span<const Integer>(a), shift);
}

/// a = b * q exactly, or nullopt.
inline std::optional<Dense> divide_exact(Dense a, const Dense& b) {
  trim(a);
  if (b.empty()) return std::nullopt;
  if (a.empty()) return Dense{};
  if (a.size() < b.size()) return std::nullopt;
  const Integer& lead = b.back();
  const std::size_t nb = b.size();
  Dense q(a.size() - nb + 1);
  Integer r;
  for (std::size_t k = q.size(); k-- > 0;) {
    Integer& top = a[k + nb - 1];
    if (top == 0) continue;
    mpz_tdiv_r(r.get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
    if (r != 0) return std::nullopt;
    mpz_divexact(q[k].get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
    for (std::size_t i = 0; i < nb; ++i)
      if (b[i] != 0) mpz_submul(a[k + i].get_mpz_t(), q[k].get_mpz_t(), b[i].get_mpz_t());
  }
  for (std::size_t i = 0; i + 1 < nb && i < a.size(); ++i)
    if (a[i] != 0) return std::nullopt;
  trim(q);
  return q;
}

/// Remainder of a modulo a monic polynomial m.
inline Dense rem_monic(Dense a, const Dense& m) {
  trim(a);
  const std::size_t nm = m.size();
  for (std::size_t top = a.size(); top >= nm && top > 0; --top) {
    const std::size_t k = top - 1;
    if (a[k] == 0) continue;
    const Integer f = a[k];
    const std::size_t base = k + 1 - nm;
    for (std::size_t i = 0; i < nm; ++i)
      if (m[i] != 0) mpz_submul(a[base + i].get_mpz_t(), f.get_mpz_t(), m[i].get_mpz_t());
  }
  trim(a);
  return a;
}

inline Integer content(const Dense& a) {
  Integer g(0);
  for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

/// Divides out the content and makes the leading coefficient positive.
inline Dense primitive_part(Dense a) {
  trim(a);
  if (a.empty()) return a;
  Integer g = content(a);
  if (a.back() < 0) g = -g;
  for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return a;
}

inline Dense derivative(const Dense& a) {
  Dense d;
  for (std::size_t k = 1; k < a.size(); ++k) d.push_back(a[k] * static_cast<unsigned long>(k));
  trim(d);
  return d;
}

inline Dense subtract(Dense a, const Dense& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
  trim(a);
  return a;
}

/// Primitive part of the pseudo-remainder of a by b.
inline Dense primitive_prem(Dense a, const Dense& b) {
  trim(a);
  const Integer& lb = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    const Integer la = a.back();
    const std::size_t shift = a.size() - b.size();
    for (auto& c : a) c *= lb;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= la * b[i];
    trim(a);
    if (!a.empty()) {
      Integer g = content(a);
      if (g != 1)
        for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
  }
  return a;
}

/// Primitive gcd (positive leading coefficient) via the primitive remainder sequence.
inline Dense gcd_primitive(Dense a, Dense b) {
  a = primitive_part(std::move(a));
  b = primitive_part(std::move(b));
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    Dense r = primitive_prem(a, b);
    a = std::move(b);
    b = primitive_part(std::move(r));
  }
  return primitive_part(std::move(a));
}

struct SquareFreeFactor {
  Dense factor;  ///< primitive, square-free, positive leading coefficient
  int multiplicity = 1;
};

struct SquareFreeDecomposition {
  Integer unit_content;  ///< signed content: p = unit_content * prod factor^multiplicity
  std::vector<SquareFreeFactor> factors;
};

/// Yun's algorithm over Z[t] (Gauss's lemma keeps every division integral).
inline SquareFreeDecomposition square_free(const Dense& p_in) {
  SquareFreeDecomposition out;
  Dense p = p_in;
  trim(p);
  if (p.empty()) return out;
  Integer c = content(p);
  if (p.back() < 0) c = -c;
  out.unit_content = c;
  p = primitive_part(std::move(p));
  if (p.size() == 1) return out;
  Dense dp = derivative(p);
  Dense a = gcd_primitive(p, dp);
  Dense b = *divide_exact(p, a);
  Dense cc = *divide_exact(dp, a);
  Dense d = subtract(cc, derivative(b));
  int i = 1;
  while (b.size() > 1) {
    Dense g = gcd_primitive(b, d);
    if (g.size() > 1) out.factors.push_back({g, i});
    b = *divide_exact(b, g);
    Dense cnext = d.empty() ? Dense{} : *divide_exact(d, g);
    d = subtract(cnext, derivative(b));
    ++i;
  }
  return out;
}

}  // namespace torsionlab::poly

namespace torsionlab {

/// Exact quotient a / b in Z[t, t^-1], or nullopt when b does not divide a.
inline std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return LaurentPoly{};
  const auto na = normalize_unit(a);
  const auto nb = normalize_unit(b);
  auto q = poly::divide_exact(poly::to_dense(na.poly), poly::to_dense(nb.poly));
  if (!q) return std::nullopt;
  return poly::from_dense(*q, nb.shift - na.shift);
}

}  // namespace torsionlab
