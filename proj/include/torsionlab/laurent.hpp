#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torsionlab/error.hpp"
#include "torsionlab/integer.hpp"

namespace torsionlab {

/// Element of Z[t, t^-1], stored as exponent-sorted nonzero terms.
class LaurentPoly {
 public:
  using Term = std::pair<std::int64_t, Integer>;

  LaurentPoly() = default;

  static LaurentPoly constant(const Integer& c) { return monomial(c, 0); }
  static LaurentPoly constant(std::int64_t c) { return monomial(from_int(c), 0); }
  static LaurentPoly t(std::int64_t e = 1) { return monomial(Integer(1), e); }
  static LaurentPoly monomial(const Integer& c, std::int64_t e) {
    LaurentPoly p;
    if (c != 0) p.terms_.emplace_back(e, c);
    return p;
  }

  /// Coefficients c_0, c_1, ... of t^{lo}, t^{lo+1}, ...
  template <class C>
  static LaurentPoly from_coeffs(std::span<const C> coeffs, std::int64_t lo = 0) {
    LaurentPoly p;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      Integer c(coeffs[k]);
      if (c != 0) p.terms_.emplace_back(lo + static_cast<std::int64_t>(k), std::move(c));
    }
    return p;
  }
  static LaurentPoly from_coeffs(std::initializer_list<long> coeffs, std::int64_t lo = 0) {
    std::vector<long> v(coeffs);
    return from_coeffs(std::span<const long>(v), lo);
  }

  /// Accepts unsorted terms with repeated exponents and zero coefficients.
  static LaurentPoly from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    LaurentPoly p;
    for (auto& [e, c] : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == e)
        p.terms_.back().second += c;
      else
        p.terms_.emplace_back(e, std::move(c));
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    }
    return p;
  }

  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  std::int64_t deg_lo() const { return terms_.empty() ? 0 : terms_.front().first; }
  std::int64_t deg_hi() const { return terms_.empty() ? 0 : terms_.back().first; }
  /// deg_hi - deg_lo: the degree of the polynomial once the unit is removed.
  std::int64_t span() const { return deg_hi() - deg_lo(); }

  Integer coeff(std::int64_t e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, std::int64_t x) { return t.first < x; });
    if (it != terms_.end() && it->first == e) return it->second;
    return Integer(0);
  }
  Integer leading_coeff() const { return terms_.empty() ? Integer(0) : terms_.back().second; }
  Integer trailing_coeff() const { return terms_.empty() ? Integer(0) : terms_.front().second; }

  /// Maximum absolute coefficient.
  Integer height() const {
    Integer h(0);
    for (const auto& [e, c] : terms_)
      if (abs(c) > h) h = abs(c);
    return h;
  }

  /// Image under the augmentation t -> 1.
  Integer augmentation() const {
    Integer s(0);
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

  /// t^k * p
  LaurentPoly shifted(std::int64_t k) const {
    LaurentPoly r = *this;
    for (auto& term : r.terms_) term.first += k;
    return r;
  }

  /// The involution t -> t^-1.
  LaurentPoly conj() const {
    LaurentPoly r;
    r.terms_.reserve(terms_.size());
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) r.terms_.emplace_back(-it->first, it->second);
    return r;
  }

  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& term : r.terms_) term.second = -term.second;
    return r;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = merge(*this, o, false); }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = merge(*this, o, true); }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, false); }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, true); }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    const std::int64_t lo = a.deg_lo() + b.deg_lo();
    const std::int64_t width = a.span() + b.span() + 1;
    const auto pairs = static_cast<std::int64_t>(a.terms_.size() * b.terms_.size());
    if (width <= 4 * pairs + 64) {
      std::vector<Integer> acc(static_cast<std::size_t>(width));
      for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_)
          mpz_addmul(acc[static_cast<std::size_t>(ea + eb - lo)].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      for (std::size_t k = 0; k < acc.size(); ++k)
        if (acc[k] != 0) r.terms_.emplace_back(lo + static_cast<std::int64_t>(k), std::move(acc[k]));
      return r;
    }
    std::map<std::int64_t, Integer> acc;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) acc[ea + eb] += ca * cb;
    for (auto& [e, c] : acc)
      if (c != 0) r.terms_.emplace_back(e, std::move(c));
    return r;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Integer mag = abs(c);
      out += (c < 0) ? (out.empty() ? "-" : " - ") : (out.empty() ? "" : " + ");
      if (mag != 1 || e == 0) out += mag.get_str();
      if (e != 0) {
        if (mag != 1) out += "*";
        out += "t";
        if (e != 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

 private:
  static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, bool subtract) {
    LaurentPoly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
        r.terms_.push_back(*ia++);
      } else if (ia == a.terms_.end() || ib->first < ia->first) {
        r.terms_.emplace_back(ib->first, subtract ? Integer(-ib->second) : ib->second);
        ++ib;
      } else {
        Integer c = subtract ? Integer(ia->second - ib->second) : Integer(ia->second + ib->second);
        if (c != 0) r.terms_.emplace_back(ia->first, std::move(c));
        ++ia;
        ++ib;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

/// Evaluation without the unit-modulus precondition; compensated summation
/// in extended precision. Powers come from the argument of z so that large
/// exponents do not accumulate multiplicative rounding.
inline std::complex<long double> evaluate(const LaurentPoly& p, std::complex<long double> z) {
  if (p.is_zero()) return {0.0L, 0.0L};
  const long double r = std::abs(z);
  const long double theta = std::arg(z);
  long double sum_re = 0, comp_re = 0, sum_im = 0, comp_im = 0;
  auto kahan = [](long double& sum, long double& comp, long double x) {
    long double y = x - comp;
    long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (const auto& [e, c] : p.terms()) {
    const long double cv = to_long_double(c);
    const long double mag = (r == 1.0L) ? 1.0L : std::pow(r, static_cast<long double>(e));
    const long double ang = theta * static_cast<long double>(e);
    kahan(sum_re, comp_re, cv * mag * std::cos(ang));
    kahan(sum_im, comp_im, cv * mag * std::sin(ang));
  }
  return {sum_re, sum_im};
}

/// Evaluation at exp(2 pi i * num / den), reducing the exponent exactly first.
inline std::complex<long double> evaluate_at_root_of_unity(const LaurentPoly& p, std::int64_t num,
                                                           std::int64_t den) {
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  long double sum_re = 0, sum_im = 0;
  for (const auto& [e, c] : p.terms()) {
    std::int64_t k = ((e % den) * (num % den)) % den;
    if (k < 0) k += den;
    const long double ang = two_pi * static_cast<long double>(k) / static_cast<long double>(den);
    const long double cv = to_long_double(c);
    sum_re += cv * std::cos(ang);
    sum_im += cv * std::sin(ang);
  }
  return {sum_re, sum_im};
}

/// p(z) for z on the unit circle.
inline std::complex<long double> laurent_eval(const LaurentPoly& p, std::complex<long double> z) {
  if (std::fabs(std::abs(z) - 1.0L) > 1e-12L)
    throw Error(Errc::NonUnitModulus, "|z| must be 1 within 1e-12");
  return evaluate(p, z);
}

struct NormalizedPoly {
  LaurentPoly poly;     ///< t^shift * p, an honest polynomial with nonzero constant term
  std::int64_t shift = 0;
};

inline NormalizedPoly normalize_unit(const LaurentPoly& p) {
  if (p.is_zero()) return {LaurentPoly{}, 0};
  const std::int64_t shift = -p.deg_lo();
  return {p.shifted(shift), shift};
}

}  // namespace torsionlab
