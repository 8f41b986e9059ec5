#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "torsionlab/error.hpp"
#include "torsionlab/laurent.hpp"
#include "torsionlab/polynomial.hpp"

namespace torsionlab {

/// Euler's totient by trial-division factorization.
inline std::int64_t totient(std::int64_t n) {
  if (n < 1) throw Error(Errc::InvalidInput, "totient needs n >= 1");
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

/// Totients of 0..n by sieve (entry 0 unused).
inline std::vector<std::int64_t> totient_table(std::int64_t n) {
  std::vector<std::int64_t> phi(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 0; k <= n; ++k) phi[static_cast<std::size_t>(k)] = k;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (phi[static_cast<std::size_t>(p)] != p) continue;
    for (std::int64_t k = p; k <= n; k += p) phi[static_cast<std::size_t>(k)] -= phi[static_cast<std::size_t>(k)] / p;
  }
  return phi;
}

namespace detail {

inline std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d * d != n) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline int moebius(std::int64_t n) {
  int mu = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

// a * (t^d - 1), in place on a dense vector sized for the result
inline void mul_binomial(poly::Dense& a, std::size_t d) {
  a.resize(a.size() + d);
  for (std::size_t k = a.size(); k-- > 0;) {
    Integer v = -a[k];
    if (k >= d) v += a[k - d];
    a[k] = std::move(v);
  }
}

// a / (t^d - 1), assuming exact divisibility
inline void div_binomial(poly::Dense& a, std::size_t d) {
  // a = (t^d - 1) b  =>  b_k = b_{k-d} - a_k, scanning upward
  poly::Dense b(a.size() - d);
  for (std::size_t k = 0; k < b.size(); ++k) {
    b[k] = -a[k];
    if (k >= d) b[k] += b[k - d];
  }
  a = std::move(b);
}

}  // namespace detail

/// Thread-safe memo of cyclotomic polynomials. Phi_n is the exact quotient of
/// t^n - 1 by the product of Phi_d over proper divisors d; that quotient is
/// evaluated through Moebius inversion as a sequence of exact multiplications
/// and divisions by binomials t^d - 1, which is linear in n per divisor.
class CyclotomicTable {
 public:
  explicit CyclotomicTable(std::int64_t n_max = 2000) : n_max_(n_max) {}

  std::int64_t n_max() const noexcept { return n_max_; }

  std::shared_ptr<const poly::Dense> dense(std::int64_t n) {
    if (n < 1) throw Error(Errc::InvalidInput, "cyclotomic index must be >= 1");
    {
      std::shared_lock lock(mutex_);
      auto it = memo_.find(n);
      if (it != memo_.end()) return it->second;
    }
    auto value = std::make_shared<const poly::Dense>(compute(n));
    if (n > n_max_) return value;
    std::unique_lock lock(mutex_);
    return memo_.emplace(n, std::move(value)).first->second;
  }

  LaurentPoly operator()(std::int64_t n) { return poly::from_dense(*dense(n)); }

  static poly::Dense compute(std::int64_t n) {
    poly::Dense a{Integer(1)};
    std::vector<std::int64_t> denominators;
    for (std::int64_t d : detail::divisors(n)) {
      const int mu = detail::moebius(n / d);
      if (mu == 1) detail::mul_binomial(a, static_cast<std::size_t>(d));
      if (mu == -1) denominators.push_back(d);
    }
    for (std::int64_t d : denominators) detail::div_binomial(a, static_cast<std::size_t>(d));
    poly::trim(a);
    return a;
  }

  static CyclotomicTable& shared() {
    static CyclotomicTable table;
    return table;
  }

 private:
  std::int64_t n_max_;
  std::shared_mutex mutex_;
  std::map<std::int64_t, std::shared_ptr<const poly::Dense>> memo_;
};

/// The n-th cyclotomic polynomial.
inline LaurentPoly cyclotomic(std::int64_t n) { return CyclotomicTable::shared()(n); }

}  // namespace torsionlab
