#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torsionlab/error.hpp"
#include "torsionlab/integer.hpp"
#include "torsionlab/laurent.hpp"
#include "torsionlab/matrix.hpp"

namespace torsionlab {

/// Element of the group ring Z[Z/q], dense in the exponents 0..q-1.
class CycElem {
 public:
  /// A default-constructed element has q = 0 and acts only as a placeholder.
  CycElem() = default;
  explicit CycElem(std::int64_t q) : q_(check(q)), coeffs_(static_cast<std::size_t>(q)) {}
  CycElem(std::int64_t q, std::vector<Integer> coeffs) : q_(check(q)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != static_cast<std::size_t>(q_))
      throw Error(Errc::InvalidInput, "CycElem needs exactly q coefficients");
  }

  static CycElem zero(std::int64_t q) { return CycElem(q); }
  static CycElem one(std::int64_t q) { return constant(q, Integer(1)); }
  static CycElem constant(std::int64_t q, const Integer& c) {
    CycElem r(q);
    r.coeffs_[0] = c;
    return r;
  }
  /// t^k with k reduced mod q.
  static CycElem t(std::int64_t q, std::int64_t k = 1) {
    CycElem r(q);
    r.coeffs_[static_cast<std::size_t>(mod(k, q))] = 1;
    return r;
  }

  std::int64_t modulus() const noexcept { return q_; }
  const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }
  const Integer& operator[](std::int64_t k) const { return coeffs_[static_cast<std::size_t>(mod(k, q_))]; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }

  Integer augmentation() const {
    Integer s(0);
    for (const auto& c : coeffs_) s += c;
    return s;
  }

  /// The involution g -> g^-1, i.e. exponent k -> q - k.
  CycElem conj() const {
    CycElem r(q_);
    for (std::int64_t k = 0; k < q_; ++k)
      r.coeffs_[static_cast<std::size_t>(mod(-k, q_))] = coeffs_[static_cast<std::size_t>(k)];
    return r;
  }

  /// Representative in Z[t] of degree < q.
  LaurentPoly lift() const { return LaurentPoly::from_coeffs(std::span<const Integer>(coeffs_)); }

  CycElem operator-() const {
    CycElem r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  CycElem& operator+=(const CycElem& o) {
    same_ring(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  CycElem& operator-=(const CycElem& o) {
    same_ring(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  friend CycElem operator+(CycElem a, const CycElem& b) { return a += b; }
  friend CycElem operator-(CycElem a, const CycElem& b) { return a -= b; }

  /// Cyclic convolution.
  friend CycElem operator*(const CycElem& a, const CycElem& b) {
    a.same_ring(b);
    const auto q = static_cast<std::size_t>(a.q_);
    CycElem r(a.q_);
    for (std::size_t i = 0; i < q; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < q; ++j) {
        if (b.coeffs_[j] == 0) continue;
        std::size_t k = i + j;
        if (k >= q) k -= q;
        mpz_addmul(r.coeffs_[k].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
      }
    }
    return r;
  }
  CycElem& operator*=(const CycElem& o) { return *this = *this * o; }

  friend bool operator==(const CycElem& a, const CycElem& b) {
    return a.q_ == b.q_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const CycElem& a, const CycElem& b) { return !(a == b); }

  std::string to_string() const { return lift().to_string() + " (mod t^" + std::to_string(q_) + " - 1)"; }

  static std::int64_t mod(std::int64_t k, std::int64_t q) {
    std::int64_t r = k % q;
    return r < 0 ? r + q : r;
  }

 private:
  static std::int64_t check(std::int64_t q) {
    if (q < 1) throw Error(Errc::InvalidModulus, "q must be positive");
    return q;
  }
  void same_ring(const CycElem& o) const {
    if (q_ != o.q_) throw Error(Errc::InvalidModulus, "mixing Z[Z/q] elements of different q");
  }

  std::int64_t q_ = 0;
  std::vector<Integer> coeffs_;
};

/// The ring morphism Z[t, t^-1] -> Z[Z/q], t^k -> t^(k mod q).
inline CycElem reduce_mod_q(const LaurentPoly& p, std::int64_t q) {
  if (q < 1) throw Error(Errc::InvalidModulus, "q must be positive");
  std::vector<Integer> coeffs(static_cast<std::size_t>(q));
  for (const auto& [e, c] : p.terms()) coeffs[static_cast<std::size_t>(CycElem::mod(e, q))] += c;
  return CycElem(q, std::move(coeffs));
}

/// Matrix of multiplication by c on Z[Z/q] in the basis 1, t, ..., t^{q-1};
/// column k is the coefficient vector of c * t^k.
inline Matrix<Integer> circulant_expand(const CycElem& c) {
  const auto q = static_cast<std::size_t>(c.modulus());
  Matrix<Integer> m(q, q);
  for (std::size_t k = 0; k < q; ++k)
    for (std::size_t i = 0; i < q; ++i) m((i + k) % q, k) = c.coeffs()[i];
  return m;
}

/// Block version: an r x s matrix over Z[Z/q] becomes an rq x sq integer matrix.
inline Matrix<Integer> circulant_expand(const Matrix<CycElem>& m) {
  if (m.empty()) return {};
  const auto q = static_cast<std::size_t>(m(0, 0).modulus());
  Matrix<Integer> out(m.rows() * q, m.cols() * q);
  for (std::size_t bi = 0; bi < m.rows(); ++bi)
    for (std::size_t bj = 0; bj < m.cols(); ++bj) {
      const auto& c = m(bi, bj).coeffs();
      for (std::size_t k = 0; k < q; ++k)
        for (std::size_t i = 0; i < q; ++i) out(bi * q + (i + k) % q, bj * q + k) = c[i];
    }
  return out;
}

}  // namespace torsionlab
