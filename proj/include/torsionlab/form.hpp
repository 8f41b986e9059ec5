#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "torsionlab/cyclic.hpp"
#include "torsionlab/error.hpp"
#include "torsionlab/laurent.hpp"
#include "torsionlab/matrix.hpp"

namespace torsionlab {

// ---------------------------------------------------------------------------
// Rings with involution. The zero of Z[Z/q] carries q, so every generic
// routine takes a ring descriptor instead of relying on T{}.

struct LaurentRing {
  using value_type = LaurentPoly;
  LaurentPoly zero() const { return {}; }
  LaurentPoly one() const { return LaurentPoly::constant(1); }
  LaurentPoly from_int(std::int64_t c) const { return LaurentPoly::constant(c); }
  LaurentPoly unit(std::int64_t k) const { return LaurentPoly::t(k); }
  static LaurentPoly conj(const LaurentPoly& x) { return x.conj(); }
  static Integer augmentation(const LaurentPoly& x) { return x.augmentation(); }
  friend bool operator==(const LaurentRing&, const LaurentRing&) { return true; }
};

struct CyclicRing {
  using value_type = CycElem;
  std::int64_t q = 1;
  CycElem zero() const { return CycElem::zero(q); }
  CycElem one() const { return CycElem::one(q); }
  CycElem from_int(std::int64_t c) const { return CycElem::constant(q, from_int_(c)); }
  CycElem unit(std::int64_t k) const { return CycElem::t(q, k); }
  static CycElem conj(const CycElem& x) { return x.conj(); }
  static Integer augmentation(const CycElem& x) { return x.augmentation(); }
  friend bool operator==(const CyclicRing& a, const CyclicRing& b) { return a.q == b.q; }

 private:
  static Integer from_int_(std::int64_t c) { return torsionlab::from_int(c); }
};

/// Genus-g surface model: basis a~_1..a~_{g-1}, b~_1..b~_{g-1} of the free
/// part of H_1 of the cyclic cover, a-block first.
struct SurfaceModel {
  int g = 3;

  explicit SurfaceModel(int genus = 3) : g(genus) {
    if (g < 3) throw Error(Errc::InvalidInput, "genus must be at least 3");
  }
  std::size_t half() const { return static_cast<std::size_t>(g - 1); }
  std::size_t dim() const { return 2 * half(); }
  std::size_t a_index(std::size_t i) const { return i; }         // a~_{i+1}
  std::size_t b_index(std::size_t i) const { return half() + i; }  // b~_{i+1}
  friend bool operator==(const SurfaceModel& x, const SurfaceModel& y) { return x.g == y.g; }
};

template <class Ring>
using Vec = std::vector<typename Ring::value_type>;

template <class Ring>
Vec<Ring> basis_vector(const SurfaceModel& model, const Ring& ring, std::size_t index) {
  Vec<Ring> v(model.dim(), ring.zero());
  v.at(index) = ring.one();
  return v;
}

/// Gram matrix J = [[0, I], [-I, 0]] of the Reidemeister pairing in the
/// a~/b~ basis: Phi(x, y) = x^T J conj(y).
template <class Ring>
Matrix<typename Ring::value_type> reidemeister_form(const SurfaceModel& model, const Ring& ring) {
  const std::size_t h = model.half();
  Matrix<typename Ring::value_type> j(model.dim(), model.dim(), ring.zero());
  for (std::size_t i = 0; i < h; ++i) {
    j(i, h + i) = ring.one();
    j(h + i, i) = -ring.one();
  }
  return j;
}

/// Phi(x, y): linear in x, conjugate-linear in y.
template <class Ring>
typename Ring::value_type pairing(const SurfaceModel& model, const Ring& ring, const Vec<Ring>& x,
                                  const Vec<Ring>& y) {
  const std::size_t h = model.half();
  auto acc = ring.zero();
  for (std::size_t i = 0; i < h; ++i) {
    acc += x[i] * Ring::conj(y[h + i]);
    acc -= x[h + i] * Ring::conj(y[i]);
  }
  return acc;
}

template <class Ring>
Matrix<typename Ring::value_type> conj(const Matrix<typename Ring::value_type>& m, const Ring&) {
  return m.map([](const auto& x) { return Ring::conj(x); });
}

/// Exact test M^T J conj(M) = J.
template <class Ring>
bool check_form_preserved(const SurfaceModel& model, const Ring& ring, const Matrix<typename Ring::value_type>& m) {
  if (m.rows() != model.dim() || m.cols() != model.dim()) return false;
  const auto j = reidemeister_form(model, ring);
  const auto lhs = multiply(multiply(m.transposed(), j, ring.zero()), conj(m, ring), ring.zero());
  return lhs == j;
}

/// Square matrix over Z[t,t^-1] or Z[Z/q] acting on the free part of H_1 of
/// the cover, columns are images of basis vectors.
template <class Ring>
struct FormMatrix {
  using value_type = typename Ring::value_type;

  SurfaceModel model;
  Ring ring;
  Matrix<value_type> entries;

  static FormMatrix identity(const SurfaceModel& model, const Ring& ring) {
    return {model, ring, torsionlab::identity(model.dim(), ring.zero(), ring.one())};
  }

  /// Validated constructor: rejects matrices that do not preserve the form.
  static FormMatrix checked(const SurfaceModel& model, const Ring& ring, Matrix<value_type> entries) {
    if (!check_form_preserved(model, ring, entries))
      throw Error(Errc::InvalidInput, "matrix does not preserve the skew-Hermitian form");
    return {model, ring, std::move(entries)};
  }

  bool form_preserved() const { return check_form_preserved(model, ring, entries); }

  const value_type& operator()(std::size_t i, std::size_t j) const { return entries(i, j); }

  /// t^k * M, another lift of the same mapping class.
  FormMatrix times_unit(std::int64_t k) const {
    const auto u = ring.unit(k);
    return {model, ring, entries.map([&](const value_type& x) { return u * x; })};
  }

  friend FormMatrix operator*(const FormMatrix& a, const FormMatrix& b) {
    return {a.model, a.ring, multiply(a.entries, b.entries, a.ring.zero())};
  }
  friend bool operator==(const FormMatrix& a, const FormMatrix& b) {
    return a.model == b.model && a.ring == b.ring && a.entries == b.entries;
  }
};

using LaurentFormMatrix = FormMatrix<LaurentRing>;
using CyclicFormMatrix = FormMatrix<CyclicRing>;

inline CyclicFormMatrix reduce_mod_q(const LaurentFormMatrix& m, std::int64_t q) {
  return {m.model, CyclicRing{q}, m.entries.map([q](const LaurentPoly& p) { return reduce_mod_q(p, q); })};
}

inline Matrix<CycElem> reduce_mod_q(const Matrix<LaurentPoly>& m, std::int64_t q) {
  return m.map([q](const LaurentPoly& p) { return reduce_mod_q(p, q); });
}

/// Entrywise augmentation t -> 1.
template <class Ring>
Matrix<Integer> augmentation(const FormMatrix<Ring>& m) {
  return m.entries.map([](const auto& x) { return Ring::augmentation(x); });
}

/// True when M - Id has every entry in the augmentation ideal.
template <class Ring>
bool is_torelli_like(const FormMatrix<Ring>& m) {
  return augmentation(m) == identity(m.model.dim(), Integer(0), Integer(1));
}

/// T(x) = x + Phi(x, v) r v for isotropic v and involution-invariant r.
template <class Ring>
FormMatrix<Ring> transvection(const SurfaceModel& model, const Ring& ring, const Vec<Ring>& v,
                              const typename Ring::value_type& r, bool torelli_like = false) {
  if (v.size() != model.dim()) throw Error(Errc::InvalidInput, "transvection vector has the wrong length");
  if (pairing(model, ring, v, v) != ring.zero()) throw Error(Errc::NotIsotropic, "Phi(v, v) != 0");
  if (Ring::conj(r) != r) throw Error(Errc::NotSymmetric, "r must be fixed by the involution");
  const std::size_t n = model.dim();
  const std::size_t h = model.half();
  // Phi(e_j, v) = (J conj(v))_j
  Vec<Ring> row(n, ring.zero());
  for (std::size_t i = 0; i < h; ++i) {
    row[i] = Ring::conj(v[h + i]);
    row[h + i] = -Ring::conj(v[i]);
  }
  auto entries = torsionlab::identity(n, ring.zero(), ring.one());
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == ring.zero()) continue;
    const auto rv = r * v[i];
    for (std::size_t j = 0; j < n; ++j)
      if (row[j] != ring.zero()) entries(i, j) += rv * row[j];
  }
  FormMatrix<Ring> out{model, ring, std::move(entries)};
  if (!out.form_preserved()) throw Error(Errc::InvalidInput, "transvection failed the Gram identity");
  if (torelli_like && !is_torelli_like(out))
    throw Error(Errc::NotTorelliLike, "augmentation of the transvection is not the identity");
  return out;
}

/// B(phi): rows indexed by b~_i, columns by a~_j.
template <class Ring>
Matrix<typename Ring::value_type> bottom_left_block(const FormMatrix<Ring>& m) {
  const std::size_t h = m.model.half();
  return m.entries.submatrix(h, 0, h, h);
}

/// Exact determinant by cofactor expansion; valid over any commutative ring.
template <class T>
T determinant(const Matrix<T>& m, const T& zero, const T& one) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw Error(Errc::InvalidInput, "determinant of a non-square matrix");
  if (n == 0) return one;
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  T acc = zero;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == zero) continue;
    Matrix<T> minor(n - 1, n - 1, zero);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = m(i, k);
    T term = m(0, j) * determinant(minor, zero, one);
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

inline LaurentPoly determinant(const Matrix<LaurentPoly>& m) {
  return determinant(m, LaurentPoly{}, LaurentPoly::constant(1));
}

inline CycElem determinant(const Matrix<CycElem>& m) {
  if (m.empty()) throw Error(Errc::InvalidInput, "determinant of an empty Z[Z/q] matrix");
  const auto q = m(0, 0).modulus();
  return determinant(m, CycElem::zero(q), CycElem::one(q));
}

// ---------------------------------------------------------------------------
// The embedding iota: Z[Z/q] -> C, t -> exp(2 pi i j / q).

inline void check_primitive(std::int64_t q, std::int64_t root_index) {
  if (q < 1) throw Error(Errc::InvalidModulus, "q must be positive");
  if (std::gcd(CycElem::mod(root_index, q), q) != 1)
    throw Error(Errc::NonPrimitiveRoot, "gcd(root_index, q) != 1");
}

inline std::complex<double> iota(const CycElem& c, std::int64_t root_index) {
  const auto q = c.modulus();
  check_primitive(q, root_index);
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  long double re = 0, im = 0;
  for (std::int64_t k = 0; k < q; ++k) {
    const Integer& a = c.coeffs()[static_cast<std::size_t>(k)];
    if (a == 0) continue;
    const std::int64_t e = CycElem::mod(k * root_index, q);
    const long double ang = two_pi * static_cast<long double>(e) / static_cast<long double>(q);
    const long double v = to_long_double(a);
    re += v * std::cos(ang);
    im += v * std::sin(ang);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

inline Eigen::MatrixXcd iota(const Matrix<CycElem>& m, std::int64_t root_index) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = iota(m(i, j), root_index);
  return out;
}

inline Eigen::MatrixXcd iota(const CyclicFormMatrix& m, std::int64_t root_index) {
  return iota(m.entries, root_index);
}

/// iota of a Laurent matrix at level q, i.e. iota(reduce_mod_q(m, q)).
inline Eigen::MatrixXcd iota(const Matrix<LaurentPoly>& m, std::int64_t q, std::int64_t root_index) {
  check_primitive(q, root_index);
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto v = evaluate_at_root_of_unity(m(i, j), root_index, q);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {static_cast<double>(v.real()),
                                                                       static_cast<double>(v.imag())};
    }
  return out;
}

inline Eigen::MatrixXcd complex_form(const SurfaceModel& model) {
  const auto n = static_cast<Eigen::Index>(model.dim());
  const auto h = static_cast<Eigen::Index>(model.half());
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < h; ++i) {
    j(i, h + i) = 1.0;
    j(h + i, i) = -1.0;
  }
  return j;
}

/// max |A^T J conj(A) - J|: distance of A from U(g-1, g-1) in this convention.
inline double unitary_form_residual(const SurfaceModel& model, const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd j = complex_form(model);
  return (a.transpose() * j * a.conjugate() - j).cwiseAbs().maxCoeff();
}

/// d_mu: largest entry degree once each generator is multiplied by the power
/// of t that turns all its entries into honest polynomials.
inline std::int64_t degree_bound(const std::vector<LaurentFormMatrix>& generators) {
  if (generators.empty()) throw Error(Errc::EmptyGeneratorSet, "degree_bound of an empty set");
  std::int64_t best = 0;
  for (const auto& gen : generators) {
    bool any = false;
    std::int64_t lo = 0, hi = 0;
    for (const auto& e : gen.entries.data()) {
      if (e.is_zero()) continue;
      lo = any ? std::min(lo, e.deg_lo()) : e.deg_lo();
      hi = any ? std::max(hi, e.deg_hi()) : e.deg_hi();
      any = true;
    }
    if (any) best = std::max(best, hi - lo);
  }
  return best;
}

/// The lift t^k M whose entries are honest polynomials with some entry having
/// a nonzero constant term; equal for all lifts of the same element.
inline LaurentFormMatrix canonical_lift(const LaurentFormMatrix& m, std::int64_t* shift = nullptr) {
  bool any = false;
  std::int64_t lo = 0;
  for (const auto& e : m.entries.data()) {
    if (e.is_zero()) continue;
    lo = any ? std::min(lo, e.deg_lo()) : e.deg_lo();
    any = true;
  }
  if (shift) *shift = -lo;
  return lo == 0 ? m : m.times_unit(-lo);
}

}  // namespace torsionlab
