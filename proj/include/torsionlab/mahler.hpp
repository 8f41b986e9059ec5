#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "torsionlab/cyclotomic.hpp"
#include "torsionlab/error.hpp"
#include "torsionlab/laurent.hpp"
#include "torsionlab/polynomial.hpp"

namespace torsionlab {

enum class MahlerMethod { kronecker_exact_zero, root_product };

inline std::string to_string(MahlerMethod m) {
  return m == MahlerMethod::kronecker_exact_zero ? "kronecker_exact_zero" : "root_product";
}

struct MahlerResult {
  double log_measure = 0.0;
  std::vector<std::complex<double>> roots;  ///< with multiplicity
  Integer leading_coeff;
  MahlerMethod method = MahlerMethod::root_product;
};

/// +-p = t^k_exponent * prod Phi_{m_i}
struct KroneckerFactorization {
  std::int64_t k_exponent = 0;
  int sign = 1;
  std::vector<std::int64_t> cyclotomic_indices;  ///< ascending, repeated by multiplicity
};

namespace detail {

// Totients up to the requested bound, grown on demand and shared.
inline std::shared_ptr<const std::vector<std::int64_t>> shared_totients(std::int64_t bound) {
  static std::mutex mutex;
  static std::shared_ptr<const std::vector<std::int64_t>> table =
      std::make_shared<const std::vector<std::int64_t>>(totient_table(1024));
  std::lock_guard lock(mutex);
  if (static_cast<std::int64_t>(table->size()) <= bound) {
    const auto grown = std::max<std::int64_t>(bound, 2 * static_cast<std::int64_t>(table->size()));
    table = std::make_shared<const std::vector<std::int64_t>>(totient_table(grown));
  }
  return table;
}

/// All m with totient(m) <= d, ascending. Since totient(m) >= sqrt(m/2),
/// every such m is at most 2 d^2.
inline std::vector<std::int64_t> cyclotomic_candidates(std::int64_t d) {
  const std::int64_t bound = 2 * d * d + 2;
  const auto phi = shared_totients(bound);
  std::vector<std::int64_t> out;
  for (std::int64_t m = 1; m <= bound; ++m)
    if ((*phi)[static_cast<std::size_t>(m)] <= d) out.push_back(m);
  return out;
}

inline bool is_plus_minus_reciprocal(const poly::Dense& a) {
  const std::size_t n = a.size();
  bool plus = true, minus = true;
  for (std::size_t k = 0; k < n && (plus || minus); ++k) {
    if (a[k] != a[n - 1 - k]) plus = false;
    if (a[k] != -a[n - 1 - k]) minus = false;
  }
  return plus || minus;
}

// Horner at exp(2 pi i / m) in extended precision with a rigorous-ish a
// priori error bound; returns true when the value is provably nonzero.
inline bool provably_nonzero_at_primitive_root(const poly::Dense& a, std::int64_t m) {
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  const std::complex<long double> z = std::polar(1.0L, two_pi / static_cast<long double>(m));
  std::complex<long double> acc{0, 0};
  long double l1 = 0;
  for (std::size_t k = a.size(); k-- > 0;) {
    const long double c = to_long_double(a[k]);
    acc = acc * z + c;
    l1 += std::fabs(c);
  }
  constexpr long double u = 5.42101086242752217e-20L;  // 2^-64
  const long double bound = 16.0L * static_cast<long double>(a.size() + 4) * u * l1;
  return std::abs(acc) > bound;
}

}  // namespace detail

/// Decides exactly whether +-p is a monomial times a product of cyclotomic
/// polynomials. Floating point is used only to skip candidates Phi_m that
/// provably do not divide; every accepted factor is confirmed by exact division.
inline std::optional<KroneckerFactorization> kronecker_zero_test(const LaurentPoly& p) {
  if (p.is_zero()) throw Error(Errc::ZeroPolynomial, "kronecker_zero_test of 0");
  KroneckerFactorization out;
  out.k_exponent = p.deg_lo();
  poly::Dense rest = poly::to_dense(normalize_unit(p).poly);
  if (abs(rest.back()) != 1 || abs(rest.front()) != 1) return std::nullopt;
  if (!detail::is_plus_minus_reciprocal(rest)) return std::nullopt;
  const std::int64_t d = poly::degree(rest);
  if (d > 0) {
    auto& table = CyclotomicTable::shared();
    const auto phi_table = detail::shared_totients(2 * d * d + 2);
    const auto& phi = *phi_table;
    for (std::int64_t m : detail::cyclotomic_candidates(d)) {
      while (poly::degree(rest) >= phi[static_cast<std::size_t>(m)]) {
        if (detail::provably_nonzero_at_primitive_root(rest, m)) break;
        auto q = poly::divide_exact(rest, *table.dense(m));
        if (!q) break;
        rest = std::move(*q);
        out.cyclotomic_indices.push_back(m);
      }
      if (poly::degree(rest) == 0) break;
    }
  }
  if (poly::degree(rest) != 0 || abs(rest[0]) != 1) return std::nullopt;
  out.sign = rest[0] > 0 ? 1 : -1;
  return out;
}

namespace detail {

using cld = std::complex<long double>;

struct HornerResult {
  cld value, deriv;
  long double scale;  // sum |a_k| |z|^k, for relative residuals
};

inline HornerResult horner(const std::vector<long double>& a, cld z) {
  cld v{0, 0}, dv{0, 0};
  long double s = 0;
  const long double r = std::abs(z);
  for (std::size_t k = a.size(); k-- > 0;) {
    dv = dv * z + v;
    v = v * z + a[k];
    s = s * r + std::fabs(a[k]);
  }
  return {v, dv, s};
}

/// Roots of a square-free integer polynomial: companion-matrix eigenvalues
/// polished by Aberth-Ehrlich iterations.
inline std::vector<cld> polished_roots(const poly::Dense& f, long double tol) {
  const std::size_t d = f.size() - 1;
  std::vector<long double> a(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) a[k] = to_long_double(f[k]);
  std::vector<cld> z(d);
  if (d == 1) {
    z[0] = cld(-a[0] / a[1], 0);
  } else {
    using Mat = Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>;
    Mat c = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 1; i < d; ++i) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1;
    for (std::size_t i = 0; i < d; ++i)
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -a[i] / a[d];
    Eigen::ComplexEigenSolver<Mat> solver(c, false);
    for (std::size_t i = 0; i < d; ++i) z[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
  }
  for (int iter = 0; iter < 200; ++iter) {
    long double worst = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto h = horner(a, z[i]);
      if (h.value == cld(0, 0)) continue;
      const cld w = h.value / h.deriv;
      cld s{0, 0};
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) s += 1.0L / (z[i] - z[j]);
      const cld step = w / (1.0L - w * s);
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) z[i] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0L, std::abs(z[i])));
    }
    if (worst < 1e-18L) break;
  }
  for (const auto& root : z) {
    const auto h = horner(a, root);
    if (!(std::abs(h.value) <= tol * h.scale))
      throw Error(Errc::RootRefinementFailed,
                  "relative residual " + std::to_string(static_cast<double>(std::abs(h.value) / h.scale)));
  }
  return z;
}

}  // namespace detail

/// Jensen's product form log|a| + sum log max(1, |alpha_i|), evaluated on the
/// square-free factors so that repeated roots never reach the root finder.
inline MahlerResult mahler_measure_roots(const LaurentPoly& p, double tol = 1e-12) {
  if (p.is_zero()) throw Error(Errc::ZeroPolynomial, "Mahler measure of 0");
  MahlerResult out;
  out.method = MahlerMethod::root_product;
  const poly::Dense dense = poly::to_dense(normalize_unit(p).poly);
  out.leading_coeff = dense.back();
  const auto sqf = poly::square_free(dense);
  long double m = static_cast<long double>(log_abs(sqf.unit_content));
  for (const auto& [factor, mult] : sqf.factors) {
    long double part = static_cast<long double>(log_abs(factor.back()));
    for (const auto& root : detail::polished_roots(factor, static_cast<long double>(tol))) {
      const long double r = std::abs(root);
      if (r > 1) part += std::log(r);
      for (int k = 0; k < mult; ++k)
        out.roots.emplace_back(static_cast<double>(root.real()), static_cast<double>(root.imag()));
    }
    m += part * mult;
  }
  out.log_measure = static_cast<double>(m);
  return out;
}

/// Logarithmic Mahler measure; exact zero for products of cyclotomics and monomials.
inline MahlerResult mahler_measure(const LaurentPoly& p, double tol = 1e-12) {
  if (p.is_zero()) throw Error(Errc::ZeroPolynomial, "Mahler measure of 0");
  if (kronecker_zero_test(p)) {
    MahlerResult out;
    out.method = MahlerMethod::kronecker_exact_zero;
    out.leading_coeff = normalize_unit(p).poly.leading_coeff();
    out.log_measure = 0.0;
    return out;
  }
  return mahler_measure_roots(p, tol);
}

enum class KAlphaReason { forced, small_totient, large_coefficients };

/// Exceptional set for the cyclotomic constraint, exact up to m_max. Beyond the
/// scan horizon membership rests on Maier's asymptotic coefficient bound and is
/// not decided here (tail_assumed).
struct KAlphaSet {
  double alpha = 0;
  std::int64_t m_max = 0;
  std::map<std::int64_t, KAlphaReason> members;
  bool tail_assumed = true;

  bool contains(std::int64_t m) const { return members.count(m) != 0; }
  std::vector<std::int64_t> list() const {
    std::vector<std::int64_t> out;
    for (const auto& [m, r] : members) out.push_back(m);
    return out;
  }
};

/// m is a member when totient(m) <= sqrt(m), or when the largest coefficient
/// of Phi_m exceeds m^eta(m) with eta(m) = alpha sqrt(m)/log(m) - 1; 1 and 2
/// are always members.
inline KAlphaSet build_K_alpha(double alpha, std::int64_t m_max) {
  if (!(alpha > 0)) throw Error(Errc::InvalidInput, "alpha must be positive");
  if (m_max < 1) throw Error(Errc::InvalidInput, "m_max must be positive");
  KAlphaSet out;
  out.alpha = alpha;
  out.m_max = m_max;
  out.members[1] = KAlphaReason::forced;
  out.members[2] = KAlphaReason::forced;
  auto& table = CyclotomicTable::shared();
  for (std::int64_t m = 3; m <= m_max; ++m) {
    const double phi = static_cast<double>(totient(m));
    if (phi <= std::sqrt(static_cast<double>(m))) {
      out.members[m] = KAlphaReason::small_totient;
      continue;
    }
    // c(Phi_m) > m^eta  <=>  log c > alpha sqrt(m) - log m
    Integer height(0);
    for (const auto& c : *table.dense(m))
      if (abs(c) > height) height = abs(c);
    const double md = static_cast<double>(m);
    if (log_abs(height) > alpha * std::sqrt(md) - std::log(md)) out.members[m] = KAlphaReason::large_coefficients;
  }
  return out;
}

struct ConstraintParams {
  double alpha = 1.0;
  std::vector<std::int64_t> K{1, 2};
  std::int64_t n_scan_max = 1;  ///< horizon K was built with
  std::int64_t d_mu = 1;
  int g = 3;
  int samples = 1024;
};

enum class VerdictKind { cyclotomic_hit, small_everywhere, not_mahler_zero, bound_exceeded };

inline std::string to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::cyclotomic_hit: return "cyclotomic_hit";
    case VerdictKind::small_everywhere: return "small_everywhere";
    case VerdictKind::not_mahler_zero: return "not_mahler_zero";
    case VerdictKind::bound_exceeded: return "bound_exceeded";
  }
  return "unknown";
}

struct ConstraintVerdict {
  VerdictKind kind = VerdictKind::not_mahler_zero;
  std::int64_t k = 0;           ///< the hit index for cyclotomic_hit
  double max_log_abs = 0;       ///< max log|p| over the unit-circle samples
  double log_bound = 0;         ///< alpha' * deg p
};

/// Degree bound (g-1) d_mu n for det B of a word of length n.
inline std::int64_t det_degree_bound(const ConstraintParams& params, std::int64_t n) {
  return static_cast<std::int64_t>(params.g - 1) * params.d_mu * n;
}

/// Dichotomy for a Mahler-measure-zero determinant of a length-n word: either
/// a Phi_k with k in K divides it, or it is at most exp(alpha' deg p) on the
/// unit circle, alpha' = alpha / ((g-1) d_mu). bound_exceeded is reported when
/// the sampled witness fails, which means K missed an exceptional index.
inline ConstraintVerdict constraint_check(const LaurentPoly& p, const ConstraintParams& params, std::int64_t n) {
  if (p.is_zero()) throw Error(Errc::ZeroPolynomial, "constraint_check of 0");
  if (p.span() > det_degree_bound(params, n))
    throw Error(Errc::DegreeBoundViolated, "deg " + std::to_string(p.span()) + " > (g-1) d_mu n = " +
                                               std::to_string(det_degree_bound(params, n)));
  ConstraintVerdict out;
  const auto fac = kronecker_zero_test(p);
  if (!fac) {
    out.kind = VerdictKind::not_mahler_zero;
    return out;
  }
  std::vector<std::int64_t> ks = params.K;
  std::sort(ks.begin(), ks.end());
  for (std::int64_t k : ks)
    if (std::find(fac->cyclotomic_indices.begin(), fac->cyclotomic_indices.end(), k) != fac->cyclotomic_indices.end()) {
      out.kind = VerdictKind::cyclotomic_hit;
      out.k = k;
      return out;
    }
  const double alpha_prime = params.alpha / (static_cast<double>(params.g - 1) * static_cast<double>(params.d_mu));
  out.log_bound = alpha_prime * static_cast<double>(p.span());
  out.max_log_abs = -INFINITY;
  const auto np = normalize_unit(p).poly;
  for (int j = 0; j < params.samples; ++j) {
    const double v = static_cast<double>(std::abs(evaluate_at_root_of_unity(np, j, params.samples)));
    out.max_log_abs = std::max(out.max_log_abs, std::log(v));
  }
  out.kind = out.max_log_abs <= out.log_bound ? VerdictKind::small_everywhere : VerdictKind::bound_exceeded;
  return out;
}

}  // namespace torsionlab
