#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torsionlab/cyclic.hpp"
#include "torsionlab/cyclotomic.hpp"
#include "torsionlab/error.hpp"
#include "torsionlab/form.hpp"
#include "torsionlab/mahler.hpp"
#include "torsionlab/parallel.hpp"
#include "torsionlab/polynomial.hpp"
#include "torsionlab/smith.hpp"

namespace torsionlab {

/// Homology of the q-fold cyclic cover presented by B_q.
struct TorsionReport {
  std::int64_t q = 0;
  Integer torsion_order{1};
  std::size_t betti = 0;
  double log_torsion_over_q = 0.0;
  /// Rank of the two trivial summands of H_1(S_q) outside the presented part.
  std::size_t free_offset = 2;
  std::vector<Integer> torsion_factors;  ///< invariant factors > 1

  friend bool operator==(const TorsionReport&, const TorsionReport&) = default;
};

inline TorsionReport report_from(std::int64_t q, const CokernelInvariants& inv) {
  TorsionReport r;
  r.q = q;
  r.betti = inv.betti();
  r.torsion_order = inv.torsion_order();
  for (const auto& d : inv.invariant_factors)
    if (d > 1) r.torsion_factors.push_back(d);
  r.log_torsion_over_q = log_abs(r.torsion_order) / static_cast<double>(q);
  return r;
}

/// Cokernel of the integer expansion of B_q acting on Z[Z/q]^{g-1}.
inline TorsionReport cover_homology(const Matrix<CycElem>& bq) {
  if (bq.empty() || !bq.square()) throw Error(Errc::InvalidInput, "B_q must be a nonempty square matrix");
  const std::int64_t q = bq(0, 0).modulus();
  for (const auto& c : bq.data())
    if (c.modulus() != q) throw Error(Errc::InvalidModulus, "entries of B_q have different moduli");
  return report_from(q, invariant_factors(circulant_expand(bq)));
}

struct GrowthScanOptions {
  std::size_t threads = 0;  ///< 0 = all available (still capped by TORSIONLAB_THREADS)
  std::size_t window = 20;  ///< trailing window for the mean absolute deviation
  double tol = 1e-12;       ///< root residual tolerance for the Mahler measure
};

struct GrowthScan {
  std::vector<TorsionReport> reports;
  LaurentPoly det;  ///< det B_inf
  /// det B_inf = 0: the covers keep positive rank and the growth rate is undefined.
  bool degenerate = false;
  std::optional<MahlerResult> mahler;

  /// |log T_q / q - m(det)| per report; empty when degenerate.
  std::vector<double> deviations() const {
    std::vector<double> out;
    if (!mahler) return out;
    for (const auto& r : reports) out.push_back(std::abs(r.log_torsion_over_q - mahler->log_measure));
    return out;
  }

  /// Mean absolute deviation over reports with q in (q_end - window, q_end].
  double window_deviation(std::int64_t q_end, std::size_t window) const {
    if (!mahler) return NAN;
    double sum = 0;
    std::size_t count = 0;
    for (const auto& r : reports)
      if (r.q <= q_end && r.q > q_end - static_cast<std::int64_t>(window)) {
        sum += std::abs(r.log_torsion_over_q - mahler->log_measure);
        ++count;
      }
    return count ? sum / static_cast<double>(count) : NAN;
  }

  /// Windowed deviation at the last `count` checkpoints, evenly spaced up to
  /// the largest scanned q. Raw deviations oscillate with the arithmetic of q
  /// (roots near roots of unity), so trends are read from window means.
  std::vector<std::pair<std::int64_t, double>> deviation_checkpoints(std::size_t count, std::size_t window) const {
    std::vector<std::pair<std::int64_t, double>> out;
    if (reports.empty() || count == 0) return out;
    const std::int64_t q_max = reports.back().q;
    const std::int64_t step = std::max<std::int64_t>(1, q_max / static_cast<std::int64_t>(count));
    for (std::size_t k = count; k-- > 0;) {
      const std::int64_t c = q_max - static_cast<std::int64_t>(k) * step;
      if (c >= 1) out.emplace_back(c, window_deviation(c, window));
    }
    return out;
  }
};

/// Torsion of the cover tower for each q in q_values, compared with the Mahler
/// measure of det B_inf.
inline GrowthScan growth_scan(const Matrix<LaurentPoly>& b_inf, const std::vector<std::int64_t>& q_values,
                              const GrowthScanOptions& options = {}) {
  if (q_values.empty()) throw Error(Errc::InvalidInput, "growth_scan needs at least one q");
  for (std::size_t k = 0; k < q_values.size(); ++k) {
    if (q_values[k] < 1) throw Error(Errc::InvalidModulus, "q must be positive");
    if (k && q_values[k] <= q_values[k - 1]) throw Error(Errc::InvalidInput, "q values must be ascending");
  }
  if (b_inf.empty() || !b_inf.square()) throw Error(Errc::InvalidInput, "B_inf must be a nonempty square matrix");

  GrowthScan scan;
  scan.det = determinant(b_inf);
  scan.degenerate = scan.det.is_zero();
  if (!scan.degenerate) scan.mahler = mahler_measure(scan.det, options.tol);

  scan.reports.resize(q_values.size());
  parallel_for(q_values.size(), options.threads, [&](std::size_t k) {
    scan.reports[k] = cover_homology(reduce_mod_q(b_inf, q_values[k]));
  });
  return scan;
}

inline std::vector<std::int64_t> q_range(std::int64_t q_min, std::int64_t q_max, std::int64_t stride = 1) {
  if (q_min < 1 || q_max < q_min || stride < 1) throw Error(Errc::InvalidInput, "invalid q range");
  std::vector<std::int64_t> out;
  for (std::int64_t q = q_min; q <= q_max; q += stride) out.push_back(q);
  return out;
}

// ---------------------------------------------------------------------------
// Heegaard manifolds

struct HeegaardHomology {
  int g = 0;
  std::size_t betti = 0;
  Integer torsion_order{1};
  std::vector<Integer> torsion_factors;  ///< invariant factors > 1
  Integer det_b;                         ///< |det B(phi)|, bottom-left g x g block
  std::optional<bool> det_agrees;        ///< set when det B(phi) != 0
};

inline Matrix<Integer> symplectic_form(int g) {
  const auto n = static_cast<std::size_t>(2 * g);
  Matrix<Integer> j(n, n, Integer(0));
  for (std::size_t i = 0; i < static_cast<std::size_t>(g); ++i) {
    j(i, g + i) = 1;
    j(g + i, i) = -1;
  }
  return j;
}

inline bool is_symplectic(const Matrix<Integer>& phi) {
  if (!phi.square() || phi.rows() % 2 != 0 || phi.rows() == 0) return false;
  const int g = static_cast<int>(phi.rows() / 2);
  const auto j = symplectic_form(g);
  return multiply(multiply(phi.transposed(), j, Integer(0)), phi, Integer(0)) == j;
}

/// H_1(N_phi) = H_1(S) / <L, phi_* L> with L spanned by the first g basis vectors.
inline HeegaardHomology heegaard_homology(const Matrix<Integer>& phi) {
  if (!is_symplectic(phi)) throw Error(Errc::NotSymplectic, "phi_* does not preserve the symplectic form");
  const std::size_t g = phi.rows() / 2;
  Matrix<Integer> gens(2 * g, 2 * g, Integer(0));
  for (std::size_t i = 0; i < g; ++i) {
    gens(i, i) = 1;
    for (std::size_t r = 0; r < 2 * g; ++r) gens(r, g + i) = phi(r, i);
  }
  const auto snf = smith_normal_form(gens);
  HeegaardHomology out;
  out.g = static_cast<int>(g);
  out.betti = 2 * g - snf.rank;
  for (const auto& d : snf.invariant_factors)
    if (d != 0) {
      out.torsion_order *= d;
      if (d > 1) out.torsion_factors.push_back(d);
    }
  const auto b = phi.submatrix(g, 0, g, g);
  out.det_b = abs(determinant(b, Integer(0), Integer(1)));
  if (out.det_b != 0) out.det_agrees = out.betti == 0 && out.torsion_order == out.det_b;
  return out;
}

// ---------------------------------------------------------------------------
// Betti growth at a primitive character

/// True when iota(det B_q) = 0 at a primitive q-th root, decided exactly: the
/// lifted determinant is reduced modulo Phi_q. The kernel of iota is the same
/// for every primitive root, so the answer does not depend on root_index.
inline bool betti_increase_check(const Matrix<CycElem>& bq, std::int64_t root_index) {
  if (bq.empty() || !bq.square()) throw Error(Errc::InvalidInput, "B_q must be a nonempty square matrix");
  const std::int64_t q = bq(0, 0).modulus();
  check_primitive(q, root_index);
  const auto det = determinant(bq);
  poly::Dense lifted(det.coeffs().begin(), det.coeffs().end());
  poly::trim(lifted);
  if (lifted.empty()) return true;
  const auto rem = poly::rem_monic(std::move(lifted), *CyclotomicTable::shared().dense(q));
  return rem.empty();
}

/// Numerical cross-check: dimension of iota(L) + iota(M L) inside C^{2g-2},
/// where L is spanned by the a~ basis. A deficit means the Betti number of the
/// cover grows at this character.
struct RankCrossCheck {
  std::size_t rank = 0;
  std::size_t dimension = 0;
  double smallest_singular_value = 0;
  bool deficit() const { return rank < dimension; }
};

inline RankCrossCheck betti_rank_cross_check(const CyclicFormMatrix& m, std::int64_t root_index,
                                             double rel_tol = 1e-9) {
  const auto im = iota(m, root_index);
  const auto h = static_cast<Eigen::Index>(m.model.half());
  Eigen::MatrixXcd span(2 * h, 2 * h);
  span.leftCols(h) = Eigen::MatrixXcd::Identity(2 * h, h);
  span.rightCols(h) = im.leftCols(h);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(span);
  const auto& s = svd.singularValues();
  RankCrossCheck out;
  out.dimension = static_cast<std::size_t>(2 * h);
  out.smallest_singular_value = s(s.size() - 1);
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel_tol * s(0)) ++out.rank;
  return out;
}

}  // namespace torsionlab
