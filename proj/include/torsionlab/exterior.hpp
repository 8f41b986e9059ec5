#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "torsionlab/form.hpp"

namespace torsionlab {

/// Orthonormal basis of wedge^{g-1} C^{2g-2} indexed by sorted index sets,
/// with e = x_1 ^ ... ^ x_{g-1} (the a-block) and f = y_1 ^ ... ^ y_{g-1}.
struct ExteriorMarking {
  int g = 3;
  std::vector<std::vector<int>> basis;  ///< lexicographic k-subsets of {0..2g-3}
  std::size_t e_index = 0;
  std::size_t f_index = 0;

  explicit ExteriorMarking(int genus) : g(genus) {
    const int n = 2 * (g - 1);
    const int k = g - 1;
    std::vector<int> subset(static_cast<std::size_t>(k));
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
      basis.push_back(subset);
      int i = k - 1;
      while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++subset[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
    e_index = 0;
    f_index = basis.size() - 1;
  }

  std::size_t dimension() const { return basis.size(); }

  Eigen::VectorXcd e() const { return unit(e_index); }
  Eigen::VectorXcd f() const { return unit(f_index); }

 private:
  Eigen::VectorXcd unit(std::size_t i) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return v;
  }
};

namespace detail {

inline int permutation_sign(const std::vector<int>& perm) {
  int sign = 1;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace detail

/// Brute-force matrix of wedge^k A in the marking basis: the coefficient of
/// basis vector I in A e_{J_1} ^ ... ^ A e_{J_k}, expanded over all orderings.
inline Eigen::MatrixXcd exterior_power(const Eigen::MatrixXcd& a, const ExteriorMarking& marking) {
  const auto dim = static_cast<Eigen::Index>(marking.dimension());
  const std::size_t k = static_cast<std::size_t>(marking.g - 1);
  Eigen::MatrixXcd out(dim, dim);
  std::vector<int> perm(k);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto& jset = marking.basis[static_cast<std::size_t>(col)];
    for (Eigen::Index row = 0; row < dim; ++row) {
      const auto& iset = marking.basis[static_cast<std::size_t>(row)];
      std::iota(perm.begin(), perm.end(), 0);
      std::complex<double> acc = 0;
      do {
        std::complex<double> term = static_cast<double>(detail::permutation_sign(perm));
        for (std::size_t l = 0; l < k; ++l) term *= a(iset[static_cast<std::size_t>(perm[l])], jset[l]);
        acc += term;
      } while (std::next_permutation(perm.begin(), perm.end()));
      out(row, col) = acc;
    }
  }
  return out;
}

/// (wedge^{g-1} A e, f) as the determinant of the bottom-left block of A.
inline std::complex<double> exterior_coefficient(const Eigen::MatrixXcd& a, const ExteriorMarking& marking) {
  const auto h = static_cast<Eigen::Index>(marking.g - 1);
  return a.block(h, 0, h, h).determinant();
}

/// Same quantity through the full exterior power; for cross-validation.
inline std::complex<double> exterior_coefficient_slow(const Eigen::MatrixXcd& a, const ExteriorMarking& marking) {
  const Eigen::MatrixXcd w = exterior_power(a, marking);
  return w(static_cast<Eigen::Index>(marking.f_index), static_cast<Eigen::Index>(marking.e_index));
}

/// ||wedge^{g-1} A e|| from the Gram determinant of the first g-1 columns.
inline double exterior_norm_of_e(const Eigen::MatrixXcd& a, const ExteriorMarking& marking) {
  const auto h = static_cast<Eigen::Index>(marking.g - 1);
  const Eigen::MatrixXcd cols = a.leftCols(h);
  const std::complex<double> gram = (cols.adjoint() * cols).determinant();
  return std::sqrt(std::max(0.0, gram.real()));
}

}  // namespace torsionlab
