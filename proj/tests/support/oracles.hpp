#ifndef MILD_TESTS_ORACLES_HPP
#define MILD_TESTS_ORACLES_HPP

// Reference computations written independently of the library: plain GMP
// rationals and textbook elimination.

#include <gmpxx.h>

#include <optional>
#include <random>
#include <vector>

#include "mild/matrix.hpp"

namespace oracle {

using QMat = std::vector<std::vector<mpq_class>>;

inline QMat to_q(const mild::ScalarMatrix& m) {
  QMat q(m.rows(), std::vector<mpq_class>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) q[i][j] = m(i, j).to_mpq();
  return q;
}

inline mpq_class determinant(QMat a) {
  const int n = int(a.size());
  mpq_class det = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      mpq_class f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

inline int rank(QMat a) {
  const int rows = int(a.size());
  const int cols = rows ? int(a[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[r][c];
      for (int k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

/// Unique solution of a nonsingular square system over Q.
inline std::optional<std::vector<mpq_class>> solve_square(QMat a, std::vector<mpq_class> b) {
  const int n = int(a.size());
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      mpq_class f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Prime factors of |n| that are not in `inverted`.
inline bool s_unit(const mpz_class& n, const std::vector<long>& inverted) {
  mpz_class m = abs(n);
  if (m == 0) return false;
  for (long p : inverted)
    while (m % p == 0) m /= p;
  return m == 1;
}

inline mild::ScalarMatrix random_matrix(std::mt19937& rng, int max_dim, int bound) {
  std::uniform_int_distribution<int> dim(1, max_dim), val(-bound, bound), sparse(0, 3);
  int r = dim(rng), c = dim(rng);
  mild::ScalarMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = sparse(rng) == 0 ? mild::Scalar(0) : mild::Scalar(val(rng));
  return m;
}

}  // namespace oracle

#endif
