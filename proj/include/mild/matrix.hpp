#ifndef MILD_MATRIX_HPP
#define MILD_MATRIX_HPP

// Dense matrices over the coefficient ring and their Smith normal form.

#include <cassert>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mild/coeff.hpp"

namespace mild {

class ScalarMatrix {
 public:
  ScalarMatrix() = default;
  ScalarMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}
  ScalarMatrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = int(init.size());
    cols_ = rows_ ? int(init.begin()->size()) : 0;
    data_.reserve(std::size_t(rows_) * cols_);
    for (auto& row : init) {
      assert(int(row.size()) == cols_);
      for (long long v : row) data_.emplace_back(v);
    }
  }

  static ScalarMatrix identity(int n) {
    ScalarMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Scalar& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const Scalar& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

  std::vector<Scalar> column(int j) const {
    std::vector<Scalar> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  friend ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
    assert(a.cols_ == b.rows_);
    ScalarMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Scalar& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += x * b(k, j);
      }
    return c;
  }

  std::vector<Scalar> apply(const std::vector<Scalar>& x) const {
    assert(int(x.size()) == cols_);
    std::vector<Scalar> y(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero() && !x[j].is_zero()) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend bool operator==(const ScalarMatrix& a, const ScalarMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (int j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).str();
      s += "]";
    }
    return s + "]";
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> data_;
};

/// U * M * V = D with U, V invertible over the ring and D diagonal with
/// canonical entries d_0 | d_1 | ... | d_{rank-1}.
struct SmithDecomposition {
  ScalarMatrix U, D, V;
  ScalarMatrix U_inv, V_inv;
  int rank = 0;

  const Scalar& diagonal(int i) const { return D(i, i); }
};

namespace detail {

class SmithWorker {
 public:
  SmithWorker(const ScalarMatrix& m, const CoefficientRing& ring) : ring_(ring) {
    out_.D = m;
    out_.U = ScalarMatrix::identity(m.rows());
    out_.U_inv = ScalarMatrix::identity(m.rows());
    out_.V = ScalarMatrix::identity(m.cols());
    out_.V_inv = ScalarMatrix::identity(m.cols());
  }

  SmithDecomposition run() {
    ScalarMatrix& D = out_.D;
    const int rows = D.rows(), cols = D.cols();
    int t = 0;
    for (; t < std::min(rows, cols); ++t) {
      auto pivot = find_pivot(t);
      if (!pivot) break;
      swap_rows(t, pivot->first);
      swap_cols(t, pivot->second);
      for (;;) {
        clear_column(t);
        clear_row(t);
        bool column_clean = true;
        for (int i = t + 1; i < rows && column_clean; ++i) column_clean = D(i, t).is_zero();
        if (!column_clean) continue;
        // The pivot must divide the whole remaining block.
        int bad_row = -1;
        for (int i = t + 1; i < rows && bad_row < 0; ++i)
          for (int j = t + 1; j < cols; ++j)
            if (!ring_.divides(D(t, t), D(i, j))) {
              bad_row = i;
              break;
            }
        if (bad_row < 0) break;
        add_row(t, bad_row, Scalar(1));
      }
      Scalar u = ring_.unit_part(D(t, t));
      if (!u.is_one()) scale_row(t, u.inverse());
    }
    out_.rank = t;
    return std::move(out_);
  }

 private:
  std::optional<std::pair<int, int>> find_pivot(int t) const {
    const ScalarMatrix& D = out_.D;
    std::optional<std::pair<int, int>> best;
    Scalar best_size;
    for (int i = t; i < D.rows(); ++i)
      for (int j = t; j < D.cols(); ++j) {
        if (D(i, j).is_zero()) continue;
        Scalar size = ring_.canon(D(i, j));
        if (!best || size < best_size) {
          best = {i, j};
          best_size = size;
          if (size.is_one()) return best;
        }
      }
    return best;
  }

  void clear_column(int t) {
    ScalarMatrix& D = out_.D;
    for (int i = t + 1; i < D.rows(); ++i) {
      if (D(i, t).is_zero()) continue;
      if (auto q = ring_.divide(D(i, t), D(t, t))) {
        add_row(i, t, -*q);
      } else {
        auto [g, s, x] = ring_.xgcd(D(t, t), D(i, t));
        Scalar a = *ring_.divide(D(t, t), g), b = *ring_.divide(D(i, t), g);
        mix_rows(t, i, s, x, -b, a);
      }
    }
  }

  void clear_row(int t) {
    ScalarMatrix& D = out_.D;
    for (int j = t + 1; j < D.cols(); ++j) {
      if (D(t, j).is_zero()) continue;
      if (auto q = ring_.divide(D(t, j), D(t, t))) {
        add_col(j, t, -*q);
      } else {
        auto [g, s, x] = ring_.xgcd(D(t, t), D(t, j));
        Scalar a = *ring_.divide(D(t, t), g), b = *ring_.divide(D(t, j), g);
        mix_cols(t, j, s, x, -b, a);
      }
    }
  }

  // Row operations act on D and U; U_inv receives the inverse column operation.
  void swap_rows(int a, int b) {
    if (a == b) return;
    for (ScalarMatrix* m : {&out_.D, &out_.U})
      for (int j = 0; j < m->cols(); ++j) std::swap((*m)(a, j), (*m)(b, j));
    ScalarMatrix& W = out_.U_inv;
    for (int i = 0; i < W.rows(); ++i) std::swap(W(i, a), W(i, b));
  }
  // row_dst += c * row_src
  void add_row(int dst, int src, const Scalar& c) {
    for (ScalarMatrix* m : {&out_.D, &out_.U})
      for (int j = 0; j < m->cols(); ++j)
        if (!(*m)(src, j).is_zero()) (*m)(dst, j) += c * (*m)(src, j);
    ScalarMatrix& W = out_.U_inv;
    for (int i = 0; i < W.rows(); ++i)
      if (!W(i, dst).is_zero()) W(i, src) -= c * W(i, dst);
  }
  void scale_row(int r, const Scalar& c) {
    for (ScalarMatrix* m : {&out_.D, &out_.U})
      for (int j = 0; j < m->cols(); ++j) (*m)(r, j) *= c;
    Scalar ci = c.inverse();
    ScalarMatrix& W = out_.U_inv;
    for (int i = 0; i < W.rows(); ++i) W(i, r) *= ci;
  }
  // [row_a; row_b] <- [[p, q], [r, s]] [row_a; row_b], determinant 1.
  void mix_rows(int a, int b, const Scalar& p, const Scalar& q, const Scalar& r, const Scalar& s) {
    for (ScalarMatrix* m : {&out_.D, &out_.U})
      for (int j = 0; j < m->cols(); ++j) {
        Scalar x = (*m)(a, j), y = (*m)(b, j);
        (*m)(a, j) = p * x + q * y;
        (*m)(b, j) = r * x + s * y;
      }
    // inverse is [[s, -q], [-r, p]] applied on the right
    ScalarMatrix& W = out_.U_inv;
    for (int i = 0; i < W.rows(); ++i) {
      Scalar x = W(i, a), y = W(i, b);
      W(i, a) = x * s - y * r;
      W(i, b) = -x * q + y * p;
    }
  }

  void swap_cols(int a, int b) {
    if (a == b) return;
    for (ScalarMatrix* m : {&out_.D, &out_.V})
      for (int i = 0; i < m->rows(); ++i) std::swap((*m)(i, a), (*m)(i, b));
    ScalarMatrix& W = out_.V_inv;
    for (int j = 0; j < W.cols(); ++j) std::swap(W(a, j), W(b, j));
  }
  // col_dst += c * col_src
  void add_col(int dst, int src, const Scalar& c) {
    for (ScalarMatrix* m : {&out_.D, &out_.V})
      for (int i = 0; i < m->rows(); ++i)
        if (!(*m)(i, src).is_zero()) (*m)(i, dst) += c * (*m)(i, src);
    ScalarMatrix& W = out_.V_inv;
    for (int j = 0; j < W.cols(); ++j)
      if (!W(dst, j).is_zero()) W(src, j) -= c * W(dst, j);
  }
  // [col_a, col_b] <- [col_a, col_b] [[p, r], [q, s]], determinant 1.
  void mix_cols(int a, int b, const Scalar& p, const Scalar& q, const Scalar& r, const Scalar& s) {
    for (ScalarMatrix* m : {&out_.D, &out_.V})
      for (int i = 0; i < m->rows(); ++i) {
        Scalar x = (*m)(i, a), y = (*m)(i, b);
        (*m)(i, a) = p * x + q * y;
        (*m)(i, b) = r * x + s * y;
      }
    ScalarMatrix& W = out_.V_inv;
    for (int j = 0; j < W.cols(); ++j) {
      Scalar x = W(a, j), y = W(b, j);
      W(a, j) = s * x - r * y;
      W(b, j) = -q * x + p * y;
    }
  }

  const CoefficientRing& ring_;
  SmithDecomposition out_;
};

}  // namespace detail

/// Deterministic Smith normal form. Pivots are chosen by least canonical
/// associate, ties broken by lowest row and then lowest column.
inline SmithDecomposition smith_normal_form(const ScalarMatrix& m, const CoefficientRing& ring) {
  return detail::SmithWorker(m, ring).run();
}

/// x with M x = b over the ring, if one exists.
inline std::optional<std::vector<Scalar>> solve_linear(const ScalarMatrix& m, const std::vector<Scalar>& b,
                                                       const CoefficientRing& ring) {
  assert(int(b.size()) == m.rows());
  SmithDecomposition s = smith_normal_form(m, ring);
  std::vector<Scalar> c = s.U.apply(b);
  std::vector<Scalar> y(m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    if (i < s.rank) {
      auto q = ring.divide(c[i], s.diagonal(i));
      if (!q) return std::nullopt;
      y[i] = *q;
    } else if (!c[i].is_zero()) {
      return std::nullopt;
    }
  }
  return s.V.apply(y);
}

/// Free basis of ker(M), as columns.
inline std::vector<std::vector<Scalar>> kernel_basis(const ScalarMatrix& m, const CoefficientRing& ring) {
  SmithDecomposition s = smith_normal_form(m, ring);
  std::vector<std::vector<Scalar>> basis;
  for (int j = s.rank; j < m.cols(); ++j) basis.push_back(s.V.column(j));
  return basis;
}

/// One degree of a finitely generated graded module: R^free_rank plus
/// R/(t) for each invariant factor t (non-units, each dividing the next).
struct ModuleEntry {
  int degree = 0;
  int free_rank = 0;
  std::vector<Scalar> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const ModuleEntry&, const ModuleEntry&) = default;
};

/// Presentation of coker(M) for M: R^cols -> R^rows.
inline ModuleEntry cokernel_presentation(const ScalarMatrix& m, const CoefficientRing& ring) {
  SmithDecomposition s = smith_normal_form(m, ring);
  ModuleEntry e;
  e.free_rank = m.rows() - s.rank;
  for (int i = 0; i < s.rank; ++i)
    if (!ring.is_unit(s.diagonal(i))) e.torsion.push_back(s.diagonal(i));
  return e;
}

}  // namespace mild

#endif  // MILD_MATRIX_HPP
