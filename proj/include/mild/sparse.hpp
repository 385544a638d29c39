#ifndef MILD_SPARSE_HPP
#define MILD_SPARSE_HPP

// Sparse vectors and an incremental lattice echelon form over Q or Z_S.
//
// The echelon keeps one row per pivot (the smallest index of the row).
// Inserting a vector either divides it through by the existing pivot or
// replaces the pivot row by a Bezout combination, so the set of rows is
// always a basis of the span of everything inserted so far.  Optionally each
// row remembers how it was built from the inserted vectors, which gives
// solutions of linear systems and a basis of the relation module for free.

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mild/coeff.hpp"

namespace mild {

class SparseVec {
 public:
  using Entry = std::pair<int, Scalar>;

  SparseVec() = default;
  static SparseVec unit(int i, Scalar c = Scalar(1)) {
    SparseVec v;
    if (!c.is_zero()) v.e_.emplace_back(i, std::move(c));
    return v;
  }
  /// Build from unsorted entries; duplicates are summed.
  static SparseVec from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    SparseVec v;
    for (auto& [i, c] : entries) {
      if (!v.e_.empty() && v.e_.back().first == i)
        v.e_.back().second += c;
      else
        v.e_.emplace_back(i, std::move(c));
      if (v.e_.back().second.is_zero()) v.e_.pop_back();
    }
    return v;
  }
  static SparseVec from_dense(const std::vector<Scalar>& d) {
    SparseVec v;
    for (int i = 0; i < int(d.size()); ++i)
      if (!d[i].is_zero()) v.e_.emplace_back(i, d[i]);
    return v;
  }

  bool empty() const { return e_.empty(); }
  std::size_t size() const { return e_.size(); }
  int lead() const { return e_.empty() ? -1 : e_.front().first; }
  const Scalar& lead_coeff() const { return e_.front().second; }
  const std::vector<Entry>& entries() const { return e_; }
  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }

  Scalar get(int i) const {
    auto it = std::lower_bound(e_.begin(), e_.end(), i,
                               [](const Entry& a, int j) { return a.first < j; });
    return (it != e_.end() && it->first == i) ? it->second : Scalar();
  }

  std::vector<Scalar> to_dense(int n) const {
    std::vector<Scalar> d(n);
    for (auto& [i, c] : e_) d[i] = c;
    return d;
  }

  /// this += c * w
  void axpy(const Scalar& c, const SparseVec& w) {
    if (c.is_zero() || w.e_.empty()) return;
    std::vector<Entry> out;
    out.reserve(e_.size() + w.e_.size());
    auto a = e_.begin(), ae = e_.end();
    auto b = w.e_.begin(), be = w.e_.end();
    while (a != ae || b != be) {
      if (b == be || (a != ae && a->first < b->first)) {
        out.push_back(std::move(*a++));
      } else if (a == ae || b->first < a->first) {
        out.emplace_back(b->first, c * b->second);
        ++b;
      } else {
        Scalar s = a->second + c * b->second;
        if (!s.is_zero()) out.emplace_back(a->first, std::move(s));
        ++a;
        ++b;
      }
    }
    e_ = std::move(out);
  }

  void scale(const Scalar& c) {
    if (c.is_zero()) {
      e_.clear();
      return;
    }
    for (auto& en : e_) en.second *= c;
  }

  /// Keep only indices < n.
  void truncate(int n) {
    while (!e_.empty() && e_.back().first >= n) e_.pop_back();
  }

  SparseVec restricted(int lo, int hi, int shift = 0) const {
    SparseVec v;
    for (auto& [i, c] : e_)
      if (i >= lo && i < hi) v.e_.emplace_back(i - lo + shift, c);
    return v;
  }

  friend SparseVec operator+(SparseVec a, const SparseVec& b) {
    a.axpy(Scalar(1), b);
    return a;
  }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) {
    a.axpy(Scalar(-1), b);
    return a;
  }
  friend SparseVec operator*(const Scalar& c, SparseVec a) {
    a.scale(c);
    return a;
  }
  friend bool operator==(const SparseVec&, const SparseVec&) = default;

 private:
  std::vector<Entry> e_;
};

class LatticeEchelon {
 public:
  struct Row {
    SparseVec vec;
    SparseVec combo;  // vec = sum combo[i] * inserted[i]
  };

  LatticeEchelon(const CoefficientRing& ring, bool track = false) : ring_(&ring), track_(track) {}

  const CoefficientRing& ring() const { return *ring_; }
  int inserted() const { return count_; }
  int rank() const { return int(rows_.size()); }
  const std::map<int, Row>& rows() const { return rows_; }
  const std::vector<SparseVec>& relations() const { return relations_; }
  bool has_pivot(int p) const { return rows_.count(p) != 0; }

  /// Insert v; returns its id (the index used in combos).
  int insert(SparseVec v) {
    int id = count_++;
    SparseVec combo = track_ ? SparseVec::unit(id) : SparseVec();
    while (!v.empty()) {
      int p = v.lead();
      auto it = rows_.find(p);
      if (it == rows_.end()) {
        normalize(v, combo);
        rows_.emplace(p, Row{std::move(v), std::move(combo)});
        return id;
      }
      Row& row = it->second;
      const Scalar a = row.vec.lead_coeff();
      const Scalar b = v.lead_coeff();
      if (auto q = ring_->divide(b, a)) {
        v.axpy(-*q, row.vec);
        if (track_) combo.axpy(-*q, row.combo);
      } else {
        auto [g, s, t] = ring_->xgcd(a, b);
        Scalar ag = *ring_->divide(a, g), bg = *ring_->divide(b, g);
        SparseVec nrow = s * row.vec;
        nrow.axpy(t, v);
        SparseVec rest = ag * v;
        rest.axpy(-bg, row.vec);
        if (track_) {
          SparseVec ncombo = s * row.combo;
          ncombo.axpy(t, combo);
          SparseVec rcombo = ag * combo;
          rcombo.axpy(-bg, row.combo);
          row.combo = std::move(ncombo);
          combo = std::move(rcombo);
        }
        row.vec = std::move(nrow);
        normalize(row.vec, row.combo);
        v = std::move(rest);
      }
    }
    if (track_) relations_.push_back(std::move(combo));
    return id;
  }

  /// Multipliers c (keyed by pivot) with x = sum c[p] * row[p], if x lies in
  /// the span.
  std::optional<std::vector<std::pair<int, Scalar>>> decompose(SparseVec x) const {
    std::vector<std::pair<int, Scalar>> out;
    while (!x.empty()) {
      auto it = rows_.find(x.lead());
      if (it == rows_.end()) return std::nullopt;
      auto q = ring_->divide(x.lead_coeff(), it->second.vec.lead_coeff());
      if (!q) return std::nullopt;
      x.axpy(-*q, it->second.vec);
      out.emplace_back(it->first, std::move(*q));
    }
    return out;
  }

  bool contains(const SparseVec& x) const { return decompose(x).has_value(); }

  /// Coefficients over the inserted vectors reproducing x (needs tracking).
  std::optional<SparseVec> solve(const SparseVec& x) const {
    assert(track_);
    auto dec = decompose(x);
    if (!dec) return std::nullopt;
    SparseVec s;
    for (auto& [p, c] : *dec) s.axpy(c, rows_.at(p).combo);
    return s;
  }

  /// Rows in pivot order.
  std::vector<SparseVec> basis() const {
    std::vector<SparseVec> b;
    b.reserve(rows_.size());
    for (auto& [p, r] : rows_) b.push_back(r.vec);
    return b;
  }

 private:
  void normalize(SparseVec& v, SparseVec& combo) const {
    Scalar u = ring_->unit_part(v.lead_coeff());
    if (u.is_one()) return;
    Scalar inv = u.inverse();
    v.scale(inv);
    if (track_) combo.scale(inv);
  }

  const CoefficientRing* ring_;
  bool track_;
  int count_ = 0;
  std::map<int, Row> rows_;
  std::vector<SparseVec> relations_;
};

}  // namespace mild

#endif  // MILD_SPARSE_HPP
