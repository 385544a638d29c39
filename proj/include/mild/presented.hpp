#ifndef MILD_PRESENTED_HPP
#define MILD_PRESENTED_HPP

// Maps between finitely generated modules presented as
//   R^a / (e_1 E_1, ..., e_a E_a),  e_i = 0 for free generators,
// given by a matrix on the chosen generators.  Kernel and cokernel come back
// as small generating sets, decided through SNF rather than ranks over the
// fraction field, so torsion is never lost.

#include <utility>
#include <vector>

#include "mild/matrix.hpp"

namespace mild {

struct PresentedElement {
  std::vector<Scalar> coords;  // in generator coordinates
  Scalar order;                // 0 when the generated cyclic module is free
};

namespace detail {

inline int count_torsion(const std::vector<Scalar>& orders) {
  int t = 0;
  for (auto& o : orders) t += !o.is_zero();
  return t;
}

// [F | diag of torsion orders of the target]
inline ScalarMatrix augmented(const ScalarMatrix& F, const std::vector<Scalar>& tgt) {
  const int b = F.rows(), a = F.cols();
  ScalarMatrix C(b, a + count_torsion(tgt));
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < a; ++j) C(i, j) = F(i, j);
  int col = a;
  for (int i = 0; i < b; ++i)
    if (!tgt[i].is_zero()) C(i, col++) = tgt[i];
  return C;
}

}  // namespace detail

/// Generators of ker(F: M -> N), as vectors in the source generators.
inline std::vector<PresentedElement> presented_kernel(const ScalarMatrix& F, const std::vector<Scalar>& src,
                                                      const std::vector<Scalar>& tgt,
                                                      const CoefficientRing& ring) {
  const int a = F.cols();
  if (a == 0) return {};
  ScalarMatrix C = detail::augmented(F, tgt);
  auto kb = kernel_basis(C, ring);
  // K' = projection of ker C to the source block
  ScalarMatrix P(a, int(kb.size()));
  for (int j = 0; j < int(kb.size()); ++j)
    for (int i = 0; i < a; ++i) P(i, j) = kb[j][i];
  SmithDecomposition sp = smith_normal_form(P, ring);
  const int rk = sp.rank;
  if (rk == 0) return {};
  ScalarMatrix Kb(a, rk);  // a basis of K'
  for (int j = 0; j < rk; ++j)
    for (int i = 0; i < a; ++i) Kb(i, j) = sp.U_inv(i, j) * sp.diagonal(j);
  // source relations in K'-coordinates
  const int s = detail::count_torsion(src);
  ScalarMatrix Q(rk, s);
  int col = 0;
  for (int i = 0; i < a; ++i) {
    if (src[i].is_zero()) continue;
    std::vector<Scalar> rel(a);
    rel[i] = src[i];
    auto y = solve_linear(Kb, rel, ring);
    if (!y) throw Error("presented_kernel: map is not well defined on torsion");
    for (int r = 0; r < rk; ++r) Q(r, col) = (*y)[r];
    ++col;
  }
  SmithDecomposition sq = smith_normal_form(Q, ring);
  std::vector<PresentedElement> out;
  for (int i = 0; i < rk; ++i) {
    Scalar order = i < sq.rank ? sq.diagonal(i) : Scalar();
    if (!order.is_zero() && ring.is_unit(order)) continue;
    PresentedElement e;
    e.coords.assign(a, Scalar());
    for (int r = 0; r < rk; ++r) {
      if (sq.U_inv(r, i).is_zero()) continue;
      for (int k = 0; k < a; ++k) e.coords[k] += Kb(k, r) * sq.U_inv(r, i);
    }
    for (int k = 0; k < a; ++k)
      if (!src[k].is_zero()) e.coords[k] = ring.reduce_mod(e.coords[k], src[k]);
    e.order = order;
    out.push_back(std::move(e));
  }
  return out;
}

/// Generators of coker(F: M -> N), as vectors in the target generators.
inline std::vector<PresentedElement> presented_cokernel(const ScalarMatrix& F, const std::vector<Scalar>& tgt,
                                                        const CoefficientRing& ring) {
  const int b = F.rows();
  if (b == 0) return {};
  ScalarMatrix C = detail::augmented(F, tgt);
  SmithDecomposition sc = smith_normal_form(C, ring);
  std::vector<PresentedElement> out;
  for (int i = 0; i < b; ++i) {
    Scalar order = i < sc.rank ? sc.diagonal(i) : Scalar();
    if (!order.is_zero() && ring.is_unit(order)) continue;
    out.push_back({sc.U_inv.column(i), order});
  }
  return out;
}

inline bool presented_injective(const ScalarMatrix& F, const std::vector<Scalar>& src,
                                const std::vector<Scalar>& tgt, const CoefficientRing& ring) {
  return presented_kernel(F, src, tgt, ring).empty();
}

inline bool presented_surjective(const ScalarMatrix& F, const std::vector<Scalar>& tgt,
                                 const CoefficientRing& ring) {
  return presented_cokernel(F, tgt, ring).empty();
}

}  // namespace mild

#endif  // MILD_PRESENTED_HPP
