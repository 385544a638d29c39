#ifndef MILD_COHOMOLOGY_HPP
#define MILD_COHOMOLOGY_HPP

// Cohomology with torsion of degreewise finite cochain complexes of the form
//   C^k = F^k / N^k,   F^k free on a basis, N^k a d-stable submodule,
// which covers free algebras, quotients by ideals and ideals themselves.
//
// Per degree we keep an echelon of {d e_j} u N^{k+1} with insertion history:
// its rows span the coboundary lattice, its relations project onto the
// cocycle lattice Z^k = {x : dx in N^{k+1}}.  H^k = Z^k / (dF^{k-1} + N^k) is
// then reduced to a small dense SNF after eliminating unit pivots.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mild/matrix.hpp"
#include "mild/morphism.hpp"
#include "mild/presented.hpp"

namespace mild {

class CochainComplex {
 public:
  virtual ~CochainComplex() = default;
  virtual const CoefficientRing& ring() const = 0;
  virtual int dim(int k) const = 0;
  /// d of the j-th basis vector of degree k, in degree k+1 coordinates.
  virtual SparseVec diff(int k, int j) const = 0;
  /// Spanning set of N^k.
  virtual std::vector<SparseVec> relations(int k) const = 0;
};

/// A free algebra, optionally modulo an ideal.
class AlgebraComplex : public CochainComplex {
 public:
  AlgebraComplex(AlgebraPtr A, IdealPtr I = nullptr) : A_(std::move(A)), I_(std::move(I)) {}
  const CoefficientRing& ring() const override { return A_->ring(); }
  int dim(int k) const override { return k < 0 ? 0 : A_->dim(k); }
  SparseVec diff(int k, int j) const override { return A_->to_vec(A_->d_monomial(A_->basis(k)[j]), k + 1); }
  std::vector<SparseVec> relations(int k) const override {
    if (!I_ || k < 1) return {};
    return I_->component(k).basis();
  }
  const AlgebraPtr& algebra() const { return A_; }
  const IdealPtr& ideal() const { return I_; }

 private:
  AlgebraPtr A_;
  IdealPtr I_;
};

/// The ideal J as a complex, in coordinates of its degreewise bases.
class IdealComplex : public CochainComplex {
 public:
  explicit IdealComplex(IdealPtr J) : J_(std::move(J)) {}
  const CoefficientRing& ring() const override { return J_->ambient()->ring(); }
  int dim(int k) const override { return k < 1 ? 0 : J_->rank(k); }
  SparseVec diff(int k, int j) const override {
    const FreeGradedAlgebra& A = *J_->ambient();
    const auto& rows = J_->component(k).rows();
    auto it = rows.begin();
    std::advance(it, j);
    SparseVec dx = A.to_vec(A.d(A.from_vec(it->second.vec, k)), k + 1);
    const auto& next = J_->component(k + 1);
    auto dec = next.decompose(dx);
    if (!dec) throw NotDStable("ideal is not closed under d", A.format(A.from_vec(it->second.vec, k)), k);
    std::map<int, int> pos;
    int p = 0;
    for (auto& [piv, r] : next.rows()) pos[piv] = p++;
    std::vector<SparseVec::Entry> en;
    for (auto& [piv, c] : *dec) en.emplace_back(pos[piv], c);
    return SparseVec::from_entries(std::move(en));
  }
  std::vector<SparseVec> relations(int) const override { return {}; }

 private:
  IdealPtr J_;
};

/// One degree of a cohomology table.
struct CohomologyGroup {
  int degree = 0;
  std::vector<Scalar> orders;   // per generator; 0 means free
  std::vector<SparseVec> reps;  // representative cocycles in F^k

  int num_generators() const { return int(orders.size()); }
  bool is_zero() const { return orders.empty(); }
  ModuleEntry entry() const {
    ModuleEntry e;
    e.degree = degree;
    for (auto& o : orders)
      if (o.is_zero())
        ++e.free_rank;
      else
        e.torsion.push_back(o);
    return e;
  }
};

class Cohomology {
 public:
  explicit Cohomology(std::shared_ptr<const CochainComplex> C) : C_(std::move(C)) {}

  const CochainComplex& complex() const { return *C_; }
  const CoefficientRing& ring() const { return C_->ring(); }

  const CohomologyGroup& group(int k) const { return level(k).H(); }
  ModuleEntry entry(int k) const { return group(k).entry(); }

  bool is_cocycle(int k, const SparseVec& x) const { return level(k).Z().contains(x); }

  /// Coordinates of [x] on the generators, reduced modulo their orders.
  std::vector<Scalar> coordinates(int k, const SparseVec& x) const {
    const Level& L = level(k);
    L.H();
    auto dec = L.Z().decompose(x);
    if (!dec) throw Error("coordinates: not a cocycle in degree " + std::to_string(k));
    std::vector<SparseVec::Entry> en;
    for (auto& [piv, c] : *dec) en.emplace_back(L.zpos.at(piv), c);
    SparseVec y = L.reduce_units(SparseVec::from_entries(std::move(en)));
    const int nrem = int(L.rem.size());
    std::vector<Scalar> yr(nrem);
    for (auto& [i, c] : y) yr[L.rem_index.at(i)] = c;
    std::vector<Scalar> out;
    out.reserve(L.gen_cols.size());
    for (std::size_t g = 0; g < L.gen_cols.size(); ++g) {
      int col = L.gen_cols[g];
      Scalar s;
      for (int r = 0; r < nrem; ++r)
        if (!yr[r].is_zero() && !L.V(r, col).is_zero()) s += yr[r] * L.V(r, col);
      const Scalar& o = L.h.orders[g];
      out.push_back(o.is_zero() ? s : ring().reduce_mod(s, o));
    }
    return out;
  }

  bool is_coboundary(int k, const SparseVec& x) const {
    for (auto& c : coordinates(k, x))
      if (!c.is_zero()) return false;
    return true;
  }

  /// y in F^{k-1} with dy = x modulo N^k, if x is a coboundary.
  std::optional<SparseVec> bounding_cochain(int k, const SparseVec& x) const {
    if (k == 0) {
      LatticeEchelon N(ring());
      for (auto& r : C_->relations(0)) N.insert(r);
      if (N.contains(x)) return SparseVec();
      return std::nullopt;
    }
    const Level& L = level(k - 1);
    auto s = L.E1().solve(x);
    if (!s) return std::nullopt;
    s->truncate(C_->dim(k - 1));
    return s;
  }

  SparseVec differential(int k, const SparseVec& x) const {
    SparseVec r;
    for (auto& [j, c] : x) r.axpy(c, C_->diff(k, j));
    return r;
  }

  /// Forget everything that depends on cochains of degree >= k.
  void invalidate_from(int k) {
    for (auto it = levels_.lower_bound(k - 1); it != levels_.end();) it = levels_.erase(it);
  }

 private:
  struct Level {
    const Cohomology* owner = nullptr;
    int k = 0;
    mutable std::optional<LatticeEchelon> e1, z;
    mutable bool have_h = false;
    mutable CohomologyGroup h;
    mutable std::map<int, int> zpos;       // Z pivot -> position in K
    mutable std::vector<int> zpiv;         // position -> Z pivot
    mutable std::map<int, SparseVec> unit; // unit pivot (K position) -> row
    mutable std::vector<int> rem;          // K positions that are not unit pivots
    mutable std::map<int, int> rem_index;
    mutable ScalarMatrix V;
    mutable std::vector<int> gen_cols;

    const LatticeEchelon& E1() const {
      if (!e1) {
        const CochainComplex& C = *owner->C_;
        LatticeEchelon E(C.ring(), true);
        const int n = C.dim(k);
        for (int j = 0; j < n; ++j) E.insert(C.diff(k, j));
        for (auto& r : C.relations(k + 1)) E.insert(r);
        e1.emplace(std::move(E));
      }
      return *e1;
    }

    const LatticeEchelon& Z() const {
      if (!z) {
        const CochainComplex& C = *owner->C_;
        const int n = C.dim(k);
        LatticeEchelon E(C.ring());
        for (auto rel : E1().relations()) {
          rel.truncate(n);
          E.insert(std::move(rel));
        }
        int p = 0;
        for (auto& [piv, r] : E.rows()) {
          zpos[piv] = p++;
          zpiv.push_back(piv);
        }
        z.emplace(std::move(E));
      }
      return *z;
    }

    SparseVec reduce_units(SparseVec y) const {
      int from = -1;
      for (;;) {
        int hit = -1;
        Scalar c;
        for (auto& [i, x] : y)
          if (i > from && unit.count(i)) {
            hit = i;
            c = x;
            break;
          }
        if (hit < 0) return y;
        y.axpy(-c, unit.at(hit));
        from = hit;
      }
    }

    const CohomologyGroup& H() const {
      if (have_h) return h;
      const CochainComplex& C = *owner->C_;
      const CoefficientRing& R = C.ring();
      const LatticeEchelon& Zk = Z();
      // coboundaries (plus N^k) in K coordinates
      std::vector<SparseVec> bvecs;
      if (k == 0) {
        bvecs = C.relations(0);
      } else {
        bvecs = owner->level(k - 1).E1().basis();
      }
      LatticeEchelon E3(R);
      for (auto& b : bvecs) {
        auto dec = Zk.decompose(b);
        if (!dec) throw Error("internal: coboundary outside the cocycle lattice in degree " + std::to_string(k));
        std::vector<SparseVec::Entry> en;
        for (auto& [piv, c] : *dec) en.emplace_back(zpos.at(piv), c);
        E3.insert(SparseVec::from_entries(std::move(en)));
      }
      std::vector<SparseVec> nonunit;
      for (auto& [p, row] : E3.rows()) {
        if (R.is_unit(row.vec.lead_coeff())) {
          SparseVec u = row.vec;
          u.scale(row.vec.lead_coeff().inverse());
          unit.emplace(p, std::move(u));
        } else {
          nonunit.push_back(row.vec);
        }
      }
      const int nk = int(zpiv.size());
      for (int i = 0; i < nk; ++i)
        if (!unit.count(i)) {
          rem_index[i] = int(rem.size());
          rem.push_back(i);
        }
      const int nrem = int(rem.size());
      ScalarMatrix M(int(nonunit.size()), nrem);
      for (int r = 0; r < int(nonunit.size()); ++r) {
        SparseVec y = reduce_units(nonunit[r]);
        for (auto& [i, c] : y) M(r, rem_index.at(i)) = c;
      }
      SmithDecomposition s = smith_normal_form(M, R);
      V = s.V;
      h.degree = k;
      for (int i = 0; i < nrem; ++i) {
        Scalar order = i < s.rank ? s.diagonal(i) : Scalar();
        if (!order.is_zero() && R.is_unit(order)) continue;
        gen_cols.push_back(i);
        h.orders.push_back(order);
        SparseVec rep;
        for (int r = 0; r < nrem; ++r)
          if (!s.V_inv(i, r).is_zero()) rep.axpy(s.V_inv(i, r), Zk.rows().at(zpiv[rem[r]]).vec);
        h.reps.push_back(std::move(rep));
      }
      have_h = true;
      return h;
    }
  };

  const Level& level(int k) const {
    if (k < 0) throw DegreeError("negative degree");
    auto it = levels_.find(k);
    if (it == levels_.end()) {
      Level L;
      L.owner = this;
      L.k = k;
      it = levels_.emplace(k, std::move(L)).first;
    }
    return it->second;
  }

  std::shared_ptr<const CochainComplex> C_;
  mutable std::map<int, Level> levels_;
};

inline std::shared_ptr<Cohomology> make_cohomology(AlgebraPtr A, IdealPtr I = nullptr) {
  return std::make_shared<Cohomology>(std::make_shared<AlgebraComplex>(std::move(A), std::move(I)));
}

/// Degreewise table H^lo..H^hi.
struct CohomologyTable {
  CoefficientRing ring = CoefficientRing::rationals();
  int lo = 0, hi = 0;
  std::vector<CohomologyGroup> groups;

  const CohomologyGroup& at(int k) const { return groups.at(k - lo); }
  ModuleEntry entry(int k) const { return at(k).entry(); }
};

inline CohomologyTable cohomology(const Cohomology& H, int hi, int lo = 0) {
  CohomologyTable t{H.ring(), lo, hi, {}};
  for (int k = lo; k <= hi; ++k) t.groups.push_back(H.group(k));
  return t;
}

inline CohomologyTable cohomology(AlgebraPtr A, int hi, IdealPtr I = nullptr) {
  return cohomology(*make_cohomology(std::move(A), std::move(I)), hi);
}

inline CohomologyTable cohomology(const QuotientAlgebra& Q, int hi) { return cohomology(Q.ambient, hi, Q.ideal); }

/// H^k(f) in the generator bases, with the torsion orders on both sides.
struct InducedMap {
  int degree = 0;
  ScalarMatrix matrix;  // rows = target generators, cols = source generators
  std::vector<Scalar> source_orders, target_orders;
  bool injective = false, surjective = false;
  bool iso() const { return injective && surjective; }
};

/// The map on H^k of the cochain map x -> f(x) between two complexes given
/// by `apply` (source F^k coordinates -> target F^k coordinates).
template <class Apply>
InducedMap induced_map(const Cohomology& Hs, const Cohomology& Ht, int k, Apply&& apply) {
  const CohomologyGroup& gs = Hs.group(k);
  const CohomologyGroup& gt = Ht.group(k);
  InducedMap m;
  m.degree = k;
  m.source_orders = gs.orders;
  m.target_orders = gt.orders;
  m.matrix = ScalarMatrix(gt.num_generators(), gs.num_generators());
  for (int j = 0; j < gs.num_generators(); ++j) {
    auto c = Ht.coordinates(k, apply(gs.reps[j]));
    for (int i = 0; i < gt.num_generators(); ++i) m.matrix(i, j) = c[i];
  }
  const CoefficientRing& R = Hs.ring();
  m.injective = presented_injective(m.matrix, m.source_orders, m.target_orders, R);
  m.surjective = presented_surjective(m.matrix, m.target_orders, R);
  return m;
}

inline InducedMap induced_map_on_H(const AlgebraMorphism& f, const Cohomology& Hs, const Cohomology& Ht, int k) {
  return induced_map(Hs, Ht, k, [&](const SparseVec& x) { return f.apply_vec(x, k); });
}

inline std::vector<InducedMap> induced_map_on_H(const AlgebraMorphism& f, int hi) {
  auto Hs = make_cohomology(f.source());
  auto Ht = make_cohomology(f.target(), f.target_ideal());
  std::vector<InducedMap> out;
  for (int k = 0; k <= hi; ++k) out.push_back(induced_map_on_H(f, *Hs, *Ht, k));
  return out;
}

struct QuasiIsoResult {
  bool ok = true;
  std::optional<int> failing_degree;
  explicit operator bool() const { return ok; }
};

inline QuasiIsoResult is_quasi_iso(const AlgebraMorphism& f, const Cohomology& Hs, const Cohomology& Ht, int hi,
                                   int lo = 0) {
  for (int k = lo; k <= hi; ++k)
    if (!induced_map_on_H(f, Hs, Ht, k).iso()) return {false, k};
  return {};
}

inline QuasiIsoResult is_quasi_iso(const AlgebraMorphism& f, int hi) {
  auto Hs = make_cohomology(f.source());
  auto Ht = make_cohomology(f.target(), f.target_ideal());
  return is_quasi_iso(f, *Hs, *Ht, hi);
}

/// How "acyclic ideal" is read.  IdealLevel: H^k(J) = 0 for 1 <= k <= hi
/// (cross-checked against A -> A/J).  AbstractIso: H(A/J) and H(A) have
/// the same presentation degreewise, with no condition on the map.
enum class AcyclicReading { IdealLevel, AbstractIso };

inline bool ideal_cohomology_vanishes(const IdealPtr& J, int hi) {
  Cohomology HJ(std::make_shared<IdealComplex>(J));
  for (int k = 1; k <= hi; ++k)
    if (!HJ.group(k).is_zero()) return false;
  return true;
}

/// A -> A/J is an iso on H^0..H^{hi-1} and injective on H^hi.
inline bool projection_certifies_acyclic(const IdealPtr& J, int hi) {
  AlgebraPtr A = J->ambient();
  auto HA = make_cohomology(A);
  auto HQ = make_cohomology(A, J);
  AlgebraMorphism p = identity_morphism(A).with_target_ideal(J);
  for (int k = 0; k <= hi; ++k) {
    InducedMap m = induced_map_on_H(p, *HA, *HQ, k);
    if (!m.injective || (k < hi && !m.surjective)) return false;
  }
  return true;
}

inline bool is_acyclic_ideal(const IdealPtr& J, int hi, AcyclicReading reading = AcyclicReading::IdealLevel) {
  if (auto w = J->stability_witness())
    throw NotDStable("ideal is not closed under d", J->ambient()->format(J->generators()[w->first]), w->second);
  if (reading == AcyclicReading::AbstractIso) {
    auto HA = make_cohomology(J->ambient());
    auto HQ = make_cohomology(J->ambient(), J);
    for (int k = 0; k <= hi; ++k)
      if (!(HA->entry(k) == HQ->entry(k))) return false;
    return true;
  }
  bool a = ideal_cohomology_vanishes(J, hi);
  bool b = projection_certifies_acyclic(J, hi);
  if (a != b) throw Error("internal: acyclicity tests disagree");
  return a;
}

/// A (x) B as a free algebra on renamed copies (commutative flavor).
inline AlgebraPtr tensor_product(const FreeGradedAlgebra& A, const FreeGradedAlgebra& B) {
  if (A.flavor() != Flavor::Commutative || B.flavor() != Flavor::Commutative)
    throw Error("tensor_product needs commutative algebras");
  auto P = std::make_shared<FreeGradedAlgebra>(Flavor::Commutative, A.ring(), A.name() + "(x)" + B.name());
  const int na = A.num_generators();
  for (int j = 0; j < na; ++j) P->add_generator(copy_name(A.generator(j).name, 1), A.generator(j).degree);
  for (int j = 0; j < B.num_generators(); ++j) P->add_generator(copy_name(B.generator(j).name, 2), B.generator(j).degree);
  auto shift = [&](const Element& e, int off) {
    Element r;
    for (auto& [m, c] : e) {
      Monomial mm;
      for (int x : m) mm.push_back(x + off);
      r.add(mm, c);
    }
    return r;
  };
  for (int j = 0; j < na; ++j) P->set_differential(j, shift(A.generator_differential(j), 0));
  for (int j = 0; j < B.num_generators(); ++j) P->set_differential(na + j, shift(B.generator_differential(j), na));
  return P;
}

/// Invariant factors of a direct sum of cyclic modules R/(c_i).
inline std::vector<Scalar> normalize_torsion(const std::vector<Scalar>& cyclic, const CoefficientRing& R) {
  std::vector<Scalar> nz;
  for (auto& c : cyclic)
    if (!c.is_zero() && !R.is_unit(c)) nz.push_back(c);
  ScalarMatrix D(int(nz.size()), int(nz.size()));
  for (int i = 0; i < int(nz.size()); ++i) D(i, i) = nz[i];
  auto s = smith_normal_form(D, R);
  std::vector<Scalar> out;
  for (int i = 0; i < s.rank; ++i)
    if (!R.is_unit(s.diagonal(i))) out.push_back(s.diagonal(i));
  return out;
}

struct KunnethReport {
  int degree = 0;
  ModuleEntry predicted, direct;
  bool ok() const { return predicted == direct; }
};

/// Both sides of the Kunneth formula in degree k: sum of H^p(A) (x) H^q(B)
/// over p+q = k and Tor_1(H^p(A), H^q(B)) over p+q = k+1, against the direct
/// computation for A (x) B.
inline KunnethReport kunneth_check(const AlgebraPtr& A, const AlgebraPtr& B, int k) {
  const CoefficientRing& R = A->ring();
  auto HA = make_cohomology(A);
  auto HB = make_cohomology(B);
  KunnethReport rep;
  rep.degree = k;
  rep.predicted.degree = k;
  std::vector<Scalar> cyc;
  for (int p = 0; p <= k; ++p) {
    ModuleEntry a = HA->entry(p), b = HB->entry(k - p);
    rep.predicted.free_rank += a.free_rank * b.free_rank;
    for (auto& s : a.torsion)
      for (int i = 0; i < b.free_rank; ++i) cyc.push_back(s);
    for (auto& t : b.torsion)
      for (int i = 0; i < a.free_rank; ++i) cyc.push_back(t);
    for (auto& s : a.torsion)
      for (auto& t : b.torsion) cyc.push_back(R.gcd(s, t));
  }
  for (int p = 0; p <= k + 1; ++p) {
    ModuleEntry a = HA->entry(p), b = HB->entry(k + 1 - p);
    for (auto& s : a.torsion)
      for (auto& t : b.torsion) cyc.push_back(R.gcd(s, t));
  }
  rep.predicted.torsion = normalize_torsion(cyc, R);
  rep.direct = make_cohomology(tensor_product(*A, *B))->entry(k);
  return rep;
}

enum class Certainty { True, False, Uncertified };

inline const char* certainty_name(Certainty c) {
  return c == Certainty::True ? "true" : c == Certainty::False ? "false" : "uncertified";
}

/// H^0 = R, H^1..H^r = 0, H^k = 0 for r*rho < k <= window.  Uncertified when
/// the window stops below r*rho and nothing has failed yet.
inline Certainty is_H_mild(const Cohomology& H, int r, const CoefficientRing& ring, int window) {
  ModuleEntry h0 = H.entry(0);
  if (h0.free_rank != 1 || !h0.torsion.empty()) return Certainty::False;
  for (int k = 1; k <= std::min(r, window); ++k)
    if (!H.entry(k).is_zero()) return Certainty::False;
  PrimeOrInfinity rho = ring.rho();
  if (rho.is_infinite()) return Certainty::True;
  const long top = long(r) * *rho.prime;
  for (long k = top + 1; k <= window; ++k)
    if (!H.entry(int(k)).is_zero()) return Certainty::False;
  return window >= top ? Certainty::True : Certainty::Uncertified;
}

inline Certainty is_H_mild(const AlgebraPtr& A, int r, const CoefficientRing& ring, int window) {
  return is_H_mild(*make_cohomology(A), r, ring, window);
}

/// Finite type (automatic here), H^0 = R, H^1..H^r = 0, H^{r+1} free.
inline bool is_admissible(const Cohomology& H, int r, int window) {
  ModuleEntry h0 = H.entry(0);
  if (h0.free_rank != 1 || !h0.torsion.empty()) return false;
  for (int k = 1; k <= std::min(r, window); ++k)
    if (!H.entry(k).is_zero()) return false;
  if (r + 1 <= window && !H.entry(r + 1).torsion.empty()) return false;
  return true;
}

inline bool is_admissible(const AlgebraPtr& A, int r, int window, IdealPtr I = nullptr) {
  return is_admissible(*make_cohomology(A, std::move(I)), r, window);
}

}  // namespace mild

#endif  // MILD_COHOMOLOGY_HPP
