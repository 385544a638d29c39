#ifndef MILD_MODELS_HPP
#define MILD_MODELS_HPP

// Relative models f = Phi . iota with iota: A -> A (x) Lambda V (or the free
// product with TV) a free extension and Phi a quasi-isomorphism, built degree
// by degree; minimality reports; lifting through surjective quasi-isos.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mild/cohomology.hpp"

namespace mild {

struct AddedGenerator {
  int index = 0;        // position in the extended algebra
  std::string stratum;  // e.g. "V_5^4": built at step 5, generator degree 4
};

struct RelativeModel {
  RelativeModel(AlgebraPtr base_, AlgebraPtr ext, AlgebraMorphism inc, AlgebraMorphism proj)
      : base(std::move(base_)), extended(std::move(ext)), inclusion(std::move(inc)), projection(std::move(proj)) {}

  AlgebraPtr base;
  AlgebraPtr extended;
  std::vector<AddedGenerator> added;
  AlgebraMorphism inclusion;   // A -> extended
  AlgebraMorphism projection;  // extended -> target, a quasi-iso on the window
  int window_lo = 0, window_hi = 0;

  int num_base_generators() const { return base->num_generators(); }
};

namespace detail {

inline ModuleEntry ring_entry() {
  ModuleEntry e;
  e.free_rank = 1;
  return e;
}

// Hypotheses of the construction, on source and target cohomology.
inline void check_model_hypotheses(const AlgebraMorphism& f, const Cohomology& Hs, const Cohomology& Ht, int r,
                                   int window, bool strict) {
  ModuleEntry R1 = ring_entry();
  R1.degree = 0;
  if (Hs.entry(0) != R1) throw HypothesisViolated("H^0 of the source is not R", "(i)", 0);
  if (Ht.entry(0) != R1) throw HypothesisViolated("H^0 of the target is not R", "(i)", 0);
  for (int k = 1; k <= std::min(r, window); ++k) {
    if (!Hs.entry(k).is_zero())
      throw HypothesisViolated("H^" + std::to_string(k) + " of the source is nonzero", "(ii)", k);
    if (!Ht.entry(k).is_zero())
      throw HypothesisViolated("H^" + std::to_string(k) + " of the target is nonzero", "(ii)", k);
  }
  const int k = r + 1;
  if (k > window || !strict) return;
  if (!Ht.entry(k).torsion.empty())
    throw HypothesisViolated("H^" + std::to_string(k) + " of the target has torsion", "(v)", k);
  if (!induced_map_on_H(f, Hs, Ht, k).injective)
    throw HypothesisViolated("H^" + std::to_string(k) + "(" + f.name() + ") is not injective", "(v)", k);
}

inline std::string fresh_name(const FreeGradedAlgebra& A, const std::string& prefix, int& counter) {
  for (;;) {
    std::string n = prefix + std::to_string(++counter);
    if (!A.find_generator(n)) return n;
  }
}

inline std::string stratum_name(char letter, int step, int degree) {
  return std::string(1, letter) + "_" + std::to_string(step) + "^" + std::to_string(degree);
}

}  // namespace detail

/// The relative model of f: A -> B (B possibly read modulo f's target
/// ideal), certified on cohomology degrees [0, window].  The flavor of the
/// extension is the flavor of A.  With strict = false the conditions on
/// H^{r+1} are not enforced; the construction then may adjoin generators of
/// degree r.
inline RelativeModel relative_model(const AlgebraMorphism& f, int window, int r = 1, bool strict = true) {
  const AlgebraPtr& A = f.source();
  const AlgebraPtr& B = f.target();
  if (!(A->ring() == B->ring())) throw RingError("source and target rings differ");
  if (A->flavor() != B->flavor()) throw Error("source and target flavors differ");
  const CoefficientRing& R = A->ring();

  auto ext = std::make_shared<FreeGradedAlgebra>(*A);
  ext->set_name((A->name().empty() ? std::string("A") : A->name()) + "_model");
  AlgebraMorphism psi("Phi", ext, B, f.target_ideal());
  for (int g = 0; g < A->num_generators(); ++g) psi.set_image(g, f.image(g));
  AlgebraMorphism iota("iota", A, ext);
  for (int g = 0; g < A->num_generators(); ++g) iota.set_image(g, ext->gen(g));

  Cohomology Hs(std::make_shared<AlgebraComplex>(ext));
  Cohomology Ht(std::make_shared<AlgebraComplex>(B, f.target_ideal()));
  detail::check_model_hypotheses(f, Hs, Ht, r, window, strict);

  RelativeModel M(A, ext, iota, psi);
  AlgebraMorphism& Phi = M.projection;
  M.window_hi = window;

  std::map<int, InducedMap> maps;
  auto map_at = [&](int j) -> const InducedMap& {
    auto it = maps.find(j);
    if (it == maps.end()) it = maps.emplace(j, induced_map_on_H(Phi, Hs, Ht, j)).first;
    return it->second;
  };
  int counter = 0;
  auto adjoin = [&](const std::vector<std::pair<int, std::pair<Element, Element>>>& gens, const std::string& prefix,
                    const std::string& stratum) {
    int lowest = -1;
    for (auto& [deg, de] : gens) {
      if (deg < 1) throw WindowExhausted("the construction needs a generator of degree " + std::to_string(deg));
      int idx = ext->add_generator(detail::fresh_name(*ext, prefix, counter), deg, de.first);
      Phi.append_image(de.second);
      M.added.push_back({idx, stratum});
      lowest = lowest < 0 ? deg : std::min(lowest, deg);
    }
    if (lowest < 0) return;
    Hs.invalidate_from(lowest);
    for (auto it = maps.lower_bound(lowest - 1); it != maps.end();) it = maps.erase(it);
  };
  // u of degree j-1 with du = z, Phi(u) = b, one per kernel generator of H^j(Phi)
  auto kill = [&](int j, const std::string& prefix, const std::string& stratum) {
    const InducedMap& m = map_at(j);
    const CohomologyGroup& g = Hs.group(j);
    std::vector<std::pair<int, std::pair<Element, Element>>> gens;
    for (auto& kz : presented_kernel(m.matrix, m.source_orders, m.target_orders, R)) {
      SparseVec z;
      for (int i = 0; i < g.num_generators(); ++i)
        if (!kz.coords[i].is_zero()) z.axpy(kz.coords[i], g.reps[i]);
      auto b = Ht.bounding_cochain(j, Phi.apply_vec(z, j));
      if (!b) throw Error("internal: kernel class does not bound in the target");
      gens.push_back({j - 1, {ext->from_vec(z, j), B->from_vec(*b, j - 1)}});
    }
    adjoin(gens, prefix, stratum);
  };
  // cocycle generators of degree j hitting the cokernel generators of H^j(Phi)
  auto hit = [&](int j, const std::string& prefix, const std::string& stratum) {
    const InducedMap& m = map_at(j);
    const CohomologyGroup& g = Ht.group(j);
    std::vector<std::pair<int, std::pair<Element, Element>>> gens;
    for (auto& c : presented_cokernel(m.matrix, m.target_orders, R)) {
      SparseVec b;
      for (int i = 0; i < g.num_generators(); ++i)
        if (!c.coords[i].is_zero()) b.axpy(c.coords[i], g.reps[i]);
      gens.push_back({j, {Element(), B->from_vec(b, j)}});
    }
    adjoin(gens, prefix, stratum);
  };
  // lowest degree <= k where H(Phi) fails; true when injectivity fails
  auto lowest_failure = [&](int k) -> std::optional<std::pair<int, bool>> {
    for (int j = 0; j <= k; ++j) {
      const InducedMap& m = map_at(j);
      if (!m.injective) return std::make_pair(j, true);
      if (!m.surjective) return std::make_pair(j, false);
    }
    return std::nullopt;
  };

  const int max_rounds = 64 * (window + 2);
  int rounds = 0;
  for (int k = r + 1; k <= window; ++k) {
    for (;;) {
      auto fail = lowest_failure(k);
      if (!fail) break;
      if (++rounds > max_rounds)
        throw WindowExhausted("model construction does not stabilize below degree " + std::to_string(k));
      auto [j, injective_fails] = *fail;
      if (injective_fails)
        kill(j, j == k ? "u" : "w", detail::stratum_name('V', k, j - 1));
      else
        hit(j, j == k ? "v" : "e", detail::stratum_name(j == k && k == r + 1 ? 'V' : 'W', k, j));
    }
    if (k + 1 <= window && !map_at(k + 1).surjective) hit(k + 1, "v", detail::stratum_name('V', k, k + 1));
  }
  auto q = is_quasi_iso(Phi, Hs, Ht, window);
  if (!q) throw NotQuasiIso("constructed projection fails in degree " + std::to_string(*q.failing_degree),
                            *q.failing_degree);
  return M;
}

struct MinimalityEntry {
  std::string generator;
  int degree = 0;
  bool decomposable = true;
  Scalar scaling_factor = Scalar(1);  // content of the linear part
};

struct MinimalityReport {
  bool field = true;
  std::vector<MinimalityEntry> entries;

  /// Over a field every differential is decomposable; over Z_S every linear
  /// part is divisible by a non-invertible element.
  bool minimal(const CoefficientRing& R) const {
    for (auto& e : entries)
      if (!e.decomposable && (field || R.is_unit(e.scaling_factor))) return false;
    return true;
  }
};

/// Linear part of d(gen) in the added generators only (terms in the base
/// are allowed in a relative model).
inline MinimalityReport check_minimality(const RelativeModel& m) {
  const FreeGradedAlgebra& E = *m.extended;
  const CoefficientRing& R = E.ring();
  MinimalityReport rep;
  rep.field = R.is_field();
  const int nA = m.num_base_generators();
  for (auto& a : m.added) {
    MinimalityEntry e;
    e.generator = E.generator(a.index).name;
    e.degree = E.generator(a.index).degree;
    Scalar g;
    for (auto& [mono, c] : E.generator_differential(a.index))
      if (mono.size() == 1 && mono[0] >= nA) {
        e.decomposable = false;
        g = R.gcd(g, c);
      }
    if (!e.decomposable) e.scaling_factor = R.canon(g);
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

/// Every added generator's differential only involves the base and
/// generators added before it.
inline bool is_stratified(const RelativeModel& m) {
  for (auto& a : m.added)
    for (auto& [mono, c] : m.extended->generator_differential(a.index))
      for (int x : mono)
        if (x >= a.index) return false;
  return true;
}

namespace detail {

// Order in which generators can be lifted: each one after everything its
// differential mentions.
inline std::vector<int> lifting_order(const FreeGradedAlgebra& M) {
  const int n = M.num_generators();
  std::vector<int> order, state(n, 0);
  std::function<void(int)> visit = [&](int g) {
    if (state[g] == 2) return;
    if (state[g] == 1) throw LiftFailed("differential of " + M.generator(g).name + " is not stratified",
                                        M.generator(g).name);
    state[g] = 1;
    for (auto& [mono, c] : M.generator_differential(g))
      for (int x : mono) visit(x);
    state[g] = 2;
    order.push_back(g);
  };
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return M.generator(a).degree < M.generator(b).degree; });
  for (int g : idx) visit(g);
  return order;
}

}  // namespace detail

/// Cochain-level surjectivity of eta onto its target (modulo the target
/// ideal) in degrees lo..hi; the first failing degree otherwise.
inline std::optional<int> first_non_surjective_degree(const AlgebraMorphism& eta, int hi, int lo = 0) {
  const FreeGradedAlgebra& A = *eta.source();
  const FreeGradedAlgebra& B = *eta.target();
  for (int k = lo; k <= hi; ++k) {
    LatticeEchelon E(B.ring());
    for (auto& m : A.basis(k)) E.insert(B.to_vec(eta.apply_monomial(m), k));
    if (k >= 1 && eta.target_ideal())
      for (auto& row : eta.target_ideal()->component(k).basis()) E.insert(row);
    for (int i = 0; i < B.dim(k); ++i)
      if (!E.contains(SparseVec::unit(i))) return k;
  }
  return std::nullopt;
}

/// phi: source(psi) -> source(eta) with eta . phi = psi on generators
/// (modulo the ideal of the common target) and phi a chain map.  The target
/// of phi may be read modulo `source_ideal`.
inline AlgebraMorphism lift(const AlgebraMorphism& psi, const AlgebraMorphism& eta, int window,
                            IdealPtr source_ideal = nullptr) {
  const AlgebraPtr& M = psi.source();
  const AlgebraPtr& A = eta.source();
  const AlgebraPtr& B = eta.target();
  if (psi.target() != B) throw Error("lift: psi and eta have different targets");
  if (auto k = first_non_surjective_degree(eta, window + 1))
    throw NotSurjective(eta.name() + " is not surjective on cochains in degree " + std::to_string(*k), *k);
  {
    Cohomology Hs(std::make_shared<AlgebraComplex>(A, source_ideal));
    Cohomology Ht(std::make_shared<AlgebraComplex>(B, eta.target_ideal()));
    auto q = is_quasi_iso(eta, Hs, Ht, window);
    if (!q) throw NotQuasiIso(eta.name() + " is not a quasi-isomorphism in degree " + std::to_string(*q.failing_degree),
                              *q.failing_degree);
  }
  const IdealPtr& NB = eta.target_ideal();
  const CoefficientRing& R = A->ring();

  // per degree n: columns (eta(a_j), d a_j), then the ideals
  struct System {
    int dimA = 0, dimB = 0;
    LatticeEchelon E;
  };
  std::map<int, System> systems;
  auto system = [&](int n) -> System& {
    auto it = systems.find(n);
    if (it != systems.end()) return it->second;
    System s{A->dim(n), B->dim(n), LatticeEchelon(R, true)};
    for (int j = 0; j < s.dimA; ++j) {
      const Monomial& m = A->basis(n)[j];
      SparseVec top = B->to_vec(eta.apply_monomial(m), n);
      for (auto& [i, c] : A->to_vec(A->d_monomial(m), n + 1)) top.axpy(c, SparseVec::unit(s.dimB + i));
      s.E.insert(std::move(top));
    }
    if (NB && n >= 1)
      for (auto& row : NB->component(n).basis()) s.E.insert(row);
    if (source_ideal)
      for (auto& row : source_ideal->component(n + 1).basis()) {
        SparseVec v;
        for (auto& [i, c] : row) v.axpy(c, SparseVec::unit(s.dimB + i));
        s.E.insert(std::move(v));
      }
    return systems.emplace(n, std::move(s)).first->second;
  };

  AlgebraMorphism phi("lift", M, A, source_ideal);
  for (int g : detail::lifting_order(*M)) {
    const int n = M->generator(g).degree;
    System& s = system(n);
    SparseVec rhs = B->to_vec(psi.image(g), n);
    Element dv = phi.apply(M->generator_differential(g));
    for (auto& [i, c] : A->to_vec(dv, n + 1)) rhs.axpy(c, SparseVec::unit(s.dimB + i));
    auto sol = s.E.solve(rhs);
    if (!sol) throw LiftFailed("no lift for generator " + M->generator(g).name, M->generator(g).name);
    sol->truncate(s.dimA);
    phi.set_image(g, A->from_vec(*sol, n));
  }
  return phi;
}

/// eta . phi == psi on every generator, modulo the ideal of the target.
inline std::optional<std::string> lift_defect(const AlgebraMorphism& phi, const AlgebraMorphism& eta,
                                              const AlgebraMorphism& psi) {
  const FreeGradedAlgebra& M = *psi.source();
  for (int g = 0; g < M.num_generators(); ++g) {
    Element diff = eta.apply(phi.image(g)) - psi.image(g);
    if (!eta.in_target_ideal(diff)) return M.generator(g).name;
  }
  return std::nullopt;
}

}  // namespace mild

#endif  // MILD_MODELS_HPP
