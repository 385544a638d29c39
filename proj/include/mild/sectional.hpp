#ifndef MILD_SECTIONAL_HPP
#define MILD_SECTIONAL_HPP

// Sectional-category style invariants of a surjective morphism phi: A -> B.
//
//   p-side:   p_m : A^{(x)m+1} -> A^{(x)m+1} / I^{(x)m+1},  I = ker phi,
//             modelled, then pushed out along the multiplication to get
//             j_m : A -> A (x) Lambda W.
//   Gamma:    Gamma_m : A -> A / I^{m+1}, modelled by iota_m.
//
// Hsecat / Hsc ask for injectivity in cohomology, msecat / msc for a
// retraction as A-modules, found by one linear solve.  Everything is
// certified on a window of degrees and reported with its status.

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mild/models.hpp"

namespace mild {

// ---------------------------------------------------------------- rings

/// Smallest enlargement R' of R with rho(R') >= m * rho(R).
inline CoefficientRing ring_enlargement(const CoefficientRing& R, int m) {
  if (R.is_field() || m <= 1) return R;
  const long target = long(m) * *R.rho().prime;
  std::vector<long> primes = R.inverted_primes();
  CoefficientRing out = R;
  while (out.rho().prime && *out.rho().prime < target) {
    primes.push_back(*out.rho().prime);
    out = CoefficientRing::localized(primes);
  }
  return out;
}

/// The same generators and differentials over a larger ring.
inline AlgebraPtr base_change(const FreeGradedAlgebra& A, const CoefficientRing& R) {
  auto B = std::make_shared<FreeGradedAlgebra>(A.flavor(), R, A.name());
  for (auto& g : A.generators()) B->add_generator(g.name, g.degree);
  for (int i = 0; i < A.num_generators(); ++i) B->set_differential(i, A.generator_differential(i));
  B->set_cap(A.cap());
  return B;
}

// ---------------------------------------------------------------- kernel

/// First degree <= top where phi is not a chain map into its target, if any.
inline void check_surjective(const AlgebraMorphism& phi, int top) {
  if (auto k = first_non_surjective_degree(phi, top))
    throw NotSurjective(phi.name() + " is not surjective in degree " + std::to_string(*k), *k);
}

/// ker phi as an ideal, exact in degrees <= top: the seeds, augmented
/// degreewise by whatever part of the cochain kernel they miss.
inline IdealPtr kernel_ideal(const AlgebraMorphism& phi, int top, const std::vector<Element>& seeds = {}) {
  const FreeGradedAlgebra& S = *phi.source();
  const FreeGradedAlgebra& T = *phi.target();
  auto I = std::make_shared<HomogeneousIdeal>(phi.source());
  for (auto& s : seeds) {
    if (!phi.in_target_ideal(phi.apply(s))) throw Error("seed " + S.format(s) + " is not in the kernel");
    I->add_generator(s);
  }
  for (int k = 1; k <= top; ++k) {
    LatticeEchelon E(S.ring(), true);
    const int n = S.dim(k);
    for (int j = 0; j < n; ++j) E.insert(T.to_vec(phi.apply_monomial(S.basis(k)[j]), k));
    if (phi.target_ideal())
      for (auto& row : phi.target_ideal()->component(k).basis()) E.insert(row);
    LatticeEchelon K(S.ring());
    for (auto rel : E.relations()) {
      rel.truncate(n);
      K.insert(std::move(rel));
    }
    std::vector<Element> missing;
    const LatticeEchelon& have = I->component(k);
    for (auto& [p, row] : K.rows())
      if (!have.contains(row.vec)) missing.push_back(S.from_vec(row.vec, k));
    for (auto& m : missing) I->add_generator(std::move(m));
  }
  return I;
}

/// gen<i> - gen<n> for every generator and i < n: these generate ker mu_n.
inline std::vector<Element> mu_kernel_seeds(const FreeGradedAlgebra& power, int n, int g) {
  std::vector<Element> out;
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j < g; ++j) out.push_back(power.gen(i * g + j) - power.gen((n - 1) * g + j));
  return out;
}

// ---------------------------------------------------------------- bounds

enum class BoundStatus { Exact, Saturated, Unknown };

inline const char* status_name(BoundStatus s) {
  switch (s) {
    case BoundStatus::Exact:
      return "exact";
    case BoundStatus::Saturated:
      return "saturated";
    default:
      return "unknown";
  }
}

/// A computed invariant.  Exact: the value.  Saturated: at least the value,
/// the window ran out.  Unknown: nothing certified; `value` is then a lower
/// bound (e.g. m_max + 1 for level searches).
struct Bound {
  BoundStatus status = BoundStatus::Unknown;
  int value = 0;
  std::string witness;
  std::string note;

  bool exact() const { return status == BoundStatus::Exact; }
  static Bound make_exact(int v, std::string w = "") { return {BoundStatus::Exact, v, std::move(w), ""}; }
  static Bound saturated(int v, std::string w = "") { return {BoundStatus::Saturated, v, std::move(w), ""}; }
  static Bound unknown(int lower, std::string note) { return {BoundStatus::Unknown, lower, "", std::move(note)}; }
};

// ---------------------------------------------------------------- nil ker

/// Longest nonzero product of classes in ker H(phi) within the window.
/// Products of two known classes that land above the window make the answer
/// saturated, unless the source is known to have no cohomology there.
inline Bound nil_ker_H(const AlgebraMorphism& phi, int window, bool vanishes_above_window = false) {
  const FreeGradedAlgebra& S = *phi.source();
  const CoefficientRing& R = S.ring();
  Cohomology Hs(std::make_shared<AlgebraComplex>(phi.source()));
  Cohomology Ht(std::make_shared<AlgebraComplex>(phi.target(), phi.target_ideal()));

  struct Item {
    Element rep;
    int degree;
    std::string word;
  };
  std::vector<Item> gens;
  for (int k = 1; k <= window; ++k) {
    auto m = induced_map_on_H(phi, Hs, Ht, k);
    const CohomologyGroup& g = Hs.group(k);
    int count = 0;
    for (auto& z : presented_kernel(m.matrix, m.source_orders, m.target_orders, R)) {
      SparseVec v;
      for (int i = 0; i < g.num_generators(); ++i)
        if (!z.coords[i].is_zero()) v.axpy(z.coords[i], g.reps[i]);
      gens.push_back({S.from_vec(v, k), k, "k" + std::to_string(k) + "_" + std::to_string(++count)});
    }
  }
  if (gens.empty()) return Bound::make_exact(0);

  // span of a level in H^k, with the torsion relations preloaded
  struct Span {
    std::optional<LatticeEchelon> E;
    std::vector<Item> kept;
  };
  auto add = [&](std::map<int, Span>& level, Item it) {
    Span& s = level[it.degree];
    const CohomologyGroup& g = Hs.group(it.degree);
    if (!s.E) {
      s.E.emplace(R);
      for (int i = 0; i < g.num_generators(); ++i)
        if (!g.orders[i].is_zero()) s.E->insert(SparseVec::unit(i, g.orders[i]));
    }
    auto c = Hs.coordinates(it.degree, S.to_vec(it.rep, it.degree));
    SparseVec v = SparseVec::from_dense(c);
    if (s.E->contains(v)) return;
    s.E->insert(std::move(v));
    s.kept.push_back(std::move(it));
  };

  std::map<int, Span> level;
  for (auto& g : gens) add(level, g);
  int K = 0;
  std::string witness;
  bool beyond = false;
  for (;;) {
    bool any = false;
    for (auto& [d, s] : level)
      if (!any && !s.kept.empty()) {
        any = true;
        witness = s.kept.front().word;
      }
    if (!any) break;
    ++K;
    std::map<int, Span> next;
    beyond = false;
    for (auto& [d, s] : level)
      for (auto& x : s.kept)
        for (auto& y : gens) {
          if (x.degree + y.degree > window) {
            beyond = true;
            continue;
          }
          Element p = S.multiply(x.rep, y.rep);
          if (p.is_zero()) continue;
          add(next, {std::move(p), x.degree + y.degree, x.word + "*" + y.word});
        }
    level = std::move(next);
  }
  if (beyond && !vanishes_above_window) return Bound::saturated(K, witness);
  return Bound::make_exact(K, witness);
}

/// Largest k with I^k nonzero in degrees <= window.  Exact when every
/// (k+1)-fold product of generators vanishes outright.
inline Bound nil_ker(const HomogeneousIdeal& I, int window) {
  if (I.is_zero_ideal()) return Bound::make_exact(0);
  const FreeGradedAlgebra& A = *I.ambient();
  int K = 0;
  for (int k = 1;; ++k) {
    auto P = ideal_power(I, k, window);
    bool nonzero = false;
    for (int d : P->generator_degrees()) nonzero |= d <= window;
    if (!nonzero) break;
    K = k;
  }
  if (A.flavor() == Flavor::Tensor) return Bound::saturated(K);
  // products of K+1 generators, no degree filter
  auto P = ideal_power(I, K + 1, 0);
  if (P->is_zero_ideal()) return Bound::make_exact(K);
  return Bound::saturated(K);
}

/// Enlarge P to an ideal with no cohomology in degrees 1..window by
/// adjoining, lowest degree first, cochains b with db a nonzero class of the
/// current ideal.  Fails when such a class does not bound in the ambient
/// algebra.
inline std::optional<IdealPtr> acyclic_completion(const HomogeneousIdeal& P, int window) {
  const AlgebraPtr& A = P.ambient();
  auto J = std::make_shared<HomogeneousIdeal>(A, P.generators());
  Cohomology HA(std::make_shared<AlgebraComplex>(A));
  for (int round = 0; round < 16 * (window + 1); ++round) {
    Cohomology HJ(std::make_shared<IdealComplex>(J));
    int k = 1;
    while (k <= window && HJ.group(k).is_zero()) ++k;
    if (k > window) return J;
    std::vector<Element> fresh;
    const auto& rows = J->component(k).rows();
    for (auto& rep : HJ.group(k).reps) {
      SparseVec z;
      for (auto& [pos, c] : rep) z.axpy(c, std::next(rows.begin(), pos)->second.vec);
      auto b = HA.bounding_cochain(k, z);
      if (!b) return std::nullopt;
      fresh.push_back(A->from_vec(*b, k - 1));
    }
    for (auto& b : fresh) J->add_generator(std::move(b));
  }
  return std::nullopt;
}

struct HnilResult {
  Bound bound;
  std::string certificate;  // which ideal contains I^{k+1}
};

/// Smallest k with I^{k+1} = 0 or I^{k+1} inside an acyclic ideal, searched
/// over the auto candidate I^{k+1} itself and the extra candidates.  An
/// upper-bound search: "unknown" when nothing certifies.
inline HnilResult Hnil_ub(const HomogeneousIdeal& I, int window, const std::vector<IdealPtr>& candidates = {}) {
  const FreeGradedAlgebra& A = *I.ambient();
  if (I.is_zero_ideal()) return {Bound::make_exact(0), "zero ideal"};
  int min_deg = *std::min_element(I.generator_degrees().begin(), I.generator_degrees().end());
  for (int k = 0; (k + 1) * min_deg <= window + 1; ++k) {
    auto P = ideal_power(I, k + 1, window + 1);
    if (P->is_zero_ideal() && (k + 1) * min_deg <= window) {
      if (A.flavor() == Flavor::Commutative && ideal_power(I, k + 1, 0)->is_zero_ideal())
        return {Bound::make_exact(k), "I^" + std::to_string(k + 1) + " = 0"};
    }
    if (P->stability_witness()) continue;
    if (is_acyclic_ideal(P, window)) return {Bound::make_exact(k), "I^" + std::to_string(k + 1) + " is acyclic"};
    if (auto J = acyclic_completion(*P, window); J && is_acyclic_ideal(*J, window))
      return {Bound::make_exact(k), "I^" + std::to_string(k + 1) + " lies in an acyclic completion with " +
                                        std::to_string((*J)->generators().size()) + " generators"};
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const IdealPtr& J = candidates[c];
      if (J->ambient() != I.ambient()) continue;
      bool inside = true;
      for (auto& g : P->generators()) inside = inside && J->contains(g);
      if (inside && !J->stability_witness() && is_acyclic_ideal(J, window))
        return {Bound::make_exact(k), "I^" + std::to_string(k + 1) + " lies in candidate " + std::to_string(c + 1)};
    }
  }
  return {Bound::unknown(0, "no acyclic ideal found in the window"), ""};
}

// ---------------------------------------------------------------- retractions

/// Values r(omega) of an A-module retraction E -> A of the inclusion, on the
/// module basis monomials omega (first letter outside A) of degree <= window.
struct ModuleRetraction {
  std::map<Monomial, Element> values;
};

namespace detail {

// m = prefix * suffix, prefix in the base letters, suffix starting with the
// first letter >= nA (empty when there is none); the sign is +1 in both
// flavors.
inline std::pair<Monomial, Monomial> split_base(const Monomial& m, int nA) {
  std::size_t i = 0;
  while (i < m.size() && m[i] < nA) ++i;
  return {Monomial(m.begin(), m.begin() + i), Monomial(m.begin() + i, m.end())};
}

inline std::vector<Monomial> module_basis(const FreeGradedAlgebra& E, int nA, int k) {
  std::vector<Monomial> out;
  for (auto& m : E.basis(k))
    if (!m.empty() && m[0] >= nA) out.push_back(m);
  return out;
}

// r applied to an element of E, given r on the module basis.
inline Element apply_retraction(const FreeGradedAlgebra& E, const FreeGradedAlgebra& A, int nA,
                                const std::map<Monomial, Element>& r, const Element& x) {
  Element out;
  for (auto& [m, c] : x) {
    auto [pre, suf] = split_base(m, nA);
    if (suf.empty()) {
      out.add(pre, c);
      continue;
    }
    auto it = r.find(suf);
    if (it == r.end()) throw Error("retraction undefined on " + E.format_monomial(suf));
    out.axpy(c, A.multiply(Element::monomial(pre), it->second));
  }
  return out;
}

}  // namespace detail

/// Solve for an A-module chain retraction of A -> E (E extends A by
/// generators appended after A's).  r(1) = 1 and r(d omega) = d r(omega)
/// for |omega| < window.
inline std::optional<ModuleRetraction> module_retraction(const FreeGradedAlgebra& E, const FreeGradedAlgebra& A,
                                                         int window) {
  const int nA = A.num_generators();
  const CoefficientRing& R = A.ring();
  std::vector<Monomial> omegas;
  std::unordered_map<Monomial, int, MonomialHash> var_off;
  int nvars = 0;
  for (int k = 1; k <= window; ++k)
    for (auto& w : detail::module_basis(E, nA, k)) {
      var_off[w] = nvars;
      nvars += A.dim(k);
      omegas.push_back(w);
    }
  if (omegas.empty()) return ModuleRetraction{};

  std::vector<std::vector<SparseVec::Entry>> cols(nvars);
  std::vector<SparseVec::Entry> rhs;
  int eq = 0;
  for (auto& w : omegas) {
    const int k = E.degree(w);
    if (k >= window) continue;
    const int off = var_off.at(w);
    for (int j = 0; j < A.dim(k); ++j)
      for (auto& [m, c] : A.d_monomial(A.basis(k)[j])) cols[off + j].emplace_back(eq + A.index_of(m, k + 1), -c);
    for (auto& [m, c] : E.d_monomial(w)) {
      auto [pre, suf] = detail::split_base(m, nA);
      if (suf.empty()) {
        rhs.emplace_back(eq + A.index_of(pre, k + 1), -c);
        continue;
      }
      const int ks = E.degree(suf);
      const int soff = var_off.at(suf);
      for (int j = 0; j < A.dim(ks); ++j) {
        Element p = A.multiply(Element::monomial(pre), Element::monomial(A.basis(ks)[j]));
        for (auto& [mm, cc] : p) cols[soff + j].emplace_back(eq + A.index_of(mm, k + 1), c * cc);
      }
    }
    eq += A.dim(k + 1);
  }
  LatticeEchelon L(R, true);
  for (auto& c : cols) L.insert(SparseVec::from_entries(std::move(c)));
  auto sol = L.solve(SparseVec::from_entries(std::move(rhs)));
  if (!sol) return std::nullopt;
  ModuleRetraction out;
  std::vector<Scalar> x(nvars);
  for (auto& [i, c] : *sol) x[i] = c;
  for (auto& w : omegas) {
    const int k = E.degree(w);
    Element v;
    for (int j = 0; j < A.dim(k); ++j)
      if (!x[var_off.at(w) + j].is_zero()) v.add(A.basis(k)[j], x[var_off.at(w) + j]);
    out.values.emplace(w, std::move(v));
  }
  return out;
}

/// Independent re-check of a module retraction: the chain condition on every
/// basis monomial below the window.
inline std::optional<std::string> verify_module_retraction(const FreeGradedAlgebra& E, const FreeGradedAlgebra& A,
                                                           const ModuleRetraction& r, int window) {
  const int nA = A.num_generators();
  for (auto& [w, v] : r.values) {
    if (E.degree(w) >= window) continue;
    Element lhs = detail::apply_retraction(E, A, nA, r.values, E.d_monomial(w));
    if (!(lhs == A.d(v))) return "r(d " + E.format_monomial(w) + ") != d r(" + E.format_monomial(w) + ")";
  }
  return std::nullopt;
}

struct RetractionCheck {
  bool ok = true;
  std::string witness;
};

/// A multiplicative candidate r: E -> A for the inclusion j: A -> E.
/// Checks r . j = id, the chain condition on generators, and that r is
/// multiplicative on generator pairs.
inline RetractionCheck verify_multiplicative_retraction(const AlgebraMorphism& candidate,
                                                        const AlgebraMorphism& inclusion) {
  const FreeGradedAlgebra& E = *candidate.source();
  const FreeGradedAlgebra& A = *candidate.target();
  if (inclusion.source() != candidate.target() || inclusion.target() != candidate.source())
    return {false, "candidate and inclusion do not compose"};
  for (int g = 0; g < A.num_generators(); ++g) {
    Element back = candidate.apply(inclusion.image(g));
    if (!candidate.in_target_ideal(back - A.gen(g)))
      return {false, "r(j(" + A.generator(g).name + ")) = " + A.format(back)};
  }
  for (int g = 0; g < E.num_generators(); ++g) {
    for (auto& [m, c] : candidate.image(g))
      if (A.degree(m) != E.generator(g).degree)
        return {false, "r(" + E.generator(g).name + ") has the wrong degree"};
    Element lhs = A.d(candidate.image(g));
    Element rhs = candidate.apply(E.generator_differential(g));
    if (!candidate.in_target_ideal(lhs - rhs))
      return {false, "d r(" + E.generator(g).name + ") = " + A.format(lhs) + " but r(d " + E.generator(g).name +
                         ") = " + A.format(rhs)};
  }
  for (int a = 0; a < E.num_generators(); ++a)
    for (int b = 0; b < E.num_generators(); ++b) {
      Element prod = E.multiply(E.gen(a), E.gen(b));
      Element lhs = candidate.apply(prod);
      Element rhs = A.multiply(candidate.image(a), candidate.image(b));
      if (!candidate.in_target_ideal(lhs - rhs))
        return {false, "r(" + E.generator(a).name + "*" + E.generator(b).name + ") != r(" + E.generator(a).name +
                           ")*r(" + E.generator(b).name + ")"};
    }
  return {};
}

/// The multiplicative map E -> A agreeing with a module retraction on
/// generators: the natural candidate for a strict retraction.
inline AlgebraMorphism candidate_from_module(const AlgebraPtr& E, const AlgebraPtr& A, const ModuleRetraction& r) {
  AlgebraMorphism c("r", E, A);
  const int nA = A->num_generators();
  for (int g = 0; g < E->num_generators(); ++g) {
    if (g < nA) {
      c.set_image(g, A->gen(g));
      continue;
    }
    auto it = r.values.find(Monomial{g});
    c.set_image(g, it == r.values.end() ? Element() : it->second);
  }
  return c;
}

// ---------------------------------------------------------------- instances

inline bool injective_on_H(const AlgebraMorphism& f, int window, std::optional<int>* failing = nullptr) {
  Cohomology Hs(std::make_shared<AlgebraComplex>(f.source()));
  Cohomology Ht(std::make_shared<AlgebraComplex>(f.target(), f.target_ideal()));
  for (int k = 0; k <= window; ++k)
    if (!induced_map_on_H(f, Hs, Ht, k).injective) {
      if (failing) *failing = k;
      return false;
    }
  return true;
}

/// Gamma_m : A -> A / I^{m+1} with its model iota_m.
struct GammaInstance {
  int m = 0;
  IdealPtr power;
  AlgebraMorphism gamma;
  std::optional<RelativeModel> model;
};

inline GammaInstance build_gamma(const AlgebraPtr& A, const HomogeneousIdeal& I, int m, int window, int r,
                                 bool with_model = true) {
  IdealPtr P = ideal_power(I, m + 1, window + 1);
  AlgebraMorphism g("Gamma_" + std::to_string(m), A, A, P);
  for (int i = 0; i < A->num_generators(); ++i) g.set_image(i, A->gen(i));
  GammaInstance out{m, P, g, std::nullopt};
  if (with_model) out.model.emplace(relative_model(g, window, r, false));
  return out;
}

/// p_m : A^{(x)m+1} -> A^{(x)m+1}/I^{(x)m+1}, its model, and the pushout
/// j_m : A -> A (x) Lambda W with d(w) = mu_bar(dw).
struct PInstance {
  int m = 0;
  AlgebraPtr power;
  IdealPtr tensor_ideal;
  std::optional<AlgebraMorphism> p;
  std::optional<RelativeModel> model;
  AlgebraPtr pushout;
  std::optional<AlgebraMorphism> mu_bar;
  std::optional<AlgebraMorphism> j;
};

inline PInstance build_p(const AlgebraPtr& A, const HomogeneousIdeal& I, int m, int window, int r) {
  const int nA = A->num_generators();
  const int copies = m + 1;
  PInstance out;
  out.m = m;
  out.power = tensor_power(*A, copies);
  const FreeGradedAlgebra& P = *out.power;
  auto shift = [&](const Element& e, int copy) {
    Element s;
    for (auto& [mono, c] : e) {
      Monomial mm;
      for (int x : mono) mm.push_back(copy * nA + x);
      s.add(mm, c);
    }
    return s;
  };
  out.tensor_ideal = std::make_shared<HomogeneousIdeal>(out.power);
  const auto& gens = I.generators();
  const auto& degs = I.generator_degrees();
  std::vector<int> pick(copies, 0);
  if (!gens.empty())
    for (;;) {
      int deg = 0;
      for (int c = 0; c < copies; ++c) deg += degs[pick[c]];
      if (deg <= window + 1) {
        Element prod = Element::scalar(Scalar(1));
        for (int c = 0; c < copies; ++c) prod = P.multiply(prod, shift(gens[pick[c]], c));
        out.tensor_ideal->add_generator(std::move(prod));
      }
      int c = copies - 1;
      while (c >= 0 && ++pick[c] == int(gens.size())) pick[c--] = 0;
      if (c < 0) break;
    }
  if (P.flavor() == Flavor::Tensor) {
    // In a free product the ideal spanned by the products is not d-stable
    // (differentials put letters between the factors); take its d-closure
    // through degree window+1.
    for (std::size_t i = 0; i < out.tensor_ideal->generators().size(); ++i) {
      if (out.tensor_ideal->generator_degrees()[i] > window) continue;
      Element dg = P.d(out.tensor_ideal->generators()[i]);
      if (!out.tensor_ideal->contains(dg)) out.tensor_ideal->add_generator(std::move(dg));
    }
  }
  AlgebraMorphism p("p_" + std::to_string(m), out.power, out.power, out.tensor_ideal);
  for (int i = 0; i < P.num_generators(); ++i) p.set_image(i, P.gen(i));
  out.p.emplace(p);
  out.model.emplace(relative_model(p, window, r, false));

  const RelativeModel& M = *out.model;
  auto E = std::make_shared<FreeGradedAlgebra>(*A);
  E->set_name((A->name().empty() ? std::string("A") : A->name()) + "_j" + std::to_string(m));
  AlgebraMorphism mu_bar("mu_bar", M.extended, E);
  for (int i = 0; i < P.num_generators(); ++i) mu_bar.set_image(i, E->gen(i % nA));
  for (auto& a : M.added) {
    const Generator& g = M.extended->generator(a.index);
    std::string name = g.name;
    while (E->find_generator(name)) name += "'";
    Element d = mu_bar.apply(M.extended->generator_differential(a.index));
    int idx = E->add_generator(name, g.degree, std::move(d));
    mu_bar.set_image(a.index, E->gen(idx));
  }
  out.pushout = E;
  out.mu_bar.emplace(mu_bar);
  AlgebraMorphism j("j_" + std::to_string(m), A, E);
  for (int i = 0; i < nA; ++i) j.set_image(i, E->gen(i));
  out.j.emplace(j);
  return out;
}

/// j_m . mu_{m+1} = mu_bar . i_m on the generators of A^{(x)m+1}.
inline bool pushout_commutes(const PInstance& p, const AlgebraPtr& A) {
  const int nA = A->num_generators();
  const RelativeModel& M = *p.model;
  for (int i = 0; i < p.power->num_generators(); ++i) {
    Element left = p.j->apply(A->gen(i % nA));
    Element right = p.mu_bar->apply(M.inclusion.image(i));
    if (!(left == right)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- report

struct SectionalConfig {
  int m_max = 4;
  int window = 10;
  int r = 1;
  int threads = 1;
  bool vanishes_above_window = false;  // cohomology of the source is known to stop at the window
  std::vector<IdealPtr> candidates;
};

struct LevelCertificate {
  int m = 0;
  std::string side;  // "p" or "gamma"
  std::vector<std::pair<std::string, std::string>> values;  // generator -> r(generator)
  bool multiplicative = false;
  std::string multiplicative_witness;
};

struct InvariantReport {
  std::string morphism;
  std::string ring;
  std::string flavor;
  int window = 0;
  int m_max = 0;
  Bound nil_ker_H, nil_ker, Hnil_ub;
  std::string Hnil_certificate;
  Bound Hsecat, msecat, Hsc, msc;
  std::optional<int> secat_ub, sc_ub;  // from verified multiplicative retractions
  std::vector<LevelCertificate> certificates;
  std::vector<std::string> notes;
};

namespace detail {

struct SideResult {
  Bound H, mod;
  std::optional<int> mult_ub;
  std::vector<LevelCertificate> certs;
};

inline LevelCertificate make_certificate(int m, const char* side, const FreeGradedAlgebra& E,
                                         const AlgebraPtr& A, const ModuleRetraction& r,
                                         const RetractionCheck& mult) {
  LevelCertificate c;
  c.m = m;
  c.side = side;
  for (int g = A->num_generators(); g < E.num_generators(); ++g) {
    auto it = r.values.find(Monomial{g});
    c.values.emplace_back(E.generator(g).name, it == r.values.end() ? "0" : A->format(it->second));
  }
  c.multiplicative = mult.ok;
  c.multiplicative_witness = mult.witness;
  return c;
}

inline SideResult run_p_side(const AlgebraPtr& A, const HomogeneousIdeal& I, const SectionalConfig& cfg) {
  SideResult res;
  res.H = Bound::unknown(cfg.m_max + 1, "> m_max");
  res.mod = Bound::unknown(cfg.m_max + 1, "> m_max");
  for (int m = 0; m <= cfg.m_max && !(res.H.exact() && res.mod.exact()); ++m) {
    PInstance p = build_p(A, I, m, cfg.window, cfg.r);
    if (!res.H.exact() && injective_on_H(*p.j, cfg.window)) res.H = Bound::make_exact(m);
    if (!res.mod.exact()) {
      auto r = module_retraction(*p.pushout, *A, cfg.window);
      if (r) {
        if (auto bad = verify_module_retraction(*p.pushout, *A, *r, cfg.window))
          throw Error("internal: module retraction fails its re-check: " + *bad);
        res.mod = Bound::make_exact(m);
        auto cand = candidate_from_module(p.pushout, A, *r);
        auto chk = verify_multiplicative_retraction(cand, *p.j);
        if (chk.ok && !res.mult_ub) res.mult_ub = m;
        res.certs.push_back(make_certificate(m, "p", *p.pushout, A, *r, chk));
      }
    }
  }
  return res;
}

inline SideResult run_gamma_side(const AlgebraPtr& A, const HomogeneousIdeal& I, const SectionalConfig& cfg) {
  SideResult res;
  res.H = Bound::unknown(cfg.m_max + 1, "> m_max");
  res.mod = Bound::unknown(cfg.m_max + 1, "> m_max");
  for (int m = 0; m <= cfg.m_max && !(res.H.exact() && res.mod.exact()); ++m) {
    GammaInstance g = build_gamma(A, I, m, cfg.window, cfg.r, !res.mod.exact());
    // H(iota_m) is injective iff H(Gamma_m) is: the model projection is a quasi-iso
    if (!res.H.exact() && injective_on_H(g.gamma, cfg.window)) res.H = Bound::make_exact(m);
    if (!res.mod.exact()) {
      const RelativeModel& M = *g.model;
      auto r = module_retraction(*M.extended, *A, cfg.window);
      if (r) {
        if (auto bad = verify_module_retraction(*M.extended, *A, *r, cfg.window))
          throw Error("internal: module retraction fails its re-check: " + *bad);
        res.mod = Bound::make_exact(m);
        auto cand = candidate_from_module(M.extended, A, *r);
        auto chk = verify_multiplicative_retraction(cand, M.inclusion);
        if (chk.ok && !res.mult_ub) res.mult_ub = m;
        res.certs.push_back(make_certificate(m, "gamma", *M.extended, A, *r, chk));
      }
    }
  }
  return res;
}

// Independent copies of A and I, so that two sides can run on separate
// threads without sharing caches.
inline std::pair<AlgebraPtr, IdealPtr> deep_copy(const AlgebraPtr& A, const HomogeneousIdeal& I) {
  auto B = std::make_shared<FreeGradedAlgebra>(*A);
  return {B, std::make_shared<HomogeneousIdeal>(B, I.generators())};
}

}  // namespace detail

/// The whole battery for a surjective phi with kernel ideal I (exact up to
/// window + 1).
inline InvariantReport sectional_invariants(const AlgebraMorphism& phi, const IdealPtr& I,
                                            const SectionalConfig& cfg) {
  const AlgebraPtr& A = phi.source();
  InvariantReport rep;
  rep.morphism = phi.name();
  rep.ring = A->ring().str();
  rep.flavor = flavor_name(A->flavor());
  rep.window = cfg.window;
  rep.m_max = cfg.m_max;
  check_surjective(phi, cfg.window + 1);

  rep.nil_ker_H = nil_ker_H(phi, cfg.window, cfg.vanishes_above_window);
  rep.nil_ker = nil_ker(*I, cfg.window);
  auto hn = Hnil_ub(*I, cfg.window, cfg.candidates);
  rep.Hnil_ub = hn.bound;
  rep.Hnil_certificate = hn.certificate;

  detail::SideResult ps, gs;
  if (cfg.threads > 1) {
    auto [A2, I2] = detail::deep_copy(A, *I);
    auto fut = std::async(std::launch::async, [&, A2 = A2, I2 = I2] { return detail::run_gamma_side(A2, *I2, cfg); });
    ps = detail::run_p_side(A, *I, cfg);
    gs = fut.get();
  } else {
    ps = detail::run_p_side(A, *I, cfg);
    gs = detail::run_gamma_side(A, *I, cfg);
  }
  rep.Hsecat = ps.H;
  rep.msecat = ps.mod;
  rep.secat_ub = ps.mult_ub;
  rep.Hsc = gs.H;
  rep.msc = gs.mod;
  rep.sc_ub = gs.mult_ub;
  rep.certificates = ps.certs;
  rep.certificates.insert(rep.certificates.end(), gs.certs.begin(), gs.certs.end());
  return rep;
}

/// Violations of the order relations among exact members; empty when all
/// hold.
inline std::vector<std::string> chain_violations(const InvariantReport& r) {
  std::vector<std::string> out;
  auto le = [&](const Bound& a, const Bound& b, const char* what) {
    if (a.exact() && b.exact() && a.value > b.value) out.push_back(what);
  };
  le(r.nil_ker_H, r.Hsecat, "nil_ker_H <= Hsecat");
  le(r.Hsecat, r.msecat, "Hsecat <= msecat");
  le(r.Hsecat, r.Hsc, "Hsecat <= Hsc");
  le(r.msecat, r.msc, "msecat <= msc");
  le(r.Hsc, r.msc, "Hsc <= msc");
  le(r.nil_ker_H, r.Hnil_ub, "nil_ker_H <= Hnil_ub");
  le(r.Hsc, r.Hnil_ub, "Hsc <= Hnil_ub");
  le(r.Hnil_ub, r.nil_ker, "Hnil_ub <= nil_ker");
  if (r.secat_ub && r.msecat.exact() && r.msecat.value > *r.secat_ub) out.push_back("msecat <= secat");
  if (r.sc_ub && r.msc.exact() && r.msc.value > *r.sc_ub) out.push_back("msc <= sc");
  return out;
}

// ---------------------------------------------------------------- TC

/// Bracket [lo, hi] for an invariant squeezed between computed members.
struct Bracket {
  int lo = 0;
  std::optional<int> hi;
  bool exact() const { return hi && *hi == lo; }
};

struct TCReport {
  std::string algebra;
  int n = 2;
  std::string original_ring, ring;
  int window = 0;
  Certainty mild = Certainty::Uncertified;
  InvariantReport inv;
  Bracket TC, tc;
};

enum class RingPlan { Auto, Off };

namespace detail {

inline int mild_top(const CoefficientRing& R, int n, int r, int D) {
  if (R.is_field()) return D;
  long top = long(n) * r * *R.rho().prime;
  return int(std::min<long>(D, top));
}

inline TCReport run_tc(const AlgebraPtr& A0, int n, SectionalConfig cfg, RingPlan plan, Flavor want) {
  if (A0->flavor() != want)
    throw Error(A0->name() + " is " + flavor_name(A0->flavor()) + ", expected " + flavor_name(want));
  TCReport rep;
  rep.algebra = A0->name();
  rep.n = n;
  rep.original_ring = A0->ring().str();
  if (n < 1) throw Error("n must be at least 1");
  const int need = std::max({cfg.m_max, n - 1, 1});
  CoefficientRing R = A0->ring();
  if (plan == RingPlan::Auto) {
    R = ring_enlargement(R, need);
  } else if (!R.is_field() && need > 1) {
    throw HypothesisViolated("ring " + R.str() + " is too small for level " + std::to_string(need) +
                                 " (use --ring-enlarge auto or --m-max 1)",
                             "ring", need);
  }
  rep.ring = R.str();
  const int top = mild_top(A0->ring(), n, cfg.r, cfg.window);
  cfg.vanishes_above_window = !A0->ring().is_field() && top < cfg.window + 1 && top == long(n) * cfg.r * *A0->ring().rho().prime;
  if (want == Flavor::Commutative) {
    // an exterior algebra on odd generators is zero above the sum of their degrees
    long total = 0;
    bool odd = true;
    for (int g = 0; g < A0->num_generators(); ++g) {
      odd = odd && A0->generator(g).degree % 2 == 1;
      total += A0->generator(g).degree;
    }
    if (odd && long(n) * total <= top) cfg.vanishes_above_window = true;
  }
  cfg.window = top;
  rep.window = top;
  AlgebraPtr A = base_change(*A0, R);
  A->set_name(A0->name());
  rep.mild = is_H_mild(A0, cfg.r, A0->ring(), cfg.window);
  if (rep.mild == Certainty::False)
    throw HypothesisViolated(A0->name() + " is not H-mild", "mild", cfg.r + 1);
  if (want == Flavor::Tensor)
    for (int g = 0; g < A->num_generators(); ++g)
      for (auto& [m, c] : A->generator_differential(g))
        if (m.size() == 1) throw HypothesisViolated(A0->name() + " is not decomposable", "decomposable", A->generator(g).degree);
  auto S = tensor_power(*A, n);
  auto phi = mu_n(A, n, S);
  phi.set_name("mu_" + std::to_string(n));
  auto I = kernel_ideal(phi, cfg.window + 1, mu_kernel_seeds(*S, n, A->num_generators()));
  rep.inv = sectional_invariants(phi, I, cfg);
  rep.inv.morphism = "mu_" + std::to_string(n) + "(" + A0->name() + ")";
  // lower bounds for TC: nil ker H, HTC, mTC; tc also sits above Htc and mtc
  const InvariantReport& v = rep.inv;
  auto val = [](const Bound& b) { return b.status == BoundStatus::Unknown ? 0 : b.value; };
  int lo = std::max({val(v.nil_ker_H), val(v.Hsecat), val(v.msecat)});
  if (v.Hsecat.status == BoundStatus::Unknown) lo = std::max(lo, v.Hsecat.value);
  if (v.msecat.status == BoundStatus::Unknown) lo = std::max(lo, v.msecat.value);
  rep.TC.lo = lo;
  int tlo = std::max({lo, val(v.Hsc), val(v.msc)});
  rep.tc.lo = tlo;
  // TC <= tc <= Hnil, TC <= secat bound, tc <= sc bound
  auto tighten = [](std::optional<int>& h, std::optional<int> x) {
    if (x) h = h ? std::min(*h, *x) : *x;
  };
  std::optional<int> thi;
  if (v.Hnil_ub.exact()) thi = v.Hnil_ub.value;
  tighten(thi, v.sc_ub);
  std::optional<int> hi = thi;
  tighten(hi, v.secat_ub);
  rep.TC.hi = hi;
  rep.tc.hi = thi;
  return rep;
}

}  // namespace detail

/// Bounds on TC_n and tc_n of the space modelled by A (commutative).
inline TCReport tc_report(const AlgebraPtr& A, int n, const SectionalConfig& cfg, RingPlan plan = RingPlan::Auto) {
  return detail::run_tc(A, n, cfg, plan, Flavor::Commutative);
}

/// The same battery for a tensor-flavor model (ATC_n, Atc_n).
inline TCReport atc_report(const AlgebraPtr& A, int n, const SectionalConfig& cfg, RingPlan plan = RingPlan::Auto) {
  return detail::run_tc(A, n, cfg, plan, Flavor::Tensor);
}

}  // namespace mild

#endif  // MILD_SECTIONAL_HPP
