#ifndef MILD_IDEAL_HPP
#define MILD_IDEAL_HPP

// Homogeneous ideals of free algebras (one-sided = two-sided in the
// commutative flavor, genuinely two-sided in the tensor flavor), their
// degreewise bases, powers, and quotients.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mild/algebra.hpp"

namespace mild {

class HomogeneousIdeal {
 public:
  explicit HomogeneousIdeal(AlgebraPtr ambient, std::vector<Element> gens = {}) : ambient_(std::move(ambient)) {
    for (auto& g : gens) add_generator(std::move(g));
  }

  const AlgebraPtr& ambient() const { return ambient_; }
  const std::vector<Element>& generators() const { return gens_; }
  const std::vector<int>& generator_degrees() const { return degs_; }
  bool is_zero_ideal() const { return gens_.empty(); }

  void add_generator(Element g) {
    auto k = ambient_->degree(g);
    if (!k) return;  // the zero element generates nothing
    if (*k < 1) throw DegreeError("ideal generators must have positive degree");
    gens_.push_back(std::move(g));
    degs_.push_back(*k);
    for (auto it = cache_.lower_bound(*k); it != cache_.end();) it = cache_.erase(it);
  }

  /// Echelon whose rows form an R-basis of the degree-k component.
  const LatticeEchelon& component(int k) const {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    const FreeGradedAlgebra& A = *ambient_;
    LatticeEchelon E(A.ring());
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      int e = degs_[i];
      if (e > k) continue;
      if (A.flavor() == Flavor::Commutative) {
        for (auto& m : A.basis(k - e)) E.insert(A.to_vec(A.multiply(Element::monomial(m), gens_[i]), k));
      } else {
        for (int a = 0; a <= k - e; ++a)
          for (auto& m1 : A.basis(a)) {
            Element left = A.multiply(Element::monomial(m1), gens_[i]);
            for (auto& m2 : A.basis(k - e - a)) E.insert(A.to_vec(A.multiply(left, Element::monomial(m2)), k));
          }
      }
    }
    return cache_.emplace(k, std::move(E)).first->second;
  }

  int rank(int k) const { return component(k).rank(); }

  bool contains(const Element& x) const {
    auto k = ambient_->degree(x);
    if (!k) return true;
    return component(*k).contains(ambient_->to_vec(x, *k));
  }

  /// First generator g (with its degree) such that d(g) is not in the ideal.
  std::optional<std::pair<int, int>> stability_witness() const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (!contains(ambient_->d(gens_[i]))) return std::make_pair(int(i), degs_[i]);
    return std::nullopt;
  }

 private:
  AlgebraPtr ambient_;
  std::vector<Element> gens_;
  std::vector<int> degs_;
  mutable std::map<int, LatticeEchelon> cache_;
};

using IdealPtr = std::shared_ptr<HomogeneousIdeal>;

/// R-basis of the degree-k component of I, as elements.
inline std::vector<Element> ideal_degree_basis(const HomogeneousIdeal& I, int k) {
  std::vector<Element> out;
  for (auto& [p, row] : I.component(k).rows()) out.push_back(I.ambient()->from_vec(row.vec, k));
  return out;
}

/// I^k. In the commutative flavor the k-fold products of generators generate
/// it; in the tensor flavor the degreewise components up to `cap` are
/// computed from products of bases and used as generators.
inline IdealPtr ideal_power(const HomogeneousIdeal& I, int k, int cap) {
  if (k < 1) throw Error("ideal_power needs k >= 1");
  const FreeGradedAlgebra& A = *I.ambient();
  auto P = std::make_shared<HomogeneousIdeal>(I.ambient());
  if (k == 1) {
    for (auto& g : I.generators()) P->add_generator(g);
    return P;
  }
  const int n = int(I.generators().size());
  if (A.flavor() == Flavor::Commutative) {
    // nondecreasing index tuples
    std::function<void(int, int, Element, int)> rec = [&](int pos, int start, Element acc, int deg) {
      if (acc.is_zero()) return;
      if (pos == k) {
        P->add_generator(std::move(acc));
        return;
      }
      for (int i = start; i < n; ++i) {
        if (cap > 0 && deg + I.generator_degrees()[i] > cap) continue;
        rec(pos + 1, i, A.multiply(acc, I.generators()[i]), deg + I.generator_degrees()[i]);
      }
    };
    rec(0, 0, Element::scalar(Scalar(1)), 0);
    return P;
  }
  // tensor: components of I^k are spans of x*y, x in I^{k-1}, y in I
  IdealPtr prev = ideal_power(I, k - 1, cap);
  for (int d = 1; d <= cap; ++d) {
    LatticeEchelon E(A.ring());
    for (int a = 1; a < d; ++a) {
      auto left = ideal_degree_basis(*prev, a);
      if (left.empty()) continue;
      auto right = ideal_degree_basis(I, d - a);
      for (auto& x : left)
        for (auto& y : right) E.insert(A.to_vec(A.multiply(x, y), d));
    }
    std::vector<Element> fresh;
    const LatticeEchelon& have = P->component(d);
    for (auto& [p, row] : E.rows())
      if (!have.contains(row.vec)) fresh.push_back(A.from_vec(row.vec, d));
    for (auto& g : fresh) P->add_generator(std::move(g));
  }
  return P;
}

/// A free algebra modulo a d-stable homogeneous ideal.
struct QuotientAlgebra {
  AlgebraPtr ambient;
  IdealPtr ideal;
};

/// Checks d(I) in I on generators (enough, by the Leibniz rule).
inline QuotientAlgebra quotient(AlgebraPtr A, IdealPtr I) {
  if (!I) I = std::make_shared<HomogeneousIdeal>(A);
  if (I->ambient() != A) throw Error("ideal lives in a different algebra");
  if (auto w = I->stability_witness()) {
    const Element& g = I->generators()[w->first];
    throw NotDStable("d(" + A->format(g) + ") = " + A->format(A->d(g)) + " is not in the ideal (degree " +
                         std::to_string(w->second + 1) + ")",
                     A->format(g), w->second);
  }
  return {std::move(A), std::move(I)};
}

}  // namespace mild

#endif  // MILD_IDEAL_HPP
