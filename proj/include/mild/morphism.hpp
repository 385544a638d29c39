#ifndef MILD_MORPHISM_HPP
#define MILD_MORPHISM_HPP

// Multiplicative maps out of a free algebra, determined by generator images.
// The target is a free algebra, optionally read modulo an ideal.

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mild/ideal.hpp"

namespace mild {

class AlgebraMorphism {
 public:
  AlgebraMorphism(std::string name, AlgebraPtr source, AlgebraPtr target, IdealPtr target_ideal = nullptr)
      : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)), ideal_(std::move(target_ideal)) {
    images_.resize(source_->num_generators());
  }

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  /// Null when the target is the free algebra itself.
  const IdealPtr& target_ideal() const { return ideal_; }

  const Element& image(int g) const { return images_.at(g); }
  const std::vector<Element>& images() const { return images_; }

  void set_image(int g, Element e) {
    images_.at(g) = std::move(e);
    memo_.clear();
  }
  void set_image(const std::string& gen, Element e) {
    auto g = source_->find_generator(gen);
    if (!g) throw NameError("unknown generator " + gen + " in " + source_->name());
    set_image(*g, std::move(e));
  }

  /// Keep up with generators appended to the source; existing memo entries
  /// stay valid.
  void append_image(Element e) { images_.push_back(std::move(e)); }

  const Element& apply_monomial(const Monomial& m) const {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    Element r;
    if (m.empty()) {
      r = Element::scalar(Scalar(1));
    } else if (m.size() == 1) {
      r = images_.at(m[0]);
    } else {
      Monomial rest(m.begin() + 1, m.end());
      r = target_->multiply(images_.at(m[0]), apply_monomial(rest));
    }
    return memo_.emplace(m, std::move(r)).first->second;
  }

  Element apply(const Element& e) const {
    Element r;
    for (auto& [m, c] : e) r.axpy(c, apply_monomial(m));
    return r;
  }

  SparseVec apply_vec(const SparseVec& v, int k) const {
    return target_->to_vec(apply(source_->from_vec(v, k)), k);
  }

  bool in_target_ideal(const Element& e) const {
    if (e.is_zero()) return true;
    return ideal_ && ideal_->contains(e);
  }

  /// Degrees preserved, coefficients in the ring, f d = d f on generators
  /// (modulo the target ideal).
  void validate() const {
    if (!(source_->ring() == target_->ring())) throw RingError("morphism " + name_ + " changes the coefficient ring");
    for (int g = 0; g < source_->num_generators(); ++g) {
      const Element& im = images_[g];
      for (auto& [m, c] : im) {
        if (target_->degree(m) != source_->generator(g).degree)
          throw DegreeError("image of " + source_->generator(g).name + " under " + name_ + " has wrong degree");
        if (!target_->ring().contains(c)) throw RingError("coefficient " + c.str() + " not in " + target_->ring().str());
      }
      Element defect = apply(source_->d(source_->gen(g))) - target_->d(im);
      if (!in_target_ideal(defect))
        throw DegreeError(name_ + " does not commute with d on " + source_->generator(g).name + ": defect " +
                          target_->format(defect));
    }
  }

  /// Same map with the target ideal forgotten or replaced.
  AlgebraMorphism with_target_ideal(IdealPtr I) const {
    AlgebraMorphism f(name_, source_, target_, std::move(I));
    f.images_ = images_;
    return f;
  }

 private:
  std::string name_;
  AlgebraPtr source_, target_;
  IdealPtr ideal_;
  std::vector<Element> images_;
  mutable std::unordered_map<Monomial, Element, MonomialHash> memo_;
};

/// The identity of A.
inline AlgebraMorphism identity_morphism(const AlgebraPtr& A) {
  AlgebraMorphism f("id", A, A);
  for (int g = 0; g < A->num_generators(); ++g) f.set_image(g, A->gen(g));
  return f;
}

/// The n-fold product A^{(x)n} -> A: every copy of a generator goes to it.
inline AlgebraMorphism mu_n(const AlgebraPtr& A, int n, AlgebraPtr power = nullptr) {
  if (!power) power = tensor_power(*A, n);
  AlgebraMorphism f("mu_" + std::to_string(n), power, A);
  const int g = A->num_generators();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < g; ++j) f.set_image(i * g + j, A->gen(j));
  return f;
}

/// g after f, as a map source(f) -> target(g). The ideals are not checked.
inline AlgebraMorphism compose(const AlgebraMorphism& g, const AlgebraMorphism& f) {
  AlgebraMorphism h(g.name() + "." + f.name(), f.source(), g.target(), g.target_ideal());
  for (int i = 0; i < f.source()->num_generators(); ++i) h.set_image(i, g.apply(f.image(i)));
  return h;
}

}  // namespace mild

#endif  // MILD_MORPHISM_HPP
