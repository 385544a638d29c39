#ifndef MILD_ALGEBRA_HPP
#define MILD_ALGEBRA_HPP

// Free graded algebras over the coefficient ring: graded-commutative
// Lambda(V) (Koszul signs, odd generators square to zero) or tensor T(V).
// Monomials are vectors of generator indices: sorted multisets in the
// commutative flavor, words in the tensor flavor.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mild/coeff.hpp"
#include "mild/error.hpp"
#include "mild/sparse.hpp"

namespace mild {

enum class Flavor { Commutative, Tensor };

inline const char* flavor_name(Flavor f) { return f == Flavor::Commutative ? "commutative" : "tensor"; }

using Monomial = std::vector<int>;

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int g : m) h = (h ^ std::size_t(g + 1)) * 1099511628211ull;
    return h;
  }
};

/// Homogeneous or not; callers check.
class Element {
 public:
  Element() = default;
  static Element scalar(const Scalar& c) {
    Element e;
    e.add({}, c);
    return e;
  }
  static Element monomial(Monomial m, const Scalar& c = Scalar(1)) {
    Element e;
    e.add(std::move(m), c);
    return e;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar() : it->second;
  }

  void add(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void axpy(const Scalar& c, const Element& o) {
    if (c.is_zero()) return;
    for (auto& [m, x] : o.terms_) add(m, c * x);
  }
  Element& operator+=(const Element& o) {
    axpy(Scalar(1), o);
    return *this;
  }
  Element& operator-=(const Element& o) {
    axpy(Scalar(-1), o);
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Scalar& c, const Element& a) {
    Element r;
    r.axpy(c, a);
    return r;
  }
  Element operator-() const { return Scalar(-1) * *this; }
  friend bool operator==(const Element&, const Element&) = default;

 private:
  std::map<Monomial, Scalar> terms_;
};

struct Generator {
  std::string name;
  int degree = 0;
  friend bool operator==(const Generator&, const Generator&) = default;
};

class FreeGradedAlgebra {
 public:
  FreeGradedAlgebra(Flavor flavor, CoefficientRing ring, std::string name = "")
      : flavor_(flavor), ring_(std::move(ring)), name_(std::move(name)) {}

  Flavor flavor() const { return flavor_; }
  const CoefficientRing& ring() const { return ring_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  int cap() const { return cap_; }
  void set_cap(int c) { cap_ = c; }

  int num_generators() const { return int(gens_.size()); }
  const std::vector<Generator>& generators() const { return gens_; }
  const Generator& generator(int i) const { return gens_.at(i); }
  const Element& generator_differential(int i) const { return diff_.at(i); }

  std::optional<int> find_generator(const std::string& name) const {
    for (int i = 0; i < int(gens_.size()); ++i)
      if (gens_[i].name == name) return i;
    return std::nullopt;
  }

  /// Append a generator (d = 0 until set). Caches of degrees >= degree are
  /// dropped; everything below stays valid.
  int add_generator(const std::string& name, int degree) {
    if (degree < 1) throw DegreeError("generator " + name + " must have positive degree");
    if (find_generator(name)) throw NameError("duplicate generator name " + name);
    gens_.push_back({name, degree});
    diff_.emplace_back();
    for (auto it = basis_.lower_bound(degree); it != basis_.end();) {
      index_.erase(it->first);
      it = basis_.erase(it);
    }
    return int(gens_.size()) - 1;
  }

  /// Set d(g). Only legal before anything involving g was differentiated.
  void set_differential(int g, Element d) {
    diff_.at(g) = std::move(d);
    dmemo_.clear();
  }

  /// Append a generator together with its differential; the differential
  /// memo of existing monomials survives.
  int add_generator(const std::string& name, int degree, Element d) {
    int g = add_generator(name, degree);
    diff_[g] = std::move(d);
    return g;
  }

  Element gen(int i) const { return Element::monomial({i}); }
  Element gen(const std::string& name) const {
    auto i = find_generator(name);
    if (!i) throw NameError("unknown generator " + name + (name_.empty() ? "" : " in " + name_));
    return gen(*i);
  }

  int degree(const Monomial& m) const {
    int d = 0;
    for (int g : m) d += gens_[g].degree;
    return d;
  }

  /// Degree of a homogeneous element; throws DegreeError if inhomogeneous,
  /// nullopt for zero.
  std::optional<int> degree(const Element& e) const {
    std::optional<int> d;
    for (auto& [m, c] : e) {
      int k = degree(m);
      if (d && *d != k) throw DegreeError("inhomogeneous element " + format(e));
      d = k;
    }
    return d;
  }

  /// Product of two monomials with its sign, or nullopt when it vanishes.
  std::optional<std::pair<Monomial, int>> mul_monomials(const Monomial& a, const Monomial& b) const {
    if (a.empty()) return std::make_pair(b, 1);
    if (b.empty()) return std::make_pair(a, 1);
    Monomial out;
    out.reserve(a.size() + b.size());
    if (flavor_ == Flavor::Tensor) {
      out = a;
      out.insert(out.end(), b.begin(), b.end());
      return std::make_pair(std::move(out), 1);
    }
    // merge; each odd generator of b passes the odd generators of a that sort after it
    int sign = 1;
    std::size_t i = 0, j = 0;
    int odd_left = 0;
    for (int g : a) odd_left += gens_[g].degree & 1;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
        if (j < b.size() && a[i] == b[j] && (gens_[a[i]].degree & 1)) return std::nullopt;
        if (gens_[a[i]].degree & 1) --odd_left;
        out.push_back(a[i++]);
      } else {
        if ((gens_[b[j]].degree & 1) && (odd_left & 1)) sign = -sign;
        out.push_back(b[j++]);
      }
    }
    return std::make_pair(std::move(out), sign);
  }

  Element multiply(const Element& a, const Element& b) const {
    Element r;
    for (auto& [ma, ca] : a)
      for (auto& [mb, cb] : b) {
        auto p = mul_monomials(ma, mb);
        if (!p) continue;
        Scalar c = ca * cb;
        r.add(p->first, p->second > 0 ? c : -c);
      }
    return r;
  }

  Element power(const Element& a, int k) const {
    Element r = Element::scalar(Scalar(1));
    for (int i = 0; i < k; ++i) r = multiply(r, a);
    return r;
  }

  /// Leibniz extension of the generator differentials, memoized per monomial.
  const Element& d_monomial(const Monomial& m) const {
    auto it = dmemo_.find(m);
    if (it != dmemo_.end()) return it->second;
    Element r;
    if (m.size() == 1) {
      r = diff_[m[0]];
    } else if (!m.empty()) {
      // d(g * rest) = d(g) rest + (-1)^|g| g d(rest)
      Monomial head{m[0]};
      Monomial rest(m.begin() + 1, m.end());
      r = multiply(diff_[m[0]], Element::monomial(rest));
      const Element& drest = d_monomial(rest);
      Element tail = multiply(Element::monomial(head), drest);
      r.axpy(Scalar((gens_[m[0]].degree & 1) ? -1 : 1), tail);
    }
    return dmemo_.emplace(m, std::move(r)).first->second;
  }

  Element d(const Element& e) const {
    Element r;
    for (auto& [m, c] : e) r.axpy(c, d_monomial(m));
    return r;
  }

  /// All monomials of degree k in canonical (lexicographic) order.
  const std::vector<Monomial>& basis(int k) const {
    if (cap_ > 0 && k > cap_) throw DegreeError("degree " + std::to_string(k) + " exceeds cap " + std::to_string(cap_));
    auto it = basis_.find(k);
    if (it != basis_.end()) return it->second;
    std::vector<Monomial> out;
    if (k == 0) {
      out.push_back({});
    } else if (k > 0) {
      Monomial cur;
      enumerate(k, 0, cur, out);
    }
    auto& idx = index_[k];
    for (int i = 0; i < int(out.size()); ++i) idx.emplace(out[i], i);
    return basis_.emplace(k, std::move(out)).first->second;
  }

  int dim(int k) const { return int(basis(k).size()); }

  int index_of(const Monomial& m, int k) const {
    basis(k);
    auto& idx = index_.at(k);
    auto it = idx.find(m);
    return it == idx.end() ? -1 : it->second;
  }

  /// Coordinates of a degree-k element in the monomial basis.
  SparseVec to_vec(const Element& e, int k) const {
    std::vector<SparseVec::Entry> en;
    en.reserve(e.size());
    for (auto& [m, c] : e) {
      int i = index_of(m, k);
      if (i < 0) throw DegreeError("element " + format(e) + " is not of degree " + std::to_string(k));
      en.emplace_back(i, c);
    }
    return SparseVec::from_entries(std::move(en));
  }

  Element from_vec(const SparseVec& v, int k) const {
    const auto& b = basis(k);
    Element e;
    for (auto& [i, c] : v) e.add(b[i], c);
    return e;
  }

  std::string format_monomial(const Monomial& m) const {
    if (m.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < m.size();) {
      std::size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      if (!s.empty()) s += "*";
      s += gens_[m[i]].name;
      if (j - i > 1) s += "^" + std::to_string(j - i);
      i = j;
    }
    return s;
  }

  /// Human/DSL-readable form, e.g. "3*v^2 - w*x".
  std::string format(const Element& e) const {
    if (e.is_zero()) return "0";
    std::string s;
    for (auto& [m, c] : e) {
      Scalar a = c;
      bool neg = a.sign() < 0;
      if (neg) a = -a;
      if (s.empty())
        s += neg ? "-" : "";
      else
        s += neg ? " - " : " + ";
      if (m.empty()) {
        s += a.str();
      } else {
        if (!a.is_one()) s += a.str() + "*";
        s += format_monomial(m);
      }
    }
    return s;
  }

  /// Differentials homogeneous of degree +1 with coefficients in the ring,
  /// and d^2 = 0 on generators.
  void validate() const {
    for (int i = 0; i < num_generators(); ++i) {
      const Element& dv = diff_[i];
      for (auto& [m, c] : dv) {
        if (degree(m) != gens_[i].degree + 1)
          throw DegreeError("d " + gens_[i].name + " must have degree " + std::to_string(gens_[i].degree + 1) +
                            ", found term of degree " + std::to_string(degree(m)));
        if (!ring_.contains(c)) throw RingError("coefficient " + c.str() + " is not in " + ring_.str());
        for (int g : m)
          if (g == i) throw DegreeError("d " + gens_[i].name + " involves " + gens_[i].name);
      }
      if (!d(dv).is_zero()) throw DegreeError("d^2 " + gens_[i].name + " = " + format(d(dv)) + " is not zero");
    }
  }

  friend bool operator==(const FreeGradedAlgebra& a, const FreeGradedAlgebra& b) {
    return a.flavor_ == b.flavor_ && a.ring_ == b.ring_ && a.name_ == b.name_ && a.gens_ == b.gens_ &&
           a.diff_ == b.diff_;
  }

 private:
  void enumerate(int remaining, int start, Monomial& cur, std::vector<Monomial>& out) const {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    const bool comm = flavor_ == Flavor::Commutative;
    for (int g = comm ? start : 0; g < num_generators(); ++g) {
      int e = gens_[g].degree;
      if (e > remaining) continue;
      if (comm && (e & 1) && !cur.empty() && cur.back() == g) continue;
      cur.push_back(g);
      enumerate(remaining - e, g, cur, out);
      cur.pop_back();
    }
  }

  Flavor flavor_;
  CoefficientRing ring_;
  std::string name_;
  int cap_ = 0;  // 0 = unbounded
  std::vector<Generator> gens_;
  std::vector<Element> diff_;
  mutable std::map<int, std::vector<Monomial>> basis_;
  mutable std::map<int, std::unordered_map<Monomial, int, MonomialHash>> index_;
  mutable std::unordered_map<Monomial, Element, MonomialHash> dmemo_;
};

using AlgebraPtr = std::shared_ptr<FreeGradedAlgebra>;

/// Name of the i-th copy of a generator, e.g. "v<2>".
inline std::string copy_name(const std::string& name, int i) { return name + "<" + std::to_string(i) + ">"; }

/// Free algebra on n renamed copies of the generators, differential copied
/// componentwise.  For the commutative flavor this is A^{(x)n}; for the
/// tensor flavor it is the free product of n copies.
inline AlgebraPtr tensor_power(const FreeGradedAlgebra& A, int n) {
  if (n < 1) throw Error("tensor_power needs n >= 1");
  std::string nm = A.name().empty() ? "" : (n == 1 ? A.name() : A.name() + "^" + std::to_string(n));
  auto P = std::make_shared<FreeGradedAlgebra>(A.flavor(), A.ring(), nm);
  if (n == 1) {
    *P = A;
    return P;
  }
  const int g = A.num_generators();
  for (int i = 1; i <= n; ++i)
    for (int j = 0; j < g; ++j) P->add_generator(copy_name(A.generator(j).name, i), A.generator(j).degree);
  for (int i = 1; i <= n; ++i)
    for (int j = 0; j < g; ++j) {
      Element d;
      for (auto& [m, c] : A.generator_differential(j)) {
        Monomial mm;
        for (int x : m) mm.push_back((i - 1) * g + x);
        d.add(mm, c);  // copies are consecutive, order inside a copy is preserved
      }
      P->set_differential((i - 1) * g + j, std::move(d));
    }
  P->set_cap(A.cap() > 0 ? A.cap() : 0);
  return P;
}

/// A with extra generators W appended (A (x) Lambda W, or the free product A
/// and TW in the tensor flavor). The differentials of W are set separately.
inline AlgebraPtr extend(const FreeGradedAlgebra& A, const std::vector<Generator>& W, const std::string& name = "") {
  auto E = std::make_shared<FreeGradedAlgebra>(A);
  if (!name.empty()) E->set_name(name);
  for (auto& w : W) E->add_generator(w.name, w.degree);
  return E;
}

}  // namespace mild

#endif  // MILD_ALGEBRA_HPP
