#ifndef MILD_TESTS_FIXTURES_HPP
#define MILD_TESTS_FIXTURES_HPP

#include <random>
#include <string>

#include "mild/dsl.hpp"

namespace fx {

inline mild::AlgebraPtr algebra(const std::string& src, const std::string& name) {
  return mild::parse(src).algebra(name);
}

/// Random homogeneous element of degree k with small integer coefficients.
inline mild::Element random_element(const mild::FreeGradedAlgebra& A, int k, std::mt19937& rng, int terms = 3) {
  const auto& b = A.basis(k);
  mild::Element e;
  if (b.empty()) return e;
  std::uniform_int_distribution<int> pick(0, int(b.size()) - 1), val(-4, 4);
  for (int i = 0; i < terms; ++i) e.add(b[pick(rng)], mild::Scalar(val(rng)));
  return e;
}

inline mild::Element parse_element(const mild::FreeGradedAlgebra& A, const std::string& poly) {
  // reuse the parser through a throwaway ideal statement
  std::string src = "ring " + A.ring().dsl() + "\n" + (A.flavor() == mild::Flavor::Commutative ? "cdga " : "dga ") +
                    A.name() + " {";
  for (auto& g : A.generators()) src += " gen " + g.name + " : " + std::to_string(g.degree);
  src += " }\nideal TMP in " + A.name() + " { " + poly + " }\n";
  auto ws = mild::parse(src, 0);
  const auto& I = ws.ideal("TMP");
  mild::Element out;
  if (I.ideal->generators().empty()) return out;
  // same generator indices, so the element transfers verbatim
  return I.ideal->generators()[0];
}

}  // namespace fx

#endif
