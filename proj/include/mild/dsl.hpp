#ifndef MILD_DSL_HPP
#define MILD_DSL_HPP

// The workspace language:
//
//   ring Z invert 2 3            # or: ring Q
//   cdga S2 { gen v : 2  gen w : 3  d w = v^2 }
//   dga  T3 { gen x : 3 }
//   quotient B = S2 / (v^2, w)
//   ideal J in S2 { v^2, w }
//   morphism f : S2 -> B { v -> v  w -> w }
//
// Polynomials use integer or fraction coefficients, *, ^, +, - and
// parentheses.  '#' starts a comment.

#include <cctype>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mild/morphism.hpp"

namespace mild {

struct Workspace {
  struct Quotient {
    std::string name;
    AlgebraPtr ambient;
    IdealPtr ideal;
  };
  struct Ideal {
    std::string name;
    AlgebraPtr ambient;
    IdealPtr ideal;
  };
  struct Morphism {
    std::string name;
    std::string target_name;  // an algebra or a quotient
    std::shared_ptr<AlgebraMorphism> map;
  };
  enum class Kind { Algebra, Quotient, Ideal, Morphism };

  CoefficientRing ring = CoefficientRing::rationals();
  bool ring_declared = false;
  std::vector<AlgebraPtr> algebras;
  std::vector<Quotient> quotients;
  std::vector<Ideal> ideals;
  std::vector<Morphism> morphisms;
  std::vector<std::pair<Kind, int>> order;

  AlgebraPtr algebra(const std::string& name) const {
    for (auto& a : algebras)
      if (a->name() == name) return a;
    throw NameError("unknown algebra " + name);
  }
  const Quotient* quotient(const std::string& name) const {
    for (auto& q : quotients)
      if (q.name == name) return &q;
    return nullptr;
  }
  const Ideal& ideal(const std::string& name) const {
    for (auto& i : ideals)
      if (i.name == name) return i;
    throw NameError("unknown ideal " + name);
  }
  const Morphism& morphism(const std::string& name) const {
    for (auto& m : morphisms)
      if (m.name == name) return m;
    throw NameError("unknown morphism " + name);
  }
  bool has_name(const std::string& n) const {
    for (auto& a : algebras)
      if (a->name() == n) return true;
    for (auto& q : quotients)
      if (q.name == n) return true;
    for (auto& i : ideals)
      if (i.name == n) return true;
    for (auto& m : morphisms)
      if (m.name == n) return true;
    return false;
  }
};

namespace detail {

struct Token {
  enum Type { Ident, Number, Sym, End } type = End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : s_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      Token t;
      t.line = line_;
      t.col = col_;
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      char c = s_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.type = Token::Ident;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
          t.text += get();
        // copy suffix, e.g. v<2>
        if (i_ + 2 < s_.size() && s_[i_] == '<' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
          std::size_t j = i_ + 1;
          while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
          if (j < s_.size() && s_[j] == '>')
            while (i_ <= j) t.text += get();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.type = Token::Number;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) t.text += get();
      } else if (c == '-' && i_ + 1 < s_.size() && s_[i_ + 1] == '>') {
        t.type = Token::Sym;
        t.text = "->";
        get();
        get();
      } else if (std::string("{}()+-*^/:=,;").find(c) != std::string::npos) {
        t.type = Token::Sym;
        t.text = std::string(1, get());
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
      }
      out.push_back(t);
    }
  }

 private:
  char get() {
    char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip() {
    while (i_ < s_.size()) {
      if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        get();
      } else {
        break;
      }
    }
  }
  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& src, int r) : toks_(Lexer(src).run()), r_(r) {}

  Workspace run() {
    while (peek().type != Token::End) statement();
    return std::move(ws_);
  }

 private:
  const Token& peek(int k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    std::string got = t.type == Token::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.line, t.col);
  }
  bool is_sym(const std::string& s, int k = 0) const { return peek(k).type == Token::Sym && peek(k).text == s; }
  bool is_word(const std::string& s, int k = 0) const { return peek(k).type == Token::Ident && peek(k).text == s; }
  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'", peek());
    next();
  }
  std::string ident(const std::string& what) {
    if (peek().type != Token::Ident) fail("expected " + what, peek());
    return next().text;
  }
  long number(const std::string& what) {
    if (peek().type != Token::Number) fail("expected " + what, peek());
    Token t = next();
    try {
      return std::stol(t.text);
    } catch (...) {
      throw ParseError("number too large", t.line, t.col);
    }
  }
  void fresh_name(const std::string& n, const Token& at) {
    if (ws_.has_name(n)) throw ParseError("name " + n + " is already defined", at.line, at.col);
  }
  std::string where(const Token& t) const { return std::to_string(t.line) + ":" + std::to_string(t.col) + ": "; }

  void statement() {
    const Token& t = peek();
    if (is_word("ring")) return ring();
    if (is_word("cdga")) return algebra(Flavor::Commutative);
    if (is_word("dga")) return algebra(Flavor::Tensor);
    if (is_word("morphism")) return morphism();
    if (is_word("quotient")) return quotient();
    if (is_word("ideal")) return ideal();
    fail("expected 'ring', 'cdga', 'dga', 'quotient', 'ideal' or 'morphism'", t);
  }

  void ring() {
    Token start = next();
    if (ws_.ring_declared) throw ParseError("ring declared twice", start.line, start.col);
    if (!ws_.algebras.empty()) throw ParseError("ring must come before algebras", start.line, start.col);
    if (is_word("Q")) {
      next();
      ws_.ring = CoefficientRing::rationals();
    } else if (is_word("Z")) {
      next();
      if (!is_word("invert")) fail("expected 'invert'", peek());
      next();
      std::vector<long> primes;
      Token at = peek();
      while (peek().type == Token::Number) primes.push_back(number("prime"));
      try {
        ws_.ring = CoefficientRing::localized(primes);
      } catch (const RingError& e) {
        throw RingError(where(at) + e.what());
      }
    } else {
      fail("expected 'Q' or 'Z'", peek());
    }
    ws_.ring_declared = true;
  }

  void algebra(Flavor flavor) {
    next();
    Token nt = peek();
    std::string name = ident("algebra name");
    fresh_name(name, nt);
    auto A = std::make_shared<FreeGradedAlgebra>(flavor, ws_.ring, name);
    expect_sym("{");
    std::vector<std::pair<Token, std::pair<std::string, Element>>> diffs;
    while (!is_sym("}")) {
      if (is_word("gen")) {
        next();
        Token gt = peek();
        std::string g = ident("generator name");
        expect_sym(":");
        Token dt = peek();
        long deg = number("degree");
        if (deg < r_ + 1)
          throw DegreeError(where(dt) + "generator " + g + " has degree " + std::to_string(deg) +
                            ", below the connectivity bound " + std::to_string(r_ + 1));
        if (A->find_generator(g)) throw ParseError("duplicate generator " + g, gt.line, gt.col);
        A->add_generator(g, int(deg));
      } else if (is_word("d")) {
        Token dt = next();
        Token gt = peek();
        std::string g = ident("generator name");
        if (!A->find_generator(g)) throw NameError(where(gt) + "unknown generator " + g);
        expect_sym("=");
        Element e = poly(*A);
        diffs.push_back({dt, {g, std::move(e)}});
      } else if (is_sym(",") || is_sym(";")) {
        next();
      } else {
        fail("expected 'gen', 'd' or '}'", peek());
      }
    }
    next();
    std::map<std::string, Token> seen;
    for (auto& [tok, gd] : diffs) {
      if (seen.count(gd.first)) throw ParseError("second differential for " + gd.first, tok.line, tok.col);
      seen[gd.first] = tok;
      int g = *A->find_generator(gd.first);
      auto deg = degree_of(*A, gd.second, tok);
      if (deg && *deg != A->generator(g).degree + 1)
        throw DegreeError(where(tok) + "d " + gd.first + " has degree " + std::to_string(*deg) + ", expected " +
                          std::to_string(A->generator(g).degree + 1));
      A->set_differential(g, gd.second);
    }
    try {
      A->validate();
    } catch (const DegreeError& e) {
      throw DegreeError(where(nt) + e.what());
    }
    ws_.algebras.push_back(A);
    ws_.order.emplace_back(Workspace::Kind::Algebra, int(ws_.algebras.size()) - 1);
  }

  void quotient() {
    next();
    Token nt = peek();
    std::string name = ident("quotient name");
    fresh_name(name, nt);
    expect_sym("=");
    Token at = peek();
    AlgebraPtr A = lookup_algebra(ident("algebra name"), at);
    expect_sym("/");
    expect_sym("(");
    auto I = std::make_shared<HomogeneousIdeal>(A);
    for (;;) {
      Token pt = peek();
      Element e = poly(*A);
      degree_of(*A, e, pt);
      I->add_generator(std::move(e));
      if (is_sym(",")) {
        next();
        continue;
      }
      expect_sym(")");
      break;
    }
    try {
      mild::quotient(A, I);
    } catch (const NotDStable& e) {
      throw NotDStable(where(nt) + e.what(), e.generator(), e.degree());
    }
    ws_.quotients.push_back({name, A, I});
    ws_.order.emplace_back(Workspace::Kind::Quotient, int(ws_.quotients.size()) - 1);
  }

  void ideal() {
    next();
    Token nt = peek();
    std::string name = ident("ideal name");
    fresh_name(name, nt);
    if (!is_word("in")) fail("expected 'in'", peek());
    next();
    Token at = peek();
    AlgebraPtr A = lookup_algebra(ident("algebra name"), at);
    expect_sym("{");
    auto I = std::make_shared<HomogeneousIdeal>(A);
    while (!is_sym("}")) {
      Token pt = peek();
      Element e = poly(*A);
      degree_of(*A, e, pt);
      I->add_generator(std::move(e));
      if (is_sym(",")) next();
    }
    next();
    ws_.ideals.push_back({name, A, I});
    ws_.order.emplace_back(Workspace::Kind::Ideal, int(ws_.ideals.size()) - 1);
  }

  void morphism() {
    next();
    Token nt = peek();
    std::string name = ident("morphism name");
    fresh_name(name, nt);
    expect_sym(":");
    Token st = peek();
    AlgebraPtr S = lookup_algebra(ident("source algebra"), st);
    expect_sym("->");
    Token tt = peek();
    std::string tname = ident("target");
    AlgebraPtr T;
    IdealPtr I;
    if (auto q = ws_.quotient(tname)) {
      T = q->ambient;
      I = q->ideal;
    } else {
      T = lookup_algebra(tname, tt);
    }
    auto f = std::make_shared<AlgebraMorphism>(name, S, T, I);
    std::vector<bool> set(S->num_generators(), false);
    expect_sym("{");
    while (!is_sym("}")) {
      if (is_sym(",") || is_sym(";")) {
        next();
        continue;
      }
      Token gt = peek();
      std::string g = ident("generator name");
      auto gi = S->find_generator(g);
      if (!gi) throw NameError(where(gt) + "unknown generator " + g + " of " + S->name());
      if (set[*gi]) throw ParseError("second image for " + g, gt.line, gt.col);
      expect_sym("->");
      Token pt = peek();
      Element e = poly(*T);
      auto deg = degree_of(*T, e, pt);
      if (deg && *deg != S->generator(*gi).degree)
        throw DegreeError(where(pt) + "image of " + g + " has degree " + std::to_string(*deg) + ", expected " +
                          std::to_string(S->generator(*gi).degree));
      f->set_image(*gi, std::move(e));
      set[*gi] = true;
    }
    next();
    try {
      f->validate();
    } catch (const DegreeError& e) {
      throw DegreeError(where(nt) + e.what());
    }
    ws_.morphisms.push_back({name, tname, f});
    ws_.order.emplace_back(Workspace::Kind::Morphism, int(ws_.morphisms.size()) - 1);
  }

  AlgebraPtr lookup_algebra(const std::string& n, const Token& at) {
    for (auto& a : ws_.algebras)
      if (a->name() == n) return a;
    throw NameError(where(at) + "unknown algebra " + n);
  }

  std::optional<int> degree_of(const FreeGradedAlgebra& A, const Element& e, const Token& at) {
    try {
      return A.degree(e);
    } catch (const DegreeError&) {
      throw DegreeError(where(at) + "inhomogeneous polynomial " + A.format(e));
    }
  }

  // poly := [+-] term ([+-] term)*
  Element poly(const FreeGradedAlgebra& A) {
    Element acc;
    bool neg = false;
    if (is_sym("+") || is_sym("-")) neg = next().text == "-";
    acc = term(A);
    if (neg) acc = -acc;
    while (is_sym("+") || is_sym("-")) {
      bool minus = next().text == "-";
      Element t = term(A);
      acc.axpy(Scalar(minus ? -1 : 1), t);
    }
    return acc;
  }

  Element term(const FreeGradedAlgebra& A) {
    Element acc = factor(A);
    while (is_sym("*")) {
      next();
      acc = A.multiply(acc, factor(A));
    }
    return acc;
  }

  Element factor(const FreeGradedAlgebra& A) {
    Element base = atom(A);
    if (is_sym("^")) {
      next();
      long e = number("exponent");
      if (e > 64) fail("exponent too large", peek());
      base = A.power(base, int(e));
    }
    return base;
  }

  Element atom(const FreeGradedAlgebra& A) {
    const Token t = peek();
    if (t.type == Token::Number) {
      next();
      std::string lit = t.text;
      if (is_sym("/") && peek(1).type == Token::Number) {
        next();
        lit += "/" + next().text;
      }
      Scalar c;
      try {
        c = parse_scalar(lit);
      } catch (const std::exception&) {
        throw ParseError("bad number " + lit, t.line, t.col);
      }
      if (!A.ring().contains(c)) throw RingError(where(t) + "coefficient " + lit + " is not in " + A.ring().str());
      return Element::scalar(c);
    }
    if (t.type == Token::Ident) {
      next();
      auto g = A.find_generator(t.text);
      if (!g) throw NameError(where(t) + "unknown generator " + t.text + " in " + A.name());
      return A.gen(*g);
    }
    if (is_sym("(")) {
      next();
      Element e = poly(A);
      expect_sym(")");
      return e;
    }
    fail("expected a number, a generator or '('", t);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int r_;
  Workspace ws_;
};

}  // namespace detail

/// Parse a workspace. Generators of degree <= r are rejected.
inline Workspace parse(const std::string& source, int r = 1) { return detail::Parser(source, r).run(); }

inline std::string print(const Workspace& ws) {
  std::ostringstream out;
  out << "ring " << ws.ring.dsl() << "\n";
  for (auto [kind, i] : ws.order) {
    switch (kind) {
      case Workspace::Kind::Algebra: {
        const auto& A = *ws.algebras[i];
        out << (A.flavor() == Flavor::Commutative ? "cdga " : "dga ") << A.name() << " {";
        for (auto& g : A.generators()) out << "\n  gen " << g.name << " : " << g.degree;
        for (int g = 0; g < A.num_generators(); ++g)
          if (!A.generator_differential(g).is_zero())
            out << "\n  d " << A.generator(g).name << " = " << A.format(A.generator_differential(g));
        out << "\n}\n";
        break;
      }
      case Workspace::Kind::Quotient: {
        const auto& q = ws.quotients[i];
        out << "quotient " << q.name << " = " << q.ambient->name() << " / (";
        for (std::size_t j = 0; j < q.ideal->generators().size(); ++j)
          out << (j ? ", " : "") << q.ambient->format(q.ideal->generators()[j]);
        out << ")\n";
        break;
      }
      case Workspace::Kind::Ideal: {
        const auto& d = ws.ideals[i];
        out << "ideal " << d.name << " in " << d.ambient->name() << " {";
        for (std::size_t j = 0; j < d.ideal->generators().size(); ++j)
          out << (j ? ", " : " ") << d.ambient->format(d.ideal->generators()[j]);
        out << " }\n";
        break;
      }
      case Workspace::Kind::Morphism: {
        const auto& m = ws.morphisms[i];
        const auto& f = *m.map;
        out << "morphism " << m.name << " : " << f.source()->name() << " -> " << m.target_name << " {";
        for (int g = 0; g < f.source()->num_generators(); ++g)
          out << "\n  " << f.source()->generator(g).name << " -> " << f.target()->format(f.image(g));
        out << "\n}\n";
        break;
      }
    }
  }
  return out.str();
}

/// Structural equality of two workspaces (same declarations, same data).
inline bool same_workspace(const Workspace& a, const Workspace& b) {
  if (!(a.ring == b.ring) || a.order != b.order) return false;
  if (a.algebras.size() != b.algebras.size()) return false;
  for (std::size_t i = 0; i < a.algebras.size(); ++i)
    if (!(*a.algebras[i] == *b.algebras[i])) return false;
  for (std::size_t i = 0; i < a.quotients.size(); ++i) {
    auto &x = a.quotients[i], &y = b.quotients[i];
    if (x.name != y.name || x.ambient->name() != y.ambient->name() ||
        x.ideal->generators() != y.ideal->generators())
      return false;
  }
  for (std::size_t i = 0; i < a.ideals.size(); ++i) {
    auto &x = a.ideals[i], &y = b.ideals[i];
    if (x.name != y.name || x.ambient->name() != y.ambient->name() ||
        x.ideal->generators() != y.ideal->generators())
      return false;
  }
  for (std::size_t i = 0; i < a.morphisms.size(); ++i) {
    auto &x = a.morphisms[i], &y = b.morphisms[i];
    if (x.name != y.name || x.target_name != y.target_name || x.map->source()->name() != y.map->source()->name() ||
        x.map->images() != y.map->images())
      return false;
  }
  return true;
}

}  // namespace mild

#endif  // MILD_DSL_HPP
