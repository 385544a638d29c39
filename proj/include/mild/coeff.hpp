#ifndef MILD_COEFF_HPP
#define MILD_COEFF_HPP

// Exact scalars and the coefficient rings Q and Z_S (integers with a finite
// set S of primes inverted, 2 always in S).

#include <gmpxx.h>

#include <climits>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mild/error.hpp"

namespace mild {

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    if (a >> 64 == 0 && b >> 64 == 0) return gcd64(std::uint64_t(a), std::uint64_t(b));
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u128 abs128(i128 v) { return v < 0 ? u128(-v) : u128(v); }

constexpr i128 kMax64 = i128(INT64_MAX);

inline bool fits64(i128 v) { return v <= kMax64 && v >= -kMax64; }

inline mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  u128 u = abs128(v);
  mpz_class hi(static_cast<unsigned long>(std::uint64_t(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(std::uint64_t(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace detail

/// Exact rational number. Values whose numerator and denominator fit in a
/// signed 64-bit word are stored inline; larger ones spill to GMP.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int n) : num_(n) {}
  Scalar(long n) : num_(n) { check_small(); }
  Scalar(long long n) : num_(n) { check_small(); }
  Scalar(long long n, long long d) { assign128(n, d); }
  explicit Scalar(const mpq_class& q) { assign_big(q); }
  explicit Scalar(const mpz_class& z) { assign_big(mpq_class(z)); }

  Scalar(const Scalar& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Scalar(Scalar&&) noexcept = default;
  Scalar& operator=(const Scalar& o) {
    if (this != &o) {
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Scalar& operator=(Scalar&&) noexcept = default;

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
  int sign() const {
    if (big_) return sgn(*big_);
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
  }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  }
  mpz_class numerator() const {
    return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(num_));
  }
  mpz_class denominator() const {
    return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(den_));
  }
  bool small() const { return !big_; }
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }

  std::string str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Scalar operator-() const {
    if (big_) return Scalar(mpq_class(-*big_));
    Scalar r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t s;
        if (!__builtin_add_overflow(a.num_, b.num_, &s) && s != INT64_MIN) {
          Scalar r;
          r.num_ = s;
          return r;
        }
      }
      Scalar r;
      r.assign128(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                  detail::i128(a.den_) * b.den_);
      return r;
    }
    return Scalar(mpq_class(a.to_mpq() + b.to_mpq()));
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return Scalar();
      if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t p;
        if (!__builtin_mul_overflow(a.num_, b.num_, &p) && p != INT64_MIN) {
          Scalar r;
          r.num_ = p;
          return r;
        }
      }
      std::uint64_t g1 = detail::gcd64(std::uint64_t(a.num_ < 0 ? -a.num_ : a.num_), std::uint64_t(b.den_));
      std::uint64_t g2 = detail::gcd64(std::uint64_t(b.num_ < 0 ? -b.num_ : b.num_), std::uint64_t(a.den_));
      detail::i128 n = detail::i128(a.num_ / std::int64_t(g1)) * (b.num_ / std::int64_t(g2));
      detail::i128 d = detail::i128(a.den_ / std::int64_t(g2)) * (b.den_ / std::int64_t(g1));
      Scalar r;
      r.store_reduced(n, d);
      return r;
    }
    return Scalar(mpq_class(a.to_mpq() * b.to_mpq()));
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw std::domain_error("Scalar division by zero");
    return a * b.inverse();
  }
  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("Scalar inverse of zero");
    if (big_) return Scalar(mpq_class(1 / *big_));
    Scalar r;
    r.num_ = num_ < 0 ? -den_ : den_;
    r.den_ = num_ < 0 ? -num_ : num_;
    return r;
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // big values never fit in 64 bits
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (!a.big_ && !b.big_)
      return detail::i128(a.num_) * b.den_ < detail::i128(b.num_) * a.den_;
    return a.to_mpq() < b.to_mpq();
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  void check_small() {
    if (num_ == INT64_MIN) assign_big(mpq_class(detail::to_mpz(detail::i128(num_))));
  }
  void assign128(detail::i128 n, detail::i128 d) {
    if (d == 0) throw std::domain_error("Scalar with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::u128 g = detail::gcd128(detail::abs128(n), detail::u128(d));
    if (g > 1) {
      n /= detail::i128(g);
      d /= detail::i128(g);
    }
    store_reduced(n, d);
  }
  void store_reduced(detail::i128 n, detail::i128 d) {
    if (n == 0) {
      num_ = 0;
      den_ = 1;
      big_.reset();
      return;
    }
    if (detail::fits64(n) && detail::fits64(d)) {
      num_ = std::int64_t(n);
      den_ = std::int64_t(d);
      big_.reset();
      return;
    }
    big_ = std::make_unique<mpq_class>(detail::to_mpz(n), detail::to_mpz(d));
    big_->canonicalize();
  }
  void assign_big(mpq_class q) {
    q.canonicalize();
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (n.fits_slong_p() && d.fits_slong_p() && n != LONG_MIN) {
      num_ = n.get_si();
      den_ = d.get_si();
      big_.reset();
    } else {
      big_ = std::make_unique<mpq_class>(std::move(q));
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

/// A prime, or the symbol infinity (the value of rho over Q).
struct PrimeOrInfinity {
  std::optional<long> prime;

  bool is_infinite() const { return !prime.has_value(); }
  std::string str() const { return prime ? std::to_string(*prime) : std::string("inf"); }
  friend bool operator==(const PrimeOrInfinity&, const PrimeOrInfinity&) = default;
};

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

inline long next_prime(long p) {
  long q = p + 1;
  while (!is_prime(q)) ++q;
  return q;
}

/// Q, or Z with a finite sorted set of primes inverted.
class CoefficientRing {
 public:
  enum class Kind { Rationals, LocalizedIntegers };

  static CoefficientRing rationals() { return CoefficientRing(Kind::Rationals, {}); }

  /// Z_S. Throws RingError unless S consists of distinct primes containing 2.
  static CoefficientRing localized(std::vector<long> primes) {
    std::sort(primes.begin(), primes.end());
    if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
      throw RingError("inverted primes must be distinct");
    for (long p : primes)
      if (!is_prime(p)) throw RingError("inverted value " + std::to_string(p) + " is not a prime");
    if (!std::binary_search(primes.begin(), primes.end(), 2L))
      throw RingError("the coefficient ring must contain 1/2");
    return CoefficientRing(Kind::LocalizedIntegers, std::move(primes));
  }

  Kind kind() const { return kind_; }
  bool is_field() const { return kind_ == Kind::Rationals; }
  const std::vector<long>& inverted_primes() const { return primes_; }

  std::string str() const {
    if (is_field()) return "Q";
    std::string s = "Z[";
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (i) s += ",";
      s += "1/" + std::to_string(primes_[i]);
    }
    return s + "]";
  }
  /// DSL spelling, e.g. "Z invert 2 3".
  std::string dsl() const {
    if (is_field()) return "Q";
    std::string s = "Z invert";
    for (long p : primes_) s += " " + std::to_string(p);
    return s;
  }

  friend bool operator==(const CoefficientRing&, const CoefficientRing&) = default;

  /// Strip every inverted prime from |z|.
  mpz_class strip(mpz_class z) const {
    z = abs(z);
    if (z == 0) return z;
    for (long p : primes_)
      while (mpz_divisible_ui_p(z.get_mpz_t(), static_cast<unsigned long>(p)))
        mpz_divexact_ui(z.get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(p));
    return z;
  }

  bool contains(const Scalar& x) const {
    if (is_field()) return true;
    if (x.small()) return strip_small(std::uint64_t(x.small_den())) == 1;
    return strip(x.denominator()) == 1;
  }

  bool is_unit(const Scalar& x) const {
    if (x.is_zero()) return false;
    if (is_field()) return true;
    if (!contains(x)) return false;
    if (x.small()) {
      std::int64_t n = x.small_num();
      return strip_small(std::uint64_t(n < 0 ? -n : n)) == 1;
    }
    return strip(x.numerator()) == 1;
  }

  /// Canonical associate: 0, 1 over Q, or the S-free positive integer
  /// unit-equivalent to x in Z_S.
  Scalar canon(const Scalar& x) const {
    if (x.is_zero()) return Scalar();
    if (is_field()) return Scalar(1);
    if (x.small()) {
      std::int64_t n = x.small_num();
      return Scalar(static_cast<long long>(strip_small(std::uint64_t(n < 0 ? -n : n))));
    }
    return Scalar(strip(x.numerator()));
  }

  /// The unit u with x = u * canon(x).
  Scalar unit_part(const Scalar& x) const { return x / canon(x); }

  /// b/a when a divides b in the ring.
  std::optional<Scalar> divide(const Scalar& b, const Scalar& a) const {
    if (a.is_zero()) {
      if (b.is_zero()) return Scalar();
      return std::nullopt;
    }
    Scalar q = b / a;
    if (!contains(q)) return std::nullopt;
    return q;
  }
  bool divides(const Scalar& a, const Scalar& b) const { return divide(b, a).has_value(); }

  /// Canonical generator of the ideal (a, b).
  Scalar gcd(const Scalar& a, const Scalar& b) const {
    if (a.is_zero()) return canon(b);
    if (b.is_zero()) return canon(a);
    if (is_field()) return Scalar(1);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), canon(a).numerator().get_mpz_t(), canon(b).numerator().get_mpz_t());
    return Scalar(g);
  }

  /// Bezout data (g, s, t) with s*a + t*b = g = gcd(a, b).
  std::tuple<Scalar, Scalar, Scalar> xgcd(const Scalar& a, const Scalar& b) const {
    if (a.is_zero() && b.is_zero()) return {Scalar(), Scalar(1), Scalar()};
    if (a.is_zero()) return {canon(b), Scalar(), canon(b) / b};
    if (b.is_zero()) return {canon(a), canon(a) / a, Scalar()};
    if (is_field()) return {Scalar(1), a.inverse(), Scalar()};
    Scalar ca = canon(a), cb = canon(b);
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), ca.numerator().get_mpz_t(),
               cb.numerator().get_mpz_t());
    // s*ca + t*cb = g and ca = a / ua.
    return {Scalar(g), Scalar(s) * ca / a, Scalar(t) * cb / b};
  }

  /// Representative of c in R/(d) for an S-free positive integer d, in [0, d).
  Scalar reduce_mod(const Scalar& c, const Scalar& d) const {
    if (is_field() || is_unit(d)) return Scalar();
    mpz_class m = d.numerator();
    mpz_class num = c.numerator(), den = c.denominator(), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    mpz_class r = (num * inv) % m;
    if (r < 0) r += m;
    return Scalar(r);
  }

  /// Least prime that is not invertible.
  PrimeOrInfinity rho() const {
    if (is_field()) return {};
    long p = 2;
    while (std::binary_search(primes_.begin(), primes_.end(), p)) p = next_prime(p);
    return {p};
  }

 private:
  CoefficientRing(Kind k, std::vector<long> primes) : kind_(k), primes_(std::move(primes)) {}

  std::uint64_t strip_small(std::uint64_t v) const {
    if (v == 0) return 0;
    for (long p : primes_)
      while (v % std::uint64_t(p) == 0) v /= std::uint64_t(p);
    return v;
  }

  Kind kind_;
  std::vector<long> primes_;
};

inline PrimeOrInfinity rho(const CoefficientRing& ring) { return ring.rho(); }

inline bool is_invertible(const Scalar& x, const CoefficientRing& ring) { return ring.is_unit(x); }

inline Scalar gcd_pid(const Scalar& a, const Scalar& b, const CoefficientRing& ring) {
  return ring.gcd(a, b);
}

/// Parses "3", "-7", "2/3" into a Scalar.
inline Scalar parse_scalar(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad scalar literal: " + text);
  return Scalar(q);
}

}  // namespace mild

#endif  // MILD_COEFF_HPP
