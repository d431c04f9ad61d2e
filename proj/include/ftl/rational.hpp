#ifndef FTL_RATIONAL_HPP
#define FTL_RATIONAL_HPP

// Arbitrary-precision rationals on top of GMP's mpq layer.
// Values are always canonical: positive denominator, gcd(num, den) = 1.

#include <gmp.h>

#include <cstdint>
#include <string>
#include <utility>

#include "ftl/errors.hpp"

namespace ftl {

class Rational {
 public:
  Rational() { mpq_init(q_); }

  Rational(long num) {  // NOLINT: implicit by design, mirrors integer literals
    mpq_init(q_);
    mpq_set_si(q_, num, 1);
  }

  Rational(long num, long den) {
    if (den == 0) throw DivisionByZero("Rational: zero denominator");
    mpq_init(q_);
    mpq_set_si(q_, num, 1);
    mpq_t d;
    mpq_init(d);
    mpq_set_si(d, den, 1);
    mpq_div(q_, q_, d);
    mpq_clear(d);
  }

  // Decimal strings; den must be nonzero.
  static Rational from_strings(const std::string& num, const std::string& den) {
    Rational r;
    mpz_t n, d;
    mpz_init(n);
    mpz_init(d);
    if (mpz_set_str(n, num.c_str(), 10) != 0 || mpz_set_str(d, den.c_str(), 10) != 0) {
      mpz_clear(n);
      mpz_clear(d);
      throw RejectedInput("Rational: malformed decimal string");
    }
    if (mpz_sgn(d) == 0) {
      mpz_clear(n);
      mpz_clear(d);
      throw DivisionByZero("Rational: zero denominator");
    }
    mpq_set_num(r.q_, n);
    mpq_set_den(r.q_, d);
    mpq_canonicalize(r.q_);
    mpz_clear(n);
    mpz_clear(d);
    return r;
  }

  Rational(const Rational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }

  Rational(Rational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }

  Rational& operator=(const Rational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }

  Rational& operator=(Rational&& o) noexcept {
    if (this != &o) mpq_swap(q_, o.q_);
    return *this;
  }

  ~Rational() { mpq_clear(q_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    Rational r;
    mpq_add(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    Rational r;
    mpq_sub(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    mpq_mul(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DivisionByZero("Rational: division by zero");
    Rational r;
    mpq_div(r.q_, a.q_, b.q_);
    return r;
  }
  Rational operator-() const {
    Rational r;
    mpq_neg(r.q_, q_);
    return r;
  }

  Rational& operator+=(const Rational& o) {
    mpq_add(q_, q_, o.q_);
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    mpq_sub(q_, q_, o.q_);
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    mpq_mul(q_, q_, o.q_);
    return *this;
  }

  // a += b*c without a temporary on the caller side.
  void add_mul(const Rational& b, const Rational& c) {
    Rational t;
    mpq_mul(t.q_, b.q_, c.q_);
    mpq_add(q_, q_, t.q_);
  }

  Rational inverse() const {
    if (is_zero()) throw DivisionByZero("Rational: inverse of zero");
    Rational r;
    mpq_inv(r.q_, q_);
    return r;
  }

  bool is_zero() const { return mpq_sgn(q_) == 0; }
  bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
  int sgn() const { return mpq_sgn(q_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.q_, b.q_) != 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return mpq_cmp(a.q_, b.q_) < 0;
  }

  // Three-way compare on the exact value.
  int cmp(const Rational& o) const { return mpq_cmp(q_, o.q_); }

  std::string num_string() const { return mpz_to_string(mpq_numref(q_)); }
  std::string den_string() const { return mpz_to_string(mpq_denref(q_)); }

  std::string to_string() const {
    std::string s = num_string();
    if (mpz_cmp_ui(mpq_denref(q_), 1) != 0) s += "/" + den_string();
    return s;
  }

  // Image in Z/p, for p prime and not dividing the denominator.
  // Returns false when the denominator vanishes mod p.
  bool mod_uint(std::uint64_t p, std::uint64_t& out) const;

  const mpq_t& raw() const { return q_; }

 private:
  static std::string mpz_to_string(const mpz_t z) {
    char* s = mpz_get_str(nullptr, 10, z);
    std::string out(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, out.size() + 1);
    return out;
  }

  mpq_t q_;
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, p);
    a = mulmod_u64(a, a, p);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

inline bool Rational::mod_uint(std::uint64_t p, std::uint64_t& out) const {
  const std::uint64_t dm = mpz_fdiv_ui(mpq_denref(q_), p);
  if (dm == 0) return false;
  const std::uint64_t nm = mpz_fdiv_ui(mpq_numref(q_), p);
  // Fermat inverse; p is prime throughout this library.
  out = detail::mulmod_u64(nm, detail::powmod_u64(dm, p - 2, p), p);
  return true;
}

}  // namespace ftl

#endif
