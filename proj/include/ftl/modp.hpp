#ifndef FTL_MODP_HPP
#define FTL_MODP_HPP

// One-sided zero screen for tower elements.
//
// Elements reduce coordinate-wise mod a fixed 62-bit prime p; products are
// taken in the reduced structure-constant algebra, and a fixed random linear
// functional lambda compresses results to a single residue.  A nonzero residue
// certifies the exact value is nonzero (the reduction maps are ring/linear
// maps), so the expensive exact path only runs on the rare "maybe zero" hits.
// Zero residues prove nothing and must always be confirmed exactly.
//
// Everything is seeded with fixed constants: results are identical across
// runs and thread counts.

#include <gmp.h>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/tower.hpp"

namespace ftl {

namespace detail {

inline std::uint64_t screen_prime() {
  static const std::uint64_t p = [] {
    mpz_t z;
    mpz_init_set_ui(z, 1);
    mpz_mul_2exp(z, z, 62);
    do {
      mpz_sub_ui(z, z, 1);
    } while (mpz_probab_prime_p(z, 40) == 0);
    const std::uint64_t r = mpz_get_ui(z);
    mpz_clear(z);
    return r;
  }();
  return p;
}

}  // namespace detail

class ZeroScreen {
 public:
  // A reduced element; ok == false means some denominator vanished mod p and
  // the element must be handled exactly.
  struct Red {
    std::vector<std::uint64_t> v;
    bool ok = false;
  };

  explicit ZeroScreen(const Tower& t) : tower_(&t), p_(detail::screen_prime()) {
    const std::size_t d = t.dim();
    table_.resize(d * d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        for (const auto& [k, c] : t.mul_entry(i, j)) {
          std::uint64_t cm = 0;
          if (!c.mod_uint(p_, cm)) throw InternalError("ZeroScreen: structure constant hit p");
          if (cm != 0) table_[i * d + j].push_back({k, cm});
        }
      }
    }
    std::mt19937_64 rng(0x46544c2d7363726eULL);
    lambda_.resize(d);
    for (auto& l : lambda_) l = rng() % p_;
    // bilinear_[i*d+j] = lambda(e_i * e_j)
    bilinear_.assign(d * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        std::uint64_t s = 0;
        for (const auto& [k, cm] : table_[i * d + j]) {
          s = (s + detail::mulmod_u64(cm, lambda_[k], p_)) % p_;
        }
        bilinear_[i * d + j] = s;
      }
    }
  }

  std::uint64_t prime() const { return p_; }
  const Tower& tower() const { return *tower_; }

  Red reduce(const FieldElement& x) const {
    Red r;
    r.v.resize(tower_->dim());
    for (std::size_t i = 0; i < r.v.size(); ++i) {
      if (!x.coeffs()[i].mod_uint(p_, r.v[i])) return r;  // ok stays false
    }
    r.ok = true;
    return r;
  }

  Red mul(const Red& a, const Red& b) const {
    const std::size_t d = tower_->dim();
    Red r;
    r.ok = a.ok && b.ok;
    r.v.assign(d, 0);
    if (!r.ok) return r;
    for (std::size_t i = 0; i < d; ++i) {
      if (a.v[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (b.v[j] == 0) continue;
        const std::uint64_t ab = detail::mulmod_u64(a.v[i], b.v[j], p_);
        for (const auto& [k, cm] : table_[i * d + j]) {
          r.v[k] = (r.v[k] + detail::mulmod_u64(ab, cm, p_)) % p_;
        }
      }
    }
    return r;
  }

  std::uint64_t lambda_of(const Red& r) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < r.v.size(); ++i) {
      s = (s + detail::mulmod_u64(r.v[i], lambda_[i], p_)) % p_;
    }
    return s;
  }

  // Folds one argument of (a, b) -> lambda(a * b): with w = fold(a),
  // lambda(a * b) == dot(w, b.v).  Lets a fixed a pair against many b cheaply.
  std::optional<std::vector<std::uint64_t>> fold(const Red& a) const {
    if (!a.ok) return std::nullopt;
    const std::size_t d = tower_->dim();
    std::vector<std::uint64_t> w(d, 0);
    for (std::size_t j = 0; j < d; ++j) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (a.v[i] != 0) s = (s + detail::mulmod_u64(a.v[i], bilinear_[i * d + j], p_)) % p_;
      }
      w[j] = s;
    }
    return w;
  }

  std::uint64_t folded_value(const std::vector<std::uint64_t>& w, const Red& b) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (b.v[j] != 0) s = (s + detail::mulmod_u64(w[j], b.v[j], p_)) % p_;
    }
    return s;
  }

 private:
  const Tower* tower_;
  std::uint64_t p_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> table_;
  std::vector<std::uint64_t> lambda_;
  std::vector<std::uint64_t> bilinear_;
};

}  // namespace ftl

#endif
