#ifndef FTL_TOWER_HPP
#define FTL_TOWER_HPP

// Exact arithmetic in explicitly presented tower extensions of Q.
//
// A tower is an ordered list of generators g_0, ..., g_{m-1}; generator i has
// a degree d_i and a reduction rule expressing g_i^{d_i} as a Q-combination of
// monomials in g_0..g_i with all powers below their degrees.  Elements are
// coefficient vectors over the monomial basis {prod g_i^{e_i} : 0 <= e_i < d_i},
// indexed mixed-radix with g_0 varying fastest.  All arithmetic reduces to this
// canonical basis, so equality is coefficient-vector equality.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/linalg.hpp"
#include "ftl/rational.hpp"

namespace ftl {

using Exps = std::vector<int>;

struct TowerGenerator {
  std::string name;
  int degree;
  // g^degree as a sparse combination of basis monomials (full-length exponent
  // tuples; entries for later generators must be zero).
  std::vector<std::pair<Exps, Rational>> rule;
};

class Tower {
 public:
  Tower(std::string id, std::vector<TowerGenerator> gens)
      : id_(std::move(id)), gens_(std::move(gens)) {
    const std::size_t m = gens_.size();
    strides_.resize(m);
    dim_ = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (gens_[i].degree < 1) throw RejectedInput("Tower: generator degree < 1");
      strides_[i] = dim_;
      dim_ *= static_cast<std::size_t>(gens_[i].degree);
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [exps, coeff] : gens_[i].rule) {
        if (exps.size() != m) throw RejectedInput("Tower: rule exponent arity mismatch");
        for (std::size_t k = 0; k < m; ++k) {
          if (exps[k] < 0 || exps[k] >= gens_[k].degree)
            throw RejectedInput("Tower: rule exponent out of range");
          if (k > i && exps[k] != 0)
            throw RejectedInput("Tower: rule references a later generator");
        }
        (void)coeff;
      }
    }
    build_mul_table();
  }

  Tower(const Tower&) = delete;
  Tower& operator=(const Tower&) = delete;

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }
  std::size_t generator_count() const { return gens_.size(); }
  const TowerGenerator& generator(std::size_t i) const { return gens_[i]; }

  std::size_t index_of(const Exps& e) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i) idx += strides_[i] * static_cast<std::size_t>(e[i]);
    return idx;
  }

  Exps exps_of(std::size_t idx) const {
    Exps e(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      e[i] = static_cast<int>((idx / strides_[i]) % static_cast<std::size_t>(gens_[i].degree));
    }
    return e;
  }

  // Canonical form of an arbitrary monomial combination (exponents may exceed
  // the generator degrees; the reduction rules are applied to exhaustion).
  std::vector<Rational> reduce(const std::map<Exps, Rational>& raw) const {
    std::vector<Rational> out(dim_, Rational(0));
    std::map<Exps, Rational> pending(raw);
    while (!pending.empty()) {
      auto it = pending.begin();
      Exps e = it->first;
      Rational c = it->second;
      pending.erase(it);
      if (c.is_zero()) continue;
      int over = -1;
      for (int i = static_cast<int>(gens_.size()) - 1; i >= 0; --i) {
        if (e[static_cast<std::size_t>(i)] >= gens_[static_cast<std::size_t>(i)].degree) {
          over = i;
          break;
        }
      }
      if (over < 0) {
        out[index_of(e)] += c;
        continue;
      }
      const auto& g = gens_[static_cast<std::size_t>(over)];
      Exps base = e;
      base[static_cast<std::size_t>(over)] -= g.degree;
      for (const auto& [rexps, rc] : g.rule) {
        Exps ne = base;
        for (std::size_t k = 0; k < ne.size(); ++k) ne[k] += rexps[k];
        pending[ne].add_mul(c, rc);
      }
    }
    return out;
  }

  // Sparse canonical expansion of basis_i * basis_j.
  const std::vector<std::pair<std::uint32_t, Rational>>& mul_entry(std::size_t i,
                                                                   std::size_t j) const {
    return table_[i * dim_ + j];
  }

 private:
  void build_mul_table() {
    table_.resize(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      const Exps ei = exps_of(i);
      for (std::size_t j = i; j < dim_; ++j) {
        const Exps ej = exps_of(j);
        Exps prod(ei.size());
        for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = ei[k] + ej[k];
        std::map<Exps, Rational> raw;
        raw[prod] = Rational(1);
        const std::vector<Rational> red = reduce(raw);
        std::vector<std::pair<std::uint32_t, Rational>> sparse;
        for (std::size_t k = 0; k < dim_; ++k) {
          if (!red[k].is_zero()) sparse.emplace_back(static_cast<std::uint32_t>(k), red[k]);
        }
        table_[i * dim_ + j] = sparse;
        table_[j * dim_ + i] = std::move(sparse);
      }
    }
  }

  std::string id_;
  std::vector<TowerGenerator> gens_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 1;
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> table_;
};

// The three towers every computation in this library lives in.

inline const Tower& tower_Q() {
  static const Tower t("Q", {});
  return t;
}

// eps^2 = -eps - 1 (primitive cube root of unity), mu^3 = 2.
inline const Tower& tower_eps_mu() {
  static const Tower t("Q_eps_mu",
                       {TowerGenerator{"eps", 2, {{{0, 0}, Rational(-1)}, {{1, 0}, Rational(-1)}}},
                        TowerGenerator{"mu", 3, {{{0, 0}, Rational(2)}}}});
  return t;
}

// alpha^3 = 3 (real cube root), beta^6 = -beta^3 - 1 (primitive 9th root of unity).
inline const Tower& tower_alpha_beta() {
  static const Tower t("Q_alpha_beta",
                       {TowerGenerator{"alpha", 3, {{{0, 0}, Rational(3)}}},
                        TowerGenerator{"beta", 6, {{{0, 0}, Rational(-1)}, {{0, 3}, Rational(-1)}}}});
  return t;
}

inline const Tower& tower_by_id(const std::string& id) {
  if (id == "Q") return tower_Q();
  if (id == "Q_eps_mu") return tower_eps_mu();
  if (id == "Q_alpha_beta") return tower_alpha_beta();
  throw RejectedInput("unknown tower id: " + id);
}

class FieldElement {
 public:
  FieldElement(const Tower& t, Rational scalar) : tower_(&t), c_(t.dim(), Rational(0)) {
    c_[0] = std::move(scalar);
  }

  static FieldElement zero(const Tower& t) { return FieldElement(t, Rational(0)); }
  static FieldElement one(const Tower& t) { return FieldElement(t, Rational(1)); }

  static FieldElement from_coeffs(const Tower& t, std::vector<Rational> coeffs) {
    if (coeffs.size() != t.dim()) throw RejectedInput("FieldElement: coefficient count mismatch");
    FieldElement x(t, Rational(0));
    x.c_ = std::move(coeffs);
    return x;
  }

  // g_i^power, any non-negative power (reduced to canonical form).
  static FieldElement generator_power(const Tower& t, std::size_t i, int power) {
    if (i >= t.generator_count()) throw RejectedInput("FieldElement: generator index");
    if (power < 0) throw RejectedInput("FieldElement: negative power");
    Exps e(t.generator_count(), 0);
    e[i] = power;
    std::map<Exps, Rational> raw;
    raw[e] = Rational(1);
    return from_coeffs(t, t.reduce(raw));
  }

  const Tower& tower() const { return *tower_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& coeff(std::size_t i) const { return c_[i]; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }

  bool is_one() const {
    if (!c_[0].is_one()) return false;
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (!c_[i].is_zero()) return false;
    return true;
  }

  bool is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (!c_[i].is_zero()) return false;
    return true;
  }

  const Rational& rational_part() const { return c_[0]; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.require_same_tower(b);
    FieldElement r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }

  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    a.require_same_tower(b);
    FieldElement r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }

  FieldElement operator-() const {
    FieldElement r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.require_same_tower(b);
    FieldElement r = FieldElement::zero(*a.tower_);
    const std::size_t d = a.tower_->dim();
    for (std::size_t i = 0; i < d; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (b.c_[j].is_zero()) continue;
        const Rational ab = a.c_[i] * b.c_[j];
        for (const auto& [k, coeff] : a.tower_->mul_entry(i, j)) {
          r.c_[k].add_mul(ab, coeff);
        }
      }
    }
    return r;
  }

  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  FieldElement scaled(const Rational& s) const {
    FieldElement r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
  }

  FieldElement pow(unsigned long n) const {
    FieldElement acc = FieldElement::one(*tower_);
    FieldElement base = *this;
    while (n) {
      if (n & 1UL) acc *= base;
      base *= base;
      n >>= 1UL;
    }
    return acc;
  }

  // Multiplicative inverse, computed by solving the DxD rational linear system
  // of the multiplication-by-this matrix against the unit vector.
  FieldElement inverse() const {
    if (is_zero()) throw DivisionByZero("FieldElement: inverse of zero");
    const std::size_t d = tower_->dim();
    Matrix<Rational> m(d, d, Rational(0));
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) {
        if (c_[i].is_zero()) continue;
        for (const auto& [k, coeff] : tower_->mul_entry(i, j)) {
          m.at(k, j).add_mul(c_[i], coeff);
        }
      }
    }
    std::vector<Rational> rhs(d, Rational(0));
    rhs[0] = Rational(1);
    auto sol = solve_linear(m, rhs);
    if (!sol) throw InternalError("FieldElement: singular multiplication matrix (non-field tower?)");
    FieldElement r = FieldElement::zero(*tower_);
    r.c_ = std::move(*sol);
    return r;
  }

  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return a * b.inverse();
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    a.require_same_tower(b);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  // Total order on canonical coefficient vectors (lexicographic); used for
  // deterministic catalog ordering and exact deduplication.
  int cmp(const FieldElement& o) const {
    require_same_tower(o);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const int s = c_[i].cmp(o.c_[i]);
      if (s != 0) return s;
    }
    return 0;
  }
  friend bool operator<(const FieldElement& a, const FieldElement& b) { return a.cmp(b) < 0; }

  std::string to_string() const {
    std::string s;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!first) s += " + ";
      s += c_[i].to_string();
      const Exps e = tower_->exps_of(i);
      for (std::size_t g = 0; g < e.size(); ++g) {
        if (e[g] == 0) continue;
        s += "*" + tower_->generator(g).name;
        if (e[g] > 1) s += "^" + std::to_string(e[g]);
      }
      first = false;
    }
    return first ? "0" : s;
  }

 private:
  void require_same_tower(const FieldElement& o) const {
    if (tower_ != o.tower_)
      throw RejectedInput("FieldElement: tower mismatch (" + tower_->id() + " vs " +
                          o.tower_->id() + ")");
  }

  const Tower* tower_;
  std::vector<Rational> c_;
};

template <>
struct FieldTraits<FieldElement> {
  static FieldElement zero_like(const FieldElement& x) { return FieldElement::zero(x.tower()); }
  static FieldElement one_like(const FieldElement& x) { return FieldElement::one(x.tower()); }
  static bool is_zero(const FieldElement& x) { return x.is_zero(); }
  static FieldElement inverse(const FieldElement& x) { return x.inverse(); }
};

// Named generators, for readable construction of catalog fixtures.

inline FieldElement fe_eps(int power = 1) {
  return FieldElement::generator_power(tower_eps_mu(), 0, power);
}
inline FieldElement fe_mu(int power = 1) {
  return FieldElement::generator_power(tower_eps_mu(), 1, power);
}
inline FieldElement fe_alpha(int power = 1) {
  return FieldElement::generator_power(tower_alpha_beta(), 0, power);
}
inline FieldElement fe_beta(int power = 1) {
  return FieldElement::generator_power(tower_alpha_beta(), 1, power);
}
inline FieldElement fe_q(const Tower& t, long n) { return FieldElement(t, Rational(n)); }

// The primitive cube root of unity inside a given tower: the dedicated
// generator in Q_eps_mu, the cube of the ninth-root generator in
// Q_alpha_beta.  Not available over the rationals.
inline FieldElement fe_eps_in(const Tower& t) {
  if (t.id() == "Q_eps_mu") return FieldElement::generator_power(t, 0, 1);
  if (t.id() == "Q_alpha_beta") return FieldElement::generator_power(t, 1, 3);
  throw RejectedInput("fe_eps_in: tower has no cube root of unity");
}

}  // namespace ftl

#endif
