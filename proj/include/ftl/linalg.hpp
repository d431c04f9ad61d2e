#ifndef FTL_LINALG_HPP
#define FTL_LINALG_HPP

// Dense exact linear algebra over any field type K that models FieldTraits.
// Sizes here are tiny (6x6 condition systems, DxD inversion systems), so the
// implementation favors clarity: plain Gauss-Jordan with first-nonzero pivoting.

#include <cstddef>
#include <optional>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/rational.hpp"

namespace ftl {

template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static Rational zero_like(const Rational&) { return Rational(0); }
  static Rational one_like(const Rational&) { return Rational(1); }
  static bool is_zero(const Rational& x) { return x.is_zero(); }
  static Rational inverse(const Rational& x) { return x.inverse(); }
};

template <class K>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const K& fill)
      : rows_(rows), cols_(cols), e_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw RejectedInput("Matrix: empty shape");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  const K& at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

 private:
  std::size_t rows_, cols_;
  std::vector<K> e_;
};

namespace detail {

// Reduce to RREF in place. Returns the pivot column of each pivot row.
template <class K>
std::vector<std::size_t> rref(Matrix<K>& m) {
  using T = FieldTraits<K>;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pr = rank;
    while (pr < m.rows() && T::is_zero(m.at(pr, col))) ++pr;
    if (pr == m.rows()) continue;
    if (pr != rank) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(pr, c), m.at(rank, c));
    }
    const K inv = T::inverse(m.at(rank, col));
    for (std::size_t c = col; c < m.cols(); ++c) m.at(rank, c) = m.at(rank, c) * inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank || T::is_zero(m.at(r, col))) continue;
      const K f = m.at(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        m.at(r, c) = m.at(r, c) - f * m.at(rank, c);
      }
    }
    pivot_cols.push_back(col);
    ++rank;
  }
  return pivot_cols;
}

}  // namespace detail

// Basis of the right kernel {v : M v = 0}. Empty iff M has full column rank.
template <class K>
std::vector<std::vector<K>> nullspace(const Matrix<K>& m) {
  using T = FieldTraits<K>;
  const K zero = T::zero_like(m.at(0, 0));
  const K one = T::one_like(m.at(0, 0));

  Matrix<K> a = m;
  const std::vector<std::size_t> pivots = detail::rref(a);

  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;

  std::vector<std::vector<K>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<K> v(m.cols(), zero);
    v[free] = one;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      v[pivots[r]] = zero - a.at(r, free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// One solution of M x = rhs with free variables set to zero,
// or nullopt when the system is inconsistent.
template <class K>
std::optional<std::vector<K>> solve_linear(const Matrix<K>& m, const std::vector<K>& rhs) {
  using T = FieldTraits<K>;
  if (rhs.size() != m.rows()) throw RejectedInput("solve_linear: rhs size mismatch");
  const K zero = T::zero_like(m.at(0, 0));

  Matrix<K> a(m.rows(), m.cols() + 1, zero);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) a.at(r, c) = m.at(r, c);
    a.at(r, m.cols()) = rhs[r];
  }
  std::vector<std::size_t> pivots = detail::rref(a);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;

  std::vector<K> x(m.cols(), zero);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a.at(r, m.cols());
  return x;
}

// Matrix-vector product, exact.
template <class K>
std::vector<K> mat_vec(const Matrix<K>& m, const std::vector<K>& v) {
  using T = FieldTraits<K>;
  if (v.size() != m.cols()) throw RejectedInput("mat_vec: size mismatch");
  std::vector<K> out(m.rows(), T::zero_like(m.at(0, 0)));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r] = out[r] + m.at(r, c) * v[c];
  }
  return out;
}

}  // namespace ftl

#endif
