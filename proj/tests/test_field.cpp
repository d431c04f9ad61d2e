#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "ftl/linalg.hpp"
#include "ftl/rational.hpp"
#include "ftl/tower.hpp"

using namespace ftl;

namespace {

FieldElement random_element(const Tower& t, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 9);
  std::vector<Rational> c;
  c.reserve(t.dim());
  for (std::size_t i = 0; i < t.dim(); ++i) c.emplace_back(num(rng), den(rng));
  return FieldElement::from_coeffs(t, std::move(c));
}

}  // namespace

TEST_CASE("rational canonical form and arithmetic") {
  Rational a(6, 4);
  CHECK(a.num_string() == "3");
  CHECK(a.den_string() == "2");
  CHECK(Rational(-6, 4) == Rational(-3, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
  CHECK(Rational(5, 7).inverse() == Rational(7, 5));
  CHECK_THROWS_AS(Rational(1, 0), DivisionByZero);
  CHECK_THROWS_AS(Rational(0).inverse(), DivisionByZero);
  CHECK(Rational::from_strings("123456789012345678901234567890", "2").num_string() ==
        "61728394506172839450617283945");
}

TEST_CASE("rational mod-p image") {
  const std::uint64_t p = 1000000007ULL;
  std::uint64_t img = 0;
  REQUIRE(Rational(1, 2).mod_uint(p, img));
  CHECK(detail::mulmod_u64(img, 2, p) == 1);
  REQUIRE(Rational(-1).mod_uint(p, img));
  CHECK(img == p - 1);
  CHECK_FALSE(Rational(1, 1000000007L).mod_uint(p, img));
}

TEST_CASE("tower dimensions") {
  CHECK(tower_Q().dim() == 1);
  CHECK(tower_eps_mu().dim() == 6);
  CHECK(tower_alpha_beta().dim() == 18);
}

TEST_CASE("field_mul reduces by the tower rules") {
  // beta^3 * beta^3 -> beta^6 = -beta^3 - 1
  const FieldElement b3 = fe_beta(3);
  CHECK(b3 * b3 == -fe_beta(3) - FieldElement::one(tower_alpha_beta()));

  // alpha * alpha^2 -> 3
  CHECK(fe_alpha() * fe_alpha(2) == fe_q(tower_alpha_beta(), 3));

  // beta^9 = 1 (beta is a primitive 9th root of unity)
  CHECK(fe_beta().pow(9).is_one());

  // eps^2 + eps + 1 = 0
  CHECK((fe_eps(2) + fe_eps() + FieldElement::one(tower_eps_mu())).is_zero());

  // mu^3 = 2
  CHECK(fe_mu().pow(3) == fe_q(tower_eps_mu(), 2));
}

TEST_CASE("gamma = alpha + beta satisfies its degree-18 identity") {
  const FieldElement gamma = fe_alpha() + fe_beta();
  const auto& T = tower_alpha_beta();
  const FieldElement val = gamma.pow(18) - gamma.pow(15).scaled(Rational(15)) +
                           gamma.pow(12).scaled(Rational(177)) -
                           gamma.pow(9).scaled(Rational(578)) +
                           gamma.pow(6).scaled(Rational(6747)) +
                           gamma.pow(3).scaled(Rational(642)) + fe_q(T, 343);
  CHECK(val.is_zero());
}

TEST_CASE("field_inv") {
  CHECK(FieldElement::one(tower_alpha_beta()).inverse().is_one());

  // Oracle first: beta * (-beta^5 - beta^2) = -beta^6 - beta^3 = 1.
  const FieldElement claimed_beta_inv = -fe_beta(5) - fe_beta(2);
  REQUIRE((fe_beta() * claimed_beta_inv).is_one());
  CHECK(fe_beta().inverse() == claimed_beta_inv);

  // Oracle: alpha * alpha^2/3 = 3/3 = 1.
  const FieldElement claimed_alpha_inv = fe_alpha(2).scaled(Rational(1, 3));
  REQUIRE((fe_alpha() * claimed_alpha_inv).is_one());
  CHECK(fe_alpha().inverse() == claimed_alpha_inv);

  CHECK_THROWS_AS(FieldElement::zero(tower_alpha_beta()).inverse(), DivisionByZero);
}

TEST_CASE("tower mismatch is rejected") {
  CHECK_THROWS_AS(fe_eps() + fe_beta(), RejectedInput);
  CHECK_THROWS_AS(fe_eps() * fe_beta(), RejectedInput);
}

TEST_CASE("field axioms on random elements") {
  for (const Tower* t : {&tower_eps_mu(), &tower_alpha_beta()}) {
    std::mt19937_64 rng(20240917);
    int inverted = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const FieldElement a = random_element(*t, rng);
      const FieldElement b = random_element(*t, rng);
      const FieldElement c = random_element(*t, rng);
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE(a * (b + c) == a * b + a * c);
      REQUIRE(a * b == b * a);
      REQUIRE((a + (-a)).is_zero());
      if (!a.is_zero()) {
        REQUIRE((a * a.inverse()).is_one());
        ++inverted;
      }
    }
    REQUIRE(inverted >= 199);  // all-zero random vectors are vanishingly rare
  }
}

TEST_CASE("canonical zero has an all-zero coefficient vector") {
  std::mt19937_64 rng(7);
  const FieldElement a = random_element(tower_alpha_beta(), rng);
  const FieldElement z = a + (-a);
  for (const auto& coeff : z.coeffs()) CHECK(coeff.is_zero());
}

TEST_CASE("nullspace basics") {
  const Rational zero(0), one(1);

  Matrix<Rational> id6(6, 6, zero);
  for (std::size_t i = 0; i < 6; ++i) id6.at(i, i) = one;
  CHECK(nullspace(id6).empty());

  Matrix<Rational> z13(1, 3, zero);
  const auto basis = nullspace(z13);
  REQUIRE(basis.size() == 3);
  for (const auto& v : basis) {
    const auto mv = mat_vec(z13, v);
    for (const auto& x : mv) CHECK(x.is_zero());
  }
}

TEST_CASE("nullspace vectors satisfy Mv = 0 and are permutation-stable") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> entry(-5, 5);
  const auto& T = tower_eps_mu();

  // A 4x6 random matrix over the tower: kernel dimension >= 2.
  Matrix<FieldElement> m(4, 6, FieldElement::zero(T));
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 6; ++c) m.at(r, c) = random_element(T, rng);

  const auto kernel = nullspace(m);
  REQUIRE(kernel.size() == 2);
  for (const auto& v : kernel) {
    for (const auto& x : mat_vec(m, v)) REQUIRE(x.is_zero());
  }

  // Row-permuted system spans the same kernel: mutual membership via solve.
  Matrix<FieldElement> mp(4, 6, FieldElement::zero(T));
  const std::size_t perm[4] = {2, 0, 3, 1};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 6; ++c) mp.at(r, c) = m.at(perm[r], c);
  const auto kernel_p = nullspace(mp);
  REQUIRE(kernel_p.size() == kernel.size());

  auto in_span = [&](const std::vector<FieldElement>& v,
                     const std::vector<std::vector<FieldElement>>& span) {
    Matrix<FieldElement> cols(v.size(), span.size(), FieldElement::zero(T));
    for (std::size_t c = 0; c < span.size(); ++c)
      for (std::size_t r = 0; r < v.size(); ++r) cols.at(r, c) = span[c][r];
    return solve_linear(cols, v).has_value();
  };
  for (const auto& v : kernel) REQUIRE(in_span(v, kernel_p));
  for (const auto& v : kernel_p) REQUIRE(in_span(v, kernel));
}

TEST_CASE("solve_linear detects inconsistency") {
  Matrix<Rational> m(2, 1, Rational(1));
  std::vector<Rational> rhs{Rational(1), Rational(2)};
  CHECK_FALSE(solve_linear(m, rhs).has_value());
  rhs[1] = Rational(1);
  auto sol = solve_linear(m, rhs);
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == Rational(1));
}
