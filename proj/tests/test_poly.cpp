#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ftl/homform.hpp"
#include "ftl/tower.hpp"
#include "ftl/unipoly.hpp"

using namespace ftl;

namespace {

FieldElement random_element(const Tower& t, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 7);
  std::vector<Rational> c;
  c.reserve(t.dim());
  for (std::size_t i = 0; i < t.dim(); ++i) c.emplace_back(num(rng), den(rng));
  return FieldElement::from_coeffs(t, c);
}

UniPoly random_poly(const Tower& t, int deg, std::mt19937_64& rng) {
  std::vector<FieldElement> c;
  for (int i = 0; i <= deg; ++i) c.push_back(random_element(t, rng));
  if (c.back().is_zero()) c.back() = FieldElement::one(t);
  return UniPoly(t, std::move(c));
}

}  // namespace

TEST_CASE("univariate evaluation by Horner") {
  const Tower& t = tower_eps_mu();
  // 3x(x^3 - 1728) = 3x^4 - 5184x
  UniPoly p(t, {FieldElement::zero(t), fe_q(t, -5184), FieldElement::zero(t),
                FieldElement::zero(t), fe_q(t, 3)});
  // 12^3 = 1728, so x = 12 is a root
  REQUIRE(Rational(12) * Rational(12) * Rational(12) == Rational(1728));
  CHECK(p.eval(fe_q(t, 12)).is_zero());
  CHECK(p.eval(FieldElement::zero(t)).is_zero());
  CHECK(p.eval(fe_q(t, 1)) == fe_q(t, 3 - 5184));

  UniPoly zero(t);
  CHECK(zero.eval(fe_q(t, 41)).is_zero());
  CHECK(zero.is_zero());
  CHECK(zero.degree() == -1);
}

TEST_CASE("polynomial ring operations") {
  const Tower& t = tower_Q();
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 40; ++iter) {
    UniPoly a = random_poly(t, 5, rng);
    UniPoly b = random_poly(t, 4, rng);
    UniPoly c = random_poly(t, 3, rng);
    CHECK(a * b == b * a);
    CHECK((a + b) * c == a * c + b * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + (-a) == UniPoly(t));
    // evaluation is a ring homomorphism
    FieldElement x = random_element(t, rng);
    CHECK((a * b).eval(x) == a.eval(x) * b.eval(x));
    CHECK((a + b).eval(x) == a.eval(x) + b.eval(x));
  }
  // degree bookkeeping and trimming
  UniPoly q(t, {fe_q(t, 1), fe_q(t, 2), FieldElement::zero(t)});
  CHECK(q.degree() == 1);
  CHECK(q.pow(3).degree() == 3);
  CHECK(q.shifted(4).degree() == 5);
}

TEST_CASE("root multiplicity by synthetic division") {
  const Tower& t = tower_Q();
  const FieldElement one = fe_q(t, 1);
  const FieldElement minus_two = fe_q(t, -2);
  // (x-1)^3 (x+2)
  UniPoly p = UniPoly::linear_root(one).pow(3) * UniPoly::linear_root(minus_two);
  CHECK(root_multiplicity(p, one) == 3);
  CHECK(root_multiplicity(p, minus_two) == 1);
  CHECK(root_multiplicity(p, fe_q(t, 5)) == 0);
  CHECK_THROWS_AS(root_multiplicity(UniPoly(t), one), ContractViolation);
}

TEST_CASE("deflation removes an exact linear power") {
  const Tower& t = tower_eps_mu();
  const FieldElement r = fe_eps();
  const FieldElement s = fe_mu();
  UniPoly p = UniPoly::linear_root(r).pow(3) * UniPoly::linear_root(s);
  UniPoly q = deflate(p, r, 3);
  CHECK(q == UniPoly::linear_root(s));
  CHECK_THROWS_AS(deflate(p, r, 4), ContractViolation);
  CHECK(deflate(p, r, 0) == p);
}

TEST_CASE("deflate inverts multiplication by a linear power") {
  const Tower& ab = tower_alpha_beta();
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 25; ++iter) {
    UniPoly q = random_poly(ab, 3, rng);
    FieldElement r = random_element(ab, rng);
    int k = static_cast<int>(rng() % 5);
    UniPoly p = UniPoly::linear_root(r).pow(static_cast<unsigned>(k)) * q;
    CHECK(deflate(p, r, k) == q);
    CHECK(root_multiplicity(p, r) == k + root_multiplicity(q, r));
  }
}

TEST_CASE("cubic form evaluation") {
  const Tower& ab = tower_alpha_beta();
  HomForm F = fermat_cubic(ab);
  CHECK(F.degree() == 3);

  // flex point [1:-1:0]
  CHECK(F.eval(fe_q(ab, 1), fe_q(ab, -1), FieldElement::zero(ab)).is_zero());

  // [1 : b : b^2] where b = beta: membership reduces to 1 + b^3 + b^6 = 0,
  // and b^6 = -b^3 - 1 by the defining relation.  Check the relation first.
  const FieldElement b = fe_beta(1);
  CHECK(b.pow(6) == -b.pow(3) - FieldElement::one(ab));
  CHECK((FieldElement::one(ab) + b.pow(3) + b.pow(6)).is_zero());
  CHECK(F.eval(fe_q(ab, 1), b, b.pow(2)).is_zero());

  // a non-member
  CHECK_FALSE(F.eval(fe_q(ab, 1), fe_q(ab, 1), fe_q(ab, 1)).is_zero());
}

TEST_CASE("form evaluation is homogeneous under scaling") {
  const Tower& em = tower_eps_mu();
  std::mt19937_64 rng(99);
  HomForm F = fermat_cubic(em);
  HomForm S = sextactic_form(em);
  for (int iter = 0; iter < 30; ++iter) {
    FieldElement x = random_element(em, rng), y = random_element(em, rng),
                 z = random_element(em, rng);
    FieldElement lam = random_element(em, rng);
    if (lam.is_zero()) lam = FieldElement::one(em);
    CHECK(F.eval(lam * x, lam * y, lam * z) == lam.pow(3) * F.eval(x, y, z));
    CHECK(S.eval(lam * x, lam * y, lam * z) == lam.pow(9) * S.eval(x, y, z));
  }
}

TEST_CASE("partial derivatives satisfy the Euler identity") {
  const Tower& em = tower_eps_mu();
  std::mt19937_64 rng(17);
  HomForm F = fermat_cubic(em);
  HomForm S = sextactic_form(em);
  for (const HomForm* f : {&F, &S}) {
    for (int iter = 0; iter < 10; ++iter) {
      FieldElement x = random_element(em, rng), y = random_element(em, rng),
                   z = random_element(em, rng);
      FieldElement lhs = x * f->partial(0).eval(x, y, z) + y * f->partial(1).eval(x, y, z) +
                         z * f->partial(2).eval(x, y, z);
      CHECK(lhs == fe_q(em, f->degree()) * f->eval(x, y, z));
    }
  }
  CHECK(F.partial(0) == HomForm::from_terms(em, 2, {{{2, 0, 0}, fe_q(em, 3)}}));
}

TEST_CASE("degree-9 product form vanishes only where coordinate cubes agree") {
  const Tower& ab = tower_alpha_beta();
  HomForm S = sextactic_form(ab);
  CHECK(S.degree() == 9);
  // x^3 = y^3 makes the first factor vanish
  CHECK(S.eval(fe_q(ab, 2), fe_q(ab, 2), fe_q(ab, 5)).is_zero());
  const FieldElement eps = fe_eps_in(ab);
  CHECK((eps * fe_q(ab, 2)).pow(3) == fe_q(ab, 8));
  CHECK(S.eval(fe_q(ab, 2), eps * fe_q(ab, 2), fe_q(ab, 5)).is_zero());
  CHECK_FALSE(S.eval(fe_q(ab, 1), fe_q(ab, 2), fe_q(ab, 3)).is_zero());
}

TEST_CASE("degree-24 pair form equals its displayed factorization") {
  const Tower& t = tower_Q();
  for (auto [va, vb] : {std::pair<int, int>{0, 1}, {0, 2}, {1, 2}}) {
    HomForm q = pair_form_q(t, va, vb);
    auto f = pair_form_q_factors(t, va, vb);
    CHECK(q.degree() == 24);
    CHECK(f[0].degree() + f[1].degree() + f[2].degree() == 24);
    CHECK(f[0] * f[1] * f[2] == q);
  }
  CHECK_THROWS_AS(pair_form_q(t, 1, 1), RejectedInput);
}

TEST_CASE("restriction along coordinate polynomials") {
  const Tower& em = tower_eps_mu();
  HomForm F = fermat_cubic(em);
  // along the line (x, y, z) = (1, -1, t): F restricts to t^3
  UniPoly one = UniPoly::constant(fe_q(em, 1));
  UniPoly minus_one = UniPoly::constant(fe_q(em, -1));
  UniPoly tpoly(em, {FieldElement::zero(em), FieldElement::one(em)});
  UniPoly r = F.restrict_to(one, minus_one, tpoly);
  CHECK(r == tpoly.pow(3));

  // restriction commutes with evaluation
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 10; ++iter) {
    UniPoly px = random_poly(em, 2, rng), py = random_poly(em, 2, rng),
            pz = random_poly(em, 2, rng);
    FieldElement t0 = random_element(em, rng);
    CHECK(F.restrict_to(px, py, pz).eval(t0) ==
          F.eval(px.eval(t0), py.eval(t0), pz.eval(t0)));
  }
}

TEST_CASE("form input validation") {
  const Tower& t = tower_Q();
  HomForm f(t, 3);
  CHECK_THROWS_AS(f.add_term({1, 1, 0}, fe_q(t, 1)), RejectedInput);
  CHECK_THROWS_AS(f.add_term({-1, 2, 2}, fe_q(t, 1)), RejectedInput);
  const Tower& em = tower_eps_mu();
  CHECK_THROWS_AS(f.add_term({1, 1, 1}, fe_q(em, 1)), RejectedInput);
  CHECK_THROWS_AS(fermat_cubic(t) + coordinate_triangle(em), RejectedInput);
  CHECK_THROWS_AS(fermat_cubic(t).eval(fe_q(em, 1), fe_q(em, 1), fe_q(em, 1)), RejectedInput);
}
