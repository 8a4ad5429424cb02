#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tenttile/numberfield.hpp"

using namespace tenttile;

TEST_CASE("registry rows") {
  const auto& r1 = registry_lookup(1);
  CHECK(r1.minpoly.coeffs == std::vector<long>{-1, 1, -2, 1});
  CHECK(r1.approx_value == doctest::Approx(1.75488));
  CHECK(r1.exponent == 3);
  CHECK(r1.partner == -1);

  const auto& rm4 = registry_lookup(-4);
  CHECK(rm4.minpoly.coeffs == std::vector<long>{1, -4, 6, -5, 1});
  CHECK(rm4.approx_value == doctest::Approx(3.62966));

  const auto& r0 = registry_lookup(0);
  CHECK_FALSE(r0.has_tent_tile);

  CHECK_THROWS_AS(registry_lookup(6), std::out_of_range);
  CHECK(registry_indices().size() == 11);
  CHECK(registry_unit_indices().size() == 10);
}

TEST_CASE("unit records have constant coefficient +-1") {
  for (int i : registry_unit_indices()) {
    long c0 = registry_lookup(i).minpoly.coeffs[0];
    CHECK((c0 == 1 || c0 == -1));
  }
}

TEST_CASE("dominant roots match the table values") {
  for (int i : registry_indices()) {
    const auto& rec = registry_lookup(i);
    QI dom = field_for(i).dominant(64);
    CHECK(dom.to_double() == doctest::Approx(rec.approx_value).epsilon(2e-5));
  }
}

TEST_CASE("field arithmetic: unit inverse and beta identity") {
  // alpha * alpha^-1 = 1 in Q(alpha_3)
  FieldElement a3 = FieldElement::generator(3);
  CHECK(a3 * a3.inverse() == FieldElement::one(3));

  // (alpha - 1) * beta = alpha in Q(alpha_1)
  FieldElement a1 = FieldElement::generator(1);
  FieldElement b1 = beta_of(registry_lookup(1));
  CHECK((a1 - FieldElement::one(1)) * b1 == a1);

  // alpha_5^3 - alpha_5 - 1 = 0
  FieldElement a5 = FieldElement::generator(5);
  CHECK((a5.pow(3) - a5 - FieldElement::one(5)).is_zero());
}

TEST_CASE("field_mul commutative/associative and inverse roundtrip") {
  std::mt19937 rng(7);
  auto rnd = [&](int id) {
    int n = field_for(id).degree();
    std::vector<Q> c(n);
    for (auto& x : c) {
      long num = static_cast<long>(rng() % 11) - 5;
      long den = 1 + static_cast<long>(rng() % 4);
      x = Q(num, den);
      x.canonicalize();
    }
    return FieldElement(id, c);
  };
  for (int id : {1, -4, 5}) {
    for (int t = 0; t < 25; ++t) {
      FieldElement a = rnd(id), b = rnd(id), c = rnd(id);
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      if (!a.is_zero()) CHECK(a * a.inverse() == FieldElement::one(id));
    }
  }
}

TEST_CASE("beta minimal polynomial equals the partner row") {
  for (int i : registry_unit_indices()) {
    FieldElement b = beta_of(registry_lookup(i));
    QPoly cp = element_charpoly(b);
    QPoly expected = zp_to_qp(zp_from_longs(registry_lookup(-i).minpoly.coeffs));
    CHECK(cp == expected);
  }
}

TEST_CASE("beta of beta is alpha, exactly, for all ten units") {
  for (int i : registry_unit_indices()) {
    FieldElement alpha = FieldElement::generator(i);
    FieldElement b = beta_of(registry_lookup(i));
    FieldElement bb = b * (b - FieldElement::one(i)).inverse();
    CHECK(bb == alpha);
  }
}

TEST_CASE("table of exponents verifies exactly") {
  for (int i : registry_unit_indices()) CHECK(verify_dependency(registry_lookup(i)));
  // spot checks named explicitly
  CHECK(verify_dependency(registry_lookup(4)));   // alpha^4 = beta
  CHECK(verify_dependency(registry_lookup(1)));   // alpha^3 = beta^2
  CHECK(verify_dependency(registry_lookup(-2)));  // alpha = beta^2
}

TEST_CASE("sign at dominant root") {
  FieldElement a1 = FieldElement::generator(1);
  CHECK(sign_at_dominant_root(a1 - FieldElement::one(1)) == 1);  // alpha > 1
  CHECK(sign_at_dominant_root(FieldElement::zero(1)) == 0);
  // beta - alpha > 0 for i=1 (beta ~ 2.32 > alpha ~ 1.75)
  FieldElement b1 = beta_of(registry_lookup(1));
  CHECK(sign_at_dominant_root(b1 - a1) == 1);
}

TEST_CASE("sign antisymmetry on random elements") {
  std::mt19937 rng(99);
  for (int t = 0; t < 40; ++t) {
    std::vector<Q> c(3);
    for (auto& x : c) x = Q(static_cast<long>(rng() % 7) - 3);
    FieldElement z(5, c);
    int s = sign_at_dominant_root(z);
    int sn = sign_at_dominant_root(-z);
    if (z.is_zero()) CHECK(s == 0);
    else CHECK(s * sn == -1);
  }
}

TEST_CASE("conjugates: moduli below one for alpha and beta (Pisot property)") {
  for (int i : registry_unit_indices()) {
    for (const FieldElement& z :
         {FieldElement::generator(i), beta_of(registry_lookup(i))}) {
      auto vals = conjugate_values(z, 64);
      CHECK(vals.size() == static_cast<size_t>(field_for(i).degree() - 1));
      for (const auto& v : vals) {
        QI m2 = ci_abs2(v);
        CHECK(m2.hi < 1);
      }
    }
  }
}

TEST_CASE("conjugates of alpha_1 form a complex pair with |lambda|^2 = 1/alpha") {
  auto vals = conjugate_values(FieldElement::generator(1), 96);
  REQUIRE(vals.size() == 2);
  CHECK_FALSE(vals[0].is_real());
  CHECK(vals[0].im.lo > 0);  // +Im first
  CHECK(vals[1].im.hi < 0);
  double alpha = registry_lookup(1).approx_value;
  CHECK(ci_abs2(vals[0]).to_double() == doctest::Approx(1.0 / alpha).epsilon(1e-4));
}

TEST_CASE("conjugates of alpha_4: one real ~ -0.81917 and a complex pair") {
  auto vals = conjugate_values(FieldElement::generator(4), 96);
  REQUIRE(vals.size() == 3);
  // descending modulus: complex pair ~0.94044 first, then the real one
  CHECK_FALSE(vals[0].is_real());
  CHECK_FALSE(vals[1].is_real());
  CHECK(vals[2].is_real());
  CHECK(vals[2].re.to_double() == doctest::Approx(-0.81917).epsilon(1e-4));
}

TEST_CASE("conjugate of alpha_-2 is (3 - sqrt 5)/2") {
  auto vals = conjugate_values(FieldElement::generator(-2), 96);
  REQUIRE(vals.size() == 1);
  CHECK(vals[0].is_real());
  CHECK(vals[0].re.to_double() == doctest::Approx((3.0 - std::sqrt(5.0)) / 2).epsilon(1e-10));
}

TEST_CASE("mixed-field operations are rejected") {
  FieldElement a1 = FieldElement::generator(1);
  FieldElement a3 = FieldElement::generator(3);
  CHECK_THROWS_AS(a1 + a3, std::invalid_argument);
  CHECK_THROWS_AS(FieldElement::zero(2).inverse(), std::domain_error);
  CHECK_THROWS_AS(beta_of(registry_lookup(0)), std::domain_error);
}
