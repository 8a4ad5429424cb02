#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tenttile/spectral.hpp"

using namespace tenttile;

namespace {
const std::vector<int> kSubstRecords = {1, 3, 4, 5, -1, -3, -4, -5};
}

TEST_CASE("char_poly basics") {
  ZMat ident = zmat_identity(2);
  CHECK(char_poly(ident) == ZPoly{Z(1), Z(-2), Z(1)});  // (t-1)^2

  Correspondence c3 = substitution_for(registry_lookup(1));
  CHECK(char_poly(incidence_matrix(c3.sigma)) == ZPoly{Z(-1), Z(1), Z(-2), Z(1)});
}

TEST_CASE("dominant root of the theta_prime_4 incidence is beta^2") {
  Correspondence c = substitution_for(registry_lookup(-4));
  ZPoly cp = char_poly(incidence_matrix(c.sigma));
  auto root = dominant_real_root(zp_to_qp(cp), q_pow2(48));
  REQUIRE(root.has_value());
  CHECK(root->to_double() == doctest::Approx(1.90517).epsilon(1e-5));
}

TEST_CASE("perron data verifies exactly for all eight substitutions") {
  for (int i : kSubstRecords) {
    const auto& rec = registry_lookup(i);
    Correspondence c = substitution_for(rec);
    PerronData pd = perron_data(c, rec);
    CHECK(pd.lambda1_mod.hi < 1);
    CHECK(pd.u.size() == static_cast<size_t>(c.sigma.alphabet));
    // lambda_1 >= lambda_d and both below 1
    CHECK(pd.lambda1_mod.hi >= pd.lambdad_mod.lo);
  }
}

TEST_CASE("explicit eigenvector shapes") {
  {
    Correspondence c = substitution_for(registry_lookup(1));  // u = (beta, alpha, alpha^2)
    FieldElement beta = beta_of(registry_lookup(1));
    FieldElement alpha = FieldElement::generator(1);
    CHECK(c.u[0] == beta);
    CHECK(c.u[1] == alpha);
    CHECK(c.u[2] == alpha * alpha);
  }
  {
    Correspondence c = substitution_for(registry_lookup(-4));  // u = (1, b, b^2, b^3)
    FieldElement beta = beta_of(registry_lookup(-4));
    CHECK(c.u[0] == FieldElement::one(-4));
    CHECK(c.u[3] == beta * beta * beta);
    CHECK(c.lambda0 == beta * beta);
  }
  {
    Correspondence c = substitution_for(registry_lookup(-1));  // (a,b,b^2) doubled
    FieldElement beta = beta_of(registry_lookup(-1));
    FieldElement alpha = FieldElement::generator(-1);
    REQUIRE(c.u.size() == 6);
    CHECK(c.u[0] == alpha);
    CHECK(c.u[3] == alpha);
    CHECK(c.u[2] == beta * beta);
    CHECK(c.u[5] == beta * beta);
  }
}

TEST_CASE("reducibility flags") {
  CHECK_FALSE(perron_data(substitution_for(registry_lookup(1)), registry_lookup(1)).reducible);
  CHECK(perron_data(substitution_for(registry_lookup(3)), registry_lookup(3)).reducible);
  CHECK_FALSE(perron_data(substitution_for(registry_lookup(-4)), registry_lookup(-4)).reducible);
  PerronData pd5 = perron_data(substitution_for(registry_lookup(5)), registry_lookup(5));
  CHECK(pd5.reducible);
  CHECK(pd5.supplementary_dim == 10 - 1 - 2);
}

TEST_CASE("pi_exact is additive and matches letters of u") {
  const auto& rec = registry_lookup(1);
  Correspondence c = substitution_for(rec);
  PerronData pd = perron_data(c, rec);
  // x = e_1 (letter 0): z = beta
  PiClass z0 = pi_exact({1, 0, 0}, pd);
  CHECK(z0.z == beta_of(rec));
  // additivity on random vectors
  std::mt19937 rng(3);
  for (int t = 0; t < 30; ++t) {
    std::vector<long> x(3), y(3);
    for (int k = 0; k < 3; ++k) {
      x[k] = static_cast<long>(rng() % 9) - 4;
      y[k] = static_cast<long>(rng() % 9) - 4;
    }
    std::vector<long> s(3);
    for (int k = 0; k < 3; ++k) s[k] = x[k] + y[k];
    CHECK(pi_exact(s, pd).z == pi_exact(x, pd).z + pi_exact(y, pd).z);
  }
  // trivial: ell(a) - ell(a) = 0
  CHECK(pi_exact({0, 0, 0}, pd).z.is_zero());
}

TEST_CASE("pi class equality iff equal pairing (numeric cross-check)") {
  const auto& rec = registry_lookup(3);
  Correspondence c = substitution_for(rec);
  PerronData pd = perron_data(c, rec);
  auto [emb, pair] = build_matrices(rec, 96);
  std::mt19937 rng(9);
  int n = c.sigma.alphabet;
  for (int t = 0; t < 60; ++t) {
    std::vector<long> x(static_cast<size_t>(n)), y(static_cast<size_t>(n));
    for (auto& v : x) v = static_cast<long>(rng() % 7) - 3;
    for (auto& v : y) v = static_cast<long>(rng() % 7) - 3;
    PiClass cx = pi_exact(x, pd), cy = pi_exact(y, pd);
    Vec px = pi_numeric(cx, emb), py = pi_numeric(cy, emb);
    double dist = std::hypot(px[0] - py[0], px[1] - py[1]);
    if (cx.z == cy.z) CHECK(dist < 1e-9);
    else CHECK(dist > 1e-9);
  }
}

TEST_CASE("pi numeric of a single letter is minus psi of the eigen-entry") {
  const auto& rec = registry_lookup(1);
  Correspondence c = substitution_for(rec);
  PerronData pd = perron_data(c, rec);
  auto [emb, pair] = build_matrices(rec, 96);
  // letter 1 has u_1 = alpha: pi(ell("1")) = -psi(alpha)
  Vec v = pi_numeric(pi_of_word(Word{1}, pd), emb);
  Vec w = psi(FieldElement::generator(1), emb);
  CHECK(v[0] == doctest::Approx(-w[0]).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(-w[1]).epsilon(1e-12));
}

TEST_CASE("h is the contraction intertwined with multiplication by lambda0") {
  for (int i : {3, -3, -4}) {
    const auto& rec = registry_lookup(i);
    Correspondence c = substitution_for(rec);
    PerronData pd = perron_data(c, rec);
    auto [emb, pair] = build_matrices(rec, 96);
    Mat hm = h_matrix(pd, pair);
    std::mt19937 rng(11);
    int n = c.sigma.alphabet;
    for (int t = 0; t < 25; ++t) {
      std::vector<long> x(static_cast<size_t>(n));
      for (auto& v : x) v = static_cast<long>(rng() % 7) - 3;
      PiClass cx = pi_exact(x, pd);
      Vec lhs = pi_numeric(h_apply(cx, pd), emb);
      Vec rhs = hm.apply(pi_numeric(cx, emb));
      for (int k = 0; k < pair.d; ++k) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-9));
    }
    CHECK(h_apply(PiClass{FieldElement::zero(i)}, pd).z.is_zero());
  }
}

TEST_CASE("contraction bound |h(x1)-h(x2)| <= |lambda_1| |x1-x2|") {
  const auto& rec = registry_lookup(4);
  Correspondence c = substitution_for(rec);
  PerronData pd = perron_data(c, rec);
  auto [emb, pair] = build_matrices(rec, 96);
  Mat hm = h_matrix(pd, pair);
  double l1 = pd.lambda1_mod.hi.get_d();
  std::mt19937 rng(23);
  for (int t = 0; t < 50; ++t) {
    Vec x{0, 0, 0};
    for (int k = 0; k < pair.d; ++k) x[k] = (rng() % 2000 - 1000) / 250.0;
    Vec hx = hm.apply(x);
    double nx = 0, nh = 0;
    for (int k = 0; k < pair.d; ++k) {
      nx += x[k] * x[k];
      nh += hx[k] * hx[k];
    }
    CHECK(std::sqrt(nh) <= l1 * std::sqrt(nx) + 1e-12);
  }
}

TEST_CASE("decisions are invariant under scaling u by 2") {
  const auto& rec = registry_lookup(1);
  Correspondence c = substitution_for(rec);
  PerronData pd = perron_data(c, rec);
  PerronData pd2 = pd;
  FieldElement two = FieldElement::integer(rec.index, 2);
  for (auto& ui : pd2.u) ui = ui * two;
  std::mt19937 rng(5);
  for (int t = 0; t < 40; ++t) {
    std::vector<long> x(3), y(3);
    for (auto& v : x) v = static_cast<long>(rng() % 9) - 4;
    for (auto& v : y) v = static_cast<long>(rng() % 9) - 4;
    // equality decisions and sign decisions agree
    FieldElement z1 = pi_exact(x, pd).z - pi_exact(y, pd).z;
    FieldElement z2 = pi_exact(x, pd2).z - pi_exact(y, pd2).z;
    CHECK(sign_at_dominant_root(z1) == sign_at_dominant_root(z2));
  }
}
