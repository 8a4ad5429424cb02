#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tenttile/geometry.hpp"

using namespace tenttile;

namespace {
double vec_dist(const Vec& a, const Vec& b, int d) {
  double s = 0;
  for (int k = 0; k < d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

FieldElement random_element(int id, std::mt19937& rng) {
  int n = field_for(id).degree();
  std::vector<Q> c(n);
  for (auto& x : c) x = Q(static_cast<long>(rng() % 9) - 4);
  return FieldElement(id, c);
}
}  // namespace

TEST_CASE("scalar matrices for the quadratic record -2") {
  auto [emb, pair] = build_matrices(registry_lookup(-2), 96);
  CHECK(pair.d == 1);
  CHECK(pair.A.a[0][0] == doctest::Approx((3.0 - std::sqrt(5.0)) / 2).epsilon(1e-12));
  CHECK(pair.B.a[0][0] == doctest::Approx((1.0 - std::sqrt(5.0)) / 2).epsilon(1e-12));
}

TEST_CASE("planar block for alpha_1 is a rotation-scaling") {
  auto [emb, pair] = build_matrices(registry_lookup(1), 96);
  CHECK(pair.d == 2);
  CHECK(pair.A.a[0][0] == doctest::Approx(pair.A.a[1][1]));
  CHECK(pair.A.a[0][1] == doctest::Approx(-pair.A.a[1][0]));
  CHECK(pair.A.a[1][0] > 0);  // positive imaginary part chosen
  // |lambda|^2 = 1/alpha for the cubic unit
  double det = pair.A.a[0][0] * pair.A.a[1][1] - pair.A.a[0][1] * pair.A.a[1][0];
  double alpha = field_for(1).dominant(96).to_double();
  CHECK(det == doctest::Approx(1.0 / alpha).epsilon(1e-10));
}

TEST_CASE("matrix identities for all ten units") {
  for (int i : registry_unit_indices()) {
    auto [emb, pair] = build_matrices(registry_lookup(i), 96);
    CHECK(pair.norm_A < 1.0);
    CHECK(pair.norm_B < 1.0);
    Mat ab = mat_mul(pair.A, pair.B);
    Mat ba = mat_mul(pair.B, pair.A);
    Mat apb = mat_add(pair.A, pair.B);
    CHECK(mat_max_abs_diff(ab, apb) < 1e-12);
    CHECK(mat_max_abs_diff(ab, ba) < 1e-12);
    Mat lhs = mat_add(mat_inverse(pair.A), mat_inverse(pair.B));
    CHECK(mat_max_abs_diff(lhs, mat_identity(pair.d)) < 1e-12);
  }
}

TEST_CASE("psi is the equivariant embedding") {
  std::mt19937 rng(41);
  for (int i : {1, -3, 4, -4}) {
    auto [emb, pair] = build_matrices(registry_lookup(i), 96);
    FieldElement alpha = FieldElement::generator(i);
    FieldElement beta = beta_of(registry_lookup(i));
    CHECK(vec_dist(psi(FieldElement::zero(i), emb), Vec{0, 0, 0}, pair.d) == 0.0);
    for (int t = 0; t < 20; ++t) {
      FieldElement x = random_element(i, rng);
      Vec lhs = psi(alpha * x, emb);
      Vec rhs = pair.A.apply(psi(x, emb));
      CHECK(vec_dist(lhs, rhs, pair.d) < 1e-9);
      Vec lhsb = psi(beta * x, emb);
      Vec rhsb = pair.B.apply(psi(x, emb));
      CHECK(vec_dist(lhsb, rhsb, pair.d) < 1e-9);
    }
  }
}

TEST_CASE("tent IFS fixed points") {
  for (int i : {1, -2, 3}) {
    auto [fl, fr] = tent_ifs(registry_lookup(i));
    CHECK(fl.contraction);
    CHECK(fr.contraction);
    Vec z{0, 0, 0};
    CHECK(vec_dist(fl.apply(z), z, fl.d) == 0.0);  // f_L fixes the origin
    // f_R fixed point is psi(beta / (1 + beta))
    auto [emb, pair] = build_matrices(registry_lookup(i), 96);
    FieldElement beta = beta_of(registry_lookup(i));
    FieldElement fp = beta * (FieldElement::one(i) + beta).inverse();
    Vec expect = psi(fp, emb);
    CHECK(vec_dist(fr.apply(expect), expect, fr.d) < 1e-10);
  }
}

TEST_CASE("exact endpoint maps for the record -2") {
  // f_R fixes -phi; f_L sends -phi to the interior meeting point 1-phi
  const auto& rec = registry_lookup(-2);
  int id = rec.index;
  FieldElement one = FieldElement::one(id);
  FieldElement alpha = FieldElement::generator(id);
  FieldElement lo = one - alpha;  // value -phi
  // exact conjugates: A = 3 - alpha, B = 2 - alpha
  FieldElement A(id, {Q(3), Q(-1)});
  FieldElement B(id, {Q(2), Q(-1)});
  FieldElement fr_lo = B * (one - lo);
  CHECK(fr_lo == lo);  // fixed point
  FieldElement fl_lo = A * lo;
  CHECK(fl_lo == B);  // the two branch images meet exactly at value 1-phi
}

TEST_CASE("one-dimensional tiles are exact intervals") {
  ExactInterval im2 = tent_interval_exact(-2);
  CHECK(im2.set_equation_verified);
  CHECK(im2.lattice_tiling_verified);
  double phi = (1.0 + std::sqrt(5.0)) / 2;
  CHECK(value_at_dominant_root(im2.lo, 64).to_double() == doctest::Approx(-phi));
  CHECK(value_at_dominant_root(im2.hi, 64).to_double() == doctest::Approx(0.0));

  ExactInterval i2 = tent_interval_exact(2);
  CHECK(i2.set_equation_verified);
  CHECK(i2.lattice_tiling_verified);
  CHECK(value_at_dominant_root(i2.lo, 64).to_double() == doctest::Approx((1 - phi) / 2));
  CHECK(value_at_dominant_root(i2.hi, 64).to_double() == doctest::Approx(0.5));

  CHECK_THROWS_AS(tent_interval_exact(1), std::invalid_argument);
}

TEST_CASE("rendered 1-d clouds stay inside the exact intervals") {
  double phi = (1.0 + std::sqrt(5.0)) / 2;
  PointCloud c = render_tent_tile(registry_lookup(-2), 12);
  for (const auto& p : c.points) {
    CHECK(p[0] >= -phi - 1e-9);
    CHECK(p[0] <= 0 + 1e-9);
  }
  PointCloud c2 = render_tent_tile(registry_lookup(2), 12);
  for (const auto& p : c2.points) {
    CHECK(p[0] >= (1 - phi) / 2 - 1e-9);
    CHECK(p[0] <= 0.5 + 1e-9);
  }
}

TEST_CASE("clouds are Cauchy in Hausdorff distance with ratio lambda_max") {
  auto [emb, pair] = build_matrices(registry_lookup(1), 96);
  double lam = std::max(pair.norm_A, pair.norm_B);
  double diam = diam_estimate(pair);
  PointCloud prev = render_tent_tile(registry_lookup(1), 6);
  for (int k = 7; k <= 10; ++k) {
    PointCloud cur = render_tent_tile(registry_lookup(1), k);
    double hd = hausdorff_distance(prev, cur);
    CHECK(hd <= diam * std::pow(lam, k - 1) + 1e-9);
    prev = cur;
  }
}

TEST_CASE("set-equation self-consistency of the rendered cloud") {
  for (int i : {1, -1}) {
    auto [fl, fr] = tent_ifs(registry_lookup(i));
    PointCloud c = render_tent_tile(registry_lookup(i), 12);
    PointCloud image;
    image.d = c.d;
    image.cell_size = c.cell_size;
    for (const auto& p : c.points) {
      image.points.push_back(fl.apply(p));
      image.points.push_back(fr.apply(p));
    }
    CHECK(hausdorff_distance(c, image) <= 2 * c.cell_size);
  }
}

TEST_CASE("hausdorff distance basics") {
  PointCloud a;
  a.d = 2;
  std::mt19937 rng(5);
  for (int t = 0; t < 500; ++t)
    a.points.push_back(Vec{rng() % 100 / 10.0, rng() % 100 / 10.0, 0});
  CHECK(hausdorff_distance(a, a) == 0.0);
  PointCloud b = a;
  for (auto& p : b.points) {
    p[0] += 0.3;
    p[1] -= 0.4;
  }
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.5).epsilon(1e-9));
  PointCloud empty;
  empty.d = 2;
  CHECK_THROWS(hausdorff_distance(a, empty));
}

TEST_CASE("adaptive rendering reaches the requested cell size") {
  auto [emb, pair] = build_matrices(registry_lookup(1), 96);
  double target = 1e-3 * diam_estimate(pair);
  PointCloud c = render_tent_tile_to_cell(registry_lookup(1), target);
  CHECK(c.cell_size <= target);
  CHECK(c.points.size() > 1000);
}

TEST_CASE("depth budget error") {
  CHECK_THROWS_AS(render_tent_tile(registry_lookup(1), 60, 1000), std::length_error);
}
