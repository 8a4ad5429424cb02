#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tenttile/qpoly.hpp"

using namespace tenttile;

TEST_CASE("polynomial arithmetic basics") {
  QPoly a = {Q(1), Q(2), Q(1)};  // 1 + 2t + t^2 = (1+t)^2
  QPoly b = {Q(1), Q(1)};
  CHECK(qp_mul(b, b) == a);
  QPoly r;
  QPoly q = qp_divrem(a, b, &r);
  CHECK(q == b);
  CHECK(qp_is_zero(r));
  CHECK(qp_deg(qp_derivative(a)) == 1);
}

TEST_CASE("gcd and squarefree") {
  QPoly b = {Q(1), Q(1)};           // 1+t
  QPoly c = {Q(-2), Q(1)};          // t-2
  QPoly p = qp_mul(qp_mul(b, b), c);
  QPoly g = qp_gcd(p, qp_derivative(p));
  CHECK(qp_deg(g) == 1);
  QPoly sf = qp_squarefree(p);
  CHECK(qp_deg(sf) == 2);
  CHECK(qp_sign_at(sf, Q(-1)) == 0);
  CHECK(qp_sign_at(sf, Q(2)) == 0);
}

TEST_CASE("interval arithmetic is outward") {
  QI a(Q(1, 3), Q(1, 2));
  QI b(Q(-2), Q(5));
  QI p = qi_mul(a, b);
  CHECK(p.lo <= Q(1, 3) * Q(-2));
  CHECK(p.hi >= Q(1, 2) * Q(5));
  QI s = qi_sqrt(QI(Q(2), Q(2)), 64);
  Q mid = s.mid();
  CHECK(mid * mid > Q(199, 100));
  CHECK(mid * mid < Q(201, 100));
  CHECK(s.width() <= q_pow2(62));
}

TEST_CASE("root isolation on a cubic with one real root") {
  // t^3 - t - 1: single real root 1.3247...
  QPoly p = {Q(-1), Q(-1), Q(0), Q(1)};
  auto roots = isolate_real_roots(p);
  REQUIRE(roots.size() == 1);
  QI r = roots[0];
  refine_root(p, r, q_pow2(80));
  CHECK(r.lo.get_d() == doctest::Approx(1.324717957244746).epsilon(1e-12));
}

TEST_CASE("root isolation separates close roots") {
  // (t - 1)(t - 1.0001)(t + 3) scaled to integer coefficients
  QPoly p = qp_mul(qp_mul(QPoly{Q(-1), Q(1)}, QPoly{Q(-10001, 10000), Q(1)}),
                   QPoly{Q(3), Q(1)});
  auto roots = isolate_real_roots(p);
  REQUIRE(roots.size() == 3);
  for (auto& r : roots) refine_root(qp_squarefree(p), r, q_pow2(40));
  CHECK(roots[0].to_double() == doctest::Approx(-3.0));
  CHECK(roots[1].to_double() == doctest::Approx(1.0));
  CHECK(roots[2].to_double() == doctest::Approx(1.0001));
}

TEST_CASE("dominant real root") {
  QPoly p = {Q(-1), Q(1), Q(-2), Q(1)};  // 1.75488 cubic
  auto r = dominant_real_root(p, q_pow2(60));
  REQUIRE(r.has_value());
  CHECK(r->to_double() == doctest::Approx(1.754877666246693).epsilon(1e-12));
}

TEST_CASE("complex box evaluation") {
  // evaluate t^2 at i: expect -1
  CI x{QI(Q(0)), QI(Q(1))};
  CI v = qp_eval_ci(QPoly{Q(0), Q(0), Q(1)}, x);
  CHECK(v.re.lo == Q(-1));
  CHECK(v.re.hi == Q(-1));
  CHECK(v.im.lo == Q(0));
}
