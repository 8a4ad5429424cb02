#pragma once

// Exact rational polynomials, rational interval arithmetic and Sturm-based
// real root isolation.  Everything here is certified: intervals are always
// outward-rounded and sign decisions are exact.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tenttile {

using Q = mpq_class;
using Z = mpz_class;

// Polynomial with rational coefficients, ascending degree order.
// Normalized form has no trailing zero coefficients; the zero polynomial
// is the empty vector.
using QPoly = std::vector<Q>;
using ZPoly = std::vector<Z>;

QPoly qp_normalize(QPoly p);
int qp_deg(const QPoly& p);  // -1 for the zero polynomial
bool qp_is_zero(const QPoly& p);

QPoly qp_add(const QPoly& a, const QPoly& b);
QPoly qp_sub(const QPoly& a, const QPoly& b);
QPoly qp_mul(const QPoly& a, const QPoly& b);
QPoly qp_scale(const QPoly& a, const Q& c);
QPoly qp_neg(const QPoly& a);
QPoly qp_derivative(const QPoly& a);
QPoly qp_monic(const QPoly& a);

// Euclidean division: a = q*b + r with deg r < deg b.
QPoly qp_divrem(const QPoly& a, const QPoly& b, QPoly* rem);
QPoly qp_gcd(QPoly a, QPoly b);       // monic gcd
QPoly qp_squarefree(const QPoly& a);  // a / gcd(a, a')

Q qp_eval(const QPoly& p, const Q& x);
int qp_sign_at(const QPoly& p, const Q& x);

QPoly zp_to_qp(const ZPoly& p);
ZPoly zp_from_longs(const std::vector<long>& c);
std::string qp_to_string(const QPoly& p, const std::string& var = "t");

// ---------------------------------------------------------------------------
// Closed rational interval [lo, hi].

struct QI {
  Q lo, hi;

  QI() : lo(0), hi(0) {}
  explicit QI(const Q& v) : lo(v), hi(v) {}
  QI(Q l, Q h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("QI: lo > hi");
  }

  Q width() const { return hi - lo; }
  Q mid() const { return (lo + hi) / 2; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  bool is_point() const { return lo == hi; }
  // Sign if determined, nullopt when the interval straddles zero.
  std::optional<int> sign() const {
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    if (lo == 0 && hi == 0) return 0;
    return std::nullopt;
  }
  double to_double() const { return mid().get_d(); }
};

QI qi_add(const QI& a, const QI& b);
QI qi_sub(const QI& a, const QI& b);
QI qi_mul(const QI& a, const QI& b);
QI qi_neg(const QI& a);
QI qi_abs(const QI& a);
QI qi_hull(const QI& a, const QI& b);
QI qi_scale(const QI& a, const Q& c);
bool qi_disjoint(const QI& a, const QI& b);
// Square root enclosure with absolute error <= 2^-prec_bits; requires a.lo >= 0.
QI qi_sqrt(const QI& a, long prec_bits);
QI qp_eval(const QPoly& p, const QI& x);

// Complex box re + i*im.
struct CI {
  QI re, im;
  bool is_real() const { return im.lo == 0 && im.hi == 0; }
};

CI ci_add(const CI& a, const CI& b);
CI ci_mul(const CI& a, const CI& b);
QI ci_abs2(const CI& a);  // |z|^2 enclosure
CI qp_eval_ci(const QPoly& p, const CI& x);

// ---------------------------------------------------------------------------
// Real root isolation (Sturm).

// Upper bound on the absolute value of every complex root.
Q qp_root_bound(const QPoly& p);

// Pairwise disjoint isolating intervals for the distinct real roots,
// sorted increasingly.  Each interval has sign(p(lo)) != sign(p(hi)) != 0
// for the square-free part of p.
std::vector<QI> isolate_real_roots(const QPoly& p);

// Bisect an isolating interval until its width is <= max_width.
// Precondition: the square-free polynomial changes sign over the interval.
void refine_root(const QPoly& squarefree, QI& iv, const Q& max_width);

// Largest real root, if any.
std::optional<QI> dominant_real_root(const QPoly& p, const Q& max_width);

// Convenience: power of two 2^-bits as an exact rational.
Q q_pow2(long bits);

}  // namespace tenttile
