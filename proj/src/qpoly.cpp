#include "tenttile/qpoly.hpp"

#include <algorithm>
#include <sstream>

namespace tenttile {

QPoly qp_normalize(QPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

int qp_deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

bool qp_is_zero(const QPoly& p) { return p.empty(); }

QPoly qp_add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Q(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return qp_normalize(std::move(r));
}

QPoly qp_sub(const QPoly& a, const QPoly& b) { return qp_add(a, qp_neg(b)); }

QPoly qp_neg(const QPoly& a) {
  QPoly r = a;
  for (auto& c : r) c = -c;
  return r;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Q(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return qp_normalize(std::move(r));
}

QPoly qp_scale(const QPoly& a, const Q& c) {
  if (c == 0) return {};
  QPoly r = a;
  for (auto& x : r) x *= c;
  return r;
}

QPoly qp_derivative(const QPoly& a) {
  if (a.size() < 2) return {};
  QPoly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<long>(i);
  return qp_normalize(std::move(r));
}

QPoly qp_monic(const QPoly& a) {
  if (a.empty()) return a;
  QPoly r = a;
  Q lead = r.back();
  for (auto& c : r) c /= lead;
  return r;
}

QPoly qp_divrem(const QPoly& a, const QPoly& b, QPoly* rem) {
  if (b.empty()) throw std::invalid_argument("qp_divrem: division by zero polynomial");
  QPoly r = a;
  int db = qp_deg(b);
  QPoly q;
  if (qp_deg(a) >= db) q.assign(a.size() - b.size() + 1, Q(0));
  while (qp_deg(r) >= db) {
    int dr = qp_deg(r);
    Q c = r.back() / b.back();
    q[dr - db] = c;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= c * b[i];
    r = qp_normalize(std::move(r));
  }
  if (rem) *rem = r;
  return qp_normalize(std::move(q));
}

QPoly qp_gcd(QPoly a, QPoly b) {
  a = qp_normalize(std::move(a));
  b = qp_normalize(std::move(b));
  while (!b.empty()) {
    QPoly r;
    qp_divrem(a, b, &r);
    a = std::move(b);
    b = qp_monic(std::move(r));
  }
  return qp_monic(std::move(a));
}

QPoly qp_squarefree(const QPoly& a) {
  if (qp_deg(a) <= 1) return a;
  QPoly g = qp_gcd(a, qp_derivative(a));
  if (qp_deg(g) == 0) return a;
  return qp_divrem(a, g, nullptr);
}

Q qp_eval(const QPoly& p, const Q& x) {
  Q r(0);
  for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

int qp_sign_at(const QPoly& p, const Q& x) { return sgn(qp_eval(p, x)); }

QPoly zp_to_qp(const ZPoly& p) {
  QPoly r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[i] = Q(p[i]);
  return qp_normalize(std::move(r));
}

ZPoly zp_from_longs(const std::vector<long>& c) {
  ZPoly r(c.size());
  for (size_t i = 0; i < c.size(); ++i) r[i] = c[i];
  return r;
}

std::string qp_to_string(const QPoly& p, const std::string& var) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = p.size(); i-- > 0;) {
    if (p[i] == 0) continue;
    Q c = p[i];
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    Q ac = abs(c);
    if (i == 0 || ac != 1) os << ac.get_str();
    if (i > 0) {
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

QI qi_add(const QI& a, const QI& b) { return QI(a.lo + b.lo, a.hi + b.hi); }
QI qi_sub(const QI& a, const QI& b) { return QI(a.lo - b.hi, a.hi - b.lo); }

QI qi_mul(const QI& a, const QI& b) {
  Q p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return QI(std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4)));
}

QI qi_neg(const QI& a) { return QI(-a.hi, -a.lo); }

QI qi_abs(const QI& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return qi_neg(a);
  return QI(Q(0), std::max(Q(-a.lo), a.hi));
}

QI qi_hull(const QI& a, const QI& b) {
  return QI(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

QI qi_scale(const QI& a, const Q& c) {
  if (c >= 0) return QI(a.lo * c, a.hi * c);
  return QI(a.hi * c, a.lo * c);
}

bool qi_disjoint(const QI& a, const QI& b) { return a.hi < b.lo || b.hi < a.lo; }

QI qi_sqrt(const QI& a, long prec_bits) {
  if (a.lo < 0) throw std::invalid_argument("qi_sqrt: negative interval");
  // sqrt of a rational bound to absolute precision 2^-prec via integer sqrt
  // of the value scaled by 4^prec.
  auto dir_sqrt = [&](const Q& v, bool round_up) -> Q {
    Z num = v.get_num(), den = v.get_den();
    Z scaled = (num << (2 * prec_bits)) / den;  // floor
    Z s = sqrt(scaled);                          // floor sqrt
    if (round_up && s * s < scaled + 1) s += 1;  // ceil-ish, always safe upward
    Q r(s, Z(1) << prec_bits);
    r.canonicalize();
    return r;
  };
  return QI(dir_sqrt(a.lo, false), dir_sqrt(a.hi, true));
}

QI qp_eval(const QPoly& p, const QI& x) {
  QI r(Q(0));
  for (size_t i = p.size(); i-- > 0;) r = qi_add(qi_mul(r, x), QI(p[i]));
  return r;
}

CI ci_add(const CI& a, const CI& b) { return {qi_add(a.re, b.re), qi_add(a.im, b.im)}; }

CI ci_mul(const CI& a, const CI& b) {
  return {qi_sub(qi_mul(a.re, b.re), qi_mul(a.im, b.im)),
          qi_add(qi_mul(a.re, b.im), qi_mul(a.im, b.re))};
}

QI ci_abs2(const CI& a) { return qi_add(qi_mul(a.re, a.re), qi_mul(a.im, a.im)); }

CI qp_eval_ci(const QPoly& p, const CI& x) {
  CI r{QI(Q(0)), QI(Q(0))};
  for (size_t i = p.size(); i-- > 0;) {
    r = ci_mul(r, x);
    r.re = qi_add(r.re, QI(p[i]));
  }
  return r;
}

// ---------------------------------------------------------------------------

Q qp_root_bound(const QPoly& p) {
  if (qp_deg(p) < 1) return Q(1);
  Q lead = abs(p.back());
  Q m(0);
  for (size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, Q(abs(p[i]) / lead));
  return m + 1;  // Cauchy bound
}

namespace {

std::vector<QPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> chain;
  chain.push_back(p);
  chain.push_back(qp_derivative(p));
  while (!chain.back().empty() && qp_deg(chain.back()) > 0) {
    QPoly r;
    qp_divrem(chain[chain.size() - 2], chain.back(), &r);
    if (r.empty()) break;
    // normalize by a positive scalar only; the sign pattern is the point
    QPoly next = qp_neg(r);
    next = qp_scale(next, Q(1) / abs(next.back()));
    chain.push_back(std::move(next));
  }
  return chain;
}

int sign_changes(const std::vector<QPoly>& chain, const Q& x) {
  int changes = 0, prev = 0;
  for (const auto& f : chain) {
    int s = qp_sign_at(f, x);
    if (s != 0) {
      if (prev != 0 && s != prev) ++changes;
      prev = s;
    }
  }
  return changes;
}

}  // namespace

std::vector<QI> isolate_real_roots(const QPoly& p_in) {
  QPoly p = qp_squarefree(qp_normalize(p_in));
  std::vector<QI> out;
  if (qp_deg(p) < 1) return out;
  auto chain = sturm_chain(p);
  Q bound = qp_root_bound(p);
  // roots in (a, b] counted by Sturm sign-change difference
  struct Seg { Q a, b; int na, nb; };
  Q a0 = -bound - 1, b0 = bound + 1;
  std::vector<Seg> stack{{a0, b0, sign_changes(chain, a0), sign_changes(chain, b0)}};
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    int count = s.na - s.nb;
    if (count <= 0) continue;
    if (count == 1) {
      // shrink until the endpoints are not roots themselves (they are not,
      // by the half-open counting, except possibly b)
      QI iv(s.a, s.b);
      // ensure sign change across closed interval for refine_root
      while (qp_sign_at(p, iv.lo) == 0) iv.lo -= Q(1, 1000);
      if (qp_sign_at(p, iv.hi) == 0) {
        out.push_back(QI(iv.hi, iv.hi));
        continue;
      }
      out.push_back(iv);
      continue;
    }
    Q m = (s.a + s.b) / 2;
    // avoid bisecting exactly onto a root
    while (qp_sign_at(p, m) == 0) m = (s.a + 2 * m) / 3 + Q(1, 7919);
    int nm = sign_changes(chain, m);
    stack.push_back({s.a, m, s.na, nm});
    stack.push_back({m, s.b, nm, s.nb});
  }
  std::sort(out.begin(), out.end(), [](const QI& x, const QI& y) { return x.lo < y.lo; });
  return out;
}

void refine_root(const QPoly& p, QI& iv, const Q& max_width) {
  if (iv.is_point()) return;
  int slo = qp_sign_at(p, iv.lo);
  while (iv.width() > max_width) {
    Q m = iv.mid();
    int sm = qp_sign_at(p, m);
    if (sm == 0) {
      iv = QI(m, m);
      return;
    }
    if (sm == slo) iv.lo = m;
    else iv.hi = m;
  }
}

std::optional<QI> dominant_real_root(const QPoly& p, const Q& max_width) {
  auto roots = isolate_real_roots(p);
  if (roots.empty()) return std::nullopt;
  QI r = roots.back();
  refine_root(qp_squarefree(qp_normalize(p)), r, max_width);
  return r;
}

Q q_pow2(long bits) {
  Q r(1, Z(1) << bits);
  r.canonicalize();
  return r;
}

}  // namespace tenttile
