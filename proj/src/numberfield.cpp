#include "tenttile/numberfield.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "tenttile/linalg.hpp"

namespace tenttile {

namespace {

std::vector<SpecialPisotRecord> make_registry() {
  using TS = TilingStatus;
  auto rec = [](int i, std::vector<long> mp, double val, int m, TS ts) {
    SpecialPisotRecord r;
    r.index = i;
    r.minpoly = MinimalPolynomial{std::move(mp)};
    r.approx_value = val;
    r.partner = -i;
    r.exponent = m;
    r.degree = r.minpoly.degree();
    r.has_tent_tile = (i != 0);
    r.tiling_status = ts;
    return r;
  };
  std::vector<SpecialPisotRecord> t;
  t.push_back(rec(-5, {-1, 4, -5, 1}, 4.0796, 1, TS::kUnknown));
  t.push_back(rec(-4, {1, -4, 6, -5, 1}, 3.62966, 1, TS::kTiles));
  t.push_back(rec(-3, {-1, 3, -4, 1}, 3.1479, 1, TS::kTilesWithReflection));
  t.push_back(rec(-2, {1, -3, 1}, 2.61803, 1, TS::kTiles));
  t.push_back(rec(-1, {-1, 2, -3, 1}, 2.32472, 2, TS::kTilesWithReflection));
  t.push_back(rec(0, {-2, 1}, 2.0, 1, TS::kNone));
  t.push_back(rec(1, {-1, 1, -2, 1}, 1.75488, 3, TS::kTiles));
  t.push_back(rec(2, {-1, -1, 1}, 1.61803, 2, TS::kTiles));
  t.push_back(rec(3, {-1, 0, -1, 1}, 1.46557, 3, TS::kTilesWithReflection));
  t.push_back(rec(4, {-1, 0, 0, -1, 1}, 1.38028, 4, TS::kTilesWithReflection));
  t.push_back(rec(5, {-1, -1, 0, 1}, 1.32472, 5, TS::kUnknown));
  return t;
}

const std::vector<SpecialPisotRecord>& registry() {
  static const std::vector<SpecialPisotRecord> r = make_registry();
  return r;
}

}  // namespace

const SpecialPisotRecord& registry_lookup(int i) {
  if (i < -5 || i > 5) throw std::out_of_range("registry_lookup: index out of range");
  return registry()[static_cast<size_t>(i + 5)];
}

std::vector<int> registry_indices() {
  std::vector<int> v;
  for (int i = -5; i <= 5; ++i) v.push_back(i);
  return v;
}

std::vector<int> registry_unit_indices() {
  std::vector<int> v;
  for (int i = -5; i <= 5; ++i)
    if (i != 0) v.push_back(i);
  return v;
}

// ---------------------------------------------------------------------------

NumberField::NumberField(const SpecialPisotRecord& rec) : id_(rec.index) {
  mp_ = zp_to_qp(zp_from_longs(rec.minpoly.coeffs));
  deg_ = qp_deg(mp_);
  // reduction rows: alpha^(deg+k) as a polynomial of degree < deg
  QPoly cur(deg_, Q(0));  // alpha^deg = -sum_{i<deg} mp[i] alpha^i
  for (int i = 0; i < deg_; ++i) cur[i] = -mp_[i];
  red_.push_back(cur);
  for (int k = 1; k <= deg_ - 2; ++k) {
    QPoly nxt(deg_, Q(0));
    // multiply by alpha and reduce
    Q top = cur[deg_ - 1];
    for (int i = deg_ - 1; i > 0; --i) nxt[i] = cur[i - 1];
    nxt[0] = 0;
    for (int i = 0; i < deg_; ++i) nxt[i] += top * red_[0][i];
    red_.push_back(nxt);
    cur = nxt;
  }
}

void NumberField::refine(long prec_bits) const {
  if (prec_ >= prec_bits) return;
  Q tol = q_pow2(prec_bits);
  QPoly p = mp_;
  auto roots = isolate_real_roots(p);
  for (auto& r : roots) refine_root(p, r, tol);

  // dominant root is the largest real root (the registry minimal polynomials
  // all have their Pisot root as the unique root > 1)
  dom_ = roots.back();

  std::vector<ConjugateBox> boxes;
  for (size_t i = 0; i + 1 < roots.size(); ++i)
    boxes.push_back({CI{roots[i], QI(Q(0))}, true});

  int n_complex_pairs = (deg_ - static_cast<int>(roots.size())) / 2;
  if (n_complex_pairs > 0) {
    // deflate by the real roots using interval arithmetic on the
    // coefficients of the remaining quadratic factor
    if (deg_ == 3 && n_complex_pairs == 1) {
      // t^3 + c2 t^2 + c1 t + c0 = (t - r)(t^2 + b t + c); the single real
      // root r is the dominant one
      QI r = dom_;
      QI b = qi_add(QI(mp_[2]), r);
      QI c = qi_add(QI(mp_[1]), qi_mul(r, b));
      QI re = qi_scale(b, Q(-1, 2));
      QI im2 = qi_sub(c, qi_mul(re, re));
      QI im = qi_sqrt(QI(std::max(Q(0), im2.lo), std::max(Q(0), im2.hi)), prec_bits);
      boxes.push_back({CI{re, im}, false});
      boxes.push_back({CI{re, qi_neg(im)}, false});
    } else if (deg_ == 4 && n_complex_pairs == 1 && roots.size() == 2) {
      // t^4 + c3 t^3 + ... = (t - r1)(t - r2)(t^2 + b t + c)
      QI r1 = roots[0], r2 = roots[1];
      QI b = qi_add(QI(mp_[3]), qi_add(r1, r2));
      QI c;  // product of complex pair: c0 / (r1 r2)
      {
        QI prod = qi_mul(r1, r2);
        if (prod.contains_zero())
          throw std::runtime_error("NumberField: real-root product straddles zero");
        Q a = mp_[0] / prod.lo, b2v = mp_[0] / prod.hi;
        c = QI(std::min(a, b2v), std::max(a, b2v));
      }
      QI re = qi_scale(b, Q(-1, 2));
      QI im2 = qi_sub(c, qi_mul(re, re));
      QI im = qi_sqrt(QI(std::max(Q(0), im2.lo), std::max(Q(0), im2.hi)), prec_bits);
      boxes.push_back({CI{re, im}, false});
      boxes.push_back({CI{re, qi_neg(im)}, false});
    } else if (deg_ > 1) {
      throw std::runtime_error("NumberField: unsupported conjugate pattern");
    }
  }

  // order: descending modulus, +Im first on conjugate pairs
  std::stable_sort(boxes.begin(), boxes.end(), [](const ConjugateBox& a, const ConjugateBox& b) {
    QI ma = ci_abs2(a.box), mb = ci_abs2(b.box);
    if (ma.lo > mb.hi) return true;   // |a| > |b| certified
    if (mb.lo > ma.hi) return false;  // |b| > |a| certified
    // treat as tie (conjugate pair): positive imaginary part first
    return a.box.im.lo > b.box.im.hi;
  });

  conj_ = std::move(boxes);
  prec_ = prec_bits;
}

QI NumberField::dominant(long prec_bits) const {
  refine(std::max(prec_bits, 64L));
  return dom_;
}

const std::vector<ConjugateBox>& NumberField::conjugate_boxes(long prec_bits) const {
  refine(std::max(prec_bits, 64L));
  return conj_;
}

RootIsolation NumberField::isolation(long prec_bits) const {
  refine(std::max(prec_bits, 64L));
  return RootIsolation{dom_, conj_, prec_};
}

const NumberField& field_for(int index) {
  static std::map<int, std::unique_ptr<NumberField>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(index);
  if (it == cache.end())
    it = cache.emplace(index, std::make_unique<NumberField>(registry_lookup(index))).first;
  return *it->second;
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(int field_id, std::vector<Q> coeffs)
    : field_id_(field_id), c_(std::move(coeffs)) {
  size_t n = static_cast<size_t>(field_for(field_id).degree());
  if (c_.size() != n) throw std::invalid_argument("FieldElement: wrong coefficient count");
}

FieldElement FieldElement::zero(int field_id) {
  return FieldElement(field_id, std::vector<Q>(field_for(field_id).degree(), Q(0)));
}

FieldElement FieldElement::one(int field_id) { return integer(field_id, 1); }

FieldElement FieldElement::integer(int field_id, long v) {
  std::vector<Q> c(field_for(field_id).degree(), Q(0));
  c[0] = v;
  return FieldElement(field_id, std::move(c));
}

FieldElement FieldElement::rational(int field_id, const Q& v) {
  std::vector<Q> c(field_for(field_id).degree(), Q(0));
  c[0] = v;
  return FieldElement(field_id, std::move(c));
}

FieldElement FieldElement::generator(int field_id) {
  int n = field_for(field_id).degree();
  if (n < 2) throw std::invalid_argument("generator: field is rational");
  std::vector<Q> c(n, Q(0));
  c[1] = 1;
  return FieldElement(field_id, std::move(c));
}

bool FieldElement::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

namespace {
void check_same(const FieldElement& a, const FieldElement& b) {
  if (a.field_id() != b.field_id())
    throw std::invalid_argument("field elements from different fields");
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(*this, o);
  std::vector<Q> c = c_;
  for (size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
  return FieldElement(field_id_, std::move(c));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(*this, o);
  std::vector<Q> c = c_;
  for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c_[i];
  return FieldElement(field_id_, std::move(c));
}

FieldElement FieldElement::operator-() const {
  std::vector<Q> c = c_;
  for (auto& x : c) x = -x;
  return FieldElement(field_id_, std::move(c));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(*this, o);
  const NumberField& f = field_for(field_id_);
  int n = f.degree();
  std::vector<Q> conv(2 * n - 1, Q(0));
  for (int i = 0; i < n; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < n; ++j) conv[i + j] += c_[i] * o.c_[j];
  }
  std::vector<Q> res(conv.begin(), conv.begin() + n);
  for (int k = 0; k < n - 1; ++k) {
    if (conv[n + k] == 0) continue;
    const QPoly& row = f.reduction()[k];
    for (int i = 0; i < n; ++i) res[i] += conv[n + k] * row[i];
  }
  return FieldElement(field_id_, std::move(res));
}

bool FieldElement::operator==(const FieldElement& o) const {
  return field_id_ == o.field_id_ && c_ == o.c_;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw std::domain_error("field_inv: inversion of zero");
  const NumberField& f = field_for(field_id_);
  QPoly a = qp_normalize(QPoly(c_.begin(), c_.end()));
  // extended Euclid: s*a + t*mp = 1
  QPoly r0 = f.minpoly(), r1 = a;
  QPoly s0 = {}, s1 = {Q(1)};
  while (qp_deg(r1) > 0) {
    QPoly rem;
    QPoly q = qp_divrem(r0, r1, &rem);
    QPoly s2 = qp_sub(s0, qp_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw std::runtime_error("field_inv: element not invertible");
  QPoly inv = qp_scale(s1, Q(1) / r1[0]);
  std::vector<Q> c(f.degree(), Q(0));
  for (size_t i = 0; i < inv.size(); ++i) c[i] = inv[i];
  return FieldElement(field_id_, std::move(c));
}

FieldElement FieldElement::pow(long e) const {
  FieldElement base = *this;
  if (e < 0) {
    base = base.inverse();
    e = -e;
  }
  FieldElement r = FieldElement::one(field_id_);
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

FieldElement field_add(const FieldElement& a, const FieldElement& b) { return a + b; }
FieldElement field_mul(const FieldElement& a, const FieldElement& b) { return a * b; }
FieldElement field_inv(const FieldElement& a) { return a.inverse(); }

FieldElement beta_of(const SpecialPisotRecord& rec) {
  if (rec.index == 0) throw std::domain_error("beta_of: alpha_0 has no tent-tile");
  FieldElement alpha = FieldElement::generator(rec.index);
  FieldElement one = FieldElement::one(rec.index);
  return alpha * (alpha - one).inverse();
}

bool verify_dependency(const SpecialPisotRecord& rec) {
  if (rec.index == 0) throw std::domain_error("verify_dependency: i = 0");
  FieldElement alpha = FieldElement::generator(rec.index);
  FieldElement beta = beta_of(rec);
  const SpecialPisotRecord& partner = registry_lookup(rec.partner);
  return alpha.pow(rec.exponent) == beta.pow(partner.exponent);
}

int sign_at_dominant_root(const FieldElement& z) {
  if (z.is_zero()) return 0;
  const NumberField& f = field_for(z.field_id());
  QPoly p(z.coeffs().begin(), z.coeffs().end());
  for (long prec = 64; prec <= 1L << 14; prec *= 2) {
    QI v = qp_eval(qp_normalize(p), f.dominant(prec));
    if (auto s = v.sign()) return *s;
  }
  throw std::runtime_error("sign_at_dominant_root: refinement cap reached");
}

int cmp_at_dominant_root(const FieldElement& a, const FieldElement& b) {
  return sign_at_dominant_root(a - b);
}

QI value_at_dominant_root(const FieldElement& z, long prec_bits) {
  const NumberField& f = field_for(z.field_id());
  QPoly p = qp_normalize(QPoly(z.coeffs().begin(), z.coeffs().end()));
  Q tol = q_pow2(prec_bits);
  long prec = std::max(prec_bits, 64L);
  while (true) {
    QI v = qp_eval(p, f.dominant(prec));
    if (v.width() <= tol) return v;
    prec *= 2;
    if (prec > 1L << 16) throw std::runtime_error("value_at_dominant_root: cap reached");
  }
}

std::vector<CI> conjugate_values(const FieldElement& z, long prec_bits) {
  if (prec_bits < 32) throw std::invalid_argument("conjugate_values: precision < 32");
  const NumberField& f = field_for(z.field_id());
  QPoly p = qp_normalize(QPoly(z.coeffs().begin(), z.coeffs().end()));
  Q tol = q_pow2(prec_bits);
  long prec = std::max(prec_bits + 8, 64L);
  std::vector<CI> vals;
  while (true) {
    vals.clear();
    bool ok = true;
    for (const auto& cb : f.conjugate_boxes(prec)) {
      CI v = qp_eval_ci(p, cb.box);
      if (v.re.width() > tol || v.im.width() > tol) {
        ok = false;
        break;
      }
      vals.push_back(v);
    }
    if (ok) break;
    prec *= 2;
    if (prec > 1L << 16) throw std::runtime_error("conjugate_values: cap reached");
  }
  // order by descending modulus of the value, +Im first on ties
  std::stable_sort(vals.begin(), vals.end(), [](const CI& a, const CI& b) {
    QI ma = ci_abs2(a), mb = ci_abs2(b);
    if (ma.lo > mb.hi) return true;
    if (mb.lo > ma.hi) return false;
    return a.im.lo > b.im.hi;
  });
  return vals;
}

QPoly element_charpoly(const FieldElement& z) {
  const NumberField& f = field_for(z.field_id());
  int n = f.degree();
  // multiplication-by-z matrix in the power basis (columns = z * alpha^j)
  QMat m(n, std::vector<Q>(n, Q(0)));
  FieldElement cur = z;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) m[i][j] = cur.coeffs()[i];
    if (j + 1 < n) cur = cur * FieldElement::generator(z.field_id());
  }
  return qmat_charpoly_faddeev(m);
}

}  // namespace tenttile
