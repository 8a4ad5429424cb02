#include "tenttile/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_set>

#include "tenttile/kernels.hpp"

namespace tenttile {

Mat mat_identity(int d) {
  Mat m;
  m.d = d;
  for (int i = 0; i < d; ++i) m.a[i][i] = 1.0;
  return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
  Mat r;
  r.d = x.d;
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) {
      double s = 0;
      for (int k = 0; k < x.d; ++k) s += x.a[i][k] * y.a[k][j];
      r.a[i][j] = s;
    }
  return r;
}

Mat mat_add(const Mat& x, const Mat& y) {
  Mat r;
  r.d = x.d;
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) r.a[i][j] = x.a[i][j] + y.a[i][j];
  return r;
}

Mat mat_scale(const Mat& x, double c) {
  Mat r = x;
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) r.a[i][j] *= c;
  return r;
}

Mat mat_inverse(const Mat& x) {
  int d = x.d;
  double a[3][6];
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a[i][j] = x.a[i][j];
    for (int j = 0; j < d; ++j) a[i][d + j] = (i == j) ? 1.0 : 0.0;
  }
  for (int k = 0; k < d; ++k) {
    int piv = k;
    for (int i = k + 1; i < d; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (std::abs(a[piv][k]) < 1e-300) throw std::runtime_error("mat_inverse: singular");
    if (piv != k)
      for (int j = 0; j < 2 * d; ++j) std::swap(a[piv][j], a[k][j]);
    double inv = 1.0 / a[k][k];
    for (int j = 0; j < 2 * d; ++j) a[k][j] *= inv;
    for (int i = 0; i < d; ++i) {
      if (i == k) continue;
      double f = a[i][k];
      for (int j = 0; j < 2 * d; ++j) a[i][j] -= f * a[k][j];
    }
  }
  Mat r;
  r.d = d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r.a[i][j] = a[i][d + j];
  return r;
}

double mat_max_abs_diff(const Mat& x, const Mat& y) {
  double m = 0;
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) m = std::max(m, std::abs(x.a[i][j] - y.a[i][j]));
  return m;
}

AffineMap affine_compose(const AffineMap& f, const AffineMap& g) {
  AffineMap r;
  r.d = f.d;
  r.linear = mat_mul(f.linear, g.linear);
  r.translate = f.apply(g.translate);
  r.contraction = false;  // caller re-derives when it matters
  return r;
}

AffineMap affine_inverse(const AffineMap& f) {
  AffineMap r;
  r.d = f.d;
  r.linear = mat_inverse(f.linear);
  Vec t = r.linear.apply(f.translate);
  for (int k = 0; k < f.d; ++k) r.translate[k] = -t[k];
  r.contraction = false;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// extract the embedding layout from the field's conjugate boxes:
// d=1 -> [real]; d=2 -> [complex +Im]; d=3 -> [real, complex +Im]
struct Layout {
  int d;
  CI real_box;     // valid when d == 1 or d == 3
  CI complex_box;  // valid when d >= 2 (positive imaginary part)
};

Layout layout_for(int field_id, long prec) {
  const NumberField& f = field_for(field_id);
  Layout lay;
  lay.d = f.degree() - 1;
  const auto& boxes = f.conjugate_boxes(prec);
  bool have_c = false, have_r = false;
  for (const auto& cb : boxes) {
    if (cb.real && !have_r) {
      lay.real_box = cb.box;
      have_r = true;
    }
    if (!cb.real && cb.box.im.lo > 0 && !have_c) {
      lay.complex_box = cb.box;
      have_c = true;
    }
  }
  if (lay.d >= 2 && !have_c) throw std::runtime_error("layout_for: missing complex pair");
  if ((lay.d == 1 || lay.d == 3) && !have_r)
    throw std::runtime_error("layout_for: missing real conjugate");
  return lay;
}

std::array<QI, 3> embed_box(const FieldElement& x, const Layout& lay, long prec) {
  QPoly p = qp_normalize(QPoly(x.coeffs().begin(), x.coeffs().end()));
  std::array<QI, 3> r{QI(Q(0)), QI(Q(0)), QI(Q(0))};
  if (lay.d == 1) {
    r[0] = qp_eval_ci(p, lay.real_box).re;
  } else if (lay.d == 2) {
    CI v = qp_eval_ci(p, lay.complex_box);
    r[0] = v.re;
    r[1] = v.im;
  } else {
    r[0] = qp_eval_ci(p, lay.real_box).re;
    CI v = qp_eval_ci(p, lay.complex_box);
    r[1] = v.re;
    r[2] = v.im;
  }
  return r;
}

Mat multiplication_matrix(const FieldElement& x, const Layout& lay, long prec) {
  Mat m;
  m.d = lay.d;
  auto v = embed_box(x, lay, prec);
  if (lay.d == 1) {
    m.a[0][0] = v[0].to_double();
  } else if (lay.d == 2) {
    double re = v[0].to_double(), im = v[1].to_double();
    m.a[0][0] = re;
    m.a[0][1] = -im;
    m.a[1][0] = im;
    m.a[1][1] = re;
  } else {
    double rr = v[0].to_double(), re = v[1].to_double(), im = v[2].to_double();
    m.a[0][0] = rr;
    m.a[1][1] = re;
    m.a[1][2] = -im;
    m.a[2][1] = im;
    m.a[2][2] = re;
  }
  return m;
}

// modulus upper bounds of x at the embeddings attached to the layout blocks
std::vector<double> block_moduli(const FieldElement& x, const Layout& lay, long prec) {
  std::vector<double> mods;
  auto v = embed_box(x, lay, prec);
  auto up = [](const QI& q) {
    return std::max(std::abs(q.lo.get_d()), std::abs(q.hi.get_d())) * (1 + 1e-13);
  };
  if (lay.d == 1) {
    mods.push_back(up(v[0]));
  } else if (lay.d == 2) {
    mods.push_back(std::hypot(up(v[0]), up(v[1])));
  } else {
    mods.push_back(up(v[0]));
    mods.push_back(std::hypot(up(v[1]), up(v[2])));
  }
  return mods;
}

}  // namespace

std::pair<EmbeddingMap, ContractionPair> build_matrices(const SpecialPisotRecord& rec,
                                                        long precision) {
  if (rec.index == 0) throw std::domain_error("build_matrices: alpha_0 has no tent-tile");
  long prec = std::max(precision, 64L);
  Layout lay = layout_for(rec.index, prec);

  EmbeddingMap emb;
  emb.field_id = rec.index;
  emb.precision = prec;
  emb.d = lay.d;
  int deg = field_for(rec.index).degree();
  FieldElement alpha = FieldElement::generator(rec.index);
  FieldElement cur = FieldElement::one(rec.index);
  for (int k = 0; k < deg; ++k) {
    auto b = embed_box(cur, lay, prec);
    emb.basis.push_back(Vec{b[0].to_double(), b[1].to_double(), b[2].to_double()});
    cur = cur * alpha;
  }

  ContractionPair pair;
  pair.d = lay.d;
  FieldElement beta = beta_of(rec);
  pair.A = multiplication_matrix(alpha, lay, prec);
  pair.B = multiplication_matrix(beta, lay, prec);
  pair.psi_one = emb.basis[0];
  pair.mod_A = block_moduli(alpha, lay, prec);
  pair.mod_B = block_moduli(beta, lay, prec);
  pair.norm_A = *std::max_element(pair.mod_A.begin(), pair.mod_A.end());
  pair.norm_B = *std::max_element(pair.mod_B.begin(), pair.mod_B.end());
  return {emb, pair};
}

Vec psi(const FieldElement& x, const EmbeddingMap& emb) {
  if (x.field_id() != emb.field_id)
    throw std::invalid_argument("psi: element from a different field");
  Vec r{0, 0, 0};
  for (size_t k = 0; k < emb.basis.size(); ++k) {
    double c = x.coeffs()[k].get_d();
    for (int i = 0; i < emb.d; ++i) r[i] += c * emb.basis[k][i];
  }
  return r;
}

std::array<QI, 3> psi_interval(const FieldElement& x, long prec_bits) {
  Layout lay = layout_for(x.field_id(), std::max(prec_bits, 64L));
  return embed_box(x, lay, std::max(prec_bits, 64L));
}

std::pair<AffineMap, AffineMap> tent_ifs(const SpecialPisotRecord& rec) {
  auto [emb, pair] = build_matrices(rec, 96);
  AffineMap fl, fr;
  fl.d = pair.d;
  fl.linear = pair.A;
  fl.translate = Vec{0, 0, 0};
  fl.contraction = pair.norm_A < 1;
  fr.d = pair.d;
  fr.linear = mat_scale(pair.B, -1.0);
  fr.translate = pair.B.apply(pair.psi_one);
  fr.contraction = pair.norm_B < 1;
  return {fl, fr};
}

double diam_estimate(const ContractionPair& pair) {
  double psi1 = 0;
  for (int k = 0; k < pair.d; ++k) psi1 += pair.psi_one[k] * pair.psi_one[k];
  double lam = std::max(pair.norm_A, pair.norm_B);
  return 2.0 * std::sqrt(psi1) / (1.0 - lam);
}

int auto_depth(const ContractionPair& pair, double target) {
  double lam = std::max(pair.norm_A, pair.norm_B);
  double diam = diam_estimate(pair);
  int k = 0;
  double s = diam;
  while (s > target / 2 && k < 4000) {
    s *= lam;
    ++k;
  }
  return k;
}

// ----------------------- exact-translate expansion -------------------------

namespace {

struct PieceKey {
  std::int64_t c[4];
  std::int32_t i, j;
  std::int8_t sign;
  bool operator==(const PieceKey& o) const {
    return std::memcmp(this, &o, sizeof(PieceKey)) == 0;
  }
};

struct PieceKeyHash {
  std::size_t operator()(const PieceKey& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    };
    for (int t = 0; t < 4; ++t) mix(static_cast<std::uint64_t>(k.c[t]));
    mix((static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.i)) << 32) ^
        static_cast<std::uint32_t>(k.j) ^ (static_cast<std::uint64_t>(k.sign + 2) << 60));
    return static_cast<std::size_t>(h);
  }
};

std::array<std::int64_t, 4> int_coords(const FieldElement& x) {
  std::array<std::int64_t, 4> c{0, 0, 0, 0};
  for (size_t k = 0; k < x.coeffs().size(); ++k) {
    const Q& q = x.coeffs()[k];
    if (q.get_den() != 1) throw std::runtime_error("int_coords: non-integral coefficient");
    if (!q.get_num().fits_slong_p())
      throw std::overflow_error("int_coords: coefficient exceeds 64 bits");
    c[k] = q.get_num().get_si();
  }
  return c;
}

// shared state for tent-tile expansion
struct TentExpander {
  const SpecialPisotRecord& rec;
  EmbeddingMap emb;
  ContractionPair pair;
  int deg;
  double diam;
  // coords of alpha^i beta^(j+1) for the R-branch translate increments
  std::vector<std::vector<std::array<std::int64_t, 4>>> incr;  // [i][j]
  std::vector<std::vector<FieldElement>> incr_fe;
  FieldElement alpha_fe, beta_fe;

  explicit TentExpander(const SpecialPisotRecord& r) : rec(r) {
    std::tie(emb, pair) = build_matrices(rec, 96);
    deg = field_for(rec.index).degree();
    diam = diam_estimate(pair);
    alpha_fe = FieldElement::generator(rec.index);
    beta_fe = beta_of(rec);
  }

  const std::array<std::int64_t, 4>& increment(int i, int j) {
    while (static_cast<int>(incr_fe.size()) <= i) {
      int ii = static_cast<int>(incr_fe.size());
      incr_fe.emplace_back();
      incr.emplace_back();
      incr_fe.back().push_back(alpha_fe.pow(ii) * beta_fe);  // alpha^i beta
      incr.back().push_back(int_coords(incr_fe.back()[0]));
    }
    while (static_cast<int>(incr[i].size()) <= j) {
      incr_fe[i].push_back(incr_fe[i].back() * beta_fe);
      incr[i].push_back(int_coords(incr_fe[i].back()));
    }
    return incr[i][j];
  }

  // certified upper bound on || A^i B^j || (block-diagonal normal matrices)
  double piece_norm(int i, int j) const {
    double m = 0;
    for (size_t e = 0; e < pair.mod_A.size(); ++e)
      m = std::max(m, std::pow(pair.mod_A[e], i) * std::pow(pair.mod_B[e], j));
    return m * (1 + 1e-12);
  }

  Vec point_of(const std::int64_t* c) const {
    Vec r{0, 0, 0};
    for (int k = 0; k < deg; ++k)
      for (int t = 0; t < emb.d; ++t)
        r[t] += static_cast<double>(c[k]) * emb.basis[k][t];
    return r;
  }
};

PointCloud expand_tent(const SpecialPisotRecord& rec, int max_depth, double target_cell,
                       std::size_t budget) {
  TentExpander ex(rec);
  PointCloud cloud;
  cloud.d = ex.emb.d;

  std::unordered_set<PieceKey, PieceKeyHash> seen;
  std::vector<PieceKey> layer, done;
  PieceKey root{{0, 0, 0, 0}, 0, 0, 1};
  layer.push_back(root);
  seen.insert(root);

  const bool adaptive = max_depth >= (1 << 20);
  int depth = 0;
  bool budget_hit = false;
  while (!layer.empty() && !budget_hit) {
    if (depth >= max_depth) {
      done.insert(done.end(), layer.begin(), layer.end());
      break;
    }
    std::vector<PieceKey> next;
    for (std::size_t pi = 0; pi < layer.size(); ++pi) {
      const PieceKey& p = layer[pi];
      if (adaptive && ex.piece_norm(p.i, p.j) * ex.diam <= target_cell) {
        done.push_back(p);
        continue;
      }
      // L child
      PieceKey l = p;
      l.i += 1;
      if (seen.insert(l).second) next.push_back(l);
      // R child
      PieceKey r = p;
      r.j += 1;
      r.sign = static_cast<std::int8_t>(-p.sign);
      const auto& inc = ex.increment(p.i, p.j);
      for (int k = 0; k < 4; ++k) r.c[k] = p.c[k] + p.sign * inc[k];
      if (seen.insert(r).second) next.push_back(r);
      if (done.size() + next.size() > budget) {
        if (!adaptive)  // explicit-depth mode: give up loudly
          throw std::length_error("render_tent_tile: point budget exceeded");
        // adaptive: stop here; children found so far plus the pieces not
        // yet refined still cover the attractor (redundancy is harmless)
        budget_hit = true;
        done.insert(done.end(), next.begin(), next.end());
        done.insert(done.end(), layer.begin() + static_cast<long>(pi), layer.end());
        break;
      }
    }
    if (budget_hit) break;
    layer = std::move(next);
    // keys carry (i,j), so collisions can only happen within one layer
    seen.clear();
    ++depth;
  }
  if (done.empty()) done = layer;

  double worst = 0;
  for (const PieceKey& p : done) worst = std::max(worst, ex.piece_norm(p.i, p.j));
  cloud.depth = depth;
  cloud.cell_size = worst * ex.diam + 1e-9;
  cloud.points.reserve(done.size());
  std::sort(done.begin(), done.end(), [](const PieceKey& a, const PieceKey& b) {
    return std::memcmp(&a, &b, sizeof(PieceKey)) < 0;
  });
  for (const PieceKey& p : done) cloud.points.push_back(ex.point_of(p.c));
  return cloud;
}

}  // namespace

PointCloud render_tent_tile(const SpecialPisotRecord& rec, int depth,
                            std::size_t point_budget) {
  if (depth < 1) throw std::invalid_argument("render_tent_tile: depth >= 1 required");
  return expand_tent(rec, depth, 0.0, point_budget);
}

PointCloud render_tent_tile_to_cell(const SpecialPisotRecord& rec, double target_cell,
                                    std::size_t point_budget) {
  return expand_tent(rec, 1 << 20, target_cell, point_budget);
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  if (a.d != b.d) throw std::invalid_argument("hausdorff_distance: dimension mismatch");
  return kernels::hausdorff_omp(a.points, b.points, a.d);
}

// ---------------------------------------------------------------------------

namespace {

// exact conjugation in a real quadratic field: alpha -> trace - alpha
FieldElement conjugate_quadratic(const FieldElement& x) {
  const NumberField& f = field_for(x.field_id());
  if (f.degree() != 2) throw std::invalid_argument("conjugate_quadratic: degree != 2");
  Q trace = -f.minpoly()[1];
  // c0 + c1*alpha -> (c0 + c1*trace) - c1*alpha
  std::vector<Q> c = {x.coeffs()[0] + x.coeffs()[1] * trace, -x.coeffs()[1]};
  return FieldElement(x.field_id(), c);
}

struct ExactIv {
  FieldElement lo, hi;
};

// image of [lo,hi] under x -> m*x + t with exact sign handling
ExactIv exact_affine_image(const FieldElement& m, const FieldElement& t, const ExactIv& iv) {
  FieldElement a = m * iv.lo + t;
  FieldElement b = m * iv.hi + t;
  if (cmp_at_dominant_root(a, b) <= 0) return {a, b};
  return {b, a};
}

}  // namespace

ExactInterval tent_interval_exact(int index) {
  if (index != 2 && index != -2)
    throw std::invalid_argument("tent_interval_exact: quadratic records only");
  const SpecialPisotRecord& rec = registry_lookup(index);
  int id = rec.index;
  FieldElement one = FieldElement::one(id);
  FieldElement alpha = FieldElement::generator(id);
  FieldElement A = conjugate_quadratic(alpha);
  FieldElement B = conjugate_quadratic(beta_of(rec));

  ExactIv I;
  FieldElement spacing;  // lattice step, equal to the interval length
  if (index == -2) {
    // [-phi, 0] with phi = alpha - 1 (the dominant root is phi^2)
    I = {one - alpha, FieldElement::zero(id)};
    spacing = alpha - one;
  } else {
    // [(1-phi)/2, 1/2] with phi = alpha
    I = {(one - alpha) * FieldElement::rational(id, Q(1, 2)),
         FieldElement::rational(id, Q(1, 2))};
    spacing = alpha * FieldElement::rational(id, Q(1, 2));
  }

  // f_L: x -> A x,   f_R: x -> B(1 - x) = -B x + B
  ExactIv imL = exact_affine_image(A, FieldElement::zero(id), I);
  ExactIv imR = exact_affine_image(-B, B, I);
  // the union must be exactly I, the two images meeting at a single point
  const ExactIv& left = cmp_at_dominant_root(imL.lo, imR.lo) <= 0 ? imL : imR;
  const ExactIv& right = cmp_at_dominant_root(imL.lo, imR.lo) <= 0 ? imR : imL;
  bool seteq = left.lo == I.lo && right.hi == I.hi && left.hi == right.lo;

  // adjacent lattice translates share exactly one endpoint
  bool lattice = (I.hi - I.lo == spacing) && sign_at_dominant_root(spacing) > 0;

  return ExactInterval{I.lo, I.hi, seteq, lattice};
}

}  // namespace tenttile
