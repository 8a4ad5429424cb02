#include "tenttile/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tenttile {

bool in_xi_sr(const PiClass& c, int letter, const PerronData& pd) {
  if (letter < 0 || letter >= static_cast<int>(pd.u.size()))
    throw std::invalid_argument("in_xi_sr: letter out of range");
  int s = sign_at_dominant_root(c.z);
  if (s < 0) return false;
  return cmp_at_dominant_root(c.z, pd.u[static_cast<size_t>(letter)]) < 0;
}

// ---------------------------------------------------------------------------

namespace {

using Coord = std::array<long long, 4>;

struct VKey {
  std::int8_t a1, a2;
  Coord c;
  bool operator==(const VKey& o) const { return a1 == o.a1 && a2 == o.a2 && c == o.c; }
  bool operator<(const VKey& o) const {
    if (a1 != o.a1) return a1 < o.a1;
    if (a2 != o.a2) return a2 < o.a2;
    return c < o.c;
  }
};

struct VKeyHash {
  std::size_t operator()(const VKey& k) const {
    std::uint64_t h = 0x2545f4914f6cdd1dull;
    for (long long v : k.c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xc2b2ae3d27d4eb4full;
    }
    h ^= (static_cast<std::uint64_t>(static_cast<std::uint8_t>(k.a1)) << 17) ^
         (static_cast<std::uint64_t>(static_cast<std::uint8_t>(k.a2)) << 3);
    return static_cast<std::size_t>(h);
  }
};

// rational matrix acting on module coordinates, with exact integrality check
struct RatMatrix {
  int n = 0;
  long long num[4][4] = {{0}};
  long long den = 1;

  bool apply(const Coord& in, Coord& out) const {
    for (int i = 0; i < n; ++i) {
      __int128 acc = 0;
      for (int j = 0; j < n; ++j) acc += static_cast<__int128>(num[i][j]) * in[static_cast<size_t>(j)];
      if (acc % den != 0) return false;
      __int128 v = acc / den;
      if (v > INT64_MAX / 4 || v < INT64_MIN / 4)
        throw std::overflow_error("boundary: coordinate overflow");
      out[static_cast<size_t>(i)] = static_cast<long long>(v);
    }
    for (int i = n; i < 4; ++i) out[static_cast<size_t>(i)] = 0;
    return true;
  }
};

struct PEdgeInfo {
  int from, to;
  Coord label;
  FieldElement label_z;
};

struct Ctx {
  const SpecialPisotRecord* rec;
  const Correspondence* corr;
  const PerronData* pd;
  int R = 0;  // module rank (= field degree)
  int d = 0;  // contractive dimension
  std::vector<FieldElement> basis;
  QMat coeff_inv;

  std::vector<double> val_mid, val_rad;
  std::vector<std::array<double, 3>> psi_mid, psi_rad;

  RatMatrix div_lambda0;     // z -> z / lambda0
  RatMatrix div_lambda0_m1;  // z -> z / (lambda0 - 1), literal mode
  RatMatrix div_lambda0_p1;  // z -> z / (lambda0 + 1), literal mode

  std::vector<std::vector<PEdgeInfo>> out;
  std::vector<Coord> u_coords;
  std::vector<double> rho;
  double normC = 0;

  FieldElement fe_of(const Coord& c) const {
    FieldElement z = FieldElement::zero(rec->index);
    for (int i = 0; i < R; ++i)
      if (c[static_cast<size_t>(i)] != 0)
        z = z + basis[static_cast<size_t>(i)] *
                    FieldElement::integer(rec->index, c[static_cast<size_t>(i)]);
    return z;
  }

  Coord coords_of(const FieldElement& z) const {
    const std::vector<Q>& rhs = z.coeffs();
    Coord c{0, 0, 0, 0};
    for (int i = 0; i < R; ++i) {
      Q acc(0);
      for (int j = 0; j < R; ++j)
        acc += coeff_inv[static_cast<size_t>(i)][static_cast<size_t>(j)] * rhs[static_cast<size_t>(j)];
      if (acc.get_den() != 1)
        throw std::runtime_error("boundary: class not in the eigenvector module");
      c[static_cast<size_t>(i)] = acc.get_num().get_si();
    }
    return c;
  }

  int val_sign(const Coord& c) const {
    bool zero = true;
    for (int i = 0; i < R; ++i) zero = zero && c[static_cast<size_t>(i)] == 0;
    if (zero) return 0;
    double mid = 0, rad = 1e-12;
    for (int i = 0; i < R; ++i) {
      double v = static_cast<double>(c[static_cast<size_t>(i)]);
      mid += v * val_mid[static_cast<size_t>(i)];
      rad += std::abs(v) * (val_rad[static_cast<size_t>(i)] + 1e-12);
    }
    if (mid - rad > 0) return 1;
    if (mid + rad < 0) return -1;
    return sign_at_dominant_root(fe_of(c));  // rare exact fallback
  }

  int cmp_window(const Coord& c, int a) const {
    Coord diff = c;
    for (int i = 0; i < R; ++i)
      diff[static_cast<size_t>(i)] -= u_coords[static_cast<size_t>(a)][static_cast<size_t>(i)];
    return val_sign(diff);
  }

  void psi_norm2(const Coord& c, double* lo, double* hi) const {
    double n2 = 0, err = 1e-12;
    for (int k = 0; k < d; ++k) {
      double mid = 0, rad = 1e-13;
      for (int i = 0; i < R; ++i) {
        double v = static_cast<double>(c[static_cast<size_t>(i)]);
        mid += v * psi_mid[static_cast<size_t>(i)][static_cast<size_t>(k)];
        rad += std::abs(v) * (psi_rad[static_cast<size_t>(i)][static_cast<size_t>(k)] + 1e-13);
      }
      n2 += mid * mid;
      err += 2 * std::abs(mid) * rad + rad * rad;
    }
    *lo = n2 - err;
    *hi = n2 + err;
  }
};

RatMatrix coord_matrix_of(const Ctx& ctx, const FieldElement& multiplier) {
  int R = ctx.R;
  QMat cols(static_cast<size_t>(R), std::vector<Q>(static_cast<size_t>(R)));
  for (int j = 0; j < R; ++j) {
    FieldElement im = ctx.basis[static_cast<size_t>(j)] * multiplier;
    const std::vector<Q>& rhs = im.coeffs();
    for (int i = 0; i < R; ++i) {
      Q acc(0);
      for (int k = 0; k < R; ++k)
        acc += ctx.coeff_inv[static_cast<size_t>(i)][static_cast<size_t>(k)] * rhs[static_cast<size_t>(k)];
      cols[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc;
    }
  }
  Z den(1);
  for (const auto& row : cols)
    for (const auto& q : row) {
      Z qd = q.get_den();
      den = den / gcd(den, qd) * qd;
    }
  RatMatrix m;
  m.n = R;
  if (!den.fits_slong_p()) throw std::overflow_error("boundary: denominator overflow");
  m.den = den.get_si();
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) {
      Q scaled = cols[static_cast<size_t>(i)][static_cast<size_t>(j)] * Q(den);
      if (scaled.get_den() != 1) throw std::runtime_error("coord_matrix_of: scaling failed");
      m.num[i][j] = scaled.get_num().get_si();
    }
  return m;
}

Ctx make_context(const SpecialPisotRecord& rec, const Correspondence& corr,
                 const PerronData& pd) {
  Ctx ctx;
  ctx.rec = &rec;
  ctx.corr = &corr;
  ctx.pd = &pd;
  int deg = field_for(rec.index).degree();
  ctx.R = deg;
  ctx.d = deg - 1;

  // module basis from the eigenvector entries (scaled Hermite form)
  Z scale(1);
  for (const auto& ui : pd.u)
    for (const auto& q : ui.coeffs()) {
      Z den = q.get_den();
      scale = scale / gcd(scale, den) * den;
    }
  ZMat gens;
  for (const auto& ui : pd.u) {
    std::vector<Z> row;
    for (const auto& q : ui.coeffs()) row.push_back(q.get_num() * (scale / q.get_den()));
    gens.push_back(std::move(row));
  }
  ZMat hnf = zmat_hnf(std::move(gens));
  if (static_cast<int>(hnf.size()) != deg)
    throw std::runtime_error("boundary: eigenvector module rank != field degree");
  QMat coeff(static_cast<size_t>(deg), std::vector<Q>(static_cast<size_t>(deg)));
  for (int i = 0; i < deg; ++i) {
    std::vector<Q> c(static_cast<size_t>(deg));
    for (int j = 0; j < deg; ++j) {
      Q q(hnf[static_cast<size_t>(i)][static_cast<size_t>(j)], scale);
      q.canonicalize();
      c[static_cast<size_t>(j)] = q;
      coeff[static_cast<size_t>(j)][static_cast<size_t>(i)] = q;  // column i = basis_i
    }
    ctx.basis.push_back(FieldElement(rec.index, c));
  }
  ctx.coeff_inv = qmat_inverse(coeff);

  for (int i = 0; i < deg; ++i) {
    QI v = value_at_dominant_root(ctx.basis[static_cast<size_t>(i)], 96);
    ctx.val_mid.push_back(v.mid().get_d());
    ctx.val_rad.push_back(v.width().get_d() + 1e-15);
    auto box = psi_interval(ctx.basis[static_cast<size_t>(i)], 96);
    std::array<double, 3> mid{0, 0, 0}, rad{0, 0, 0};
    for (int k = 0; k < ctx.d; ++k) {
      mid[static_cast<size_t>(k)] = box[static_cast<size_t>(k)].mid().get_d();
      rad[static_cast<size_t>(k)] = box[static_cast<size_t>(k)].width().get_d() + 1e-15;
    }
    ctx.psi_mid.push_back(mid);
    ctx.psi_rad.push_back(rad);
  }

  FieldElement one = FieldElement::one(rec.index);
  ctx.div_lambda0 = coord_matrix_of(ctx, pd.lambda0.inverse());
  ctx.div_lambda0_m1 = coord_matrix_of(ctx, (pd.lambda0 - one).inverse());
  ctx.div_lambda0_p1 = coord_matrix_of(ctx, (pd.lambda0 + one).inverse());

  PrefixGraph pg = prefix_graph(corr.sigma);
  ctx.out.resize(static_cast<size_t>(corr.sigma.alphabet));
  for (const auto& e : pg.edges) {
    PEdgeInfo info;
    info.from = e.from;
    info.to = e.to;
    info.label_z = pi_of_word(e.label, pd).z;
    info.label = ctx.coords_of(info.label_z);
    ctx.out[static_cast<size_t>(e.from)].push_back(std::move(info));
  }

  for (const auto& ui : pd.u) ctx.u_coords.push_back(ctx.coords_of(ui));

  double l1 = pd.lambda1_mod.hi.get_d() * (1 + 1e-14);
  double maxlab = 0;
  std::vector<std::vector<double>> labnorm(ctx.out.size());
  for (size_t a = 0; a < ctx.out.size(); ++a)
    for (const auto& e : ctx.out[a]) {
      double lo, hi;
      ctx.psi_norm2(e.label, &lo, &hi);
      double nval = std::sqrt(std::max(0.0, hi)) * (1 + 1e-14);
      labnorm[a].push_back(nval);
      maxlab = std::max(maxlab, nval);
    }
  ctx.normC = 2.0 * maxlab / (1.0 - l1) + 1e-12;

  ctx.rho = subtile_norm_bounds(corr, pd);
  return ctx;
}

struct Normalized {
  bool ok = false;
  VKey key;
};

Normalized normalize_triple(const Ctx& ctx, int b1, const Coord& c, int b2) {
  Normalized nrm;
  int s = ctx.val_sign(c);
  if (s > 0) {
    nrm.ok = true;
    nrm.key = {static_cast<std::int8_t>(b1), static_cast<std::int8_t>(b2), c};
  } else if (s < 0) {
    Coord neg{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) neg[static_cast<size_t>(i)] = -c[static_cast<size_t>(i)];
    nrm.ok = true;
    nrm.key = {static_cast<std::int8_t>(b2), static_cast<std::int8_t>(b1), neg};
  } else if (b1 != b2) {
    nrm.ok = true;
    nrm.key = {static_cast<std::int8_t>(std::min(b1, b2)),
               static_cast<std::int8_t>(std::max(b1, b2)), Coord{0, 0, 0, 0}};
  }
  return nrm;
}

bool pair_norm_ok(const Ctx& ctx, const VKey& k) {
  // nonempty intersections lie within the sum of the subtile norm bounds
  double lo, hi;
  ctx.psi_norm2(k.c, &lo, &hi);
  double bound = ctx.rho[static_cast<size_t>(k.a1)] + ctx.rho[static_cast<size_t>(k.a2)];
  return lo <= bound * bound;
}

bool sr_window_ok(const Ctx& ctx, const VKey& k) {
  // membership of (z, a2) in the self-replicating translation set, plus the
  // pairwise attractor-norm bound
  if (ctx.cmp_window(k.c, k.a2) >= 0) return false;
  return pair_norm_ok(ctx, k);
}

std::vector<Coord> enumerate_window(const Ctx& ctx, double w_hi, double radius) {
  int R = ctx.R;
  std::vector<std::vector<double>> rows(static_cast<size_t>(R),
                                        std::vector<double>(static_cast<size_t>(R)));
  // scale so that [0,W] x ball(radius) sits inside the unit ball around
  // (sqrt2/2, 0, ..): axis semi-lengths W/sqrt2 and radius*sqrt2
  double s0 = std::sqrt(2.0) / std::max(w_hi, 1e-9);
  double s1 = 1.0 / (std::sqrt(2.0) * std::max(radius, 1e-9));
  for (int i = 0; i < R; ++i) {
    rows[static_cast<size_t>(i)][0] = ctx.val_mid[static_cast<size_t>(i)] * s0;
    for (int k = 0; k < ctx.d; ++k)
      rows[static_cast<size_t>(i)][static_cast<size_t>(k + 1)] =
          ctx.psi_mid[static_cast<size_t>(i)][static_cast<size_t>(k)] * s1;
  }
  IMat u = lll_reduce(rows);
  std::vector<double> center(static_cast<size_t>(R), 0.0);
  center[0] = std::sqrt(2.0) / 2.0;
  std::vector<Coord> found;
  sphere_enumerate(rows, center, 1.0 + 1e-6, [&](const std::vector<long long>& x) {
    Coord c{0, 0, 0, 0};
    for (int i = 0; i < R; ++i) {
      __int128 acc = 0;
      for (int j = 0; j < R; ++j)
        acc += static_cast<__int128>(x[static_cast<size_t>(j)]) *
               u[static_cast<size_t>(j)][static_cast<size_t>(i)];
      c[static_cast<size_t>(i)] = static_cast<long long>(acc);
    }
    found.push_back(c);
  });
  return found;
}

}  // namespace

// ---------------------------------------------------------------------------

bool quotient_map_condition(const Correspondence& corr, const PerronData& pd) {
  int deg = field_for(pd.field_id).degree();
  int dgen = deg - 1;
  int n = corr.sigma.alphabet;
  if (n <= dgen) return false;
  Z scale(1);
  auto denlcm = [&](const FieldElement& f) {
    for (const auto& q : f.coeffs()) {
      Z den = q.get_den();
      scale = scale / gcd(scale, den) * den;
    }
  };
  std::vector<FieldElement> gens;
  for (int i = 1; i <= dgen; ++i) gens.push_back(pd.u[static_cast<size_t>(i)] - pd.u[0]);
  for (const auto& g : gens) denlcm(g);
  for (int a = 0; a < n; ++a) denlcm(pd.u[static_cast<size_t>(a)] - pd.u[0]);
  auto int_row = [&](const FieldElement& f) {
    std::vector<Z> row;
    for (const auto& q : f.coeffs()) row.push_back(q.get_num() * (scale / q.get_den()));
    return row;
  };
  ZMat gmat;
  for (const auto& g : gens) gmat.push_back(int_row(g));
  ZMat ghnf = zmat_hnf(gmat);
  if (static_cast<int>(ghnf.size()) != dgen) return false;
  for (int a = 0; a < n; ++a) {
    ZMat aug = ghnf;
    aug.push_back(int_row(pd.u[static_cast<size_t>(a)] - pd.u[0]));
    if (!(zmat_hnf(aug) == ghnf)) return false;
  }
  return true;
}

std::vector<FieldElement> xi_lat_basis(const SpecialPisotRecord& rec,
                                       const Correspondence& corr,
                                       const PerronData& pd) {
  (void)rec;
  if (!quotient_map_condition(corr, pd))
    throw std::domain_error("xi_lat_basis: quotient map condition fails");
  int dgen = field_for(pd.field_id).degree() - 1;
  std::vector<FieldElement> basis;
  for (int i = 1; i <= dgen; ++i) basis.push_back(pd.u[static_cast<size_t>(i)] - pd.u[0]);
  return basis;
}

double norm_bound(const Correspondence& corr, const PerronData& pd) {
  double l1 = pd.lambda1_mod.hi.get_d() * (1 + 1e-14);
  double maxlab = 0;
  for (const auto& e : prefix_graph(corr.sigma).edges) {
    FieldElement z = pi_of_word(e.label, pd).z;
    auto box = psi_interval(z, 96);
    double n2 = 0;
    for (int k = 0; k < 3; ++k) {
      double m = std::max(std::abs(box[static_cast<size_t>(k)].lo.get_d()),
                          std::abs(box[static_cast<size_t>(k)].hi.get_d()));
      n2 += m * m;
    }
    maxlab = std::max(maxlab, std::sqrt(n2));
  }
  return 2.0 * maxlab * (1 + 1e-13) / (1.0 - l1);
}

// ---------------------------------------------------------------------------

BoundaryGraph build_boundary_graph(const SpecialPisotRecord& rec,
                                   const Correspondence& corr, const PerronData& pd,
                                   BoundaryVariant variant,
                                   const BoundaryBuildOptions& opts) {
  if (corr.family == "interval")
    throw std::domain_error("build_boundary_graph: record has no substitution");
  Ctx ctx = make_context(rec, corr, pd);
  const bool sr = variant == BoundaryVariant::kSelfReplicating;
  const std::size_t vertex_budget = 20'000'000;

  std::vector<VKey> verts;
  std::unordered_map<VKey, int, VKeyHash> index;
  std::vector<char> is_seed;

  auto add_vertex = [&](const VKey& k, bool seed) -> int {
    auto it = index.find(k);
    if (it != index.end()) {
      if (seed) is_seed[static_cast<size_t>(it->second)] = 1;
      return it->second;
    }
    int id = static_cast<int>(verts.size());
    verts.push_back(k);
    is_seed.push_back(seed ? 1 : 0);
    index.emplace(k, id);
    if (verts.size() > vertex_budget)
      throw std::length_error("build_boundary_graph: vertex budget exceeded");
    return id;
  };

  int alphabet = corr.sigma.alphabet;

  if (sr) {
    for (int a2 = 0; a2 < alphabet; ++a2) {
      double w_hi;
      {
        double mid = 0, rad = 0;
        for (int i = 0; i < ctx.R; ++i) {
          double v = static_cast<double>(
              ctx.u_coords[static_cast<size_t>(a2)][static_cast<size_t>(i)]);
          mid += v * ctx.val_mid[static_cast<size_t>(i)];
          rad += std::abs(v) * ctx.val_rad[static_cast<size_t>(i)];
        }
        w_hi = mid + rad + 1e-9;
      }
      double radius = 0;
      for (int a1 = 0; a1 < alphabet; ++a1)
        radius = std::max(radius,
                          ctx.rho[static_cast<size_t>(a1)] + ctx.rho[static_cast<size_t>(a2)]);
      auto pts = enumerate_window(ctx, w_hi, radius * 1.02);
      for (const Coord& c : pts) {
        int s = ctx.val_sign(c);
        if (s < 0) continue;
        if (ctx.cmp_window(c, a2) >= 0) continue;
        for (int a1 = 0; a1 < alphabet; ++a1) {
          if (s == 0 && a1 >= a2) continue;
          VKey k{static_cast<std::int8_t>(a1), static_cast<std::int8_t>(a2), c};
          if (!sr_window_ok(ctx, k)) continue;
          add_vertex(k, true);
        }
      }
    }
  } else {
    std::vector<FieldElement> lbasis = xi_lat_basis(rec, corr, pd);
    int nl = static_cast<int>(lbasis.size());
    std::vector<Coord> lcoords;
    for (const auto& b : lbasis) lcoords.push_back(ctx.coords_of(b));
    std::vector<std::vector<double>> rows(static_cast<size_t>(nl),
                                          std::vector<double>(static_cast<size_t>(ctx.d)));
    for (int i = 0; i < nl; ++i)
      for (int k = 0; k < ctx.d; ++k) {
        double m = 0;
        for (int j = 0; j < ctx.R; ++j)
          m += static_cast<double>(lcoords[static_cast<size_t>(i)][static_cast<size_t>(j)]) *
               ctx.psi_mid[static_cast<size_t>(j)][static_cast<size_t>(k)];
        rows[static_cast<size_t>(i)][static_cast<size_t>(k)] = m;
      }
    IMat u = lll_reduce(rows);
    std::vector<double> center(static_cast<size_t>(ctx.d), 0.0);
    double seed_radius = 0;
    for (size_t a1 = 0; a1 < ctx.rho.size(); ++a1)
      for (size_t a2 = 0; a2 < ctx.rho.size(); ++a2)
        seed_radius = std::max(seed_radius, ctx.rho[a1] + ctx.rho[a2]);
    sphere_enumerate(
        rows, center, seed_radius * (1 + 1e-9), [&](const std::vector<long long>& x) {
          Coord c{0, 0, 0, 0};
          bool nonzero = false;
          for (int i = 0; i < nl; ++i) {
            long long xi = 0;
            for (int j = 0; j < nl; ++j)
              xi += x[static_cast<size_t>(j)] * u[static_cast<size_t>(j)][static_cast<size_t>(i)];
            if (xi != 0) nonzero = true;
            for (int t = 0; t < ctx.R; ++t)
              c[static_cast<size_t>(t)] +=
                  xi * lcoords[static_cast<size_t>(i)][static_cast<size_t>(t)];
          }
          if (!nonzero) return;
          if (ctx.val_sign(c) <= 0) return;  // normalized half
          for (int a1 = 0; a1 < alphabet; ++a1)
            for (int a2 = 0; a2 < alphabet; ++a2) {
              VKey k{static_cast<std::int8_t>(a1), static_cast<std::int8_t>(a2), c};
              if (pair_norm_ok(ctx, k)) add_vertex(k, true);
            }
        });
  }

  // forward pass: edges, plus closure for the lattice variant
  auto targets_of = [&](const VKey& v, bool allow_new, std::vector<int>* out_ids,
                        std::vector<int>* new_ids) {
    for (const auto& e1 : ctx.out[static_cast<size_t>(v.a1)]) {
      for (const auto& e2 : ctx.out[static_cast<size_t>(v.a2)]) {
        std::vector<VKey> cands;
        if (!opts.literal_edge_equation) {
          Coord t{0, 0, 0, 0};
          for (int r = 0; r < ctx.R; ++r)
            t[static_cast<size_t>(r)] = v.c[static_cast<size_t>(r)] +
                                        e2.label[static_cast<size_t>(r)] -
                                        e1.label[static_cast<size_t>(r)];
          Coord c2{0, 0, 0, 0};
          if (ctx.div_lambda0.apply(t, c2)) {
            Normalized nrm = normalize_triple(ctx, e1.to, c2, e2.to);
            if (nrm.ok) cands.push_back(nrm.key);
          }
        } else {
          Coord t{0, 0, 0, 0};
          for (int r = 0; r < ctx.R; ++r)
            t[static_cast<size_t>(r)] =
                e2.label[static_cast<size_t>(r)] - e1.label[static_cast<size_t>(r)];
          Coord cA{0, 0, 0, 0};
          if (ctx.div_lambda0_m1.apply(t, cA)) {
            int s = ctx.val_sign(cA);
            if (s > 0 || (s == 0 && e1.to < e2.to))
              cands.push_back(VKey{static_cast<std::int8_t>(e1.to),
                                   static_cast<std::int8_t>(e2.to), cA});
          }
          Coord tB{0, 0, 0, 0};
          for (int r = 0; r < ctx.R; ++r)
            tB[static_cast<size_t>(r)] = -t[static_cast<size_t>(r)];
          Coord cB{0, 0, 0, 0};
          if (ctx.div_lambda0_p1.apply(tB, cB)) {
            int s = ctx.val_sign(cB);
            if (s > 0 || (s == 0 && e2.to < e1.to))
              cands.push_back(VKey{static_cast<std::int8_t>(e2.to),
                                   static_cast<std::int8_t>(e1.to), cB});
          }
        }
        for (const VKey& key : cands) {
          bool admissible = sr ? sr_window_ok(ctx, key) : pair_norm_ok(ctx, key);
          if (!admissible) continue;
          auto it = index.find(key);
          if (it != index.end()) {
            out_ids->push_back(it->second);
          } else if (allow_new) {
            int tid = add_vertex(key, false);
            out_ids->push_back(tid);
            if (new_ids) new_ids->push_back(tid);
          }
        }
      }
    }
  };

  std::vector<std::pair<int, int>> arcs;
  {
    std::vector<int> work;
    for (int i = 0; i < static_cast<int>(verts.size()); ++i) work.push_back(i);
    std::size_t head = 0;
    while (head < work.size()) {
      int vid = work[head++];
      VKey v = verts[static_cast<size_t>(vid)];
      std::vector<int> tgt, fresh;
      targets_of(v, /*allow_new=*/!sr, &tgt, &fresh);
      for (int nid : fresh) work.push_back(nid);
      std::sort(tgt.begin(), tgt.end());
      tgt.erase(std::unique(tgt.begin(), tgt.end()), tgt.end());
      for (int t : tgt) arcs.emplace_back(vid, t);
    }
  }

  // condition (3): largest subgraph whose vertices all lie on an infinite
  // walk starting from a seed
  int nverts = static_cast<int>(verts.size());
  std::vector<char> alive(static_cast<size_t>(nverts), 1);
  {
    std::vector<int> outdeg(static_cast<size_t>(nverts), 0);
    std::vector<std::vector<int>> rev(static_cast<size_t>(nverts));
    std::vector<std::vector<int>> fwd(static_cast<size_t>(nverts));
    for (auto [f, t] : arcs) {
      ++outdeg[static_cast<size_t>(f)];
      rev[static_cast<size_t>(t)].push_back(f);
      fwd[static_cast<size_t>(f)].push_back(t);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      std::queue<int> dead;
      for (int i = 0; i < nverts; ++i)
        if (alive[static_cast<size_t>(i)] && outdeg[static_cast<size_t>(i)] == 0) dead.push(i);
      while (!dead.empty()) {
        int v = dead.front();
        dead.pop();
        if (!alive[static_cast<size_t>(v)]) continue;
        alive[static_cast<size_t>(v)] = 0;
        changed = true;
        for (int p : rev[static_cast<size_t>(v)])
          if (alive[static_cast<size_t>(p)] && --outdeg[static_cast<size_t>(p)] == 0)
            dead.push(p);
      }
      std::vector<char> reach(static_cast<size_t>(nverts), 0);
      std::queue<int> bfs;
      for (int i = 0; i < nverts; ++i)
        if (alive[static_cast<size_t>(i)] && is_seed[static_cast<size_t>(i)]) {
          reach[static_cast<size_t>(i)] = 1;
          bfs.push(i);
        }
      while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int t : fwd[static_cast<size_t>(v)])
          if (alive[static_cast<size_t>(t)] && !reach[static_cast<size_t>(t)]) {
            reach[static_cast<size_t>(t)] = 1;
            bfs.push(t);
          }
      }
      for (int i = 0; i < nverts; ++i)
        if (alive[static_cast<size_t>(i)] && !reach[static_cast<size_t>(i)]) {
          alive[static_cast<size_t>(i)] = 0;
          changed = true;
          for (int p : rev[static_cast<size_t>(i)])
            if (alive[static_cast<size_t>(p)]) --outdeg[static_cast<size_t>(p)];
        }
    }
  }

  std::vector<int> keep;
  for (int i = 0; i < nverts; ++i)
    if (alive[static_cast<size_t>(i)]) keep.push_back(i);
  std::sort(keep.begin(), keep.end(), [&](int x, int y) {
    return verts[static_cast<size_t>(x)] < verts[static_cast<size_t>(y)];
  });
  std::vector<int> newid(static_cast<size_t>(nverts), -1);
  for (size_t i = 0; i < keep.size(); ++i)
    newid[static_cast<size_t>(keep[i])] = static_cast<int>(i);

  BoundaryGraph g;
  g.variant = variant;
  int m = static_cast<int>(keep.size());
  g.adjacency.assign(static_cast<size_t>(m), std::vector<Z>(static_cast<size_t>(m), 0));
  for (int i = 0; i < m; ++i) {
    const VKey& k = verts[static_cast<size_t>(keep[static_cast<size_t>(i)])];
    g.vertices.push_back(BoundaryVertex{k.a1, k.a2, ctx.fe_of(k.c)});
    if (is_seed[static_cast<size_t>(keep[static_cast<size_t>(i)])]) g.seeds.push_back(i);
  }

  // final labelled pass: edges are a set of (source, label, target)
  std::map<std::tuple<int, int, Coord>, bool> edge_set;
  for (int i = 0; i < m; ++i) {
    const VKey& v = verts[static_cast<size_t>(keep[static_cast<size_t>(i)])];
    for (const auto& e1 : ctx.out[static_cast<size_t>(v.a1)]) {
      for (const auto& e2 : ctx.out[static_cast<size_t>(v.a2)]) {
        std::vector<VKey> cands;
        if (!opts.literal_edge_equation) {
          Coord t{0, 0, 0, 0};
          for (int r = 0; r < ctx.R; ++r)
            t[static_cast<size_t>(r)] = v.c[static_cast<size_t>(r)] +
                                        e2.label[static_cast<size_t>(r)] -
                                        e1.label[static_cast<size_t>(r)];
          Coord c2{0, 0, 0, 0};
          if (ctx.div_lambda0.apply(t, c2)) {
            Normalized nrm = normalize_triple(ctx, e1.to, c2, e2.to);
            if (nrm.ok) cands.push_back(nrm.key);
          }
        } else {
          Coord t{0, 0, 0, 0};
          for (int r = 0; r < ctx.R; ++r)
            t[static_cast<size_t>(r)] =
                e2.label[static_cast<size_t>(r)] - e1.label[static_cast<size_t>(r)];
          Coord cA{0, 0, 0, 0};
          if (ctx.div_lambda0_m1.apply(t, cA)) {
            int s = ctx.val_sign(cA);
            if (s > 0 || (s == 0 && e1.to < e2.to))
              cands.push_back(VKey{static_cast<std::int8_t>(e1.to),
                                   static_cast<std::int8_t>(e2.to), cA});
          }
          Coord tB{0, 0, 0, 0};
          for (int r = 0; r < ctx.R; ++r)
            tB[static_cast<size_t>(r)] = -t[static_cast<size_t>(r)];
          Coord cB{0, 0, 0, 0};
          if (ctx.div_lambda0_p1.apply(tB, cB)) {
            int s = ctx.val_sign(cB);
            if (s > 0 || (s == 0 && e2.to < e1.to))
              cands.push_back(VKey{static_cast<std::int8_t>(e2.to),
                                   static_cast<std::int8_t>(e1.to), cB});
          }
        }
        for (const VKey& key : cands) {
          auto it = index.find(key);
          if (it == index.end()) continue;
          int tid = newid[static_cast<size_t>(it->second)];
          if (tid < 0) continue;
          // label rule: pi ell(U1) when <ell(U1),u> <= <ell(U2)+x,u>
          Coord diff{0, 0, 0, 0};
          for (int r = 0; r < ctx.R; ++r)
            diff[static_cast<size_t>(r)] = e1.label[static_cast<size_t>(r)] -
                                           e2.label[static_cast<size_t>(r)] -
                                           v.c[static_cast<size_t>(r)];
          Coord lab{0, 0, 0, 0};
          if (ctx.val_sign(diff) <= 0) {
            lab = e1.label;
          } else {
            for (int r = 0; r < ctx.R; ++r)
              lab[static_cast<size_t>(r)] =
                  e2.label[static_cast<size_t>(r)] + v.c[static_cast<size_t>(r)];
          }
          auto tup = std::make_tuple(i, tid, lab);
          if (edge_set.emplace(tup, true).second) {
            g.adjacency[static_cast<size_t>(i)][static_cast<size_t>(tid)] += 1;
            g.edges.push_back(BoundaryEdge{i, tid, ctx.fe_of(lab)});
          }
        }
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

DominantEigen graph_dominant_eigenvalue(const BoundaryGraph& g) {
  if (g.vertices.empty())
    throw std::runtime_error("graph_dominant_eigenvalue: empty graph");
  DominantEigen de;
  de.charpoly = zmat_charpoly(g.adjacency);
  auto root = dominant_real_root(zp_to_qp(de.charpoly), q_pow2(45));
  if (!root) throw std::runtime_error("graph_dominant_eigenvalue: no real root");
  de.root = *root;
  return de;
}

bool tiling_property(const DominantEigen& mu, const PerronData& pd) {
  QPoly sf = qp_squarefree(zp_to_qp(mu.charpoly));
  QI muiv = mu.root;
  for (long prec = 64; prec <= 4096; prec *= 2) {
    QI lam = value_at_dominant_root(pd.lambda0, prec);
    refine_root(sf, muiv, q_pow2(prec));
    if (qi_disjoint(muiv, lam)) return muiv.hi < lam.lo;
  }
  throw std::runtime_error("tiling_property: comparison undecided at 4096 bits");
}

bool dominant_roots_equal(const DominantEigen& a, const DominantEigen& b) {
  QPoly pa = qp_squarefree(zp_to_qp(a.charpoly));
  QPoly pb = qp_squarefree(zp_to_qp(b.charpoly));
  QPoly g = qp_gcd(pa, pb);
  QI ia = a.root, ib = b.root;
  for (long prec = 64; prec <= 4096; prec *= 2) {
    refine_root(pa, ia, q_pow2(prec));
    refine_root(pb, ib, q_pow2(prec));
    if (qi_disjoint(ia, ib)) return false;
    if (qp_deg(g) < 1) return false;
    QI hull = qi_hull(ia, ib);
    int slo = qp_sign_at(g, hull.lo), shi = qp_sign_at(g, hull.hi);
    if (slo != 0 && shi != 0 && slo != shi) return true;  // common root inside
  }
  throw std::runtime_error("dominant_roots_equal: undecided at 4096 bits");
}

DimensionReport dimension_report(const PerronData& pd, const DominantEigen& mu) {
  DimensionReport rep;
  rep.mu_charpoly = mu.charpoly;
  rep.sr_tiling_proper = tiling_property(mu, pd);
  if (!rep.sr_tiling_proper)
    throw std::domain_error("dimension_report: mu_sr >= lambda0");
  QI lam = value_at_dominant_root(pd.lambda0, 96);
  rep.lambda0 = lam.to_double();
  rep.mu_sr = mu.root.to_double();
  rep.lambda_d = std::sqrt(ci_abs2(pd.contracting.back()).to_double());
  int d = static_cast<int>(pd.contracting.size());
  rep.box_dimension =
      d + (std::log(rep.lambda0) - std::log(rep.mu_sr)) / std::log(rep.lambda_d);
  rep.hausdorff_equality = pd.contracting.size() == 2 &&
                           !pd.contracting[0].is_real() && !pd.contracting[1].is_real();
  return rep;
}

std::string boundary_graph_to_json(const BoundaryGraph& g) {
  std::ostringstream os;
  auto coeffs_of = [](const FieldElement& z) {
    std::ostringstream s;
    s << "[";
    for (size_t i = 0; i < z.coeffs().size(); ++i) {
      if (i) s << ", ";
      s << "\"" << z.coeffs()[i].get_str() << "\"";
    }
    s << "]";
    return s.str();
  };
  os << "{\"variant\": \""
     << (g.variant == BoundaryVariant::kSelfReplicating ? "sr" : "lat") << "\", ";
  os << "\"vertices\": [";
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    if (i) os << ", ";
    os << "[" << g.vertices[i].a1 << ", " << coeffs_of(g.vertices[i].z) << ", "
       << g.vertices[i].a2 << "]";
  }
  os << "], \"edges\": [";
  for (size_t i = 0; i < g.edges.size(); ++i) {
    if (i) os << ", ";
    os << "[" << g.edges[i].from << ", " << g.edges[i].to << ", "
       << coeffs_of(g.edges[i].label) << "]";
  }
  os << "]}";
  return os.str();
}

std::string adjacency_to_csv(const BoundaryGraph& g) {
  std::ostringstream os;
  for (const auto& row : g.adjacency) {
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) os << ",";
      os << row[j].get_str();
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace tenttile
