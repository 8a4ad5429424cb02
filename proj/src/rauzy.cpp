#include "tenttile/rauzy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_set>

#include "tenttile/kernels.hpp"

namespace tenttile {

RauzyGifs rauzy_gifs(const Correspondence& corr, const PerronData& pd,
                     const SpecialPisotRecord& rec) {
  if (corr.family == "interval")
    throw std::domain_error("rauzy_gifs: record handled exactly in one dimension");
  if (!is_primitive(corr.sigma)) throw std::invalid_argument("rauzy_gifs: not primitive");
  Z det = zmat_det(incidence_matrix(corr.sigma));
  if (det != 1 && det != -1) throw std::invalid_argument("rauzy_gifs: not unimodular");
  if (!(pd.lambda1_mod.hi < 1)) throw std::invalid_argument("rauzy_gifs: not Pisot");

  RauzyGifs g;
  g.graph = prefix_graph(corr.sigma);
  std::tie(g.emb, g.pair) = build_matrices(rec, 96);
  g.h = h_matrix(pd, g.pair);
  for (const auto& e : g.graph.edges)
    g.translations.push_back(pi_numeric(pi_of_word(e.label, pd), g.emb));
  return g;
}

namespace {

struct WalkKey {
  std::int64_t c[4];
  std::int32_t letter;
  bool operator==(const WalkKey& o) const {
    return std::memcmp(this, &o, sizeof(WalkKey)) == 0;
  }
};

struct WalkKeyHash {
  std::size_t operator()(const WalkKey& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (long long v : k.c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    h ^= static_cast<std::uint32_t>(k.letter);
    return static_cast<std::size_t>(h);
  }
};

struct RauzyExpander {
  const Correspondence* corr;
  const PerronData* pd;
  const RauzyGifs* gifs;
  int R = 0;
  std::vector<FieldElement> basis;
  QMat coeff_inv;
  std::vector<std::array<double, 3>> basis_psi;
  long long mult[4][4] = {{0}};  // multiplication by lambda0 on the module
  std::vector<std::array<long long, 4>> label_c;
  std::vector<std::vector<int>> edges_from;
  std::vector<Vec> base_pt;
  std::vector<double> rho;

  std::array<long long, 4> coords_of(const FieldElement& z) const {
    const std::vector<Q>& rhs = z.coeffs();
    std::array<long long, 4> c{0, 0, 0, 0};
    for (int i = 0; i < R; ++i) {
      Q acc(0);
      for (int j = 0; j < R; ++j)
        acc += coeff_inv[static_cast<size_t>(i)][static_cast<size_t>(j)] *
               rhs[static_cast<size_t>(j)];
      if (acc.get_den() != 1)
        throw std::runtime_error("render_rauzy: class not in the module");
      c[static_cast<size_t>(i)] = acc.get_num().get_si();
    }
    return c;
  }

  std::vector<int> shortest_cycle(int a) const {
    struct Node {
      int letter, parent, via;
    };
    std::vector<Node> pool{{a, -1, -1}};
    std::vector<char> seen(static_cast<size_t>(gifs->graph.n), 0);
    std::size_t head = 0;
    while (head < pool.size()) {
      Node cur = pool[head];
      for (int ei : edges_from[static_cast<size_t>(cur.letter)]) {
        int to = gifs->graph.edges[static_cast<size_t>(ei)].to;
        if (to == a) {
          std::vector<int> path{ei};
          int p = static_cast<int>(head);
          while (pool[static_cast<size_t>(p)].via >= 0) {
            path.push_back(pool[static_cast<size_t>(p)].via);
            p = pool[static_cast<size_t>(p)].parent;
          }
          std::reverse(path.begin(), path.end());
          return path;
        }
        if (!seen[static_cast<size_t>(to)]) {
          seen[static_cast<size_t>(to)] = 1;
          pool.push_back({to, static_cast<int>(head), ei});
        }
      }
      ++head;
    }
    throw std::runtime_error("render_rauzy: letter lies on no cycle");
  }

  void init(const SpecialPisotRecord& rec) {
    R = field_for(rec.index).degree();
    Z scale(1);
    for (const auto& ui : pd->u)
      for (const auto& q : ui.coeffs()) {
        Z den = q.get_den();
        scale = scale / gcd(scale, den) * den;
      }
    ZMat gens;
    for (const auto& ui : pd->u) {
      std::vector<Z> row;
      for (const auto& q : ui.coeffs()) row.push_back(q.get_num() * (scale / q.get_den()));
      gens.push_back(std::move(row));
    }
    ZMat hnf = zmat_hnf(std::move(gens));
    if (static_cast<int>(hnf.size()) != R)
      throw std::runtime_error("render_rauzy: module rank mismatch");
    QMat coeff(static_cast<size_t>(R), std::vector<Q>(static_cast<size_t>(R)));
    for (int i = 0; i < R; ++i) {
      std::vector<Q> c(static_cast<size_t>(R));
      for (int j = 0; j < R; ++j) {
        Q q(hnf[static_cast<size_t>(i)][static_cast<size_t>(j)], scale);
        q.canonicalize();
        c[static_cast<size_t>(j)] = q;
        coeff[static_cast<size_t>(j)][static_cast<size_t>(i)] = q;
      }
      basis.push_back(FieldElement(rec.index, c));
    }
    coeff_inv = qmat_inverse(coeff);
    for (int i = 0; i < R; ++i) {
      auto box = psi_interval(basis[static_cast<size_t>(i)], 96);
      basis_psi.push_back({box[0].to_double(), box[1].to_double(), box[2].to_double()});
    }
    for (int j = 0; j < R; ++j) {
      FieldElement im = basis[static_cast<size_t>(j)] * pd->lambda0;
      auto c = coords_of(im);
      for (int i = 0; i < R; ++i) mult[i][j] = c[static_cast<size_t>(i)];
    }
    for (const auto& e : gifs->graph.edges)
      label_c.push_back(coords_of(pi_of_word(e.label, *pd).z));
    edges_from.resize(static_cast<size_t>(gifs->graph.n));
    for (size_t i = 0; i < gifs->graph.edges.size(); ++i)
      edges_from[static_cast<size_t>(gifs->graph.edges[i].from)].push_back(
          static_cast<int>(i));

    base_pt.resize(static_cast<size_t>(gifs->graph.n));
    for (int a = 0; a < gifs->graph.n; ++a) {
      std::vector<int> cyc = shortest_cycle(a);
      FieldElement tau = FieldElement::zero(pd->field_id);
      FieldElement lam = FieldElement::one(pd->field_id);
      for (int ei : cyc) {
        tau = tau +
              lam * pi_of_word(gifs->graph.edges[static_cast<size_t>(ei)].label, *pd).z;
        lam = lam * pd->lambda0;
      }
      FieldElement zstar = tau * (FieldElement::one(pd->field_id) - lam).inverse();
      base_pt[static_cast<size_t>(a)] = pi_numeric(PiClass{zstar}, gifs->emb);
    }
    rho = subtile_norm_bounds(*corr, *pd);
  }

  Vec psi_of(const std::array<long long, 4>& c) const {
    Vec r{0, 0, 0};
    for (int i = 0; i < R; ++i)
      for (int k = 0; k < gifs->pair.d; ++k)
        r[static_cast<size_t>(k)] +=
            static_cast<double>(c[static_cast<size_t>(i)]) *
            basis_psi[static_cast<size_t>(i)][static_cast<size_t>(k)];
    return r;
  }
};

RauzySubtiles render_rauzy_impl(const RauzyGifs& gifs, const Correspondence& corr,
                                const PerronData& pd, int depth, double target_cell,
                                std::size_t budget) {
  const SpecialPisotRecord& rec = registry_lookup(pd.field_id);
  RauzyExpander ex;
  ex.corr = &corr;
  ex.pd = &pd;
  ex.gifs = &gifs;
  ex.init(rec);

  double l1 = pd.lambda1_mod.hi.get_d() * (1 + 1e-14);
  double rho_max = *std::max_element(ex.rho.begin(), ex.rho.end());

  int d = gifs.pair.d;
  RauzySubtiles out;
  out.tiles.assign(static_cast<size_t>(gifs.graph.n), PointCloud{});
  for (auto& t : out.tiles) t.d = d;

  struct Piece {
    std::array<long long, 4> c;
    int end;
  };
  std::vector<std::vector<Piece>> layers(static_cast<size_t>(gifs.graph.n));
  for (int a = 0; a < gifs.graph.n; ++a)
    layers[static_cast<size_t>(a)].push_back(Piece{{0, 0, 0, 0}, a});

  std::vector<std::array<long long, 4>> scaled = ex.label_c;
  int k = 0;
  double contr = 1.0;
  while (k < depth && contr * 2 * rho_max > target_cell) {
    std::size_t next_total = 0;
    std::vector<std::vector<Piece>> next(static_cast<size_t>(gifs.graph.n));
    bool over = false;
    for (int a = 0; a < gifs.graph.n && !over; ++a) {
      std::unordered_set<WalkKey, WalkKeyHash> seen;
      auto& nxt = next[static_cast<size_t>(a)];
      nxt.reserve(layers[static_cast<size_t>(a)].size() * 2);
      for (const Piece& p : layers[static_cast<size_t>(a)]) {
        for (int ei : ex.edges_from[static_cast<size_t>(p.end)]) {
          Piece np;
          np.end = gifs.graph.edges[static_cast<size_t>(ei)].to;
          for (int i = 0; i < ex.R; ++i)
            np.c[static_cast<size_t>(i)] =
                p.c[static_cast<size_t>(i)] +
                scaled[static_cast<size_t>(ei)][static_cast<size_t>(i)];
          WalkKey key;
          for (int i = 0; i < 4; ++i) key.c[i] = np.c[static_cast<size_t>(i)];
          key.letter = np.end;
          if (seen.insert(key).second) nxt.push_back(np);
        }
      }
      next_total += nxt.size();
      if (next_total > budget) over = true;
    }
    if (over) {
      if (depth < (1 << 20))
        throw std::length_error("render_rauzy: point budget exceeded");
      break;
    }
    layers = std::move(next);
    for (auto& sc : scaled) {
      std::array<long long, 4> ns{0, 0, 0, 0};
      for (int i = 0; i < ex.R; ++i) {
        __int128 acc = 0;
        for (int j = 0; j < ex.R; ++j)
          acc += static_cast<__int128>(ex.mult[i][j]) * sc[static_cast<size_t>(j)];
        if (acc > INT64_MAX / 4 || acc < INT64_MIN / 4)
          throw std::overflow_error("render_rauzy: coordinate overflow");
        ns[static_cast<size_t>(i)] = static_cast<long long>(acc);
      }
      sc = ns;
    }
    ++k;
    contr *= l1;
  }

  Mat hk = mat_identity(d);
  for (int i = 0; i < k; ++i) hk = mat_mul(hk, gifs.h);
  for (int a = 0; a < gifs.graph.n; ++a) {
    auto& cloud = out.tiles[static_cast<size_t>(a)];
    cloud.depth = k;
    cloud.cell_size = contr * 2 * rho_max + 1e-9;
    std::sort(layers[static_cast<size_t>(a)].begin(), layers[static_cast<size_t>(a)].end(),
              [](const Piece& x, const Piece& y) {
                if (x.c != y.c) return x.c < y.c;
                return x.end < y.end;
              });
    cloud.points.reserve(layers[static_cast<size_t>(a)].size());
    for (const Piece& p : layers[static_cast<size_t>(a)]) {
      Vec tr = ex.psi_of(p.c);
      Vec base = hk.apply(ex.base_pt[static_cast<size_t>(p.end)]);
      Vec pt{0, 0, 0};
      for (int kk = 0; kk < d; ++kk)
        pt[static_cast<size_t>(kk)] =
            -tr[static_cast<size_t>(kk)] + base[static_cast<size_t>(kk)];
      cloud.points.push_back(pt);
    }
  }
  out.depth = k;
  out.cell_size = out.tiles.empty() ? 0 : out.tiles[0].cell_size;
  return out;
}

}  // namespace

RauzySubtiles render_rauzy(const RauzyGifs& gifs, const Correspondence& corr,
                           const PerronData& pd, int depth, std::size_t point_budget) {
  if (depth < 1) throw std::invalid_argument("render_rauzy: depth >= 1 required");
  return render_rauzy_impl(gifs, corr, pd, depth, 0.0, point_budget);
}

RauzySubtiles render_rauzy_to_cell(const RauzyGifs& gifs, const Correspondence& corr,
                                   const PerronData& pd, double target_cell,
                                   std::size_t point_budget) {
  return render_rauzy_impl(gifs, corr, pd, 1 << 20, target_cell, point_budget);
}

double gifs_residual(const RauzyGifs& gifs, const RauzySubtiles& tiles) {
  double worst = 0;
  for (int a = 0; a < gifs.graph.n; ++a) {
    PointCloud image;
    image.d = tiles.tiles[static_cast<size_t>(a)].d;
    for (size_t ei = 0; ei < gifs.graph.edges.size(); ++ei) {
      if (gifs.graph.edges[ei].from != a) continue;
      int b = gifs.graph.edges[ei].to;
      for (const auto& p : tiles.tiles[static_cast<size_t>(b)].points) {
        Vec moved = gifs.h.apply(p);
        for (int kk = 0; kk < image.d; ++kk)
          moved[static_cast<size_t>(kk)] += gifs.translations[ei][static_cast<size_t>(kk)];
        image.points.push_back(moved);
      }
    }
    worst = std::max(worst,
                     hausdorff_distance(tiles.tiles[static_cast<size_t>(a)], image));
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

PointCloud transform_cloud(const PointCloud& f, const SubtileTransform& tr,
                           const EmbeddingMap& emb, const ContractionPair& pair) {
  PointCloud out;
  out.d = f.d;
  out.depth = f.depth;
  Mat lin = mat_identity(pair.d);
  for (int i = 0; i < tr.pow_a; ++i) lin = mat_mul(lin, pair.A);
  for (int i = 0; i < tr.pow_b; ++i) lin = mat_mul(lin, pair.B);
  double opnorm = 0;
  for (size_t e = 0; e < pair.mod_A.size(); ++e)
    opnorm = std::max(opnorm, std::pow(pair.mod_A[e], tr.pow_a) *
                                  std::pow(pair.mod_B[e], tr.pow_b));
  out.cell_size = f.cell_size * std::min(1.0, opnorm * (1 + 1e-12)) + 1e-12;
  Vec t = psi(tr.t, emb);
  out.points.reserve(f.points.size());
  for (const auto& p : f.points) {
    Vec moved = lin.apply(p);
    Vec q{0, 0, 0};
    for (int k = 0; k < f.d; ++k)
      q[static_cast<size_t>(k)] =
          t[static_cast<size_t>(k)] + tr.sign * moved[static_cast<size_t>(k)];
    out.points.push_back(q);
  }
  return out;
}

}  // namespace

CorrespondenceReport correspondence_check(const SpecialPisotRecord& rec,
                                          double target_rel_cell, double tol_factor,
                                          std::size_t point_budget) {
  if (rec.index == 0 || rec.index == 2 || rec.index == -2)
    throw std::domain_error("correspondence_check: record handled in one dimension");
  Correspondence corr = substitution_for(rec);
  PerronData pd = perron_data(corr, rec);
  RauzyGifs gifs = rauzy_gifs(corr, pd, rec);

  auto [emb, pair] = build_matrices(rec, 96);
  double diam = diam_estimate(pair);
  double target = target_rel_cell * diam;

  PointCloud tent = render_tent_tile_to_cell(rec, target, point_budget);
  RauzySubtiles sub = render_rauzy_to_cell(gifs, corr, pd, target, point_budget);

  CorrespondenceReport rep;
  rep.cell_size = std::max(tent.cell_size, sub.cell_size);
  rep.pass = true;
  for (int a = 0; a < corr.sigma.alphabet; ++a) {
    PointCloud xk =
        transform_cloud(tent, corr.subtiles[static_cast<size_t>(a)], emb, pair);
    double hd = hausdorff_distance(sub.tiles[static_cast<size_t>(a)], xk);
    double tol = tol_factor *
                 std::max(xk.cell_size, sub.tiles[static_cast<size_t>(a)].cell_size);
    rep.letter_distance.push_back(hd);
    rep.letter_tol.push_back(tol);
    rep.tol = std::max(rep.tol, tol);
    if (hd > tol) rep.pass = false;
  }
  return rep;
}

PointCloud tent_tile_from_rauzy(const SpecialPisotRecord& rec, double target_rel_cell,
                                std::size_t point_budget) {
  Correspondence corr = substitution_for(rec);
  PerronData pd = perron_data(corr, rec);
  RauzyGifs gifs = rauzy_gifs(corr, pd, rec);
  auto [emb, pair] = build_matrices(rec, 96);
  double target = target_rel_cell * diam_estimate(pair);
  RauzySubtiles sub = render_rauzy_to_cell(gifs, corr, pd, target, point_budget);

  PointCloud out;
  out.d = pair.d;
  if (!corr.union_letters.empty()) {
    for (int a : corr.union_letters) {
      const auto& t = sub.tiles[static_cast<size_t>(a)];
      out.points.insert(out.points.end(), t.points.begin(), t.points.end());
      out.cell_size = std::max(out.cell_size, t.cell_size);
      out.depth = t.depth;
    }
  } else {
    // recover the tile by inverting the affine image of the designated
    // subtile
    const SubtileTransform& tr = corr.subtiles[static_cast<size_t>(corr.inverse_letter)];
    Mat lin = mat_identity(pair.d);
    for (int i = 0; i < tr.pow_a; ++i) lin = mat_mul(lin, pair.A);
    for (int i = 0; i < tr.pow_b; ++i) lin = mat_mul(lin, pair.B);
    Mat inv = mat_inverse(lin);
    double expansion = 0;
    for (size_t e = 0; e < pair.mod_A.size(); ++e)
      expansion = std::max(expansion, std::pow(pair.mod_A[e], -tr.pow_a) *
                                          std::pow(pair.mod_B[e], -tr.pow_b));
    Vec t = psi(tr.t, emb);
    const auto& src = sub.tiles[static_cast<size_t>(corr.inverse_letter)];
    out.points.reserve(src.points.size());
    for (const auto& p : src.points) {
      Vec shifted{0, 0, 0};
      for (int kk = 0; kk < pair.d; ++kk)
        shifted[static_cast<size_t>(kk)] =
            tr.sign * (p[static_cast<size_t>(kk)] - t[static_cast<size_t>(kk)]);
      out.points.push_back(inv.apply(shifted));
    }
    out.cell_size = src.cell_size * expansion * (1 + 1e-12) + 1e-12;
    out.depth = src.depth;
  }
  return out;
}
}  // namespace tenttile
