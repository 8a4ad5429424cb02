#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tenttile/rauzy.hpp"

using namespace tenttile;

namespace {
struct Setup {
  const SpecialPisotRecord& rec;
  Correspondence corr;
  PerronData pd;
  RauzyGifs gifs;
  explicit Setup(int i)
      : rec(registry_lookup(i)),
        corr(substitution_for(rec)),
        pd(perron_data(corr, rec)),
        gifs(rauzy_gifs(corr, pd, rec)) {}
};
}  // namespace

TEST_CASE("gifs structure for zeta_3") {
  Setup s(1);
  CHECK(s.gifs.graph.n == 3);
  // image lengths 2+1+2: one loop at 0, the chain, the cross edge, and the
  // loop at p-1
  CHECK(s.gifs.graph.edges.size() == 5);
  // the empty-prefix maps are pure contractions
  for (size_t i = 0; i < s.gifs.graph.edges.size(); ++i) {
    if (s.gifs.graph.edges[i].label.empty()) {
      for (int k = 0; k < s.gifs.pair.d; ++k)
        CHECK(s.gifs.translations[i][static_cast<size_t>(k)] == 0.0);
    }
  }
  // linear part is multiplication by alpha for this family
  CHECK(mat_max_abs_diff(s.gifs.h, s.gifs.pair.A) == 0.0);
}

TEST_CASE("theta_prime_3 contraction is multiplication by beta") {
  Setup s(-3);
  CHECK(mat_max_abs_diff(s.gifs.h, s.gifs.pair.B) == 0.0);
}

TEST_CASE("subtile set equation residual") {
  for (int i : {1, -3}) {
    Setup s(i);
    RauzySubtiles sub = render_rauzy(s.gifs, s.corr, s.pd, 14);
    double res = gifs_residual(s.gifs, sub);
    CHECK(res <= 2 * sub.cell_size);
    for (const auto& t : sub.tiles) CHECK(!t.points.empty());
  }
}

TEST_CASE("subtile clouds are bounded by the certified norm bounds") {
  Setup s(3);
  auto rho = subtile_norm_bounds(s.corr, s.pd);
  RauzySubtiles sub = render_rauzy(s.gifs, s.corr, s.pd, 16);
  for (int a = 0; a < s.corr.sigma.alphabet; ++a) {
    for (const auto& p : sub.tiles[static_cast<size_t>(a)].points) {
      double n = std::hypot(p[0], p[1]);
      CHECK(n <= rho[static_cast<size_t>(a)] + 1e-9);
    }
  }
}

TEST_CASE("tent tile from the zeta_3 subtile union matches the direct render") {
  const auto& rec = registry_lookup(1);
  PointCloud direct = render_tent_tile_to_cell(rec, 5e-3);
  PointCloud from_rauzy = tent_tile_from_rauzy(rec, 5e-3 / 8.2);
  double hd = hausdorff_distance(direct, from_rauzy);
  CHECK(hd <= 5 * std::max(direct.cell_size, from_rauzy.cell_size));
}

TEST_CASE("correspondence: all letters pass for the cubic records") {
  for (int i : {1, 3, -1, -3}) {
    CorrespondenceReport rep = correspondence_check(registry_lookup(i), 2e-3, 5.0);
    INFO("record " << i);
    for (size_t a = 0; a < rep.letter_distance.size(); ++a) {
      INFO("letter " << a << ": " << rep.letter_distance[a] << " tol "
                     << rep.letter_tol[a]);
      CHECK(rep.letter_distance[a] <= rep.letter_tol[a]);
    }
    CHECK(rep.pass);
  }
}

TEST_CASE("correspondence rejects a wrong transform (sanity of the metric)") {
  // shifting one subtile by a quarter of the diameter must break the check
  const auto& rec = registry_lookup(1);
  Correspondence corr = substitution_for(rec);
  PerronData pd = perron_data(corr, rec);
  RauzyGifs gifs = rauzy_gifs(corr, pd, rec);
  auto [emb, pair] = build_matrices(rec, 96);
  RauzySubtiles sub = render_rauzy_to_cell(gifs, corr, pd, 0.05);
  PointCloud tent = render_tent_tile_to_cell(rec, 0.05);
  PointCloud shifted = tent;
  for (auto& p : shifted.points) p[0] += diam_estimate(pair) / 4;
  double hd = hausdorff_distance(sub.tiles[0], shifted);
  CHECK(hd > 5 * std::max(sub.cell_size, tent.cell_size));
}

TEST_CASE("interval records are rejected") {
  CHECK_THROWS_AS(correspondence_check(registry_lookup(2), 1e-3, 5.0),
                  std::domain_error);
}
