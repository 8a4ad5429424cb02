#pragma once

// Rauzy fractal rendering from the prefix-graph directed system, and the
// numerical verification that the subtiles are the stated affine images of
// the tent-tile.

#include "tenttile/boundary.hpp"

namespace tenttile {

struct RauzyGifs {
  PrefixGraph graph;
  // map attached to edge e: x -> pi(ell(label)) + h(x)
  std::vector<Vec> translations;  // per edge, numeric
  Mat h;                          // the contraction
  EmbeddingMap emb;
  ContractionPair pair;
};

struct RauzySubtiles {
  std::vector<PointCloud> tiles;  // one per letter
  int depth = 0;
  double cell_size = 0;
};

RauzyGifs rauzy_gifs(const Correspondence& corr, const PerronData& pd,
                     const SpecialPisotRecord& rec);

// Clouds from all length-depth walks of the prefix graph, composed from the
// canonical in-tile base points (cycle fixed points); exact duplicate
// translates are collapsed.
RauzySubtiles render_rauzy(const RauzyGifs& gifs, const Correspondence& corr,
                           const PerronData& pd, int depth,
                           std::size_t point_budget = 6'000'000);

// Depth chosen so the cell size is at most target_cell (budget permitting).
RauzySubtiles render_rauzy_to_cell(const RauzyGifs& gifs, const Correspondence& corr,
                                   const PerronData& pd, double target_cell,
                                   std::size_t point_budget = 6'000'000);

struct CorrespondenceReport {
  bool pass = false;
  double tol = 0;
  double cell_size = 0;
  std::vector<double> letter_distance;  // Hausdorff distance per letter
  std::vector<double> letter_tol;
};

// For each letter, compare the rendered subtile with the stated affine
// transform of the tent-tile cloud.
CorrespondenceReport correspondence_check(const SpecialPisotRecord& rec,
                                          double target_rel_cell, double tol_factor,
                                          std::size_t point_budget = 6'000'000);

// The tent-tile recovered from the subtiles (union or inverse transform),
// for direct comparison with the rendered tent-tile.
PointCloud tent_tile_from_rauzy(const SpecialPisotRecord& rec, double target_rel_cell,
                                std::size_t point_budget = 6'000'000);

// Residual of the set equations on rendered clouds: max over letters of
// hausdorff(R(a), union of edge images).
double gifs_residual(const RauzyGifs& gifs, const RauzySubtiles& tiles);

}  // namespace tenttile
