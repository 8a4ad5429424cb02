#pragma once

// Data-parallel inner loops (OpenMP) with serial reference implementations
// kept side by side for testing and benchmarking.

#include <cstdint>
#include <vector>

#include "tenttile/geometry.hpp"

namespace tenttile::kernels {

// Symmetric Hausdorff distance between finite point sets, bucket-grid
// accelerated.  Both variants return identical values.
double hausdorff_serial(const std::vector<Vec>& a, const std::vector<Vec>& b, int d);
double hausdorff_omp(const std::vector<Vec>& a, const std::vector<Vec>& b, int d);

// Cell-multiplicity accumulator over a cubic window grid.
struct MultiplicityGrid {
  int d = 2;
  int n = 0;          // cells per axis
  Vec lo{0, 0, 0};    // window lower corner
  double cell = 1.0;  // cell edge length

  std::vector<std::uint16_t> counts;
  std::vector<std::int32_t> stamp;  // last translate that touched each cell

  void init(int dim, int cells_per_axis, const Vec& lower, double cell_size);
  std::size_t ncells() const { return counts.size(); }
  // flat index or -1 when the point lies outside the window
  long long index_of(const Vec& p) const;
};

// Mark every grid cell hit by { offset + sign * p : p in pts } once for
// this translate id and increment its multiplicity.
void raster_mark_translate_serial(MultiplicityGrid& grid, const std::vector<Vec>& pts,
                                  const Vec& offset, double sign, std::int32_t translate_id);
void raster_mark_translate_omp(MultiplicityGrid& grid, const std::vector<Vec>& pts,
                               const Vec& offset, double sign, std::int32_t translate_id);

}  // namespace tenttile::kernels
