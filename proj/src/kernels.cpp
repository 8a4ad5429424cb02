#include "tenttile/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tenttile::kernels {

namespace {

struct BucketGrid {
  int d;
  int n[3] = {1, 1, 1};
  Vec lo{0, 0, 0};
  double h = 1.0;
  std::vector<std::vector<std::uint32_t>> buckets;
  const std::vector<Vec>* pts = nullptr;

  void build(const std::vector<Vec>& p, int dim) {
    d = dim;
    pts = &p;
    Vec hi = p[0];
    lo = p[0];
    for (const auto& v : p)
      for (int k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], v[k]);
        hi[k] = std::max(hi[k], v[k]);
      }
    double range = 1e-12;
    for (int k = 0; k < d; ++k) range = std::max(range, hi[k] - lo[k]);
    // aim for a handful of points per bucket
    double per_axis = std::pow(static_cast<double>(p.size()), 1.0 / d);
    int cells = std::clamp(static_cast<int>(per_axis), 1, d == 3 ? 192 : 1024);
    h = range / cells * (1.0 + 1e-12) + 1e-300;
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) {
      n[k] = std::max(1, static_cast<int>(std::floor((hi[k] - lo[k]) / h)) + 1);
      total *= static_cast<std::size_t>(n[k]);
    }
    buckets.assign(total, {});
    for (std::uint32_t i = 0; i < p.size(); ++i)
      buckets[cell_of(p[i])].push_back(i);
  }

  std::size_t cell_of(const Vec& v) const {
    std::size_t idx = 0;
    for (int k = 0; k < d; ++k) {
      int c = std::clamp(static_cast<int>((v[k] - lo[k]) / h), 0, n[k] - 1);
      idx = idx * static_cast<std::size_t>(n[k]) + static_cast<std::size_t>(c);
    }
    return idx;
  }

  void coords_of(const Vec& v, int c[3]) const {
    for (int k = 0; k < d; ++k)
      c[k] = std::clamp(static_cast<int>((v[k] - lo[k]) / h), 0, n[k] - 1);
  }

  // squared distance from v to the nearest stored point (ring search)
  double nearest2(const Vec& v) const {
    int c0[3] = {0, 0, 0};
    coords_of(v, c0);
    double best = std::numeric_limits<double>::infinity();
    int max_ring = 0;
    for (int k = 0; k < d; ++k) max_ring = std::max(max_ring, n[k]);
    for (int r = 0; r <= max_ring; ++r) {
      if (r > 0 && best < std::numeric_limits<double>::infinity()) {
        double lb = (r - 1) * h;
        if (lb * lb > best) break;
      }
      int klo[3] = {0, 0, 0}, khi[3] = {0, 0, 0};
      for (int k = 0; k < d; ++k) {
        klo[k] = std::max(0, c0[k] - r);
        khi[k] = std::min(n[k] - 1, c0[k] + r);
      }
      auto visit = [&](int x, int y, int z) {
        int cc[3] = {x, y, z};
        std::size_t idx = 0;
        for (int k = 0; k < d; ++k) idx = idx * n[k] + cc[k];
        for (std::uint32_t pi : buckets[idx]) {
          const Vec& q = (*pts)[pi];
          double s = 0;
          for (int k = 0; k < d; ++k) {
            double dk = v[k] - q[k];
            s += dk * dk;
          }
          best = std::min(best, s);
        }
      };
      if (d == 1) {
        for (int x = klo[0]; x <= khi[0]; ++x)
          if (std::abs(x - c0[0]) == r) visit(x, 0, 0);
      } else if (d == 2) {
        for (int x = klo[0]; x <= khi[0]; ++x)
          for (int y = klo[1]; y <= khi[1]; ++y)
            if (std::max(std::abs(x - c0[0]), std::abs(y - c0[1])) == r)
              visit(x, y, 0);
      } else {
        for (int x = klo[0]; x <= khi[0]; ++x)
          for (int y = klo[1]; y <= khi[1]; ++y)
            for (int z = klo[2]; z <= khi[2]; ++z)
              if (std::max({std::abs(x - c0[0]), std::abs(y - c0[1]),
                            std::abs(z - c0[2])}) == r)
                visit(x, y, z);
      }
    }
    return best;
  }
};

template <bool kParallel>
double directed_hausdorff(const std::vector<Vec>& a, const BucketGrid& gb) {
  double worst = 0;
  if constexpr (kParallel) {
    long long sz = static_cast<long long>(a.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (long long i = 0; i < sz; ++i)
      worst = std::max(worst, gb.nearest2(a[static_cast<std::size_t>(i)]));
  } else {
    for (const auto& p : a) worst = std::max(worst, gb.nearest2(p));
  }
  return std::sqrt(worst);
}

template <bool kParallel>
double hausdorff_impl(const std::vector<Vec>& a, const std::vector<Vec>& b, int d) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty cloud");
  BucketGrid ga, gb;
  ga.build(a, d);
  gb.build(b, d);
  double ab = directed_hausdorff<kParallel>(a, gb);
  double ba = directed_hausdorff<kParallel>(b, ga);
  return std::max(ab, ba);
}

}  // namespace

double hausdorff_serial(const std::vector<Vec>& a, const std::vector<Vec>& b, int d) {
  return hausdorff_impl<false>(a, b, d);
}

double hausdorff_omp(const std::vector<Vec>& a, const std::vector<Vec>& b, int d) {
  return hausdorff_impl<true>(a, b, d);
}

// ---------------------------------------------------------------------------

void MultiplicityGrid::init(int dim, int cells_per_axis, const Vec& lower,
                            double cell_size) {
  d = dim;
  n = cells_per_axis;
  lo = lower;
  cell = cell_size;
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(n);
  counts.assign(total, 0);
  stamp.assign(total, -1);
}

long long MultiplicityGrid::index_of(const Vec& p) const {
  long long idx = 0;
  for (int k = 0; k < d; ++k) {
    double t = (p[k] - lo[k]) / cell;
    if (t < 0) return -1;
    auto c = static_cast<long long>(t);
    if (c >= n) return -1;
    idx = idx * n + c;
  }
  return idx;
}

void raster_mark_translate_serial(MultiplicityGrid& grid, const std::vector<Vec>& pts,
                                  const Vec& offset, double sign,
                                  std::int32_t translate_id) {
  for (const auto& p : pts) {
    Vec q{0, 0, 0};
    for (int k = 0; k < grid.d; ++k) q[k] = offset[k] + sign * p[k];
    long long idx = grid.index_of(q);
    if (idx < 0) continue;
    auto u = static_cast<std::size_t>(idx);
    if (grid.stamp[u] != translate_id) {
      grid.stamp[u] = translate_id;
      ++grid.counts[u];
    }
  }
}

void raster_mark_translate_omp(MultiplicityGrid& grid, const std::vector<Vec>& pts,
                               const Vec& offset, double sign,
                               std::int32_t translate_id) {
  // marking is idempotent per translate: collect hits in parallel, merge once
  std::vector<std::uint8_t> hit(grid.ncells(), 0);
  long long sz = static_cast<long long>(pts.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < sz; ++i) {
    const Vec& p = pts[static_cast<std::size_t>(i)];
    Vec q{0, 0, 0};
    for (int k = 0; k < grid.d; ++k) q[k] = offset[k] + sign * p[k];
    long long idx = grid.index_of(q);
    if (idx >= 0) hit[static_cast<std::size_t>(idx)] = 1;
  }
  long long nc = static_cast<long long>(grid.ncells());
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < nc; ++c) {
    auto u = static_cast<std::size_t>(c);
    if (hit[u] && grid.stamp[u] != translate_id) {
      grid.stamp[u] = translate_id;
      ++grid.counts[u];
    }
  }
}

}  // namespace tenttile::kernels
