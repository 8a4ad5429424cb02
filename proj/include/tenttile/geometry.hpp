#pragma once

// Concrete geometry for the tent IFS: the embedding of Q(alpha) into R^d,
// the contraction matrices for multiplication by alpha and beta, attractor
// rendering as certified point clouds, and the exact treatment of the two
// one-dimensional tiles.

#include <array>
#include <cstdint>
#include <vector>

#include "tenttile/numberfield.hpp"

namespace tenttile {

using Vec = std::array<double, 3>;  // coordinates beyond d are zero

struct Mat {
  int d = 1;
  double a[3][3] = {{0}};

  Vec apply(const Vec& v) const {
    Vec r{0, 0, 0};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r[i] += a[i][j] * v[j];
    return r;
  }
};

Mat mat_identity(int d);
Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_add(const Mat& x, const Mat& y);
Mat mat_scale(const Mat& x, double c);
Mat mat_inverse(const Mat& x);
double mat_max_abs_diff(const Mat& x, const Mat& y);

struct EmbeddingMap {
  int field_id = 0;
  long precision = 0;  // bits used for the conjugate enclosures
  int d = 1;
  std::vector<Vec> basis;  // images of 1, alpha, ..., alpha^(deg-1)
};

struct ContractionPair {
  int d = 1;
  Mat A, B;
  Vec psi_one{0, 0, 0};
  // certified upper bounds on the operator norms (largest conjugate modulus)
  double norm_A = 0, norm_B = 0;
  // per-embedding modulus upper bounds, for anisotropic piece estimates:
  // entry k is |sigma_k(alpha)| resp. |sigma_k(beta)| for the embedding
  // attached to coordinate block k (real first for d=3)
  std::vector<double> mod_A, mod_B;
};

struct AffineMap {
  int d = 1;
  Mat linear;
  Vec translate{0, 0, 0};
  bool contraction = false;
  Vec apply(const Vec& v) const {
    Vec r = linear.apply(v);
    for (int i = 0; i < d; ++i) r[i] += translate[i];
    return r;
  }
};

AffineMap affine_compose(const AffineMap& f, const AffineMap& g);  // f after g
AffineMap affine_inverse(const AffineMap& f);

struct PointCloud {
  int d = 1;
  std::vector<Vec> points;
  int depth = 0;
  double cell_size = 0;  // guaranteed covering radius of the attractor
};

// Embedding and multiplication matrices for a unit record.
// d = 1: the single real conjugate. d = 2: rotation-scaling block of the
// complex conjugate with positive imaginary part. d = 3: block diagonal,
// real conjugate first.
std::pair<EmbeddingMap, ContractionPair> build_matrices(const SpecialPisotRecord& rec,
                                                        long precision);

Vec psi(const FieldElement& x, const EmbeddingMap& emb);
// Certified enclosure of the embedding image (same coordinate layout).
std::array<QI, 3> psi_interval(const FieldElement& x, long prec_bits);

// The two branches of the tent IFS: f_L(x) = A x, f_R(x) = B(psi(1) - x).
std::pair<AffineMap, AffineMap> tent_ifs(const SpecialPisotRecord& rec);

// Conservative diameter estimate 2 |psi(1)| / (1 - lambda_max).
double diam_estimate(const ContractionPair& pair);
// Smallest depth with lambda_max^depth * diam <= half the target size.
int auto_depth(const ContractionPair& pair, double target);

// Every word of {L,R}^depth applied to the f_L fixed point; duplicate
// translates are collapsed exactly.  Throws when a layer exceeds the
// point budget.
PointCloud render_tent_tile(const SpecialPisotRecord& rec, int depth,
                            std::size_t point_budget = 6'000'000);

// Adaptive variant: subdivide until every piece maps the attractor into a
// ball of radius <= target_cell, or the budget is reached.  The achieved
// covering radius is reported in cell_size (it may exceed target_cell when
// the budget binds).
PointCloud render_tent_tile_to_cell(const SpecialPisotRecord& rec, double target_cell,
                                    std::size_t point_budget = 6'000'000);

// Symmetric Hausdorff distance between two clouds (grid accelerated).
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

// Exact endpoints of the one-dimensional tent-tiles (records -2 and 2),
// with the set equation and the unit-lattice tiling verified by exact
// endpoint arithmetic.
struct ExactInterval {
  FieldElement lo, hi;          // endpoints in the embedded line
  bool set_equation_verified;   // I = f_L(I) u f_R(I), meeting at one point
  bool lattice_tiling_verified; // adjacent translates share only endpoints
};
ExactInterval tent_interval_exact(int index);

}  // namespace tenttile
