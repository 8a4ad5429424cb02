#pragma once

// Boundary graphs of the self-replicating and lattice tilings: translation
// sets, graph construction by exact arithmetic in the eigenvector module,
// dominant eigenvalues with certified enclosures, the tiling-property test
// and the boundary dimension formula.

#include "tenttile/spectral.hpp"

namespace tenttile {

enum class BoundaryVariant { kSelfReplicating, kLattice };

struct BoundaryVertex {
  int a1, a2;
  FieldElement z;  // normalized: z > 0, or z = 0 and a1 < a2
};

struct BoundaryEdge {
  int from, to;
  FieldElement label;
};

struct BoundaryGraph {
  BoundaryVariant variant = BoundaryVariant::kSelfReplicating;
  std::vector<BoundaryVertex> vertices;  // deterministic order
  std::vector<BoundaryEdge> edges;       // set-deduplicated (from,label,to)
  ZMat adjacency;                        // distinct (label,to) counts
  std::vector<int> seeds;
};

// 0 <= <x,u> < <ell(a),u> by exact sign tests.
bool in_xi_sr(const PiClass& c, int letter, const PerronData& pd);

// Generators of the lattice translation set for the families satisfying the
// quotient map condition; throws for those that do not (records +-5).
std::vector<FieldElement> xi_lat_basis(const SpecialPisotRecord& rec,
                                       const Correspondence& corr,
                                       const PerronData& pd);
// True when the quotient map condition holds for this family instance.
bool quotient_map_condition(const Correspondence& corr, const PerronData& pd);

// 2 max_U |pi(ell(U))| / (1 - |lambda_1|), rounded outward.
double norm_bound(const Correspondence& corr, const PerronData& pd);

struct BoundaryBuildOptions {
  // reproduce the uncorrected edge equation (negative control): the target
  // class is then determined by the prefixes alone
  bool literal_edge_equation = false;
};

BoundaryGraph build_boundary_graph(const SpecialPisotRecord& rec,
                                   const Correspondence& corr, const PerronData& pd,
                                   BoundaryVariant variant,
                                   const BoundaryBuildOptions& opts = {});

struct DominantEigen {
  ZPoly charpoly;  // det(tI - adjacency), ascending coefficients
  QI root;         // dominant real root, width <= 1e-12
};

DominantEigen graph_dominant_eigenvalue(const BoundaryGraph& g);

// mu < lambda0 decided by disjoint refined enclosures; throws "undecided"
// if 4096 bits of refinement cannot separate them.
bool tiling_property(const DominantEigen& mu, const PerronData& pd);

// Exact equality of two dominant eigenvalues via a common gcd root.
bool dominant_roots_equal(const DominantEigen& a, const DominantEigen& b);

struct DimensionReport {
  double lambda0 = 0;
  double mu_sr = 0;
  double lambda_d = 0;  // smallest contracting conjugate modulus
  double box_dimension = 0;
  bool hausdorff_equality = false;  // |lambda_1| = |lambda_d|
  ZPoly mu_charpoly;
  bool sr_tiling_proper = false;
};

DimensionReport dimension_report(const PerronData& pd, const DominantEigen& mu);

std::string boundary_graph_to_json(const BoundaryGraph& g);
std::string adjacency_to_csv(const BoundaryGraph& g);

}  // namespace tenttile
