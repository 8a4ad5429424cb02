#pragma once

// Exact characteristic polynomials, Perron data for the registry
// substitutions (dominant eigenvalue and left eigenvector over Q(alpha)),
// and the projection onto the contractive space represented by the exact
// pairing z = <x, u>.

#include "tenttile/geometry.hpp"
#include "tenttile/substitution.hpp"

namespace tenttile {

// det(tI - M), exact integer coefficients, ascending order.
ZPoly char_poly(const ZMat& m);

struct PerronData {
  int field_id = 0;
  FieldElement lambda0;       // dominant eigenvalue as an exact field element
  int lambda0_pow_a = 0;      // lambda0 = alpha^pow_a * beta^pow_b
  int lambda0_pow_b = 0;
  std::vector<FieldElement> u;  // left eigenvector, entries positive
  std::vector<CI> contracting;  // conjugates of lambda0, descending modulus
  QI lambda1_mod;               // |lambda_1| enclosure (largest contracting)
  QI lambdad_mod;               // |lambda_d| enclosure (smallest contracting)
  bool reducible = false;
  int supplementary_dim = 0;  // m - d
};

// Family eigenvector data, verified exactly: u M = lambda0 u entrywise and
// every entry positive at the dominant root.  Throws on verification
// failure (programming-error guard).
PerronData perron_data(const Correspondence& corr, const SpecialPisotRecord& rec);

// Exact projection class: z = <x, u> determines the projection of an
// integer vector onto the contractive space.
struct PiClass {
  FieldElement z;
};

PiClass pi_exact(const std::vector<long>& x, const PerronData& pd);
PiClass pi_of_word(const Word& w, const PerronData& pd);

// numeric image of a class in the contractive space: -psi(z)
Vec pi_numeric(const PiClass& c, const EmbeddingMap& emb);

// multiplication by lambda0 (the contraction h read backwards)
PiClass h_apply(const PiClass& c, const PerronData& pd);
// numeric counterpart A^pow_a B^pow_b
Mat h_matrix(const PerronData& pd, const ContractionPair& pair);

// Certified per-letter norm bounds of the prefix-graph subtiles.  The crude
// fixed-point bound is refined over length-k walks, which captures the
// cancellation of the rotating contraction.
std::vector<double> subtile_norm_bounds(const Correspondence& corr,
                                        const PerronData& pd);

}  // namespace tenttile
