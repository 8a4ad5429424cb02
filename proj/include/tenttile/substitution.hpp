#pragma once

// Words, substitutions, abelianization, incidence matrices, prefix graphs,
// the four substitution families attached to the special Pisot units, and
// the strong/weak coincidence searches.

#include <array>
#include <string>
#include <vector>

#include "tenttile/linalg.hpp"
#include "tenttile/numberfield.hpp"

namespace tenttile {

using Word = std::vector<int>;

struct Substitution {
  int alphabet = 0;  // letters 0..alphabet-1
  std::vector<Word> images;

  Word apply(const Word& w) const;
  Word iterate(int letter, int k) const;
};

std::vector<long> abelianization(const Word& w, int alphabet);

// column j = abelianization of the image of letter j
ZMat incidence_matrix(const Substitution& s);
// some power <= alphabet^2 of the incidence matrix is entrywise positive
bool is_primitive(const Substitution& s);

struct PrefixEdge {
  int from;  // letter a
  int to;    // letter b with image(b) = label a suffix
  Word label;
};

struct PrefixGraph {
  int n = 0;
  std::vector<PrefixEdge> edges;
};

PrefixGraph prefix_graph(const Substitution& s);

// --- the four families -------------------------------------------------

Substitution zeta_p(int p);         // p >= 3
Substitution theta_q(int q);        // q >= 2
Substitution theta_prime_q(int q);  // q >= 3
Substitution zeta_prime_p(int p);   // p >= 3 (p = 2 is ill-formed)

// --- coincidence conditions ---------------------------------------------

struct PairWitness {
  int a1, a2;
  int k;       // first level with a coincidence for this pair
  int letter;  // common letter at that level
};

struct CoincidenceResult {
  bool holds = false;      // every letter pair has a witness
  int witness_k = 0;       // max over pairs of the first witness level
  int witness_letter = -1; // a common letter achieving witness_k
  int searched_k = 0;      // levels explored before stopping
  // true when the reachable state space closed before k_max, which proves
  // the condition can never hold (stronger than "not found up to k_max")
  bool search_exhausted = false;
  std::vector<PairWitness> pair_witnesses;
};

// Strong coincidence at prefixes: abelianized prefixes agree exactly.
// The left eigenvector u and the dominant value lambda0 drive a certified
// prune of states that can no longer return to a coincidence.
CoincidenceResult strong_coincidence(const Substitution& s,
                                     const std::vector<FieldElement>& u,
                                     const FieldElement& lambda0, int k_max);

// Weak coincidence: prefixes agree after projection, i.e. the pairing of
// the abelianization difference with u vanishes exactly.
CoincidenceResult weak_coincidence(const Substitution& s,
                                   const std::vector<FieldElement>& u,
                                   const FieldElement& lambda0, int k_max);

// --- registry map --------------------------------------------------------

// X_k = psi(t) + sign * A^pow_a B^pow_b * F
struct SubtileTransform {
  FieldElement t;
  int sign = 1;
  int pow_a = 0, pow_b = 0;
};

struct Correspondence {
  std::string family;  // zeta_p | theta_q | theta_prime_q | zeta_prime_p | interval
  int parameter = 0;
  Substitution sigma;
  std::vector<SubtileTransform> subtiles;  // per letter
  std::vector<int> union_letters;          // subtiles whose union is the tent-tile
  int inverse_letter = -1;                 // or recover F by inverting this subtile
  // left eigenvector and dominant eigenvalue data (exact, in the record field)
  std::vector<FieldElement> u;
  FieldElement lambda0;
  int lambda0_pow_a = 0, lambda0_pow_b = 0;
};

// The substitution attached to a unit record; records +-2 return the
// one-dimensional marker family "interval" with no substitution.
Correspondence substitution_for(const SpecialPisotRecord& rec);

// JSON-ready serialization {alphabet, images}.
std::string substitution_to_json(const Substitution& s);

}  // namespace tenttile
