#pragma once

// Exact arithmetic in Q(alpha) for the special Pisot units: the registry of
// the eleven special Pisot numbers, field elements as rational coefficient
// vectors modulo the minimal polynomial, certified sign determination at the
// dominant root, and enclosures of the Galois conjugates.

#include <optional>
#include <vector>

#include "tenttile/qpoly.hpp"

namespace tenttile {

struct MinimalPolynomial {
  std::vector<long> coeffs;  // ascending, monic
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

enum class TilingStatus { kTiles, kTilesWithReflection, kUnknown, kNone };

struct SpecialPisotRecord {
  int index;  // -5 .. 5
  MinimalPolynomial minpoly;
  double approx_value;
  int partner;        // -index
  int exponent;       // m_i with alpha_i^{m_i} = alpha_{-i}^{m_{-i}}
  int degree;         // d+1
  bool has_tent_tile;  // false only for index 0
  TilingStatus tiling_status;
};

// Exact table row; throws std::out_of_range for i outside -5..5.
const SpecialPisotRecord& registry_lookup(int i);
std::vector<int> registry_indices();       // all 11
std::vector<int> registry_unit_indices();  // the 10 with a tent-tile

// ---------------------------------------------------------------------------

// Isolating data for one Galois conjugate (all certified enclosures).
struct ConjugateBox {
  CI box;
  bool real;  // imaginary part identically zero
};

struct RootIsolation {
  QI dominant;                     // the root > 1
  std::vector<ConjugateBox> conj;  // descending modulus, +Im first
  long precision_bits;
};

class NumberField {
 public:
  explicit NumberField(const SpecialPisotRecord& rec);

  int id() const { return id_; }
  int degree() const { return deg_; }
  const QPoly& minpoly() const { return mp_; }

  // Enclosure of the dominant root with width <= 2^-prec_bits.
  QI dominant(long prec_bits) const;
  // Non-dominant embeddings ordered by descending modulus, +Im first;
  // boxes have width <= 2^-prec_bits per coordinate.
  const std::vector<ConjugateBox>& conjugate_boxes(long prec_bits) const;
  RootIsolation isolation(long prec_bits) const;

  // reduction rows for alpha^(deg..2deg-2)
  const std::vector<QPoly>& reduction() const { return red_; }

 private:
  void refine(long prec_bits) const;

  int id_;
  int deg_;
  QPoly mp_;
  std::vector<QPoly> red_;
  mutable long prec_ = 0;
  mutable QI dom_;
  mutable std::vector<ConjugateBox> conj_;
};

// Shared per-index field instance.
const NumberField& field_for(int index);

// ---------------------------------------------------------------------------

class FieldElement {
 public:
  FieldElement() : field_id_(999) {}
  FieldElement(int field_id, std::vector<Q> coeffs);

  static FieldElement zero(int field_id);
  static FieldElement one(int field_id);
  static FieldElement integer(int field_id, long v);
  static FieldElement rational(int field_id, const Q& v);
  static FieldElement generator(int field_id);  // alpha

  int field_id() const { return field_id_; }
  const std::vector<Q>& coeffs() const { return c_; }
  bool is_zero() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement inverse() const;    // throws on zero
  FieldElement pow(long e) const;  // negative exponents via inverse

 private:
  int field_id_;
  std::vector<Q> c_;
};

FieldElement field_add(const FieldElement& a, const FieldElement& b);
FieldElement field_mul(const FieldElement& a, const FieldElement& b);
FieldElement field_inv(const FieldElement& a);

// beta = alpha (alpha - 1)^-1 in Q(alpha); requires a unit record.
FieldElement beta_of(const SpecialPisotRecord& rec);
// alpha^{m_i} == beta^{m_{-i}} as exact field elements.
bool verify_dependency(const SpecialPisotRecord& rec);

// Certified sign of z evaluated at the dominant root (exact zero test,
// interval refinement for nonzero values; starts at 64 bits and doubles).
int sign_at_dominant_root(const FieldElement& z);
// sign(a - b) at the dominant root.
int cmp_at_dominant_root(const FieldElement& a, const FieldElement& b);
// Enclosure of z at the dominant root, width <= 2^-prec_bits.
QI value_at_dominant_root(const FieldElement& z, long prec_bits);

// One value per non-dominant embedding, descending modulus (+Im first on
// ties); each box coordinate has width <= 2^-prec_bits.
std::vector<CI> conjugate_values(const FieldElement& z, long prec_bits);

// Characteristic polynomial of multiplication by z (monic, degree = field
// degree); equals the minimal polynomial when z is primitive.
QPoly element_charpoly(const FieldElement& z);

}  // namespace tenttile
