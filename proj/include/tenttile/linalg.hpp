#pragma once

// Small exact linear algebra: integer and rational dense matrices,
// Hermite normal form, exact characteristic polynomials, plus the
// floating-point lattice tools (LLL, sphere enumeration) used to
// enumerate candidate translation classes.  Exact filters downstream make
// over-enumeration harmless, so the FP parts only need outward slack.

#include <cstdint>
#include <functional>
#include <vector>

#include "tenttile/qpoly.hpp"

namespace tenttile {

using ZMat = std::vector<std::vector<Z>>;
using QMat = std::vector<std::vector<Q>>;
using IMat = std::vector<std::vector<std::int64_t>>;

ZMat zmat_identity(int n);
Z zmat_det(ZMat m);  // fraction-free Bareiss elimination

QMat qmat_mul(const QMat& a, const QMat& b);
Q qmat_trace(const QMat& a);
// Solve a*x = rhs exactly; throws on singular a.
std::vector<Q> qmat_solve(QMat a, std::vector<Q> rhs);
QMat qmat_inverse(const QMat& a);
Q qmat_det(QMat a);

// Characteristic polynomial det(tI - M), exact.
// Faddeev-LeVerrier over the rationals; fine for small n.
QPoly qmat_charpoly_faddeev(const QMat& m);
// Modular Hessenberg + CRT; intended for integer adjacency matrices.
ZPoly zmat_charpoly(const ZMat& m);

// Row-style Hermite normal form.  Rows of the result are a basis of the
// integer row span of the input; zero rows are dropped.
ZMat zmat_hnf(ZMat m);

// ---------------------------------------------------------------------------
// Lattice tools (floating point, used only for candidate generation).

// LLL-reduce the rows of v (r x c, r <= c).  Returns the unimodular
// transform u (r x r, int64) with  reduced = u * v.
IMat lll_reduce(std::vector<std::vector<double>>& v);

// Enumerate all integer coefficient vectors x (size r) with
// || x * w - center || <= radius, where w has r rows of dimension dim.
// Bounds are padded outward; callers must re-check candidates exactly.
void sphere_enumerate(const std::vector<std::vector<double>>& w,
                      const std::vector<double>& center, double radius,
                      const std::function<void(const std::vector<long long>&)>& fn);

}  // namespace tenttile
