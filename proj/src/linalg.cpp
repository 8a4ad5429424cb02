#include "tenttile/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tenttile {

ZMat zmat_identity(int n) {
  ZMat m(n, std::vector<Z>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Z zmat_det(ZMat m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  Z prev(1);
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) { piv = i; break; }
      if (piv < 0) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
      }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

QMat qmat_mul(const QMat& a, const QMat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  QMat r(n, std::vector<Q>(m, Q(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

Q qmat_trace(const QMat& a) {
  Q t(0);
  for (size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

std::vector<Q> qmat_solve(QMat a, std::vector<Q> rhs) {
  int n = static_cast<int>(a.size());
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (a[i][k] != 0) { piv = i; break; }
    if (piv < 0) throw std::runtime_error("qmat_solve: singular matrix");
    std::swap(a[k], a[piv]);
    std::swap(rhs[k], rhs[piv]);
    for (int i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Q f = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<Q> x(n, Q(0));
  for (int i = n - 1; i >= 0; --i) {
    Q s = rhs[i];
    for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

QMat qmat_inverse(const QMat& a) {
  int n = static_cast<int>(a.size());
  QMat inv(n, std::vector<Q>(n, Q(0)));
  for (int j = 0; j < n; ++j) {
    std::vector<Q> e(n, Q(0));
    e[j] = 1;
    auto col = qmat_solve(a, e);
    for (int i = 0; i < n; ++i) inv[i][j] = col[i];
  }
  return inv;
}

Q qmat_det(QMat a) {
  int n = static_cast<int>(a.size());
  Q det(1);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (a[i][k] != 0) { piv = i; break; }
    if (piv < 0) return Q(0);
    if (piv != k) {
      std::swap(a[k], a[piv]);
      det = -det;
    }
    det *= a[k][k];
    for (int i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Q f = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

QPoly qmat_charpoly_faddeev(const QMat& m) {
  int n = static_cast<int>(m.size());
  QPoly cp(n + 1, Q(0));
  cp[n] = 1;
  QMat nk(n, std::vector<Q>(n, Q(0)));
  for (int i = 0; i < n; ++i) nk[i][i] = 1;
  for (int k = 1; k <= n; ++k) {
    nk = qmat_mul(m, nk);
    Q ck = -qmat_trace(nk) / k;
    cp[n - k] = ck;
    for (int i = 0; i < n; ++i) nk[i][i] += ck;
  }
  return cp;
}

// --------------------------- modular charpoly ------------------------------

namespace {

using u64 = std::uint64_t;

bool is_prime_u32(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<u64> prime_list(size_t count) {
  static std::vector<u64> cache;
  static u64 next_candidate = (1ull << 31) - 1;
  while (cache.size() < count) {
    if (is_prime_u32(next_candidate)) cache.push_back(next_candidate);
    --next_candidate;
  }
  return std::vector<u64>(cache.begin(), cache.begin() + count);
}

u64 add_m(u64 a, u64 b, u64 p) { return (a + b) % p; }
u64 sub_m(u64 a, u64 b, u64 p) { return (a + p - b) % p; }
u64 mul_m(u64 a, u64 b, u64 p) { return (a * b) % p; }

u64 pow_m(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mul_m(r, a, p);
    a = mul_m(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 inv_m(u64 a, u64 p) { return pow_m(a, p - 2, p); }

// charpoly of an n x n matrix mod p via Hessenberg reduction
std::vector<u64> charpoly_mod(std::vector<std::vector<u64>> h, u64 p) {
  int n = static_cast<int>(h.size());
  // similarity reduction to upper Hessenberg form
  for (int k = 1; k < n - 1; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (h[i][k - 1] != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != k) {
      std::swap(h[piv], h[k]);
      for (int i = 0; i < n; ++i) std::swap(h[i][piv], h[i][k]);
    }
    u64 inv = inv_m(h[k][k - 1], p);
    for (int i = k + 1; i < n; ++i) {
      if (h[i][k - 1] == 0) continue;
      u64 f = mul_m(h[i][k - 1], inv, p);
      for (int j = 0; j < n; ++j) h[i][j] = sub_m(h[i][j], mul_m(f, h[k][j], p), p);
      for (int j = 0; j < n; ++j) h[j][k] = add_m(h[j][k], mul_m(f, h[j][i], p), p);
    }
  }
  // recurrence over leading principal minors of tI - H
  std::vector<std::vector<u64>> cp(n + 1);
  cp[0] = {1};
  for (int m = 1; m <= n; ++m) {
    std::vector<u64> pm(m + 1, 0);
    // (t - h[m-1][m-1]) * cp[m-1]
    for (int j = 0; j < m; ++j) {
      pm[j + 1] = add_m(pm[j + 1], cp[m - 1][j], p);
      pm[j] = sub_m(pm[j], mul_m(h[m - 1][m - 1], cp[m - 1][j], p), p);
    }
    u64 prod = 1;
    for (int i = 1; i < m; ++i) {
      prod = mul_m(prod, h[m - i][m - i - 1], p);
      u64 c = mul_m(h[m - 1 - i][m - 1], prod, p);
      if (c == 0) continue;
      for (int j = 0; j <= m - 1 - i; ++j)
        pm[j] = sub_m(pm[j], mul_m(c, cp[m - 1 - i][j], p), p);
    }
    cp[m] = std::move(pm);
  }
  return cp[n];
}

}  // namespace

ZPoly zmat_charpoly(const ZMat& m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return {Z(1)};
  // coefficient bound (1 + max row norm)^n
  double maxrow = 1.0;
  for (const auto& row : m) {
    double s = 0;
    for (const auto& e : row) {
      double d = mpz_get_d(e.get_mpz_t());
      s += d * d;
    }
    maxrow = std::max(maxrow, std::sqrt(s));
  }
  double bits = n * std::log2(1.0 + maxrow) + 2;
  size_t nprimes = static_cast<size_t>(bits / 30.9) + 2;
  auto primes = prime_list(nprimes);

  Z modulus(1);
  std::vector<Z> coeff(n + 1, Z(0));
  for (u64 p : primes) {
    std::vector<std::vector<u64>> hp(n, std::vector<u64>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Z r = m[i][j] % static_cast<long>(p);
        if (r < 0) r += static_cast<long>(p);
        hp[i][j] = r.get_ui();
      }
    auto cp = charpoly_mod(hp, p);
    if (modulus == 1) {
      for (int k = 0; k <= n; ++k) coeff[k] = cp[k];
      modulus = static_cast<long>(p);
    } else {
      // CRT lift
      Z pz(static_cast<long>(p));
      Z minv;
      mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
      for (int k = 0; k <= n; ++k) {
        Z rk = coeff[k] % pz;
        if (rk < 0) rk += pz;
        Z diff = (Z(static_cast<long>(cp[k])) - rk) % pz;
        if (diff < 0) diff += pz;
        coeff[k] += modulus * ((diff * minv) % pz);
      }
      modulus *= pz;
    }
  }
  // symmetric range
  Z half = modulus / 2;
  for (auto& c : coeff)
    if (c > half) c -= modulus;
  return coeff;
}

// ------------------------------- HNF ---------------------------------------

ZMat zmat_hnf(ZMat m) {
  if (m.empty()) return m;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    // eliminate column c below row r via gcd row operations
    for (size_t i = r + 1; i < rows; ++i) {
      while (m[i][c] != 0) {
        if (m[r][c] == 0) {
          std::swap(m[r], m[i]);
          continue;
        }
        Z q = m[i][c] / m[r][c];  // truncated division is fine for the loop
        for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        if (m[i][c] != 0) std::swap(m[r], m[i]);
      }
    }
    if (m[r][c] != 0) {
      if (m[r][c] < 0)
        for (size_t j = 0; j < cols; ++j) m[r][j] = -m[r][j];
      // reduce entries above the pivot
      for (size_t i = 0; i < r; ++i) {
        Z q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
        if (q != 0)
          for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
      }
      ++r;
    }
  }
  m.resize(r);
  return m;
}

// ------------------------------- LLL ---------------------------------------

IMat lll_reduce(std::vector<std::vector<double>>& v) {
  int n = static_cast<int>(v.size());
  int dim = n == 0 ? 0 : static_cast<int>(v[0].size());
  IMat u(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i) u[i][i] = 1;
  if (n <= 1) return u;

  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (int k = 0; k < dim; ++k) s += a[k] * b[k];
    return s;
  };

  std::vector<std::vector<double>> gs(n, std::vector<double>(dim));
  std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0.0));
  std::vector<double> b2(n);

  auto recompute = [&]() {
    for (int i = 0; i < n; ++i) {
      gs[i] = v[i];
      for (int j = 0; j < i; ++j) {
        mu[i][j] = b2[j] > 0 ? dot(v[i], gs[j]) / b2[j] : 0.0;
        for (int k = 0; k < dim; ++k) gs[i][k] -= mu[i][j] * gs[j][k];
      }
      b2[i] = dot(gs[i], gs[i]);
    }
  };
  recompute();

  int k = 1, guard = 0;
  while (k < n && ++guard < 10000) {
    for (int j = k - 1; j >= 0; --j) {
      double m = std::round(mu[k][j]);
      if (m != 0) {
        auto mi = static_cast<std::int64_t>(m);
        for (int t = 0; t < dim; ++t) v[k][t] -= m * v[j][t];
        for (int t = 0; t < n; ++t) u[k][t] -= mi * u[j][t];
        recompute();
      }
    }
    if (b2[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * b2[k - 1]) {
      ++k;
    } else {
      std::swap(v[k], v[k - 1]);
      std::swap(u[k], u[k - 1]);
      recompute();
      k = std::max(k - 1, 1);
    }
  }
  return u;
}

// -------------------------- sphere enumeration -----------------------------

void sphere_enumerate(const std::vector<std::vector<double>>& w,
                      const std::vector<double>& center, double radius,
                      const std::function<void(const std::vector<long long>&)>& fn) {
  int r = static_cast<int>(w.size());
  if (r == 0) return;
  int dim = static_cast<int>(w[0].size());

  // Gram and Cholesky with outward slack
  std::vector<std::vector<double>> g(r, std::vector<double>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      double s = 0;
      for (int k = 0; k < dim; ++k) s += w[i][k] * w[j][k];
      g[i][j] = s;
    }
  // project center onto the basis: solve x * G = c * W^T
  std::vector<double> cw(r);
  for (int i = 0; i < r; ++i) {
    double s = 0;
    for (int k = 0; k < dim; ++k) s += center[k] * w[i][k];
    cw[i] = s;
  }
  // solve G^T y = cw (G symmetric)
  std::vector<std::vector<double>> a = g;
  std::vector<double> y = cw;
  for (int kk = 0; kk < r; ++kk) {
    int piv = kk;
    for (int i = kk + 1; i < r; ++i)
      if (std::abs(a[i][kk]) > std::abs(a[piv][kk])) piv = i;
    std::swap(a[kk], a[piv]);
    std::swap(y[kk], y[piv]);
    for (int i = kk + 1; i < r; ++i) {
      double f = a[i][kk] / a[kk][kk];
      for (int j = kk; j < r; ++j) a[i][j] -= f * a[kk][j];
      y[i] -= f * y[kk];
    }
  }
  std::vector<double> xc(r);
  for (int i = r - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j < r; ++j) s -= a[i][j] * xc[j];
    xc[i] = s / a[i][i];
  }

  // Cholesky G = L D L^T (quadratic-form version)
  std::vector<std::vector<double>> q = g;
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      double t = q[i][j] / q[i][i];
      for (int k = j; k < r; ++k) q[j][k] -= t * q[i][k];
      q[i][j] = t;
    }
  }

  double rad2 = radius * radius * (1.0 + 1e-9) + 1e-9;
  std::vector<long long> x(r, 0);
  std::vector<double> partial(r + 1, 0.0);  // accumulated quadratic form
  std::vector<double> corr(r, 0.0);

  // enumerate coordinates from the last basis vector down to the first
  std::function<void(int)> rec = [&](int i) {
    if (i < 0) {
      fn(x);
      return;
    }
    // offset_i = x_i - xc_i + sum_{j>i} q[i][j] (x_j - xc_j)
    double shift = 0;
    for (int j = i + 1; j < r; ++j) shift += q[i][j] * (static_cast<double>(x[j]) - xc[j]);
    double budget = rad2 - partial[i + 1];
    if (budget < 0) return;
    double half = std::sqrt(budget / q[i][i]) + 1e-9;
    double centre = xc[i] - shift;
    long long lo = static_cast<long long>(std::ceil(centre - half - 1e-9));
    long long hi = static_cast<long long>(std::floor(centre + half + 1e-9));
    for (long long t = lo; t <= hi; ++t) {
      x[i] = t;
      double off = static_cast<double>(t) - centre;
      partial[i] = partial[i + 1] + q[i][i] * off * off;
      corr[i] = off;
      if (partial[i] <= rad2) rec(i - 1);
    }
    x[i] = 0;
  };
  rec(r - 1);
}

}  // namespace tenttile
