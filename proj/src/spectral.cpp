#include "tenttile/spectral.hpp"

#include <cmath>

#include <stdexcept>

namespace tenttile {

ZPoly char_poly(const ZMat& m) {
  if (!m.empty() && m.size() != m[0].size())
    throw std::invalid_argument("char_poly: square matrix required");
  return zmat_charpoly(m);
}

PerronData perron_data(const Correspondence& corr, const SpecialPisotRecord& rec) {
  if (corr.family == "interval" || corr.u.empty())
    throw std::domain_error("perron_data: record has no substitution");
  PerronData pd;
  pd.field_id = rec.index;
  pd.lambda0 = corr.lambda0;
  pd.lambda0_pow_a = corr.lambda0_pow_a;
  pd.lambda0_pow_b = corr.lambda0_pow_b;
  pd.u = corr.u;

  // exact verification: u M = lambda0 u, entrywise, and u > 0
  ZMat m = incidence_matrix(corr.sigma);
  int n = corr.sigma.alphabet;
  for (int j = 0; j < n; ++j) {
    FieldElement lhs = FieldElement::zero(rec.index);
    for (int i = 0; i < n; ++i) {
      long mij = m[static_cast<size_t>(i)][static_cast<size_t>(j)].get_si();
      if (mij != 0)
        lhs = lhs + pd.u[static_cast<size_t>(i)] *
                        FieldElement::integer(rec.index, mij);
    }
    if (!(lhs == pd.lambda0 * pd.u[static_cast<size_t>(j)]))
      throw std::runtime_error("perron_data: left eigenvector check failed");
  }
  for (const auto& ui : pd.u)
    if (sign_at_dominant_root(ui) <= 0)
      throw std::runtime_error("perron_data: eigenvector entry not positive");

  // the characteristic polynomial of lambda0's multiplication matrix must
  // divide the incidence characteristic polynomial (reducible case)
  ZPoly cp = char_poly(m);
  QPoly cpq = zp_to_qp(cp);
  QPoly mp = element_charpoly(pd.lambda0);
  QPoly remainder;
  qp_divrem(cpq, mp, &remainder);
  if (!qp_is_zero(remainder))
    throw std::runtime_error("perron_data: lambda0 is not an eigenvalue");

  int d = qp_deg(mp) - 1;
  pd.reducible = (n != d + 1);
  pd.supplementary_dim = n - 1 - d;

  pd.contracting = conjugate_values(pd.lambda0, 96);
  if (pd.contracting.empty())
    throw std::runtime_error("perron_data: no contracting conjugates");
  pd.lambda1_mod = qi_sqrt(ci_abs2(pd.contracting.front()), 96);
  pd.lambdad_mod = qi_sqrt(ci_abs2(pd.contracting.back()), 96);
  if (!(pd.lambda1_mod.hi < 1))
    throw std::runtime_error("perron_data: not a Pisot substitution");
  return pd;
}

PiClass pi_exact(const std::vector<long>& x, const PerronData& pd) {
  if (x.size() != pd.u.size()) throw std::invalid_argument("pi_exact: length mismatch");
  FieldElement z = FieldElement::zero(pd.field_id);
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) z = z + pd.u[i] * FieldElement::integer(pd.field_id, x[i]);
  return PiClass{z};
}

PiClass pi_of_word(const Word& w, const PerronData& pd) {
  FieldElement z = FieldElement::zero(pd.field_id);
  for (int a : w) z = z + pd.u[static_cast<size_t>(a)];
  return PiClass{z};
}

Vec pi_numeric(const PiClass& c, const EmbeddingMap& emb) {
  Vec v = psi(c.z, emb);
  for (auto& x : v) x = -x;
  return v;
}

PiClass h_apply(const PiClass& c, const PerronData& pd) {
  return PiClass{c.z * pd.lambda0};
}

Mat h_matrix(const PerronData& pd, const ContractionPair& pair) {
  Mat m = mat_identity(pair.d);
  for (int i = 0; i < pd.lambda0_pow_a; ++i) m = mat_mul(m, pair.A);
  for (int i = 0; i < pd.lambda0_pow_b; ++i) m = mat_mul(m, pair.B);
  return m;
}

std::vector<double> subtile_norm_bounds(const Correspondence& corr,
                                        const PerronData& pd) {
  const SpecialPisotRecord& rec = registry_lookup(pd.field_id);
  auto [emb, pair] = build_matrices(rec, 96);
  PrefixGraph pg = prefix_graph(corr.sigma);
  int n = corr.sigma.alphabet;
  int d = pair.d;
  double l1 = pd.lambda1_mod.hi.get_d() * (1 + 1e-14);

  struct E {
    int to;
    Vec lab;
    double norm;
  };
  std::vector<std::vector<E>> out(static_cast<size_t>(n));
  double maxlab = 0;
  for (const auto& e : pg.edges) {
    Vec v = pi_numeric(pi_of_word(e.label, pd), emb);
    double s = 0;
    for (int k = 0; k < d; ++k) s += v[static_cast<size_t>(k)] * v[static_cast<size_t>(k)];
    double norm = std::sqrt(s) * (1 + 1e-12) + 1e-12;
    out[static_cast<size_t>(e.from)].push_back({e.to, v, norm});
    maxlab = std::max(maxlab, norm);
  }

  std::vector<double> rho(static_cast<size_t>(n), maxlab / (1.0 - l1) + 1e-9);
  for (int it = 0; it < 200; ++it) {
    std::vector<double> next(static_cast<size_t>(n), 0.0);
    for (int a = 0; a < n; ++a) {
      double m = 0;
      for (const auto& e : out[static_cast<size_t>(a)])
        m = std::max(m, e.norm + l1 * rho[static_cast<size_t>(e.to)]);
      next[static_cast<size_t>(a)] = m * (1 + 1e-15);
    }
    rho = std::move(next);
  }

  Mat h = h_matrix(pd, pair);
  const int kdepth = 12;
  struct WalkPiece {
    Vec t;
    int end;
  };
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> refined(static_cast<size_t>(n), 0.0);
    for (int a = 0; a < n; ++a) {
      std::vector<WalkPiece> walks{{Vec{0, 0, 0}, a}};
      Mat hk = mat_identity(d);
      double best = rho[static_cast<size_t>(a)];
      for (int step = 0; step < kdepth && walks.size() < 200000; ++step) {
        std::vector<WalkPiece> nxt;
        nxt.reserve(walks.size() * 2);
        for (const auto& wp : walks) {
          for (const auto& e : out[static_cast<size_t>(wp.end)]) {
            WalkPiece np;
            np.end = e.to;
            Vec moved = hk.apply(e.lab);
            for (int kk = 0; kk < d; ++kk)
              np.t[static_cast<size_t>(kk)] =
                  wp.t[static_cast<size_t>(kk)] + moved[static_cast<size_t>(kk)];
            nxt.push_back(np);
          }
        }
        walks = std::move(nxt);
        hk = mat_mul(hk, h);
        double contr = std::pow(l1, step + 1);
        double layer_best = 0;
        for (const auto& wp : walks) {
          double nn = 0;
          for (int kk = 0; kk < d; ++kk)
            nn += wp.t[static_cast<size_t>(kk)] * wp.t[static_cast<size_t>(kk)];
          layer_best = std::max(layer_best, std::sqrt(nn) * (1 + 1e-10) + 1e-8 +
                                                contr * rho[static_cast<size_t>(wp.end)]);
        }
        best = std::min(best, layer_best);
      }
      refined[static_cast<size_t>(a)] = best;
    }
    rho = std::move(refined);
  }
  return rho;
}

}  // namespace tenttile
