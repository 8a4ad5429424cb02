#include "tenttile/substitution.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace tenttile {

Word Substitution::apply(const Word& w) const {
  Word out;
  for (int a : w) {
    if (a < 0 || a >= alphabet) throw std::invalid_argument("apply: letter out of range");
    const Word& im = images[static_cast<size_t>(a)];
    out.insert(out.end(), im.begin(), im.end());
  }
  return out;
}

Word Substitution::iterate(int letter, int k) const {
  Word w{letter};
  for (int i = 0; i < k; ++i) w = apply(w);
  return w;
}

std::vector<long> abelianization(const Word& w, int alphabet) {
  std::vector<long> counts(static_cast<size_t>(alphabet), 0);
  for (int a : w) ++counts[static_cast<size_t>(a)];
  return counts;
}

ZMat incidence_matrix(const Substitution& s) {
  int n = s.alphabet;
  ZMat m(static_cast<size_t>(n), std::vector<Z>(static_cast<size_t>(n), 0));
  for (int j = 0; j < n; ++j) {
    auto counts = abelianization(s.images[static_cast<size_t>(j)], n);
    for (int i = 0; i < n; ++i)
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] = counts[static_cast<size_t>(i)];
  }
  return m;
}

bool is_primitive(const Substitution& s) {
  int n = s.alphabet;
  ZMat m = incidence_matrix(s);
  std::vector<std::vector<int>> b(static_cast<size_t>(n),
                                  std::vector<int>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[i][j] = m[i][j] > 0 ? 1 : 0;
  auto all_positive = [&](const std::vector<std::vector<int>>& x) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!x[i][j]) return false;
    return true;
  };
  std::vector<std::vector<int>> cur = b;
  for (int k = 1; k <= n * n; ++k) {
    if (all_positive(cur)) return true;
    std::vector<std::vector<int>> nxt(static_cast<size_t>(n),
                                      std::vector<int>(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (!cur[i][l]) continue;
        for (int j = 0; j < n; ++j)
          if (b[l][j]) nxt[i][j] = 1;
      }
    cur = std::move(nxt);
  }
  return all_positive(cur);
}

PrefixGraph prefix_graph(const Substitution& s) {
  PrefixGraph g;
  g.n = s.alphabet;
  for (int b = 0; b < s.alphabet; ++b) {
    const Word& im = s.images[static_cast<size_t>(b)];
    for (size_t pos = 0; pos < im.size(); ++pos) {
      PrefixEdge e;
      e.from = im[pos];
      e.to = b;
      e.label = Word(im.begin(), im.begin() + static_cast<long>(pos));
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

Substitution zeta_p(int p) {
  if (p < 3) throw std::invalid_argument("zeta_p: p >= 3 required");
  Substitution s;
  s.alphabet = p;
  s.images.resize(static_cast<size_t>(p));
  s.images[0] = {1, 0};
  for (int k = 1; k <= p - 2; ++k) s.images[static_cast<size_t>(k)] = {k + 1};
  s.images[static_cast<size_t>(p - 1)] = {p - 1, 0};
  return s;
}

Substitution theta_q(int q) {
  if (q < 2) throw std::invalid_argument("theta_q: q >= 2 required");
  Substitution s;
  s.alphabet = 2 * q;
  s.images.resize(static_cast<size_t>(2 * q));
  for (int k = 0; k <= q - 2; ++k) s.images[static_cast<size_t>(k)] = {k + 1};
  s.images[static_cast<size_t>(q - 1)] = {q, q - 1};
  for (int k = q; k <= 2 * q - 2; ++k) s.images[static_cast<size_t>(k)] = {k + 1};
  s.images[static_cast<size_t>(2 * q - 1)] = {2 * q - 1, 0};
  return s;
}

Substitution theta_prime_q(int q) {
  if (q < 3) throw std::invalid_argument("theta_prime_q: q >= 3 required");
  Substitution s;
  if (q % 2 == 1) {
    s.alphabet = 2 * q;
    s.images.resize(static_cast<size_t>(2 * q));
    for (int k = 0; k <= q - 2; ++k) s.images[static_cast<size_t>(k)] = {q + 1 + k};
    s.images[static_cast<size_t>(q - 1)] = {0, 2 * q - 1};
    for (int k = q; k <= 2 * q - 2; ++k) s.images[static_cast<size_t>(k)] = {k - q + 1};
    s.images[static_cast<size_t>(2 * q - 1)] = {q - 1, q};
  } else {
    s.alphabet = q;
    s.images.resize(static_cast<size_t>(q));
    for (int k = 0; k <= q - 3; ++k) s.images[static_cast<size_t>(k)] = {k + 2};
    s.images[static_cast<size_t>(q - 2)] = {0, q - 1};
    s.images[static_cast<size_t>(q - 1)] = {0, q - 1, 1};
  }
  return s;
}

Substitution zeta_prime_p(int p) {
  if (p < 3)
    throw std::invalid_argument("zeta_prime_p: p >= 3 required (p = 2 is ill-formed)");
  Substitution s;
  if (p % 2 == 1) {
    s.alphabet = 2 * p;
    s.images.resize(static_cast<size_t>(2 * p));
    s.images[0] = {p + 1, p};
    for (int k = 1; k <= p - 2; ++k) s.images[static_cast<size_t>(k)] = {p + 1 + k};
    s.images[static_cast<size_t>(p - 1)] = {0, 2 * p - 1};
    s.images[static_cast<size_t>(p)] = {0, 1};
    for (int k = p + 1; k <= 2 * p - 2; ++k) s.images[static_cast<size_t>(k)] = {k - p + 1};
    s.images[static_cast<size_t>(2 * p - 1)] = {p - 1, p};
  } else {
    s.alphabet = p;
    s.images.resize(static_cast<size_t>(p));
    s.images[0] = {2, 0, 1};
    for (int k = 1; k <= p - 3; ++k) s.images[static_cast<size_t>(k)] = {k + 2};
    s.images[static_cast<size_t>(p - 2)] = {0, p - 1};
    s.images[static_cast<size_t>(p - 1)] = {0, p - 1, 0, 1};
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

struct PrefixEntry {
  std::vector<long> ell;
  int next_letter;
  FieldElement z;  // pairing of the prefix abelianization with u
};

std::vector<std::vector<PrefixEntry>> prefix_table(const Substitution& s,
                                                   const std::vector<FieldElement>& u) {
  int fid = u[0].field_id();
  std::vector<std::vector<PrefixEntry>> tab(static_cast<size_t>(s.alphabet));
  for (int c = 0; c < s.alphabet; ++c) {
    const Word& im = s.images[static_cast<size_t>(c)];
    std::vector<long> ell(static_cast<size_t>(s.alphabet), 0);
    FieldElement z = FieldElement::zero(fid);
    for (size_t pos = 0; pos < im.size(); ++pos) {
      tab[static_cast<size_t>(c)].push_back({ell, im[pos], z});
      ++ell[static_cast<size_t>(im[pos])];
      z = z + u[static_cast<size_t>(im[pos])];
    }
  }
  return tab;
}

template <bool kStrong>
CoincidenceResult coincidence_search(const Substitution& s,
                                     const std::vector<FieldElement>& u,
                                     const FieldElement& lambda0, int k_max) {
  if (static_cast<int>(u.size()) != s.alphabet)
    throw std::invalid_argument("coincidence: eigenvector length mismatch");
  if (k_max < 1) throw std::invalid_argument("coincidence: k_max >= 1 required");
  int fid = lambda0.field_id();
  auto tab = prefix_table(s, u);
  ZMat m = incidence_matrix(s);

  // a state whose pairing with u exceeds D/(lambda0 - 1) in absolute value
  // can never come back to zero; D bounds the per-step increments
  Q dmax(0);
  for (const auto& row : tab)
    for (const auto& e : row) {
      QI zi = value_at_dominant_root(e.z, 64);
      Q a = abs(zi.lo), b = abs(zi.hi);
      dmax = std::max(dmax, std::max(a, b));
    }
  QI lam = value_at_dominant_root(lambda0, 64);
  Q bound = lam.lo > 1 ? Q(2 * dmax / (lam.lo - 1)) : (Q(1) << 62);
  // double-precision upper bounds for a fast certified prune
  double bound_d = bound.get_d() * (1 + 1e-12) + 1e-12;
  std::vector<double> u_mid(u.size()), u_rad(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    QI ui = value_at_dominant_root(u[i], 64);
    u_mid[i] = ui.mid().get_d();
    u_rad[i] = ui.width().get_d() + 1e-12;
  }
  // |dot(v, u_mid)| - err > bound  certifies the state is dead
  auto prune_by_value = [&](const std::vector<long>& v) {
    double dot = 0, err = 0;
    for (size_t i = 0; i < v.size(); ++i) {
      double vi = static_cast<double>(v[i]);
      dot += vi * u_mid[i];
      err += std::abs(vi) * (u_rad[i] + 1e-9);
    }
    err += 1e-9;
    return std::abs(dot) - err > bound_d;
  };

  struct State {
    std::vector<long> v;
    int c1, c2;
    FieldElement z;
  };
  auto key_of = [&](const State& st) {
    std::string k;
    if constexpr (kStrong) {
      k.reserve(st.v.size() * sizeof(long) + 2);
      for (long x : st.v) k.append(reinterpret_cast<const char*>(&x), sizeof(long));
    } else {
      // weak states are identified by the projected value only
      for (const Q& c : st.z.coeffs()) {
        k += c.get_str();
        k.push_back(';');
      }
    }
    k.push_back(static_cast<char>(st.c1));
    k.push_back(static_cast<char>(st.c2));
    return k;
  };

  CoincidenceResult res;
  res.holds = true;
  bool all_closed = true;
  int min_unfound_depth = k_max;
  const std::size_t pair_state_budget = 60'000;
  std::vector<std::pair<int, int>> overflow_pairs;

  for (int a1 = 0; a1 < s.alphabet; ++a1) {
    for (int a2 = a1 + 1; a2 < s.alphabet; ++a2) {
      std::unordered_set<std::string> seen;
      std::vector<State> layer;
      State init{std::vector<long>(static_cast<size_t>(s.alphabet), 0), a1, a2,
                 FieldElement::zero(fid)};
      seen.insert(key_of(init));
      layer.push_back(std::move(init));
      bool found = false;
      bool closed = false;
      bool overflow = false;
      int k = 0;
      while (!found && !overflow && k < k_max && !layer.empty()) {
        ++k;
        std::vector<State> next;
        for (const State& st : layer) {
          std::vector<long> mv(static_cast<size_t>(s.alphabet), 0);
          for (int i = 0; i < s.alphabet; ++i) {
            long acc = 0;
            for (int j = 0; j < s.alphabet; ++j)
              acc += m[static_cast<size_t>(i)][static_cast<size_t>(j)].get_si() *
                     st.v[static_cast<size_t>(j)];
            mv[static_cast<size_t>(i)] = acc;
          }
          FieldElement lz =
              kStrong ? FieldElement::zero(fid) : lambda0 * st.z;
          for (const auto& e1 : tab[static_cast<size_t>(st.c1)]) {
            for (const auto& e2 : tab[static_cast<size_t>(st.c2)]) {
              State ns;
              ns.c1 = e1.next_letter;
              ns.c2 = e2.next_letter;
              ns.v = mv;
              for (int i = 0; i < s.alphabet; ++i)
                ns.v[static_cast<size_t>(i)] +=
                    e1.ell[static_cast<size_t>(i)] - e2.ell[static_cast<size_t>(i)];
              if constexpr (kStrong) {
                bool zero = std::all_of(ns.v.begin(), ns.v.end(),
                                        [](long x) { return x == 0; });
                if (zero && ns.c1 == ns.c2) {
                  res.pair_witnesses.push_back({a1, a2, k, ns.c1});
                  found = true;
                  break;
                }
                if (prune_by_value(ns.v)) continue;  // certified dead
                ns.z = FieldElement::zero(fid);
              } else {
                ns.z = lz + e1.z - e2.z;
                if (ns.z.is_zero() && ns.c1 == ns.c2) {
                  res.pair_witnesses.push_back({a1, a2, k, ns.c1});
                  found = true;
                  break;
                }
                QI zi = value_at_dominant_root(ns.z, 64);
                if (zi.lo > bound || zi.hi < -bound) continue;  // certified dead
              }
              std::string key = key_of(ns);
              if (seen.insert(std::move(key)).second) next.push_back(std::move(ns));
            }
            if (found) break;
          }
          if (found) break;
          if (seen.size() > pair_state_budget) {
            overflow = true;
            break;
          }
        }
        if (found) break;
        if (overflow) break;
        if (next.empty()) closed = true;
        layer = std::move(next);
      }
      if (overflow) {
        overflow_pairs.emplace_back(a1, a2);
        continue;
      }
      if (!found) {
        res.holds = false;
        min_unfound_depth = std::min(min_unfound_depth, k);
        if (!closed) all_closed = false;
      } else {
        res.searched_k = std::max(res.searched_k, k);
      }
    }
  }

  if (!overflow_pairs.empty()) {
    // exact fallback: expand the words level by level and compare the
    // per-level sets of (abelianized prefix, next letter), exactly
    const std::size_t length_cap = kStrong ? 250'000 : 50'000;
    std::vector<Word> words(static_cast<size_t>(s.alphabet));
    for (int a = 0; a < s.alphabet; ++a) words[static_cast<size_t>(a)] = {a};
    std::vector<std::pair<int, int>> pending = overflow_pairs;
    int k = 0;
    while (!pending.empty() && k < k_max) {
      std::size_t longest = 0;
      for (const auto& w : words) longest = std::max(longest, w.size());
      if (longest > length_cap) break;
      ++k;
      std::vector<std::unordered_set<std::string>> sets(
          static_cast<size_t>(s.alphabet));
      for (int a = 0; a < s.alphabet; ++a) {
        words[static_cast<size_t>(a)] = s.apply(words[static_cast<size_t>(a)]);
        const Word& w = words[static_cast<size_t>(a)];
        std::vector<long> ell(static_cast<size_t>(s.alphabet), 0);
        FieldElement z = FieldElement::zero(fid);
        for (int b : w) {
          std::string key;
          if constexpr (kStrong) {
            key.reserve(ell.size() * sizeof(long) + 1);
            for (long x : ell)
              key.append(reinterpret_cast<const char*>(&x), sizeof(long));
          } else {
            for (const Q& cq : z.coeffs()) {
              key += cq.get_str();
              key.push_back(';');
            }
          }
          key.push_back(static_cast<char>(b));
          sets[static_cast<size_t>(a)].insert(std::move(key));
          ++ell[static_cast<size_t>(b)];
          if constexpr (!kStrong) z = z + u[static_cast<size_t>(b)];
        }
      }
      std::vector<std::pair<int, int>> still;
      for (auto [a1, a2] : pending) {
        const auto& s1 = sets[static_cast<size_t>(a1)];
        const auto& s2 = sets[static_cast<size_t>(a2)];
        const auto& small = s1.size() <= s2.size() ? s1 : s2;
        const auto& big = s1.size() <= s2.size() ? s2 : s1;
        bool found = false;
        for (const auto& key : small)
          if (big.count(key)) {
            res.pair_witnesses.push_back(
                {a1, a2, k, static_cast<int>(static_cast<unsigned char>(key.back()))});
            found = true;
            break;
          }
        if (!found) still.emplace_back(a1, a2);
        else res.searched_k = std::max(res.searched_k, k);
      }
      pending = std::move(still);
    }
    if (!pending.empty()) {
      res.holds = false;
      all_closed = false;
      min_unfound_depth = std::min(min_unfound_depth, k);
    }
  }

  if (!res.holds) res.searched_k = min_unfound_depth;
  res.search_exhausted = !res.holds && all_closed;
  for (const auto& w : res.pair_witnesses)
    if (w.k >= res.witness_k) {
      res.witness_k = w.k;
      res.witness_letter = w.letter;
    }
  return res;
}

}  // namespace

CoincidenceResult strong_coincidence(const Substitution& s,
                                     const std::vector<FieldElement>& u,
                                     const FieldElement& lambda0, int k_max) {
  return coincidence_search<true>(s, u, lambda0, k_max);
}

CoincidenceResult weak_coincidence(const Substitution& s,
                                   const std::vector<FieldElement>& u,
                                   const FieldElement& lambda0, int k_max) {
  return coincidence_search<false>(s, u, lambda0, k_max);
}

// ---------------------------------------------------------------------------

namespace {

void fill_eigdata(Correspondence& c, const SpecialPisotRecord& rec) {
  int id = rec.index;
  FieldElement alpha = FieldElement::generator(id);
  FieldElement beta = beta_of(rec);
  if (c.family == "zeta_p") {
    int p = c.parameter;
    c.u.push_back(beta);
    for (int k = 1; k < p; ++k) c.u.push_back(alpha.pow(k));
    c.lambda0 = alpha;
    c.lambda0_pow_a = 1;
  } else if (c.family == "theta_q") {
    int q = c.parameter;
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < q; ++k) c.u.push_back(alpha.pow(k));
    c.lambda0 = alpha;
    c.lambda0_pow_a = 1;
  } else if (c.family == "theta_prime_q") {
    int q = c.parameter;
    int copies = (q % 2 == 1) ? 2 : 1;
    for (int r = 0; r < copies; ++r)
      for (int k = 0; k < q; ++k) c.u.push_back(beta.pow(k));
    if (q % 2 == 1) {
      c.lambda0 = beta;
      c.lambda0_pow_b = 1;
    } else {
      c.lambda0 = beta * beta;
      c.lambda0_pow_b = 2;
    }
  } else if (c.family == "zeta_prime_p") {
    int p = c.parameter;
    int copies = (p % 2 == 1) ? 2 : 1;
    for (int r = 0; r < copies; ++r) {
      c.u.push_back(alpha);
      for (int k = 1; k < p; ++k) c.u.push_back(beta.pow(k));
    }
    if (p % 2 == 1) {
      c.lambda0 = beta;
      c.lambda0_pow_b = 1;
    } else {
      c.lambda0 = beta * beta;
      c.lambda0_pow_b = 2;
    }
  }
}

void fill_subtiles(Correspondence& c, const SpecialPisotRecord& rec) {
  int id = rec.index;
  FieldElement alpha = FieldElement::generator(id);
  FieldElement beta = beta_of(rec);
  FieldElement zero = FieldElement::zero(id);
  FieldElement one = FieldElement::one(id);
  auto T = [&](FieldElement t, int sign, int pa, int pb) {
    return SubtileTransform{std::move(t), sign, pa, pb};
  };
  if (c.family == "zeta_p") {
    int p = c.parameter;
    for (int k = 0; k <= p - 2; ++k) c.subtiles.push_back(T(alpha.pow(k) * beta, -1, k, 1));
    c.subtiles.push_back(T(zero, 1, p - 1, 0));
    for (int k = 0; k < p; ++k) c.union_letters.push_back(k);
  } else if (c.family == "theta_q") {
    int q = c.parameter;
    for (int k = 0; k <= q - 2; ++k)
      c.subtiles.push_back(T(alpha.pow(k) * (one - beta), 1, k, 1));
    c.subtiles.push_back(T(alpha.pow(q - 1), -1, q - 1, 0));
    for (int k = q; k <= 2 * q - 2; ++k)
      c.subtiles.push_back(T(alpha.pow(k - q) * beta, -1, k - q, 1));
    c.subtiles.push_back(T(zero, 1, q - 1, 0));
    for (int k = q; k < 2 * q; ++k) c.union_letters.push_back(k);
  } else if (c.family == "theta_prime_q") {
    int q = c.parameter;
    if (q % 2 == 1) {
      for (int k = 0; k <= q - 2; ++k) {
        if (k % 2 == 0) c.subtiles.push_back(T(zero, 1, 1, k));
        else c.subtiles.push_back(T(beta.pow(k), -1, 1, k));
      }
      c.subtiles.push_back(T(zero, 1, 0, q - 1));
      for (int k = q; k <= 2 * q - 2; ++k) {
        if ((k - q) % 2 == 0) c.subtiles.push_back(T(beta.pow(k - q), -1, 1, k - q));
        else c.subtiles.push_back(T(zero, 1, 1, k - q));
      }
      c.subtiles.push_back(T(beta.pow(q - 1), -1, 0, q - 1));
    } else {
      for (int k = 0; k <= q - 2; ++k) {
        if (k % 2 == 0) c.subtiles.push_back(T(zero, 1, 1, k));
        else c.subtiles.push_back(T(beta.pow(k), -1, 1, k));
      }
      c.subtiles.push_back(T(beta.pow(q - 1), -1, 0, q - 1));
    }
    c.inverse_letter = 0;
  } else if (c.family == "zeta_prime_p") {
    int p = c.parameter;
    if (p == 3) {
      c.subtiles.push_back(T(zero, 1, 1, 0));
      c.subtiles.push_back(T(beta, -1, 1, 1));
      c.subtiles.push_back(T(zero, 1, 0, 2));
      c.subtiles.push_back(T(alpha, -1, 1, 0));
      c.subtiles.push_back(T(zero, 1, 1, 1));
      c.subtiles.push_back(T(beta * beta, -1, 0, 2));
    } else {
      for (int k = 0; k <= p - 2; ++k) {
        if (k % 2 == 0) c.subtiles.push_back(T(zero, 1, 1, k));
        else c.subtiles.push_back(T(beta.pow(k), -1, 1, k));
      }
      c.subtiles.push_back(T(beta.pow(p - 1), -1, 0, p - 1));
    }
    c.inverse_letter = 0;
  }
}

}  // namespace

Correspondence substitution_for(const SpecialPisotRecord& rec) {
  if (rec.index == 0) throw std::domain_error("substitution_for: i = 0");
  Correspondence c;
  switch (rec.index) {
    case 2:
    case -2:
      c.family = "interval";
      return c;
    case 1:
      c.family = "zeta_p";
      c.parameter = 3;
      c.sigma = zeta_p(3);
      break;
    case 3:
    case 4:
    case 5:
      c.family = "theta_q";
      c.parameter = rec.index;
      c.sigma = theta_q(rec.index);
      break;
    case -1:
      c.family = "zeta_prime_p";
      c.parameter = 3;
      c.sigma = zeta_prime_p(3);
      break;
    case -3:
    case -4:
    case -5:
      c.family = "theta_prime_q";
      c.parameter = -rec.index;
      c.sigma = theta_prime_q(-rec.index);
      break;
    default:
      throw std::domain_error("substitution_for: unexpected index");
  }
  fill_eigdata(c, rec);
  fill_subtiles(c, rec);
  return c;
}

std::string substitution_to_json(const Substitution& s) {
  std::ostringstream os;
  os << "{\"alphabet\": " << s.alphabet << ", \"images\": [";
  for (size_t j = 0; j < s.images.size(); ++j) {
    if (j) os << ", ";
    os << "[";
    for (size_t t = 0; t < s.images[j].size(); ++t) {
      if (t) os << ", ";
      os << s.images[j][t];
    }
    os << "]";
  }
  os << "]}";
  return os.str();
}

}  // namespace tenttile
