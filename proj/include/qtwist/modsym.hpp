#pragma once

// Exact modular symbols for Gamma_0(C): the Manin-symbol presentation of
// H_1(X_0(C)), boundary map and cuspidal subspace, star involution, Hecke
// action via Merel matrices, rational newform duals with integral
// normalization, and exact evaluation of <{0,k/m}, f> as coordinates over
// the period lattice basis.
//
// Everything in this header is exact rational arithmetic; no floating point.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "qtwist/arith.hpp"
#include "qtwist/curve.hpp"
#include "qtwist/la.hpp"
#include "qtwist/p1.hpp"

namespace qtwist::modsym {

struct AmbiguityError : Error {
  using Error::Error;
};
struct NotFoundError : Error {
  using Error::Error;
};

struct SymbolPair {
  Rat x_plus, x_minus;  // <{0,k/m}, f> = x_plus Omega+ + x_minus (i Omega-)
};

struct PeriodPair {
  Int s, t;
  int lattice_type;  // 2 when disc(E) < 0, 1 when disc(E) > 0
};

// genus of X_0(N) by the classical formula (used as an internal check)
inline int64_t genus_x0(int64_t N) {
  Int mu = N;
  for (const auto& pp : factor(Int(N))) mu = mu / pp.p * (pp.p + 1);
  int64_t nu2 = 0, nu3 = 0;
  if (N % 4 != 0) {
    nu2 = 1;
    for (const auto& pp : factor(Int(N))) {
      if (pp.p == 2) continue;
      nu2 *= 1 + kronecker(Int(-1), pp.p);
    }
  }
  if (N % 9 != 0) {
    nu3 = 1;
    for (const auto& pp : factor(Int(N))) nu3 *= 1 + kronecker(Int(-3), pp.p);
  }
  int64_t nuinf = 0;
  for (const auto& d : divisors(Int(N))) {
    Int e = igcd(d, Int(N) / d);
    Int phi = e;
    if (e > 1)
      for (const auto& pp : factor(e)) phi = phi / pp.p * (pp.p - 1);
    nuinf += to_i64(phi);
  }
  int64_t num = 12 + to_i64(mu) - 3 * nu2 - 4 * nu3 - 6 * nuinf;
  if (num % 12 != 0) throw Error("genus formula failed");
  return num / 12;
}

namespace detail {

// lift a normalized (c:d) to a matrix [a b; c d'] in SL_2(Z)
inline std::array<int64_t, 4> lift_to_sl2(int64_t c, int64_t d, int64_t N) {
  if (c == 0) return {1, 0, 0, 1};
  int64_t d1 = d;
  for (int64_t k = 0;; ++k) {
    if (std::gcd(c, d1) == 1) break;
    d1 += N;
    if (k > 2 * c + 4) throw Error("lift_to_sl2 failed");
  }
  Int g, a, mb;
  mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), mb.get_mpz_t(), Int(d1).get_mpz_t(), Int(c).get_mpz_t());
  if (g != 1) throw Error("lift_to_sl2: gcd");
  // a d1 + mb c = 1, so det [a, -mb; c, d1] = 1
  return {to_i64(a), to_i64(-mb), c, d1};
}

struct Cusp {
  Int p, q;  // lowest terms, q >= 0; infinity = (1, 0)
};

inline Cusp make_cusp(Int p, Int q) {
  if (q == 0) return {Int(1), Int(0)};
  Int g = igcd(p, q);
  p /= g;
  q /= g;
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

// Gamma_0(N)-equivalence of cusps: s1 q2 = s2 q1 (mod gcd(q1 q2, N)),
// with s_j the inverse of p_j mod q_j (s_j = p_j when q_j = 0).
inline bool cusps_equiv(const Cusp& a, const Cusp& b, int64_t N) {
  auto inv = [](const Cusp& c) -> Int {
    if (c.q == 0) return c.p;
    if (c.q == 1) return 0;
    Int s;
    if (mpz_invert(s.get_mpz_t(), c.p.get_mpz_t(), c.q.get_mpz_t()) == 0)
      throw Error("cusp inverse failed");
    return s;
  };
  Int g = igcd(a.q * b.q, Int(N));  // gcd(0, N) = N
  Int diff = inv(a) * b.q - inv(b) * a.q;
  return diff % g == 0;
}

// Merel's matrix family for T_n (n coprime to the level):
// { [a b; c d] : det = n, a > b >= 0, d > c >= 0 }
inline std::vector<std::array<int64_t, 4>> merel_matrices(int64_t n) {
  std::vector<std::array<int64_t, 4>> out;
  for (int64_t a = 1; a <= n; ++a)
    for (int64_t d = 1; d <= n; ++d) {
      int64_t r = a * d - n;
      if (r < 0) continue;
      if (r == 0) {
        for (int64_t c = 0; c < d; ++c) out.push_back({a, 0, c, d});
        for (int64_t b = 1; b < a; ++b) out.push_back({a, b, 0, d});
      } else {
        for (int64_t b = 1; b < a; ++b) {
          if (r % b != 0) continue;
          int64_t c = r / b;
          if (c < d) out.push_back({a, b, c, d});
        }
      }
    }
  return out;
}

}  // namespace detail

struct ModSymSpace {
  int64_t level = 0;
  P1Table p1;
  int dim = 0;    // dim_Q of the full space M
  int genus = 0;  // cuspidal rank = 2 genus
  int ncusps = 0;
  std::vector<int32_t> free_gens;                      // P1 indices forming the basis
  std::vector<la::Vec> coord;                          // per P1 index: class in Q^dim
  std::vector<std::pair<int32_t, int32_t>> gen_cusps;  // per P1 index: (to, from) cusp ids
  la::Mat boundary_mat;                                // ncusps x dim
  la::Mat star;                                        // dim x dim
  std::vector<la::Vec> cuspidal;                       // 2g basis vectors of V
  std::vector<la::Vec> hz;                             // integral cuspidal homology (2g)
  std::vector<la::Vec> hz_plus;                        // star-fixed sublattice (g)
  std::vector<la::Vec> hz_minus;                       // star-anti sublattice (g)

  mutable std::map<int64_t, la::Mat> hecke_cache;
  mutable std::mutex hecke_mu;

  int32_t sigma_index(int32_t i) const {
    auto [c, d] = p1.elems[i];
    return p1.index(d, -c);
  }
  int32_t tau_index(int32_t i) const {
    auto [c, d] = p1.elems[i];
    return p1.index(d, -c - d);
  }
  int32_t star_index(int32_t i) const {
    auto [c, d] = p1.elems[i];
    return p1.index(-c, d);
  }

  // Hecke operator T_p on the full space, p coprime to the level.
  const la::Mat& hecke(int64_t p) const {
    std::lock_guard<std::mutex> lock(hecke_mu);
    auto it = hecke_cache.find(p);
    if (it != hecke_cache.end()) return it->second;
    if (level % p == 0) throw PreconditionError("hecke: p divides the level");
    auto mats = detail::merel_matrices(p);
    la::Mat T = la::zeros(dim, dim);
    for (int j = 0; j < dim; ++j) {
      auto [c, d] = p1.elems[free_gens[j]];
      for (const auto& m : mats) {
        int64_t cc = c * m[0] + d * m[2];
        int64_t dd = c * m[1] + d * m[3];
        const la::Vec& v = coord[p1.index(cc % level, dd % level)];
        for (int i = 0; i < dim; ++i)
          if (v[i] != 0) T[i][j] += v[i];
      }
    }
    return hecke_cache.emplace(p, std::move(T)).first->second;
  }
};

// Build the Manin-symbol presentation at level C.
inline std::shared_ptr<ModSymSpace> build_space(int64_t C) {
  if (C < 11) throw PreconditionError("build_space: level must be at least 11");
  if (C > 10'000) throw CapacityError("build_space: level capped at 10^4");
  auto sp = std::make_shared<ModSymSpace>();
  ModSymSpace& S = *sp;
  S.level = C;
  S.p1 = P1Table::build(C);
  const int n = int(S.p1.size());

  // two-term relations x + x.sigma = 0: pair generators up
  std::vector<int> esign(n, 2);  // +1 / -1 relative to the orbit rep; 0 = dead
  std::vector<int32_t> erep(n, -1);
  for (int32_t i = 0; i < n; ++i) {
    if (esign[i] != 2) continue;
    int32_t j = S.sigma_index(i);
    if (j == i) {
      esign[i] = 0;
      continue;
    }
    esign[i] = 1;
    erep[i] = i;
    esign[j] = -1;
    erep[j] = i;
  }
  std::vector<int32_t> reps;
  std::vector<int32_t> rep_pos(n, -1);
  for (int32_t i = 0; i < n; ++i)
    if (esign[i] == 1) {
      rep_pos[i] = int32_t(reps.size());
      reps.push_back(i);
    }
  const int R = int(reps.size());

  // three-term relations x + x.tau + x.tau^2 = 0, over the representatives
  la::Mat rows;
  std::vector<bool> seen(n, false);
  for (int32_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int32_t t1 = S.tau_index(i), t2 = S.tau_index(t1);
    seen[i] = seen[t1] = seen[t2] = true;
    la::Vec row(R, Rat(0));
    bool nonzero = false;
    for (int32_t x : {i, t1, t2}) {
      if (esign[x] == 0) continue;
      row[rep_pos[erep[x]]] += esign[x];
    }
    for (const auto& v : row)
      if (v != 0) nonzero = true;
    if (nonzero) rows.push_back(std::move(row));
  }
  la::Mat rr = rows;
  std::vector<size_t> piv = la::rref(rr);
  std::vector<bool> is_piv(R, false);
  for (size_t c : piv) is_piv[c] = true;
  S.dim = R - int(piv.size());
  std::vector<int> basis_pos(R, -1);
  {
    int b = 0;
    for (int c = 0; c < R; ++c)
      if (!is_piv[c]) basis_pos[c] = b++;
  }
  // expression of each representative column in the free basis
  std::vector<la::Vec> col_expr(R, la::Vec(S.dim, Rat(0)));
  for (int c = 0; c < R; ++c)
    if (!is_piv[c]) col_expr[c][basis_pos[c]] = 1;
  for (size_t r = 0; r < piv.size(); ++r) {
    for (int c = 0; c < R; ++c) {
      if (is_piv[c] || rr[r][c] == 0) continue;
      col_expr[piv[r]][basis_pos[c]] = -rr[r][c];
    }
  }
  S.coord.assign(n, la::Vec(S.dim, Rat(0)));
  for (int32_t i = 0; i < n; ++i) {
    if (esign[i] == 0) continue;
    const la::Vec& ce = col_expr[rep_pos[erep[i]]];
    for (int b = 0; b < S.dim; ++b) S.coord[i][b] = Rat(esign[i]) * ce[b];
  }
  for (int c = 0; c < R; ++c)
    if (!is_piv[c]) S.free_gens.push_back(reps[c]);

  // boundary map: generator (c:d) lifted to [a b; c d'] bounds [a/c] - [b/d']
  std::vector<detail::Cusp> cusp_reps;
  auto cusp_id = [&](const detail::Cusp& c) -> int32_t {
    for (size_t k = 0; k < cusp_reps.size(); ++k)
      if (detail::cusps_equiv(c, cusp_reps[k], C)) return int32_t(k);
    cusp_reps.push_back(c);
    return int32_t(cusp_reps.size() - 1);
  };
  S.gen_cusps.resize(n);
  for (int32_t i = 0; i < n; ++i) {
    auto [c, d] = S.p1.elems[i];
    auto m = detail::lift_to_sl2(c, d, C);
    int32_t to = cusp_id(detail::make_cusp(Int(m[0]), Int(m[2])));
    int32_t from = cusp_id(detail::make_cusp(Int(m[1]), Int(m[3])));
    S.gen_cusps[i] = {to, from};
  }
  S.ncusps = int(cusp_reps.size());
  S.boundary_mat = la::zeros(S.ncusps, S.dim);
  for (int j = 0; j < S.dim; ++j) {
    auto [to, from] = S.gen_cusps[S.free_gens[j]];
    S.boundary_mat[to][j] += 1;
    S.boundary_mat[from][j] -= 1;
  }
  // boundary must be well defined on the quotient
  for (int32_t i = 0; i < n; ++i) {
    la::Vec d = la::mul(S.boundary_mat, S.coord[i]);
    la::Vec want(S.ncusps, Rat(0));
    auto [to, from] = S.gen_cusps[i];
    want[to] += 1;
    want[from] -= 1;
    if (esign[i] == 0) want = la::Vec(S.ncusps, Rat(0));
    if (d != want) throw Error("boundary map inconsistent with relations");
  }
  int64_t g = genus_x0(C);
  if (S.dim != 2 * g + S.ncusps - 1) throw Error("modular symbol dimension mismatch");
  S.genus = int(g);

  // star involution on the quotient
  S.star = la::zeros(S.dim, S.dim);
  for (int j = 0; j < S.dim; ++j) {
    const la::Vec& v = S.coord[S.star_index(S.free_gens[j])];
    for (int i = 0; i < S.dim; ++i) S.star[i][j] = v[i];
  }
  {
    la::Mat s2 = la::mul(S.star, S.star);
    if (s2 != la::identity(S.dim)) throw Error("star is not an involution");
  }

  // cuspidal subspace
  S.cuspidal = la::kernel(S.boundary_mat);
  if (int(S.cuspidal.size()) != 2 * g) throw Error("cuspidal rank mismatch");

  // integral structure: lattice generated by all generator classes
  la::Mat coord_rows(n, la::Vec(S.dim));
  for (int32_t i = 0; i < n; ++i) coord_rows[i] = S.coord[i];
  auto [ints, den] = la::clear_denominators(coord_rows);
  la::Cols gens_cols(n);
  for (int32_t i = 0; i < n; ++i) gens_cols[i] = ints[i];
  la::Cols lat = la::hnf_cols(gens_cols);
  if (int(lat.size()) != S.dim) throw Error("integral lattice rank mismatch");
  // H_Z = lattice \cap ker(boundary)
  la::Mat latmat = la::zeros(S.dim, lat.size());  // columns = lattice basis / den
  for (size_t c = 0; c < lat.size(); ++c)
    for (int i = 0; i < S.dim; ++i) latmat[i][c] = Rat(lat[c][i]) / Rat(den);
  {
    la::Mat bl = la::mul(S.boundary_mat, latmat);
    auto [bli, bld] = la::clear_denominators(bl);
    la::Cols ker = la::int_kernel(bli);
    for (const auto& comb : ker) {
      la::Vec v(S.dim, Rat(0));
      for (size_t c = 0; c < lat.size(); ++c)
        for (int i = 0; i < S.dim; ++i) v[i] += Rat(comb[c]) * latmat[i][c];
      S.hz.push_back(std::move(v));
    }
  }
  if (int(S.hz.size()) != 2 * g) throw Error("integral homology rank mismatch");
  auto star_sublattice = [&](int sign) {
    la::Mat m = la::zeros(S.dim, S.hz.size());
    for (size_t c = 0; c < S.hz.size(); ++c) {
      la::Vec sv = la::mul(S.star, S.hz[c]);
      for (int i = 0; i < S.dim; ++i) m[i][c] = sv[i] - Rat(sign) * S.hz[c][i];
    }
    auto [mi, md] = la::clear_denominators(m);
    la::Cols ker = la::int_kernel(mi);
    std::vector<la::Vec> out;
    for (const auto& comb : ker) {
      la::Vec v(S.dim, Rat(0));
      for (size_t c = 0; c < S.hz.size(); ++c)
        for (int i = 0; i < S.dim; ++i) v[i] += Rat(comb[c]) * S.hz[c][i];
      out.push_back(std::move(v));
    }
    return out;
  };
  S.hz_plus = star_sublattice(1);
  S.hz_minus = star_sublattice(-1);
  if (int(S.hz_plus.size()) != g || int(S.hz_minus.size()) != g)
    throw Error("star sublattice rank mismatch");
  return sp;
}

// ----- newform duals -----

struct EigenData {
  int64_t level = 0;
  std::string curve_key;
  int64_t pmax = 0;
  la::Vec dual_plus, dual_minus;          // functionals on Q^dim
  std::vector<Rat> val_plus, val_minus;   // per P1 index: dual(coord[i])
  std::map<int64_t, int64_t> eigenvalues; // verified a_p for good p <= pmax
};

namespace detail {

inline SymbolPair symbol_vals(const ModSymSpace& S, const std::vector<Rat>& vp,
                              const std::vector<Rat>& vm, Int k, Int m) {
  if (m <= 0) throw PreconditionError("symbol: m must be positive");
  if (igcd(m, Int(S.level)) != 1) throw PreconditionError("symbol: gcd(m, C) > 1");
  k %= m;
  if (k < 0) k += m;
  Int g = igcd(k, m);
  if (g > 1) {
    k /= g;
    m /= g;
  }
  SymbolPair out{Rat(0), Rat(0)};
  if (m == 1) return out;
  // continued-fraction chain 0 = p0/q0 -> p1/q1 -> ... -> k/m
  Int pm1 = 1, qm1 = 0;  // p_{-1}/q_{-1}
  Int p0 = 0, q0 = 1;    // p_0/q_0 (a_0 = 0 since 0 <= k < m)
  Int x = k, y = m;
  int j = 0;
  while (y != 0) {
    Int a = x / y;
    Int r = x % y;
    if (j > 0) {
      Int p1 = a * p0 + pm1, q1 = a * q0 + qm1;
      // det = p1 q0 - p0 q1 = (-1)^(j-1)
      Int det = (j % 2 == 1) ? 1 : -1;
      int32_t idx = S.p1.index(to_i64(q1 % S.level), to_i64((det * q0) % S.level));
      out.x_plus += vp[idx];
      out.x_minus += vm[idx];
      pm1 = p0;
      qm1 = q0;
      p0 = p1;
      q0 = q1;
    }
    x = y;
    y = r;
    ++j;
  }
  if (p0 != k || q0 != m) throw Error("continued fraction did not converge to k/m");
  return out;
}

}  // namespace detail

// Identify the rational newform of the curve among the duals and normalize.
inline EigenData hecke_eigen(const ModSymSpace& S, const curves::CurveModel& e, int64_t pmax) {
  if (!e.conductor) throw PreconditionError("hecke_eigen: conductor unknown");
  if (*e.conductor != S.level) throw PreconditionError("hecke_eigen: conductor != level");
  if (!e.optimal) throw PreconditionError("hecke_eigen: curve is not the optimal representative");
  std::vector<la::Vec> K;
  for (int i = 0; i < S.dim; ++i) {
    la::Vec v(S.dim, Rat(0));
    v[i] = 1;
    K.push_back(std::move(v));
  }
  std::map<int64_t, int64_t> evs;
  for (int64_t p : primes_upto(pmax)) {
    if (S.level % p == 0) continue;
    int64_t ap = curves::ap(e, p);
    evs[p] = ap;
    const la::Mat& T = S.hecke(p);
    la::Mat A = la::zeros(S.dim, K.size());
    for (size_t b = 0; b < K.size(); ++b)
      for (int r = 0; r < S.dim; ++r) {
        Rat s = -Rat(ap) * K[b][r];
        for (int i = 0; i < S.dim; ++i)
          if (T[i][r] != 0 && K[b][i] != 0) s += T[i][r] * K[b][i];
        A[r][b] = s;
      }
    auto ker = la::kernel(A);
    std::vector<la::Vec> K2;
    for (const auto& comb : ker) {
      la::Vec v(S.dim, Rat(0));
      for (size_t b = 0; b < K.size(); ++b)
        if (comb[b] != 0)
          for (int i = 0; i < S.dim; ++i) v[i] += comb[b] * K[b][i];
      K2.push_back(std::move(v));
    }
    K = std::move(K2);
    if (K.size() < 2)
      throw NotFoundError("curve not found at this level (eigen space collapsed)");
  }
  if (K.size() != 2)
    throw AmbiguityError("eigenspace not 1+1 dimensional at pmax; raise pmax");
  // split by the transpose of the star involution
  auto star_split = [&](int sign) -> la::Vec {
    la::Mat A = la::zeros(S.dim, K.size());
    for (size_t b = 0; b < K.size(); ++b)
      for (int r = 0; r < S.dim; ++r) {
        Rat s = -Rat(sign) * K[b][r];
        for (int i = 0; i < S.dim; ++i)
          if (S.star[i][r] != 0 && K[b][i] != 0) s += S.star[i][r] * K[b][i];
        A[r][b] = s;
      }
    auto ker = la::kernel(A);
    if (ker.size() != 1)
      throw AmbiguityError("star did not split the eigen pair; raise pmax");
    la::Vec v(S.dim, Rat(0));
    for (size_t b = 0; b < K.size(); ++b)
      if (ker[0][b] != 0)
        for (int i = 0; i < S.dim; ++i) v[i] += ker[0][b] * K[b][i];
    return v;
  };
  EigenData E;
  E.level = S.level;
  E.curve_key = e.key();
  E.pmax = pmax;
  E.eigenvalues = evs;
  E.dual_plus = star_split(1);
  E.dual_minus = star_split(-1);
  // Normalize so that (x_plus, x_minus) maps integral cuspidal homology
  // exactly onto the coordinate lattice of the Neron period lattice:
  //   disc > 0: Z^2            (basis [Omega+, i Omega-])
  //   disc < 0: Z(1,0) + Z(1/2,1/2)   (basis [Omega+, (Omega+ + i Omega-)/2])
  // This is the Manin-constant-1 statement; failure is a hard error.
  {
    for (const auto& w : S.hz_minus)
      if (la::dot(E.dual_plus, w) != 0)
        throw NormalizationError("plus dual does not vanish on the minus lattice");
    for (const auto& w : S.hz_plus)
      if (la::dot(E.dual_minus, w) != 0)
        throw NormalizationError("minus dual does not vanish on the plus lattice");
    auto content = [](const std::vector<Rat>& vals) {
      Int den = 1, num = 0;
      for (const auto& v : vals) den = ilcm(den, v.get_den());
      for (const auto& v : vals) num = igcd(num, Rat(v * den).get_num());
      if (num == 0) throw NormalizationError("dual vanishes on integral homology");
      return Rat(num, den);
    };
    std::vector<Rat> xs, ys;
    for (const auto& w : S.hz) {
      xs.push_back(la::dot(E.dual_plus, w));
      ys.push_back(la::dot(E.dual_minus, w));
    }
    bool type2 = e.disc < 0;
    Rat target = type2 ? Rat(1, 2) : Rat(1);
    Rat ux = target / content(xs), uy = target / content(ys);
    for (auto& v : E.dual_plus) v *= ux;
    for (auto& v : E.dual_minus) v *= uy;
    for (auto& v : xs) v *= ux;
    for (auto& v : ys) v *= uy;
    // exact lattice equality check
    Int den = 1;
    for (size_t i = 0; i < xs.size(); ++i) {
      den = ilcm(den, xs[i].get_den());
      den = ilcm(den, ys[i].get_den());
    }
    la::Cols gens;
    for (size_t i = 0; i < xs.size(); ++i)
      gens.push_back({Rat(xs[i] * den).get_num(), Rat(ys[i] * den).get_num()});
    la::Cols got = la::hnf_cols(gens);
    la::Cols want;
    if (type2) {
      if (den % 2 != 0) throw NormalizationError("period lattice denominator anomaly");
      want = la::hnf_cols({{den, 0}, {den / 2, den / 2}});
    } else {
      want = la::hnf_cols({{den, 0}, {0, den}});
    }
    if (got != want)
      throw NormalizationError("integral homology does not map onto the period lattice");
  }
  auto fill_vals = [&](const la::Vec& ell) {
    std::vector<Rat> vals(S.p1.size());
    for (size_t i = 0; i < S.p1.size(); ++i) vals[i] = la::dot(ell, S.coord[i]);
    return vals;
  };
  E.val_plus = fill_vals(E.dual_plus);
  E.val_minus = fill_vals(E.dual_minus);
  // plus sign convention: L(E,1)/Omega+ > 0 (all supported curves have w = +1)
  {
    int64_t l = 3;
    while (!is_prime(l) || S.level % l == 0) l += 2;  // smallest odd good prime
    Rat sum = 0;
    for (int64_t k = 0; k < l; ++k)
      sum += detail::symbol_vals(S, E.val_plus, E.val_minus, Int(k), Int(l)).x_plus;
    Int nl = Int(l) + 1 - curves::ap(e, l);
    Rat lalg = -sum / Rat(nl);
    if (lalg == 0)
      throw NormalizationError("L(E,1) = 0: sign convention unavailable for this curve");
    if (lalg < 0) {
      for (auto& x : E.dual_plus) x = -x;
      for (auto& x : E.val_plus) x = -x;
    }
  }
  // minus sign convention: first nonzero pairing with hz_minus is positive
  {
    Rat first = 0;
    for (const auto& w : S.hz_minus) {
      first = la::dot(E.dual_minus, w);
      if (first != 0) break;
    }
    if (first < 0) {
      for (auto& x : E.dual_minus) x = -x;
      for (auto& x : E.val_minus) x = -x;
    }
  }
  return E;
}

// Exact <{0, k/m}, f> in the (Omega+, i Omega-) coordinates.
inline SymbolPair symbol(const ModSymSpace& S, const EigenData& eig, const Int& k, const Int& m) {
  return detail::symbol_vals(S, eig.val_plus, eig.val_minus, k, m);
}

// The paper's integer pair (s_k, t_k).
inline PeriodPair period_pair(const curves::CurveModel& e, const ModSymSpace& S,
                              const EigenData& eig, const Int& k, const Int& m) {
  SymbolPair sp = symbol(S, eig, k, m);
  int type = e.disc < 0 ? 2 : 1;
  Rat rs = type == 2 ? 2 * sp.x_plus : sp.x_plus;
  Rat rt = type == 2 ? 2 * sp.x_minus : sp.x_minus;
  if (rs.get_den() != 1 || rt.get_den() != 1)
    throw NormalizationError("period pair is not integral");
  PeriodPair pp{rs.get_num(), rt.get_num(), type};
  if (type == 2 && (pp.s - pp.t) % 2 != 0)
    throw NormalizationError("period pair parity violation");
  return pp;
}

}  // namespace qtwist::modsym
