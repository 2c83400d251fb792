#pragma once

// Reduction of an integral monic cubic to a small defining polynomial of the
// same field: compute the maximal order (Pohst-Zassenhaus at each prime whose
// square divides the discriminant), lattice-reduce it under the T2 form, and
// take the minimal-T2 generator.  The orientation between P(x) and -P(-x) is
// fixed by the sign conventions of reduced binary cubic forms.

#include <array>
#include <cmath>
#include <complex>

#include "qtwist/arith.hpp"
#include "qtwist/la.hpp"
#include "qtwist/poly.hpp"

namespace qtwist::fields {

struct ReducedCubic {
  Int a, b, c;  // x^3 + a x^2 + b x + c
  Int disc;
};

namespace detail {

using la::Mat;
using la::Vec;

constexpr long double kPi = 3.14159265358979323846264338327950288L;

// product of two elements of Q[x]/(x^3 + A x^2 + B x + C), power basis coords
inline Vec mul_mod_cubic(const Vec& u, const Vec& v, const Rat& A, const Rat& B, const Rat& C) {
  std::array<Rat, 5> w{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) w[i + j] += u[i] * v[j];
  for (int d = 4; d >= 3; --d) {
    Rat t = w[d];
    if (t == 0) continue;
    w[d] = 0;
    w[d - 1] -= A * t;
    w[d - 2] -= B * t;
    w[d - 3] -= C * t;
  }
  return {w[0], w[1], w[2]};
}

inline Int det3(const la::IMat& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline la::IMat adj3(const la::IMat& m) {
  la::IMat a(3, la::IVec(3));
  a[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  a[0][1] = -(m[0][1] * m[2][2] - m[0][2] * m[2][1]);
  a[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  a[1][0] = -(m[1][0] * m[2][2] - m[1][2] * m[2][0]);
  a[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  a[1][2] = -(m[0][0] * m[1][2] - m[0][2] * m[1][0]);
  a[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  a[2][1] = -(m[0][0] * m[2][1] - m[0][1] * m[2][0]);
  a[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return a;
}

// Solution lattice of A z = 0 mod m (A is rows x 3), as basis columns:
// z-projections of the integer kernel of [A | m I].
inline la::Cols kernel_mod(const la::IMat& A, const Int& m) {
  size_t rows = A.size();
  la::IMat aug(rows, la::IVec(3 + rows, Int(0)));
  for (size_t i = 0; i < rows; ++i) {
    for (int j = 0; j < 3; ++j) aug[i][j] = A[i][j];
    aug[i][3 + i] = m;
  }
  la::Cols ker = la::int_kernel(aug);
  la::Cols zs;
  for (auto& col : ker) zs.push_back(la::IVec(col.begin(), col.begin() + 3));
  la::Cols H = la::hnf_cols(zs);
  if (H.size() != 3) throw Error("kernel_mod: rank defect");
  return H;
}

// nearest integer to t/3
inline Int nearest_third(const Int& t) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), Int(3).get_mpz_t());
  return r == 2 ? q + 1 : q;  // r in {0,1,2}; 2/3 rounds up
}

struct OrderCtx {
  Rat A, B, C;  // the defining cubic
  Mat W;        // basis columns of the current order, power basis coords
  Int disc;     // disc of the current order
};

// multiplication matrices of the basis elements, in basis coordinates
inline std::array<la::IMat, 3> mult_tables(const OrderCtx& o) {
  Mat winv = la::inverse(o.W);
  std::array<la::IMat, 3> ms;
  for (int k = 0; k < 3; ++k) {
    ms[k] = la::IMat(3, la::IVec(3));
    Vec wk = {o.W[0][k], o.W[1][k], o.W[2][k]};
    for (int j = 0; j < 3; ++j) {
      Vec wj = {o.W[0][j], o.W[1][j], o.W[2][j]};
      Vec coords = la::mul(winv, mul_mod_cubic(wk, wj, o.A, o.B, o.C));
      for (int i = 0; i < 3; ++i) {
        if (coords[i].get_den() != 1) throw Error("order basis not multiplicatively closed");
        ms[k][i][j] = coords[i].get_num();
      }
    }
  }
  return ms;
}

// one Pohst-Zassenhaus enlargement step at p; true if the order grew
inline bool enlarge_at(OrderCtx& o, const Int& p) {
  auto ms = mult_tables(o);
  int64_t pl = to_i64(p);
  auto red = [&](const Int& x) {
    Int r = x % pl;
    if (r < 0) r += pl;
    return to_i64(r);
  };
  std::array<std::array<std::array<int64_t, 3>, 3>, 3> sc{};  // structure constants mod p
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) sc[k][i][j] = red(ms[k][i][j]);
  auto mulp = [&](const std::array<int64_t, 3>& x, const std::array<int64_t, 3>& y) {
    std::array<int64_t, 3> z{};
    for (int k = 0; k < 3; ++k) {
      if (x[k] == 0) continue;
      for (int i = 0; i < 3; ++i) {
        int64_t acc = 0;
        for (int j = 0; j < 3; ++j) acc = (acc + sc[k][i][j] * y[j]) % pl;
        z[i] = (z[i] + x[k] * acc) % pl;
      }
    }
    return z;
  };
  int e = (p == 2) ? 2 : 1;  // smallest e with p^e >= 3
  auto pw = [&](std::array<int64_t, 3> x) {
    for (int it = 0; it < e; ++it) {
      std::array<int64_t, 3> acc{};
      bool first = true;
      std::array<int64_t, 3> base = x;
      int64_t n = pl;
      while (n > 0) {
        if (n & 1) {
          acc = first ? base : mulp(acc, base);
          first = false;
        }
        base = mulp(base, base);
        n >>= 1;
      }
      x = acc;
    }
    return x;
  };
  // radical of O/pO = kernel of the iterated Frobenius (F_p-linear)
  std::array<std::array<int64_t, 3>, 3> m{};
  for (int k = 0; k < 3; ++k) {
    std::array<int64_t, 3> ek{};
    ek[k] = 1;
    auto fk = pw(ek);
    for (int i = 0; i < 3; ++i) m[i][k] = fk[i];
  }
  std::vector<la::IVec> rad;
  {
    int rank = 0;
    std::array<int, 3> pivcol{-1, -1, -1};
    for (int c = 0; c < 3 && rank < 3; ++c) {
      int pr = -1;
      for (int r = rank; r < 3; ++r)
        if (m[r][c] % pl != 0) {
          pr = r;
          break;
        }
      if (pr < 0) continue;
      std::swap(m[rank], m[pr]);
      int64_t inv = powmod(m[rank][c], pl - 2, pl);
      for (int j = 0; j < 3; ++j) m[rank][j] = (__int128(m[rank][j]) * inv) % pl;
      for (int r = 0; r < 3; ++r) {
        if (r == rank) continue;
        int64_t f = m[r][c];
        if (f == 0) continue;
        for (int j = 0; j < 3; ++j) {
          m[r][j] = (m[r][j] - __int128(f) * m[rank][j]) % pl;
          if (m[r][j] < 0) m[r][j] += pl;
        }
      }
      pivcol[rank] = c;
      ++rank;
    }
    std::array<bool, 3> ispiv{false, false, false};
    for (int r = 0; r < rank; ++r) ispiv[pivcol[r]] = true;
    for (int c = 0; c < 3; ++c) {
      if (ispiv[c]) continue;
      la::IVec v(3, Int(0));
      v[c] = 1;
      for (int r = 0; r < rank; ++r)
        if (!ispiv[c]) v[pivcol[r]] = Int((pl - m[r][c]) % pl);
      rad.push_back(v);
    }
  }
  if (rad.empty()) return false;  // semisimple: p-maximal
  // I = pO + radical lift, as columns in O-coordinates
  la::Cols gens = {{p, 0, 0}, {0, p, 0}, {0, 0, p}};
  for (auto& v : rad) gens.push_back(v);
  la::Cols U = la::hnf_cols(gens);
  if (U.size() != 3) throw Error("enlarge_at: ideal rank defect");
  la::IMat Um(3, la::IVec(3));
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) Um[i][j] = U[j][i];
  Int D = det3(Um);
  la::IMat adjU = adj3(Um);
  // x = (sum z_k w_k)/p lies in the idealizer of I iff
  //   adj(U) (sum z_k M_k) U = 0 mod p*|D|
  Int mod = p * abs(D);
  la::IMat cond(9, la::IVec(3));
  for (int k = 0; k < 3; ++k) {
    la::IMat t(3, la::IVec(3, Int(0)));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) t[i][j] += adjU[i][l] * ms[k][l][j];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Int v = 0;
        for (int l = 0; l < 3; ++l) v += t[i][l] * Um[l][j];
        cond[3 * i + j][k] = v;
      }
  }
  la::Cols L = kernel_mod(cond, mod);
  la::Cols newgens = {{p, 0, 0}, {0, p, 0}, {0, 0, p}};
  for (auto& c : L) newgens.push_back(c);
  la::Cols H = la::hnf_cols(newgens);
  la::IMat Hm(3, la::IVec(3));
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) Hm[i][j] = H[j][i];
  Int dH = abs(det3(Hm));
  Int p3 = p * p * p;
  if (dH == p3) return false;  // no growth
  if (dH == 0 || p3 % dH != 0) throw Error("enlarge_at: bad index");
  Mat Hq = la::zeros(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Hq[i][j] = Rat(Hm[i][j]) / Rat(p);
  o.W = la::mul(o.W, Hq);
  Int idx = p3 / dH;
  if (o.disc % (idx * idx) != 0) throw Error("enlarge_at: disc bookkeeping");
  o.disc /= idx * idx;
  return true;
}

inline std::array<std::complex<long double>, 3> cubic_roots(long double A, long double B,
                                                            long double C) {
  using cplx = std::complex<long double>;
  long double p = B - A * A / 3.0L;
  long double q = 2.0L * A * A * A / 27.0L - A * B / 3.0L + C;
  std::array<cplx, 3> rs;
  long double delta = q * q / 4.0L + p * p * p / 27.0L;
  if (delta >= 0) {
    long double sd = sqrtl(delta);
    long double u = cbrtl(-q / 2.0L + sd), v = cbrtl(-q / 2.0L - sd);
    rs[0] = cplx(u + v, 0);
    rs[1] = cplx(-(u + v) / 2.0L, (u - v) * sqrtl(3.0L) / 2.0L);
    rs[2] = std::conj(rs[1]);
  } else {
    long double r = sqrtl(-p * p * p / 27.0L);
    long double phi = acosl(std::clamp(-q / (2.0L * r), -1.0L, 1.0L));
    long double mag = 2.0L * sqrtl(-p / 3.0L);
    for (int k = 0; k < 3; ++k) rs[k] = cplx(mag * cosl((phi + 2.0L * kPi * k) / 3.0L), 0);
  }
  for (auto& z : rs) {
    z -= A / 3.0L;
    for (int it = 0; it < 4; ++it) {
      cplx f = ((z + A) * z + B) * z + C;
      cplx fp = (3.0L * z + 2.0L * A) * z + B;
      if (std::abs(fp) == 0) break;
      z -= f / fp;
    }
  }
  return rs;
}

}  // namespace detail

// Reduce x^3 + A x^2 + B x + C (monic, integral, irreducible over Q).
inline ReducedCubic reduce_cubic(const Int& A, const Int& B, const Int& C) {
  using namespace detail;
  Int disc_f = poly::cubic_disc(1, A, B, C);
  if (disc_f == 0) throw PreconditionError("reduce_cubic: not squarefree");
  OrderCtx o{Rat(A), Rat(B), Rat(C), la::identity(3), disc_f};
  for (const auto& pp : factor(disc_f)) {
    if (pp.e < 2) continue;
    while (valuation(o.disc, pp.p) >= 2 && enlarge_at(o, pp.p)) {
    }
  }
  auto roots = cubic_roots((long double)A.get_d(), (long double)B.get_d(), (long double)C.get_d());
  auto embed = [&](const la::Vec& v, int i) {
    std::complex<long double> th = roots[i];
    return (long double)v[0].get_d() + (long double)v[1].get_d() * th +
           (long double)v[2].get_d() * th * th;
  };
  std::array<std::array<Int, 3>, 3> bas = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  auto col = [&](const std::array<Int, 3>& c) {
    la::Vec v(3, Rat(0));
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) v[i] += Rat(c[j]) * o.W[i][j];
    return v;
  };
  auto inner = [&](const std::array<Int, 3>& x, const std::array<Int, 3>& y) {
    la::Vec vx = col(x), vy = col(y);
    long double s = 0;
    for (int i = 0; i < 3; ++i) s += (embed(vx, i) * std::conj(embed(vy, i))).real();
    return s;
  };
  // greedy pairwise reduction, adequate in rank 3
  for (int pass = 0; pass < 16; ++pass) {
    bool changed = false;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        long double nj = inner(bas[j], bas[j]);
        if (nj <= 0) continue;
        long k = (long)llroundl(inner(bas[i], bas[j]) / nj);
        if (k == 0) continue;
        for (int t = 0; t < 3; ++t) bas[i][t] -= Int(k) * bas[j][t];
        changed = true;
      }
    if (!changed) break;
  }
  // enumerate small elements; keep the minimal-T2 generators
  struct Cand {
    Int a, b, c;
    long double t2;
  };
  std::vector<std::pair<long double, std::array<Int, 3>>> cands;
  for (int e0 = -5; e0 <= 5; ++e0)
    for (int e1 = -5; e1 <= 5; ++e1)
      for (int e2 = -5; e2 <= 5; ++e2) {
        if (e0 == 0 && e1 == 0 && e2 == 0) continue;
        std::array<Int, 3> c{};
        for (int t = 0; t < 3; ++t)
          c[t] = Int(e0) * bas[0][t] + Int(e1) * bas[1][t] + Int(e2) * bas[2][t];
        la::Vec v = col(c);
        if (v[1] == 0 && v[2] == 0) continue;  // rational element
        long double mean = 0;
        for (int i = 0; i < 3; ++i) mean += embed(v, i).real();
        mean /= 3.0L;
        long double s = 0;
        for (int i = 0; i < 3; ++i) s += std::norm(embed(v, i) - mean);
        cands.push_back({s, c});  // lower bound for the trace-shifted T2
      }
  std::sort(cands.begin(), cands.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Cand> best;
  long double best_t2 = 1e300L;
  for (auto& [lower, cvec] : cands) {
    if (lower > best_t2 + 1e-6L) break;
    la::Vec v = col(cvec);
    // exact characteristic polynomial of multiplication by v
    Mat mm = la::zeros(3, 3);
    la::Vec pw = {Rat(1), Rat(0), Rat(0)};
    for (int j = 0; j < 3; ++j) {
      la::Vec prod = mul_mod_cubic(v, pw, o.A, o.B, o.C);
      for (int i = 0; i < 3; ++i) mm[i][j] = prod[i];
      pw = mul_mod_cubic(pw, {Rat(0), Rat(1), Rat(0)}, o.A, o.B, o.C);
    }
    Rat tr = mm[0][0] + mm[1][1] + mm[2][2];
    Rat s2 = mm[0][0] * mm[1][1] - mm[0][1] * mm[1][0] + mm[0][0] * mm[2][2] -
             mm[0][2] * mm[2][0] + mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1];
    Rat det = mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1]) -
              mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0]) +
              mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0]);
    if (tr.get_den() != 1 || s2.get_den() != 1 || det.get_den() != 1)
      throw Error("reduce_cubic: non-integral element in maximal order");
    Int t = tr.get_num(), s = s2.get_num(), n = det.get_num();
    Int k = nearest_third(t);
    Int a = 3 * k - t;
    Int b = 3 * k * k - 2 * t * k + s;
    Int cc = k * k * k - t * k * k + s * k - n;
    if (cc == 0) continue;  // x | charpoly: reducible
    bool reducible = false;
    for (const auto& d : divisors(cc)) {
      if (d * d * d + a * d * d + b * d + cc == 0 || -d * d * d + a * d * d - b * d + cc == 0) {
        reducible = true;
        break;
      }
    }
    if (reducible) continue;
    long double kk = (long double)k.get_d();
    long double T2 = 0;
    for (int i = 0; i < 3; ++i) T2 += std::norm(embed(v, i) - kk);
    if (T2 < best_t2 - 1e-6L) best.clear();
    if (best.empty() || T2 <= best_t2 + 1e-6L) {
      best.push_back({a, b, cc, T2});
      best_t2 = std::min(best_t2, T2);
    }
  }
  if (best.empty()) throw Error("reduce_cubic: no generator found");
  // orientation between P(x) and -P(-x), then lexicographic tie-break
  auto oriented = [&](const Cand& cd) {
    if (disc_f > 0) {
      Int qh = cd.a * cd.b - 9 * cd.c;
      if (qh != 0) return qh > 0;
    } else {
      Int l = (cd.c * cd.c - 1) - (cd.a - cd.b * cd.c);
      if (l != 0) return l > 0;
    }
    return cd.c < 0;
  };
  const Cand* pick = nullptr;
  for (const auto& cd : best) {
    if (!pick) {
      pick = &cd;
      continue;
    }
    bool co = oriented(cd), po = oriented(*pick);
    if (co != po) {
      if (co) pick = &cd;
      continue;
    }
    if (std::array<Int, 3>{cd.a, cd.b, cd.c} < std::array<Int, 3>{pick->a, pick->b, pick->c})
      pick = &cd;
  }
  return {pick->a, pick->b, pick->c, poly::cubic_disc(1, pick->a, pick->b, pick->c)};
}

}  // namespace qtwist::fields
