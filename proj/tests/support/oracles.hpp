#pragma once

// Independent oracles used by the test suite.  These deliberately avoid the
// production code paths they are checking: naive double-loop point counts,
// Euler-criterion Jacobi symbols, exhaustive factorization mod q, and the
// classical genus/cusp formulas for X_0(N).

#include <cstdint>
#include <vector>

#include "qtwist/arith.hpp"
#include "qtwist/curve.hpp"

namespace oracles {

using qtwist::Int;

// #E(F_q) by scanning all (x, y), using the raw Weierstrass equation.
inline int64_t brute_count_points(const qtwist::curves::CurveModel& e, int64_t q) {
  auto r = [&](const Int& z) {
    int64_t v = qtwist::to_i64(z % q);
    return v < 0 ? v + q : v;
  };
  int64_t a1 = r(e.a1()), a2 = r(e.a2()), a3 = r(e.a3()), a4 = r(e.a4()), a6 = r(e.a6());
  int64_t n = 1;
  for (int64_t x = 0; x < q; ++x)
    for (int64_t y = 0; y < q; ++y) {
      int64_t lhs = (y * y + a1 * x * y + a3 * y) % q;
      int64_t rhs = (((x + a2) * x + a4) * x + a6) % q;
      if ((lhs - rhs) % q == 0) ++n;
    }
  return n;
}

inline int64_t brute_ap(const qtwist::curves::CurveModel& e, int64_t q) {
  return q + 1 - brute_count_points(e, q);
}

// Legendre symbol by Euler's criterion.
inline int euler_legendre(int64_t a, int64_t p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  return qtwist::powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// Factorization shape of a monic cubic mod q by exhaustive root search:
// returns the number of linear factors counted with multiplicity (0, 1 or 3
// for squarefree cubics).
inline int cubic_linear_factors_mod_q(const qtwist::poly::IPoly& f, int64_t q) {
  int cnt = 0;
  for (int64_t x = 0; x < q; ++x) {
    Int v = qtwist::poly::eval(f, x) % q;
    if (v == 0) ++cnt;
  }
  return cnt;
}

// Classical index / cusp / genus formulas for X_0(N).
inline int64_t p1_size_formula(int64_t N) {
  Int mu = N;
  for (const auto& pp : qtwist::factor(Int(N)))
    mu = mu / pp.p * (pp.p + 1);
  return qtwist::to_i64(mu);
}

inline int64_t euler_phi(int64_t n) {
  Int r = n;
  for (const auto& pp : qtwist::factor(Int(n)))
    r = r / pp.p * (pp.p - 1);
  return qtwist::to_i64(r);
}

inline int64_t cusp_count_formula(int64_t N) {
  int64_t c = 0;
  for (const auto& d : qtwist::divisors(Int(N))) {
    int64_t dd = qtwist::to_i64(d);
    c += euler_phi(qtwist::to_i64(qtwist::igcd(d, Int(N) / d)));
  }
  return c;
}

inline int64_t genus_formula(int64_t N) {
  int64_t mu = p1_size_formula(N);
  int64_t nu2 = 0, nu3 = 0;
  if (N % 4 != 0) {
    nu2 = 1;
    for (const auto& pp : qtwist::factor(Int(N))) {
      if (pp.p == 2) continue;
      nu2 *= 1 + qtwist::kronecker(Int(-1), pp.p);
    }
  }
  if (N % 9 != 0) {
    nu3 = 1;
    for (const auto& pp : qtwist::factor(Int(N)))
      nu3 *= 1 + qtwist::kronecker(Int(-3), pp.p);
  }
  int64_t nuinf = cusp_count_formula(N);
  // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 nuinf
  int64_t num = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nuinf;
  if (num % 12 != 0) throw qtwist::Error("genus formula: not an integer");
  return num / 12;
}

}  // namespace oracles
