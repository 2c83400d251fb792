#pragma once

// Small integer-polynomial utilities: evaluation, discriminants of cubics,
// root counting mod q and over Z_q.

#include <vector>

#include "qtwist/arith.hpp"

namespace qtwist::poly {

using IPoly = std::vector<Int>;  // coeff[i] multiplies x^i

inline Int eval(const IPoly& f, const Int& x) {
  Int v = 0;
  for (size_t i = f.size(); i-- > 0;) v = v * x + f[i];
  return v;
}

inline IPoly derivative(const IPoly& f) {
  IPoly d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(Int(long(i)) * f[i]);
  return d;
}

// Discriminant of a cubic c3 x^3 + c2 x^2 + c1 x + c0.
inline Int cubic_disc(const Int& c3, const Int& c2, const Int& c1, const Int& c0) {
  return Int(18) * c3 * c2 * c1 * c0 - 4 * c2 * c2 * c2 * c0 + c2 * c2 * c1 * c1 -
         4 * c3 * c1 * c1 * c1 - 27 * c3 * c3 * c0 * c0;
}

// Coefficients of f(r + y) in y.
inline IPoly taylor_shift(IPoly f, const Int& r) {
  IPoly out;
  while (!f.empty()) {
    size_t n = f.size() - 1;
    IPoly q(n);
    Int b = f[n];
    for (size_t i = n; i-- > 0;) {
      q[i] = b;
      b = f[i] + r * b;
    }
    out.push_back(b);
    f = std::move(q);
  }
  return out;
}

// Distinct roots of f modulo q (q prime), by scanning residues.
inline std::vector<int64_t> roots_mod_q(const IPoly& f, int64_t q) {
  std::vector<int64_t> rs;
  std::vector<int64_t> c(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    Int r = f[i] % q;
    if (r < 0) r += q;
    c[i] = to_i64(r);
  }
  for (int64_t x = 0; x < q; ++x) {
    int64_t v = 0;
    for (size_t i = c.size(); i-- > 0;) v = (__int128(v) * x + c[i]) % q;
    if (v == 0) rs.push_back(x);
  }
  return rs;
}

// A cubic with unit leading coefficient mod q is irreducible mod q iff it
// has no root mod q.
inline bool cubic_irreducible_mod_q(const IPoly& f, int64_t q) {
  return roots_mod_q(f, q).empty();
}

// Number of distinct roots of a squarefree polynomial f in Z_q.  Simple
// roots mod q lift uniquely (Hensel); classes where f' also vanishes are
// refined by substituting x = r + q t, up to `depth` levels.  Termination
// for a squarefree f is bounded by the q-valuation of disc(f).
inline int count_padic_roots(const IPoly& f, int64_t q, int depth = 20) {
  IPoly fp = derivative(f);
  int count = 0;
  for (int64_t r : roots_mod_q(f, q)) {
    if (eval(fp, r) % q != 0) {
      ++count;
      continue;
    }
    if (depth == 0) throw CapacityError("p-adic root lifting: depth exhausted");
    IPoly g = taylor_shift(f, Int(r));  // g(t) = f(r + q t) after scaling below
    Int qe = 1;
    for (auto& cf : g) {
      cf *= qe;
      qe *= q;
    }
    Int content = 0;
    for (const auto& cf : g) content = igcd(content, cf);
    int v = valuation(content, Int(q));
    if (v > 0) {
      Int qv = ipow(Int(q), (unsigned long)v);
      for (auto& cf : g) cf /= qv;
    }
    count += count_padic_roots(g, q, depth - 1);
  }
  return count;
}

}  // namespace qtwist::poly
