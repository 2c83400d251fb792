#pragma once

// Tiny rational-function arithmetic over Q, used to verify isogeny
// composition identities symbolically.

#include <vector>

#include "qtwist/arith.hpp"

namespace ratfunc {

using qtwist::Rat;
using PolyQ = std::vector<Rat>;  // coeff[i] * x^i

inline PolyQ trim(PolyQ p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline PolyQ add(const PolyQ& a, const PolyQ& b) {
  PolyQ c(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return trim(c);
}

inline PolyQ neg(PolyQ a) {
  for (auto& x : a) x = -x;
  return a;
}

inline PolyQ mul(const PolyQ& a, const PolyQ& b) {
  if (a.empty() || b.empty()) return {};
  PolyQ c(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return trim(c);
}

struct RF {
  PolyQ num, den;  // den != 0
};

inline RF rf(PolyQ n, PolyQ d = {Rat(1)}) { return {trim(std::move(n)), trim(std::move(d))}; }

inline RF add(const RF& a, const RF& b) {
  return {add(mul(a.num, b.den), mul(b.num, a.den)), mul(a.den, b.den)};
}
inline RF sub(const RF& a, const RF& b) {
  return {add(mul(a.num, b.den), neg(mul(b.num, a.den))), mul(a.den, b.den)};
}
inline RF mul(const RF& a, const RF& b) { return {mul(a.num, b.num), mul(a.den, b.den)}; }

inline bool eq(const RF& a, const RF& b) { return mul(a.num, b.den) == mul(b.num, a.den); }

// evaluate a polynomial at a rational function
inline RF eval_poly(const PolyQ& p, const RF& x) {
  RF acc = rf({});
  for (size_t i = p.size(); i-- > 0;) {
    acc = mul(acc, x);
    acc = add(acc, rf({p[i]}));
  }
  return acc;
}

// substitute x -> inner into outer = num/den
inline RF compose(const RF& outer, const RF& inner) {
  RF n = eval_poly(outer.num, inner);
  RF d = eval_poly(outer.den, inner);
  return {mul(n.num, d.den), mul(n.den, d.num)};
}

}  // namespace ratfunc
