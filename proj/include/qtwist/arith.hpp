#pragma once

// Exact integer and rational arithmetic helpers on top of GMP.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtwist {

using Int = mpz_class;
using Rat = mpq_class;

// ----- error taxonomy -----

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A stated precondition of an operation is violated.
struct PreconditionError : Error {
  using Error::Error;
};
// Input is valid but beyond the documented capacity of the implementation.
struct CapacityError : Error {
  using Error::Error;
};
// An exact-arithmetic normalization invariant failed (Manin-constant anomaly,
// parity/integrality failure of period pairs, ...).
struct NormalizationError : Error {
  using Error::Error;
};
// The numeric period bridge did not land on a signed power of two.
struct BridgeError : Error {
  using Error::Error;
};
// A verified-theorem conclusion failed on concrete data.  Distinct from a
// crash: this is the "mathematically alarming" condition.
struct MathAlarm : Error {
  using Error::Error;
};
// Unreadable cache / data file (callers rebuild rather than partially read).
struct DataError : Error {
  using Error::Error;
};

// ----- basic integer helpers -----

inline int64_t to_i64(const Int& z) {
  if (!z.fits_slong_p()) throw CapacityError("integer exceeds 64-bit range: " + z.get_str());
  return mpz_get_si(z.get_mpz_t());
}

inline Int igcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int ilcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// Kronecker symbol (a|n), defined for all integers.
inline int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}
inline int kronecker(int64_t a, int64_t n) { return kronecker(Int(a), Int(n)); }

inline bool is_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0; }
inline bool is_prime(int64_t n) { return is_prime(Int(n)); }

inline Int ipow(Int b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// Primes below one million, shared table.
inline const std::vector<int32_t>& small_primes() {
  static const std::vector<int32_t> table = [] {
    const int32_t B = 1'000'000;
    std::vector<bool> comp(B, false);
    std::vector<int32_t> ps;
    for (int32_t i = 2; i < B; ++i) {
      if (comp[i]) continue;
      ps.push_back(i);
      for (int64_t j = int64_t(i) * i; j < B; j += i) comp[j] = true;
    }
    return ps;
  }();
  return table;
}

inline std::vector<int64_t> primes_upto(int64_t bound) {
  if (bound >= 1'000'000) throw CapacityError("prime enumeration capped at 10^6");
  std::vector<int64_t> out;
  for (int32_t p : small_primes()) {
    if (p > bound) break;
    out.push_back(p);
  }
  return out;
}

struct PrimePower {
  Int p;
  int e;
};

// Factor |n| by trial division over the shared prime table; the leftover
// cofactor must be prime (or 1).  Throws CapacityError otherwise.
inline std::vector<PrimePower> factor(Int n) {
  if (n == 0) throw PreconditionError("factor(0)");
  if (n < 0) n = -n;
  std::vector<PrimePower> out;
  for (int32_t p : small_primes()) {
    if (n == 1) break;
    if (Int(p) * p > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      int e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      out.push_back({Int(p), e});
    }
  }
  if (n > 1) {
    if (!is_prime(n)) throw CapacityError("composite cofactor beyond trial-division capacity: " + n.get_str());
    out.push_back({n, 1});
  }
  return out;
}

inline int valuation(Int n, const Int& p) {
  if (n == 0) throw PreconditionError("valuation of 0");
  int v = 0;
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

// 2-adic valuation of a nonzero rational, normalised by ord2(2) = 1.
inline int64_t ord2(const Rat& x) {
  if (x == 0) throw PreconditionError("ord2 of 0");
  return int64_t(mpz_scan1(x.get_num().get_mpz_t(), 0)) - int64_t(mpz_scan1(x.get_den().get_mpz_t(), 0));
}

inline bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  for (const auto& pp : factor(n))
    if (pp.e > 1) return false;
  return true;
}

// Sign-preserving squarefree part: n / (largest square dividing n).
inline Int squarefree_part(const Int& n) {
  Int r = n < 0 ? Int(-1) : Int(1);
  for (const auto& pp : factor(n))
    if (pp.e % 2) r *= pp.p;
  return r;
}

// All positive divisors, ascending.
inline std::vector<Int> divisors(const Int& n) {
  std::vector<Int> ds = {1};
  for (const auto& pp : factor(n)) {
    size_t sz = ds.size();
    Int q = 1;
    for (int e = 1; e <= pp.e; ++e) {
      q *= pp.p;
      for (size_t i = 0; i < sz; ++i) ds.push_back(ds[i] * q);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

inline int64_t powmod(int64_t b, int64_t e, int64_t m) {
  Int r;
  mpz_powm_ui(r.get_mpz_t(), Int(b).get_mpz_t(), (unsigned long)e, Int(m).get_mpz_t());
  return to_i64(r);
}

// Tonelli-Shanks square root mod an odd prime; nullopt if a is a non-residue.
inline std::optional<int64_t> sqrt_mod(int64_t a, int64_t p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  // write p-1 = q*2^s
  int64_t q = p - 1, s = 0;
  while (q % 2 == 0) q /= 2, ++s;
  int64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  int64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    int64_t i = 0, tt = t;
    while (tt != 1) {
      tt = (__int128(tt) * tt) % p;
      ++i;
    }
    int64_t b = c;
    for (int64_t j = 0; j < m - i - 1; ++j) b = (__int128(b) * b) % p;
    m = i;
    c = (__int128(b) * b) % p;
    t = (__int128(t) * c) % p;
    r = (__int128(r) * b) % p;
  }
  return r;
}

inline std::string rat_str(const Rat& x) { return x.get_str(); }

inline Rat rat_parse(const std::string& s) {
  Rat x;
  if (x.set_str(s, 10) != 0) throw DataError("bad rational literal: " + s);
  x.canonicalize();
  return x;
}

}  // namespace qtwist
