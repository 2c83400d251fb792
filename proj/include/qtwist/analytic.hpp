#pragma once

// Floating-point oracle: AGM periods of minimal models, direct L(E,1)
// evaluation from the exponentially convergent series, numeric modular
// symbol integrals, and the period-bridge exponent.  Everything here is
// long double (64-bit mantissa); exact results never depend on this module
// except through the hard-asserted bridge exponent.

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

#include "qtwist/arith.hpp"
#include "qtwist/cubic_field.hpp"
#include "qtwist/curve.hpp"

namespace qtwist::analytic {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

struct PeriodData {
  long double omega_plus = 0;   // least positive real period
  long double omega_minus = 0;  // i * omega_minus = least imaginary period
  int lattice_type = 0;         // 2 iff disc < 0
  long double precision = 1e-17L;
};

namespace detail {

inline long double agm(long double a, long double b) {
  for (int i = 0; i < 80; ++i) {
    long double a1 = (a + b) / 2, b1 = sqrtl(a * b);
    if (fabsl(a1 - b1) <= 1e-19L * fabsl(a1)) return a1;
    a = a1;
    b = b1;
  }
  return (a + b) / 2;
}

}  // namespace detail

// Periods of an arbitrary integral model (the spec-facing agm_periods below
// additionally insists the model is minimal).
inline PeriodData periods_of_model(const curves::CurveModel& e) {
  // y^2 = 4x^3 - g2 x - g3, g2 = c4/12, g3 = c6/216
  long double g2 = (long double)Rat(e.c4(), 12).get_d();
  long double g3 = (long double)Rat(e.c6(), 216).get_d();
  auto roots = fields::detail::cubic_roots(0.0L, -g2 / 4.0L, -g3 / 4.0L);
  PeriodData out;
  if (e.disc > 0) {
    out.lattice_type = 1;
    long double e1 = roots[0].real(), e2 = roots[1].real(), e3 = roots[2].real();
    if (e1 < e2) std::swap(e1, e2);
    if (e1 < e3) std::swap(e1, e3);
    if (e2 < e3) std::swap(e2, e3);
    out.omega_plus = kPi / detail::agm(sqrtl(e1 - e3), sqrtl(e1 - e2));
    out.omega_minus = kPi / detail::agm(sqrtl(e1 - e3), sqrtl(e2 - e3));
  } else {
    out.lattice_type = 2;
    long double e1 = 0;
    bool found = false;
    for (const auto& z : roots)
      if (fabsl(z.imag()) < 1e-12L * (1 + fabsl(z.real()))) {
        e1 = z.real();
        found = true;
      }
    if (!found) throw Error("periods: no real root found");
    long double bprime = 3 * e1 * e1 - g2 / 4;  // |e1 - z|^2 over the complex pair
    long double b = sqrtl(bprime);
    long double A = 3 * e1;
    out.omega_plus = kPi / detail::agm(sqrtl(A + 2 * b) / 2, sqrtl(b));
    out.omega_minus = kPi / detail::agm(sqrtl(2 * b - A) / 2, sqrtl(b));
  }
  return out;
}

inline PeriodData agm_periods(const curves::CurveModel& e) {
  curves::CurveModel m = curves::minimalize(e.a);
  if (m.a != e.a) throw PreconditionError("agm_periods: model is not minimal");
  return periods_of_model(e);
}

// ----- a_n machinery -----

class CurveSeries {
 public:
  explicit CurveSeries(curves::CurveModel e) : e_(std::move(e)) {}

  const curves::CurveModel& curve() const { return e_; }

  // a_n for 1 <= n <= nmax, multiplicative extension of point counts
  const std::vector<int64_t>& an(int64_t nmax) {
    std::lock_guard<std::mutex> lock(mu_);
    if (int64_t(an_.size()) > nmax) return an_;
    int64_t cap = std::max<int64_t>(nmax + 1, 16);
    std::vector<int32_t> spf(cap, 0);
    for (int64_t i = 2; i < cap; ++i) {
      if (spf[i]) continue;
      for (int64_t j = i; j < cap; j += i)
        if (!spf[j]) spf[j] = int32_t(i);
    }
    an_.assign(cap, 0);
    if (cap > 1) an_[1] = 1;
    for (int64_t n = 2; n < cap; ++n) {
      int64_t p = spf[n];
      int64_t pe = p, rest = n / p;
      while (rest % p == 0) {
        pe *= p;
        rest /= p;
      }
      if (rest > 1) {
        an_[n] = an_[pe] * an_[rest];
      } else if (pe == p) {
        an_[n] = curves::ap(e_, p);
      } else {
        int64_t pk2 = pe / (p * p);
        an_[n] = an_[p] * an_[pe / p] - (curves::good_reduction(e_, p) ? p * an_[pk2] : 0);
      }
    }
    return an_;
  }

 private:
  curves::CurveModel e_;
  std::mutex mu_;
  std::vector<int64_t> an_;
};

// read-mostly shared cache of per-curve series data
inline std::shared_ptr<CurveSeries> series_for(const curves::CurveModel& e) {
  static std::map<std::string, std::shared_ptr<CurveSeries>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(e.key());
  if (it != cache.end()) return it->second;
  auto cs = std::make_shared<CurveSeries>(e);
  cache.emplace(e.key(), cs);
  return cs;
}

struct LSeriesResult {
  long double value = 0;
  long double tail_bound = 0;
  int64_t nterms = 0;
};

constexpr int64_t kSeriesCap = 600'000;

// number of terms for an absolute tail below tol, for conductor N
inline int64_t series_terms_needed(const Int& conductor, long double tol) {
  long double sqN = sqrtl((long double)conductor.get_d());
  long double c = 2 * kPi / sqN;
  long double t = (logl(16.0L / tol) + logl(1 / (1 - expl(-c)) + 1)) / c;
  return int64_t(t) + 8;
}

// L(E^(M), 1) = 2 sum_n chi_M(n) a_n / n * exp(-2 pi n / sqrt(N M^2));
// requires root number +1 (the caller checks; for -1 the value is 0).
inline LSeriesResult lseries_twisted(CurveSeries& cs, const Int& M, int64_t nterms) {
  const auto& e = cs.curve();
  if (!e.conductor) throw PreconditionError("lseries: conductor unknown");
  Int N = *e.conductor * M * M;
  if (nterms > kSeriesCap)
    throw CapacityError("lseries: nterms beyond capacity (" + std::to_string(nterms) + ")");
  const auto& an = cs.an(nterms);
  long double sqN = sqrtl((long double)N.get_d());
  long double c = 2 * kPi / sqN;
  long double sum = 0;
  bool twist = (M != 1);
  for (int64_t n = 1; n <= nterms; ++n) {
    if (an[n] == 0) continue;
    int chi = twist ? kronecker(M, Int(n)) : 1;
    if (chi == 0) continue;
    long double term = (long double)(chi * an[n]) / n * expl(-c * n);
    sum += term;
    if (fabsl(term) < 1e-24L && c * n > 45) break;
  }
  LSeriesResult r;
  r.value = 2 * sum;
  r.tail_bound = 16.0L * expl(-c * (nterms + 1)) / (1 - expl(-c));
  r.nterms = nterms;
  return r;
}

// The spec-facing single-curve entry point.
inline LSeriesResult lseries_numeric(const curves::CurveModel& e, int64_t nterms) {
  auto cs = series_for(e);
  return lseries_twisted(*cs, Int(1), nterms);
}

// ----- numeric modular symbol <{0, k/m}, f> -----

// I_f(z) = 2 pi i int_z^{ioo} f = -sum a_n/n q^n
inline std::complex<long double> If(CurveSeries& cs, std::complex<long double> z,
                                    int64_t nterms) {
  const auto& an = cs.an(nterms);
  std::complex<long double> q = std::exp(std::complex<long double>(0, 2 * kPi) * z);
  std::complex<long double> qn(1, 0), sum(0, 0);
  for (int64_t n = 1; n <= nterms; ++n) {
    qn *= q;
    if (an[n] != 0) sum += (long double)an[n] / n * qn;
    if (std::abs(qn) < 1e-22L) break;
  }
  return -sum;
}

// numeric value of <{0, k/m}, f>, gcd(m, C) = 1
inline std::complex<long double> numeric_symbol(CurveSeries& cs, const Int& k0, const Int& m0) {
  const auto& e = cs.curve();
  if (!e.conductor) throw PreconditionError("numeric_symbol: conductor unknown");
  Int C = *e.conductor;
  Int k = k0 % m0;
  if (k < 0) k += m0;
  Int g = igcd(k, m0);
  Int m = m0 / g;
  k /= g;
  if (k == 0) return {0, 0};
  // gamma = [a, k; c, m] in Gamma_0(C) with gamma(0) = k/m
  Int a;
  if (mpz_invert(a.get_mpz_t(), m.get_mpz_t(), Int(k * C).get_mpz_t()) == 0)
    throw Error("numeric_symbol: inverse failed");
  if (a == 0) a = k * C;
  Int c = (a * m - 1) / k;
  if (c % C != 0) throw Error("numeric_symbol: construction failed");
  long double cl = (long double)c.get_d();
  std::complex<long double> z0((long double)(-m.get_d()) / cl, 1.0L / cl);
  std::complex<long double> z1((long double)a.get_d() / cl, 1.0L / cl);
  int64_t nterms = int64_t(cl * 8.5L) + 64;
  if (nterms > kSeriesCap) throw CapacityError("numeric_symbol: m too large for the oracle");
  return If(cs, z0, nterms) - If(cs, z1, nterms);
}

// ----- period bridge -----

struct Bridge {
  int sign = 1;
  int exponent = 0;  // u = sign * 2^exponent
  Rat factor() const {
    Rat f = exponent >= 0 ? Rat(Int(1) << exponent) : Rat(1, Int(1) << (-exponent));
    return sign < 0 ? -f : f;
  }
};

// u = Omega_span(E) / (sqrt|M| * Omega_inf(E^(M)_min)), asserted = +-2^j.
inline Bridge bridge_exponent(const curves::CurveModel& base, const Int& M,
                              const curves::CurveModel& twisted_min, long double span_sign) {
  PeriodData pb = periods_of_model(base);
  PeriodData pt = periods_of_model(twisted_min);
  long double span = (M > 0) ? pb.omega_plus : pb.omega_minus;
  long double u = span_sign * span /
                  (sqrtl(fabsl((long double)M.get_d())) * pt.omega_plus);
  for (int j = -4; j <= 4; ++j) {
    long double target = powl(2.0L, j);
    if (fabsl(fabsl(u) - target) <= 1e-9L * target) {
      Bridge b;
      b.sign = u > 0 ? 1 : -1;
      b.exponent = j;
      return b;
    }
  }
  throw BridgeError("period bridge failure: u = " + std::to_string((double)u) +
                    " is not +-2^j with |j| <= 4");
}

struct Verdict {
  bool pass = false;
  long double exact_times_omega = 0;
  long double numeric = 0;
  long double discrepancy = 0;
};

// |exact * Omega_inf - L_numeric| / |L_numeric| < tol, with an absolute
// floor of 1e-12 when both sides vanish.
inline Verdict cross_validate_value(const Rat& exact, const curves::CurveModel& base,
                                    const Int& M, long double tol) {
  auto cs = series_for(base);
  curves::CurveModel ev = (M == 1) ? base : curves::twist_model(base, M);
  if (!ev.conductor) throw PreconditionError("cross_validate: conductor unknown");
  Verdict v;
  if (exact == 0) {
    // odd functional equation: the series formula gives 0 identically
    v.numeric = 0;
    v.exact_times_omega = 0;
    v.discrepancy = 0;
    v.pass = true;
    return v;
  }
  int64_t nterms = series_terms_needed(*ev.conductor, (long double)0.2L * tol);
  LSeriesResult ls = lseries_twisted(*cs, M, nterms);
  PeriodData pd = periods_of_model(ev);
  v.numeric = ls.value;
  v.exact_times_omega = (long double)exact.get_d() * pd.omega_plus;
  if (fabsl(v.numeric) < 1e-12L && fabsl(v.exact_times_omega) < 1e-12L) {
    v.pass = true;
    return v;
  }
  v.discrepancy = fabsl(v.exact_times_omega - v.numeric) / fabsl(v.numeric);
  v.pass = v.discrepancy < tol;
  return v;
}

}  // namespace qtwist::analytic
