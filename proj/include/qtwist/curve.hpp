#pragma once

// Elliptic curve models over Q: minimal models (Laska-Kraus-Connell),
// point counting and traces of Frobenius, 2-division data, quadratic
// twists, local 2-torsion orders, rational torsion.

#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

#include "qtwist/arith.hpp"
#include "qtwist/corpus_data.hpp"
#include "qtwist/cubic_field.hpp"
#include "qtwist/poly.hpp"

namespace qtwist::curves {

constexpr int64_t kPointCountCap = 1'000'000;

struct CurveModel {
  std::array<Int, 5> a;  // a1, a2, a3, a4, a6
  Int disc;
  std::optional<Int> conductor;
  std::string label;
  bool optimal = false;

  const Int& a1() const { return a[0]; }
  const Int& a2() const { return a[1]; }
  const Int& a3() const { return a[2]; }
  const Int& a4() const { return a[3]; }
  const Int& a6() const { return a[4]; }
  Int b2() const { return a1() * a1() + 4 * a2(); }
  Int b4() const { return 2 * a4() + a1() * a3(); }
  Int b6() const { return a3() * a3() + 4 * a6(); }
  Int b8() const {
    return a1() * a1() * a6() + 4 * a2() * a6() - a1() * a3() * a4() + a2() * a3() * a3() -
           a4() * a4();
  }
  Int c4() const { return b2() * b2() - 24 * b4(); }
  Int c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }

  bool same_model(const CurveModel& o) const { return a == o.a; }
  std::string key() const {
    std::ostringstream os;
    os << a[0] << "," << a[1] << "," << a[2] << "," << a[3] << "," << a[4];
    return os.str();
  }
};

inline Int disc_of(const std::array<Int, 5>& a) {
  Int b2 = a[0] * a[0] + 4 * a[1];
  Int b4 = 2 * a[3] + a[0] * a[2];
  Int b6 = a[2] * a[2] + 4 * a[4];
  Int b8 = a[0] * a[0] * a[4] + 4 * a[1] * a[4] - a[0] * a[2] * a[3] + a[1] * a[2] * a[2] -
           a[3] * a[3];
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

namespace detail {

inline bool kraus_at2(const Int& c4, const Int& c6) {
  Int r4 = ((c6 % 4) + 4) % 4;
  if (r4 == 3) return true;  // c6 = -1 mod 4
  Int r16 = ((c4 % 16) + 16) % 16;
  Int r32 = ((c6 % 32) + 32) % 32;
  return r16 == 0 && (r32 == 0 || r32 == 8);
}

inline bool kraus_at3(const Int& c6) {
  if (c6 == 0) return true;
  return valuation(c6, 3) != 2;
}

// Build the unique integral model with a1,a3 in {0,1} and a2 in {-1,0,1}
// realizing the invariants (c4, c6).
inline std::array<Int, 5> model_from_c4c6(const Int& c4, const Int& c6) {
  for (int r : {-4, -3, 0, 1, 4, 5}) {
    Int b2 = r;
    Int n4 = b2 * b2 - c4;
    if (n4 % 24 != 0) continue;
    Int b4 = n4 / 24;
    Int n6 = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
    if (n6 % 216 != 0) continue;
    Int b6 = n6 / 216;
    Int a1 = ((b2 % 2) + 2) % 2;
    Int a2num = b2 - a1;
    if (a2num % 4 != 0) continue;
    Int a2 = a2num / 4;
    Int a3 = ((b6 % 2) + 2) % 2;
    Int a6num = b6 - a3;
    if (a6num % 4 != 0) continue;
    Int a6 = a6num / 4;
    Int a4num = b4 - a1 * a3;
    if (a4num % 2 != 0) continue;
    Int a4 = a4num / 2;
    std::array<Int, 5> a = {a1, a2, a3, a4, a6};
    CurveModel probe{a, disc_of(a), std::nullopt, "", false};
    if (probe.c4() == c4 && probe.c6() == c6) return a;
  }
  throw Error("model_from_c4c6: invariants are not realizable");
}

}  // namespace detail

// Laska-Kraus-Connell reduction to the global minimal model.
inline CurveModel minimalize(const std::array<Int, 5>& raw) {
  Int disc = disc_of(raw);
  if (disc == 0) throw PreconditionError("singular model (disc = 0)");
  CurveModel tmp{raw, disc, std::nullopt, "", false};
  Int c4 = tmp.c4(), c6 = tmp.c6();
  Int u = 1;
  for (const auto& pp : factor(disc)) {
    if (pp.e < 12) continue;
    int d = pp.e / 12;
    if (c4 != 0) d = std::min(d, valuation(c4, pp.p) / 4);
    if (c6 != 0) d = std::min(d, valuation(c6, pp.p) / 6);
    if (pp.p == 2 || pp.p == 3) {
      while (d > 0) {
        Int s4 = ipow(pp.p, 4 * d), s6 = ipow(pp.p, 6 * d);
        Int nc4 = c4 / s4, nc6 = c6 / s6;
        if (pp.p == 2 ? detail::kraus_at2(nc4, nc6) : detail::kraus_at3(nc6)) break;
        --d;
      }
    }
    if (d > 0) u *= ipow(pp.p, d);
  }
  Int mc4 = c4 / (u * u * u * u);
  Int mc6 = c6 / (u * u * u * u * u * u);
  std::array<Int, 5> ma = detail::model_from_c4c6(mc4, mc6);
  Int mdisc = disc_of(ma);
  if (mdisc * ipow(u, 12) != disc) throw Error("minimalize: discriminant bookkeeping");
  return CurveModel{ma, mdisc, std::nullopt, "", false};
}

// ----- bundled corpus -----

struct CorpusEntry {
  std::string label;
  std::array<Int, 5> a;
  Int conductor;
  bool optimal;
};

inline const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> table = [] {
    std::vector<CorpusEntry> out;
    std::istringstream in(kCurveTable);
    std::string line;
    while (std::getline(in, line)) {
      auto h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      CorpusEntry e;
      long a1, a2, a3, a4, a6, cond;
      int opt;
      if (!(ls >> e.label >> a1 >> a2 >> a3 >> a4 >> a6 >> cond >> opt)) continue;
      e.a = {Int(a1), Int(a2), Int(a3), Int(a4), Int(a6)};
      e.conductor = cond;
      e.optimal = opt != 0;
      out.push_back(e);
    }
    if (out.empty()) throw DataError("curve table is empty");
    return out;
  }();
  return table;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = char(tolower((unsigned char)c));
  return s;
}

inline CurveModel from_label(const std::string& label) {
  std::string l = lower(label);
  for (const auto& e : corpus()) {
    if (e.label != l) continue;
    CurveModel m = minimalize(e.a);
    if (m.a != e.a) throw DataError("curve table entry is not minimal: " + e.label);
    m.conductor = e.conductor;
    m.label = e.label;
    m.optimal = e.optimal;
    if (m.disc % e.conductor != 0) throw DataError("conductor does not divide disc: " + e.label);
    return m;
  }
  throw PreconditionError("unknown curve label: " + label);
}

// Minimalize raw coefficients; attach corpus metadata when the minimal
// model matches a bundled curve.
inline CurveModel make_curve(const std::array<Int, 5>& raw) {
  CurveModel m = minimalize(raw);
  for (const auto& e : corpus()) {
    if (m.a == e.a) {
      m.conductor = e.conductor;
      m.label = e.label;
      m.optimal = e.optimal;
      break;
    }
  }
  return m;
}

// ----- point counting -----

// Number of F_q-points of the reduced curve, singular points included.
inline int64_t count_points(const CurveModel& e, int64_t q) {
  if (q > kPointCountCap) throw CapacityError("point counting capped at q <= 10^6");
  if (q <= 3) {
    int64_t n = 1;  // infinity
    auto r = [&](const Int& z) {
      int64_t v = to_i64(z % q);
      return v < 0 ? v + q : v;
    };
    int64_t a1 = r(e.a1()), a2 = r(e.a2()), a3 = r(e.a3()), a4 = r(e.a4()), a6 = r(e.a6());
    for (int64_t x = 0; x < q; ++x)
      for (int64_t y = 0; y < q; ++y) {
        int64_t lhs = (y * y + a1 * x * y + a3 * y) % q;
        int64_t rhs = (((x + a2) * x + a4) * x + a6) % q;
        if ((lhs - rhs) % q == 0) ++n;
      }
    return n;
  }
  // odd q: complete the square, count via quadratic-residue table
  auto r = [&](const Int& z) {
    int64_t v = to_i64(z % q);
    return v < 0 ? v + q : v;
  };
  int64_t b2 = r(e.b2()), b4 = r(e.b4()), b6 = r(e.b6());
  std::vector<uint8_t> sq(q, 0);
  for (int64_t i = 0; i <= q / 2; ++i) sq[(i * i) % q] = 1;
  // h(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 via finite differences
  int64_t h = b6 % q;
  int64_t d1 = (4 + b2 + 2 * b4) % q;
  int64_t d2 = (24 + 2 * b2) % q;
  int64_t d3 = 24 % q;
  int64_t chi_sum = 0;
  for (int64_t x = 0; x < q; ++x) {
    if (h != 0) chi_sum += sq[h] ? 1 : -1;
    h += d1;
    if (h >= q) h -= q;
    d1 += d2;
    if (d1 >= q) d1 -= q;
    d2 += d3;
    if (d2 >= q) d2 -= q;
  }
  return q + 1 + chi_sum;
}

// Trace of Frobenius; at bad primes this realizes the standard case table
// (1 split multiplicative, -1 non-split, 0 additive).
inline int64_t ap(const CurveModel& e, int64_t q) {
  if (!is_prime(q)) throw PreconditionError("ap: q must be prime");
  int64_t n = count_points(e, q);
  int64_t a = q + 1 - n;
  if (e.disc % q != 0 && (__int128(a) * a) > __int128(4) * q)
    throw Error("ap: Hasse bound violated (internal)");
  return a;
}

inline bool good_reduction(const CurveModel& e, int64_t q) { return e.disc % q != 0; }

// ----- 2-division data -----

struct TwoDivisionData {
  poly::IPoly cubic;  // monic integral cubic defining Q(x(E[2]))
  Int cubic_disc;
  bool is_irreducible;
};

// The 2-division cubic of the short model, cleared to a monic integral
// cubic: X^3 + b2 X^2 + 8 b4 X + 16 b6 (roots are 4x(P) over the 2-torsion).
inline poly::IPoly raw_two_division_cubic(const CurveModel& e) {
  return {16 * e.b6(), 8 * e.b4(), e.b2(), Int(1)};
}

inline bool cubic_has_rational_root(const poly::IPoly& f) {
  // monic integral cubic: rational roots are integer divisors of f[0]
  if (f[0] == 0) return true;
  for (const auto& d : divisors(f[0]))
    if (poly::eval(f, d) == 0 || poly::eval(f, -d) == 0) return true;
  return false;
}

inline const TwoDivisionData& two_division_data(const CurveModel& e) {
  static std::map<std::string, TwoDivisionData> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(e.key());
  if (it != cache.end()) return it->second;
  poly::IPoly raw = raw_two_division_cubic(e);
  TwoDivisionData td;
  td.is_irreducible = !cubic_has_rational_root(raw);
  if (td.is_irreducible) {
    auto rc = fields::reduce_cubic(raw[2], raw[1], raw[0]);
    td.cubic = {rc.c, rc.b, rc.a, Int(1)};
    td.cubic_disc = rc.disc;
  } else {
    td.cubic = raw;
    td.cubic_disc = poly::cubic_disc(raw[3], raw[2], raw[1], raw[0]);
  }
  return cache.emplace(e.key(), std::move(td)).first->second;
}

// q inert in F = Q[x]/(F(x)): for unramified q this is "F irreducible mod q".
inline bool is_inert_in_F(const CurveModel& e, int64_t q) {
  const auto& td = two_division_data(e);
  if (!td.is_irreducible)
    throw PreconditionError("is_inert_in_F: 2-division cubic is reducible over Q");
  if (q == 2 || !is_prime(q)) throw PreconditionError("is_inert_in_F: q must be an odd prime");
  if (!e.conductor) throw PreconditionError("is_inert_in_F: conductor unknown");
  if (td.cubic_disc % q == 0 || *e.conductor % q == 0)
    throw PreconditionError("is_inert_in_F: q is excluded (ramified or bad)");
  return poly::cubic_irreducible_mod_q(td.cubic, q);
}

// ----- twisting -----

inline CurveModel twist_model(const CurveModel& e, const Int& M) {
  if (M == 0 || M == 1) throw PreconditionError("twist_model: M must not be 0 or 1");
  if (!is_squarefree(M)) throw PreconditionError("twist_model: M must be square-free");
  std::array<Int, 5> tw = {Int(0), e.b2() * M, Int(0), 8 * e.b4() * M * M,
                           16 * e.b6() * M * M * M};
  CurveModel m = minimalize(tw);
  if (e.conductor && mpz_odd_p(M.get_mpz_t()) && igcd(M, *e.conductor) == 1) {
    Int r4 = ((M % 4) + 4) % 4;
    if (r4 == 1) m.conductor = *e.conductor * M * M;
  }
  if (!e.label.empty()) m.label = e.label + "^(" + M.get_str() + ")";
  if (m.conductor && m.disc % *m.conductor != 0) throw Error("twist: conductor/disc mismatch");
  return m;
}

// #E(Q_q)[2] = 1 + #{roots of the 2-division cubic in Q_q}, q odd.
inline int local_two_torsion_order(const CurveModel& e, int64_t q) {
  if (q == 2 || !is_prime(q)) throw PreconditionError("local_two_torsion_order: q must be odd");
  int roots = poly::count_padic_roots(raw_two_division_cubic(e), q, 20);
  int order = 1 + roots;
  if (order != 1 && order != 2 && order != 4)
    throw Error("local 2-torsion order out of range (internal)");
  return order;
}

// ----- short Weierstrass group law (used by torsion and descent checks) -----

struct ShortCurve {
  Rat c2, c1, c0;  // y^2 = x^3 + c2 x^2 + c1 x + c0
};
using Pt = std::optional<std::pair<Rat, Rat>>;  // nullopt = point at infinity

inline bool on_curve(const ShortCurve& c, const Pt& p) {
  if (!p) return true;
  const auto& [x, y] = *p;
  return y * y == ((x + c.c2) * x + c.c1) * x + c.c0;
}

inline Pt pt_neg(const Pt& p) {
  if (!p) return p;
  return std::make_pair(p->first, -p->second);
}

inline Pt pt_add(const ShortCurve& c, const Pt& p, const Pt& q) {
  if (!p) return q;
  if (!q) return p;
  const auto& [x1, y1] = *p;
  const auto& [x2, y2] = *q;
  Rat lam;
  if (x1 == x2) {
    if (y1 + y2 == 0) return std::nullopt;
    lam = (3 * x1 * x1 + 2 * c.c2 * x1 + c.c1) / (2 * y1);
  } else {
    lam = (y2 - y1) / (x2 - x1);
  }
  Rat x3 = lam * lam - c.c2 - x1 - x2;
  Rat y3 = lam * (x1 - x3) - y1;
  return std::make_pair(x3, y3);
}

inline Pt pt_mul(const ShortCurve& c, int64_t n, Pt p) {
  if (n < 0) {
    n = -n;
    p = pt_neg(p);
  }
  Pt acc = std::nullopt;
  while (n > 0) {
    if (n & 1) acc = pt_add(c, acc, p);
    p = pt_add(c, p, p);
    n >>= 1;
  }
  return acc;
}

// ----- rational torsion -----

// Exact order of E(Q)_tors: a Lutz-Nagell search on the integral model
// y^2 = x^3 - 27 c4 x - 54 c6 exhibits every torsion point; the gcd of
// #E(F_q) over 40 good primes must agree or we refuse to answer.
inline int64_t torsion_order(const CurveModel& e) {
  Int A = -27 * e.c4(), B = -54 * e.c6();
  ShortCurve sc{Rat(0), Rat(A), Rat(B)};
  Int D = ipow(Int(2), 8) * ipow(Int(3), 12) * abs(e.disc);
  // candidate y-values: y = 0 or y^2 | D
  std::vector<Int> ys = {0};
  {
    auto fs = factor(D);
    std::vector<Int> stack = {1};
    for (const auto& pp : fs) {
      size_t sz = stack.size();
      Int q = 1;
      for (int i = 1; i <= pp.e / 2; ++i) {
        q *= pp.p;
        for (size_t j = 0; j < sz; ++j) stack.push_back(stack[j] * q);
      }
    }
    ys.insert(ys.end(), stack.begin(), stack.end());
  }
  std::vector<std::pair<Rat, Rat>> found;
  auto consider = [&](const Int& x, const Int& y) {
    Pt p = std::make_pair(Rat(x), Rat(y));
    if (!on_curve(sc, p)) return;
    // torsion iff some multiple up to 12 hits O (Mazur bound)
    Pt acc = p;
    for (int n = 1; n <= 12; ++n) {
      if (!acc) {
        for (int k = 1; k < n; ++k) {
          Pt m = pt_mul(sc, k, p);
          if (m) found.push_back(*m);
        }
        return;
      }
      acc = pt_add(sc, acc, p);
    }
  };
  for (const Int& y : ys) {
    // integer roots of x^3 + A x + (B - y^2)
    Int cst = B - y * y;
    auto roots = fields::detail::cubic_roots(0.0L, (long double)A.get_d(),
                                             (long double)cst.get_d());
    for (const auto& z : roots) {
      if (fabsl(z.imag()) > 0.1L) continue;
      Int x0((long)llroundl(z.real()));
      for (Int x = x0 - 2; x <= x0 + 2; ++x) {
        if (x * x * x + A * x + cst == 0) consider(x, y);
      }
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  int64_t t = int64_t(found.size()) + 1;
  // gcd cross-check over good primes
  Int g = 0;
  int used = 0;
  for (int32_t q : small_primes()) {
    if (q < 5 || !good_reduction(e, q)) continue;
    g = igcd(g, Int(count_points(e, q)));
    if (++used >= 40) break;
  }
  if (g != t)
    throw Error("torsion confirmation failed: exhibited " + std::to_string(t) +
                " points but gcd bound is " + g.get_str());
  return t;
}

// ----- twist descriptors -----

struct TwistDescriptor {
  Int M;
  int epsilon = 1;
  std::vector<int64_t> primes;  // ascending odd primes dividing M
  int r = 0;

  int chi(const Int& k) const { return kronecker(M, k); }
};

inline TwistDescriptor make_twist(const CurveModel& e, const Int& M) {
  if (M == 0 || M == 1) throw PreconditionError("twist descriptor: M must not be 0 or 1");
  if (mpz_even_p(M.get_mpz_t())) throw PreconditionError("twist descriptor: M must be odd");
  if (((M % 4) + 4) % 4 != 1) throw PreconditionError("twist descriptor: M = 1 mod 4 required");
  if (!e.conductor) throw PreconditionError("twist descriptor: conductor unknown");
  if (igcd(M, *e.conductor) != 1)
    throw PreconditionError("twist descriptor: M must be coprime to the conductor");
  TwistDescriptor t;
  t.M = M;
  t.epsilon = M < 0 ? -1 : 1;
  for (const auto& pp : factor(M)) {
    if (pp.e > 1) throw PreconditionError("twist descriptor: M must be square-free");
    t.primes.push_back(to_i64(pp.p));
  }
  std::sort(t.primes.begin(), t.primes.end());
  t.r = int(t.primes.size());
  return t;
}

}  // namespace qtwist::curves
