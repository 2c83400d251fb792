#pragma once

// P^1(Z/N): normalized coset labels (c:d) for Gamma_0(N).

#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "qtwist/arith.hpp"

namespace qtwist::modsym {

struct P1Table {
  int64_t N = 0;
  std::vector<std::pair<int64_t, int64_t>> elems;
  std::unordered_map<int64_t, int32_t> index_map;  // key = c * N + d

  size_t size() const { return elems.size(); }

  // canonical representative: c = gcd(c, N), then the smallest unit-multiple d
  std::pair<int64_t, int64_t> normalize(int64_t c, int64_t d) const {
    c %= N;
    if (c < 0) c += N;
    d %= N;
    if (d < 0) d += N;
    int64_t g = std::gcd(c, N);
    if (std::gcd(g, std::gcd(d, N)) != 1) throw PreconditionError("p1: gcd(c,d,N) > 1");
    if (c == 0) return {0, 1};
    // solve u * c = g mod N with u a unit
    int64_t c1 = c / g, n1 = N / g;
    Int u0;
    if (mpz_invert(u0.get_mpz_t(), Int(c1).get_mpz_t(), Int(n1).get_mpz_t()) == 0)
      throw Error("p1: inverse failed");
    int64_t best = -1;
    for (int64_t t = 0; t < g; ++t) {
      int64_t u = to_i64((u0 + Int(t) * n1) % N);
      if (std::gcd(u, N) != 1) continue;
      int64_t dd = to_i64((Int(u) * d) % N);
      if (best < 0 || dd < best) best = dd;
    }
    if (best < 0) throw Error("p1: no unit representative");
    return {g, best};
  }

  int32_t index(int64_t c, int64_t d) const {
    auto [cc, dd] = normalize(c, d);
    auto it = index_map.find(cc * N + dd);
    if (it == index_map.end()) throw Error("p1: element not found");
    return it->second;
  }

  static P1Table build(int64_t N) {
    P1Table t;
    t.N = N;
    for (const auto& gd : divisors(Int(N))) {
      int64_t g = to_i64(gd);
      if (g == N) continue;  // handled by (0:1)
      for (int64_t d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(g, d), N) != 1) continue;
        auto nm = t.normalize(g, d);
        int64_t key = nm.first * N + nm.second;
        if (t.index_map.count(key)) continue;
        t.index_map.emplace(key, int32_t(t.elems.size()));
        t.elems.push_back(nm);
      }
    }
    {
      auto nm = t.normalize(0, 1);
      int64_t key = nm.first * N + nm.second;
      if (!t.index_map.count(key)) {
        t.index_map.emplace(key, int32_t(t.elems.size()));
        t.elems.push_back(nm);
      }
    }
    return t;
  }
};

}  // namespace qtwist::modsym
