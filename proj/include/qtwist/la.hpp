#pragma once

// Dense exact linear algebra over Q plus integer lattice utilities (HNF,
// kernels).  Dimensions in this project are small (a few hundred at most),
// so plain row reduction with mpq entries is entirely adequate.

#include <vector>

#include "qtwist/arith.hpp"

namespace qtwist::la {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;  // row-major
using IVec = std::vector<Int>;
using IMat = std::vector<IVec>;  // row-major

inline Mat zeros(size_t r, size_t c) { return Mat(r, Vec(c, Rat(0))); }

inline Mat identity(size_t n) {
  Mat m = zeros(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat t = zeros(a[0].size(), a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Vec mul(const Mat& a, const Vec& x) {
  Vec y(a.size(), Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      if (a[i][j] != 0 && x[j] != 0) y[i] += a[i][j] * x[j];
  return y;
}

inline Mat mul(const Mat& a, const Mat& b) {
  Mat c = zeros(a.size(), b.empty() ? 0 : b[0].size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (size_t j = 0; j < b[k].size(); ++j)
          if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Rat dot(const Vec& a, const Vec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

// In-place reduced row echelon form; returns the pivot column of each
// nonzero row, in order.
inline std::vector<size_t> rref(Mat& a) {
  std::vector<size_t> pivots;
  if (a.empty()) return pivots;
  size_t rows = a.size(), cols = a[0].size(), r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    Rat inv = 1 / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  a.resize(r);  // drop zero rows
  return pivots;
}

// Basis of the right kernel {x : a x = 0}.
inline std::vector<Vec> kernel(Mat a) {
  if (a.empty()) return {};
  size_t cols = a[0].size();
  std::vector<size_t> piv = rref(a);
  std::vector<bool> is_piv(cols, false);
  for (size_t c : piv) is_piv[c] = true;
  std::vector<Vec> basis;
  for (size_t c = 0; c < cols; ++c) {
    if (is_piv[c]) continue;
    Vec v(cols, Rat(0));
    v[c] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Mat inverse(const Mat& a) {
  size_t n = a.size();
  Mat aug = zeros(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (piv.size() != n || piv.back() != n - 1) throw Error("inverse: singular matrix");
  Mat inv = zeros(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

// ----- integer lattice utilities (column convention) -----
// A lattice is a list of basis columns, each an IVec of fixed length.

using Cols = std::vector<IVec>;

// Column-style Hermite reduction of the lattice spanned by the given
// columns; returns an independent basis (zero columns dropped).
inline Cols hnf_cols(Cols cols) {
  if (cols.empty()) return cols;
  size_t rows = cols[0].size();
  size_t c0 = 0;
  for (size_t r = 0; r < rows && c0 < cols.size(); ++r) {
    // gcd-eliminate row r across columns c0..end
    while (true) {
      size_t nz = cols.size();
      for (size_t c = c0; c < cols.size(); ++c)
        if (cols[c][r] != 0 && (nz == cols.size() || abs(cols[c][r]) < abs(cols[nz][r]))) nz = c;
      if (nz == cols.size()) break;  // row r is zero from c0 on
      std::swap(cols[c0], cols[nz]);
      bool clean = true;
      for (size_t c = c0 + 1; c < cols.size(); ++c) {
        if (cols[c][r] == 0) continue;
        Int q = cols[c][r] / cols[c0][r];  // truncated division
        if (q != 0)
          for (size_t i = 0; i < rows; ++i) cols[c][i] -= q * cols[c0][i];
        if (cols[c][r] != 0) clean = false;
      }
      if (clean) break;
    }
    if (cols[c0][r] == 0) continue;
    if (cols[c0][r] < 0)
      for (size_t i = 0; i < rows; ++i) cols[c0][i] = -cols[c0][i];
    // reduce earlier columns against this pivot
    for (size_t c = 0; c < c0; ++c) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), cols[c][r].get_mpz_t(), cols[c0][r].get_mpz_t());
      if (q != 0)
        for (size_t i = 0; i < rows; ++i) cols[c][i] -= q * cols[c0][i];
    }
    ++c0;
  }
  cols.resize(c0);
  return cols;
}

// Basis of {x in Z^n : a x = 0} for an integer matrix a (rows x n),
// returned as columns.
inline Cols int_kernel(const IMat& a) {
  if (a.empty()) return {};
  size_t rows = a.size(), n = a[0].size();
  // Column-reduce the stacked matrix [a ; I]; kernel = columns whose a-part
  // became zero.
  Cols cols(n, IVec(rows + n, Int(0)));
  for (size_t j = 0; j < n; ++j) {
    for (size_t i = 0; i < rows; ++i) cols[j][i] = a[i][j];
    cols[j][rows + j] = 1;
  }
  // eliminate the top `rows` coordinates
  size_t c0 = 0;
  for (size_t r = 0; r < rows && c0 < cols.size(); ++r) {
    while (true) {
      size_t nz = cols.size();
      for (size_t c = c0; c < cols.size(); ++c)
        if (cols[c][r] != 0 && (nz == cols.size() || abs(cols[c][r]) < abs(cols[nz][r]))) nz = c;
      if (nz == cols.size()) break;
      std::swap(cols[c0], cols[nz]);
      bool clean = true;
      for (size_t c = c0 + 1; c < cols.size(); ++c) {
        if (cols[c][r] == 0) continue;
        Int q = cols[c][r] / cols[c0][r];
        if (q != 0)
          for (size_t i = 0; i < rows + n; ++i) cols[c][i] -= q * cols[c0][i];
        if (cols[c][r] != 0) clean = false;
      }
      if (clean) break;
    }
    if (cols[c0][r] != 0) ++c0;
  }
  Cols ker;
  for (size_t c = c0; c < cols.size(); ++c) {
    bool top_zero = true;
    for (size_t r = 0; r < rows; ++r)
      if (cols[c][r] != 0) {
        top_zero = false;
        break;
      }
    if (!top_zero) throw Error("int_kernel: elimination failed");
    ker.push_back(IVec(cols[c].begin() + rows, cols[c].end()));
  }
  return ker;
}

// Clear denominators of a rational matrix: returns (integer matrix, lcm D)
// with input = integer/D.
inline std::pair<IMat, Int> clear_denominators(const Mat& a) {
  Int d = 1;
  for (const auto& row : a)
    for (const auto& x : row) d = ilcm(d, x.get_den());
  IMat m(a.size(), IVec(a.empty() ? 0 : a[0].size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) {
      Rat s = a[i][j] * d;
      m[i][j] = s.get_num();
    }
  return {m, d};
}

}  // namespace qtwist::la
