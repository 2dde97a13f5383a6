#include "fkdet/errors.hpp"
#include "fkdet/spectral.hpp"

namespace fkdet {

BigInt bareiss_abs_det(IntMatrix M) {
  if (M.rows != M.cols) throw InvalidArgument("determinant of a non-square matrix");
  const std::size_t n = M.rows;
  if (n == 0) return 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && M(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(M(p, j), M(k, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
      }
      M(i, k) = 0;
    }
    prev = M(k, k);
  }
  return boost::multiprecision::abs(M(n - 1, n - 1));
}

std::vector<BigInt> smith_invariants(IntMatrix M) {
  const std::size_t r = M.rows;
  const std::size_t c = M.cols;
  const std::size_t m = std::min(r, c);
  std::vector<BigInt> d(m, 0);
  for (std::size_t t = 0; t < m; ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block as pivot
      std::size_t pi = r;
      std::size_t pj = c;
      BigInt best = 0;
      for (std::size_t i = t; i < r; ++i) {
        for (std::size_t j = t; j < c; ++j) {
          if (M(i, j) == 0) continue;
          const BigInt a = boost::multiprecision::abs(M(i, j));
          if (pi == r || a < best) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == r) return d;  // trailing block is zero
      if (pi != t) {
        for (std::size_t j = 0; j < c; ++j) std::swap(M(pi, j), M(t, j));
      }
      if (pj != t) {
        for (std::size_t i = 0; i < r; ++i) std::swap(M(i, pj), M(i, t));
      }
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (M(i, t) == 0) continue;
        const BigInt q = M(i, t) / M(t, t);
        for (std::size_t j = t; j < c; ++j) M(i, j) -= q * M(t, j);
        if (M(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (M(t, j) == 0) continue;
        const BigInt q = M(t, j) / M(t, t);
        for (std::size_t i = t; i < r; ++i) M(i, j) -= q * M(i, t);
        if (M(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // the pivot must divide the rest of the block
      std::size_t bad = r;
      for (std::size_t i = t + 1; i < r && bad == r; ++i) {
        for (std::size_t j = t + 1; j < c; ++j) {
          if (M(i, j) % M(t, t) != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad == r) break;
      for (std::size_t j = t; j < c; ++j) M(t, j) += M(bad, j);
    }
    d[t] = boost::multiprecision::abs(M(t, t));
  }
  return d;
}

BigInt smith_abs_det(const IntMatrix& M) {
  if (M.rows != M.cols) throw InvalidArgument("determinant of a non-square matrix");
  if (M.rows <= 512) return bareiss_abs_det(M);
  BigInt p = 1;
  for (const BigInt& x : smith_invariants(M)) p *= x;
  return p;
}

}  // namespace fkdet
