#pragma once

// Independent oracles and random generators shared by the unit tests and
// the acceptance binary. Nothing here calls the numerical code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "fkdet/parse.hpp"
#include "fkdet/section.hpp"

namespace fkdet::test {

using cld = std::complex<long double>;

// Durand-Kerner on a monic-normalized polynomial, coefficients lowest first.
inline std::vector<cld> dk_roots(const std::vector<double>& c) {
  std::size_t lo = 0;
  while (lo < c.size() && c[lo] == 0.0) ++lo;
  std::vector<long double> a(c.begin() + static_cast<long>(lo), c.end());
  while (!a.empty() && a.back() == 0.0L) a.pop_back();
  const std::size_t deg = a.empty() ? 0 : a.size() - 1;
  std::vector<cld> z(deg);
  if (deg == 0) return z;
  const long double lead = a.back();
  for (auto& v : a) v /= lead;
  auto eval = [&](cld x) {
    cld r = 0;
    for (std::size_t k = a.size(); k-- > 0;) r = r * x + a[k];
    return r;
  };
  const cld seed(0.4L, 0.9L);
  cld p = 1;
  for (std::size_t i = 0; i < deg; ++i) {
    z[i] = p;
    p *= seed;
  }
  for (int it = 0; it < 2000; ++it) {
    long double delta = 0;
    for (std::size_t i = 0; i < deg; ++i) {
      cld den = 1;
      for (std::size_t j = 0; j < deg; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      const cld step = eval(z[i]) / den;
      z[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-18L) break;
  }
  return z;
}

// log |lead| + sum log max(1, |root|), coefficients lowest first.
inline double jensen_oracle(const std::vector<double>& c) {
  double lead = 0.0;
  for (double v : c) {
    if (v != 0.0) lead = v;
  }
  long double acc = std::log(std::abs(static_cast<long double>(lead)));
  for (const cld& r : dk_roots(c)) acc += std::max(0.0L, std::log(std::abs(r)));
  return static_cast<double>(acc);
}

// int_T^2 log(c - 2cos a - 2cos b) for c >= 4, reduced to one dimension via
// int_T log(u - 2cos b) = arccosh(u / 2).
inline double torus_laplacian_oracle(double c, int points = 1 << 20) {
  long double acc = 0.0L;
  for (int j = 0; j < points; ++j) {
    const long double a = 2.0L * std::numbers::pi_v<long double> * (j + 0.5L) / points;
    acc += std::acosh((static_cast<long double>(c) - 2.0L * std::cos(a)) / 2.0L);
  }
  return static_cast<double>(acc / points);
}

// 4G/pi with Catalan's constant G = pi/8 log(2 + sqrt 3) + 3/8 sum 1 / ((2n+1)^2 C(2n, n)).
inline double catalan_four_over_pi() {
  const long double pi = std::numbers::pi_v<long double>;
  long double sum = 0.0L;
  long double binom = 1.0L;
  for (int n = 0; n < 60; ++n) {
    if (n > 0) binom *= static_cast<long double>(2 * n) * (2 * n - 1) / (static_cast<long double>(n) * n);
    sum += 1.0L / ((2.0L * n + 1) * (2.0L * n + 1) * binom);
  }
  const long double G = pi / 8 * std::log(2.0L + std::sqrt(3.0L)) + 3.0L / 8 * sum;
  return static_cast<double>(4.0L * G / pi);
}

// sum_j log |sum_k a_k w^{jk}|, w = exp(2 pi i / n).
inline double dft_log_abs(const std::vector<std::int64_t>& a, int n) {
  long double acc = 0.0L;
  for (int j = 0; j < n; ++j) {
    cld s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const long double ang = 2.0L * std::numbers::pi_v<long double> * j * static_cast<long double>(k) / n;
      s += static_cast<long double>(a[k]) * cld(std::cos(ang), std::sin(ang));
    }
    acc += std::log(std::abs(s));
  }
  return static_cast<double>(acc);
}

inline RingElement random_element(std::mt19937_64& rng, const GroupDescriptor& g, int terms, int coeff_max,
                                  int coord_max) {
  std::uniform_int_distribution<int> cd(-coeff_max, coeff_max);
  std::uniform_int_distribution<std::int64_t> xd(-coord_max, coord_max);
  RingElement a(g);
  for (int i = 0; i < terms; ++i) {
    std::vector<std::int64_t> c(g.arity());
    for (auto& v : c) v = xd(rng);
    a.add_term(g.element(c), Coeff(cd(rng)));
  }
  return a;
}

inline RingMatrix random_matrix(std::mt19937_64& rng, const GroupDescriptor& g, std::size_t r, std::size_t c,
                                int terms = 3) {
  RingMatrix m(g, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, random_element(rng, g, terms, 3, 2));
  }
  return m;
}

// h = c0 + small terms with |rest|_1 < c0, so h and h* h are invertible.
inline RingElement dominant_element(std::mt19937_64& rng, const GroupDescriptor& g, int c0) {
  std::uniform_int_distribution<std::int64_t> xd(-2, 2);
  RingElement h = RingElement::constant(g, Coeff(c0));
  int budget = c0 - 1;
  while (budget > 0) {
    std::vector<std::int64_t> c(g.arity());
    for (auto& v : c) v = xd(rng);
    const GroupElement s = g.element(c);
    if (s == g.identity()) continue;
    h.add_term(s, Coeff(rng() % 2 ? 1 : -1));
    --budget;
  }
  return h;
}

}  // namespace fkdet::test
