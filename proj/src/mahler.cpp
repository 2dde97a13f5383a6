#include "fkdet/mahler.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "fkdet/errors.hpp"

namespace fkdet {

namespace {

using Poly = std::vector<Rational>;  // lowest degree first

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<int>(k));
  trim(d);
  return d;
}

Poly monic(Poly p) {
  trim(p);
  if (p.empty()) return p;
  const Rational lead = p.back();
  for (Rational& c : p) c /= lead;
  return p;
}

// quotient and remainder of a / b
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  trim(a);
  if (b.empty()) throw InvalidArgument("polynomial division by zero");
  if (degree(a) < degree(b)) return {Poly{}, a};
  Poly q(static_cast<std::size_t>(degree(a) - degree(b) + 1), 0);
  while (!a.empty() && degree(a) >= degree(b)) {
    const int shift = degree(a) - degree(b);
    const Rational c = a.back() / b.back();
    q[static_cast<std::size_t>(shift)] = c;
    for (std::size_t k = 0; k < b.size(); ++k) a[k + static_cast<std::size_t>(shift)] -= c * b[k];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
  trim(a);
  return a;
}

// Yun's square-free decomposition: p = c * prod_i g_i^i.
std::vector<std::pair<Poly, int>> square_free(const Poly& p) {
  std::vector<std::pair<Poly, int>> out;
  const Poly dp = derivative(p);
  if (dp.empty()) return out;
  const Poly c = gcd(p, dp);
  Poly w = divmod(p, c).first;
  Poly y = divmod(dp, c).first;
  Poly z = sub(y, derivative(w));
  for (int i = 1; degree(w) > 0; ++i) {
    const Poly g = gcd(w, z);
    if (degree(g) > 0) out.emplace_back(g, i);
    w = divmod(w, g).first;
    y = divmod(z, g).first;
    z = sub(y, derivative(w));
  }
  return out;
}

std::vector<std::complex<double>> simple_roots(const Poly& g) {
  const Poly m = monic(g);
  const int n = degree(m);
  std::vector<std::complex<double>> roots;
  if (n < 1) return roots;
  if (n == 1) {
    roots.emplace_back((-m[0]).convert_to<double>(), 0.0);
    return roots;
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -m[static_cast<std::size_t>(i)].convert_to<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigensolver failed");
  std::vector<long double> coef;
  for (const Rational& c : m) coef.push_back(c.convert_to<long double>());
  using CL = std::complex<long double>;
  auto eval = [&](CL x, CL& dv) {
    CL v = 0;
    dv = 0;
    for (std::size_t k = coef.size(); k-- > 0;) {
      dv = dv * x + v;
      v = v * x + coef[k];
    }
    return v;
  };
  for (int i = 0; i < n; ++i) {
    CL r(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    CL dv;
    long double best = std::abs(eval(r, dv));
    for (int it = 0; it < 8 && best > 0; ++it) {
      CL d;
      const CL v = eval(r, d);
      if (d == CL(0)) break;
      const CL next = r - v / d;
      const long double e = std::abs(eval(next, dv));
      if (!(e < best)) break;
      best = e;
      r = next;
    }
    roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  }
  return roots;
}

Poly laurent_to_poly(const RingElement& f) {
  const GroupDescriptor& g = f.group();
  if (g.kind() != GroupKind::IntegerLattice || g.arity() != 1) {
    throw InvalidArgument("Jensen's formula needs a one-variable Laurent polynomial over Z");
  }
  if (f.is_zero()) throw InvalidArgument("Mahler measure of the zero polynomial");
  if (f.domain() == Domain::Complex) throw InvalidArgument("Jensen oracle needs exact coefficients");
  const std::int64_t lo = f.terms().begin()->first[0];
  const std::int64_t hi = f.terms().rbegin()->first[0];
  Poly p(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& [s, c] : f.terms()) p[static_cast<std::size_t>(s[0] - lo)] = c.exact();
  return p;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(const std::vector<Rational>& coeffs) {
  Poly p = coeffs;
  trim(p);
  std::size_t k = 0;
  while (k < p.size() && p[k] == 0) ++k;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::complex<double>> roots;
  for (const auto& [g, mult] : square_free(p)) {
    for (const auto& r : simple_roots(g)) {
      for (int i = 0; i < mult; ++i) roots.push_back(r);
    }
  }
  return roots;
}

double mahler_jensen(const RingElement& f) {
  const Poly p = laurent_to_poly(f);
  double acc = log_abs(p.back());
  for (const auto& r : polynomial_roots(p)) {
    const double a = std::abs(r);
    if (a > 1.0) acc += std::log(a);
  }
  return acc;
}

namespace {

struct Term {
  std::vector<std::int64_t> exps;
  std::complex<double> c;
};

double radical_inverse(std::uint64_t k, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

std::complex<double> eval_symbol(const std::vector<Term>& terms, const std::vector<double>& theta) {
  std::complex<double> v = 0;
  for (const Term& t : terms) {
    double phase = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) phase += static_cast<double>(t.exps[i]) * theta[i];
    v += t.c * std::polar(1.0, phase);
  }
  return v;
}

// Midpoint rule with N points per axis, d <= 2.
double midpoint(const std::vector<Term>& terms, std::size_t d, int N) {
  const double h = 2.0 * std::numbers::pi / N;
  long double sum = 0.0L;
  if (d == 1) {
    for (int j = 0; j < N; ++j) {
      const double th = h * (j + 0.5);
      std::complex<double> v = 0;
      for (const Term& t : terms) v += t.c * std::polar(1.0, static_cast<double>(t.exps[0]) * th);
      sum += std::log(std::abs(v));
    }
    return static_cast<double>(sum / N);
  }
  // group terms by the second exponent: f = sum_b u_b(theta1) e^{i b theta2}
  std::map<std::int64_t, std::vector<const Term*>> by_b;
  for (const Term& t : terms) by_b[t.exps[1]].push_back(&t);
  std::vector<std::int64_t> bs;
  for (const auto& [b, v] : by_b) bs.push_back(b);
  const std::size_t nb = bs.size();
  std::vector<std::complex<double>> e2(nb * static_cast<std::size_t>(N));
  for (std::size_t k = 0; k < nb; ++k) {
    for (int j = 0; j < N; ++j) e2[k * N + j] = std::polar(1.0, static_cast<double>(bs[k]) * h * (j + 0.5));
  }
  std::vector<std::complex<double>> u(nb);
  for (int j1 = 0; j1 < N; ++j1) {
    const double th1 = h * (j1 + 0.5);
    std::size_t k = 0;
    for (const auto& [b, list] : by_b) {
      std::complex<double> acc = 0;
      for (const Term* t : list) acc += t->c * std::polar(1.0, static_cast<double>(t->exps[0]) * th1);
      u[k++] = acc;
    }
    long double row = 0.0L;
    for (int j2 = 0; j2 < N; ++j2) {
      std::complex<double> v = 0;
      for (std::size_t q = 0; q < nb; ++q) v += u[q] * e2[q * N + j2];
      row += std::log(std::abs(v));
    }
    sum += row;
  }
  return static_cast<double>(sum / (static_cast<long double>(N) * N));
}

}  // namespace

QuadratureResult mahler_quadrature(const RingElement& f, const QuadratureOptions& opts) {
  const GroupDescriptor& g = f.group();
  if (g.kind() != GroupKind::IntegerLattice) throw InvalidArgument("torus quadrature needs a lattice group");
  if (g.twist()) throw InvalidArgument("torus quadrature is undefined for a twisted group ring");
  if (f.is_zero()) throw InvalidArgument("Mahler measure of the zero polynomial");
  const std::size_t d = g.arity();
  std::vector<Term> terms;
  for (const auto& [s, c] : f.terms()) terms.push_back({{s.coords().begin(), s.coords().end()}, c.to_complex()});

  QuadratureResult res;
  if (d <= 2) {
    double prev = midpoint(terms, d, opts.start_n);
    res.levels = 1;
    res.points_per_axis = opts.start_n;
    res.value = prev;
    res.error = std::numeric_limits<double>::infinity();
    for (int N = 2 * opts.start_n; N <= opts.max_n; N *= 2) {
      const double v = midpoint(terms, d, N);
      ++res.levels;
      res.points_per_axis = N;
      res.error = std::abs(v - prev);
      res.value = v;
      prev = v;
      if (res.error < opts.target) {
        res.converged = true;
        break;
      }
    }
    res.samples = 1;
    for (std::size_t i = 0; i < d; ++i) res.samples *= static_cast<std::size_t>(res.points_per_axis);
    return res;
  }

  if (d > std::size(kPrimes)) throw InvalidArgument("quasi-random quadrature supports rank <= 8");
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int R = opts.replicas;
  std::vector<std::vector<double>> shifts(static_cast<std::size_t>(R), std::vector<double>(d));
  for (auto& s : shifts) {
    for (double& x : s) x = unif(rng);
  }
  std::vector<long double> sums(static_cast<std::size_t>(R), 0.0L);
  std::size_t done = 0;
  std::vector<double> theta(d);
  for (std::size_t M = 4096; M <= opts.max_points; M *= 2) {
    for (int r = 0; r < R; ++r) {
      for (std::size_t k = done; k < M; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
          double x = radical_inverse(k + 1, kPrimes[i]) + shifts[static_cast<std::size_t>(r)][i];
          x -= std::floor(x);
          theta[i] = 2.0 * std::numbers::pi * x;
        }
        sums[static_cast<std::size_t>(r)] += std::log(std::abs(eval_symbol(terms, theta)));
      }
    }
    done = M;
    ++res.levels;
    double mean = 0.0;
    std::vector<double> est(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
      est[static_cast<std::size_t>(r)] = static_cast<double>(sums[static_cast<std::size_t>(r)] / static_cast<long double>(M));
      mean += est[static_cast<std::size_t>(r)];
    }
    mean /= R;
    double var = 0.0;
    for (double e : est) var += (e - mean) * (e - mean);
    var /= (R - 1);
    res.value = mean;
    res.error = 1.96 * std::sqrt(var / R);
    res.samples = M * static_cast<std::size_t>(R);
    if (res.error < opts.target) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace fkdet
