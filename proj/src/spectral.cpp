#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "fkdet/errors.hpp"
#include "fkdet/spectral.hpp"

extern "C" {
char* gotoblas_corename(void) __attribute__((weak));
void gotoblas_dynamic_init(void) __attribute__((weak));
void gotoblas_dynamic_quit(void) __attribute__((weak));
}

namespace fkdet {

namespace {

// OpenBLAS 0.3.20 picks its Cooperlake kernels on newer AVX-512 parts and
// dpotrf then fails on positive definite input; fall back to SkylakeX.
void lapack_ready() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (!gotoblas_corename || !gotoblas_dynamic_init || !gotoblas_dynamic_quit) return;
    if (std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
    const char* core = gotoblas_corename();
    if (core == nullptr || std::strcmp(core, "Cooperlake") != 0) return;
    setenv("OPENBLAS_CORETYPE", "SkylakeX", 0);
    gotoblas_dynamic_quit();
    gotoblas_dynamic_init();
  });
}

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

lapack_int order_of(const DenseMatrix& H) {
  lapack_ready();
  if (rows(H) != cols(H)) throw InvalidArgument("square matrix required");
  return static_cast<lapack_int>(rows(H));
}

template <typename M>
M minus_shift(const M& a, double shift) {
  M b = a;
  b.diagonal().array() -= shift;
  return b;
}

}  // namespace

double kernel_threshold(std::size_t size, double norm) {
  return static_cast<double>(size) * norm * std::ldexp(1.0, -45);
}

double kernel_threshold(const DenseMatrix& H) { return kernel_threshold(rows(H), inf_norm(H)); }

CholeskyResult try_cholesky(const DenseMatrix& H) {
  const lapack_int n = order_of(H);
  CholeskyResult r;
  if (n == 0) {
    r.ok = true;
    return r;
  }
  CompensatedSum sum;
  double min_pivot = std::numeric_limits<double>::infinity();
  lapack_int info = 0;
  std::visit(
      [&](const auto& a) {
        using M = std::decay_t<decltype(a)>;
        M L = a;
        if constexpr (std::is_same_v<M, Eigen::MatrixXd>) {
          info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, L.data(), n);
        } else {
          info = LAPACKE_zpotrf(LAPACK_COL_MAJOR, 'L', n, L.data(), n);
        }
        if (info != 0) return;
        for (lapack_int i = 0; i < n; ++i) {
          const double p = std::real(L(i, i));
          min_pivot = std::min(min_pivot, p);
          sum.add(std::log(p));
        }
      },
      H);
  if (info < 0) throw NumericalError("potrf: illegal argument " + std::to_string(-info));
  if (info > 0) {
    r.failed_at = static_cast<std::size_t>(info);
    return r;
  }
  r.ok = true;
  r.logdet = 2.0 * sum.value();
  r.min_pivot = min_pivot;
  return r;
}

double logdet_cholesky(const DenseMatrix& H) {
  const CholeskyResult r = try_cholesky(H);
  const double keps = kernel_threshold(H);
  if (!r.ok) {
    const Inertia in = inertia(H, -keps);
    throw NotPositiveDefinite(in.negative > 0 ? NotPositiveDefinite::Kind::Indefinite
                                              : NotPositiveDefinite::Kind::Singular,
                              r.failed_at);
  }
  if (r.min_pivot * r.min_pivot <= keps && kernel_dim_inertia(H, keps) > 0) {
    throw NotPositiveDefinite(NotPositiveDefinite::Kind::Singular, 0);
  }
  return r.logdet;
}

double logdet_cholesky(const FiniteSection& H) { return logdet_cholesky(H.matrix()); }

SpectralSummary eigs_sym(const DenseMatrix& H, std::size_t blocks) {
  const lapack_int n = order_of(H);
  const double norm = inf_norm(H);
  if (!is_hermitian(H, 1e-10 * std::max(1.0, norm))) throw InvalidArgument("eigs_sym: matrix is not Hermitian");
  SpectralSummary s;
  s.size = static_cast<std::size_t>(n);
  s.blocks = blocks;
  s.folner_size = blocks ? s.size / blocks : s.size;
  s.keps = kernel_threshold(s.size, norm);
  s.eigenvalues.resize(s.size);
  if (n == 0) {
    s.logdet = 0.0;
    return s;
  }
  lapack_int info = 0;
  std::visit(
      [&](const auto& a) {
        using M = std::decay_t<decltype(a)>;
        M A = a;
        if constexpr (std::is_same_v<M, Eigen::MatrixXd>) {
          info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, A.data(), n, s.eigenvalues.data());
        } else {
          info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, A.data(), n, s.eigenvalues.data());
        }
      },
      H);
  if (info != 0) throw NumericalError("eigensolver failed, info " + std::to_string(info));
  CompensatedSum sum;
  bool positive = true;
  for (double t : s.eigenvalues) {
    if (std::abs(t) <= s.keps) ++s.kernel_dim;
    if (t <= 0.0) {
      positive = false;
    } else {
      sum.add(std::log(t));
    }
  }
  s.logdet = positive && s.kernel_dim == 0 ? sum.value() : -std::numeric_limits<double>::infinity();
  return s;
}

SpectralSummary eigs_sym(const FiniteSection& H) {
  SpectralSummary s = eigs_sym(H.matrix(), H.row_blocks());
  s.folner_size = H.set().size();
  return s;
}

Inertia inertia(const DenseMatrix& H, double shift) {
  const lapack_int n = order_of(H);
  Inertia in;
  if (n == 0) return in;
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  lapack_int info = 0;
  auto count = [&](const auto& D) {
    for (lapack_int k = 0; k < n;) {
      if (ipiv[k] > 0) {
        const double d = std::real(D(k, k));
        if (d < 0) {
          ++in.negative;
        } else if (d > 0) {
          ++in.positive;
        } else {
          ++in.zero;
        }
        k += 1;
      } else {
        // 2x2 block in rows k, k+1 (lower storage)
        const double a = std::real(D(k, k));
        const double c = std::real(D(k + 1, k + 1));
        const double b = std::abs(D(k + 1, k));
        const double det = a * c - b * b;
        if (det < 0) {
          ++in.negative;
          ++in.positive;
        } else if (det > 0) {
          if (a + c < 0) {
            in.negative += 2;
          } else {
            in.positive += 2;
          }
        } else {
          ++in.zero;
          if (a + c < 0) {
            ++in.negative;
          } else if (a + c > 0) {
            ++in.positive;
          } else {
            ++in.zero;
          }
        }
        k += 2;
      }
    }
  };
  std::visit(
      [&](const auto& a) {
        using M = std::decay_t<decltype(a)>;
        M A = minus_shift(a, shift);
        if constexpr (std::is_same_v<M, Eigen::MatrixXd>) {
          info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, A.data(), n, ipiv.data());
        } else {
          info = LAPACKE_zhetrf(LAPACK_COL_MAJOR, 'L', n, A.data(), n, ipiv.data());
        }
        if (info >= 0) count(A);
      },
      H);
  if (info < 0) throw NumericalError("sytrf: illegal argument " + std::to_string(-info));
  return in;
}

std::size_t kernel_dim_inertia(const DenseMatrix& H, double keps) {
  const Inertia below = inertia(H, keps);
  const Inertia above = inertia(H, -keps);
  return below.negative - std::min(below.negative, above.negative);
}

TruncatedProduct truncated_log_product(const SpectralSummary& s, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("truncated_log_product: kappa must be positive");
  TruncatedProduct p;
  p.kappa = kappa;
  CompensatedSum sum;
  for (double t : s.eigenvalues) {
    if (t > s.keps && t <= kappa) {
      sum.add(std::log(t));
      ++p.count;
    }
  }
  p.log_product = sum.value();
  return p;
}

std::vector<double> empirical_moments(const SpectralSummary& s, int k_max) {
  if (k_max < 0) throw InvalidArgument("empirical_moments: k_max must be >= 0");
  std::vector<double> m(static_cast<std::size_t>(k_max) + 1, 0.0);
  if (s.size == 0) return m;
  for (int k = 0; k <= k_max; ++k) {
    CompensatedSum sum;
    for (double t : s.eigenvalues) sum.add(std::pow(t, k));
    m[static_cast<std::size_t>(k)] = static_cast<double>(s.blocks) * sum.value() / static_cast<double>(s.size);
  }
  return m;
}

}  // namespace fkdet
