#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "fkdet/section.hpp"

namespace fkdet {

/// keps = size * norm * 2^-45.
double kernel_threshold(std::size_t size, double norm);
double kernel_threshold(const DenseMatrix& H);

struct SpectralSummary {
  std::vector<double> eigenvalues;  // ascending
  double logdet = -std::numeric_limits<double>::infinity();
  std::size_t kernel_dim = 0;
  std::size_t size = 0;
  std::size_t folner_size = 0;
  std::size_t blocks = 1;
  double keps = 0.0;
};

struct TruncatedProduct {
  double kappa = 0.0;
  double log_product = 0.0;
  std::size_t count = 0;
};

struct CholeskyResult {
  bool ok = false;
  double logdet = 0.0;
  double min_pivot = 0.0;  // smallest diagonal entry of the factor
  std::size_t failed_at = 0;  // 1-based pivot index on failure
};

/// Cholesky log-determinant of a Hermitian positive-definite matrix.
/// Throws NotPositiveDefinite, telling a singular from an indefinite input.
double logdet_cholesky(const DenseMatrix& H);
double logdet_cholesky(const FiniteSection& H);
CholeskyResult try_cholesky(const DenseMatrix& H);

/// Full ascending spectrum of a Hermitian matrix (checked to 1e-10 relative).
SpectralSummary eigs_sym(const DenseMatrix& H, std::size_t blocks = 1);
SpectralSummary eigs_sym(const FiniteSection& H);

/// Signature counts of H - shift from a Bunch-Kaufman factorization.
struct Inertia {
  std::size_t negative = 0;
  std::size_t zero = 0;
  std::size_t positive = 0;
};
Inertia inertia(const DenseMatrix& H, double shift);
/// Eigenvalues within [-keps, keps), counted via Sylvester inertia.
std::size_t kernel_dim_inertia(const DenseMatrix& H, double keps);

/// Sum of log t over eigenvalues t in (keps, kappa].
TruncatedProduct truncated_log_product(const SpectralSummary& s, double kappa);

/// m_k = (blocks / size) sum_i t_i^k for k = 0..k_max.
std::vector<double> empirical_moments(const SpectralSummary& s, int k_max);

/// |det M| exactly. Bareiss for order <= 512, Smith normal form beyond.
BigInt smith_abs_det(const IntMatrix& M);
BigInt bareiss_abs_det(IntMatrix M);
/// Invariant factors d_1 | d_2 | ... (zeros last) of a square or rectangular matrix.
std::vector<BigInt> smith_invariants(IntMatrix M);

}  // namespace fkdet
