#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fkdet/spectral.hpp"

namespace fkdet {

struct FkOptions {
  double tol = 5e-3;               // per-site convergence tolerance
  std::size_t max_rows = 8192;     // boxes with more section rows are skipped
  std::size_t probe_rows = 1024;   // full spectra only up to this order
  bool parallel = false;           // evaluate schedule points concurrently
  std::vector<double> eps_fallback;  // epsilon sweep attached on slow convergence
};

struct TracePoint {
  int n = 0;
  std::size_t folner_size = 0;
  std::size_t size = 0;  // section order
  double value = 0.0;    // log det(g_F) / |F|, -inf on a kernel
  double running_inf = 0.0;
  double wall_ms = 0.0;
  std::size_t kernel_dim = 0;
  double lambda_min = std::numeric_limits<double>::quiet_NaN();  // only when size <= probe_rows
};

enum class Verdict { Converged, UpperBoundOnly, KernelDetected };
const char* to_string(Verdict v);

struct ApproximationTrace {
  std::vector<TracePoint> points;
  Verdict verdict = Verdict::UpperBoundOnly;
  double running_inf = std::numeric_limits<double>::infinity();
  double value = 0.0;          // log det estimate: running_inf, or -inf on a kernel
  double est_error = 0.0;      // |v_last - v_prev|
  std::size_t blocks = 1;
  bool exact = false;          // F = Gamma for a finite group
  bool slow_convergence = false;
  std::vector<std::string> warnings;
  std::vector<std::pair<double, double>> eps_sweep;  // (eps, log det(g + eps))
};

/// Schedule of box parameters actually used for a group: a single box for
/// finite groups, otherwise the given list.
std::vector<int> effective_schedule(const GroupDescriptor& g, const std::vector<int>& schedule);

/// lim_F log det(g_F) / |F| for a positive star-symmetric g.
ApproximationTrace fk_det_positive(const RingMatrix& g, const std::vector<int>& schedule,
                                   const FkOptions& opts = {});
/// Half of fk_det_positive(f* f).
ApproximationTrace fk_det_general(const RingMatrix& f, const std::vector<int>& schedule,
                                  const FkOptions& opts = {});

struct KernelEstimate {
  std::vector<std::pair<int, double>> fractions;  // (n, dim ker / (d |F|))
  double limit_est = 0.0;
  double error = 0.0;
};

/// Kernel fractions of the sections of f* f.
KernelEstimate vn_kernel_dim(const RingMatrix& f, const std::vector<int>& schedule,
                             const FkOptions& opts = {});
/// Kernel fractions of the sections of a positive g itself.
KernelEstimate kernel_fraction_positive(const RingMatrix& g, const std::vector<int>& schedule,
                                        const FkOptions& opts = {});

/// (eps, log det(g + eps)) for strictly decreasing positive eps.
std::vector<std::pair<double, double>> epsilon_sweep(const RingMatrix& g, const std::vector<double>& eps,
                                                     const std::vector<int>& schedule,
                                                     const FkOptions& opts = {});

struct TailDiagnostic {
  bool found = false;
  double kappa = 0.0;
  double lambda = 0.0;
  std::vector<std::pair<int, double>> ratios;  // (n, D_{g,F,kappa}^{-1/|F|})
  std::string message;
};

/// Largest kappa on the grid min(1, |g|) 2^-j, j = 1..20, whose tail ratio
/// stays <= lambda at the two largest boxes.
TailDiagnostic tail_diagnostic(const RingMatrix& g, double lambda, const std::vector<int>& schedule,
                               const FkOptions& opts = {});

}  // namespace fkdet
