#include "fkdet/fk.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <optional>

#include "fkdet/errors.hpp"

namespace fkdet {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "converged";
    case Verdict::UpperBoundOnly:
      return "upper_bound_only";
    case Verdict::KernelDetected:
      return "kernel_detected";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t box_size(const GroupDescriptor& g, int n) {
  const auto m = static_cast<std::size_t>(n);
  switch (g.kind()) {
    case GroupKind::IntegerLattice: {
      std::size_t s = 1;
      for (std::size_t i = 0; i < g.arity(); ++i) s *= m;
      return s;
    }
    case GroupKind::FiniteCyclicProduct:
      return g.order();
    case GroupKind::Heisenberg3:
      return m * m * m * m;
  }
  return 0;
}

struct BoxResult {
  double logdet = 0.0;
  std::size_t kernel = 0;
  double lambda_min = std::numeric_limits<double>::quiet_NaN();
  bool indefinite = false;
};

BoxResult evaluate_positive(const FiniteSection& H, const FkOptions& opts) {
  const DenseMatrix& m = H.matrix();
  const double keps = kernel_threshold(m);
  BoxResult r;
  if (H.rows() <= opts.probe_rows) {
    const SpectralSummary s = eigs_sym(H);
    r.lambda_min = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.front();
    r.indefinite = r.lambda_min < -s.keps;
    r.kernel = s.kernel_dim;
    if (r.kernel > 0) {
      r.logdet = -kInf;
    } else {
      const CholeskyResult c = try_cholesky(m);
      r.logdet = c.ok ? c.logdet : s.logdet;
    }
    return r;
  }
  const CholeskyResult c = try_cholesky(m);
  if (c.ok && c.min_pivot * c.min_pivot > keps) {
    r.logdet = c.logdet;
    return r;
  }
  if (inf_norm(m) == 0.0) {
    r.kernel = H.rows();
    r.logdet = -kInf;
    return r;
  }
  if (inertia(m, -keps).negative > 0) {
    r.indefinite = true;
    return r;
  }
  r.kernel = kernel_dim_inertia(m, keps);
  if (r.kernel > 0) {
    r.logdet = -kInf;
  } else if (c.ok) {
    r.logdet = c.logdet;
  } else {
    r.logdet = eigs_sym(H).logdet;
  }
  return r;
}

std::size_t count_kernel(const FiniteSection& H, const FkOptions& opts) {
  const DenseMatrix& m = H.matrix();
  if (H.rows() <= opts.probe_rows) return eigs_sym(H).kernel_dim;
  const double keps = kernel_threshold(m);
  if (inf_norm(m) == 0.0) return H.rows();
  const CholeskyResult c = try_cholesky(m);
  if (c.ok && c.min_pivot * c.min_pivot > keps) return 0;
  return kernel_dim_inertia(m, keps);
}

void require_positive_input(const RingMatrix& g) {
  if (!g.is_square()) throw InvalidArgument("positive input must be a square ring matrix");
  if (!g.is_star_symmetric()) throw InvalidArgument("input is not star-symmetric");
}

struct Box {
  int n;
  FolnerSet set;
};

std::vector<Box> usable_boxes(const RingMatrix& g, const std::vector<int>& schedule, const FkOptions& opts,
                              std::vector<std::string>* warnings) {
  const GroupDescriptor& grp = g.group();
  const std::vector<int> sched = effective_schedule(grp, schedule);
  if (sched.empty()) throw InvalidArgument("empty Folner schedule");
  std::vector<Box> boxes;
  for (int n : sched) {
    if (n < 1) throw InvalidArgument("schedule entries must be >= 1");
    const std::size_t rows = box_size(grp, n) * g.rows();
    if (rows > opts.max_rows) {
      if (warnings) {
        warnings->push_back("box n=" + std::to_string(n) + " skipped: section order " + std::to_string(rows) +
                            " exceeds max_rows " + std::to_string(opts.max_rows));
      }
      continue;
    }
    boxes.push_back({n, folner_box(grp, n)});
  }
  if (boxes.empty()) throw InvalidArgument("no schedule box fits within max_rows");
  return boxes;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

ApproximationTrace halved(ApproximationTrace t) {
  for (TracePoint& p : t.points) {
    p.value /= 2;
    p.running_inf /= 2;
  }
  t.running_inf /= 2;
  t.value /= 2;
  t.est_error /= 2;
  for (auto& [eps, v] : t.eps_sweep) v /= 2;
  return t;
}

void check_eps(const std::vector<double>& eps) {
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw InvalidArgument("epsilon values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw InvalidArgument("epsilon values must be strictly decreasing");
  }
}

}  // namespace

std::vector<int> effective_schedule(const GroupDescriptor& g, const std::vector<int>& schedule) {
  if (g.is_finite()) return schedule.empty() ? std::vector<int>{} : std::vector<int>{1};
  return schedule;
}

ApproximationTrace fk_det_positive(const RingMatrix& g, const std::vector<int>& schedule, const FkOptions& opts) {
  require_positive_input(g);
  ApproximationTrace trace;
  trace.blocks = g.rows();
  trace.exact = g.group().is_finite();
  const std::vector<Box> boxes = usable_boxes(g, schedule, opts, &trace.warnings);

  std::vector<BoxResult> results;
  std::vector<double> times;
  if (opts.parallel && boxes.size() > 1) {
    std::vector<std::future<std::pair<BoxResult, double>>> jobs;
    for (const Box& b : boxes) {
      jobs.push_back(std::async(std::launch::async, [&g, &b, &opts] {
        const auto t0 = std::chrono::steady_clock::now();
        const FiniteSection H = assemble(g, b.set);
        BoxResult r = evaluate_positive(H, opts);
        return std::make_pair(r, elapsed_ms(t0));
      }));
    }
    for (auto& j : jobs) {
      auto [r, ms] = j.get();
      results.push_back(r);
      times.push_back(ms);
    }
  } else {
    std::optional<FiniteSection> prev;
    for (const Box& b : boxes) {
      const auto t0 = std::chrono::steady_clock::now();
      FiniteSection H = prev ? grow(std::move(*prev), b.set) : assemble(g, b.set);
      results.push_back(evaluate_positive(H, opts));
      times.push_back(elapsed_ms(t0));
      const std::size_t k = results.size();
      if (results.back().indefinite) break;
      if (k >= 2 && results[k - 1].kernel > 0 && results[k - 2].kernel > 0) break;
      prev = std::move(H);
    }
  }

  bool kernel = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const BoxResult& r = results[i];
    if (r.indefinite) {
      throw NotPositiveDefinite(NotPositiveDefinite::Kind::Indefinite, 0);
    }
    TracePoint p;
    p.n = boxes[i].n;
    p.folner_size = boxes[i].set.size();
    p.size = p.folner_size * g.rows();
    p.value = r.logdet / static_cast<double>(p.folner_size);
    p.kernel_dim = r.kernel;
    p.lambda_min = r.lambda_min;
    p.wall_ms = times[i];
    trace.running_inf = std::min(trace.running_inf, p.value);
    p.running_inf = trace.running_inf;
    trace.points.push_back(p);
    if (r.kernel > 0 && (trace.exact || (i > 0 && results[i - 1].kernel > 0))) kernel = true;
  }

  const std::size_t np = trace.points.size();
  if (kernel) {
    trace.verdict = Verdict::KernelDetected;
    trace.value = -kInf;
    trace.running_inf = -kInf;
    return trace;
  }
  trace.value = trace.running_inf;
  if (trace.exact) {
    trace.verdict = Verdict::Converged;
  } else if (np >= 2) {
    const double a = trace.points[np - 1].value;
    const double b = trace.points[np - 2].value;
    trace.est_error = std::isfinite(a) && std::isfinite(b) ? std::abs(a - b) : kInf;
    trace.verdict = trace.est_error <= opts.tol ? Verdict::Converged : Verdict::UpperBoundOnly;
  } else {
    trace.est_error = kInf;
    trace.verdict = Verdict::UpperBoundOnly;
  }
  if (trace.verdict != Verdict::Converged) {
    trace.warnings.push_back("not converged: last two boxes differ by " + std::to_string(trace.est_error) +
                             " per site (tol " + std::to_string(opts.tol) + ")");
  }

  // decay rate of the smallest eigenvalue over the two largest probed boxes
  std::vector<const TracePoint*> probed;
  for (const TracePoint& p : trace.points) {
    if (std::isfinite(p.lambda_min) && p.lambda_min > 0.0) probed.push_back(&p);
  }
  if (probed.size() >= 2) {
    const TracePoint& p1 = *probed[probed.size() - 2];
    const TracePoint& p2 = *probed.back();
    const double slope = (std::log(p2.lambda_min) - std::log(p1.lambda_min)) /
                         (std::log(static_cast<double>(p2.n)) - std::log(static_cast<double>(p1.n)));
    if (slope < -1.0) {
      trace.slow_convergence = true;
      trace.warnings.push_back("slow convergence: smallest eigenvalue decays like n^" + std::to_string(slope) +
                               " (singular symbol suspected)");
      if (!opts.eps_fallback.empty()) {
        FkOptions inner = opts;
        inner.eps_fallback.clear();
        trace.eps_sweep = epsilon_sweep(g, opts.eps_fallback, schedule, inner);
      }
    }
  }
  return trace;
}

ApproximationTrace fk_det_general(const RingMatrix& f, const std::vector<int>& schedule, const FkOptions& opts) {
  return halved(fk_det_positive(mat_mul(star(f), f), schedule, opts));
}

KernelEstimate kernel_fraction_positive(const RingMatrix& g, const std::vector<int>& schedule,
                                        const FkOptions& opts) {
  require_positive_input(g);
  KernelEstimate est;
  for (const Box& b : usable_boxes(g, schedule, opts, nullptr)) {
    const FiniteSection H = assemble(g, b.set);
    const double frac = static_cast<double>(count_kernel(H, opts)) / static_cast<double>(H.rows());
    est.fractions.emplace_back(b.n, frac);
  }
  est.limit_est = est.fractions.back().second;
  if (est.fractions.size() >= 2) est.error = std::abs(est.limit_est - est.fractions[est.fractions.size() - 2].second);
  return est;
}

KernelEstimate vn_kernel_dim(const RingMatrix& f, const std::vector<int>& schedule, const FkOptions& opts) {
  return kernel_fraction_positive(mat_mul(star(f), f), schedule, opts);
}

std::vector<std::pair<double, double>> epsilon_sweep(const RingMatrix& g, const std::vector<double>& eps,
                                                     const std::vector<int>& schedule, const FkOptions& opts) {
  require_positive_input(g);
  check_eps(eps);
  FkOptions inner = opts;
  inner.eps_fallback.clear();
  std::vector<std::pair<double, double>> out;
  for (double e : eps) {
    const RingMatrix ge = g.shifted(Coeff::rational(Rational(e)));
    out.emplace_back(e, fk_det_positive(ge, schedule, inner).value);
  }
  return out;
}

TailDiagnostic tail_diagnostic(const RingMatrix& g, double lambda, const std::vector<int>& schedule,
                               const FkOptions& opts) {
  require_positive_input(g);
  if (!(lambda > 1.0)) throw InvalidArgument("tail_diagnostic: lambda must exceed 1");
  TailDiagnostic diag;
  diag.lambda = lambda;
  std::vector<std::pair<int, SpectralSummary>> spectra;
  for (const Box& b : usable_boxes(g, schedule, opts, nullptr)) {
    spectra.emplace_back(b.n, eigs_sym(assemble(g, b.set)));
  }
  const double top = spectra.back().second.eigenvalues.back();
  const double scale = std::min(1.0, top);
  if (!(scale > 0.0)) {
    diag.message = "operator is zero at the largest box";
    return diag;
  }
  auto ratio = [](const SpectralSummary& s, double kappa) {
    const TruncatedProduct p = truncated_log_product(s, kappa);
    return std::exp(-p.log_product / static_cast<double>(s.folner_size));
  };
  const std::size_t m = spectra.size();
  const std::size_t first_checked = m >= 2 ? m - 2 : 0;
  for (int j = 1; j <= 20; ++j) {
    const double kappa = std::ldexp(scale, -j);
    bool ok = true;
    for (std::size_t i = first_checked; i < m; ++i) ok = ok && ratio(spectra[i].second, kappa) <= lambda;
    if (!ok) continue;
    diag.found = true;
    diag.kappa = kappa;
    for (const auto& [n, s] : spectra) diag.ratios.emplace_back(n, ratio(s, kappa));
    diag.message = "kappa " + std::to_string(kappa) + " keeps the tail ratio <= " + std::to_string(lambda);
    return diag;
  }
  diag.message = "no kappa on the grid keeps the tail ratio below lambda at the largest boxes";
  return diag;
}

}  // namespace fkdet
