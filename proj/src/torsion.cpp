#include "fkdet/torsion.hpp"

#include <cmath>

#include "fkdet/errors.hpp"

namespace fkdet {

std::vector<std::size_t> ChainComplex::ranks() const {
  std::vector<std::size_t> d;
  if (boundaries.empty()) return d;
  d.push_back(boundaries.front().cols());
  for (const RingMatrix& f : boundaries) d.push_back(f.rows());
  return d;
}

RingMatrix ChainComplex::laplacian(std::size_t j) const {
  const std::vector<std::size_t> d = ranks();
  if (j >= d.size()) throw InvalidArgument("laplacian level out of range");
  RingMatrix L(group, d[j], d[j]);
  if (j + 1 <= length()) {
    const RingMatrix& f = boundaries[j];  // f_{j+1}
    L += mat_mul(star(f), f);
  }
  if (j >= 1) {
    const RingMatrix& f = boundaries[j - 1];  // f_j
    L += mat_mul(f, star(f));
  }
  return L;
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  if (a.length() != b.length()) throw InvalidArgument("direct sum of complexes of different length");
  ChainComplex c;
  c.group = a.group;
  for (std::size_t j = 0; j < a.length(); ++j) c.boundaries.push_back(direct_sum(a.boundaries[j], b.boundaries[j]));
  return c;
}

ComplexCheck validate_complex(const ChainComplex& C) {
  if (C.boundaries.empty()) throw InvalidArgument("chain complex has no boundary maps");
  for (std::size_t j = 0; j < C.length(); ++j) {
    if (!(C.boundaries[j].group() == C.group)) {
      throw InvalidArgument("boundary " + std::to_string(j + 1) + " is over a different group");
    }
    if (j > 0 && C.boundaries[j].cols() != C.boundaries[j - 1].rows()) {
      throw InvalidArgument("boundary " + std::to_string(j + 1) + " has " + std::to_string(C.boundaries[j].cols()) +
                            " columns but boundary " + std::to_string(j) + " has " +
                            std::to_string(C.boundaries[j - 1].rows()) + " rows");
    }
  }
  ComplexCheck out;
  const std::vector<std::size_t> d = C.ranks();
  for (std::size_t j = 0; j < d.size(); ++j) out.euler += (j % 2 ? -1L : 1L) * static_cast<long>(d[j]);
  for (std::size_t j = 1; j < C.length(); ++j) {
    if (!mat_mul(C.boundaries[j], C.boundaries[j - 1]).is_zero()) out.failing.push_back(j + 1);
  }
  out.chain_ok = out.failing.empty();
  return out;
}

AcyclicityReport weak_acyclicity(const ChainComplex& C, const std::vector<int>& schedule, const FkOptions& opts,
                                 double threshold) {
  const ComplexCheck chk = validate_complex(C);
  if (!chk.chain_ok) throw InvalidArgument("boundary maps do not compose to zero");
  AcyclicityReport rep;
  rep.weakly_acyclic = true;
  for (std::size_t j = 0; j <= C.length(); ++j) {
    LevelAcyclicity lv;
    lv.level = j;
    lv.kernel = kernel_fraction_positive(C.laplacian(j), schedule, opts);
    lv.injective = lv.kernel.limit_est <= threshold;
    rep.weakly_acyclic = rep.weakly_acyclic && lv.injective;
    rep.levels.push_back(std::move(lv));
  }
  return rep;
}

TorsionMethod parse_torsion_method(std::string_view s) {
  if (s == "pseudo") return TorsionMethod::Pseudo;
  if (s == "laplacian") return TorsionMethod::Laplacian;
  if (s == "both") return TorsionMethod::Both;
  throw InvalidArgument("unknown torsion method '" + std::string(s) + "' (pseudo, laplacian, both)");
}

const char* to_string(TorsionMethod m) {
  switch (m) {
    case TorsionMethod::Pseudo:
      return "pseudo";
    case TorsionMethod::Laplacian:
      return "laplacian";
    case TorsionMethod::Both:
      return "both";
  }
  return "?";
}

namespace {

LevelDeterminant from_trace(std::size_t level, const ApproximationTrace& t, std::string method) {
  LevelDeterminant lv;
  lv.level = level;
  lv.log_det = t.value;
  lv.error = t.est_error;
  lv.method = std::move(method);
  const TracePoint& last = t.points.back();
  lv.kernel_fraction = static_cast<double>(last.kernel_dim) / static_cast<double>(last.size);
  lv.converged = t.verdict == Verdict::Converged;
  return lv;
}

// Pseudo-determinant of f* f with the count-based kernel cut.
LevelDeterminant kernel_cut(std::size_t level, const RingMatrix& f, const std::vector<int>& schedule,
                            const FkOptions& opts) {
  const RingMatrix g = mat_mul(star(f), f);
  const KernelEstimate k = kernel_fraction_positive(g, schedule, opts);
  std::vector<double> values;
  for (int n : effective_schedule(g.group(), schedule)) {
    const FolnerSet F = folner_box(g.group(), n);
    if (F.size() * g.rows() > opts.max_rows) continue;
    const SpectralSummary s = eigs_sym(assemble(g, F));
    const auto drop = static_cast<std::size_t>(std::llround(k.limit_est * static_cast<double>(s.size)));
    long double acc = 0.0L;
    for (std::size_t i = drop; i < s.size; ++i) acc += std::log(s.eigenvalues[i]);
    values.push_back(static_cast<double>(acc / static_cast<long double>(F.size())));
  }
  LevelDeterminant lv;
  lv.level = level;
  lv.method = "kernel_cut";
  lv.kernel_fraction = k.limit_est;
  lv.log_det = values.back();
  lv.error = values.size() >= 2 ? std::abs(values.back() - values[values.size() - 2]) : 0.0;
  lv.converged = g.group().is_finite() || (values.size() >= 2 && lv.error <= opts.tol);
  return lv;
}

}  // namespace

TorsionReport l2_torsion(const ChainComplex& C, const std::vector<int>& schedule, const FkOptions& opts,
                         TorsionMethod method) {
  const ComplexCheck chk = validate_complex(C);
  if (!chk.chain_ok) throw InvalidArgument("boundary maps do not compose to zero");
  TorsionReport rep;
  rep.method = method;
  const std::size_t k = C.length();

  // Laplacian route; a kernel on any level means the complex is not weakly acyclic
  double lap = 0.0;
  double lap_err = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const ApproximationTrace t = fk_det_positive(C.laplacian(i), schedule, opts);
    if (t.verdict == Verdict::KernelDetected) {
      throw NumericalError("complex is not weakly acyclic: Laplacian on level " + std::to_string(i) +
                           " has a kernel");
    }
    LevelDeterminant lv = from_trace(i, t, "laplacian");
    const double w = (i % 2 ? -1.0 : 1.0) * static_cast<double>(i);
    lap += -0.5 * w * lv.log_det;
    lap_err += 0.5 * std::abs(w) * lv.error;
    if (!lv.converged) rep.flags.push_back("laplacian level " + std::to_string(i) + " not converged");
    rep.laplacian_levels.push_back(std::move(lv));
  }
  rep.laplacian_rho = lap;
  rep.laplacian_error = lap_err;
  if (method == TorsionMethod::Laplacian) {
    rep.rho = lap;
    rep.rho_error = lap_err;
    return rep;
  }

  double rho = 0.0;
  double err = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    const RingMatrix& f = C.boundaries[j - 1];
    LevelDeterminant lv;
    ApproximationTrace t = fk_det_positive(mat_mul(star(f), f), schedule, opts);
    if (t.verdict != Verdict::KernelDetected) {
      lv = from_trace(j, t, "f*f");
    } else {
      t = fk_det_positive(mat_mul(f, star(f)), schedule, opts);
      if (t.verdict != Verdict::KernelDetected) {
        lv = from_trace(j, t, "ff*");
      } else {
        lv = kernel_cut(j, f, schedule, opts);
        rep.kernel_cut_used = true;
        rep.flags.push_back("level " + std::to_string(j) +
                            ": neither side injective, count-based kernel cut used");
      }
    }
    const double sign = j % 2 ? 1.0 : -1.0;
    rho += 0.5 * sign * lv.log_det;
    err += 0.5 * lv.error;
    if (!lv.converged) rep.flags.push_back("level " + std::to_string(j) + " not converged");
    rep.per_level.push_back(std::move(lv));
  }
  rep.rho = rho;
  rep.rho_error = err;
  rep.discrepancy = std::abs(rho - lap);
  return rep;
}

}  // namespace fkdet
