#include "fkdet/entropy.hpp"

#include <cmath>

#include "fkdet/errors.hpp"

namespace fkdet {

const char* to_string(EntropyKind k) {
  switch (k) {
    case EntropyKind::Finite:
      return "finite";
    case EntropyKind::UpperBound:
      return "upper_bound";
    case EntropyKind::Infinite:
      return "infinite";
  }
  return "?";
}

CokernelEntropy entropy_finite_group_oracle(const RingMatrix& f) {
  const GroupDescriptor& g = f.group();
  if (!g.is_finite()) throw InvalidArgument("cokernel oracle needs a finite group");
  if (!f.is_square()) throw InvalidArgument("cokernel oracle needs a square matrix");
  CokernelEntropy out;
  out.group_order = g.order();
  out.abs_det = smith_abs_det(integer_section(f, folner_box(g, 1)));
  if (out.abs_det == 0) {
    out.singular = true;
    out.value = std::numeric_limits<double>::infinity();
  } else {
    out.value = log_abs(out.abs_det) / static_cast<double>(out.group_order);
  }
  return out;
}

EntropyResult entropy_principal(const RingMatrix& f, const std::vector<int>& schedule, const FkOptions& opts) {
  if (!f.has_integer_coefficients()) throw InvalidArgument("entropy needs integer coefficients");
  EntropyResult res;
  ApproximationTrace t = fk_det_general(f, schedule, opts);
  const TracePoint& last = t.points.back();
  res.kernel_fraction = static_cast<double>(last.kernel_dim) / static_cast<double>(last.size);
  res.method = "folner";
  if (t.verdict == Verdict::KernelDetected) {
    res.kind = EntropyKind::Infinite;
    res.value = std::numeric_limits<double>::infinity();
  } else {
    res.kind = f.is_square() ? EntropyKind::Finite : EntropyKind::UpperBound;
    res.value = t.value;
    res.error = t.est_error;
    if (f.group().is_finite() && f.is_square()) {
      const CokernelEntropy exact = entropy_finite_group_oracle(f);
      res.method = "cokernel";
      res.error = 0.0;
      if (exact.singular) {
        res.kind = EntropyKind::Infinite;
        res.value = std::numeric_limits<double>::infinity();
      } else {
        res.value = exact.value;
      }
    }
  }
  res.trace = std::move(t);
  return res;
}

}  // namespace fkdet
