#pragma once

#include <optional>
#include <string>

#include "fkdet/fk.hpp"

namespace fkdet {

enum class EntropyKind { Finite, UpperBound, Infinite };
const char* to_string(EntropyKind k);

struct EntropyResult {
  EntropyKind kind = EntropyKind::Finite;
  double value = 0.0;           // +inf for Infinite
  double error = 0.0;
  double kernel_fraction = 0.0; // at the largest box
  std::string method;           // "cokernel" (F = Gamma) or "folner"
  std::optional<ApproximationTrace> trace;
};

/// Exact cokernel count |det f_Gamma| = |Z^{d|G|} / f_Gamma Z^{d|G|}| for finite G.
struct CokernelEntropy {
  bool singular = false;
  BigInt abs_det = 0;          // |det f_Gamma|
  std::size_t group_order = 0;
  double value = 0.0;          // log(abs_det) / |G|, +inf if singular
};

CokernelEntropy entropy_finite_group_oracle(const RingMatrix& f);

/// Entropy of the principal action X_f through log det f; f needs integer
/// coefficients. Finite groups report the cokernel value, with the Folner
/// determinant at F = Gamma attached as a cross-check.
EntropyResult entropy_principal(const RingMatrix& f, const std::vector<int>& schedule,
                                const FkOptions& opts = {});

}  // namespace fkdet
