#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fkdet/fk.hpp"

namespace fkdet {

/// Finite free complex of row modules, boundary j given by x -> x f_j with
/// f_j of shape d_j x d_{j-1}. boundaries[0] is f_1.
struct ChainComplex {
  GroupDescriptor group = GroupDescriptor::lattice(1);
  std::vector<RingMatrix> boundaries;

  std::size_t length() const noexcept { return boundaries.size(); }
  /// d_0 .. d_k.
  std::vector<std::size_t> ranks() const;
  /// The Laplacian f_{j+1}* f_{j+1} + f_j f_j* on level j (0 <= j <= k).
  RingMatrix laplacian(std::size_t j) const;
};

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

struct ComplexCheck {
  long euler = 0;
  bool chain_ok = false;
  std::vector<std::size_t> failing;  // j with f_j f_{j-1} != 0
};

/// Throws InvalidArgument when shapes do not chain.
ComplexCheck validate_complex(const ChainComplex& C);

struct LevelAcyclicity {
  std::size_t level = 0;
  KernelEstimate kernel;
  bool injective = false;
};

struct AcyclicityReport {
  std::vector<LevelAcyclicity> levels;
  bool weakly_acyclic = false;
};

/// Kernel fractions of the Laplacian sections; level j passes when its
/// limit estimate is at most `threshold`.
AcyclicityReport weak_acyclicity(const ChainComplex& C, const std::vector<int>& schedule,
                                 const FkOptions& opts = {}, double threshold = 0.02);

enum class TorsionMethod { Pseudo, Laplacian, Both };
TorsionMethod parse_torsion_method(std::string_view s);
const char* to_string(TorsionMethod m);

struct LevelDeterminant {
  std::size_t level = 0;
  double log_det = 0.0;        // log det of the level operator
  double error = 0.0;          // |v_last - v_prev| of its trace
  std::string method;          // "f*f", "ff*" (adjoint side), "kernel_cut", "laplacian"
  double kernel_fraction = 0.0;
  bool converged = false;
};

struct TorsionReport {
  TorsionMethod method = TorsionMethod::Both;
  double rho = 0.0;            // primary route value
  double rho_error = 0.0;      // half-width of the interval
  std::vector<LevelDeterminant> per_level;  // pseudo route, j = 1..k
  std::optional<double> laplacian_rho;
  double laplacian_error = 0.0;
  std::vector<LevelDeterminant> laplacian_levels;  // i = 0..k
  std::optional<double> discrepancy;  // |pseudo - laplacian| when both ran
  bool kernel_cut_used = false;
  std::vector<std::string> flags;
};

TorsionReport l2_torsion(const ChainComplex& C, const std::vector<int>& schedule, const FkOptions& opts = {},
                         TorsionMethod method = TorsionMethod::Both);

/// Text format:
///   group = Z^2
///   boundary 1 = [[x-1],[y-1]]
///   boundary 2 = [y-1, -(x-1)]
/// A matrix may continue over following lines until its brackets balance;
/// '#' starts a comment.
ChainComplex parse_complex(std::string_view text);
ChainComplex read_complex_file(const std::filesystem::path& path);

}  // namespace fkdet
