#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fkdet {

inline constexpr std::size_t kMaxArity = 8;

/// Element of one of the supported groups, stored in canonical coordinates.
///
/// Lattice elements are integer vectors, finite-group elements are reduced
/// into [0, n_i), and Heisenberg elements (a, b, c) stand for the matrix
/// [[1, a, c], [0, 1, b], [0, 0, 1]].
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(std::initializer_list<std::int64_t> coords);
  explicit GroupElement(std::span<const std::int64_t> coords);
  static GroupElement zeros(std::size_t arity);

  std::size_t arity() const noexcept { return size_; }
  std::int64_t operator[](std::size_t i) const noexcept { return c_[i]; }
  std::int64_t& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const std::int64_t> coords() const noexcept { return {c_.data(), size_}; }

  auto operator<=>(const GroupElement&) const = default;
  bool operator==(const GroupElement&) const = default;

  std::string to_string() const;

 private:
  std::uint8_t size_ = 0;
  std::array<std::int64_t, kMaxArity> c_{};
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

/// Normalized unitary 2-cocycle on Z^2: (n, m) -> exp(2 pi i theta (n1 m2 - n2 m1)).
struct Cocycle {
  double theta = 0.0;

  /// Integer exponent n1 m2 - n2 m1 of the phase.
  static std::int64_t exponent(const GroupElement& s, const GroupElement& t);
  std::complex<double> operator()(const GroupElement& s, const GroupElement& t) const;
  bool operator==(const Cocycle&) const = default;
};

enum class GroupKind { IntegerLattice, FiniteCyclicProduct, Heisenberg3 };

class GroupDescriptor {
 public:
  static GroupDescriptor lattice(std::size_t rank, std::optional<Cocycle> twist = std::nullopt);
  static GroupDescriptor finite(std::vector<std::int64_t> moduli);
  static GroupDescriptor heisenberg();

  GroupKind kind() const noexcept { return kind_; }
  /// Number of coordinates of an element.
  std::size_t arity() const noexcept;
  /// Number of named generators (x, y, z, u, v map to 0..4).
  std::size_t generator_count() const noexcept { return arity(); }
  std::span<const std::int64_t> moduli() const noexcept { return moduli_; }
  const std::optional<Cocycle>& twist() const noexcept { return twist_; }
  bool is_finite() const noexcept { return kind_ == GroupKind::FiniteCyclicProduct; }
  /// |G| for finite groups; throws otherwise.
  std::size_t order() const;

  GroupElement identity() const { return GroupElement::zeros(arity()); }
  GroupElement generator(std::size_t i) const;
  /// Validates arity and reduces finite coordinates.
  GroupElement element(std::span<const std::int64_t> coords) const;
  GroupElement element(std::initializer_list<std::int64_t> coords) const;

  GroupElement mul(const GroupElement& a, const GroupElement& b) const;
  GroupElement inv(const GroupElement& a) const;
  GroupElement pow(const GroupElement& a, std::int64_t k) const;

  /// Twist phase alpha(s, t); exactly 1 for untwisted groups.
  std::complex<double> cocycle(const GroupElement& s, const GroupElement& t) const;

  bool operator==(const GroupDescriptor&) const = default;

  /// Canonical text form in the group grammar, e.g. "Z^2 theta=0.25".
  std::string to_string() const;

 private:
  void check_arity(const GroupElement& a) const;

  GroupKind kind_ = GroupKind::IntegerLattice;
  std::size_t rank_ = 1;
  std::vector<std::int64_t> moduli_;
  std::optional<Cocycle> twist_;
};

/// Parses `Z`, `Z^d`, `Z/n1 x Z/n2 ...`, `H3`, with optional ` theta=<float>`.
GroupDescriptor parse_group(std::string_view text);

/// Ordered duplicate-free finite subset of a group.
class FolnerSet {
 public:
  FolnerSet(std::vector<GroupElement> elements, int label = 0);

  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<GroupElement>& elements() const noexcept { return elements_; }
  const GroupElement& operator[](std::size_t i) const noexcept { return elements_[i]; }
  std::optional<std::size_t> index_of(const GroupElement& g) const;
  bool contains(const GroupElement& g) const { return index_.contains(g); }
  int label() const noexcept { return label_; }

 private:
  std::vector<GroupElement> elements_;
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index_;
  int label_;
};

/// Box {0..n-1}^d for lattices, the whole group for finite groups, and
/// {(a, b, c): 0 <= a, b < n, 0 <= c < n^2} for the Heisenberg group.
FolnerSet folner_box(const GroupDescriptor& g, int n);

/// |{t in F : K t subset of F}| / |F|.
double invariance_ratio(const GroupDescriptor& g, const FolnerSet& F, const FolnerSet& K);

/// Geometric schedule start, 2 start, ... up to cap; cap is appended when it
/// is not itself a power-of-two multiple of start.
std::vector<int> doubling_schedule(int cap, int start = 4);

}  // namespace fkdet
