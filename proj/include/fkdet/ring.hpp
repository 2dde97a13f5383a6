#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "fkdet/coeff.hpp"
#include "fkdet/groups.hpp"

namespace fkdet {

/// Finitely supported function Gamma -> coefficients, f = sum f_s s.
/// No zero coefficient is ever stored.
class RingElement {
 public:
  using Terms = std::map<GroupElement, Coeff>;

  explicit RingElement(GroupDescriptor group, Domain domain = Domain::Integer);
  static RingElement monomial(const GroupDescriptor& group, const GroupElement& s, const Coeff& c);
  static RingElement constant(const GroupDescriptor& group, const Coeff& c);
  static RingElement one(const GroupDescriptor& group) { return constant(group, Coeff(1)); }

  const GroupDescriptor& group() const noexcept { return group_; }
  Domain domain() const noexcept { return domain_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t support_size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  Coeff coeff(const GroupElement& s) const;

  /// Adds c at s, dropping the entry if it cancels.
  void add_term(const GroupElement& s, const Coeff& c);
  /// Lifts every coefficient to at least d.
  void promote(Domain d);

  RingElement& operator+=(const RingElement& o);
  RingElement& operator-=(const RingElement& o);
  RingElement operator-() const;
  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
  RingElement scaled(const Coeff& c) const;

  bool operator==(const RingElement& o) const;

 private:
  GroupDescriptor group_;
  Domain domain_;
  Terms terms_;
};

/// (a b)_u = sum_{st = u} a_s b_t alpha(s, t). The cocycle of the group is
/// used when `twist` is not supplied.
RingElement convolve(const RingElement& a, const RingElement& b);
RingElement convolve(const RingElement& a, const RingElement& b, const std::optional<Cocycle>& twist);
inline RingElement operator*(const RingElement& a, const RingElement& b) { return convolve(a, b); }

/// (a*)_s = conj(a_{s^-1} alpha(s^-1, s)).
RingElement star(const RingElement& a);

/// Coefficient of the identity.
Coeff trace(const RingElement& a);

/// d' x d matrix of group-ring elements sharing one group and domain.
class RingMatrix {
 public:
  RingMatrix(GroupDescriptor group, std::size_t rows, std::size_t cols,
             Domain domain = Domain::Integer);
  /// Row-major entries; all must share `group`.
  RingMatrix(std::size_t rows, std::size_t cols, std::vector<RingElement> entries);
  explicit RingMatrix(const RingElement& scalar);  // 1x1
  static RingMatrix identity(const GroupDescriptor& group, std::size_t d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  const GroupDescriptor& group() const noexcept { return group_; }
  Domain domain() const noexcept { return domain_; }

  const RingElement& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, RingElement e);

  bool is_zero() const;
  bool is_star_symmetric() const;
  /// True when every coefficient is an integer (Integer or integral Rational).
  bool has_integer_coefficients() const;
  /// Union of the supports of all entries.
  std::vector<GroupElement> support() const;

  RingMatrix& operator+=(const RingMatrix& o);
  RingMatrix& operator-=(const RingMatrix& o);
  friend RingMatrix operator+(RingMatrix a, const RingMatrix& b) { return a += b; }
  friend RingMatrix operator-(RingMatrix a, const RingMatrix& b) { return a -= b; }
  RingMatrix scaled(const Coeff& c) const;
  /// f + c * identity for square f.
  RingMatrix shifted(const Coeff& c) const;

  bool operator==(const RingMatrix& o) const;

 private:
  void unify_domain();

  GroupDescriptor group_;
  std::size_t rows_;
  std::size_t cols_;
  Domain domain_;
  std::vector<RingElement> entries_;
};

RingMatrix mat_mul(const RingMatrix& f, const RingMatrix& g);
inline RingMatrix operator*(const RingMatrix& f, const RingMatrix& g) { return mat_mul(f, g); }
RingMatrix star(const RingMatrix& f);
/// sum_j (f_jj)_e for square f.
Coeff trace(const RingMatrix& f);
/// Sum of the absolute values of all coefficients; bounds the operator norm.
double l1_norm(const RingMatrix& f);
double l1_norm(const RingElement& f);
/// p(f) for p(t) = sum_k coeffs[k] t^k and square f.
RingMatrix poly_apply(const std::vector<BigInt>& coeffs, const RingMatrix& f);
/// Block-diagonal sum diag(a, b).
RingMatrix direct_sum(const RingMatrix& a, const RingMatrix& b);

}  // namespace fkdet
