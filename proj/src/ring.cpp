#include "fkdet/ring.hpp"

#include <set>

#include "fkdet/errors.hpp"

namespace fkdet {

RingElement::RingElement(GroupDescriptor group, Domain domain)
    : group_(std::move(group)), domain_(domain) {}

RingElement RingElement::monomial(const GroupDescriptor& group, const GroupElement& s,
                                  const Coeff& c) {
  RingElement r(group, c.domain());
  r.add_term(group.element(s.coords()), c);
  return r;
}

RingElement RingElement::constant(const GroupDescriptor& group, const Coeff& c) {
  return monomial(group, group.identity(), c);
}

Coeff RingElement::coeff(const GroupElement& s) const {
  auto it = terms_.find(s);
  if (it == terms_.end()) return Coeff(0).promoted(domain_);
  return it->second;
}

void RingElement::add_term(const GroupElement& s, const Coeff& c) {
  if (s.arity() != group_.arity()) {
    throw InvalidArgument("term " + s.to_string() + " has wrong arity for " + group_.to_string());
  }
  if (c.domain() > domain_) promote(c.domain());
  auto [it, inserted] = terms_.try_emplace(s, c.promoted(domain_));
  if (!inserted) it->second += c.promoted(domain_);
  if (it->second.is_zero()) terms_.erase(it);
}

void RingElement::promote(Domain d) {
  if (d <= domain_) return;
  domain_ = d;
  for (auto& [s, c] : terms_) c = c.promoted(d);
}

RingElement& RingElement::operator+=(const RingElement& o) {
  if (!(group_ == o.group_)) throw InvalidArgument("ring elements over different groups");
  promote(o.domain_);
  for (const auto& [s, c] : o.terms_) add_term(s, c);
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& o) { return *this += -o; }

RingElement RingElement::operator-() const {
  RingElement r = *this;
  for (auto& [s, c] : r.terms_) c = -c;
  return r;
}

RingElement RingElement::scaled(const Coeff& c) const {
  RingElement r(group_, join(domain_, c.domain()));
  if (c.is_zero()) return r;
  for (const auto& [s, v] : terms_) r.add_term(s, v * c);
  return r;
}

bool RingElement::operator==(const RingElement& o) const {
  return group_ == o.group_ && domain_ == o.domain_ && terms_ == o.terms_;
}

RingElement convolve(const RingElement& a, const RingElement& b,
                     const std::optional<Cocycle>& twist) {
  if (!(a.group() == b.group())) throw InvalidArgument("convolution of elements over different groups");
  const GroupDescriptor& g = a.group();
  RingElement r(g, join(a.domain(), b.domain()));
  for (const auto& [s, x] : a.terms()) {
    for (const auto& [t, y] : b.terms()) {
      Coeff c = x * y;
      if (twist) c = c.times_phase((*twist)(s, t));
      r.add_term(g.mul(s, t), c);
    }
  }
  return r;
}

RingElement convolve(const RingElement& a, const RingElement& b) {
  return convolve(a, b, a.group().twist());
}

RingElement star(const RingElement& a) {
  const GroupDescriptor& g = a.group();
  RingElement r(g, a.domain());
  for (const auto& [s, c] : a.terms()) {
    const GroupElement si = g.inv(s);
    // (a*)_{s^-1} = conj(a_s alpha(s, s^-1)); alpha(s, s^-1) = alpha(s^-1, s)
    r.add_term(si, c.times_phase(g.cocycle(s, si)).conj());
  }
  return r;
}

Coeff trace(const RingElement& a) { return a.coeff(a.group().identity()); }

RingMatrix::RingMatrix(GroupDescriptor group, std::size_t rows, std::size_t cols, Domain domain)
    : group_(std::move(group)), rows_(rows), cols_(cols), domain_(domain) {
  if (rows == 0 || cols == 0) throw InvalidArgument("ring matrix dimensions must be >= 1");
  entries_.assign(rows * cols, RingElement(group_, domain));
}

RingMatrix::RingMatrix(std::size_t rows, std::size_t cols, std::vector<RingElement> entries)
    : group_(entries.empty() ? GroupDescriptor::lattice(1) : entries.front().group()),
      rows_(rows),
      cols_(cols),
      domain_(Domain::Integer),
      entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw InvalidArgument("ring matrix dimensions must be >= 1");
  if (entries_.size() != rows * cols) throw InvalidArgument("ring matrix entry count mismatch");
  for (const RingElement& e : entries_) {
    if (!(e.group() == group_)) throw InvalidArgument("ring matrix entries over different groups");
  }
  unify_domain();
}

RingMatrix::RingMatrix(const RingElement& scalar) : RingMatrix(1, 1, {scalar}) {}

RingMatrix RingMatrix::identity(const GroupDescriptor& group, std::size_t d) {
  RingMatrix m(group, d, d);
  for (std::size_t i = 0; i < d; ++i) m.set(i, i, RingElement::one(group));
  return m;
}

void RingMatrix::unify_domain() {
  for (const RingElement& e : entries_) domain_ = join(domain_, e.domain());
  for (RingElement& e : entries_) e.promote(domain_);
}

void RingMatrix::set(std::size_t i, std::size_t j, RingElement e) {
  if (i >= rows_ || j >= cols_) throw InvalidArgument("ring matrix index out of range");
  if (!(e.group() == group_)) throw InvalidArgument("ring matrix entry over a different group");
  entries_[i * cols_ + j] = std::move(e);
  if (entries_[i * cols_ + j].domain() != domain_) unify_domain();
}

bool RingMatrix::is_zero() const {
  for (const RingElement& e : entries_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

bool RingMatrix::is_star_symmetric() const { return is_square() && star(*this) == *this; }

bool RingMatrix::has_integer_coefficients() const {
  for (const RingElement& e : entries_) {
    for (const auto& [s, c] : e.terms()) {
      if (!c.is_exact() || boost::multiprecision::denominator(c.exact()) != 1) return false;
    }
  }
  return true;
}

std::vector<GroupElement> RingMatrix::support() const {
  std::set<GroupElement> all;
  for (const RingElement& e : entries_) {
    for (const auto& [s, c] : e.terms()) all.insert(s);
  }
  return {all.begin(), all.end()};
}

RingMatrix& RingMatrix::operator+=(const RingMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("ring matrix shape mismatch in +");
  if (!(group_ == o.group_)) throw InvalidArgument("ring matrices over different groups");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  unify_domain();
  return *this;
}

RingMatrix& RingMatrix::operator-=(const RingMatrix& o) { return *this += o.scaled(Coeff(-1)); }

RingMatrix RingMatrix::scaled(const Coeff& c) const {
  RingMatrix r = *this;
  for (RingElement& e : r.entries_) e = e.scaled(c);
  r.domain_ = join(domain_, c.domain());
  r.unify_domain();
  return r;
}

RingMatrix RingMatrix::shifted(const Coeff& c) const {
  if (!is_square()) throw InvalidArgument("shift of a non-square ring matrix");
  return *this + identity(group_, rows_).scaled(c);
}

bool RingMatrix::operator==(const RingMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && group_ == o.group_ && entries_ == o.entries_;
}

RingMatrix mat_mul(const RingMatrix& f, const RingMatrix& g) {
  if (f.cols() != g.rows()) {
    throw InvalidArgument("shape mismatch in ring matrix product: " + std::to_string(f.rows()) +
                          "x" + std::to_string(f.cols()) + " times " + std::to_string(g.rows()) +
                          "x" + std::to_string(g.cols()));
  }
  if (!(f.group() == g.group())) throw InvalidArgument("ring matrices over different groups");
  const Domain d = join(f.domain(), g.domain());
  std::vector<RingElement> out;
  out.reserve(f.rows() * g.cols());
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      RingElement acc(f.group(), d);
      for (std::size_t k = 0; k < f.cols(); ++k) acc += convolve(f.at(i, k), g.at(k, j));
      out.push_back(std::move(acc));
    }
  }
  return RingMatrix(f.rows(), g.cols(), std::move(out));
}

RingMatrix star(const RingMatrix& f) {
  std::vector<RingElement> out;
  out.reserve(f.rows() * f.cols());
  for (std::size_t i = 0; i < f.cols(); ++i) {
    for (std::size_t j = 0; j < f.rows(); ++j) out.push_back(star(f.at(j, i)));
  }
  return RingMatrix(f.cols(), f.rows(), std::move(out));
}

Coeff trace(const RingMatrix& f) {
  if (!f.is_square()) throw InvalidArgument("trace of a non-square ring matrix");
  Coeff acc = Coeff(0).promoted(f.domain());
  for (std::size_t j = 0; j < f.rows(); ++j) acc += trace(f.at(j, j));
  return acc;
}

double l1_norm(const RingElement& f) {
  double s = 0.0;
  for (const auto& [g, c] : f.terms()) s += c.abs();
  return s;
}

double l1_norm(const RingMatrix& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t j = 0; j < f.cols(); ++j) s += l1_norm(f.at(i, j));
  }
  return s;
}

RingMatrix poly_apply(const std::vector<BigInt>& coeffs, const RingMatrix& f) {
  if (!f.is_square()) throw InvalidArgument("polynomial of a non-square ring matrix");
  // Horner: p(f) = (...(c_n f + c_{n-1}) f + ...) + c_0
  const RingMatrix one = RingMatrix::identity(f.group(), f.rows());
  RingMatrix acc(f.group(), f.rows(), f.cols());
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = mat_mul(acc, f) + one.scaled(Coeff::integer(coeffs[k]));
  }
  return acc;
}

RingMatrix direct_sum(const RingMatrix& a, const RingMatrix& b) {
  if (!(a.group() == b.group())) throw InvalidArgument("direct sum over different groups");
  RingMatrix r(a.group(), a.rows() + b.rows(), a.cols() + b.cols(), join(a.domain(), b.domain()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r.set(i, j, a.at(i, j));
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) r.set(a.rows() + i, a.cols() + j, b.at(i, j));
  }
  return r;
}

}  // namespace fkdet
