#include "fkdet/groups.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fkdet/errors.hpp"

namespace fkdet {

GroupElement::GroupElement(std::initializer_list<std::int64_t> coords)
    : GroupElement(std::span<const std::int64_t>(coords.begin(), coords.size())) {}

GroupElement::GroupElement(std::span<const std::int64_t> coords) {
  if (coords.size() > kMaxArity) {
    throw InvalidArgument("group element arity exceeds " + std::to_string(kMaxArity));
  }
  size_ = static_cast<std::uint8_t>(coords.size());
  std::copy(coords.begin(), coords.end(), c_.begin());
}

GroupElement GroupElement::zeros(std::size_t arity) {
  if (arity > kMaxArity) {
    throw InvalidArgument("group element arity exceeds " + std::to_string(kMaxArity));
  }
  GroupElement e;
  e.size_ = static_cast<std::uint8_t>(arity);
  return e;
}

std::string GroupElement::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < size_; ++i) {
    if (i) out += ',';
    out += std::to_string(c_[i]);
  }
  return out + ")";
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  // FNV-1a over the coordinates.
  std::uint64_t h = 1469598103934665603ull ^ g.arity();
  for (std::int64_t c : g.coords()) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

std::int64_t Cocycle::exponent(const GroupElement& s, const GroupElement& t) {
  if (s.arity() != 2 || t.arity() != 2) {
    throw InvalidArgument("cocycle is defined on Z^2 only");
  }
  return s[0] * t[1] - s[1] * t[0];
}

std::complex<double> Cocycle::operator()(const GroupElement& s, const GroupElement& t) const {
  const std::int64_t k = exponent(s, t);
  if (k == 0) return {1.0, 0.0};
  // angle is odd in k, so alpha(t, s) is the exact conjugate of alpha(s, t)
  const double angle = (2.0 * std::numbers::pi * theta) * static_cast<double>(k);
  return {std::cos(angle), std::sin(angle)};
}

GroupDescriptor GroupDescriptor::lattice(std::size_t rank, std::optional<Cocycle> twist) {
  if (rank < 1 || rank > kMaxArity) {
    throw InvalidArgument("lattice rank must be in [1, " + std::to_string(kMaxArity) + "]");
  }
  if (twist && rank != 2) {
    throw InvalidArgument("a cocycle twist is only supported on Z^2");
  }
  GroupDescriptor g;
  g.kind_ = GroupKind::IntegerLattice;
  g.rank_ = rank;
  g.twist_ = twist;
  return g;
}

GroupDescriptor GroupDescriptor::finite(std::vector<std::int64_t> moduli) {
  if (moduli.empty() || moduli.size() > kMaxArity) {
    throw InvalidArgument("finite group needs between 1 and " + std::to_string(kMaxArity) +
                          " cyclic factors");
  }
  for (std::int64_t n : moduli) {
    if (n < 1) throw InvalidArgument("cyclic modulus must be >= 1");
  }
  GroupDescriptor g;
  g.kind_ = GroupKind::FiniteCyclicProduct;
  g.rank_ = moduli.size();
  g.moduli_ = std::move(moduli);
  return g;
}

GroupDescriptor GroupDescriptor::heisenberg() {
  GroupDescriptor g;
  g.kind_ = GroupKind::Heisenberg3;
  g.rank_ = 3;
  return g;
}

std::size_t GroupDescriptor::arity() const noexcept { return rank_; }

std::size_t GroupDescriptor::order() const {
  if (!is_finite()) throw InvalidArgument("order() of an infinite group");
  std::size_t n = 1;
  for (std::int64_t m : moduli_) n *= static_cast<std::size_t>(m);
  return n;
}

GroupElement GroupDescriptor::generator(std::size_t i) const {
  if (i >= arity()) {
    throw InvalidArgument("generator index " + std::to_string(i) + " out of range");
  }
  GroupElement g = identity();
  g[i] = 1;
  return element(g.coords());
}

GroupElement GroupDescriptor::element(std::span<const std::int64_t> coords) const {
  if (coords.size() != arity()) {
    throw InvalidArgument("coordinate arity " + std::to_string(coords.size()) +
                          " does not match group arity " + std::to_string(arity()));
  }
  GroupElement g(coords);
  if (is_finite()) {
    for (std::size_t i = 0; i < rank_; ++i) {
      const std::int64_t m = moduli_[i];
      g[i] = ((g[i] % m) + m) % m;
    }
  }
  return g;
}

GroupElement GroupDescriptor::element(std::initializer_list<std::int64_t> coords) const {
  return element(std::span<const std::int64_t>(coords.begin(), coords.size()));
}

void GroupDescriptor::check_arity(const GroupElement& a) const {
  if (a.arity() != arity()) {
    throw InvalidArgument("element " + a.to_string() + " has wrong arity for group " +
                          to_string());
  }
}

GroupElement GroupDescriptor::mul(const GroupElement& a, const GroupElement& b) const {
  check_arity(a);
  check_arity(b);
  GroupElement r = GroupElement::zeros(arity());
  switch (kind_) {
    case GroupKind::IntegerLattice:
      for (std::size_t i = 0; i < rank_; ++i) r[i] = a[i] + b[i];
      break;
    case GroupKind::FiniteCyclicProduct:
      for (std::size_t i = 0; i < rank_; ++i) r[i] = (a[i] + b[i]) % moduli_[i];
      break;
    case GroupKind::Heisenberg3:
      r[0] = a[0] + b[0];
      r[1] = a[1] + b[1];
      r[2] = a[2] + b[2] + a[0] * b[1];
      break;
  }
  return r;
}

GroupElement GroupDescriptor::inv(const GroupElement& a) const {
  check_arity(a);
  GroupElement r = GroupElement::zeros(arity());
  switch (kind_) {
    case GroupKind::IntegerLattice:
      for (std::size_t i = 0; i < rank_; ++i) r[i] = -a[i];
      break;
    case GroupKind::FiniteCyclicProduct:
      for (std::size_t i = 0; i < rank_; ++i) r[i] = (moduli_[i] - a[i]) % moduli_[i];
      break;
    case GroupKind::Heisenberg3:
      r[0] = -a[0];
      r[1] = -a[1];
      r[2] = a[0] * a[1] - a[2];
      break;
  }
  return r;
}

GroupElement GroupDescriptor::pow(const GroupElement& a, std::int64_t k) const {
  GroupElement base = k < 0 ? inv(a) : a;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
  GroupElement r = identity();
  while (e) {
    if (e & 1u) r = mul(r, base);
    base = mul(base, base);
    e >>= 1u;
  }
  return r;
}

std::complex<double> GroupDescriptor::cocycle(const GroupElement& s, const GroupElement& t) const {
  if (!twist_) return {1.0, 0.0};
  return (*twist_)(s, t);
}

std::string GroupDescriptor::to_string() const {
  std::string out;
  switch (kind_) {
    case GroupKind::IntegerLattice:
      out = rank_ == 1 ? "Z" : "Z^" + std::to_string(rank_);
      break;
    case GroupKind::FiniteCyclicProduct:
      for (std::size_t i = 0; i < moduli_.size(); ++i) {
        if (i) out += " x ";
        out += "Z/" + std::to_string(moduli_[i]);
      }
      break;
    case GroupKind::Heisenberg3:
      out = "H3";
      break;
  }
  if (twist_) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, twist_->theta);
    out += " theta=" + std::string(buf, res.ptr);
  }
  return out;
}

namespace {

class GroupLexer {
 public:
  explicit GroupLexer(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_word(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  std::int64_t integer() {
    skip_ws();
    std::int64_t v = 0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) throw ParseError("expected integer in group description", pos_);
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return v;
  }
  double real() {
    skip_ws();
    double v = 0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) throw ParseError("expected number after theta=", pos_);
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return v;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupDescriptor parse_group(std::string_view text) {
  GroupLexer lex(text);
  enum { Lattice, Finite, Heis } kind;
  std::size_t rank = 1;
  std::vector<std::int64_t> moduli;

  if (lex.accept_word("H3")) {
    kind = Heis;
  } else if (lex.accept('Z')) {
    if (lex.accept('/')) {
      kind = Finite;
      moduli.push_back(lex.integer());
      while (lex.accept('x')) {
        if (!lex.accept('Z') || !lex.accept('/')) {
          throw ParseError("expected Z/<n> after 'x'", lex.pos());
        }
        moduli.push_back(lex.integer());
      }
    } else {
      kind = Lattice;
      if (lex.accept('^')) {
        const std::int64_t d = lex.integer();
        if (d < 1) throw ParseError("lattice rank must be positive", lex.pos());
        rank = static_cast<std::size_t>(d);
      }
    }
  } else {
    throw ParseError("expected Z, Z^d, Z/n or H3", lex.pos());
  }

  std::optional<Cocycle> twist;
  lex.accept(',');
  lex.accept(';');
  if (lex.accept_word("theta")) {
    if (!lex.accept('=')) throw ParseError("expected '=' after theta", lex.pos());
    twist = Cocycle{lex.real()};
  }
  if (!lex.done()) throw ParseError("trailing characters in group description", lex.pos());

  try {
    switch (kind) {
      case Lattice:
        return GroupDescriptor::lattice(rank, twist);
      case Finite:
        if (twist) throw InvalidArgument("a cocycle twist is only supported on Z^2");
        return GroupDescriptor::finite(std::move(moduli));
      case Heis:
        if (twist) throw InvalidArgument("a cocycle twist is only supported on Z^2");
        return GroupDescriptor::heisenberg();
    }
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 0);
  }
  throw ParseError("unreachable", 0);
}

FolnerSet::FolnerSet(std::vector<GroupElement> elements, int label)
    : elements_(std::move(elements)), label_(label) {
  if (elements_.empty()) throw InvalidArgument("Folner set must be nonempty");
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (!index_.emplace(elements_[i], i).second) {
      throw InvalidArgument("duplicate element " + elements_[i].to_string() + " in finite set");
    }
  }
}

std::optional<std::size_t> FolnerSet::index_of(const GroupElement& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Lexicographic enumeration of the product of ranges [0, extent_i).
std::vector<GroupElement> enumerate_box(std::span<const std::int64_t> extents) {
  std::size_t total = 1;
  for (std::int64_t e : extents) total *= static_cast<std::size_t>(e);
  std::vector<GroupElement> out;
  out.reserve(total);
  GroupElement cur = GroupElement::zeros(extents.size());
  for (std::size_t k = 0; k < total; ++k) {
    out.push_back(cur);
    for (std::size_t i = extents.size(); i-- > 0;) {
      if (++cur[i] < extents[i]) break;
      cur[i] = 0;
    }
  }
  return out;
}

}  // namespace

FolnerSet folner_box(const GroupDescriptor& g, int n) {
  if (n < 1) throw InvalidArgument("Folner box size must be >= 1");
  std::vector<std::int64_t> extents;
  switch (g.kind()) {
    case GroupKind::IntegerLattice:
      extents.assign(g.arity(), n);
      break;
    case GroupKind::FiniteCyclicProduct:
      extents.assign(g.moduli().begin(), g.moduli().end());
      break;
    case GroupKind::Heisenberg3:
      extents = {n, n, static_cast<std::int64_t>(n) * n};
      break;
  }
  return FolnerSet(enumerate_box(extents), n);
}

double invariance_ratio(const GroupDescriptor& g, const FolnerSet& F, const FolnerSet& K) {
  std::size_t good = 0;
  for (const GroupElement& t : F.elements()) {
    const bool inside = std::all_of(K.elements().begin(), K.elements().end(),
                                    [&](const GroupElement& k) { return F.contains(g.mul(k, t)); });
    if (inside) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(F.size());
}

std::vector<int> doubling_schedule(int cap, int start) {
  if (start < 1) throw InvalidArgument("schedule start must be >= 1");
  if (cap < start) throw InvalidArgument("schedule cap below smallest box");
  std::vector<int> out;
  for (long n = start; n <= cap; n *= 2) out.push_back(static_cast<int>(n));
  if (out.back() != cap) out.push_back(cap);
  return out;
}

}  // namespace fkdet
