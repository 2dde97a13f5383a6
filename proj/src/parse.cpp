#include "fkdet/parse.hpp"

#include <cctype>
#include <charconv>
#include <optional>

#include "fkdet/errors.hpp"

namespace fkdet {

namespace {

constexpr std::string_view kVariables = "xyzuv";

BigInt parse_digits(std::string_view digits) {
  // cpp_int reads a leading 0 as an octal prefix
  const std::size_t nz = digits.find_first_not_of('0');
  if (nz == std::string_view::npos) return 0;
  return BigInt(std::string(digits.substr(nz)));
}

class ExprParser {
 public:
  ExprParser(std::string_view text, const GroupDescriptor& group) : s_(text), g_(group) {}

  std::variant<RingElement, RingMatrix> parse_any() {
    skip_ws();
    if (peek() == '[') {
      RingMatrix m = matrix();
      expect_end();
      return m;
    }
    RingElement e = expr();
    expect_end();
    return e;
  }

 private:
  // A factor value: either a group word (a basis element with coefficient 1)
  // or a general ring element.
  struct Value {
    RingElement elem;
    std::optional<GroupElement> word;
  };

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  void expect_end() {
    if (peek() != '\0') fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
  }

  RingMatrix matrix() {
    expect('[');
    std::vector<std::vector<RingElement>> rows;
    if (peek() == '[') {
      do {
        expect('[');
        rows.push_back(row_entries());
        expect(']');
      } while (accept(','));
    } else {
      rows.push_back(row_entries());
    }
    expect(']');
    const std::size_t cols = rows.front().size();
    std::vector<RingElement> flat;
    for (auto& r : rows) {
      if (r.size() != cols) fail("ragged matrix rows");
      for (auto& e : r) flat.push_back(std::move(e));
    }
    return RingMatrix(rows.size(), cols, std::move(flat));
  }

  std::vector<RingElement> row_entries() {
    std::vector<RingElement> out;
    out.push_back(expr());
    while (accept(',')) out.push_back(expr());
    return out;
  }

  RingElement expr() {
    RingElement acc(g_);
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    RingElement t = term();
    acc += negative ? -t : t;
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  RingElement term() {
    std::vector<Value> factors;
    factors.push_back(factor());
    for (;;) {
      if (accept('*')) {
        Value v = factor();
        if (v.word && factors.back().word) {
          factors.back().word = g_.mul(*factors.back().word, *v.word);
          factors.back().elem = RingElement::monomial(g_, *factors.back().word, Coeff(1));
        } else {
          factors.push_back(std::move(v));
        }
      } else if (peek() == '/' ) {
        const std::size_t at = pos_;
        ++pos_;
        Value v = factor();
        Value inv = invert(v, at);
        if (inv.word && factors.back().word) {
          factors.back().word = g_.mul(*factors.back().word, *inv.word);
          factors.back().elem = RingElement::monomial(g_, *factors.back().word, Coeff(1));
        } else {
          factors.push_back(std::move(inv));
        }
      } else {
        break;
      }
    }
    RingElement acc = factors.front().elem;
    for (std::size_t k = 1; k < factors.size(); ++k) acc = convolve(acc, factors[k].elem);
    return acc;
  }

  Value invert(const Value& v, std::size_t at) {
    if (v.word) {
      const GroupElement w = g_.inv(*v.word);
      return {RingElement::monomial(g_, w, Coeff(1)), w};
    }
    if (v.elem.support_size() != 1) {
      throw ParseError("division is only defined by a number or a monomial", at);
    }
    const auto& [s, c] = *v.elem.terms().begin();
    Coeff cinv;
    if (c.is_exact()) {
      cinv = Coeff::rational(Rational(1) / c.exact());
    } else {
      cinv = Coeff::complex(1.0 / c.to_complex());
    }
    const GroupElement si = g_.inv(s);
    // inverse of c delta_s in the twisted ring: c^-1 conj(alpha(s, s^-1)) delta_{s^-1}
    cinv = cinv.times_phase(std::conj(g_.cocycle(s, si)));
    return {RingElement::monomial(g_, si, cinv), std::nullopt};
  }

  Value factor() {
    Value base = primary();
    if (!accept('^')) return base;
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    skip_ws();
    std::int64_t k = 0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), k);
    if (res.ec != std::errc()) fail("expected integer exponent");
    const std::size_t at = pos_;
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    if (base.word) {
      const GroupElement w = g_.pow(*base.word, negative ? -k : k);
      return {RingElement::monomial(g_, w, Coeff(1)), w};
    }
    if (negative) base = invert(base, at);
    RingElement acc = RingElement::one(g_);
    for (std::int64_t i = 0; i < k; ++i) acc = convolve(acc, base.elem);
    return {acc, std::nullopt};
  }

  Value primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      RingElement e = expr();
      expect(')');
      return {e, std::nullopt};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == 'i') {
      ++pos_;
      return {RingElement::constant(g_, Coeff::complex({0.0, 1.0})), std::nullopt};
    }
    const std::size_t idx = kVariables.find(c);
    if (c != '\0' && idx != std::string_view::npos) {
      if (idx >= g_.generator_count()) {
        fail(std::string("unknown variable '") + c + "' for group " + g_.to_string());
      }
      ++pos_;
      const GroupElement w = g_.generator(idx);
      return {RingElement::monomial(g_, w, Coeff(1)), w};
    }
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Value number() {
    std::string digits;
    std::int64_t frac_digits = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        digits += s_[pos_++];
        ++frac_digits;
      }
    }
    if (digits.empty()) fail("malformed number");
    std::int64_t exponent = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        const char* first = s_.data() + pos_ + 1;
        if (*first == '+') ++first;
        auto res = std::from_chars(first, s_.data() + s_.size(), exponent);
        if (res.ec != std::errc()) throw ParseError("malformed exponent", pos_);
        pos_ = static_cast<std::size_t>(res.ptr - s_.data());
      }
    }
    Rational q(parse_digits(digits));
    const std::int64_t e10 = exponent - frac_digits;
    if (e10 != 0) {
      const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(e10 < 0 ? -e10 : e10));
      q = e10 > 0 ? q * Rational(scale) : q / Rational(scale);
    }
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      return {RingElement::constant(g_, Coeff::complex({0.0, q.convert_to<double>()})), std::nullopt};
    }
    const Coeff c = boost::multiprecision::denominator(q) != 1
                        ? Coeff::rational(q)
                        : Coeff::integer(boost::multiprecision::numerator(q));
    return {RingElement::constant(g_, c), std::nullopt};
  }

  std::string_view s_;
  const GroupDescriptor& g_;
  std::size_t pos_ = 0;
};

std::string power(char var, std::int64_t k) {
  std::string s(1, var);
  if (k != 1) s += "^" + std::to_string(k);
  return s;
}

}  // namespace

RingElement parse_ring_element(std::string_view text, const GroupDescriptor& group) {
  auto v = ExprParser(text, group).parse_any();
  if (auto* e = std::get_if<RingElement>(&v)) return *e;
  const RingMatrix& m = std::get<RingMatrix>(v);
  if (m.rows() == 1 && m.cols() == 1) return m.at(0, 0);
  throw ParseError("expected a ring element, got a " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + " matrix",
                   0);
}

RingMatrix parse_ring_matrix(std::string_view text, const GroupDescriptor& group) {
  auto v = ExprParser(text, group).parse_any();
  if (auto* m = std::get_if<RingMatrix>(&v)) return *m;
  return RingMatrix(std::get<RingElement>(v));
}

std::variant<RingElement, RingMatrix> parse_ring_expr(std::string_view text,
                                                      const GroupDescriptor& group) {
  return ExprParser(text, group).parse_any();
}

std::string monomial_string(const GroupDescriptor& group, const GroupElement& s) {
  std::vector<std::int64_t> exps(s.coords().begin(), s.coords().end());
  if (group.kind() == GroupKind::Heisenberg3) {
    // (a, b, c) = x^a y^b z^(c - ab)
    exps[2] = s[2] - s[0] * s[1];
  }
  std::string out;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += power(kVariables[i], exps[i]);
  }
  return out;
}

std::string to_string(const RingElement& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : a.terms()) {
    const std::string mono = monomial_string(a.group(), s);
    std::string body;
    bool negative = false;
    if (c.is_exact()) {
      negative = c.exact() < 0;
      const Coeff mag = negative ? -c : c;
      if (mono.empty()) {
        body = mag.to_string();
      } else if (mag.exact() == 1) {
        body = mono;
      } else {
        body = mag.to_string() + "*" + mono;
      }
    } else {
      body = c.to_string();
      if (!mono.empty()) body += "*" + mono;
    }
    if (first) {
      out = negative ? "-" + body : body;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
    first = false;
  }
  return out;
}

std::string to_string(const RingMatrix& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < f.rows(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (std::size_t j = 0; j < f.cols(); ++j) {
      if (j) out += ", ";
      out += to_string(f.at(i, j));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace fkdet
