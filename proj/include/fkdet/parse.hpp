#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "fkdet/ring.hpp"

namespace fkdet {

// Expression grammar:
//
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := primary ['^' ['-'] int]
//   primary := number ['i'] | 'i' | var | '(' expr ')'
//   var     := 'x' | 'y' | 'z' | 'u' | 'v'      (generator 0..4)
//   matrix  := '[' row (',' row)* ']'  with row := '[' expr (',' expr)* ']'
//            | '[' expr (',' expr)* ']'          (a single row)
//
// A run of variable powers joined by '*' or '/' (a group word such as
// x^2*y^-1) denotes the group element itself, so monomials are basis elements
// even in a twisted group ring; other products are ring products.
// Division is only allowed by a nonzero number or a monomial. Decimal and
// p/q literals are exact; a trailing 'i' makes a literal imaginary.

RingElement parse_ring_element(std::string_view text, const GroupDescriptor& group);
/// Accepts either matrix syntax or a bare expression (read as 1x1).
RingMatrix parse_ring_matrix(std::string_view text, const GroupDescriptor& group);
std::variant<RingElement, RingMatrix> parse_ring_expr(std::string_view text,
                                                      const GroupDescriptor& group);

/// Group word for an element, "" for the identity (e.g. "x^2*y^-1").
std::string monomial_string(const GroupDescriptor& group, const GroupElement& s);
/// Canonical text; parse_ring_element(to_string(a)) == a.
std::string to_string(const RingElement& a);
std::string to_string(const RingMatrix& f);

}  // namespace fkdet
