#pragma once

#include <string>

#include "structlim/formula.hpp"

namespace structlim {

/// Parses the ASCII formula grammar:
///
///   formula := quant | iff
///   iff     := imp { "<->" imp }          (left-associative, desugared)
///   imp     := or { "->" or }             (right-associative, desugared)
///   or      := and { "|" and }
///   and     := unary { "&" unary }
///   unary   := "!" unary | atom
///   atom    := "true" | "false" | ident "(" var {"," var} ")"
///            | var "=" var | "(" formula ")"
///   quant   := ("exists"|"forall") var "." formula
///   var     := "x" digits
///
/// Whitespace-insensitive. Identifiers match [A-Za-z][A-Za-z0-9_]*; a token
/// of the shape "x<digits>" is always a variable.
///
/// Throws parse_error with line/column on malformed input.
Formula parse_formula(const std::string& text);

/// Prints a formula in the grammar above; parse_formula(render(f)) is
/// structurally equal to f.
std::string render(const Formula& f);

} // namespace structlim
