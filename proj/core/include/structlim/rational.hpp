#pragma once

#include <gmpxx.h>

#include <string>

#include "structlim/errors.hpp"

namespace structlim {

/// All pairings, measures and distances are exact rationals so that tests
/// can assert equality instead of tolerances.
using Rational = mpq_class;
using Integer = mpz_class;

/// Renders a rational as "p/q" ("p" when the denominator is 1).
std::string rational_to_string(const Rational& q);

/// Parses "p/q", "p", or a decimal like "0.25". Throws validation_error on
/// malformed input or a zero denominator.
Rational rational_from_string(const std::string& text);

double rational_to_double(const Rational& q);

/// n^k as an exact integer, k >= 0.
Integer integer_pow(unsigned long base, unsigned long exp);

} // namespace structlim
