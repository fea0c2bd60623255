#pragma once

#include <stdexcept>
#include <string>

namespace structlim {

/// Base class for all errors raised by the library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A configured budget or size limit was exceeded (canonicalization limit,
/// lift enumeration budget, subset enumeration budget, ...).
class budget_error : public error {
public:
    explicit budget_error(const std::string& what) : error(what) {}
};

/// Malformed input: bad structure files, arity mismatches, formulas over
/// unknown symbols, interpretations whose eta is not an equivalence, ...
class validation_error : public error {
public:
    explicit validation_error(const std::string& what) : error(what) {}
};

/// Formula text that does not conform to the grammar.
class parse_error : public validation_error {
public:
    parse_error(const std::string& what, int line, int column)
        : validation_error(what + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
          line(line),
          column(column) {}

    int line;
    int column;
};

} // namespace structlim
