#pragma once

#include <string>
#include <vector>

namespace structlim {

struct Symbol {
    std::string name;
    int arity = 1;

    bool operator==(const Symbol&) const = default;
};

/// A relational signature: an ordered list of base symbols plus a count of
/// distinguished unary mark symbols named M1, M2, ... appended after the
/// base symbols. Marks carry lift colorings.
class Signature {
public:
    Signature() = default;
    Signature(std::vector<Symbol> base_symbols, int marks);

    int base_count() const { return static_cast<int>(base_.size()); }
    int marks() const { return marks_; }
    int symbol_count() const { return base_count() + marks_; }

    const std::string& name(int index) const;
    int arity(int index) const;
    bool is_mark(int index) const { return index >= base_count(); }
    /// 1-based mark number for a mark symbol index.
    int mark_number(int index) const { return index - base_count() + 1; }

    /// Index of a symbol by name (base symbols and "M<k>" marks), or -1.
    int index_of(const std::string& name) const;

    const std::vector<Symbol>& base_symbols() const { return base_; }

    /// Same base symbols but with a different number of marks.
    Signature with_marks(int marks) const { return Signature(base_, marks); }

    bool operator==(const Signature& other) const {
        return base_ == other.base_ && marks_ == other.marks_;
    }

private:
    std::vector<Symbol> base_;
    int marks_ = 0;
};

/// Canonical name of the k-th mark (1-based): "M1", "M2", ...
std::string mark_name(int k);

} // namespace structlim
