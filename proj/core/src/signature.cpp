#include "structlim/signature.hpp"

#include <set>

#include "structlim/errors.hpp"

namespace structlim {

std::string mark_name(int k) { return "M" + std::to_string(k); }

namespace {

bool looks_like_mark_name(const std::string& name) {
    if (name.size() < 2 || name[0] != 'M') return false;
    for (std::size_t i = 1; i < name.size(); ++i) {
        if (name[i] < '0' || name[i] > '9') return false;
    }
    return name[1] != '0';
}

} // namespace

Signature::Signature(std::vector<Symbol> base_symbols, int marks)
    : base_(std::move(base_symbols)), marks_(marks) {
    if (marks_ < 0) throw validation_error("negative mark count");
    std::set<std::string> seen;
    for (const auto& sym : base_) {
        if (sym.name.empty()) throw validation_error("empty symbol name");
        if (sym.arity < 1) {
            throw validation_error("symbol \"" + sym.name + "\" has arity " +
                                   std::to_string(sym.arity) + ", must be >= 1");
        }
        if (!seen.insert(sym.name).second) {
            throw validation_error("duplicate symbol \"" + sym.name + "\"");
        }
        if (looks_like_mark_name(sym.name)) {
            throw validation_error("symbol \"" + sym.name +
                                   "\" collides with the reserved mark names M1, M2, ...");
        }
    }
}

const std::string& Signature::name(int index) const {
    static thread_local std::string mark_buf;
    if (index < base_count()) return base_[static_cast<std::size_t>(index)].name;
    mark_buf = mark_name(mark_number(index));
    return mark_buf;
}

int Signature::arity(int index) const {
    if (index < base_count()) return base_[static_cast<std::size_t>(index)].arity;
    return 1;
}

int Signature::index_of(const std::string& name) const {
    for (int i = 0; i < base_count(); ++i) {
        if (base_[static_cast<std::size_t>(i)].name == name) return i;
    }
    if (looks_like_mark_name(name)) {
        int k = std::stoi(name.substr(1));
        if (k >= 1 && k <= marks_) return base_count() + k - 1;
    }
    return -1;
}

} // namespace structlim
