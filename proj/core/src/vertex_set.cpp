#include "structlim/vertex_set.hpp"

#include <bit>

#include "structlim/errors.hpp"

namespace structlim {

namespace {
constexpr int kWordBits = 64;
}

VertexSet::VertexSet(int universe_size)
    : n_(universe_size),
      words_(static_cast<std::size_t>((universe_size + kWordBits - 1) / kWordBits), 0) {
    if (universe_size < 0) throw validation_error("negative universe size");
}

VertexSet::VertexSet(int universe_size, const std::vector<int>& members)
    : VertexSet(universe_size) {
    for (int v : members) add(v);
}

void VertexSet::add(int v) {
    if (v < 0 || v >= n_) {
        throw validation_error("vertex " + std::to_string(v) +
                               " out of range (domain " + std::to_string(n_) + ")");
    }
    words_[static_cast<std::size_t>(v / kWordBits)] |= (std::uint64_t{1} << (v % kWordBits));
}

void VertexSet::remove(int v) {
    if (v < 0 || v >= n_) return;
    words_[static_cast<std::size_t>(v / kWordBits)] &= ~(std::uint64_t{1} << (v % kWordBits));
}

bool VertexSet::contains(int v) const {
    if (v < 0 || v >= n_) return false;
    return (words_[static_cast<std::size_t>(v / kWordBits)] >> (v % kWordBits)) & 1;
}

int VertexSet::count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
}

std::vector<int> VertexSet::members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
        std::uint64_t w = words_[wi];
        while (w) {
            int bit = std::countr_zero(w);
            out.push_back(static_cast<int>(wi) * kWordBits + bit);
            w &= w - 1;
        }
    }
    return out;
}

VertexSet VertexSet::union_with(const VertexSet& other) const {
    if (n_ != other.n_) throw validation_error("vertex sets over different domains");
    VertexSet r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | other.words_[i];
    return r;
}

VertexSet VertexSet::intersect(const VertexSet& other) const {
    if (n_ != other.n_) throw validation_error("vertex sets over different domains");
    VertexSet r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & other.words_[i];
    return r;
}

VertexSet VertexSet::minus(const VertexSet& other) const {
    if (n_ != other.n_) throw validation_error("vertex sets over different domains");
    VertexSet r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & ~other.words_[i];
    return r;
}

VertexSet VertexSet::complement() const {
    VertexSet r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
    // Clear bits beyond the universe.
    int tail = n_ % kWordBits;
    if (tail != 0 && !r.words_.empty()) {
        r.words_.back() &= (std::uint64_t{1} << tail) - 1;
    }
    return r;
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
    if (n_ != other.n_) throw validation_error("vertex sets over different domains");
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
}

} // namespace structlim
