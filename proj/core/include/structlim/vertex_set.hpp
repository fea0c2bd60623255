#pragma once

#include <cstdint>
#include <vector>

namespace structlim {

/// A subset of the domain {0, ..., n-1} of a structure, stored as a bitset.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(int universe_size);
    VertexSet(int universe_size, const std::vector<int>& members);

    int universe_size() const { return n_; }

    void add(int v);
    void remove(int v);
    bool contains(int v) const;
    int count() const;
    bool empty() const { return count() == 0; }

    std::vector<int> members() const;

    VertexSet union_with(const VertexSet& other) const;
    VertexSet intersect(const VertexSet& other) const;
    VertexSet minus(const VertexSet& other) const;
    VertexSet complement() const;

    bool is_subset_of(const VertexSet& other) const;

    bool operator==(const VertexSet& other) const {
        return n_ == other.n_ && words_ == other.words_;
    }

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace structlim
