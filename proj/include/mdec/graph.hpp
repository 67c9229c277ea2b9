#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mdec {

using Vertex = std::int32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable simple undirected graph on the dense ids 0..n-1.
///
/// Adjacency is stored in compressed-row form with every row sorted
/// ascending, so iteration order is deterministic everywhere downstream.
class Graph {
public:
    Graph() = default;

    std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }

    /// Sorted neighbours of `v`. Throws InputError when `v` is out of range.
    std::span<const Vertex> neighbors(Vertex v) const;
    std::size_t degree(Vertex v) const { return neighbors(v).size(); }
    bool adjacent(Vertex u, Vertex v) const;

    /// Every edge once, as (u, v) with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    bool operator==(const Graph&) const = default;

private:
    friend Graph build_graph(std::size_t n, std::span<const Edge> edges);

    std::vector<std::size_t> offsets_;
    std::vector<Vertex> targets_;
};

/// Builds a graph, collapsing duplicate pairs and normalising pair order.
/// Throws InputError on an out-of-range endpoint or a self-loop.
Graph build_graph(std::size_t n, std::span<const Edge> edges);

inline Graph build_graph(std::size_t n, std::initializer_list<Edge> edges)
{
    return build_graph(n, std::span<const Edge>(edges.begin(), edges.size()));
}

std::span<const Vertex> neighbors(const Graph& g, Vertex v);

/// Subset of 0..universe_size-1 with O(1) membership and ascending iteration.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t universe_size) : mask_(universe_size, false) {}
    VertexSet(std::size_t universe_size, std::span<const Vertex> members);
    VertexSet(std::size_t universe_size, std::initializer_list<Vertex> members)
        : VertexSet(universe_size, std::span<const Vertex>(members.begin(), members.size()))
    {
    }

    static VertexSet all(std::size_t universe_size);

    bool contains(Vertex v) const noexcept
    {
        return v >= 0 && static_cast<std::size_t>(v) < mask_.size() && mask_[v];
    }
    void insert(Vertex v);

    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    std::size_t universe_size() const noexcept { return mask_.size(); }
    Vertex min() const { return members_.front(); }

    std::span<const Vertex> members() const noexcept { return members_; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    bool operator==(const VertexSet& other) const noexcept { return members_ == other.members_; }

private:
    std::vector<bool> mask_;
    std::vector<Vertex> members_;
};

/// Components of G[s], each sorted, the list ordered by smallest member.
std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& s);

/// Components of the complement of G[s], same ordering convention.
std::vector<VertexSet> co_components(const Graph& g, const VertexSet& s);

struct InducedSubgraph {
    Graph graph;
    std::vector<Vertex> to_parent;  ///< local id -> id in the source graph
    std::vector<Vertex> to_local;   ///< source id -> local id, or -1
};

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s);

} // namespace mdec
