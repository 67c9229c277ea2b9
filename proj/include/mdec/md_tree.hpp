#pragma once

#include "mdec/graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdec {

enum class NodeKind : std::uint8_t { leaf, series, parallel, prime };

std::string_view to_string(NodeKind kind);

using NodeId = std::int32_t;
inline constexpr NodeId no_node = -1;

struct MDNode {
    NodeKind kind = NodeKind::leaf;
    Vertex vertex = -1;  ///< only meaningful for leaves
    std::vector<NodeId> children;
    // Descendant leaves occupy [span_begin, span_end) of MDTree::leaf_order().
    std::size_t span_begin = 0;
    std::size_t span_end = 0;
};

/// Rooted tree whose leaves are graph vertices and whose internal nodes are
/// labelled series, parallel or prime.
///
/// Nodes live in an arena addressed by NodeId. The constructor checks that
/// the node references form a tree and caches each node's leaf span as a
/// contiguous range of a single depth-first leaf order.
class MDTree {
public:
    MDTree() = default;
    MDTree(std::vector<MDNode> nodes, NodeId root);

    /// Reads the canonical text form, e.g. "(series 0 (parallel 1 2))".
    static MDTree parse(std::string_view text);

    NodeId root() const noexcept { return root_; }
    const MDNode& node(NodeId id) const { return nodes_.at(id); }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    std::span<const Vertex> leaf_order() const noexcept { return leaf_order_; }
    std::span<const Vertex> leaves(NodeId id) const;
    std::size_t leaf_count() const noexcept { return leaf_order_.size(); }
    Vertex min_leaf(NodeId id) const { return min_leaf_.at(id); }
    NodeId parent(NodeId id) const { return parent_.at(id); }

private:
    std::vector<MDNode> nodes_;
    NodeId root_ = no_node;
    std::vector<Vertex> leaf_order_;
    std::vector<Vertex> min_leaf_;
    std::vector<NodeId> parent_;
};

/// Deterministic text: a leaf is its vertex id, an internal node is
/// "(kind c1 ... ck)" with children sorted by smallest descendant leaf.
/// Equal strings iff the trees are equal up to reordering children.
std::string canonical_serialize(const MDTree& t);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

/// Checks `t` against the definition of the modular decomposition tree of `g`.
///
/// Every internal node must span a module, children of series (parallel)
/// nodes must be pairwise joined (non-adjacent), the quotient under a prime
/// node must have no module of size 2..k-1, and the tree must be canonical
/// (internal degree >= 2, no series/series or parallel/parallel edges).
/// Throws StructuralError when the leaves do not biject with the vertices.
///
/// The prime check is exhaustive over quotient subsets up to 12 children and
/// uses pairwise module closure beyond that, which costs O(k^4).
ValidationReport validate(const MDTree& t, const Graph& g);

/// Leaf spans of all nodes, ordered by (size, smallest member).
std::vector<VertexSet> strong_modules(const MDTree& t);

/// Orders VertexSets by (size, smallest member, then lexicographically).
bool module_order_less(const VertexSet& a, const VertexSet& b);

} // namespace mdec
