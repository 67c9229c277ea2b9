#pragma once

#include "mdec/graph.hpp"
#include "mdec/md_tree.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdec {

/// Direction of a split, and the mark it leaves on the nodes it touches.
enum class Direction : std::uint8_t { left = 1, right = 2 };

/// Which side of the pivot a vertex sits on in the current ordered forest.
enum class Side : std::int8_t { none = -1, left = 0, pivot = 1, right = 2 };

struct ForestNode {
    NodeKind kind = NodeKind::leaf;
    Vertex vertex = -1;
    NodeId parent = no_node;
    NodeId first_child = no_node;
    NodeId last_child = no_node;
    NodeId prev = no_node;  ///< previous sibling, or previous root
    NodeId next = no_node;  ///< next sibling, or next root
    std::int32_t child_count = 0;
    std::uint8_t marks = 0;            ///< Direction bits
    std::uint8_t children_marked = 0;  ///< prime only: kinds already pushed to every child
    bool in_roots = false;

    // Refinement scratch, always reset before refine_with_set returns.
    bool full = false;
    std::int32_t full_children = 0;
    std::int32_t group = -1;

    bool has_mark(Direction d) const noexcept { return (marks & static_cast<std::uint8_t>(d)) != 0; }
};

/// Instrumentation for the marking budgets of refinement.
struct RefineCounters {
    std::size_t refine_calls = 0;   ///< refine_with_set invocations
    std::size_t mark_ops = 0;       ///< (node, direction) mark bits newly set
    std::size_t nodes_created = 0;  ///< internal nodes allocated by splits
};

/// Ordered list of trees over an arena of nodes.
///
/// Leaves for every vertex are preallocated as nodes 0..n-1. Trees outside
/// the root list ("detached" trees) may live in the same arena; the
/// decomposer keeps each finished stage result detached until its parent
/// stage places it in the list.
class OrderedForest {
public:
    explicit OrderedForest(std::size_t vertex_count);

    std::size_t vertex_count() const noexcept { return side_.size(); }
    std::size_t arena_size() const noexcept { return nodes_.size(); }
    const ForestNode& node(NodeId id) const { return nodes_.at(id); }
    NodeId leaf(Vertex v) const noexcept { return v; }

    // -- construction -------------------------------------------------------
    /// New internal node adopting `children`, which must be detached trees.
    NodeId make_node(NodeKind kind, std::span<const NodeId> children);
    /// Copies `t` into the arena as a detached tree and returns its root.
    NodeId import_tree(const MDTree& t);

    // -- root list ----------------------------------------------------------
    void clear_roots() noexcept;
    /// Appends a detached tree and records `side` for each of its leaves.
    void push_root(NodeId tree, Side side);
    void unlink_root(NodeId r);
    NodeId first_root() const noexcept { return head_; }
    std::vector<NodeId> roots() const;
    Side side(Vertex v) const { return side_.at(v); }

    // -- child lists --------------------------------------------------------
    void append_child(NodeId parent, NodeId child);
    void prepend_child(NodeId parent, NodeId child);
    void unlink_child(NodeId child);
    /// Replaces `child` in its parent's list by the children of `child`.
    void dissolve_into_parent(NodeId child);
    std::vector<NodeId> children(NodeId id) const;

    std::vector<Vertex> leaves(NodeId tree) const;
    /// Leaves of the root list read left to right.
    std::vector<Vertex> leaf_order() const;
    std::size_t tree_size(NodeId tree) const;

    // -- the two tree-refinement passes -------------------------------------
    /// Splits the trees by the vertex set `set`.
    ///
    /// Trees left of the pivot are split and marked in `left_trees`
    /// direction, trees right of it in `right_trees` direction. Vertices on
    /// the pivot side are ignored. One call counts as one refinement step.
    void refine_with_set(std::span<const Vertex> set, Direction left_trees, Direction right_trees);
    /// Single-direction convenience form.
    void refine_with_set(std::span<const Vertex> set, Direction d) { refine_with_set(set, d, d); }

    /// Hoists marked subtrees out of marked roots (left marks before the
    /// root, right marks after it), drops emptied or single-child marked
    /// roots, then clears every mark.
    void promote();

    const RefineCounters& counters() const noexcept { return counters_; }
    void reset_counters() noexcept { counters_ = {}; }

    /// Trees in list order, children in forest order, marks as ^L / ^R / ^LR.
    std::string render() const;
    std::string render_tree(NodeId tree) const;

    /// Exports a detached or rooted tree as an MDTree.
    MDTree export_tree(NodeId tree) const;

private:
    NodeId allocate(NodeKind kind);
    void insert_child_before(NodeId parent, NodeId child, NodeId ref);
    void insert_child_after(NodeId parent, NodeId child, NodeId ref);
    void insert_root_before(NodeId r, NodeId ref);
    void insert_root_after(NodeId r, NodeId ref);
    /// `replacement` (detached) takes the exact position of `old`.
    void replace(NodeId old, NodeId replacement);
    void mark_up(NodeId id, Direction d);
    /// Marks every child of prime node `id`, once per direction.
    void mark_children(NodeId id, Direction d);
    void set_mark(NodeId id, Direction d);
    void promote_from(NodeId root, Direction d);

    std::vector<ForestNode> nodes_;
    std::vector<Side> side_;
    NodeId head_ = no_node;
    NodeId tail_ = no_node;
    RefineCounters counters_;

    struct Group {
        NodeId parent;
        Side side;
        std::vector<NodeId> members;
    };
    std::vector<NodeId> full_scratch_;
    std::vector<Side> full_side_;
    std::vector<NodeId> count_scratch_;
    std::vector<Group> groups_;
};

} // namespace mdec
