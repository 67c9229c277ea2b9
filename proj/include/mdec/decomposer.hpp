#pragma once

#include "mdec/forest.hpp"
#include "mdec/graph.hpp"
#include "mdec/md_tree.hpp"

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mdec {

/// Pivot plus its distance layers inside one recursion universe.
struct LayerPartition {
    Vertex pivot = -1;
    std::vector<std::vector<Vertex>> layers;  ///< N_0 = N(pivot), then BFS layers; each ascending
    std::vector<Vertex> unreached;            ///< universe vertices outside the pivot's component
};

/// Plain BFS layering of `universe` from `x`. Empty trailing layers are not stored.
LayerPartition layer_partition(const Graph& g, const VertexSet& universe, Vertex x);

/// Per-vertex lists of active-edge neighbours for one stage.
///
/// An edge is active when it touches the pivot or joins two different
/// layers. The pivot's own edges appear in both endpoint lists.
class AlphaLists {
public:
    const std::vector<Vertex>& of(Vertex v) const;
    void add(Vertex v, Vertex w) { lists_[v].push_back(w); }
    /// Sorts every list ascending.
    void normalize();
    std::size_t edge_count() const;
    const std::map<Vertex, std::vector<Vertex>>& lists() const noexcept { return lists_; }
    bool operator==(const AlphaLists&) const = default;

private:
    std::map<Vertex, std::vector<Vertex>> lists_;
};

/// Active edges by definition, for checking the pipeline's incremental lists.
AlphaLists compute_alpha_lists(const LayerPartition& lp, const Graph& g);

/// Signed position on the sequence axis: C_i sits at -i, the pivot at 0, C'_j at +j.
class MuPosition {
public:
    constexpr MuPosition() = default;
    static constexpr MuPosition pivot() { return MuPosition(0); }
    static constexpr MuPosition left(int i) { return MuPosition(-i); }
    static constexpr MuPosition right(int j) { return MuPosition(j); }
    constexpr int value() const noexcept { return value_; }
    constexpr auto operator<=>(const MuPosition&) const = default;

private:
    constexpr explicit MuPosition(int v) : value_(v) {}
    int value_ = 0;
};

std::string to_string(MuPosition p);

/// One (co-)component of the stage sequence.
struct CoComponent {
    std::vector<Vertex> members;  ///< ascending
    int layer = 0;                ///< 0 for co-components of N_0
    MuPosition mu;
    bool right_edge = false;      ///< a member has an active edge into a strictly later layer
    std::vector<MDTree> trees;    ///< promoted trees left to right; only the standalone assemble() reads them
};

/// C_kappa .. C_1, x, C'_1 .. C'_lambda as left to right layout.
struct CoComponentSequence {
    Vertex pivot = -1;
    std::vector<CoComponent> left;   ///< left[i-1] is C_i (nearest the pivot first)
    std::vector<CoComponent> right;  ///< right[j-1] is C'_j
};

/// Fills mu and right_edge of every entry from the active edges.
void compute_mu(CoComponentSequence& seq, const AlphaLists& alpha);

/// A module holding the pivot: C_left .. C_1, x, C'_1 .. C'_right.
struct Bracket {
    int left = 0;
    int right = 0;
    NodeKind kind = NodeKind::prime;
    bool operator==(const Bracket&) const = default;
};

/// Nested brackets from innermost to outermost; the last covers the sequence.
std::vector<Bracket> delineate(const CoComponentSequence& seq);

/// Builds the tree from brackets and each entry's `trees`. An entry
/// without trees must be a single vertex.
MDTree assemble(std::span<const Bracket> brackets, const CoComponentSequence& seq);

// -- pipeline -----------------------------------------------------------------

enum class StagePhase { recursed, refined, promoted };

struct StageStats {
    Vertex pivot = -1;
    std::size_t component_size = 0;
    std::size_t forest_nodes = 0;   ///< nodes of the stage forest, including those made by splits
    std::size_t active_edges = 0;
    std::size_t refiners = 0;       ///< vertices other than the pivot with an active edge avoiding it
    std::size_t refine_calls = 0;
    std::size_t mark_ops = 0;
};

/// Hooks into each stage. `depth` is 0 for the top stage. Only stages on
/// at least two vertices report; the payloads are built only when an
/// observer is attached.
class StageObserver {
public:
    virtual ~StageObserver() = default;
    virtual void on_layers(int depth, const LayerPartition& lp, const AlphaLists& alpha);
    virtual void on_forest(int depth, StagePhase phase, const OrderedForest& forest);
    virtual void on_sequence(int depth, const CoComponentSequence& seq, std::span<const Bracket> brackets);
    virtual void on_stage_done(int depth, const StageStats& stats, const MDTree& result);
};

/// The modular decomposition tree of `g` in linear time.
MDTree decompose(const Graph& g, StageObserver* observer = nullptr);

/// Decomposes the subgraph induced by `universe`, with leaves in g's ids.
MDTree recursive_stage(const Graph& g, const VertexSet& universe);

/// Everything the top stage exposes, captured by an observer.
struct TopStageRecord {
    LayerPartition layers;
    AlphaLists alpha;
    std::string recursed;
    std::string refined;
    std::string promoted;
    std::vector<Vertex> refined_order;
    std::vector<Vertex> promoted_order;
    CoComponentSequence sequence;
    std::vector<Bracket> brackets;
    StageStats stats;
    MDTree result;
    bool seen = false;
};

TopStageRecord trace_top_stage(const Graph& g);

/// Writes each stage's forests and brackets as text.
class TraceWriter : public StageObserver {
public:
    explicit TraceWriter(std::ostream& out) : out_(out) {}
    void on_layers(int depth, const LayerPartition& lp, const AlphaLists& alpha) override;
    void on_forest(int depth, StagePhase phase, const OrderedForest& forest) override;
    void on_sequence(int depth, const CoComponentSequence& seq, std::span<const Bracket> brackets) override;
    void on_stage_done(int depth, const StageStats& stats, const MDTree& result) override;

private:
    std::ostream& out_;
};

} // namespace mdec
