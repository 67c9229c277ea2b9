#include "mdec/md_tree.hpp"

#include "mdec/errors.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <sstream>

namespace mdec {

std::string_view to_string(NodeKind kind)
{
    switch (kind) {
    case NodeKind::leaf: return "leaf";
    case NodeKind::series: return "series";
    case NodeKind::parallel: return "parallel";
    case NodeKind::prime: return "prime";
    }
    return "?";
}

MDTree::MDTree(std::vector<MDNode> nodes, NodeId root)
    : nodes_(std::move(nodes))
    , root_(root)
{
    if (nodes_.empty()) {
        throw StructuralError("tree has no nodes");
    }
    if (root_ < 0 || static_cast<std::size_t>(root_) >= nodes_.size()) {
        throw StructuralError("root id out of range");
    }
    parent_.assign(nodes_.size(), no_node);
    min_leaf_.assign(nodes_.size(), -1);
    std::vector<char> seen(nodes_.size(), 0);

    // Iterative DFS; a frame's second visit closes the leaf span.
    std::vector<std::pair<NodeId, bool>> stack{{root_, false}};
    seen[root_] = 1;
    while (!stack.empty()) {
        auto [id, closing] = stack.back();
        stack.pop_back();
        MDNode& nd = nodes_[id];
        if (closing) {
            nd.span_end = leaf_order_.size();
            Vertex lo = -1;
            for (NodeId c : nd.children) {
                if (lo < 0 || min_leaf_[c] < lo) {
                    lo = min_leaf_[c];
                }
            }
            min_leaf_[id] = lo;
            continue;
        }
        nd.span_begin = leaf_order_.size();
        if (nd.kind == NodeKind::leaf) {
            if (!nd.children.empty()) {
                throw StructuralError("leaf node " + std::to_string(id) + " has children");
            }
            if (nd.vertex < 0) {
                throw StructuralError("leaf node " + std::to_string(id) + " has no vertex");
            }
            leaf_order_.push_back(nd.vertex);
            nd.span_end = leaf_order_.size();
            min_leaf_[id] = nd.vertex;
            continue;
        }
        if (nd.children.empty()) {
            throw StructuralError("internal node " + std::to_string(id) + " has no children");
        }
        stack.emplace_back(id, true);
        for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it) {
            NodeId c = *it;
            if (c < 0 || static_cast<std::size_t>(c) >= nodes_.size()) {
                throw StructuralError("child id out of range");
            }
            if (seen[c]) {
                throw StructuralError("node " + std::to_string(c) + " has more than one parent");
            }
            seen[c] = 1;
            parent_[c] = id;
            stack.emplace_back(c, false);
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw StructuralError("tree contains nodes unreachable from the root");
    }
}

std::span<const Vertex> MDTree::leaves(NodeId id) const
{
    const MDNode& nd = nodes_.at(id);
    return std::span<const Vertex>(leaf_order_).subspan(nd.span_begin, nd.span_end - nd.span_begin);
}

namespace {

class TreeParser {
public:
    explicit TreeParser(std::string_view text) : text_(text) {}

    MDTree run()
    {
        NodeId root = parse_node();
        skip_space();
        if (pos_ != text_.size()) {
            fail("trailing characters");
        }
        return MDTree(std::move(nodes_), root);
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw InputError("tree text, offset " + std::to_string(pos_) + ": " + what);
    }

    NodeId parse_node()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        if (text_[pos_] != '(') {
            Vertex v = 0;
            auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
            if (ec != std::errc() || v < 0) {
                fail("expected vertex id or '('");
            }
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            nodes_.push_back(MDNode{NodeKind::leaf, v, {}});
            return static_cast<NodeId>(nodes_.size() - 1);
        }
        ++pos_;
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        std::string_view word = text_.substr(start, pos_ - start);
        NodeKind kind;
        if (word == "series") {
            kind = NodeKind::series;
        } else if (word == "parallel") {
            kind = NodeKind::parallel;
        } else if (word == "prime") {
            kind = NodeKind::prime;
        } else {
            fail("unknown node kind '" + std::string(word) + "'");
        }
        std::vector<NodeId> children;
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) {
                fail("unterminated node");
            }
            if (text_[pos_] == ')') {
                ++pos_;
                break;
            }
            children.push_back(parse_node());
        }
        nodes_.push_back(MDNode{kind, -1, std::move(children)});
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<MDNode> nodes_;
};

std::vector<NodeId> sorted_children(const MDTree& t, NodeId id)
{
    std::vector<NodeId> kids = t.node(id).children;
    std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) { return t.min_leaf(a) < t.min_leaf(b); });
    return kids;
}

std::string describe(const MDTree& t, NodeId id)
{
    std::ostringstream os;
    os << to_string(t.node(id).kind) << " node over {";
    auto leaves = t.leaves(id);
    std::vector<Vertex> sorted(leaves.begin(), leaves.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        os << (i ? "," : "") << sorted[i];
    }
    os << "}";
    return os.str();
}

// Quotient graph on k children, adjacency as bit rows (k is small here or
// the caller accepts the quartic fallback).
bool quotient_has_nontrivial_module(const std::vector<std::vector<char>>& adj)
{
    const std::size_t k = adj.size();
    if (k <= 12) {
        std::vector<std::uint32_t> rows(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                if (adj[i][j]) {
                    rows[i] |= 1u << j;
                }
            }
        }
        const std::uint32_t full = (k == 32) ? ~0u : ((1u << k) - 1);
        for (std::uint32_t s = 1; s < full; ++s) {
            if (std::popcount(s) < 2) {
                continue;
            }
            bool module = true;
            for (std::size_t v = 0; v < k && module; ++v) {
                if (s & (1u << v)) {
                    continue;
                }
                std::uint32_t hit = rows[v] & s;
                module = (hit == 0 || hit == s);
            }
            if (module) {
                return true;
            }
        }
        return false;
    }
    // Smallest module containing each pair, grown by adding splitters.
    std::vector<std::size_t> count(k);
    std::vector<char> in(k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            std::fill(count.begin(), count.end(), 0);
            std::fill(in.begin(), in.end(), 0);
            std::vector<std::size_t> members;
            std::vector<std::size_t> pending{a, b};
            while (!pending.empty()) {
                std::size_t u = pending.back();
                pending.pop_back();
                if (in[u]) {
                    continue;
                }
                in[u] = 1;
                members.push_back(u);
                for (std::size_t v = 0; v < k; ++v) {
                    if (adj[u][v]) {
                        ++count[v];
                    }
                }
                if (members.size() == k) {
                    break;
                }
                if (pending.empty()) {
                    for (std::size_t v = 0; v < k; ++v) {
                        if (!in[v] && count[v] != 0 && count[v] != members.size()) {
                            pending.push_back(v);
                        }
                    }
                }
            }
            if (members.size() < k) {
                return true;
            }
        }
    }
    return false;
}

} // namespace

MDTree MDTree::parse(std::string_view text) { return TreeParser(text).run(); }

std::string canonical_serialize(const MDTree& t)
{
    std::ostringstream os;
    if (t.empty()) {
        return {};
    }
    struct Frame {
        std::vector<NodeId> kids;
        std::size_t next = 0;
    };
    std::vector<Frame> stack;
    auto open = [&](NodeId id) {
        const MDNode& nd = t.node(id);
        if (nd.kind == NodeKind::leaf) {
            os << nd.vertex;
            return;
        }
        os << '(' << to_string(nd.kind);
        stack.push_back(Frame{sorted_children(t, id)});
    };
    open(t.root());
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next == f.kids.size()) {
            os << ')';
            stack.pop_back();
            continue;
        }
        NodeId c = f.kids[f.next++];
        os << ' ';
        open(c);
    }
    return os.str();
}

ValidationReport validate(const MDTree& t, const Graph& g)
{
    const std::size_t n = g.vertex_count();
    if (t.leaf_count() != n) {
        throw StructuralError("tree has " + std::to_string(t.leaf_count()) + " leaves but graph has " +
                              std::to_string(n) + " vertices");
    }
    {
        std::vector<char> seen(n, 0);
        for (Vertex v : t.leaf_order()) {
            if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) {
                throw StructuralError("leaves do not biject with graph vertices (vertex " + std::to_string(v) + ")");
            }
            seen[v] = 1;
        }
    }

    ValidationReport report;
    std::vector<std::uint32_t> in_span(n, 0);
    std::vector<std::int32_t> child_of(n, -1);
    std::vector<std::size_t> outside_hits(n, 0);
    std::vector<Vertex> touched;
    std::uint32_t stamp = 0;

    for (NodeId id = 0; id < static_cast<NodeId>(t.node_count()); ++id) {
        const MDNode& nd = t.node(id);
        if (nd.kind == NodeKind::leaf) {
            continue;
        }
        if (nd.children.size() < 2) {
            report.violations.push_back(describe(t, id) + ": fewer than two children");
        }
        NodeId parent = t.parent(id);
        if (parent != no_node && t.node(parent).kind == nd.kind && nd.kind != NodeKind::prime) {
            report.violations.push_back(describe(t, id) + ": same kind as its parent (not canonical)");
        }

        auto span = t.leaves(id);
        ++stamp;
        for (Vertex v : span) {
            in_span[v] = stamp;
        }
        for (std::size_t ci = 0; ci < nd.children.size(); ++ci) {
            for (Vertex v : t.leaves(nd.children[ci])) {
                child_of[v] = static_cast<std::int32_t>(ci);
            }
        }

        // (a) module check and (b) join / independence between children.
        touched.clear();
        bool join_ok = true;
        bool independent_ok = true;
        for (Vertex u : span) {
            std::size_t cross = 0;
            for (Vertex w : g.neighbors(u)) {
                if (in_span[w] != stamp) {
                    if (outside_hits[w]++ == 0) {
                        touched.push_back(w);
                    }
                } else if (child_of[w] != child_of[u]) {
                    ++cross;
                }
            }
            std::size_t own = t.leaves(nd.children[child_of[u]]).size();
            if (cross != span.size() - own) {
                join_ok = false;
            }
            if (cross != 0) {
                independent_ok = false;
            }
        }
        for (Vertex w : touched) {
            if (outside_hits[w] != span.size()) {
                report.violations.push_back(describe(t, id) + ": not a module (vertex " + std::to_string(w) +
                                            " distinguishes it)");
                break;
            }
        }
        for (Vertex w : touched) {
            outside_hits[w] = 0;
        }
        if (nd.kind == NodeKind::series && !join_ok) {
            report.violations.push_back(describe(t, id) + ": children of series node are not completely joined");
        }
        if (nd.kind == NodeKind::parallel && !independent_ok) {
            report.violations.push_back(describe(t, id) + ": children of parallel node are adjacent");
        }

        // (c) the quotient under a prime node has only trivial modules.
        if (nd.kind == NodeKind::prime) {
            const std::size_t k = nd.children.size();
            if (k == 2) {
                report.violations.push_back(describe(t, id) + ": prime node with two children");
            } else if (k > 2) {
                std::vector<Vertex> reps;
                for (NodeId c : nd.children) {
                    reps.push_back(t.min_leaf(c));
                }
                std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = i + 1; j < k; ++j) {
                        adj[i][j] = adj[j][i] = g.adjacent(reps[i], reps[j]) ? 1 : 0;
                    }
                }
                if (quotient_has_nontrivial_module(adj)) {
                    report.violations.push_back(describe(t, id) +
                                                ": quotient graph on its children has a nontrivial module");
                }
            }
        }
    }
    return report;
}

bool module_order_less(const VertexSet& a, const VertexSet& b)
{
    if (a.size() != b.size()) {
        return a.size() < b.size();
    }
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<VertexSet> strong_modules(const MDTree& t)
{
    std::vector<VertexSet> out;
    if (t.empty()) {
        return out;
    }
    Vertex max_v = 0;
    for (Vertex v : t.leaf_order()) {
        max_v = std::max(max_v, v);
    }
    const std::size_t universe = static_cast<std::size_t>(max_v) + 1;
    out.reserve(t.node_count());
    for (NodeId id = 0; id < static_cast<NodeId>(t.node_count()); ++id) {
        out.emplace_back(universe, t.leaves(id));
    }
    std::sort(out.begin(), out.end(), module_order_less);
    return out;
}

} // namespace mdec
