#include "mdec/errors.hpp"
#include "mdec/io.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mdec {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t k) { return static_cast<std::size_t>(engine_() % k); }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

private:
    std::mt19937_64 engine_;
};

} // namespace

Graph gen_gnp(std::size_t n, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError("gen_gnp: probability must lie in [0, 1]");
    }
    std::vector<Edge> edges;
    if (p == 0.0 || n < 2) {
        return build_graph(n, edges);
    }
    if (p == 1.0) {
        for (std::size_t v = 1; v < n; ++v) {
            for (std::size_t w = 0; w < v; ++w) {
                edges.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
            }
        }
        return build_graph(n, edges);
    }
    Rng rng(seed);
    const double log_q = std::log1p(-p);
    long long v = 1;
    long long w = -1;
    const auto count = static_cast<long long>(n);
    while (v < count) {
        const double r = rng.uniform();
        w += 1 + static_cast<long long>(std::floor(std::log1p(-r) / log_q));
        while (w >= v && v < count) {
            w -= v;
            ++v;
        }
        if (v < count) {
            edges.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
        }
    }
    return build_graph(n, edges);
}

// Shape rules. The root kind is a coin flip and kinds alternate by level.
// A node on s > 1 leaves gets k children, k uniform in [2, min(s, 6)], with
// sizes from a uniform composition of s (k - 1 distinct cut points). A
// series node on more than 32 leaves instead gets two children: a small one
// on 1..4 leaves and one holding the rest. Every series node joins all its
// children, so this keeps the edge count near n log n instead of quadratic.
// Leaves receive a random permutation of the ids, so modules are not id ranges.
Cograph gen_random_cograph(std::size_t n, std::uint64_t seed)
{
    if (n == 0) {
        throw InputError("gen_random_cograph: n must be at least 1");
    }
    Rng rng(seed);
    std::vector<MDNode> nodes;
    struct Pending {
        std::size_t size;
        NodeKind kind;
        NodeId parent;
    };
    std::vector<Pending> stack{{n, rng.below(2) == 0 ? NodeKind::series : NodeKind::parallel, no_node}};
    std::size_t leaves = 0;
    std::vector<std::size_t> cuts;
    while (!stack.empty()) {
        Pending item = stack.back();
        stack.pop_back();
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.emplace_back();
        if (item.parent != no_node) {
            nodes[item.parent].children.push_back(id);
        }
        if (item.size == 1) {
            nodes[id].vertex = static_cast<Vertex>(leaves++);
            continue;
        }
        nodes[id].kind = item.kind;
        const NodeKind child_kind = item.kind == NodeKind::series ? NodeKind::parallel : NodeKind::series;
        std::vector<std::size_t> sizes;
        if (item.kind == NodeKind::series && item.size > 32) {
            std::size_t small = rng.between(1, 4);
            sizes = {small, item.size - small};
        } else {
            const std::size_t k = rng.between(2, std::min<std::size_t>(item.size, 6));
            cuts.clear();
            while (cuts.size() + 1 < k) {
                std::size_t c = rng.between(1, item.size - 1);
                if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) {
                    cuts.push_back(c);
                }
            }
            std::sort(cuts.begin(), cuts.end());
            std::size_t prev = 0;
            for (std::size_t c : cuts) {
                sizes.push_back(c - prev);
                prev = c;
            }
            sizes.push_back(item.size - prev);
        }
        for (auto s = sizes.rbegin(); s != sizes.rend(); ++s) {
            stack.push_back({*s, child_kind, id});
        }
    }

    // Fisher-Yates with the pinned integer rule.
    std::vector<Vertex> relabel(n);
    for (std::size_t i = 0; i < n; ++i) {
        relabel[i] = static_cast<Vertex>(i);
    }
    for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(relabel[i], relabel[rng.below(i + 1)]);
    }
    for (MDNode& nd : nodes) {
        if (nd.kind == NodeKind::leaf) {
            nd.vertex = relabel[nd.vertex];
        }
    }
    MDTree cotree(std::move(nodes), 0);

    // Two vertices are adjacent iff their lowest common ancestor is series:
    // for every series node, join each pair of its children.
    std::vector<Edge> edges;
    for (std::size_t id = 0; id < cotree.node_count(); ++id) {
        const MDNode& nd = cotree.node(static_cast<NodeId>(id));
        if (nd.kind != NodeKind::series) {
            continue;
        }
        for (std::size_t a = 0; a < nd.children.size(); ++a) {
            for (std::size_t b = a + 1; b < nd.children.size(); ++b) {
                for (Vertex u : cotree.leaves(nd.children[a])) {
                    for (Vertex v : cotree.leaves(nd.children[b])) {
                        edges.emplace_back(u, v);
                    }
                }
            }
        }
    }
    return {build_graph(n, edges), std::move(cotree)};
}

namespace {

constexpr std::string_view fixture_labels[] = {"x", "a", "b", "c", "d", "e", "f", "g", "h",
                                               "i", "j", "k", "l", "m", "n", "p", "q", "r"};

} // namespace

Vertex fixture_id(std::string_view label)
{
    for (std::size_t i = 0; i < std::size(fixture_labels); ++i) {
        if (fixture_labels[i] == label) {
            return static_cast<Vertex>(i);
        }
    }
    throw InputError("no fixture vertex named '" + std::string(label) + "'");
}

// Required: N(x) = {a, c, d, e}; a is joined to c, d, e and to all of the
// next layer; i sees c, d, e; q-r is the only edge into the last layer.
// Edges inside the next-layer components are free. Stars centred on i and
// on q are used for {f, g, h, i} and {m, n, p, q}; {k, l} is one edge.
LabeledGraph build_appendix_fixture()
{
    auto id = [](std::string_view s) { return fixture_id(s); };
    std::vector<Edge> edges;
    auto join = [&](std::string_view u, std::initializer_list<std::string_view> vs) {
        for (auto v : vs) {
            edges.emplace_back(id(u), id(v));
        }
    };
    join("x", {"a", "c", "d", "e"});
    join("a", {"c", "d", "e"});
    join("a", {"b", "f", "g", "h", "i", "j", "k", "l", "m", "n", "p", "q"});
    join("i", {"c", "d", "e"});
    join("i", {"f", "g", "h"});
    join("k", {"l"});
    join("q", {"m", "n", "p", "r"});

    LabeledGraph out;
    out.graph = build_graph(std::size(fixture_labels), edges);
    for (auto s : fixture_labels) {
        out.labels.emplace_back(s);
    }
    return out;
}

} // namespace mdec
