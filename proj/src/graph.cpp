#include "mdec/graph.hpp"

#include "mdec/errors.hpp"

#include <algorithm>
#include <string>

namespace mdec {

namespace {

void check_vertex(std::size_t n, Vertex v)
{
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
        throw InputError("vertex " + std::to_string(v) + " out of range [0, " + std::to_string(n) + ")");
    }
}

} // namespace

Graph build_graph(std::size_t n, std::span<const Edge> edges)
{
    std::vector<Edge> pairs;
    pairs.reserve(edges.size());
    for (auto [u, v] : edges) {
        check_vertex(n, u);
        check_vertex(n, v);
        if (u == v) {
            throw InputError("self-loop on vertex " + std::to_string(u));
        }
        pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : pairs) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        g.offsets_[i + 1] += g.offsets_[i];
    }
    g.targets_.resize(pairs.size() * 2);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    // Pairs are sorted by (min, max), so each row receives its smaller
    // neighbours (as the max endpoint) before its larger ones.
    for (auto [u, v] : pairs) {
        g.targets_[fill[v]++] = u;
    }
    for (auto [u, v] : pairs) {
        g.targets_[fill[u]++] = v;
    }
    return g;
}

std::span<const Vertex> Graph::neighbors(Vertex v) const
{
    check_vertex(vertex_count(), v);
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
}

std::span<const Vertex> neighbors(const Graph& g, Vertex v) { return g.neighbors(v); }

bool Graph::adjacent(Vertex u, Vertex v) const
{
    auto row = neighbors(u);
    check_vertex(vertex_count(), v);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> Graph::edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < static_cast<Vertex>(vertex_count()); ++u) {
        for (Vertex v : neighbors(u)) {
            if (u < v) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

VertexSet::VertexSet(std::size_t universe_size, std::span<const Vertex> members)
    : mask_(universe_size, false)
{
    for (Vertex v : members) {
        check_vertex(universe_size, v);
        if (!mask_[v]) {
            mask_[v] = true;
            members_.push_back(v);
        }
    }
    std::sort(members_.begin(), members_.end());
}

VertexSet VertexSet::all(std::size_t universe_size)
{
    VertexSet s(universe_size);
    s.mask_.assign(universe_size, true);
    s.members_.resize(universe_size);
    for (std::size_t i = 0; i < universe_size; ++i) {
        s.members_[i] = static_cast<Vertex>(i);
    }
    return s;
}

void VertexSet::insert(Vertex v)
{
    check_vertex(mask_.size(), v);
    if (mask_[v]) {
        return;
    }
    mask_[v] = true;
    members_.insert(std::upper_bound(members_.begin(), members_.end(), v), v);
}

std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& s)
{
    const std::size_t n = g.vertex_count();
    if (s.universe_size() != n) {
        throw InputError("vertex set universe does not match graph size");
    }
    std::vector<char> seen(n, 0);
    std::vector<VertexSet> out;
    std::vector<Vertex> stack;
    for (Vertex start : s) {
        if (seen[start]) {
            continue;
        }
        std::vector<Vertex> comp;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (Vertex w : g.neighbors(u)) {
                if (s.contains(w) && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        out.emplace_back(n, comp);
    }
    return out;
}

std::vector<VertexSet> co_components(const Graph& g, const VertexSet& s)
{
    const std::size_t n = g.vertex_count();
    if (s.universe_size() != n) {
        throw InputError("vertex set universe does not match graph size");
    }
    // Complement search over the shrinking pool of unreached vertices: each
    // probe either removes a vertex from the pool or is charged to an edge.
    std::vector<Vertex> pool(s.begin(), s.end());
    std::vector<char> is_neighbor(n, 0);
    std::vector<VertexSet> out;
    while (!pool.empty()) {
        std::vector<Vertex> comp{pool.front()};
        pool.erase(pool.begin());
        for (std::size_t head = 0; head < comp.size(); ++head) {
            Vertex u = comp[head];
            for (Vertex w : g.neighbors(u)) {
                is_neighbor[w] = 1;
            }
            std::vector<Vertex> keep;
            for (Vertex w : pool) {
                if (is_neighbor[w]) {
                    keep.push_back(w);
                } else {
                    comp.push_back(w);
                }
            }
            pool.swap(keep);
            for (Vertex w : g.neighbors(u)) {
                is_neighbor[w] = 0;
            }
        }
        out.emplace_back(n, comp);
    }
    std::sort(out.begin(), out.end(), [](const VertexSet& a, const VertexSet& b) { return a.min() < b.min(); });
    return out;
}

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s)
{
    const std::size_t n = g.vertex_count();
    if (s.universe_size() != n) {
        throw InputError("vertex set universe does not match graph size");
    }
    InducedSubgraph out;
    out.to_local.assign(n, -1);
    for (Vertex v : s) {
        out.to_local[v] = static_cast<Vertex>(out.to_parent.size());
        out.to_parent.push_back(v);
    }
    std::vector<Edge> edges;
    for (Vertex v : s) {
        for (Vertex w : g.neighbors(v)) {
            if (v < w && s.contains(w)) {
                edges.emplace_back(out.to_local[v], out.to_local[w]);
            }
        }
    }
    out.graph = build_graph(out.to_parent.size(), edges);
    return out;
}

} // namespace mdec
