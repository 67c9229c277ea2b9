#pragma once

#include "mdec/decomposer.hpp"
#include "mdec/graph.hpp"
#include "mdec/io.hpp"
#include "mdec/md_tree.hpp"
#include "mdec/oracle.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

namespace mdec::testing {

/// Calls `f` on every labelled simple graph on n vertices.
inline void for_each_graph(std::size_t n, const std::function<void(const Graph&)>& f)
{
    std::vector<Edge> pairs;
    for (Vertex u = 0; static_cast<std::size_t>(u) < n; ++u) {
        for (Vertex v = u + 1; static_cast<std::size_t>(v) < n; ++v) {
            pairs.emplace_back(u, v);
        }
    }
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    std::vector<Edge> edges;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        edges.clear();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                edges.push_back(pairs[i]);
            }
        }
        f(build_graph(n, edges));
    }
}

/// A reproducible stream of small G(n, p) graphs, n in [lo, hi], p in {0.1, ..., 0.9}.
inline std::vector<Graph> random_small_graphs(std::size_t count, std::size_t lo, std::size_t hi, std::uint64_t salt)
{
    std::vector<Graph> out;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = lo + i % (hi - lo + 1);
        const double p = 0.1 * static_cast<double>(1 + (i / (hi - lo + 1)) % 9);
        out.push_back(gen_gnp(n, p, salt * 1000003 + i));
    }
    return out;
}

inline VertexSet set_of(std::size_t n, std::vector<Vertex> members)
{
    return VertexSet(n, std::span<const Vertex>(members));
}

inline std::vector<Vertex> sorted(std::vector<Vertex> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

/// The vertices the top stage works on: the pivot's connected component.
inline VertexSet top_universe(const Graph& g, const TopStageRecord& rec)
{
    VertexSet u(g.vertex_count());
    u.insert(rec.layers.pivot);
    for (const auto& layer : rec.layers.layers) {
        for (Vertex v : layer) {
            u.insert(v);
        }
    }
    return u;
}

/// Oracle strong modules of G[universe], in the ids of g.
inline std::vector<std::vector<Vertex>> strong_modules_within(const Graph& g, const VertexSet& universe)
{
    InducedSubgraph sub = induced_subgraph(g, universe);
    std::vector<std::vector<Vertex>> out;
    for (const VertexSet& m : strong_modules_bruteforce(sub.graph)) {
        std::vector<Vertex> mapped;
        for (Vertex v : m) {
            mapped.push_back(sub.to_parent[v]);
        }
        out.push_back(sorted(mapped));
    }
    return out;
}

inline bool consecutive_in(const std::vector<Vertex>& members, const std::vector<Vertex>& order)
{
    std::vector<std::size_t> pos;
    for (Vertex v : members) {
        auto it = std::find(order.begin(), order.end(), v);
        if (it == order.end()) {
            return false;
        }
        pos.push_back(static_cast<std::size_t>(it - order.begin()));
    }
    auto [lo, hi] = std::minmax_element(pos.begin(), pos.end());
    return *hi - *lo + 1 == members.size();
}

inline std::vector<Vertex> ids(std::initializer_list<std::string_view> labels)
{
    std::vector<Vertex> out;
    for (auto s : labels) {
        out.push_back(fixture_id(s));
    }
    return sorted(out);
}

} // namespace mdec::testing
