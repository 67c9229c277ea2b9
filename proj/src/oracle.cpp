#include "mdec/oracle.hpp"

#include "mdec/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>

namespace mdec {

bool is_module(const Graph& g, const VertexSet& m)
{
    if (m.empty()) {
        throw InputError("is_module: empty vertex set");
    }
    if (m.universe_size() != g.vertex_count()) {
        throw InputError("is_module: set is over a different vertex range");
    }
    std::vector<std::size_t> hits(g.vertex_count(), 0);
    for (Vertex v : m) {
        for (Vertex w : g.neighbors(v)) {
            ++hits[w];
        }
    }
    for (std::size_t w = 0; w < hits.size(); ++w) {
        if (!m.contains(static_cast<Vertex>(w)) && hits[w] != 0 && hits[w] != m.size()) {
            return false;
        }
    }
    return true;
}

VertexSet module_closure(const Graph& g, const VertexSet& within, std::span<const Vertex> seed)
{
    const std::size_t n = g.vertex_count();
    if (seed.empty()) {
        throw InputError("module_closure: empty seed");
    }
    std::vector<char> in(n, 0);
    std::vector<std::size_t> hits(n, 0);
    std::size_t size = 0;
    std::vector<Vertex> queue;
    auto absorb = [&](Vertex v) {
        in[v] = 1;
        ++size;
        for (Vertex w : g.neighbors(v)) {
            ++hits[w];
        }
    };
    for (Vertex v : seed) {
        if (!within.contains(v)) {
            throw InputError("module_closure: seed outside the vertex set");
        }
        if (!in[v]) {
            absorb(v);
        }
    }
    for (;;) {
        Vertex splitter = -1;
        for (Vertex w : within) {
            if (!in[w] && hits[w] != 0 && hits[w] != size) {
                splitter = w;
                break;
            }
        }
        if (splitter < 0) {
            break;
        }
        absorb(splitter);
    }
    VertexSet out(n);
    for (Vertex v : within) {
        if (in[v]) {
            out.insert(v);
        }
    }
    return out;
}

namespace {

using Mask = std::uint32_t;

std::vector<Mask> neighbour_masks(const Graph& g)
{
    std::vector<Mask> nbr(g.vertex_count(), 0);
    for (std::size_t v = 0; v < nbr.size(); ++v) {
        for (Vertex w : g.neighbors(static_cast<Vertex>(v))) {
            nbr[v] |= Mask{1} << w;
        }
    }
    return nbr;
}

VertexSet set_of(Mask m, std::size_t n)
{
    VertexSet s(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (m & (Mask{1} << v)) {
            s.insert(static_cast<Vertex>(v));
        }
    }
    return s;
}

void check_capacity(const Graph& g)
{
    if (g.vertex_count() > bruteforce_limit) {
        throw CapacityError("subset enumeration is limited to " + std::to_string(bruteforce_limit) +
                            " vertices, graph has " + std::to_string(g.vertex_count()));
    }
    if (g.vertex_count() == 0) {
        throw InputError("graph has no vertices");
    }
}

std::vector<Mask> strong_masks(const Graph& g)
{
    check_capacity(g);
    const std::size_t n = g.vertex_count();
    const auto nbr = neighbour_masks(g);
    const Mask all = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;

    std::vector<Mask> modules;
    for (Mask s = 1; s <= all && s != 0; ++s) {
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v) {
            if (s & (Mask{1} << v)) {
                continue;
            }
            Mask seen = nbr[v] & s;
            ok = seen == 0 || seen == s;
        }
        if (ok) {
            modules.push_back(s);
        }
    }

    // smallest[a][b]: intersection of every module holding both a and b.
    std::vector<Mask> smallest(n * n, all);
    for (Mask s : modules) {
        for (std::size_t a = 0; a < n; ++a) {
            if (!(s & (Mask{1} << a))) {
                continue;
            }
            for (std::size_t b = 0; b < n; ++b) {
                if (s & (Mask{1} << b)) {
                    smallest[a * n + b] &= s;
                }
            }
        }
    }

    // S is overlapped by some module iff a module holding a in S and b
    // outside S fails to contain S; the smallest such module decides it.
    std::vector<Mask> strong;
    for (Mask s : modules) {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) {
            if (!(s & (Mask{1} << a))) {
                continue;
            }
            for (std::size_t b = 0; b < n && ok; ++b) {
                if (!(s & (Mask{1} << b))) {
                    ok = (smallest[a * n + b] & s) == s;
                }
            }
        }
        if (ok) {
            strong.push_back(s);
        }
    }
    return strong;
}

NodeKind kind_of(const Graph& g, const VertexSet& s)
{
    if (connected_components(g, s).size() > 1) {
        return NodeKind::parallel;
    }
    if (co_components(g, s).size() > 1) {
        return NodeKind::series;
    }
    return NodeKind::prime;
}

} // namespace

std::vector<VertexSet> strong_modules_bruteforce(const Graph& g)
{
    std::vector<VertexSet> out;
    for (Mask m : strong_masks(g)) {
        out.push_back(set_of(m, g.vertex_count()));
    }
    std::sort(out.begin(), out.end(), module_order_less);
    return out;
}

MDTree md_tree_bruteforce(const Graph& g)
{
    const std::size_t n = g.vertex_count();
    std::vector<Mask> strong = strong_masks(g);
    std::sort(strong.begin(), strong.end(), [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });

    // Laminar family: each module's parent is the smallest strong proper superset.
    std::vector<MDNode> nodes(strong.size());
    std::vector<int> parent(strong.size(), -1);
    for (std::size_t i = 0; i < strong.size(); ++i) {
        for (std::size_t j = i + 1; j < strong.size(); ++j) {
            if ((strong[i] & strong[j]) == strong[i] && strong[i] != strong[j]) {
                parent[i] = static_cast<int>(j);
                break;
            }
        }
    }
    NodeId root = no_node;
    for (std::size_t i = 0; i < strong.size(); ++i) {
        if (std::popcount(strong[i]) == 1) {
            nodes[i].kind = NodeKind::leaf;
            nodes[i].vertex = static_cast<Vertex>(std::countr_zero(strong[i]));
        } else {
            nodes[i].kind = kind_of(g, set_of(strong[i], n));
        }
        if (parent[i] < 0) {
            root = static_cast<NodeId>(i);
        } else {
            nodes[parent[i]].children.push_back(static_cast<NodeId>(i));
        }
    }
    return MDTree(std::move(nodes), root);
}

MDTree md_tree_recursive(const Graph& g)
{
    const std::size_t n = g.vertex_count();
    if (n == 0) {
        throw InputError("graph has no vertices");
    }
    std::vector<MDNode> nodes;
    struct Item {
        VertexSet set;
        NodeId parent;
    };
    std::vector<Item> stack{{VertexSet::all(n), no_node}};
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.emplace_back();
        if (it.parent != no_node) {
            nodes[it.parent].children.push_back(id);
        }
        if (it.set.size() == 1) {
            nodes[id].kind = NodeKind::leaf;
            nodes[id].vertex = it.set.min();
            continue;
        }
        std::vector<VertexSet> parts = connected_components(g, it.set);
        if (parts.size() > 1) {
            nodes[id].kind = NodeKind::parallel;
        } else if (parts = co_components(g, it.set); parts.size() > 1) {
            nodes[id].kind = NodeKind::series;
        } else {
            // Both the graph and its complement are connected, so the
            // maximal proper modules partition the set. Two vertices share
            // one iff the module they generate is proper.
            nodes[id].kind = NodeKind::prime;
            parts.clear();
            std::vector<char> placed(n, 0);
            for (Vertex v : it.set) {
                if (placed[v]) {
                    continue;
                }
                VertexSet part(n);
                part.insert(v);
                placed[v] = 1;
                for (Vertex w : it.set) {
                    if (placed[w]) {
                        continue;
                    }
                    const Vertex pair[] = {v, w};
                    if (module_closure(g, it.set, pair).size() < it.set.size()) {
                        part.insert(w);
                        placed[w] = 1;
                    }
                }
                parts.push_back(std::move(part));
            }
        }
        for (auto p = parts.rbegin(); p != parts.rend(); ++p) {
            stack.push_back({std::move(*p), id});
        }
    }
    return MDTree(std::move(nodes), 0);
}

namespace {

std::vector<std::size_t> positions_of(std::size_t n, std::span<const Vertex> perm)
{
    if (perm.size() != n) {
        throw InputError("permutation has " + std::to_string(perm.size()) + " entries for " + std::to_string(n) +
                         " vertices");
    }
    std::vector<std::size_t> pos(n, n);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        Vertex v = perm[i];
        if (v < 0 || static_cast<std::size_t>(v) >= n || pos[v] != n) {
            throw InputError("not a permutation: bad or repeated entry " + std::to_string(v));
        }
        pos[v] = i;
    }
    return pos;
}

bool consecutive(std::span<const Vertex> members, const std::vector<std::size_t>& pos)
{
    std::size_t lo = pos.size();
    std::size_t hi = 0;
    for (Vertex v : members) {
        lo = std::min(lo, pos[v]);
        hi = std::max(hi, pos[v]);
    }
    return hi - lo + 1 == members.size();
}

} // namespace

bool is_factorizing_permutation(const MDTree& t, std::span<const Vertex> perm)
{
    const auto pos = positions_of(t.leaf_count(), perm);
    for (std::size_t id = 0; id < t.node_count(); ++id) {
        if (!consecutive(t.leaves(static_cast<NodeId>(id)), pos)) {
            return false;
        }
    }
    return true;
}

bool is_factorizing_permutation(const Graph& g, std::span<const Vertex> perm)
{
    const auto pos = positions_of(g.vertex_count(), perm);
    if (g.vertex_count() <= bruteforce_limit) {
        for (const VertexSet& m : strong_modules_bruteforce(g)) {
            if (!consecutive(m.members(), pos)) {
                return false;
            }
        }
        return true;
    }
    return is_factorizing_permutation(md_tree_recursive(g), perm);
}

} // namespace mdec
