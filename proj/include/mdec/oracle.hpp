#pragma once

#include "mdec/graph.hpp"
#include "mdec/md_tree.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mdec {

/// Largest graph the subset-enumeration routines accept.
inline constexpr std::size_t bruteforce_limit = 16;

/// Every vertex outside `m` sees all of `m` or none of it. Throws InputError on an empty set.
bool is_module(const Graph& g, const VertexSet& m);

/// Smallest module of G[within] containing `seed`, by repeatedly absorbing splitters.
VertexSet module_closure(const Graph& g, const VertexSet& within, std::span<const Vertex> seed);

/// All modules overlapping no other module, found by enumerating every subset.
/// Sorted by (size, smallest member). Throws CapacityError above bruteforce_limit.
std::vector<VertexSet> strong_modules_bruteforce(const Graph& g);

/// Containment tree of the enumerated strong modules, each internal node
/// labelled by whether its subgraph or its complement is disconnected.
MDTree md_tree_bruteforce(const Graph& g);

/// The same tree from the recursive definition: components, co-components,
/// or the partition into maximal proper modules. Polynomial, for mid-size inputs.
MDTree md_tree_recursive(const Graph& g);

/// True iff every strong module of `g` is consecutive in `perm`.
/// Uses enumeration up to bruteforce_limit and the recursive builder above it.
/// Throws InputError when `perm` is not a permutation of the vertices.
bool is_factorizing_permutation(const Graph& g, std::span<const Vertex> perm);

/// True iff the leaves of every node of `t` are consecutive in `perm`.
bool is_factorizing_permutation(const MDTree& t, std::span<const Vertex> perm);

} // namespace mdec
