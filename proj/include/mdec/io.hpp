#pragma once

#include "mdec/graph.hpp"
#include "mdec/md_tree.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mdec {

/// A graph plus optional display names, one per vertex when present.
struct LabeledGraph {
    Graph graph;
    std::vector<std::string> labels;  ///< empty, or exactly vertex_count() names
};

enum class ParseMode {
    strict,   ///< duplicates, self-loops and a wrong edge count are errors
    lenient,  ///< they are dropped or collapsed and reported as warnings
};

/// Reads the edge-list format:
///
///     c any comment
///     p <n> <m>
///     n <id> <name>
///     e <u> <v>
///
/// Without a header the vertex count is one past the largest id seen.
/// Errors carry the 1-based line number.
LabeledGraph parse_graph(std::string_view text, ParseMode mode = ParseMode::strict,
                         std::vector<std::string>* warnings = nullptr);

/// Inverse of parse_graph: header, labels if any, then edges in ascending order.
std::string render_graph(const Graph& g, const std::vector<std::string>& labels = {});

/// DOT digraph. Series nodes are labelled 1, parallel 0, prime P.
std::string render_dot(const MDTree& t, const std::vector<std::string>& labels = {});

/// Nested JSON objects: {"kind": ..., "children": [...]}, leaves carry "vertex".
std::string render_record(const MDTree& t, const std::vector<std::string>& labels = {});
MDTree parse_record(std::string_view json_text);

// -- instance generators ------------------------------------------------------
//
// Randomness is std::mt19937_64 seeded with `seed`. A uniform real is
// (draw >> 11) * 2^-53 and a uniform integer below k is draw % k, so a seed
// reproduces the same instance on any platform.

/// Erdos-Renyi G(n, p) by geometric edge skipping over the pairs
/// (1,0), (2,0), (2,1), (3,0), ... Throws InputError unless 0 <= p <= 1.
Graph gen_gnp(std::size_t n, double p, std::uint64_t seed);

struct Cograph {
    Graph graph;
    MDTree cotree;
};

/// Random canonical cotree and the graph it defines. See the source for the shape rules.
Cograph gen_random_cograph(std::size_t n, std::uint64_t seed);

// -- the worked example -------------------------------------------------------

/// The 18-vertex example graph with letter labels; the pivot "x" is vertex 0.
LabeledGraph build_appendix_fixture();

/// Id of a fixture label, e.g. fixture_id("q").
Vertex fixture_id(std::string_view label);

} // namespace mdec
