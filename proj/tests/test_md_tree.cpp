#include "support.hpp"

#include "mdec/errors.hpp"

#include <doctest.h>

#include <set>

using namespace mdec;
using namespace mdec::testing;

namespace {

bool has_violation(const ValidationReport& r, std::string_view needle)
{
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

// Node kinds recomputed from the graph, so only the shape of `t` is under test.
MDTree relabel_kinds(const MDTree& t, const Graph& g)
{
    std::vector<MDNode> nodes;
    for (std::size_t id = 0; id < t.node_count(); ++id) {
        MDNode nd = t.node(static_cast<NodeId>(id));
        if (nd.kind != NodeKind::leaf) {
            auto span = t.leaves(static_cast<NodeId>(id));
            VertexSet s(g.vertex_count(), span);
            if (connected_components(g, s).size() > 1) {
                nd.kind = NodeKind::parallel;
            } else if (co_components(g, s).size() > 1) {
                nd.kind = NodeKind::series;
            } else {
                nd.kind = NodeKind::prime;
            }
        }
        nodes.push_back(std::move(nd));
    }
    return MDTree(std::move(nodes), t.root());
}

// Swaps the vertices on two leaves.
MDTree swap_leaves(const MDTree& t, Vertex a, Vertex b)
{
    std::vector<MDNode> nodes;
    for (std::size_t id = 0; id < t.node_count(); ++id) {
        MDNode nd = t.node(static_cast<NodeId>(id));
        if (nd.kind == NodeKind::leaf) {
            nd.vertex = nd.vertex == a ? b : nd.vertex == b ? a : nd.vertex;
        }
        nodes.push_back(std::move(nd));
    }
    return MDTree(std::move(nodes), t.root());
}

} // namespace

TEST_CASE("canonical_serialize: basic shapes")
{
    CHECK(canonical_serialize(MDTree::parse("0")) == "0");
    CHECK(canonical_serialize(decompose(build_graph(3, {{0, 1}, {0, 2}, {1, 2}}))) == "(series 0 1 2)");
    CHECK(canonical_serialize(decompose(build_graph(4, {{0, 1}, {1, 2}, {2, 3}}))) == "(prime 0 1 2 3)");
}

TEST_CASE("canonical_serialize sorts children by smallest leaf")
{
    CHECK(canonical_serialize(MDTree::parse("(series 2 (parallel 3 1) 0)")) == "(series 0 (parallel 1 3) 2)");
    CHECK(canonical_serialize(MDTree::parse("(prime (series 5 4) 3 (parallel 2 1) 0)")) ==
          canonical_serialize(MDTree::parse("(prime 0 (parallel 1 2) 3 (series 4 5))")));
    CHECK(canonical_serialize(MDTree::parse("(series 0 (parallel 1 2))")) !=
          canonical_serialize(MDTree::parse("(series (parallel 0 1) 2)")));
}

TEST_CASE("canonical_serialize is injective on oracle trees")
{
    std::map<std::string, std::string> seen;  // serialisation -> strong modules rendered
    for (const Graph& g : random_small_graphs(400, 1, 7, 21)) {
        MDTree t = md_tree_bruteforce(g);
        std::string key = canonical_serialize(t);
        std::string shape;
        for (const VertexSet& m : strong_modules(t)) {
            for (Vertex v : m) {
                shape += std::to_string(v) + ",";
            }
            shape += "|";
        }
        // Kinds are part of the text, so equal text must mean equal node spans.
        auto [it, fresh] = seen.emplace(key, shape);
        if (!fresh) {
            CHECK(it->second == shape);
        }
        CHECK(canonical_serialize(MDTree::parse(key)) == key);
    }
}

TEST_CASE("tree text parsing rejects malformed input")
{
    CHECK_THROWS_AS(MDTree::parse("(series 0"), InputError);
    CHECK_THROWS_AS(MDTree::parse("(blob 0 1)"), InputError);
    CHECK_THROWS_AS(MDTree::parse("0 1"), InputError);
    CHECK_THROWS_AS(MDTree::parse(""), InputError);
}

TEST_CASE("MDTree rejects malformed node structure")
{
    std::vector<MDNode> cyclic(2);
    cyclic[0].kind = NodeKind::series;
    cyclic[0].children = {1};
    cyclic[1].kind = NodeKind::series;
    cyclic[1].children = {0};
    CHECK_THROWS_AS(MDTree(cyclic, 0), StructuralError);

    std::vector<MDNode> childless(1);
    childless[0].kind = NodeKind::prime;
    CHECK_THROWS_AS(MDTree(childless, 0), StructuralError);
}

TEST_CASE("validate: trivial and violating cases")
{
    Graph k1 = build_graph(1, {});
    CHECK(validate(MDTree::parse("0"), k1).ok());

    Graph edge = build_graph(2, {{0, 1}});
    auto r = validate(MDTree::parse("(parallel 0 1)"), edge);
    CHECK_FALSE(r.ok());
    CHECK(has_violation(r, "children of parallel node are adjacent"));

    Graph empty2 = build_graph(2, {});
    CHECK(has_violation(validate(MDTree::parse("(series 0 1)"), empty2), "not completely joined"));

    Graph k3 = build_graph(3, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(has_violation(validate(MDTree::parse("(series (series 0 1) 2)"), k3), "same kind"));
    CHECK(has_violation(validate(MDTree::parse("(prime 0 1 2)"), k3), "nontrivial module"));
    CHECK(has_violation(validate(MDTree::parse("(prime 0 (series 1 2))"), k3), "two children"));

    Graph p4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(has_violation(validate(MDTree::parse("(prime 0 (series 1 2) 3)"), p4), "not a module"));
    CHECK(validate(MDTree::parse("(prime 3 1 0 2)"), p4).ok());
}

TEST_CASE("validate: leaf and vertex mismatch is a structural error")
{
    Graph p4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK_THROWS_AS(validate(MDTree::parse("(prime 0 1 2)"), p4), StructuralError);
    CHECK_THROWS_AS(validate(MDTree::parse("(prime 0 1 2 2)"), p4), StructuralError);
    CHECK_THROWS_AS(validate(MDTree::parse("(prime 0 1 2 7)"), p4), StructuralError);
}

TEST_CASE("validate accepts the decomposition of the example graph")
{
    LabeledGraph fx = build_appendix_fixture();
    auto r = validate(decompose(fx.graph), fx.graph);
    CHECK(r.ok());
}

TEST_CASE("strong_modules")
{
    auto leaf = strong_modules(MDTree::parse("0"));
    REQUIRE(leaf.size() == 1);
    CHECK(leaf[0] == set_of(1, {0}));

    auto k3 = strong_modules(MDTree::parse("(series 0 1 2)"));
    CHECK(k3 == std::vector<VertexSet>{set_of(3, {0}), set_of(3, {1}), set_of(3, {2}), set_of(3, {0, 1, 2})});

    Graph p4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(strong_modules(decompose(p4)) == strong_modules_bruteforce(p4));
}

TEST_CASE("validate agrees with the strong-module oracle on n <= 10")
{
    int perturbed_rejections = 0;
    for (const Graph& g : random_small_graphs(400, 2, 10, 22)) {
        const auto want = strong_modules_bruteforce(g);
        MDTree good = decompose(g);
        CHECK(validate(good, g).ok());
        CHECK(strong_modules(good) == want);

        // Leaf swaps change the spans. Validation must pass exactly when
        // the spans still match, once kinds are read off the graph.
        const auto n = static_cast<Vertex>(g.vertex_count());
        for (Vertex a = 0; a + 1 < n; a += 2) {
            MDTree shaped = relabel_kinds(swap_leaves(good, a, n - 1 - a), g);
            const bool spans_match = strong_modules(shaped) == want;
            CHECK(validate(shaped, g).ok() == spans_match);
            perturbed_rejections += spans_match ? 0 : 1;
        }
    }
    CHECK(perturbed_rejections > 50);
}

TEST_CASE("valid trees have at most 2n - 1 nodes")
{
    for (const Graph& g : random_small_graphs(200, 1, 12, 23)) {
        CHECK(decompose(g).node_count() <= 2 * g.vertex_count() - 1);
    }
}
