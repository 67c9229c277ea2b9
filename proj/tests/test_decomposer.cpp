#include "support.hpp"

#include "mdec/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace mdec;
using namespace mdec::testing;

namespace {

Graph p4() { return build_graph(4, {{0, 1}, {1, 2}, {2, 3}}); }

// Hand-built sequence in the worked example's order, with active edges taken
// from the definition rather than from the pipeline.
CoComponentSequence example_sequence()
{
    CoComponentSequence seq;
    seq.pivot = fixture_id("x");
    auto entry = [](std::initializer_list<std::string_view> labels, int layer) {
        CoComponent c;
        c.members = ids(labels);
        c.layer = layer;
        return c;
    };
    seq.left = {entry({"c", "d", "e"}, 0), entry({"a"}, 0)};
    seq.right = {entry({"f", "g", "h", "i"}, 1), entry({"b"}, 1), entry({"k", "l"}, 1),
                 entry({"j"}, 1),                entry({"m", "n", "p", "q"}, 1), entry({"r"}, 2)};
    return seq;
}

// The promoted forest of the example, cut into entries. {f, g, h, i} and
// {m, n, p, q} each end up as two trees.
void attach_promoted_trees(CoComponentSequence& seq)
{
    auto trees = [](std::initializer_list<const char*> texts) {
        std::vector<MDTree> out;
        for (const char* t : texts) {
            out.push_back(MDTree::parse(t));
        }
        return out;
    };
    seq.left[0].trees = trees({"(parallel 3 4 5)"});
    seq.right[0].trees = trees({"9", "(parallel 6 7 8)"});
    seq.right[2].trees = trees({"(series 11 12)"});
    seq.right[4].trees = trees({"(parallel 13 14 15)", "16"});
}

AlphaLists example_alpha()
{
    LabeledGraph fx = build_appendix_fixture();
    return compute_alpha_lists(layer_partition(fx.graph, VertexSet::all(18), fixture_id("x")), fx.graph);
}

// mu from the definition: C_i looks for the farthest C'_j it touches,
// C'_j for the farthest C_i it is not completely joined to.
std::pair<std::vector<int>, std::vector<int>> mu_by_definition(const Graph& g, const CoComponentSequence& seq)
{
    std::vector<int> left;
    std::vector<int> right;
    for (const auto& c : seq.left) {
        int best = 0;
        for (std::size_t j = 0; j < seq.right.size(); ++j) {
            for (Vertex u : c.members) {
                for (Vertex v : seq.right[j].members) {
                    if (g.adjacent(u, v)) {
                        best = std::max(best, static_cast<int>(j + 1));
                    }
                }
            }
        }
        left.push_back(best);
    }
    for (const auto& c : seq.right) {
        int best = 0;
        for (std::size_t i = 0; i < seq.left.size(); ++i) {
            for (Vertex u : seq.left[i].members) {
                for (Vertex v : c.members) {
                    if (!g.adjacent(u, v)) {
                        best = std::max(best, static_cast<int>(i + 1));
                    }
                }
            }
        }
        right.push_back(-best);
    }
    return {left, right};
}

} // namespace

TEST_CASE("decompose: small graphs")
{
    CHECK(canonical_serialize(decompose(build_graph(1, {}))) == "0");
    CHECK(canonical_serialize(decompose(build_graph(2, {}))) == "(parallel 0 1)");
    CHECK(canonical_serialize(decompose(build_graph(2, {{0, 1}}))) == "(series 0 1)");
    CHECK(canonical_serialize(decompose(p4())) == "(prime 0 1 2 3)");
    CHECK(canonical_serialize(decompose(build_graph(5, {}))) == "(parallel 0 1 2 3 4)");
    CHECK_THROWS_AS(decompose(build_graph(0, {})), InputError);
}

TEST_CASE("decompose: a refined prime neighbourhood tree is broken up")
{
    // G[N(0)] decomposes as (prime 8 (parallel 3 5) 7 6). Vertex 2 splits
    // {3, 5}, after which the prime node is no longer a module of G.
    Graph g = build_graph(10, {{0, 3}, {0, 5}, {0, 6}, {0, 7}, {0, 8}, {2, 3}, {2, 4}, {3, 8}, {4, 5}, {4, 9},
                               {5, 8}, {6, 7}, {7, 8}});
    CHECK(canonical_serialize(decompose(g)) == "(parallel (prime 0 2 3 4 5 6 7 8 9) 1)");
    CHECK(canonical_serialize(decompose(g)) == canonical_serialize(md_tree_bruteforce(g)));
}

TEST_CASE("decompose: the example graph")
{
    LabeledGraph fx = build_appendix_fixture();
    MDTree t = decompose(fx.graph);
    CHECK(validate(t, fx.graph).ok());
    CHECK(canonical_serialize(t) == canonical_serialize(md_tree_recursive(fx.graph)));

    // Root: prime over a, the parallel module, {m, n, p}, q and r. The
    // parallel module holds the inner prime node, b, j and {k, l}.
    const MDNode& root = t.node(t.root());
    CHECK(root.kind == NodeKind::prime);
    std::vector<std::vector<Vertex>> kids;
    for (NodeId c : root.children) {
        auto span = t.leaves(c);
        kids.push_back(sorted({span.begin(), span.end()}));
    }
    std::sort(kids.begin(), kids.end());
    std::vector<std::vector<Vertex>> want = {
        ids({"a"}),
        ids({"x", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"}),
        ids({"m", "n", "p"}),
        ids({"q"}),
        ids({"r"}),
    };
    std::sort(want.begin(), want.end());
    CHECK(kids == want);
    CHECK(canonical_serialize(t) ==
          canonical_serialize(MDTree::parse("(prime 1 (parallel (prime 0 (parallel 3 4 5) 9 (parallel 6 7 8)) 2 10 "
                                            "(series 11 12)) (parallel 13 14 15) 16 17)")));
}

TEST_CASE("layer_partition")
{
    LayerPartition lp = layer_partition(p4(), VertexSet::all(4), 1);
    CHECK(lp.pivot == 1);
    CHECK(lp.layers == std::vector<std::vector<Vertex>>{{0, 2}, {3}});
    CHECK(lp.unreached.empty());

    LabeledGraph fx = build_appendix_fixture();
    LayerPartition ex = layer_partition(fx.graph, VertexSet::all(18), fixture_id("x"));
    REQUIRE(ex.layers.size() == 3);
    CHECK(ex.layers[0] == ids({"a", "c", "d", "e"}));
    CHECK(ex.layers[1] == ids({"b", "f", "g", "h", "i", "j", "k", "l", "m", "n", "p", "q"}));
    CHECK(ex.layers[2] == ids({"r"}));

    LayerPartition apart = layer_partition(build_graph(2, {}), VertexSet::all(2), 0);
    CHECK(apart.layers.empty());
    CHECK(apart.unreached == std::vector<Vertex>{1});

    CHECK_THROWS_AS(layer_partition(p4(), set_of(4, {0, 1}), 3), InputError);
    CHECK(layer_partition(p4(), set_of(4, {0, 1, 3}), 0).unreached == std::vector<Vertex>{3});
}

TEST_CASE("compute_alpha_lists: active edges of the example")
{
    AlphaLists alpha = example_alpha();
    CHECK(alpha.of(fixture_id("a")) == ids({"x", "b", "j", "f", "g", "h", "i", "k", "l", "m", "n", "p", "q"}));
    for (auto v : {"c", "d", "e"}) {
        CHECK(alpha.of(fixture_id(v)) == ids({"x", "i"}));
    }
    CHECK(alpha.of(fixture_id("q")) == ids({"a", "r"}));
    CHECK(alpha.of(fixture_id("r")) == ids({"q"}));
    CHECK(alpha.of(fixture_id("i")) == ids({"a", "c", "d", "e"}));
    CHECK(alpha.of(fixture_id("x")) == ids({"a", "c", "d", "e"}));
    CHECK(alpha.of(fixture_id("k")) == ids({"a"}));
}

TEST_CASE("compute_alpha_lists: path and single vertex")
{
    AlphaLists alpha = compute_alpha_lists(layer_partition(p4(), VertexSet::all(4), 1), p4());
    CHECK(alpha.of(0) == std::vector<Vertex>{1});
    CHECK(alpha.of(2) == std::vector<Vertex>{1, 3});
    CHECK(alpha.of(3) == std::vector<Vertex>{2});
    CHECK(alpha.of(1) == std::vector<Vertex>{0, 2});

    AlphaLists none = compute_alpha_lists(layer_partition(build_graph(1, {}), VertexSet::all(1), 0), build_graph(1, {}));
    CHECK(none.of(0).empty());
    CHECK(none.edge_count() == 0);
}

TEST_CASE("compute_mu: the example's values")
{
    CoComponentSequence seq = example_sequence();
    compute_mu(seq, example_alpha());
    CHECK(seq.left[1].mu == MuPosition::right(5));  // C_2 = {a}
    CHECK(seq.left[0].mu == MuPosition::right(1));  // C_1 = {c, d, e}
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(seq.right[j].mu == MuPosition::left(1));
    }
    CHECK(seq.right[5].mu == MuPosition::left(2));
    CHECK(seq.right[4].right_edge);
    for (std::size_t j : {0u, 1u, 2u, 3u, 5u}) {
        CHECK_FALSE(seq.right[j].right_edge);
    }

    LabeledGraph fx = build_appendix_fixture();
    auto [left, right] = mu_by_definition(fx.graph, seq);
    for (std::size_t i = 0; i < seq.left.size(); ++i) {
        CHECK(seq.left[i].mu.value() == left[i]);
    }
    for (std::size_t j = 0; j < seq.right.size(); ++j) {
        CHECK(seq.right[j].mu.value() == right[j]);
    }
}

TEST_CASE("compute_mu: empty right side and the path stage")
{
    // Star with its centre as pivot: every co-component of the leaves sees nothing to the right.
    CoComponentSequence star;
    star.pivot = 0;
    for (Vertex v : {1, 2, 3}) {
        CoComponent c;
        c.members = {v};
        star.left.push_back(c);
    }
    Graph k13 = build_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    compute_mu(star, compute_alpha_lists(layer_partition(k13, VertexSet::all(4), 0), k13));
    for (const auto& c : star.left) {
        CHECK(c.mu == MuPosition::pivot());
    }

    // P4 from vertex 1: C_1 = {0, 2}, C'_1 = {3}.
    CoComponentSequence path;
    path.pivot = 1;
    CoComponent c1;
    c1.members = {0, 2};
    CoComponent d1;
    d1.members = {3};
    d1.layer = 1;
    path.left = {c1};
    path.right = {d1};
    compute_mu(path, compute_alpha_lists(layer_partition(p4(), VertexSet::all(4), 1), p4()));
    auto [left, right] = mu_by_definition(p4(), path);
    CHECK(path.left[0].mu.value() == left[0]);
    CHECK(path.right[0].mu.value() == right[0]);
    CHECK(path.left[0].mu == MuPosition::right(1));
    CHECK(path.right[0].mu == MuPosition::left(1));
}

TEST_CASE("MuPosition orders like the layout")
{
    CHECK(MuPosition::left(2) < MuPosition::left(1));
    CHECK(MuPosition::left(1) < MuPosition::pivot());
    CHECK(MuPosition::pivot() < MuPosition::right(1));
    CHECK(to_string(MuPosition::left(2)) == "C2");
    CHECK(to_string(MuPosition::right(3)) == "C'3");
    CHECK(to_string(MuPosition::pivot()) == "x");
}

TEST_CASE("delineate: the example's brackets")
{
    CoComponentSequence seq = example_sequence();
    compute_mu(seq, example_alpha());
    auto brackets = delineate(seq);
    CHECK(brackets == std::vector<Bracket>{{1, 1, NodeKind::prime}, {1, 4, NodeKind::parallel}, {2, 6, NodeKind::prime}});
}

TEST_CASE("delineate: series and parallel stages")
{
    TopStageRecord k3 = trace_top_stage(build_graph(3, {{0, 1}, {0, 2}, {1, 2}}));
    CHECK(k3.brackets == std::vector<Bracket>{{2, 0, NodeKind::series}});

    CoComponentSequence apart;
    apart.pivot = 0;
    CoComponent lone;
    lone.members = {1};
    lone.layer = 1;
    apart.right = {lone};
    CHECK(delineate(apart) == std::vector<Bracket>{{0, 1, NodeKind::parallel}});
}

TEST_CASE("delineate: a path needs the whole stage as one prime bracket")
{
    TopStageRecord rec = trace_top_stage(p4());
    CHECK(rec.brackets == std::vector<Bracket>{{1, 2, NodeKind::prime}});
}

TEST_CASE("assemble")
{
    CoComponentSequence seq;
    seq.pivot = 0;
    CoComponent c;
    c.members = {1};
    seq.left = {c};
    const Bracket series[] = {{1, 0, NodeKind::series}};
    CHECK(canonical_serialize(assemble(series, seq)) == "(series 0 1)");

    // The example: each entry carries the trees it is left with after promotion.
    LabeledGraph fx = build_appendix_fixture();
    CoComponentSequence ex = example_sequence();
    attach_promoted_trees(ex);
    compute_mu(ex, example_alpha());
    auto brackets = delineate(ex);
    MDTree t = assemble(brackets, ex);
    CHECK(canonical_serialize(t) == canonical_serialize(decompose(fx.graph)));

    const Bracket crossing[] = {{1, 4, NodeKind::parallel}, {1, 1, NodeKind::prime}};
    CHECK_THROWS_AS(assemble(crossing, ex), InternalError);
    const Bracket partial[] = {{1, 1, NodeKind::prime}};
    CHECK_THROWS_AS(assemble(partial, ex), InternalError);
}

TEST_CASE("assemble builds one spine node per bracket")
{
    LabeledGraph fx = build_appendix_fixture();
    CoComponentSequence ex = example_sequence();
    attach_promoted_trees(ex);
    compute_mu(ex, example_alpha());
    MDTree t = assemble(delineate(ex), ex);

    // Walk from the pivot leaf upward: prime, parallel, prime.
    NodeId leaf_x = no_node;
    for (NodeId id = 0; id < static_cast<NodeId>(t.node_count()); ++id) {
        if (t.node(id).kind == NodeKind::leaf && t.node(id).vertex == fixture_id("x")) {
            leaf_x = id;
        }
    }
    REQUIRE(leaf_x != no_node);
    NodeId s1 = t.parent(leaf_x);
    NodeId s2 = t.parent(s1);
    NodeId s3 = t.parent(s2);
    CHECK(t.node(s1).kind == NodeKind::prime);
    CHECK(t.node(s2).kind == NodeKind::parallel);
    CHECK(t.node(s3).kind == NodeKind::prime);
    CHECK(s3 == t.root());
    CHECK(t.leaves(s1).size() == 8);
    CHECK(t.leaves(s2).size() == 12);
}

TEST_CASE("recursive_stage")
{
    Graph g = build_graph(5, {{0, 1}, {2, 3}, {3, 4}});
    CHECK(canonical_serialize(recursive_stage(g, set_of(5, {3}))) == "3");
    CHECK(canonical_serialize(recursive_stage(g, set_of(5, {0, 1}))) == "(series 0 1)");
    CHECK(canonical_serialize(recursive_stage(g, set_of(5, {2, 3, 4}))) == "(series (parallel 2 4) 3)");
    CHECK_THROWS_AS(recursive_stage(g, VertexSet(5)), InputError);

    for (const Graph& h : random_small_graphs(200, 3, 10, 41)) {
        const std::size_t n = h.vertex_count();
        VertexSet odd(n);
        for (Vertex v = 1; static_cast<std::size_t>(v) < n; v += 2) {
            odd.insert(v);
        }
        InducedSubgraph sub = induced_subgraph(h, odd);
        MDTree want = md_tree_bruteforce(sub.graph);
        std::vector<MDNode> mapped;
        for (std::size_t id = 0; id < want.node_count(); ++id) {
            MDNode nd = want.node(static_cast<NodeId>(id));
            if (nd.kind == NodeKind::leaf) {
                nd.vertex = sub.to_parent[nd.vertex];
            }
            mapped.push_back(nd);
        }
        CHECK(canonical_serialize(recursive_stage(h, odd)) == canonical_serialize(MDTree(mapped, want.root())));
    }
}

TEST_CASE("top stage of the example: layers, active edges, sequence and brackets")
{
    LabeledGraph fx = build_appendix_fixture();
    TopStageRecord rec = trace_top_stage(fx.graph);
    REQUIRE(rec.seen);
    CHECK(rec.layers.pivot == fixture_id("x"));
    CHECK(rec.layers.layers == layer_partition(fx.graph, VertexSet::all(18), 0).layers);
    CHECK(rec.alpha == example_alpha());

    const auto& seq = rec.sequence;
    REQUIRE(seq.left.size() == 2);
    REQUIRE(seq.right.size() == 6);
    CHECK(seq.left[0].members == ids({"c", "d", "e"}));
    CHECK(seq.left[1].members == ids({"a"}));
    CHECK(seq.right[0].members == ids({"f", "g", "h", "i"}));
    CHECK(seq.right[4].members == ids({"m", "n", "p", "q"}));
    CHECK(seq.right[5].members == ids({"r"}));
    // The three components absorbed by the parallel bracket, in forest order.
    std::vector<std::vector<Vertex>> middle = {seq.right[1].members, seq.right[2].members, seq.right[3].members};
    std::sort(middle.begin(), middle.end());
    CHECK(middle == std::vector<std::vector<Vertex>>{ids({"b"}), ids({"j"}), ids({"k", "l"})});

    CHECK(rec.brackets ==
          std::vector<Bracket>{{1, 1, NodeKind::prime}, {1, 4, NodeKind::parallel}, {2, 6, NodeKind::prime}});
}

TEST_CASE("top stage of the example: refinement marks and promotion")
{
    LabeledGraph fx = build_appendix_fixture();
    TopStageRecord rec = trace_top_stage(fx.graph);
    CHECK(rec.recursed == "(series (parallel 3 4 5) 1) | 0 | (parallel 2 (series 9 (parallel 6 7 8)) 10 (series 12 11) "
                          "(series 16 (parallel 13 14 15))) | 17");
    // {f, g, h, i} is marked left by the refiners c, d, e; {m, n, p, q} is marked right by r.
    CHECK(rec.refined == "1^L | (parallel^L 3 4 5) | 0 | (parallel^LR 2 (series^L 9^L (parallel^L 6 7 8)) 10 "
                         "(series 12 11) (series^R (parallel^R 13 14 15) 16^R)) | 17");
    CHECK(rec.promoted ==
          "1 | (parallel 3 4 5) | 0 | 9 | (parallel 6 7 8) | (parallel 2 10 (series 12 11)) | (parallel 13 14 15) | 16 | 17");
    CHECK(rec.promoted_order.size() == 18);
}

TEST_CASE("trace writer reports every stage")
{
    std::ostringstream out;
    TraceWriter writer(out);
    LabeledGraph fx = build_appendix_fixture();
    decompose(fx.graph, &writer);
    const std::string text = out.str();
    CHECK(text.find("stage 0 pivot 0") != std::string::npos);
    CHECK(text.find("brackets: [1,1 prime] [1,4 parallel] [2,6 prime]") != std::string::npos);
    CHECK(text.find("mu: C1->C'1 C2->C'5") != std::string::npos);
}

TEST_CASE("decompose equals the oracle on every graph with at most 5 vertices")
{
    for (std::size_t n = 1; n <= 5; ++n) {
        for_each_graph(n, [](const Graph& g) {
            CHECK(canonical_serialize(decompose(g)) == canonical_serialize(md_tree_bruteforce(g)));
        });
    }
}

TEST_CASE("decompose equals the oracle on random graphs up to 12 vertices")
{
    for (const Graph& g : random_small_graphs(1500, 1, 12, 42)) {
        CHECK(canonical_serialize(decompose(g)) == canonical_serialize(md_tree_bruteforce(g)));
    }
}

TEST_CASE("decompose equals the recursive oracle on mid-size sparse graphs")
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 20 + seed % 25;
        Graph g = gen_gnp(n, 2.5 / static_cast<double>(n), seed);
        CHECK(canonical_serialize(decompose(g)) == canonical_serialize(md_tree_recursive(g)));
    }
}
