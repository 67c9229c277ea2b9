#include "mdec/decomposer.hpp"
#include "mdec/errors.hpp"
#include "mdec/graph.hpp"
#include "mdec/io.hpp"
#include "mdec/md_tree.hpp"
#include "mdec/oracle.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

namespace py = pybind11;
using namespace mdec;

namespace {

py::object tree_to_python(const MDTree& t, NodeId id)
{
    const MDNode& nd = t.node(id);
    if (nd.kind == NodeKind::leaf) {
        return py::int_(nd.vertex);
    }
    std::vector<NodeId> order = nd.children;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return t.min_leaf(a) < t.min_leaf(b); });
    py::list kids;
    for (NodeId c : order) {
        kids.append(tree_to_python(t, c));
    }
    return py::make_tuple(std::string(to_string(nd.kind)), kids);
}

std::vector<std::vector<Vertex>> modules_as_lists(const std::vector<VertexSet>& sets)
{
    std::vector<std::vector<Vertex>> out;
    for (const VertexSet& s : sets) {
        out.emplace_back(s.begin(), s.end());
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Linear-time modular decomposition of undirected graphs";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
    py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::vector<Edge>& edges) { return build_graph(n, edges); }),
             py::arg("n"), py::arg("edges") = std::vector<Edge>{})
        .def_property_readonly("vertex_count", &Graph::vertex_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("neighbors",
             [](const Graph& g, Vertex v) {
                 auto span = g.neighbors(v);
                 return std::vector<Vertex>(span.begin(), span.end());
             })
        .def("adjacent", &Graph::adjacent)
        .def("edges", &Graph::edges)
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
        .def("__repr__", [](const Graph& g) {
            return "<Graph n=" + std::to_string(g.vertex_count()) + " m=" + std::to_string(g.edge_count()) + ">";
        });

    py::class_<MDTree>(m, "Tree")
        .def_static("parse", &MDTree::parse, py::arg("text"))
        .def("canonical", &canonical_serialize)
        .def("to_python", [](const MDTree& t) { return tree_to_python(t, t.root()); },
             "Nested (kind, [children]) tuples, children ordered as in canonical().")
        .def("dot", [](const MDTree& t, const std::vector<std::string>& labels) { return render_dot(t, labels); },
             py::arg("labels") = std::vector<std::string>{})
        .def("record",
             [](const MDTree& t, const std::vector<std::string>& labels) { return render_record(t, labels); },
             py::arg("labels") = std::vector<std::string>{})
        .def_static("from_record", &parse_record, py::arg("json_text"))
        .def_property_readonly("root_kind", [](const MDTree& t) { return std::string(to_string(t.node(t.root()).kind)); })
        .def_property_readonly("leaf_order", [](const MDTree& t) {
            auto span = t.leaf_order();
            return std::vector<Vertex>(span.begin(), span.end());
        })
        .def("strong_modules", [](const MDTree& t) { return modules_as_lists(strong_modules(t)); })
        .def("validate", [](const MDTree& t, const Graph& g) { return validate(t, g).violations; },
             "Violations of the decomposition-tree conditions; empty when valid.")
        .def("__eq__", [](const MDTree& a, const MDTree& b) { return canonical_serialize(a) == canonical_serialize(b); })
        .def("__str__", &canonical_serialize)
        .def("__repr__", [](const MDTree& t) { return "<Tree " + canonical_serialize(t) + ">"; });

    m.def("decompose", [](const Graph& g) { return decompose(g); }, py::arg("graph"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "trace",
        [](const Graph& g) {
            std::ostringstream out;
            TraceWriter writer(out);
            decompose(g, &writer);
            return out.str();
        },
        py::arg("graph"), "Stage-by-stage text trace of a decomposition.");

    m.def(
        "parse_graph",
        [](std::string_view text, bool lenient) {
            std::vector<std::string> warnings;
            LabeledGraph lg = parse_graph(text, lenient ? ParseMode::lenient : ParseMode::strict, &warnings);
            return py::make_tuple(lg.graph, lg.labels, warnings);
        },
        py::arg("text"), py::arg("lenient") = false, "Returns (graph, labels, warnings).");
    m.def("render_graph", &render_graph, py::arg("graph"), py::arg("labels") = std::vector<std::string>{});

    m.def("gen_gnp", &gen_gnp, py::arg("n"), py::arg("p"), py::arg("seed"));
    m.def(
        "gen_random_cograph",
        [](std::size_t n, std::uint64_t seed) {
            Cograph c = gen_random_cograph(n, seed);
            return py::make_tuple(c.graph, c.cotree);
        },
        py::arg("n"), py::arg("seed"), "Returns (graph, cotree).");
    m.def(
        "example_graph",
        [] {
            LabeledGraph lg = build_appendix_fixture();
            return py::make_tuple(lg.graph, lg.labels);
        },
        "The 18-vertex worked example. Returns (graph, labels).");

    m.def("is_module", [](const Graph& g, const std::vector<Vertex>& s) {
        return is_module(g, VertexSet(g.vertex_count(), std::span<const Vertex>(s)));
    });
    m.def("strong_modules_bruteforce", [](const Graph& g) { return modules_as_lists(strong_modules_bruteforce(g)); });
    m.def("md_tree_bruteforce", &md_tree_bruteforce, py::arg("graph"));
    m.def("md_tree_recursive", &md_tree_recursive, py::arg("graph"));
    m.def("is_factorizing_permutation",
          [](const Graph& g, const std::vector<Vertex>& perm) { return is_factorizing_permutation(g, perm); },
          py::arg("graph"), py::arg("perm"));
}
