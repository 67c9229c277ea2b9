// Command-line front end: decompose, verify, gen, bench.

#include "mdec/decomposer.hpp"
#include "mdec/errors.hpp"
#include "mdec/io.hpp"
#include "mdec/oracle.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace mdec;

// Above this the recursive oracle gets slow; verify falls back to validate alone.
constexpr std::size_t recursive_oracle_limit = 64;

LabeledGraph load(const std::string& path, bool lenient)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::vector<std::string> warnings;
    LabeledGraph lg = parse_graph(buf.str(), lenient ? ParseMode::lenient : ParseMode::strict, &warnings);
    for (const auto& w : warnings) {
        std::cerr << path << ": warning: " << w << '\n';
    }
    return lg;
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + out_path);
    }
    out << text;
}

int run_decompose(const std::string& path, const std::string& format, bool trace, bool lenient)
{
    LabeledGraph lg = load(path, lenient);
    if (lg.graph.vertex_count() == 0) {
        throw InputError(path + ": graph has no vertices");
    }
    TraceWriter writer(std::cerr);
    MDTree t = decompose(lg.graph, trace ? &writer : nullptr);
    if (format == "dot") {
        std::cout << render_dot(t, lg.labels);
    } else if (format == "record") {
        std::cout << render_record(t, lg.labels);
    } else {
        std::cout << canonical_serialize(t) << '\n';
    }
    return 0;
}

int run_verify(const std::string& path, bool lenient)
{
    LabeledGraph lg = load(path, lenient);
    const Graph& g = lg.graph;
    if (g.vertex_count() == 0) {
        throw InputError(path + ": graph has no vertices");
    }
    MDTree t = decompose(g);
    const std::string got = canonical_serialize(t);
    int status = 0;
    ValidationReport report = validate(t, g);
    for (const auto& v : report.violations) {
        std::cerr << "violation: " << v << '\n';
        status = 1;
    }
    std::string oracle_name = "none";
    if (g.vertex_count() <= recursive_oracle_limit) {
        const bool small = g.vertex_count() <= bruteforce_limit;
        oracle_name = small ? "subset enumeration" : "recursive definition";
        const std::string want = canonical_serialize(small ? md_tree_bruteforce(g) : md_tree_recursive(g));
        if (want != got) {
            std::cerr << "mismatch:\n  decompose: " << got << "\n  oracle:    " << want << '\n';
            status = 1;
        }
    }
    if (status == 0) {
        std::cout << "ok: n=" << g.vertex_count() << " m=" << g.edge_count() << " oracle=" << oracle_name << '\n'
                  << got << '\n';
    }
    return status;
}

std::vector<std::size_t> parse_sizes(const std::string& text)
{
    std::vector<std::size_t> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            unsigned long long v = std::stoull(item, &used);
            if (used != item.size() || v == 0) {
                throw std::invalid_argument(item);
            }
            sizes.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw InputError("bad size '" + item + "' in --sizes");
        }
    }
    if (sizes.empty()) {
        throw InputError("--sizes is empty");
    }
    return sizes;
}

int run_bench(const std::string& sizes_text, double avg_degree, std::uint64_t seed)
{
    std::printf("%10s %10s %12s %16s\n", "n", "m", "seconds", "ns_per_(n+m)");
    for (std::size_t n : parse_sizes(sizes_text)) {
        const double p = n > 1 ? std::min(1.0, avg_degree / static_cast<double>(n - 1)) : 0.0;
        Graph g = gen_gnp(n, p, seed + n);
        auto start = std::chrono::steady_clock::now();
        MDTree t = decompose(g);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        (void)t;
        std::printf("%10zu %10zu %12.4f %16.1f\n", n, g.edge_count(), secs,
                    secs * 1e9 / static_cast<double>(n + g.edge_count()));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Modular decomposition of undirected graphs"};
    app.require_subcommand(1);

    auto* dec = app.add_subcommand("decompose", "Print the modular decomposition tree of a graph file");
    std::string dec_file;
    std::string format = "canonical";
    bool trace = false;
    bool lenient = false;
    dec->add_option("file", dec_file, "Graph file")->required();
    dec->add_option("--format", format, "canonical, dot or record")
        ->check(CLI::IsMember({"canonical", "dot", "record"}));
    dec->add_flag("--trace", trace, "Dump every stage to standard error");
    dec->add_flag("--lenient", lenient, "Drop self-loops and collapse duplicate edges with a warning");

    auto* ver = app.add_subcommand("verify", "Decompose, validate, and compare with the brute-force oracle");
    std::string ver_file;
    bool ver_lenient = false;
    ver->add_option("file", ver_file, "Graph file")->required();
    ver->add_flag("--lenient", ver_lenient, "Drop self-loops and collapse duplicate edges with a warning");

    auto* gen = app.add_subcommand("gen", "Write a generated graph file");
    gen->require_subcommand(1);
    std::string out_path;
    gen->add_option("-o,--output", out_path, "Output file (default: standard output)");
    std::size_t gnp_n = 0;
    double gnp_p = 0.5;
    std::uint64_t gnp_seed = 1;
    auto* gnp = gen->add_subcommand("gnp", "Erdos-Renyi G(n, p)");
    gnp->add_option("n", gnp_n, "Vertex count")->required();
    gnp->add_option("p", gnp_p, "Edge probability")->required();
    gnp->add_option("--seed", gnp_seed, "Random seed");
    std::size_t co_n = 0;
    std::uint64_t co_seed = 1;
    auto* co = gen->add_subcommand("cograph", "Random cograph");
    co->add_option("n", co_n, "Vertex count")->required();
    co->add_option("--seed", co_seed, "Random seed");
    auto* appendix = gen->add_subcommand("appendix", "The 18-vertex worked example");
    for (auto* sub : {gnp, co, appendix}) {
        sub->fallthrough();
    }

    auto* bench = app.add_subcommand("bench", "Time decomposition of sparse random graphs");
    std::string sizes = "10000,20000,40000,80000,160000";
    double avg_degree = 10.0;
    std::uint64_t bench_seed = 1;
    bench->add_option("--sizes", sizes, "Comma-separated vertex counts");
    bench->add_option("--avg-degree", avg_degree, "Expected average degree")->check(CLI::NonNegativeNumber);
    bench->add_option("--seed", bench_seed, "Random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*dec) {
            return run_decompose(dec_file, format, trace, lenient);
        }
        if (*ver) {
            return run_verify(ver_file, ver_lenient);
        }
        if (*gen) {
            if (*gnp) {
                emit(render_graph(gen_gnp(gnp_n, gnp_p, gnp_seed)), out_path);
            } else if (*co) {
                emit(render_graph(gen_random_cograph(co_n, co_seed).graph), out_path);
            } else if (*appendix) {
                LabeledGraph lg = build_appendix_fixture();
                emit(render_graph(lg.graph, lg.labels), out_path);
            }
            return 0;
        }
        if (*bench) {
            return run_bench(sizes, avg_degree, bench_seed);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
