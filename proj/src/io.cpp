#include "mdec/io.hpp"

#include "mdec/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace mdec {

namespace {

std::vector<std::string_view> split_words(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw InputError("line " + std::to_string(line) + ": " + what);
}

long long to_number(std::string_view word, std::size_t line)
{
    long long value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size()) {
        fail(line, "expected an integer, got '" + std::string(word) + "'");
    }
    if (value < 0) {
        fail(line, "negative value " + std::to_string(value));
    }
    return value;
}

} // namespace

LabeledGraph parse_graph(std::string_view text, ParseMode mode, std::vector<std::string>* warnings)
{
    const bool strict = mode == ParseMode::strict;
    auto warn = [&](std::size_t line, const std::string& what) {
        if (warnings) {
            warnings->push_back("line " + std::to_string(line) + ": " + what);
        }
    };

    long long declared_n = -1;
    long long declared_m = -1;
    std::vector<Edge> edges;
    std::set<Edge> seen_edges;
    std::map<long long, std::string> names;
    std::set<std::string> used_names;
    long long max_id = -1;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        auto words = split_words(line);
        if (words.empty() || words[0] == "c") {
            continue;
        }
        const std::string_view tag = words[0];
        if (tag == "p") {
            if (words.size() != 3) {
                fail(line_no, "header must be 'p <n> <m>'");
            }
            if (declared_n >= 0) {
                fail(line_no, "second header line");
            }
            declared_n = to_number(words[1], line_no);
            declared_m = to_number(words[2], line_no);
            if (max_id >= declared_n) {
                fail(line_no, "header declares " + std::to_string(declared_n) + " vertices but id " +
                                  std::to_string(max_id) + " was already used");
            }
        } else if (tag == "e") {
            if (words.size() != 3) {
                fail(line_no, "edge must be 'e <u> <v>'");
            }
            long long u = to_number(words[1], line_no);
            long long v = to_number(words[2], line_no);
            if (declared_n >= 0 && (u >= declared_n || v >= declared_n)) {
                fail(line_no, "endpoint out of range for " + std::to_string(declared_n) + " vertices");
            }
            if (std::max(u, v) > INT32_MAX - 1) {
                fail(line_no, "vertex id too large");
            }
            max_id = std::max({max_id, u, v});
            if (u == v) {
                if (strict) {
                    fail(line_no, "self-loop on " + std::to_string(u));
                }
                warn(line_no, "dropped self-loop on " + std::to_string(u));
                continue;
            }
            Edge e{static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v))};
            if (!seen_edges.insert(e).second) {
                if (strict) {
                    fail(line_no, "duplicate edge " + std::to_string(e.first) + " " + std::to_string(e.second));
                }
                warn(line_no, "collapsed duplicate edge " + std::to_string(e.first) + " " + std::to_string(e.second));
                continue;
            }
            edges.push_back(e);
        } else if (tag == "n") {
            if (words.size() < 3) {
                fail(line_no, "label must be 'n <id> <name>'");
            }
            long long id = to_number(words[1], line_no);
            if (declared_n >= 0 && id >= declared_n) {
                fail(line_no, "labelled id out of range");
            }
            if (id > INT32_MAX - 1) {
                fail(line_no, "vertex id too large");
            }
            // The name runs to the end of the line.
            std::string_view rest = line.substr(static_cast<std::size_t>(words[2].data() - line.data()));
            while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t' || rest.back() == '\r')) {
                rest.remove_suffix(1);
            }
            std::string name(rest);
            if (names.count(id)) {
                fail(line_no, "vertex " + std::to_string(id) + " labelled twice");
            }
            if (!used_names.insert(name).second) {
                fail(line_no, "label '" + name + "' used twice");
            }
            names[id] = name;
            max_id = std::max(max_id, id);
        } else {
            fail(line_no, "unknown line type '" + std::string(tag) + "'");
        }
    }

    const std::size_t n = declared_n >= 0 ? static_cast<std::size_t>(declared_n) : static_cast<std::size_t>(max_id + 1);
    if (strict && declared_m >= 0 && static_cast<std::size_t>(declared_m) != edges.size()) {
        throw InputError("header declares " + std::to_string(declared_m) + " edges but " +
                         std::to_string(edges.size()) + " were given");
    }
    if (!strict && declared_m >= 0 && static_cast<std::size_t>(declared_m) != edges.size()) {
        warn(line_no, "header declares " + std::to_string(declared_m) + " edges, kept " + std::to_string(edges.size()));
    }

    LabeledGraph out;
    out.graph = build_graph(n, edges);
    if (!names.empty()) {
        if (names.size() != n) {
            if (strict) {
                throw InputError("labels given for " + std::to_string(names.size()) + " of " + std::to_string(n) +
                                 " vertices");
            }
            warn(line_no, "unlabelled vertices are named by their id");
        }
        out.labels.resize(n);
        for (std::size_t v = 0; v < n; ++v) {
            auto it = names.find(static_cast<long long>(v));
            std::string name = it != names.end() ? it->second : std::to_string(v);
            if (it == names.end() && used_names.count(name)) {
                throw InputError("fallback label '" + name + "' collides with a declared label");
            }
            out.labels[v] = std::move(name);
        }
    }
    return out;
}

std::string render_graph(const Graph& g, const std::vector<std::string>& labels)
{
    if (!labels.empty() && labels.size() != g.vertex_count()) {
        throw InputError("render_graph: label count does not match the vertex count");
    }
    std::ostringstream os;
    os << "p " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (std::size_t v = 0; v < labels.size(); ++v) {
        os << "n " << v << ' ' << labels[v] << '\n';
    }
    for (auto [u, v] : g.edges()) {
        os << "e " << u << ' ' << v << '\n';
    }
    return os.str();
}

namespace {

std::string leaf_name(Vertex v, const std::vector<std::string>& labels)
{
    if (labels.empty()) {
        return std::to_string(v);
    }
    return labels.at(static_cast<std::size_t>(v));
}

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

} // namespace

std::string render_dot(const MDTree& t, const std::vector<std::string>& labels)
{
    std::ostringstream os;
    os << "digraph md {\n";
    for (std::size_t id = 0; id < t.node_count(); ++id) {
        const MDNode& nd = t.node(static_cast<NodeId>(id));
        os << "  n" << id << " [";
        switch (nd.kind) {
        case NodeKind::leaf:
            os << "shape=plaintext, label=\"" << dot_escape(leaf_name(nd.vertex, labels)) << '"';
            break;
        case NodeKind::series:
            os << "shape=circle, label=\"1\"";
            break;
        case NodeKind::parallel:
            os << "shape=circle, label=\"0\"";
            break;
        case NodeKind::prime:
            os << "shape=box, label=\"P\"";
            break;
        }
        os << "];\n";
    }
    for (std::size_t id = 0; id < t.node_count(); ++id) {
        for (NodeId c : t.node(static_cast<NodeId>(id)).children) {
            os << "  n" << id << " -> n" << c << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string render_record(const MDTree& t, const std::vector<std::string>& labels)
{
    using nlohmann::json;
    std::vector<json> built(t.node_count());
    // Postorder, so every child is built before its parent.
    std::vector<std::pair<NodeId, bool>> stack{{t.root(), false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        const MDNode& nd = t.node(id);
        if (!expanded && nd.kind != NodeKind::leaf) {
            stack.push_back({id, true});
            for (NodeId c : nd.children) {
                stack.push_back({c, false});
            }
            continue;
        }
        json j;
        j["kind"] = std::string(to_string(nd.kind));
        if (nd.kind == NodeKind::leaf) {
            j["vertex"] = nd.vertex;
            if (!labels.empty()) {
                j["label"] = labels.at(static_cast<std::size_t>(nd.vertex));
            }
        } else {
            json kids = json::array();
            for (NodeId c : nd.children) {
                kids.push_back(std::move(built[c]));
            }
            j["children"] = std::move(kids);
        }
        built[id] = std::move(j);
    }
    return built[t.root()].dump(2) + "\n";
}

MDTree parse_record(std::string_view json_text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("record: ") + e.what());
    }
    std::vector<MDNode> nodes;
    std::vector<std::pair<const json*, NodeId>> stack{{&doc, no_node}};
    while (!stack.empty()) {
        auto [j, parent] = stack.back();
        stack.pop_back();
        if (!j->is_object() || !j->contains("kind") || !(*j)["kind"].is_string()) {
            throw InputError("record: every node needs a string \"kind\"");
        }
        const std::string kind = (*j)["kind"];
        MDNode nd;
        if (kind == "leaf") {
            if (!j->contains("vertex") || !(*j)["vertex"].is_number_integer()) {
                throw InputError("record: leaf without an integer \"vertex\"");
            }
            nd.vertex = (*j)["vertex"].get<Vertex>();
        } else if (kind == "series") {
            nd.kind = NodeKind::series;
        } else if (kind == "parallel") {
            nd.kind = NodeKind::parallel;
        } else if (kind == "prime") {
            nd.kind = NodeKind::prime;
        } else {
            throw InputError("record: unknown kind '" + kind + "'");
        }
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.push_back(std::move(nd));
        if (parent != no_node) {
            nodes[parent].children.push_back(id);
        }
        if (kind != "leaf") {
            if (!j->contains("children") || !(*j)["children"].is_array()) {
                throw InputError("record: internal node without \"children\"");
            }
            const json& kids = (*j)["children"];
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
                stack.push_back({&*it, id});
            }
        }
    }
    return MDTree(std::move(nodes), 0);
}

} // namespace mdec
