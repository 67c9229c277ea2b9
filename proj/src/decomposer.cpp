#include "mdec/decomposer.hpp"

#include "mdec/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <sstream>

namespace mdec {

// -- small value types --------------------------------------------------------

const std::vector<Vertex>& AlphaLists::of(Vertex v) const
{
    static const std::vector<Vertex> empty;
    auto it = lists_.find(v);
    return it == lists_.end() ? empty : it->second;
}

void AlphaLists::normalize()
{
    for (auto& [v, list] : lists_) {
        std::sort(list.begin(), list.end());
    }
}

std::size_t AlphaLists::edge_count() const
{
    std::size_t total = 0;
    for (const auto& [v, list] : lists_) {
        total += list.size();
    }
    return total / 2;
}

std::string to_string(MuPosition p)
{
    if (p.value() == 0) {
        return "x";
    }
    return p.value() < 0 ? "C" + std::to_string(-p.value()) : "C'" + std::to_string(p.value());
}

void StageObserver::on_layers(int, const LayerPartition&, const AlphaLists&) {}
void StageObserver::on_forest(int, StagePhase, const OrderedForest&) {}
void StageObserver::on_sequence(int, const CoComponentSequence&, std::span<const Bracket>) {}
void StageObserver::on_stage_done(int, const StageStats&, const MDTree&) {}

// -- standalone stage operations ---------------------------------------------

LayerPartition layer_partition(const Graph& g, const VertexSet& universe, Vertex x)
{
    if (universe.universe_size() != g.vertex_count()) {
        throw InputError("layer_partition: universe is over a different vertex range");
    }
    if (!universe.contains(x)) {
        throw InputError("layer_partition: pivot outside the universe");
    }
    LayerPartition lp;
    lp.pivot = x;
    std::vector<char> seen(g.vertex_count(), 0);
    seen[x] = 1;
    std::vector<Vertex> frontier{x};
    while (!frontier.empty()) {
        std::vector<Vertex> layer;
        for (Vertex u : frontier) {
            for (Vertex w : g.neighbors(u)) {
                if (!seen[w] && universe.contains(w)) {
                    seen[w] = 1;
                    layer.push_back(w);
                }
            }
        }
        if (layer.empty()) {
            break;
        }
        std::sort(layer.begin(), layer.end());
        lp.layers.push_back(layer);
        frontier = std::move(layer);
    }
    for (Vertex v : universe) {
        if (!seen[v]) {
            lp.unreached.push_back(v);
        }
    }
    return lp;
}

AlphaLists compute_alpha_lists(const LayerPartition& lp, const Graph& g)
{
    std::vector<int> layer(g.vertex_count(), -2);
    layer.at(lp.pivot) = -1;
    for (std::size_t i = 0; i < lp.layers.size(); ++i) {
        for (Vertex v : lp.layers[i]) {
            layer.at(v) = static_cast<int>(i);
        }
    }
    AlphaLists alpha;
    for (Vertex v = 0; static_cast<std::size_t>(v) < g.vertex_count(); ++v) {
        if (layer[v] == -2) {
            continue;
        }
        for (Vertex w : g.neighbors(v)) {
            if (layer[w] == -2 || layer[w] == layer[v]) {
                continue;
            }
            alpha.add(v, w);
        }
    }
    alpha.normalize();
    return alpha;
}

namespace {

struct SequenceArrays {
    std::vector<int> mu_left;     // index i-1
    std::vector<int> mu_right;    // index j-1
    std::vector<int> layer_right;
    std::vector<char> right_edge;
};

std::vector<Bracket> delineate_core(const SequenceArrays& s)
{
    const int kappa = static_cast<int>(s.mu_left.size());
    const int lambda = static_cast<int>(s.mu_right.size());
    std::vector<Bracket> out;
    int l = 0;
    int r = 0;
    while (l < kappa || r < lambda) {
        int nl = l;
        while (nl < kappa && s.mu_left[nl] <= r) {
            ++nl;
        }
        if (nl > l) {
            l = nl;
            out.push_back({l, r, NodeKind::series});
            continue;
        }
        int nr = r;
        while (nr < lambda && s.layer_right[nr] == 1 && !s.right_edge[nr] && s.mu_right[nr] >= -l) {
            ++nr;
        }
        if (nr > r) {
            r = nr;
            out.push_back({l, r, NodeKind::parallel});
            continue;
        }
        // Prime: take one entry from each side, then close. An entry on the
        // right with an edge into a later layer can only be enclosed by the
        // whole stage, so it pulls the boundary to the far end.
        nl = std::min(l + 1, kappa);
        nr = std::min(r + 1, lambda);
        int done_l = l;
        int done_r = r;
        while (done_l < nl || done_r < nr) {
            while (done_l < nl) {
                nr = std::max(nr, s.mu_left[done_l]);
                ++done_l;
            }
            while (done_r < nr) {
                nl = std::max(nl, -s.mu_right[done_r]);
                if (s.right_edge[done_r] || s.layer_right[done_r] >= 2) {
                    nr = lambda;
                }
                ++done_r;
            }
        }
        l = nl;
        r = nr;
        out.push_back({l, r, NodeKind::prime});
    }
    return out;
}

SequenceArrays arrays_of(const CoComponentSequence& seq)
{
    SequenceArrays s;
    for (const auto& c : seq.left) {
        s.mu_left.push_back(c.mu.value());
    }
    for (const auto& c : seq.right) {
        s.mu_right.push_back(c.mu.value());
        s.layer_right.push_back(c.layer);
        s.right_edge.push_back(c.right_edge ? 1 : 0);
    }
    return s;
}

void check_brackets(std::span<const Bracket> brackets, int kappa, int lambda)
{
    int l = 0;
    int r = 0;
    for (const Bracket& b : brackets) {
        if (b.left < l || b.right < r || (b.left == l && b.right == r) || b.left > kappa || b.right > lambda) {
            throw InternalError("brackets are not strictly nested");
        }
        l = b.left;
        r = b.right;
    }
    if (l != kappa || r != lambda) {
        throw InternalError("outermost bracket does not cover the sequence");
    }
}

// Lays out one spine level per bracket. `units` are detached trees in
// layout order, each tagged with the bracket level that first encloses it.
struct Unit {
    NodeId node;
    int level;
    bool left;
};

NodeId build_spine(OrderedForest& f, Vertex pivot, std::span<const Bracket> brackets, std::span<const Unit> units)
{
    std::vector<std::vector<NodeId>> before(brackets.size());
    std::vector<std::vector<NodeId>> after(brackets.size());
    for (const Unit& u : units) {
        (u.left ? before : after).at(static_cast<std::size_t>(u.level)).push_back(u.node);
    }
    NodeId spine = f.leaf(pivot);
    std::vector<NodeId> kids;
    for (std::size_t k = 0; k < brackets.size(); ++k) {
        kids = before[k];
        kids.push_back(spine);
        kids.insert(kids.end(), after[k].begin(), after[k].end());
        const NodeKind kind = brackets[k].kind;
        spine = f.make_node(kind, kids);
        if (kind != NodeKind::prime) {
            for (NodeId c : kids) {
                if (f.node(c).kind == kind) {
                    f.dissolve_into_parent(c);
                }
            }
        }
    }
    return spine;
}

std::vector<int> levels_of(std::span<const Bracket> brackets, int count, bool left)
{
    std::vector<int> level(static_cast<std::size_t>(count) + 1, -1);
    int done = 0;
    for (std::size_t k = 0; k < brackets.size(); ++k) {
        int upto = left ? brackets[k].left : brackets[k].right;
        for (; done < upto; ++done) {
            level[done + 1] = static_cast<int>(k);
        }
    }
    return level;
}

} // namespace

void compute_mu(CoComponentSequence& seq, const AlphaLists& alpha)
{
    // Signed position and layer of every vertex of the sequence.
    std::map<Vertex, std::pair<int, int>> where;
    where[seq.pivot] = {0, -1};
    for (std::size_t i = 0; i < seq.left.size(); ++i) {
        for (Vertex v : seq.left[i].members) {
            where[v] = {-static_cast<int>(i + 1), 0};
        }
    }
    for (std::size_t j = 0; j < seq.right.size(); ++j) {
        for (Vertex v : seq.right[j].members) {
            where[v] = {static_cast<int>(j + 1), seq.right[j].layer};
        }
    }
    auto locate = [&](Vertex v) {
        auto it = where.find(v);
        if (it == where.end()) {
            throw InputError("compute_mu: active edge leaves the sequence");
        }
        return it->second;
    };

    for (auto& c : seq.left) {
        int best = 0;
        for (Vertex v : c.members) {
            for (Vertex w : alpha.of(v)) {
                best = std::max(best, locate(w).first);
            }
        }
        c.mu = MuPosition::right(best);
        c.right_edge = false;
    }
    const int kappa = static_cast<int>(seq.left.size());
    for (auto& c : seq.right) {
        std::vector<std::int64_t> count(static_cast<std::size_t>(kappa) + 1, 0);
        bool later = false;
        for (Vertex v : c.members) {
            for (Vertex w : alpha.of(v)) {
                auto [pos, layer] = locate(w);
                if (pos < 0) {
                    ++count[-pos];
                }
                later = later || layer > c.layer;
            }
        }
        int i = kappa;
        while (i >= 1 && count[i] == static_cast<std::int64_t>(seq.left[i - 1].members.size()) *
                                         static_cast<std::int64_t>(c.members.size())) {
            --i;
        }
        c.mu = MuPosition::left(i);
        c.right_edge = later;
    }
}

std::vector<Bracket> delineate(const CoComponentSequence& seq)
{
    return delineate_core(arrays_of(seq));
}

MDTree assemble(std::span<const Bracket> brackets, const CoComponentSequence& seq)
{
    const int kappa = static_cast<int>(seq.left.size());
    const int lambda = static_cast<int>(seq.right.size());
    check_brackets(brackets, kappa, lambda);

    Vertex top = seq.pivot;
    auto scan_members = [&](const std::vector<CoComponent>& side) {
        for (const auto& c : side) {
            for (Vertex v : c.members) {
                top = std::max(top, v);
            }
            for (const MDTree& t : c.trees) {
                for (Vertex v : t.leaf_order()) {
                    top = std::max(top, v);
                }
            }
        }
    };
    scan_members(seq.left);
    scan_members(seq.right);
    if (seq.pivot < 0) {
        throw InputError("assemble: sequence has no pivot");
    }
    OrderedForest f(static_cast<std::size_t>(top) + 1);
    std::vector<Unit> units;
    auto add_units = [&](const CoComponent& c, int level, bool left) {
        if (c.trees.empty()) {
            if (c.members.size() != 1) {
                throw InputError("assemble: entry with several members but no trees");
            }
            units.push_back({f.leaf(c.members.front()), level, left});
        }
        for (const MDTree& t : c.trees) {
            units.push_back({f.import_tree(t), level, left});
        }
    };

    auto left_level = levels_of(brackets, kappa, true);
    auto right_level = levels_of(brackets, lambda, false);
    for (int i = kappa; i >= 1; --i) {
        add_units(seq.left[i - 1], left_level[i], true);
    }
    for (int j = 1; j <= lambda; ++j) {
        add_units(seq.right[j - 1], right_level[j], false);
    }
    return f.export_tree(build_spine(f, seq.pivot, brackets, units));
}

// -- the linear-time pipeline -------------------------------------------------

namespace {

struct Bucket {
    Vertex head = -1;
    Vertex tail = -1;
    std::size_t size = 0;
    int remainder_of = -1;  // frame whose unreached vertices this holds
};

struct Frame {
    Vertex pivot = -1;
    int remainder = -1;  // universe minus everything pulled into layers
    int current = -1;    // layer to recurse into next
    int next = -1;       // collects the layer after `current`
    std::vector<NodeId> layer_trees;
    NodeId component = no_node;  // set once the pivot's component is done
};

struct CompInfo {
    int layer = 0;
    std::size_t size = 0;
    int position = 0;  // signed sequence position once extracted
    std::size_t member_begin = 0;
    std::size_t member_end = 0;
};

class Pipeline {
public:
    Pipeline(const Graph& g, StageObserver* observer)
        : g_(g)
        , observer_(observer)
        , forest_(g.vertex_count())
        , bucket_of_(g.vertex_count(), -1)
        , prev_(g.vertex_count(), -1)
        , next_(g.vertex_count(), -1)
        , visited_(g.vertex_count(), 0)
        , layer_(g.vertex_count(), 0)
        , comp_of_(g.vertex_count(), -1)
        , alpha_(g.vertex_count())
    {
    }

    MDTree run()
    {
        const std::size_t n = g_.vertex_count();
        if (n == 0) {
            throw InputError("decompose: graph has no vertices");
        }
        int all = new_bucket();
        for (std::size_t v = 0; v < n; ++v) {
            push_back(all, static_cast<Vertex>(v));
        }
        return forest_.export_tree(solve(all));
    }

private:
    // -- buckets: intrusive vertex lists that keep insertion order --------
    int new_bucket()
    {
        buckets_.emplace_back();
        return static_cast<int>(buckets_.size() - 1);
    }

    void push_back(int b, Vertex v)
    {
        Bucket& bk = buckets_[b];
        bucket_of_[v] = b;
        prev_[v] = bk.tail;
        next_[v] = -1;
        if (bk.tail >= 0) {
            next_[bk.tail] = v;
        } else {
            bk.head = v;
        }
        bk.tail = v;
        ++bk.size;
    }

    void remove(Vertex v)
    {
        Bucket& bk = buckets_[bucket_of_[v]];
        if (prev_[v] >= 0) {
            next_[prev_[v]] = next_[v];
        } else {
            bk.head = next_[v];
        }
        if (next_[v] >= 0) {
            prev_[next_[v]] = prev_[v];
        } else {
            bk.tail = prev_[v];
        }
        --bk.size;
        bucket_of_[v] = -1;
        prev_[v] = next_[v] = -1;
    }

    void move(Vertex v, int b)
    {
        remove(v);
        push_back(b, v);
    }

    // -- recursion without the call stack ---------------------------------
    void start_frame(int universe)
    {
        const Vertex x = buckets_[universe].head;
        remove(x);
        visited_[x] = 1;
        Frame f;
        f.pivot = x;
        f.remainder = universe;
        f.current = new_bucket();
        f.next = new_bucket();
        buckets_[universe].remainder_of = static_cast<int>(frames_.size());
        for (Vertex w : g_.neighbors(x)) {
            if (visited_[w]) {
                alpha_[w].push_back(x);
                continue;
            }
            const int b = bucket_of_[w];
            if (b == universe) {
                move(w, f.current);
            } else if (buckets_[b].remainder_of >= 0) {
                move(w, frames_[buckets_[b].remainder_of].next);
            }
            // Otherwise w already sits in a pending layer; its own scan records the edge.
        }
        frames_.push_back(std::move(f));
    }

    NodeId solve(int universe)
    {
        start_frame(universe);
        NodeId pending = no_node;
        for (;;) {
            Frame& f = frames_.back();
            if (pending != no_node) {
                if (f.component != no_node) {
                    pending = join(f.component, pending);
                    frames_.pop_back();
                    if (frames_.empty()) {
                        return pending;
                    }
                    continue;
                }
                f.layer_trees.push_back(pending);
                pending = no_node;
                f.current = f.next;
                f.next = new_bucket();
            }
            if (buckets_[f.current].size > 0) {
                start_frame(f.current);
                continue;
            }
            NodeId comp = finish_stage(static_cast<int>(frames_.size() - 1));
            Frame& done = frames_.back();
            if (buckets_[done.remainder].size > 0) {
                done.component = comp;
                buckets_[done.remainder].remainder_of = -1;
                start_frame(done.remainder);
                continue;
            }
            frames_.pop_back();
            if (frames_.empty()) {
                return comp;
            }
            pending = comp;
        }
    }

    NodeId join(NodeId component, NodeId rest)
    {
        if (forest_.node(rest).kind == NodeKind::parallel) {
            forest_.prepend_child(rest, component);
            return rest;
        }
        const NodeId kids[] = {component, rest};
        return forest_.make_node(NodeKind::parallel, kids);
    }

    // -- one stage on the pivot's component -------------------------------
    NodeId finish_stage(int depth)
    {
        const Frame& f = frames_[static_cast<std::size_t>(depth)];
        const Vertex x = f.pivot;
        if (f.layer_trees.empty()) {
            return forest_.leaf(x);
        }

        // Layers and component membership.
        component_.clear();
        layer_[x] = -1;
        for (std::size_t i = 0; i < f.layer_trees.size(); ++i) {
            for (Vertex v : forest_.leaves(f.layer_trees[i])) {
                layer_[v] = static_cast<int>(i);
                component_.push_back(v);
            }
        }
        component_.push_back(x);

        // Each active edge was recorded once, by whichever endpoint became a
        // pivot later; mirror it so both lists hold it.
        original_size_.clear();
        for (Vertex v : component_) {
            original_size_.push_back(alpha_[v].size());
        }
        std::size_t active = 0;
        for (std::size_t k = 0; k < component_.size(); ++k) {
            Vertex v = component_[k];
            for (std::size_t e = 0; e < original_size_[k]; ++e) {
                alpha_[alpha_[v][e]].push_back(v);
            }
            active += original_size_[k];
        }
        if (observer_) {
            report_layers(depth);
        }

        // Tag the (co-)components, then lay out T(N_0), x, T(N_1), ...
        comps_.clear();
        comp_members_.clear();
        forest_.clear_roots();
        forest_.reset_counters();
        std::size_t forest_nodes = 1;
        for (std::size_t i = 0; i < f.layer_trees.size(); ++i) {
            const NodeId t = f.layer_trees[i];
            const NodeKind split = i == 0 ? NodeKind::series : NodeKind::parallel;
            if (forest_.node(t).kind == split) {
                for (NodeId c = forest_.node(t).first_child; c != no_node; c = forest_.node(c).next) {
                    tag_component(c, static_cast<int>(i));
                }
            } else {
                tag_component(t, static_cast<int>(i));
            }
            forest_nodes += forest_.tree_size(t);
            if (i == 0) {
                forest_.push_root(t, Side::left);
                forest_.push_root(forest_.leaf(x), Side::pivot);
            } else {
                forest_.push_root(t, Side::right);
            }
        }
        if (observer_) {
            observer_->on_forest(depth, StagePhase::recursed, forest_);
        }

        // Refinement, one call per vertex with active edges beyond the pivot.
        std::size_t refiners = 0;
        for (Vertex v : forest_.leaf_order()) {
            if (v == x) {
                continue;
            }
            const auto& list = alpha_[v];
            bool useful = std::any_of(list.begin(), list.end(), [x](Vertex w) { return w != x; });
            if (!useful) {
                continue;
            }
            ++refiners;
            if (forest_.side(v) == Side::left) {
                forest_.refine_with_set(list, Direction::left, Direction::left);
            } else {
                forest_.refine_with_set(list, Direction::left, Direction::right);
            }
        }
        forest_nodes += forest_.counters().nodes_created;
        if (observer_) {
            observer_->on_forest(depth, StagePhase::refined, forest_);
        }

        forest_.promote();
        if (observer_) {
            observer_->on_forest(depth, StagePhase::promoted, forest_);
        }

        const NodeId result = assemble_stage(x, depth);

        for (Vertex v : component_) {
            alpha_[v].clear();
        }
        if (observer_) {
            StageStats stats;
            stats.pivot = x;
            stats.component_size = component_.size();
            stats.forest_nodes = forest_nodes;
            stats.active_edges = active;
            stats.refiners = refiners;
            stats.refine_calls = forest_.counters().refine_calls;
            stats.mark_ops = forest_.counters().mark_ops;
            observer_->on_stage_done(depth, stats, forest_.export_tree(result));
        }
        return result;
    }

    void tag_component(NodeId tree, int layer)
    {
        CompInfo info;
        info.layer = layer;
        info.member_begin = comp_members_.size();
        const int id = static_cast<int>(comps_.size());
        for (Vertex v : forest_.leaves(tree)) {
            comp_of_[v] = id;
            comp_members_.push_back(v);
        }
        info.member_end = comp_members_.size();
        info.size = info.member_end - info.member_begin;
        comps_.push_back(info);
    }

    NodeId assemble_stage(Vertex x, int depth)
    {
        // Read the (co-)components off the promoted forest, left to right.
        left_order_.clear();
        right_order_.clear();
        root_span_.clear();
        bool past_pivot = false;
        int last = -1;
        for (NodeId r = forest_.first_root(); r != no_node; r = forest_.node(r).next) {
            if (r == forest_.leaf(x)) {
                past_pivot = true;
                last = -1;
                continue;
            }
            auto& order = past_pivot ? right_order_ : left_order_;
            int first_comp = -1;
            for (Vertex v : forest_.leaves(r)) {
                const int c = comp_of_[v];
                if (c != last) {
                    if (comps_[c].position != 0) {
                        throw InternalError("component " + std::to_string(c) + " is not consecutive after promotion");
                    }
                    order.push_back(c);
                    comps_[c].position = 1;  // provisional "seen" flag
                    last = c;
                }
                if (first_comp < 0) {
                    first_comp = c;
                }
            }
            root_span_.push_back({r, first_comp, last});
        }
        const int kappa = static_cast<int>(left_order_.size());
        const int lambda = static_cast<int>(right_order_.size());
        for (int k = 0; k < kappa; ++k) {
            comps_[left_order_[k]].position = -(kappa - k);
        }
        for (int k = 0; k < lambda; ++k) {
            comps_[right_order_[k]].position = k + 1;
        }

        SequenceArrays s;
        s.mu_left.assign(kappa, 0);
        s.mu_right.assign(lambda, 0);
        s.layer_right.assign(lambda, 0);
        s.right_edge.assign(lambda, 0);
        for (int k = 0; k < kappa; ++k) {
            const CompInfo& c = comps_[left_order_[k]];
            int best = 0;
            for (std::size_t m = c.member_begin; m < c.member_end; ++m) {
                for (Vertex w : alpha_[comp_members_[m]]) {
                    if (w != x) {
                        best = std::max(best, comps_[comp_of_[w]].position);
                    }
                }
            }
            s.mu_left[-c.position - 1] = best;
        }
        edge_count_.assign(static_cast<std::size_t>(kappa) + 1, 0);
        for (int j = 1; j <= lambda; ++j) {
            const CompInfo& c = comps_[right_order_[j - 1]];
            bool later = false;
            for (std::size_t m = c.member_begin; m < c.member_end; ++m) {
                const Vertex v = comp_members_[m];
                for (Vertex w : alpha_[v]) {
                    if (w == x) {
                        continue;
                    }
                    const int pos = comps_[comp_of_[w]].position;
                    if (pos < 0) {
                        if (edge_count_[-pos]++ == 0) {
                            touched_.push_back(-pos);
                        }
                    }
                    later = later || layer_[w] > layer_[v];
                }
            }
            // Walk inward from C_kappa over universal co-components; only
            // touched ones can be universal, so the walk is paid by edges.
            int i = kappa;
            while (i >= 1 && edge_count_[i] == static_cast<std::int64_t>(comps_[left_order_[kappa - i]].size) *
                                                   static_cast<std::int64_t>(c.size)) {
                --i;
            }
            s.mu_right[j - 1] = -i;
            s.layer_right[j - 1] = c.layer;
            s.right_edge[j - 1] = later ? 1 : 0;
            for (int t : touched_) {
                edge_count_[t] = 0;
            }
            touched_.clear();
        }

        const std::vector<Bracket> brackets = delineate_core(s);
        if (observer_) {
            report_sequence(depth, x, s, brackets);
        }

        // Each promoted root hangs from the bracket that first encloses it.
        auto left_level = levels_of(brackets, kappa, true);
        auto right_level = levels_of(brackets, lambda, false);
        auto level_of = [&](int comp) {
            const int pos = comps_[comp].position;
            return pos < 0 ? left_level[-pos] : right_level[pos];
        };
        units_.clear();
        for (const RootSpan& rs : root_span_) {
            const int lv = level_of(rs.first);
            if (level_of(rs.last) != lv) {
                throw InternalError("a promoted tree straddles two brackets");
            }
            units_.push_back({rs.root, lv, comps_[rs.first].position < 0});
        }
        forest_.clear_roots();
        return build_spine(forest_, x, brackets, units_);
    }

    void report_layers(int depth)
    {
        const Frame& f = frames_[static_cast<std::size_t>(depth)];
        LayerPartition lp;
        lp.pivot = f.pivot;
        lp.layers.resize(f.layer_trees.size());
        for (Vertex v : component_) {
            if (v != f.pivot) {
                lp.layers[static_cast<std::size_t>(layer_[v])].push_back(v);
            }
        }
        for (auto& layer : lp.layers) {
            std::sort(layer.begin(), layer.end());
        }
        for (Vertex v = buckets_[f.remainder].head; v >= 0; v = next_[v]) {
            lp.unreached.push_back(v);
        }
        std::sort(lp.unreached.begin(), lp.unreached.end());
        AlphaLists alpha;
        for (Vertex v : component_) {
            for (Vertex w : alpha_[v]) {
                alpha.add(v, w);
            }
        }
        alpha.normalize();
        observer_->on_layers(depth, lp, alpha);
    }

    void report_sequence(int depth, Vertex x, const SequenceArrays& s, const std::vector<Bracket>& brackets)
    {
        CoComponentSequence seq;
        seq.pivot = x;
        auto entry = [&](int comp) {
            const CompInfo& c = comps_[comp];
            CoComponent out;
            out.members.assign(comp_members_.begin() + static_cast<std::ptrdiff_t>(c.member_begin),
                               comp_members_.begin() + static_cast<std::ptrdiff_t>(c.member_end));
            std::sort(out.members.begin(), out.members.end());
            out.layer = c.layer;
            return out;
        };
        const int kappa = static_cast<int>(left_order_.size());
        for (int i = 1; i <= kappa; ++i) {
            CoComponent c = entry(left_order_[kappa - i]);
            c.mu = MuPosition::right(s.mu_left[i - 1]);
            seq.left.push_back(std::move(c));
        }
        for (std::size_t j = 0; j < right_order_.size(); ++j) {
            CoComponent c = entry(right_order_[j]);
            c.mu = MuPosition::left(-s.mu_right[j]);
            c.right_edge = s.right_edge[j] != 0;
            seq.right.push_back(std::move(c));
        }
        observer_->on_sequence(depth, seq, brackets);
    }

    struct RootSpan {
        NodeId root;
        int first;
        int last;
    };

    const Graph& g_;
    StageObserver* observer_;
    OrderedForest forest_;

    std::vector<int> bucket_of_;
    std::vector<Vertex> prev_;
    std::vector<Vertex> next_;
    std::vector<char> visited_;
    std::vector<int> layer_;
    std::vector<int> comp_of_;
    std::vector<std::vector<Vertex>> alpha_;
    std::vector<Bucket> buckets_;
    std::vector<Frame> frames_;

    // Per-stage scratch, reused so no stage pays for the whole graph.
    std::vector<Vertex> component_;
    std::vector<std::size_t> original_size_;
    std::vector<CompInfo> comps_;
    std::vector<Vertex> comp_members_;
    std::vector<int> left_order_;
    std::vector<int> right_order_;
    std::vector<RootSpan> root_span_;
    std::vector<std::int64_t> edge_count_;
    std::vector<int> touched_;
    std::vector<Unit> units_;
};

MDTree remap_leaves(const MDTree& t, std::span<const Vertex> to_parent)
{
    std::vector<MDNode> nodes;
    nodes.reserve(t.node_count());
    for (std::size_t id = 0; id < t.node_count(); ++id) {
        MDNode nd = t.node(static_cast<NodeId>(id));
        if (nd.kind == NodeKind::leaf) {
            nd.vertex = to_parent[nd.vertex];
        }
        nodes.push_back(std::move(nd));
    }
    return MDTree(std::move(nodes), t.root());
}

class TopStageCapture : public StageObserver {
public:
    explicit TopStageCapture(TopStageRecord& rec) : rec_(rec) {}
    void on_layers(int depth, const LayerPartition& lp, const AlphaLists& alpha) override
    {
        if (depth == 0) {
            rec_.layers = lp;
            rec_.alpha = alpha;
        }
    }
    void on_forest(int depth, StagePhase phase, const OrderedForest& forest) override
    {
        if (depth != 0) {
            return;
        }
        switch (phase) {
        case StagePhase::recursed:
            rec_.recursed = forest.render();
            break;
        case StagePhase::refined:
            rec_.refined = forest.render();
            rec_.refined_order = forest.leaf_order();
            break;
        case StagePhase::promoted:
            rec_.promoted = forest.render();
            rec_.promoted_order = forest.leaf_order();
            break;
        }
    }
    void on_sequence(int depth, const CoComponentSequence& seq, std::span<const Bracket> brackets) override
    {
        if (depth == 0) {
            rec_.sequence = seq;
            rec_.brackets.assign(brackets.begin(), brackets.end());
        }
    }
    void on_stage_done(int depth, const StageStats& stats, const MDTree& result) override
    {
        if (depth == 0) {
            rec_.stats = stats;
            rec_.result = result;
            rec_.seen = true;
        }
    }

private:
    TopStageRecord& rec_;
};

const char* phase_name(StagePhase p)
{
    switch (p) {
    case StagePhase::recursed:
        return "recursed";
    case StagePhase::refined:
        return "refined";
    case StagePhase::promoted:
        return "promoted";
    }
    return "?";
}

} // namespace

MDTree decompose(const Graph& g, StageObserver* observer)
{
    Pipeline p(g, observer);
    return p.run();
}

MDTree recursive_stage(const Graph& g, const VertexSet& universe)
{
    if (universe.empty()) {
        throw InputError("recursive_stage: empty universe");
    }
    InducedSubgraph sub = induced_subgraph(g, universe);
    return remap_leaves(decompose(sub.graph), sub.to_parent);
}

TopStageRecord trace_top_stage(const Graph& g)
{
    TopStageRecord rec;
    TopStageCapture capture(rec);
    MDTree whole = decompose(g, &capture);
    if (!rec.seen) {
        rec.result = std::move(whole);
    }
    return rec;
}

void TraceWriter::on_layers(int depth, const LayerPartition& lp, const AlphaLists& alpha)
{
    out_ << "stage " << depth << " pivot " << lp.pivot << '\n';
    for (std::size_t i = 0; i < lp.layers.size(); ++i) {
        out_ << "  N" << i << ":";
        for (Vertex v : lp.layers[i]) {
            out_ << ' ' << v;
        }
        out_ << '\n';
    }
    out_ << "  active edges: " << alpha.edge_count() << '\n';
}

void TraceWriter::on_forest(int, StagePhase phase, const OrderedForest& forest)
{
    out_ << "  " << phase_name(phase) << ": " << forest.render() << '\n';
}

void TraceWriter::on_sequence(int, const CoComponentSequence& seq, std::span<const Bracket> brackets)
{
    out_ << "  mu:";
    for (std::size_t i = 0; i < seq.left.size(); ++i) {
        out_ << " C" << i + 1 << "->" << to_string(seq.left[i].mu);
    }
    for (std::size_t j = 0; j < seq.right.size(); ++j) {
        out_ << " C'" << j + 1 << "->" << to_string(seq.right[j].mu);
    }
    out_ << "\n  brackets:";
    for (const Bracket& b : brackets) {
        out_ << " [" << b.left << ',' << b.right << ' ' << to_string(b.kind) << ']';
    }
    out_ << '\n';
}

void TraceWriter::on_stage_done(int, const StageStats& stats, const MDTree& result)
{
    out_ << "  result: " << canonical_serialize(result) << " (refine calls " << stats.refine_calls << ", marks "
         << stats.mark_ops << ")\n";
}

} // namespace mdec
