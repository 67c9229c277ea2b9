#include "mdec/forest.hpp"

#include "mdec/errors.hpp"

#include <sstream>

namespace mdec {

OrderedForest::OrderedForest(std::size_t vertex_count)
    : side_(vertex_count, Side::none)
{
    nodes_.resize(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        nodes_[v].vertex = static_cast<Vertex>(v);
    }
}

NodeId OrderedForest::allocate(NodeKind kind)
{
    nodes_.emplace_back();
    nodes_.back().kind = kind;
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId OrderedForest::make_node(NodeKind kind, std::span<const NodeId> children)
{
    if (kind == NodeKind::leaf) {
        throw InputError("make_node: leaves are preallocated");
    }
    NodeId id = allocate(kind);
    for (NodeId c : children) {
        append_child(id, c);
    }
    return id;
}

NodeId OrderedForest::import_tree(const MDTree& t)
{
    struct Item {
        NodeId src;
        NodeId dst_parent;
    };
    NodeId result = no_node;
    std::vector<Item> stack{{t.root(), no_node}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const MDNode& src = t.node(it.src);
        NodeId dst;
        if (src.kind == NodeKind::leaf) {
            if (src.vertex < 0 || static_cast<std::size_t>(src.vertex) >= vertex_count()) {
                throw InputError("import_tree: leaf vertex out of range");
            }
            dst = leaf(src.vertex);
            if (nodes_[dst].parent != no_node || nodes_[dst].in_roots) {
                throw InputError("import_tree: leaf " + std::to_string(src.vertex) + " already placed");
            }
        } else {
            dst = allocate(src.kind);
        }
        if (it.dst_parent == no_node) {
            result = dst;
        } else {
            append_child(it.dst_parent, dst);
        }
        for (auto c = src.children.rbegin(); c != src.children.rend(); ++c) {
            stack.push_back({*c, dst});
        }
    }
    return result;
}

// -- root list ---------------------------------------------------------------

void OrderedForest::clear_roots() noexcept
{
    for (NodeId r = head_; r != no_node;) {
        NodeId nx = nodes_[r].next;
        nodes_[r].prev = nodes_[r].next = no_node;
        nodes_[r].in_roots = false;
        r = nx;
    }
    head_ = tail_ = no_node;
}

void OrderedForest::push_root(NodeId tree, Side side)
{
    ForestNode& nd = nodes_.at(tree);
    if (nd.parent != no_node || nd.in_roots) {
        throw InputError("push_root: tree is not detached");
    }
    nd.in_roots = true;
    nd.prev = tail_;
    nd.next = no_node;
    if (tail_ != no_node) {
        nodes_[tail_].next = tree;
    } else {
        head_ = tree;
    }
    tail_ = tree;
    for (Vertex v : leaves(tree)) {
        side_[v] = side;
    }
}

void OrderedForest::unlink_root(NodeId r)
{
    ForestNode& nd = nodes_[r];
    if (nd.prev != no_node) {
        nodes_[nd.prev].next = nd.next;
    } else {
        head_ = nd.next;
    }
    if (nd.next != no_node) {
        nodes_[nd.next].prev = nd.prev;
    } else {
        tail_ = nd.prev;
    }
    nd.prev = nd.next = no_node;
    nd.in_roots = false;
}

void OrderedForest::insert_root_before(NodeId r, NodeId ref)
{
    ForestNode& nd = nodes_[r];
    nd.in_roots = true;
    nd.next = ref;
    nd.prev = nodes_[ref].prev;
    if (nd.prev != no_node) {
        nodes_[nd.prev].next = r;
    } else {
        head_ = r;
    }
    nodes_[ref].prev = r;
}

void OrderedForest::insert_root_after(NodeId r, NodeId ref)
{
    ForestNode& nd = nodes_[r];
    nd.in_roots = true;
    nd.prev = ref;
    nd.next = nodes_[ref].next;
    if (nd.next != no_node) {
        nodes_[nd.next].prev = r;
    } else {
        tail_ = r;
    }
    nodes_[ref].next = r;
}

std::vector<NodeId> OrderedForest::roots() const
{
    std::vector<NodeId> out;
    for (NodeId r = head_; r != no_node; r = nodes_[r].next) {
        out.push_back(r);
    }
    return out;
}

// -- child lists -------------------------------------------------------------

void OrderedForest::append_child(NodeId parent, NodeId child)
{
    ForestNode& c = nodes_.at(child);
    if (c.parent != no_node || c.in_roots) {
        throw InputError("append_child: child is not detached");
    }
    ForestNode& p = nodes_.at(parent);
    c.parent = parent;
    c.prev = p.last_child;
    c.next = no_node;
    if (p.last_child != no_node) {
        nodes_[p.last_child].next = child;
    } else {
        p.first_child = child;
    }
    p.last_child = child;
    ++p.child_count;
}

void OrderedForest::prepend_child(NodeId parent, NodeId child)
{
    if (nodes_.at(parent).first_child == no_node) {
        append_child(parent, child);
    } else {
        insert_child_before(parent, child, nodes_[parent].first_child);
    }
}

void OrderedForest::insert_child_before(NodeId parent, NodeId child, NodeId ref)
{
    ForestNode& c = nodes_[child];
    ForestNode& p = nodes_[parent];
    c.parent = parent;
    c.next = ref;
    c.prev = nodes_[ref].prev;
    if (c.prev != no_node) {
        nodes_[c.prev].next = child;
    } else {
        p.first_child = child;
    }
    nodes_[ref].prev = child;
    ++p.child_count;
}

void OrderedForest::insert_child_after(NodeId parent, NodeId child, NodeId ref)
{
    ForestNode& c = nodes_[child];
    ForestNode& p = nodes_[parent];
    c.parent = parent;
    c.prev = ref;
    c.next = nodes_[ref].next;
    if (c.next != no_node) {
        nodes_[c.next].prev = child;
    } else {
        p.last_child = child;
    }
    nodes_[ref].next = child;
    ++p.child_count;
}

void OrderedForest::unlink_child(NodeId child)
{
    ForestNode& c = nodes_.at(child);
    ForestNode& p = nodes_.at(c.parent);
    if (c.prev != no_node) {
        nodes_[c.prev].next = c.next;
    } else {
        p.first_child = c.next;
    }
    if (c.next != no_node) {
        nodes_[c.next].prev = c.prev;
    } else {
        p.last_child = c.prev;
    }
    --p.child_count;
    c.parent = c.prev = c.next = no_node;
}

void OrderedForest::replace(NodeId old, NodeId replacement)
{
    ForestNode& o = nodes_[old];
    ForestNode& r = nodes_[replacement];
    r.parent = o.parent;
    r.prev = o.prev;
    r.next = o.next;
    r.in_roots = o.in_roots;
    if (o.prev != no_node) {
        nodes_[o.prev].next = replacement;
    } else if (o.parent != no_node) {
        nodes_[o.parent].first_child = replacement;
    } else if (o.in_roots) {
        head_ = replacement;
    }
    if (o.next != no_node) {
        nodes_[o.next].prev = replacement;
    } else if (o.parent != no_node) {
        nodes_[o.parent].last_child = replacement;
    } else if (o.in_roots) {
        tail_ = replacement;
    }
    o.parent = o.prev = o.next = no_node;
    o.in_roots = false;
}

void OrderedForest::dissolve_into_parent(NodeId child)
{
    NodeId parent = nodes_.at(child).parent;
    if (parent == no_node) {
        throw InputError("dissolve_into_parent: node has no parent");
    }
    NodeId anchor = child;
    for (NodeId g = nodes_[child].first_child; g != no_node;) {
        NodeId nx = nodes_[g].next;
        unlink_child(g);
        insert_child_after(parent, g, anchor);
        anchor = g;
        g = nx;
    }
    unlink_child(child);
}

std::vector<NodeId> OrderedForest::children(NodeId id) const
{
    std::vector<NodeId> out;
    for (NodeId c = nodes_.at(id).first_child; c != no_node; c = nodes_[c].next) {
        out.push_back(c);
    }
    return out;
}

std::vector<Vertex> OrderedForest::leaves(NodeId tree) const
{
    std::vector<Vertex> out;
    std::vector<NodeId> stack{tree};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        const ForestNode& nd = nodes_[id];
        if (nd.kind == NodeKind::leaf) {
            out.push_back(nd.vertex);
            continue;
        }
        for (NodeId c = nd.last_child; c != no_node; c = nodes_[c].prev) {
            stack.push_back(c);
        }
    }
    return out;
}

std::vector<Vertex> OrderedForest::leaf_order() const
{
    std::vector<Vertex> out;
    for (NodeId r = head_; r != no_node; r = nodes_[r].next) {
        auto part = leaves(r);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::size_t OrderedForest::tree_size(NodeId tree) const
{
    std::size_t count = 0;
    std::vector<NodeId> stack{tree};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        ++count;
        for (NodeId c = nodes_[id].first_child; c != no_node; c = nodes_[c].next) {
            stack.push_back(c);
        }
    }
    return count;
}

// -- refinement --------------------------------------------------------------

void OrderedForest::set_mark(NodeId id, Direction d)
{
    auto bit = static_cast<std::uint8_t>(d);
    if ((nodes_[id].marks & bit) == 0) {
        nodes_[id].marks |= bit;
        ++counters_.mark_ops;
    }
}

// Marks are upward closed, so the climb stops at the first node that
// already carries the bit.
void OrderedForest::mark_up(NodeId id, Direction d)
{
    auto bit = static_cast<std::uint8_t>(d);
    bool above_start = false;
    while (id != no_node) {
        // A prime ancestor of a split stops being a module, and no union of
        // its children is one either, so every child must be promotable.
        if (above_start && nodes_[id].kind == NodeKind::prime) {
            mark_children(id, d);
        }
        if ((nodes_[id].marks & bit) != 0) {
            break;
        }
        nodes_[id].marks |= bit;
        ++counters_.mark_ops;
        id = nodes_[id].parent;
        above_start = true;
    }
}

void OrderedForest::mark_children(NodeId id, Direction d)
{
    auto bit = static_cast<std::uint8_t>(d);
    if ((nodes_[id].children_marked & bit) != 0) {
        return;
    }
    for (NodeId c = nodes_[id].first_child; c != no_node; c = nodes_[c].next) {
        set_mark(c, d);
    }
    nodes_[id].children_marked |= bit;
}

void OrderedForest::refine_with_set(std::span<const Vertex> set, Direction left_trees, Direction right_trees)
{
    ++counters_.refine_calls;
    full_scratch_.clear();
    full_side_.clear();
    count_scratch_.clear();
    groups_.clear();

    // Mark full nodes bottom-up: a node is full once all its children are.
    for (Vertex u : set) {
        if (u < 0 || static_cast<std::size_t>(u) >= vertex_count()) {
            throw InputError("refine_with_set: vertex out of range");
        }
        Side s = side_[u];
        if (s == Side::pivot || s == Side::none) {
            continue;
        }
        NodeId cur = leaf(u);
        if (nodes_[cur].full) {
            continue;
        }
        for (;;) {
            nodes_[cur].full = true;
            full_scratch_.push_back(cur);
            full_side_.push_back(s);
            NodeId p = nodes_[cur].parent;
            if (p == no_node) {
                break;
            }
            if (nodes_[p].full_children++ == 0) {
                count_scratch_.push_back(p);
            }
            if (nodes_[p].full_children != nodes_[p].child_count) {
                break;
            }
            cur = p;
        }
    }

    // Maximal full subtrees, grouped by their (partially full) parent.
    for (std::size_t k = 0; k < full_scratch_.size(); ++k) {
        NodeId t = full_scratch_[k];
        NodeId p = nodes_[t].parent;
        if (p == no_node || nodes_[p].full) {
            continue;
        }
        if (nodes_[p].group < 0) {
            nodes_[p].group = static_cast<std::int32_t>(groups_.size());
            groups_.push_back(Group{p, full_side_[k], {}});
        }
        groups_[nodes_[p].group].members.push_back(t);
    }
    for (NodeId t : full_scratch_) {
        nodes_[t].full = false;
    }
    for (NodeId p : count_scratch_) {
        nodes_[p].full_children = 0;
        nodes_[p].group = -1;
    }

    for (Group& g : groups_) {
        const NodeId p = g.parent;
        const Direction d = (g.side == Side::left) ? left_trees : right_trees;

        if (nodes_[p].kind == NodeKind::prime) {
            mark_up(p, d);
            mark_children(p, d);
            continue;
        }

        // T_a: the single full child, or a new node of p's kind over them.
        NodeId ta;
        if (g.members.size() == 1) {
            ta = g.members.front();
            unlink_child(ta);
        } else {
            ta = allocate(nodes_[p].kind);
            ++counters_.nodes_created;
            for (NodeId c : g.members) {
                unlink_child(c);
                append_child(ta, c);
                nodes_[ta].marks |= nodes_[c].marks;
            }
        }

        // T_b keeps the remaining children. When p has two or more of them
        // p itself plays T_b, which avoids touching the untouched side.
        NodeId tb;
        if (nodes_[p].parent == no_node) {
            if (nodes_[p].child_count == 1) {
                tb = nodes_[p].first_child;
                unlink_child(tb);
                replace(p, tb);
            } else {
                tb = p;
            }
            if (d == Direction::left) {
                insert_root_before(ta, tb);
            } else {
                insert_root_after(ta, tb);
            }
        } else {
            NodeId holder;
            if (nodes_[p].child_count == 1) {
                tb = nodes_[p].first_child;
                holder = p;
            } else {
                // A fresh node takes p's place (and marks); p sinks below it.
                holder = allocate(nodes_[p].kind);
                ++counters_.nodes_created;
                nodes_[holder].marks = nodes_[p].marks;
                replace(p, holder);
                append_child(holder, p);
                tb = p;
            }
            if (d == Direction::left) {
                insert_child_before(holder, ta, tb);
            } else {
                insert_child_after(holder, ta, tb);
            }
        }
        mark_up(ta, d);
        mark_up(tb, d);
    }
}

// -- promotion ---------------------------------------------------------------

void OrderedForest::promote_from(NodeId root, Direction d)
{
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
        NodeId t = stack.back();
        stack.pop_back();
        if (d == Direction::left) {
            for (NodeId c = nodes_[t].first_child; c != no_node;) {
                NodeId nx = nodes_[c].next;
                if (nodes_[c].has_mark(d)) {
                    unlink_child(c);
                    insert_root_before(c, t);
                    stack.push_back(c);
                }
                c = nx;
            }
        } else {
            for (NodeId c = nodes_[t].last_child; c != no_node;) {
                NodeId pv = nodes_[c].prev;
                if (nodes_[c].has_mark(d)) {
                    unlink_child(c);
                    insert_root_after(c, t);
                    stack.push_back(c);
                }
                c = pv;
            }
        }
    }
}

void OrderedForest::promote()
{
    for (Direction d : {Direction::left, Direction::right}) {
        for (NodeId r : roots()) {
            if (nodes_[r].has_mark(d)) {
                promote_from(r, d);
            }
        }
    }
    for (NodeId r : roots()) {
        ForestNode& nd = nodes_[r];
        if (nd.kind == NodeKind::leaf || nd.marks == 0) {
            continue;
        }
        if (nd.child_count == 0) {
            unlink_root(r);
        } else if (nd.child_count == 1) {
            NodeId c = nd.first_child;
            unlink_child(c);
            replace(r, c);
        }
    }
    std::vector<NodeId> stack = roots();
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        nodes_[id].marks = 0;
        nodes_[id].children_marked = 0;
        for (NodeId c = nodes_[id].first_child; c != no_node; c = nodes_[c].next) {
            stack.push_back(c);
        }
    }
}

// -- output ------------------------------------------------------------------

std::string OrderedForest::render_tree(NodeId tree) const
{
    std::ostringstream os;
    auto suffix = [&](const ForestNode& nd) {
        if (nd.marks == 0) {
            return;
        }
        os << '^';
        if (nd.has_mark(Direction::left)) {
            os << 'L';
        }
        if (nd.has_mark(Direction::right)) {
            os << 'R';
        }
    };
    struct Frame {
        NodeId next_child;
    };
    std::vector<Frame> stack;
    auto open = [&](NodeId id) {
        const ForestNode& nd = nodes_[id];
        if (nd.kind == NodeKind::leaf) {
            os << nd.vertex;
            suffix(nd);
            return;
        }
        os << '(' << to_string(nd.kind);
        suffix(nd);
        stack.push_back(Frame{nd.first_child});
    };
    open(tree);
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_child == no_node) {
            os << ')';
            stack.pop_back();
            continue;
        }
        NodeId c = f.next_child;
        f.next_child = nodes_[c].next;
        os << ' ';
        open(c);
    }
    return os.str();
}

std::string OrderedForest::render() const
{
    std::string out;
    for (NodeId r = head_; r != no_node; r = nodes_[r].next) {
        if (!out.empty()) {
            out += " | ";
        }
        out += render_tree(r);
    }
    return out;
}

MDTree OrderedForest::export_tree(NodeId tree) const
{
    std::vector<MDNode> out;
    struct Item {
        NodeId src;
        NodeId dst_parent;
    };
    std::vector<Item> stack{{tree, no_node}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const ForestNode& nd = nodes_[it.src];
        out.push_back(MDNode{nd.kind, nd.kind == NodeKind::leaf ? nd.vertex : -1, {}});
        auto dst = static_cast<NodeId>(out.size() - 1);
        if (it.dst_parent != no_node) {
            out[it.dst_parent].children.push_back(dst);
        }
        for (NodeId c = nd.last_child; c != no_node; c = nodes_[c].prev) {
            stack.push_back({c, dst});
        }
    }
    return MDTree(std::move(out), 0);
}

} // namespace mdec
