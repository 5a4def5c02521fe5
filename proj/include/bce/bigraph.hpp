#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bce/bitset.hpp"

namespace bce {

enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

// A vertex is addressed by its side and its 0-based index within that side.
struct VertexRef {
    Side side;
    int index;

    friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

inline VertexRef left_vertex(int i) { return {Side::Left, i}; }
inline VertexRef right_vertex(int i) { return {Side::Right, i}; }

// A cross-side edge, stored as (left index, right index).
struct Edge {
    int left;
    int right;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Insertions and deletions transforming a reference graph into a bicluster
// graph. Relative to a graph g: deletions must be edges of g, insertions
// must be non-edges, and the two sets are disjoint.
struct EditSet {
    std::set<Edge> insertions;
    std::set<Edge> deletions;

    int cost() const { return static_cast<int>(insertions.size() + deletions.size()); }
    bool empty() const { return insertions.empty() && deletions.empty(); }

    bool operator==(const EditSet&) const = default;
};

// Per side, the partition of alive vertices into maximal same-neighborhood
// classes. Each class is sorted ascending; classes are ordered by smallest
// member.
struct TwinPartition {
    std::vector<std::vector<int>> left_classes;
    std::vector<std::vector<int>> right_classes;

    const std::vector<std::vector<int>>& classes(Side s) const {
        return s == Side::Left ? left_classes : right_classes;
    }
};

struct Component {
    std::vector<VertexRef> vertices;  // sorted: left vertices first, ascending
    bool is_bicluster;
};

// Bipartite graph with cross-side edges only. Adjacency is kept as one
// bitset row per vertex, mirrored in both directions. Vertex removal (used
// by the kernel rules) is an alive-mask: indices stay stable, counts and
// traversals skip dead vertices. Values are immutable after construction;
// every modification produces a new graph.
class BipartiteGraph {
public:
    BipartiteGraph() : BipartiteGraph(0, 0) {}

    BipartiteGraph(int n_left, int n_right)
        : n_left_(n_left),
          n_right_(n_right),
          left_rows_(n_left, Bitset(n_right)),
          right_rows_(n_right, Bitset(n_left)),
          alive_left_(n_left),
          alive_right_(n_right) {
        if (n_left < 0 || n_right < 0) throw std::invalid_argument("negative vertex count");
        for (int i = 0; i < n_left; ++i) alive_left_.set(i);
        for (int j = 0; j < n_right; ++j) alive_right_.set(j);
    }

    static BipartiteGraph from_edges(int n_left, int n_right, const std::vector<Edge>& edges) {
        BipartiteGraph g(n_left, n_right);
        for (const Edge& e : edges) {
            g.check_range(e);
            if (g.has_edge(e.left, e.right))
                throw std::invalid_argument("duplicate edge " + std::to_string(e.left) + "," +
                                            std::to_string(e.right));
            g.left_rows_[e.left].set(e.right);
            g.right_rows_[e.right].set(e.left);
        }
        return g;
    }

    int n_left() const { return n_left_; }
    int n_right() const { return n_right_; }

    int side_size(Side s) const { return s == Side::Left ? n_left_ : n_right_; }

    bool is_alive(VertexRef v) const {
        check_range(v);
        return alive_mask(v.side).test(v.index);
    }

    const Bitset& alive_mask(Side s) const { return s == Side::Left ? alive_left_ : alive_right_; }

    // Alive vertices only.
    int vertex_count() const { return alive_left_.count() + alive_right_.count(); }
    bool empty() const { return alive_left_.none() && alive_right_.none(); }

    bool has_edge(int l, int r) const {
        check_range(Edge{l, r});
        return left_rows_[l].test(r);
    }

    // Adjacency row of v over the opposite side. Rows of dead vertices are
    // empty and no row contains a dead vertex.
    const Bitset& row(VertexRef v) const {
        check_range(v);
        return v.side == Side::Left ? left_rows_[v.index] : right_rows_[v.index];
    }

    int degree(VertexRef v) const { return row(v).count(); }

    int max_degree() const {
        int m = 0;
        for_each_vertex([&](VertexRef v) { m = std::max(m, degree(v)); });
        return m;
    }

    int edge_count() const {
        int m = 0;
        for (int i = 0; i < n_left_; ++i) m += left_rows_[i].count();
        return m;
    }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count());
        for (int i = 0; i < n_left_; ++i)
            left_rows_[i].for_each([&](int j) { out.push_back({i, j}); });
        return out;
    }

    // Visits alive vertices, left side first, ascending indices.
    template <class F>
    void for_each_vertex(F&& f) const {
        alive_left_.for_each([&](int i) { f(left_vertex(i)); });
        alive_right_.for_each([&](int j) { f(right_vertex(j)); });
    }

    // Returns a copy with the given edits applied; validates the EditSet
    // against this graph first.
    BipartiteGraph apply_edits(const EditSet& e) const {
        for (const Edge& d : e.deletions) {
            check_alive_edge(d);
            if (!has_edge(d.left, d.right))
                throw std::invalid_argument("deletion of non-edge " + edge_str(d));
            if (e.insertions.count(d))
                throw std::invalid_argument("edge both inserted and deleted " + edge_str(d));
        }
        for (const Edge& i : e.insertions) {
            check_alive_edge(i);
            if (has_edge(i.left, i.right))
                throw std::invalid_argument("insertion of existing edge " + edge_str(i));
        }
        BipartiteGraph g(*this);
        for (const Edge& d : e.deletions) {
            g.left_rows_[d.left].reset(d.right);
            g.right_rows_[d.right].reset(d.left);
        }
        for (const Edge& i : e.insertions) {
            g.left_rows_[i.left].set(i.right);
            g.right_rows_[i.right].set(i.left);
        }
        return g;
    }

    // Unchecked single-edge toggle; used by the solver where the edit lists
    // are constructed from the current graph and known valid.
    void toggle_edge_unchecked(int l, int r) {
        if (left_rows_[l].test(r)) {
            left_rows_[l].reset(r);
            right_rows_[r].reset(l);
        } else {
            left_rows_[l].set(r);
            right_rows_[r].set(l);
        }
    }

    // Returns a copy with the given vertices dead: their rows cleared and
    // their bits removed from all surviving rows.
    BipartiteGraph without_vertices(const std::vector<VertexRef>& vs) const {
        BipartiteGraph g(*this);
        for (VertexRef v : vs) {
            check_range(v);
            if (v.side == Side::Left) {
                g.alive_left_.reset(v.index);
                g.left_rows_[v.index].for_each(
                    [&](int j) { g.right_rows_[j].reset(v.index); });
                g.left_rows_[v.index].clear();
            } else {
                g.alive_right_.reset(v.index);
                g.right_rows_[v.index].for_each(
                    [&](int i) { g.left_rows_[i].reset(v.index); });
                g.right_rows_[v.index].clear();
            }
        }
        return g;
    }

    BipartiteGraph transposed() const {
        BipartiteGraph g(n_right_, n_left_);
        g.left_rows_ = right_rows_;
        g.right_rows_ = left_rows_;
        g.alive_left_ = alive_right_;
        g.alive_right_ = alive_left_;
        return g;
    }

    // Drops dead vertices and renumbers each side by ascending surviving
    // index. Used when writing reduced instances back to files.
    BipartiteGraph compacted() const {
        std::vector<int> lmap(n_left_, -1), rmap(n_right_, -1);
        int nl = 0, nr = 0;
        alive_left_.for_each([&](int i) { lmap[i] = nl++; });
        alive_right_.for_each([&](int j) { rmap[j] = nr++; });
        std::vector<Edge> es;
        for (const Edge& e : edges()) es.push_back({lmap[e.left], rmap[e.right]});
        return from_edges(nl, nr, es);
    }

    bool operator==(const BipartiteGraph& o) const = default;

private:
    void check_range(VertexRef v) const {
        if (v.index < 0 || v.index >= side_size(v.side))
            throw std::invalid_argument("vertex index out of range: " + std::to_string(v.index));
    }

    void check_range(Edge e) const {
        if (e.left < 0 || e.left >= n_left_ || e.right < 0 || e.right >= n_right_)
            throw std::invalid_argument("edge out of range " + edge_str(e));
    }

    void check_alive_edge(Edge e) const {
        check_range(e);
        if (!alive_left_.test(e.left) || !alive_right_.test(e.right))
            throw std::invalid_argument("edit touches a removed vertex " + edge_str(e));
    }

    static std::string edge_str(Edge e) {
        return "(" + std::to_string(e.left) + "," + std::to_string(e.right) + ")";
    }

    int n_left_;
    int n_right_;
    std::vector<Bitset> left_rows_;
    std::vector<Bitset> right_rows_;
    Bitset alive_left_;
    Bitset alive_right_;
};

// ---- core operations ----

// N(v) as sorted indices on the opposite side.
inline std::vector<int> neighbors(const BipartiteGraph& g, VertexRef v) {
    if (v.index < 0 || v.index >= g.side_size(v.side) || !g.is_alive(v))
        throw std::invalid_argument("neighbors: invalid vertex");
    return g.row(v).to_vector();
}

// Grouping of each side's alive vertices by exact neighborhood equality.
inline TwinPartition twin_classes(const BipartiteGraph& g) {
    TwinPartition p;
    for (Side s : {Side::Left, Side::Right}) {
        auto& classes = s == Side::Left ? p.left_classes : p.right_classes;
        std::vector<const Bitset*> reps;
        g.alive_mask(s).for_each([&](int i) {
            const Bitset& r = g.row({s, i});
            for (std::size_t c = 0; c < classes.size(); ++c) {
                if (*reps[c] == r) {
                    classes[c].push_back(i);
                    return;
                }
            }
            classes.push_back({i});
            reps.push_back(&r);
        });
    }
    return p;
}

// Finds the twin class containing v (alive members, sorted).
inline std::vector<int> twin_class_of(const BipartiteGraph& g, VertexRef v) {
    std::vector<int> klass;
    const Bitset& r = g.row(v);
    g.alive_mask(v.side).for_each([&](int i) {
        if (g.row({v.side, i}) == r) klass.push_back(i);
    });
    return klass;
}

// Two same-side vertices are in conflict when their neighborhoods intersect
// but differ.
inline bool in_conflict(const BipartiteGraph& g, VertexRef u, VertexRef v) {
    if (u.side != v.side) throw std::invalid_argument("in_conflict: vertices on different sides");
    const Bitset& nu = g.row(u);
    const Bitset& nv = g.row(v);
    return nu.intersects(nv) && nu != nv;
}

// Smallest-index same-side vertex in conflict with u, if any. None implies
// u's connected component is a bicluster.
inline std::optional<VertexRef> find_conflict(const BipartiteGraph& g, VertexRef u) {
    std::optional<VertexRef> out;
    g.alive_mask(u.side).for_each([&](int i) {
        if (out || i == u.index) return;
        if (in_conflict(g, u, {u.side, i})) out = VertexRef{u.side, i};
    });
    return out;
}

// Connected components in deterministic order (by smallest contained vertex,
// left side first), each flagged as bicluster or not. An isolated vertex is
// a bicluster; a component with edges is one iff every left member is
// adjacent to the component's whole right part.
inline std::vector<Component> bicluster_components(const BipartiteGraph& g) {
    Bitset seen_l(g.n_left()), seen_r(g.n_right());
    std::vector<Component> out;
    auto explore = [&](VertexRef start) {
        std::vector<VertexRef> stack{start};
        Bitset comp_l(g.n_left()), comp_r(g.n_right());
        (start.side == Side::Left ? seen_l : seen_r).set(start.index);
        while (!stack.empty()) {
            VertexRef v = stack.back();
            stack.pop_back();
            (v.side == Side::Left ? comp_l : comp_r).set(v.index);
            Bitset& seen_o = v.side == Side::Left ? seen_r : seen_l;
            g.row(v).for_each([&](int w) {
                if (!seen_o.test(w)) {
                    seen_o.set(w);
                    stack.push_back({opposite(v.side), w});
                }
            });
        }
        Component c;
        comp_l.for_each([&](int i) { c.vertices.push_back(left_vertex(i)); });
        comp_r.for_each([&](int j) { c.vertices.push_back(right_vertex(j)); });
        bool ok = true;
        comp_l.for_each([&](int i) {
            if (!(g.row(left_vertex(i)) == comp_r)) ok = false;
        });
        // Pure-right components are single vertices; with no left member the
        // check above is vacuous and correct.
        c.is_bicluster = ok;
        out.push_back(std::move(c));
    };
    g.alive_mask(Side::Left).for_each([&](int i) {
        if (!seen_l.test(i)) explore(left_vertex(i));
    });
    g.alive_mask(Side::Right).for_each([&](int j) {
        if (!seen_r.test(j)) explore(right_vertex(j));
    });
    std::sort(out.begin(), out.end(),
              [](const Component& a, const Component& b) { return a.vertices[0] < b.vertices[0]; });
    return out;
}

inline bool is_bicluster_graph(const BipartiteGraph& g) {
    for (const Component& c : bicluster_components(g)) {
        if (!c.is_bicluster) return false;
    }
    return true;
}

// Number of edits incident to v. Summed over one full side this equals the
// edit set's cost.
inline int per_vertex_edit_count(const BipartiteGraph& g, const EditSet& e, VertexRef v) {
    if (v.index < 0 || v.index >= g.side_size(v.side))
        throw std::invalid_argument("per_vertex_edit_count: vertex out of range");
    int c = 0;
    auto touch = [&](const Edge& ed) {
        int idx = v.side == Side::Left ? ed.left : ed.right;
        if (idx == v.index) ++c;
    };
    for (const Edge& ed : e.insertions) touch(ed);
    for (const Edge& ed : e.deletions) touch(ed);
    return c;
}

// Symmetric difference between two graphs on the same vertex set, expressed
// as the EditSet turning `from` into `to`.
inline EditSet edit_difference(const BipartiteGraph& from, const BipartiteGraph& to) {
    if (from.n_left() != to.n_left() || from.n_right() != to.n_right())
        throw std::invalid_argument("edit_difference: size mismatch");
    EditSet e;
    for (int i = 0; i < from.n_left(); ++i) {
        Bitset diff = from.row(left_vertex(i)) ^ to.row(left_vertex(i));
        diff.for_each([&](int j) {
            if (from.has_edge(i, j))
                e.deletions.insert({i, j});
            else
                e.insertions.insert({i, j});
        });
    }
    return e;
}

}  // namespace bce
