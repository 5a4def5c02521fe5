#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bce/bigraph.hpp"
#include "bce/kernelize.hpp"

namespace bce {

// Branching sets are truncated to this many smallest-index elements. At any
// size this code is meant for, the cap never binds; untouched elements are
// resolved in deeper recursion.
inline constexpr int kBranchSetCap = 100;

struct SolveStats {
    std::uint64_t nodes = 0;
    int max_depth = 0;
    std::uint64_t degree_one_dispatches = 0;
    std::uint64_t twin_dispatches = 0;
    std::uint64_t merge_dispatches = 0;
    std::uint64_t general_dispatches = 0;
    std::uint64_t poly_solved = 0;
    std::uint64_t children_filtered = 0;

    void absorb(const SolveStats& o) {
        nodes += o.nodes;
        max_depth = std::max(max_depth, o.max_depth);
        degree_one_dispatches += o.degree_one_dispatches;
        twin_dispatches += o.twin_dispatches;
        merge_dispatches += o.merge_dispatches;
        general_dispatches += o.general_dispatches;
        poly_solved += o.poly_solved;
        children_filtered += o.children_filtered;
    }
};

struct SolveResult {
    bool yes = false;
    int cost = 0;       // witness cost on YES; the optimum for solve_optimal
    EditSet witness;    // relative to the graph the solver was given
    SolveStats stats;
};

// One node of the search: the current graph, the remaining budget, and the
// net accumulated edits relative to the solver's input graph, together with
// the input graph's degrees and per-vertex edit loads needed by the
// deletion-maximal pruning.
struct SearchState {
    BipartiteGraph graph;
    int budget = 0;
    EditSet edits;
    std::vector<int> orig_deg_left, orig_deg_right;
    std::vector<int> edits_left, edits_right;  // incident net edit counts
    std::vector<int> ins_left, ins_right;      // incident net insertion counts
    int depth = 0;

    static SearchState root(const Instance& inst) {
        if (inst.budget < 0) throw std::invalid_argument("negative budget");
        SearchState s;
        s.graph = inst.graph;
        s.budget = inst.budget;
        s.orig_deg_left.assign(inst.graph.n_left(), 0);
        s.orig_deg_right.assign(inst.graph.n_right(), 0);
        for (int i = 0; i < inst.graph.n_left(); ++i)
            s.orig_deg_left[i] = inst.graph.row(left_vertex(i)).count();
        for (int j = 0; j < inst.graph.n_right(); ++j)
            s.orig_deg_right[j] = inst.graph.row(right_vertex(j)).count();
        s.edits_left.assign(inst.graph.n_left(), 0);
        s.edits_right.assign(inst.graph.n_right(), 0);
        s.ins_left.assign(inst.graph.n_left(), 0);
        s.ins_right.assign(inst.graph.n_right(), 0);
        return s;
    }

    int orig_deg(VertexRef v) const {
        return v.side == Side::Left ? orig_deg_left[v.index] : orig_deg_right[v.index];
    }
    int edit_load(VertexRef v) const {
        return v.side == Side::Left ? edits_left[v.index] : edits_right[v.index];
    }
    int ins_load(VertexRef v) const {
        return v.side == Side::Left ? ins_left[v.index] : ins_right[v.index];
    }
};

namespace solver_detail {

// Applies one modification of the current graph to the net edit set,
// cancelling a previously recorded opposite edit of the same pair if there
// is one, and keeps the per-vertex counters in sync.
inline void apply_modification(SearchState& s, Edge e, bool is_deletion) {
    assert(s.graph.has_edge(e.left, e.right) == is_deletion);
    int dc, di;
    if (is_deletion) {
        if (s.edits.insertions.erase(e)) {
            dc = -1;
            di = -1;
        } else {
            s.edits.deletions.insert(e);
            dc = 1;
            di = 0;
        }
    } else {
        if (s.edits.deletions.erase(e)) {
            dc = -1;
            di = 0;
        } else {
            s.edits.insertions.insert(e);
            dc = 1;
            di = 1;
        }
    }
    s.edits_left[e.left] += dc;
    s.edits_right[e.right] += dc;
    s.ins_left[e.left] += di;
    s.ins_right[e.right] += di;
    s.graph.toggle_edge_unchecked(e.left, e.right);
}

}  // namespace solver_detail

// Keep/drop decision for a prospective child: drop when some endpoint would
// carry more net edits than its input-graph degree, or exactly that many
// with at least one insertion among them. Loads only move at endpoints of
// new edits, so checking those is enough.
inline bool prune_deletion_maximal(const SearchState& s, const std::vector<Edge>& dels,
                                   const std::vector<Edge>& inss) {
    std::vector<std::pair<VertexRef, std::pair<int, int>>> delta;  // (vertex, (dcnt, dins))
    auto bump = [&](VertexRef v, int dc, int di) {
        for (auto& [w, d] : delta) {
            if (w == v) {
                d.first += dc;
                d.second += di;
                return;
            }
        }
        delta.push_back({v, {dc, di}});
    };
    for (const Edge& e : dels) {
        bool cancels = s.edits.insertions.count(e) > 0;
        int dc = cancels ? -1 : 1, di = cancels ? -1 : 0;
        bump(left_vertex(e.left), dc, di);
        bump(right_vertex(e.right), dc, di);
    }
    for (const Edge& e : inss) {
        bool cancels = s.edits.deletions.count(e) > 0;
        int dc = cancels ? -1 : 1, di = cancels ? 0 : 1;
        bump(left_vertex(e.left), dc, di);
        bump(right_vertex(e.right), dc, di);
    }
    for (const auto& [v, d] : delta) {
        int cnt = s.edit_load(v) + d.first;
        int ins = s.ins_load(v) + d.second;
        int deg0 = s.orig_deg(v);
        if (cnt > deg0) return false;
        if (cnt == deg0 && ins >= 1) return false;
    }
    return true;
}

namespace solver_detail {

inline std::optional<SearchState> make_child(const SearchState& s, const std::vector<Edge>& dels,
                                             const std::vector<Edge>& inss, bool use_filter,
                                             SolveStats* stats = nullptr) {
    int h = static_cast<int>(dels.size() + inss.size());
    assert(h >= 1);
    if (s.budget < h) return std::nullopt;
    if (use_filter && !prune_deletion_maximal(s, dels, inss)) {
        if (stats) ++stats->children_filtered;
        return std::nullopt;
    }
    SearchState c = s;
    c.budget -= h;
    c.depth += 1;
    for (const Edge& e : dels) apply_modification(c, e, true);
    for (const Edge& e : inss) apply_modification(c, e, false);
    return c;
}

inline Edge cross_edge(Side side_of_x, int x, int z) {
    return side_of_x == Side::Left ? Edge{x, z} : Edge{z, x};
}

// Splits the smallest min(|bits|, cap) elements into groups by twin class
// on `side` (the side the elements live on), ordered by smallest element.
inline std::vector<std::vector<int>> twin_blocks(const BipartiteGraph& g, Side side,
                                                 const Bitset& bits, int cap = kBranchSetCap) {
    std::vector<int> elems;
    bits.for_each([&](int i) {
        if (static_cast<int>(elems.size()) < cap) elems.push_back(i);
    });
    std::vector<std::vector<int>> blocks;
    std::vector<const Bitset*> reps;
    for (int e : elems) {
        const Bitset& r = g.row({side, e});
        bool placed = false;
        for (std::size_t b = 0; b < blocks.size() && !placed; ++b) {
            if (*reps[b] == r) {
                blocks[b].push_back(e);
                placed = true;
            }
        }
        if (!placed) {
            blocks.push_back({e});
            reps.push_back(&r);
        }
    }
    return blocks;
}

}  // namespace solver_detail

// First branching loop: put u and v (and their twin classes) in the same
// bicluster. One child per way of splitting the symmetric difference into a
// kept part Z (missing edges to R_u u R_v inserted) and a dropped part
// (edges deleted). Z ranges over unions of opposite-side twin blocks so that
// twins always receive identical edits.
inline std::vector<SearchState> branch_same(const SearchState& s, VertexRef u, VertexRef v,
                                            SolveStats* stats = nullptr) {
    if (u.side != v.side || !in_conflict(s.graph, u, v))
        throw std::logic_error("branch_same: vertices must be a same-side conflict pair");
    const BipartiteGraph& g = s.graph;
    Side os = opposite(u.side);
    std::vector<int> members = twin_class_of(g, u);
    for (int x : twin_class_of(g, v)) members.push_back(x);
    std::sort(members.begin(), members.end());
    Bitset diff = g.row(u) ^ g.row(v);
    auto blocks = solver_detail::twin_blocks(g, os, diff);
    int nb = static_cast<int>(blocks.size());
    std::vector<SearchState> out;
    // Every child edits at least one pair per handled element, so none can
    // survive when the handled set alone exceeds the budget.
    int handled = 0;
    for (const auto& b : blocks) handled += static_cast<int>(b.size());
    if (handled > s.budget) return out;
    for (int mask = 0; mask < (1 << nb); ++mask) {
        std::vector<Edge> dels, inss;
        for (int b = 0; b < nb; ++b) {
            for (int z : blocks[b]) {
                for (int x : members) {
                    Edge e = solver_detail::cross_edge(u.side, x, z);
                    bool edge = g.has_edge(e.left, e.right);
                    if (mask >> b & 1) {
                        if (!edge) inss.push_back(e);
                    } else {
                        if (edge) dels.push_back(e);
                    }
                }
            }
        }
        if (auto c = solver_detail::make_child(s, dels, inss, /*use_filter=*/true, stats))
            out.push_back(std::move(*c));
    }
    return out;
}

// Second branching loop: put u and v in different biclusters. One child per
// way of splitting the common neighborhood: Z keeps with u (edges to R_v
// deleted), the rest keeps with v (edges to R_u deleted). Z again ranges
// over unions of twin blocks.
inline std::vector<SearchState> branch_diff(const SearchState& s, VertexRef u, VertexRef v,
                                            SolveStats* stats = nullptr) {
    if (u.side != v.side || !in_conflict(s.graph, u, v))
        throw std::logic_error("branch_diff: vertices must be a same-side conflict pair");
    const BipartiteGraph& g = s.graph;
    Side os = opposite(u.side);
    std::vector<int> ru = twin_class_of(g, u), rv = twin_class_of(g, v);
    Bitset common = g.row(u) & g.row(v);
    auto blocks = solver_detail::twin_blocks(g, os, common);
    int nb = static_cast<int>(blocks.size());
    std::vector<SearchState> out;
    int handled = 0;
    for (const auto& b : blocks) handled += static_cast<int>(b.size());
    if (handled > s.budget) return out;
    for (int mask = 0; mask < (1 << nb); ++mask) {
        std::vector<Edge> dels;
        for (int b = 0; b < nb; ++b) {
            const std::vector<int>& away = (mask >> b & 1) ? rv : ru;
            for (int z : blocks[b])
                for (int x : away) dels.push_back(solver_detail::cross_edge(u.side, x, z));
        }
        if (auto c = solver_detail::make_child(s, dels, {}, /*use_filter=*/true, stats))
            out.push_back(std::move(*c));
    }
    return out;
}

// Branching at a degree-1 vertex u with neighbor v and W = N(v) \ R_u.
// Follows the four-way case split on W; every emitted edit is mirrored
// across the twin class of the edited vertex, which can only deepen the
// decrements. Case 1 is a forced single deletion (a Rule-3 situation), the
// other cases reach vectors (1,2), (1,2,3) or (1,2,3,3,4).
inline std::vector<SearchState> branch_degree_one(const SearchState& s, VertexRef u,
                                                  SolveStats* stats = nullptr) {
    const BipartiteGraph& g = s.graph;
    if (g.degree(u) != 1) throw std::logic_error("branch_degree_one: deg(u) != 1");
    VertexRef v{opposite(u.side), g.row(u).find_first()};
    std::vector<int> ru = twin_class_of(g, u);
    Bitset wbits = g.row(v);
    for (int m : ru) wbits.reset(m);
    if (wbits.none())
        throw std::logic_error("branch_degree_one: component is a bicluster (rule 1 applies)");
    std::vector<int> w_all = wbits.to_vector();

    auto other_edges = [&](const std::vector<int>& klass, int rep) {
        // all edges from klass to N(rep) \ {v}
        std::vector<Edge> dels;
        Bitset nb = g.row({u.side, rep});
        nb.reset(v.index);
        for (int m : klass)
            nb.for_each([&](int t) { dels.push_back(solver_detail::cross_edge(u.side, m, t)); });
        return dels;
    };
    auto class_to_v = [&](const std::vector<int>& klass) {
        std::vector<Edge> dels;
        for (int m : klass) dels.push_back(solver_detail::cross_edge(u.side, m, v.index));
        return dels;
    };

    std::vector<std::pair<std::vector<Edge>, std::vector<Edge>>> plans;  // (dels, inss)
    if (w_all.size() == 1) {
        int w = w_all[0];
        if (g.degree({u.side, w}) == 2) {
            // Case 1: forced deletion of w's other edge.
            plans.push_back({other_edges({w}, w), {}});
        } else {
            // Case 3: separate w from v, or merge w with u (dropping w's
            // other edges).
            plans.push_back({class_to_v({w}), {}});
            plans.push_back({other_edges({w}, w), {}});
        }
    } else {
        int deg2 = -1;
        for (int w : w_all) {
            if (g.degree({u.side, w}) == 2) {
                deg2 = w;
                break;
            }
        }
        if (deg2 >= 0) {
            // Case 2: branch on deleting R_u x {v}; otherwise w (plus class)
            // merges with u, and one further member of W is resolved.
            int w = deg2;
            std::vector<int> kw = twin_class_of(g, {u.side, w});
            std::vector<Edge> base = other_edges(kw, w);
            std::vector<int> rest;
            for (int t : w_all) {
                if (std::find(kw.begin(), kw.end(), t) == kw.end()) rest.push_back(t);
            }
            plans.push_back({class_to_v(ru), {}});
            if (rest.empty()) {
                plans.push_back({base, {}});
            } else {
                int w2 = rest[0];
                std::vector<int> kw2 = twin_class_of(g, {u.side, w2});
                if (g.degree({u.side, w2}) == 2) {
                    std::vector<Edge> dels = base;
                    for (const Edge& e : other_edges(kw2, w2)) dels.push_back(e);
                    plans.push_back({dels, {}});
                } else {
                    std::vector<Edge> sep = base;
                    for (const Edge& e : class_to_v(kw2)) sep.push_back(e);
                    plans.push_back({sep, {}});
                    std::vector<Edge> merge = base;
                    for (const Edge& e : other_edges(kw2, w2)) merge.push_back(e);
                    plans.push_back({merge, {}});
                }
            }
        } else {
            // Case 4: |W| >= 2, all of degree >= 3.
            int x = w_all[0];
            std::vector<int> kx = twin_class_of(g, {u.side, x});
            std::vector<int> rest;
            for (int t : w_all) {
                if (std::find(kx.begin(), kx.end(), t) == kx.end()) rest.push_back(t);
            }
            plans.push_back({class_to_v(ru), {}});
            if (rest.empty()) {
                plans.push_back({class_to_v(kx), {}});
                plans.push_back({other_edges(kx, x), {}});
            } else {
                int y = rest[0];
                std::vector<int> ky = twin_class_of(g, {u.side, y});
                auto cat = [](std::vector<Edge> a, const std::vector<Edge>& b) {
                    a.insert(a.end(), b.begin(), b.end());
                    return a;
                };
                plans.push_back({cat(class_to_v(kx), class_to_v(ky)), {}});
                plans.push_back({cat(class_to_v(kx), other_edges(ky, y)), {}});
                plans.push_back({cat(other_edges(kx, x), class_to_v(ky)), {}});
                plans.push_back({cat(other_edges(kx, x), other_edges(ky, y)), {}});
            }
        }
    }
    std::vector<SearchState> out;
    for (auto& [dels, inss] : plans) {
        if (auto c = solver_detail::make_child(s, dels, inss, /*use_filter=*/false, stats))
            out.push_back(std::move(*c));
    }
    return out;
}

// Branching on a twin class R with at least two members against a conflict
// partner u. The same-bicluster part resolves one differing element (or, for
// a single shared neighbor, one element on each side of the difference); the
// separate part resolves the first one or two blocks of the common
// neighborhood. Per-branch costs reach (1,2,2,3,3,4) or better.
inline std::vector<SearchState> branch_twins(const SearchState& s, Side side,
                                             const std::vector<int>& klass,
                                             SolveStats* stats = nullptr) {
    const BipartiteGraph& g = s.graph;
    if (klass.size() < 2) throw std::logic_error("branch_twins: class has fewer than two members");
    VertexRef rep{side, klass[0]};
    std::optional<VertexRef> partner;
    g.alive_mask(side).for_each([&](int i) {
        if (partner) return;
        if (std::find(klass.begin(), klass.end(), i) != klass.end()) return;
        if (in_conflict(g, rep, {side, i})) partner = VertexRef{side, i};
    });
    if (!partner) throw std::logic_error("branch_twins: class is not in conflict with anything");
    VertexRef u = *partner;
    std::vector<int> ku = twin_class_of(g, u);
    Side os = opposite(side);

    Bitset common = g.row(rep) & g.row(u);
    Bitset d_r = g.row(rep);
    d_r.subtract(g.row(u));
    Bitset d_u = g.row(u);
    d_u.subtract(g.row(rep));

    auto pairs = [&](const std::vector<int>& xs, const std::vector<int>& zs) {
        std::vector<Edge> es;
        for (int x : xs)
            for (int z : zs) es.push_back(solver_detail::cross_edge(side, x, z));
        return es;
    };

    auto common_blocks = solver_detail::twin_blocks(g, os, common);
    std::vector<std::pair<std::vector<Edge>, std::vector<Edge>>> plans;

    auto cat = [](std::vector<Edge> a, const std::vector<Edge>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };

    bool single_common_vertex = common_blocks.size() == 1 && common_blocks[0].size() == 1;
    if (d_r.any() && single_common_vertex && d_u.any()) {
        // One shared neighbor: resolving only one differing element would be
        // too shallow, so the same-bicluster part settles one element z of
        // N(R)\N(u) and one element w of N(u)\N(R) together.
        std::vector<int> kz = twin_class_of(g, {os, d_r.find_first()});
        std::vector<int> kw = twin_class_of(g, {os, d_u.find_first()});
        plans.push_back({pairs(ku, kw), pairs(ku, kz)});                  // z in, w out
        plans.push_back({{}, cat(pairs(ku, kz), pairs(klass, kw))});      // z in, w in
        plans.push_back({pairs(klass, kz), pairs(klass, kw)});            // z out, w in
        plans.push_back({cat(pairs(klass, kz), pairs(ku, kw)), {}});      // z out, w out
    } else if (d_r.any()) {
        std::vector<int> kz = twin_class_of(g, {os, d_r.find_first()});
        plans.push_back({{}, pairs(ku, kz)});      // z joins the merged bicluster
        plans.push_back({pairs(klass, kz), {}});   // z leaves R
    } else {
        // N(R) inside N(u): resolve one element u has over R.
        std::vector<int> kz = twin_class_of(g, {os, d_u.find_first()});
        plans.push_back({pairs(ku, kz), {}});      // z leaves u
        plans.push_back({{}, pairs(klass, kz)});   // z joins R's side
    }

    // Separate R from u: each handled common block sides with R or with u.
    if (common_blocks.size() >= 2) {
        const auto& b1 = common_blocks[0];
        const auto& b2 = common_blocks[1];
        for (int m = 0; m < 4; ++m) {
            std::vector<Edge> dels = pairs(m & 1 ? klass : ku, b1);
            for (const Edge& e : pairs(m & 2 ? klass : ku, b2)) dels.push_back(e);
            plans.push_back({dels, {}});
        }
    } else {
        const auto& b1 = common_blocks[0];
        plans.push_back({pairs(ku, b1), {}});
        plans.push_back({pairs(klass, b1), {}});
    }

    std::vector<SearchState> out;
    for (auto& [dels, inss] : plans) {
        if (auto c = solver_detail::make_child(s, dels, inss, /*use_filter=*/false, stats))
            out.push_back(std::move(*c));
    }
    return out;
}

// Two-way branching for the all-differences-are-one regime: u of degree 3,
// v with N(v) = N(u) minus one vertex z. u and v can be assumed to share a
// bicluster, so either uz goes or vz arrives.
inline std::vector<SearchState> branch_merge_d1(const SearchState& s, VertexRef u, VertexRef v,
                                                SolveStats* stats = nullptr) {
    const BipartiteGraph& g = s.graph;
    if (u.side != v.side) throw std::logic_error("branch_merge_d1: different sides");
    Bitset extra = g.row(u);
    extra.subtract(g.row(v));
    if (!g.row(v).is_subset_of(g.row(u)) || extra.count() != 1)
        throw std::logic_error("branch_merge_d1: N(v) must be N(u) minus exactly one vertex");
    int z = extra.find_first();
    std::vector<SearchState> out;
    if (auto c = solver_detail::make_child(s, {solver_detail::cross_edge(u.side, u.index, z)}, {},
                                           /*use_filter=*/false, stats))
        out.push_back(std::move(*c));
    if (auto c = solver_detail::make_child(s, {}, {solver_detail::cross_edge(u.side, v.index, z)},
                                           /*use_filter=*/false, stats))
        out.push_back(std::move(*c));
    return out;
}

// Exact optimum for graphs of maximum degree <= 2, whose components are
// paths and cycles. Paths: a linear DP chooses cut edges (cost 1 each)
// between kept segments; a kept segment with p left vertices, q right
// vertices and e internal edges becomes one bicluster at p*q - e insertions.
// Cycles: C4 is already complete; otherwise the best of opening the cycle
// (one deletion plus the path DP) and completing the whole cycle into one
// bicluster.
inline SolveResult solve_max_degree_two(const BipartiteGraph& g) {
    if (g.max_degree() > 2)
        throw std::invalid_argument("solve_max_degree_two: a vertex has degree > 2");
    SolveResult res;
    res.yes = true;
    res.stats.poly_solved = 1;

    auto segment_insertions = [&](const std::vector<VertexRef>& order, int from, int to,
                                  std::vector<Edge>* out) {
        int p = 0, q = 0;
        for (int i = from; i <= to; ++i) (order[i].side == Side::Left ? p : q) += 1;
        int cost = p * q - (to - from);
        if (out) {
            for (int i = from; i <= to; ++i) {
                for (int j = from; j <= to; ++j) {
                    if (order[i].side != Side::Left || order[j].side != Side::Right) continue;
                    if (!g.has_edge(order[i].index, order[j].index))
                        out->push_back({order[i].index, order[j].index});
                }
            }
        }
        return cost;
    };

    auto path_dp = [&](const std::vector<VertexRef>& order, std::vector<Edge>* dels,
                       std::vector<Edge>* inss) {
        int m = static_cast<int>(order.size());
        std::vector<int> dp(m + 1, 0), arg(m + 1, 0);
        for (int t = 1; t <= m; ++t) {
            dp[t] = -1;
            for (int start = 0; start < t; ++start) {
                int c = dp[start] + (start > 0 ? 1 : 0) + segment_insertions(order, start, t - 1, nullptr);
                if (dp[t] < 0 || c < dp[t]) {
                    dp[t] = c;
                    arg[t] = start;
                }
            }
        }
        if (dels && inss) {
            int t = m;
            while (t > 0) {
                int start = arg[t];
                segment_insertions(order, start, t - 1, inss);
                if (start > 0) {
                    VertexRef a = order[start - 1], b = order[start];
                    dels->push_back(a.side == Side::Left ? Edge{a.index, b.index}
                                                         : Edge{b.index, a.index});
                }
                t = start;
            }
        }
        return dp[m];
    };

    for (const Component& comp : bicluster_components(g)) {
        int n = static_cast<int>(comp.vertices.size());
        if (n == 1) continue;
        int e = 0;
        for (VertexRef v : comp.vertices) e += g.degree(v);
        e /= 2;
        // Walk the component into path/cycle order starting from its
        // smallest endpoint (or smallest vertex on a cycle).
        VertexRef start = comp.vertices[0];
        for (VertexRef v : comp.vertices) {
            if (g.degree(v) == 1) {
                start = v;
                break;
            }
        }
        std::vector<VertexRef> order{start};
        VertexRef prev = start;
        VertexRef cur = {opposite(start.side), g.row(start).find_first()};
        while (static_cast<int>(order.size()) < n) {
            order.push_back(cur);
            VertexRef next = cur;
            bool found = false;
            g.row(cur).for_each([&](int t) {
                VertexRef cand{opposite(cur.side), t};
                if (!found && cand != prev) {
                    next = cand;
                    found = true;
                }
            });
            if (!found) break;
            prev = cur;
            cur = next;
        }
        bool is_cycle = e == n;
        std::vector<Edge> dels, inss;
        int cost;
        if (!is_cycle) {
            cost = path_dp(order, &dels, &inss);
        } else if (n == 4) {
            cost = 0;
        } else {
            // Opening the cycle between order.back() and order.front() is
            // representative: all single-edge openings are isomorphic.
            int open_cost = 1 + path_dp(order, nullptr, nullptr);
            int p = 0;
            for (VertexRef v : order) p += v.side == Side::Left ? 1 : 0;
            int whole_cost = p * (n - p) - e;
            if (open_cost <= whole_cost) {
                cost = open_cost;
                VertexRef a = order.back(), b = order.front();
                dels.push_back(a.side == Side::Left ? Edge{a.index, b.index}
                                                    : Edge{b.index, a.index});
                path_dp(order, &dels, &inss);
            } else {
                cost = whole_cost;
                segment_insertions(order, 0, n - 1, &inss);
            }
        }
        res.cost += cost;
        for (const Edge& d : dels) res.witness.deletions.insert(d);
        for (const Edge& i : inss) res.witness.insertions.insert(i);
    }
    assert(res.cost == res.witness.cost());
    return res;
}

// Dispatch for one search node, in priority order: a degree-1 vertex, a
// twin class of size >= 2, the unit-difference merge rule when its global
// precondition holds, then a general conflict pair with deg(u) >= 3
// maximizing (|C| + |D|, |C|).
struct BranchChoice {
    enum class Kind { DegreeOne, Twins, MergeD1, General };
    Kind kind = Kind::General;
    VertexRef u{}, v{};
    Side twin_side = Side::Left;
    std::vector<int> twin_class = {};
};

inline BranchChoice select_branch_pair(const SearchState& s) {
    const BipartiteGraph& g = s.graph;
    std::optional<VertexRef> deg1;
    g.for_each_vertex([&](VertexRef v) {
        if (!deg1 && g.degree(v) == 1) deg1 = v;
    });
    if (deg1) return {BranchChoice::Kind::DegreeOne, *deg1};

    TwinPartition tp = twin_classes(g);
    for (Side side : {Side::Left, Side::Right}) {
        for (const auto& klass : tp.classes(side)) {
            if (klass.size() >= 2) {
                BranchChoice c{BranchChoice::Kind::Twins};
                c.twin_side = side;
                c.twin_class = klass;
                return c;
            }
        }
    }

    // Merge rule gate: every conflicting pair differs in exactly one vertex.
    bool all_unit_diff = true;
    for (Side side : {Side::Left, Side::Right}) {
        auto alive = g.alive_mask(side).to_vector();
        for (std::size_t a = 0; a < alive.size() && all_unit_diff; ++a) {
            for (std::size_t b = a + 1; b < alive.size() && all_unit_diff; ++b) {
                VertexRef x{side, alive[a]}, y{side, alive[b]};
                if (in_conflict(g, x, y) && (g.row(x) ^ g.row(y)).count() >= 2)
                    all_unit_diff = false;
            }
        }
    }
    if (all_unit_diff) {
        int maxdeg = g.max_degree();
        std::optional<VertexRef> u;
        g.for_each_vertex([&](VertexRef v) {
            if (!u && g.degree(v) == maxdeg) u = v;
        });
        std::optional<VertexRef> v = find_conflict(g, *u);
        assert(v);
        return {BranchChoice::Kind::MergeD1, *u, *v};
    }

    std::optional<BranchChoice> best;
    long long best_key = -1;
    g.for_each_vertex([&](VertexRef u) {
        if (g.degree(u) < 3) return;
        g.alive_mask(u.side).for_each([&](int i) {
            VertexRef v{u.side, i};
            if (v == u || !in_conflict(g, u, v)) return;
            long long c = (g.row(u) & g.row(v)).count();
            long long d = (g.row(u) ^ g.row(v)).count();
            long long key = (c + d) * 1000000 + c;
            if (key > best_key) {
                best_key = key;
                best = BranchChoice{BranchChoice::Kind::General, u, v};
            }
        });
    });
    if (!best) throw std::logic_error("select_branch_pair: no branchable pair");
    return *best;
}

namespace solver_detail {

class BranchSolver {
public:
    explicit BranchSolver(const Instance& inst) : root_(SearchState::root(inst)) {}

    SolveResult run() {
        SolveResult res;
        SearchState root = root_;
        res.yes = recurse(root);
        res.witness = res.yes ? witness_ : EditSet{};
        res.cost = res.witness.cost();
        res.stats = stats_;
        return res;
    }

private:
    bool recurse(SearchState& s) {
        ++stats_.nodes;
        stats_.max_depth = std::max(stats_.max_depth, s.depth);

        std::vector<VertexRef> removable;
        for (const Component& c : bicluster_components(s.graph)) {
            if (c.is_bicluster)
                removable.insert(removable.end(), c.vertices.begin(), c.vertices.end());
        }
        if (!removable.empty()) s.graph = s.graph.without_vertices(removable);

        if (s.graph.empty()) {
            witness_ = s.edits;
            return true;
        }
        if (s.graph.max_degree() <= 2) {
            ++stats_.poly_solved;
            SolveResult poly = solve_max_degree_two(s.graph);
            if (poly.cost > s.budget) return false;
            for (const Edge& e : poly.witness.deletions) apply_modification(s, e, true);
            for (const Edge& e : poly.witness.insertions) apply_modification(s, e, false);
            witness_ = s.edits;
            return true;
        }

        BranchChoice choice = select_branch_pair(s);
        std::vector<SearchState> children;
        switch (choice.kind) {
            case BranchChoice::Kind::DegreeOne:
                ++stats_.degree_one_dispatches;
                children = branch_degree_one(s, choice.u, &stats_);
                break;
            case BranchChoice::Kind::Twins:
                ++stats_.twin_dispatches;
                children = branch_twins(s, choice.twin_side, choice.twin_class, &stats_);
                break;
            case BranchChoice::Kind::MergeD1:
                ++stats_.merge_dispatches;
                children = branch_merge_d1(s, choice.u, choice.v, &stats_);
                break;
            case BranchChoice::Kind::General: {
                ++stats_.general_dispatches;
                children = branch_same(s, choice.u, choice.v, &stats_);
                auto diff = branch_diff(s, choice.u, choice.v, &stats_);
                for (auto& c : diff) children.push_back(std::move(c));
                break;
            }
        }
        for (SearchState& c : children) {
            if (recurse(c)) return true;
        }
        return false;
    }

    SearchState root_;
    SolveStats stats_;
    EditSet witness_;
};

}  // namespace solver_detail

// YES iff some biclustering of cost <= budget exists; on YES the witness
// turns the instance's graph into a bicluster graph. Deterministic.
inline SolveResult solve_decision(const Instance& inst) {
    return solver_detail::BranchSolver(inst).run();
}

// Minimum edit cost and a witness, by iterative deepening on the budget.
// The deletion-maximal pruning is stated relative to optimal solutions, so
// raising the budget one unit at a time keeps it sound.
inline SolveResult solve_optimal(const BipartiteGraph& g) {
    int m = g.edge_count();
    SolveStats total;
    for (int k = 0; k <= m; ++k) {
        SolveResult r = solve_decision({g, k});
        total.absorb(r.stats);
        if (r.yes) {
            r.cost = r.witness.cost();
            r.stats = total;
            return r;
        }
    }
    throw std::logic_error("solve_optimal: deleting every edge must succeed");
}

}  // namespace bce
