#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bce/bigraph.hpp"

namespace bce {

// A biclustering assigns every alive vertex a cluster id (dead vertices get
// -1). Its induced edge set is the union over clusters of left-members x
// right-members.
struct Biclustering {
    std::vector<int> left_cluster;
    std::vector<int> right_cluster;
};

class OracleSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |E(G) symmetric-difference E(B)|, split into insertions and deletions on
// demand via edits_of().
inline int biclustering_cost(const BipartiteGraph& g, const Biclustering& b) {
    if (static_cast<int>(b.left_cluster.size()) != g.n_left() ||
        static_cast<int>(b.right_cluster.size()) != g.n_right())
        throw std::invalid_argument("biclustering does not cover the graph's vertex set");
    g.for_each_vertex([&](VertexRef v) {
        int id = v.side == Side::Left ? b.left_cluster[v.index] : b.right_cluster[v.index];
        if (id < 0) throw std::invalid_argument("alive vertex without a cluster id");
    });
    int cost = 0;
    g.alive_mask(Side::Left).for_each([&](int i) {
        int ci = b.left_cluster[i];
        int together = 0, cluster_right = 0;
        g.alive_mask(Side::Right).for_each([&](int j) {
            if (b.right_cluster[j] == ci) {
                ++cluster_right;
                if (g.has_edge(i, j)) ++together;
            }
        });
        int deg = g.degree(left_vertex(i));
        cost += (cluster_right - together) + (deg - together);
    });
    return cost;
}

// The EditSet realizing b on g.
inline EditSet edits_of(const BipartiteGraph& g, const Biclustering& b) {
    EditSet e;
    g.alive_mask(Side::Left).for_each([&](int i) {
        g.alive_mask(Side::Right).for_each([&](int j) {
            bool same = b.left_cluster[i] == b.right_cluster[j];
            bool edge = g.has_edge(i, j);
            if (same && !edge) e.insertions.insert({i, j});
            if (!same && edge) e.deletions.insert({i, j});
        });
    });
    return e;
}

struct OracleResult {
    int cost;
    Biclustering clustering;
};

namespace oracle_detail {

// Enumeration view: the partition side's units are set-partitioned, the
// assignment side's units each join one partition block or stay unattached
// (unattached units are singleton clusters). A unit is a single vertex or a
// whole twin class; both sides' units are homogeneous in adjacency.
struct UnitView {
    std::vector<std::vector<int>> p_units, a_units;  // original per-side indices
    std::vector<int> p_size, a_size;
    std::vector<std::vector<bool>> adj;  // adj[p][a]
    std::vector<int> p_deg, a_deg;       // vertex degrees (any member)
    bool swapped;                        // partition side == original Right
};

inline UnitView make_view(const BipartiteGraph& g, bool twin_units) {
    std::vector<std::vector<int>> lu, ru;
    if (twin_units) {
        TwinPartition tp = twin_classes(g);
        lu = tp.left_classes;
        ru = tp.right_classes;
    } else {
        g.alive_mask(Side::Left).for_each([&](int i) { lu.push_back({i}); });
        g.alive_mask(Side::Right).for_each([&](int j) { ru.push_back({j}); });
    }
    UnitView v;
    v.swapped = ru.size() < lu.size();
    const auto& pu = v.swapped ? ru : lu;
    const auto& au = v.swapped ? lu : ru;
    Side p_side = v.swapped ? Side::Right : Side::Left;
    v.p_units = pu;
    v.a_units = au;
    for (const auto& u : pu) {
        v.p_size.push_back(static_cast<int>(u.size()));
        v.p_deg.push_back(g.degree({p_side, u[0]}));
    }
    for (const auto& u : au) {
        v.a_size.push_back(static_cast<int>(u.size()));
        v.a_deg.push_back(g.degree({opposite(p_side), u[0]}));
    }
    v.adj.assign(pu.size(), std::vector<bool>(au.size(), false));
    for (std::size_t p = 0; p < pu.size(); ++p) {
        const Bitset& r = g.row({p_side, pu[p][0]});
        for (std::size_t a = 0; a < au.size(); ++a) v.adj[p][a] = r.test(au[a][0]);
    }
    return v;
}

inline long double bell_number(int n) {
    // Bell triangle; n is small (guarded by the caller).
    std::vector<std::vector<long double>> t(n + 1);
    t[0] = {1.0L};
    for (int i = 1; i <= n; ++i) {
        t[i].resize(i + 1);
        t[i][0] = t[i - 1][i - 1];
        for (int j = 1; j <= i; ++j) t[i][j] = t[i][j - 1] + t[i - 1][j - 1];
    }
    return t[n][0];
}

inline void check_budget(const UnitView& v, double limit) {
    int p = static_cast<int>(v.p_units.size());
    int a = static_cast<int>(v.a_units.size());
    if (p > 25) throw OracleSizeError("instance too large for exhaustive enumeration");
    long double states = bell_number(p) * std::pow(static_cast<long double>(p + 1), a);
    if (states > static_cast<long double>(limit))
        throw OracleSizeError("instance too large for exhaustive enumeration");
}

// Per-vertex condition of the deletion-favoring restriction: a vertex may
// carry deg(v) edits only if they are all deletions, otherwise at most
// deg(v)-1 edits.
inline bool delmax_ok(int ins, int del, int deg) {
    int edits = ins + del;
    return edits <= deg - 1 || (edits == deg && ins == 0);
}

}  // namespace oracle_detail

namespace oracle_detail {

inline OracleResult enumerate(const BipartiteGraph& g, bool twin_units, bool delmax_filter,
                              double limit) {
    UnitView v = make_view(g, twin_units);
    check_budget(v, limit);
    const int P = static_cast<int>(v.p_units.size());
    const int A = static_cast<int>(v.a_units.size());

    std::vector<int> rgs(P, 0);       // restricted growth string over partition units
    std::vector<int> assign(A, 0);    // 0 = unattached, b = partition block b-1
    std::vector<int> best_rgs, best_assign;
    long long best = -1;

    // contrib[a][b]: cost incurred by assignment unit a if it joins block b
    // (b = 0 means unattached). Depends only on the current partition.
    std::vector<std::vector<long long>> contrib;

    auto eval_leaf_plain = [&]() {
        long long cost = 0;
        for (int a = 0; a < A; ++a) cost += contrib[a][assign[a]];
        return cost;
    };

    auto eval_leaf_delmax = [&]() -> long long {
        // Recompute per-vertex insertion/deletion loads; reject candidates
        // violating the per-vertex condition on either side.
        long long cost = 0;
        std::vector<int> p_ins(P, 0), p_del(P, 0);
        for (int a = 0; a < A; ++a) {
            int ins = 0, del = 0;  // per assignment-side vertex of unit a
            for (int p = 0; p < P; ++p) {
                bool same = assign[a] != 0 && rgs[p] == assign[a] - 1;
                if (same && !v.adj[p][a]) {
                    ins += v.p_size[p];
                    p_ins[p] += v.a_size[a];
                }
                if (!same && v.adj[p][a]) {
                    del += v.p_size[p];
                    p_del[p] += v.a_size[a];
                }
            }
            if (!delmax_ok(ins, del, v.a_deg[a])) return -1;
            cost += static_cast<long long>(v.a_size[a]) * (ins + del);
        }
        for (int p = 0; p < P; ++p) {
            if (!delmax_ok(p_ins[p], p_del[p], v.p_deg[p])) return -1;
        }
        return cost;
    };

    // Iterate restricted growth strings in lexicographic order; for each
    // partition walk every assignment vector, also lexicographically, keeping
    // the first strict improvement. That order defines the canonical witness.
    auto visit_assignments = [&](int blocks) {
        contrib.assign(A, std::vector<long long>(blocks + 1, 0));
        for (int a = 0; a < A; ++a) {
            for (int b = 0; b <= blocks; ++b) {
                long long c = 0;
                for (int p = 0; p < P; ++p) {
                    bool same = b != 0 && rgs[p] == b - 1;
                    if (same != v.adj[p][a]) c += static_cast<long long>(v.p_size[p]) * v.a_size[a];
                }
                contrib[a][b] = c;
            }
        }
        std::fill(assign.begin(), assign.end(), 0);
        while (true) {
            long long cost = delmax_filter ? eval_leaf_delmax() : eval_leaf_plain();
            if (cost >= 0 && (best < 0 || cost < best)) {
                best = cost;
                best_rgs = rgs;
                best_assign = assign;
            }
            int i = A - 1;
            while (i >= 0 && assign[i] == blocks) assign[i--] = 0;
            if (i < 0) break;
            ++assign[i];
        }
    };

    // Restricted growth strings: rgs[0] = 0, rgs[i] <= max(rgs[0..i-1]) + 1.
    auto walk_partitions = [&](auto&& self, int i, int maxval) -> void {
        if (i == P) {
            visit_assignments(maxval + 1);
            return;
        }
        for (int b = 0; b <= maxval + 1; ++b) {
            rgs[i] = b;
            self(self, i + 1, std::max(maxval, b));
        }
    };
    if (P == 0)
        visit_assignments(0);
    else
        walk_partitions(walk_partitions, 0, -1);

    // Materialize the witness on original indices with canonical ids.
    Biclustering b;
    b.left_cluster.assign(g.n_left(), -1);
    b.right_cluster.assign(g.n_right(), -1);
    int next_id = 0;
    std::vector<int> block_id;  // partition block -> cluster id
    if (!best_rgs.empty() || P == 0) {
        int blocks = 0;
        for (int p = 0; p < P; ++p) blocks = std::max(blocks, best_rgs[p] + 1);
        block_id.assign(blocks, -1);
        auto& p_out = v.swapped ? b.right_cluster : b.left_cluster;
        auto& a_out = v.swapped ? b.left_cluster : b.right_cluster;
        for (int p = 0; p < P; ++p) {
            int blk = best_rgs[p];
            if (block_id[blk] < 0) block_id[blk] = next_id++;
            for (int idx : v.p_units[p]) p_out[idx] = block_id[blk];
        }
        for (int a = 0; a < A; ++a) {
            int id;
            if (best_assign[a] == 0)
                id = next_id++;
            else
                id = block_id[best_assign[a] - 1];
            for (int idx : v.a_units[a]) a_out[idx] = id;
        }
    }
    return {static_cast<int>(best), std::move(b)};
}

}  // namespace oracle_detail

// Exact minimum cost over all biclusterings, by exhaustive enumeration of
// set partitions of one side times per-vertex block assignments of the
// other. Throws OracleSizeError instead of ever answering approximately.
inline OracleResult oracle_opt(const BipartiteGraph& g, double limit = 1e8) {
    return oracle_detail::enumerate(g, /*twin_units=*/false, /*delmax_filter=*/false, limit);
}

// Minimum over biclusterings keeping every twin class of g inside a single
// cluster.
inline OracleResult oracle_opt_twin_respecting(const BipartiteGraph& g, double limit = 1e8) {
    return oracle_detail::enumerate(g, /*twin_units=*/true, /*delmax_filter=*/false, limit);
}

// Minimum over biclusterings in which every vertex either carries at most
// deg(v)-1 edits, or exactly deg(v) edits that are all deletions.
inline OracleResult oracle_opt_deletion_maximal(const BipartiteGraph& g, double limit = 1e8) {
    return oracle_detail::enumerate(g, /*twin_units=*/false, /*delmax_filter=*/true, limit);
}

}  // namespace bce
