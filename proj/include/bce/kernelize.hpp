#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bce/bigraph.hpp"

namespace bce {

// A decision-problem instance: graph plus remaining edit budget. A negative
// budget is never stored; exhaustion is signalled as a NO certificate.
struct Instance {
    BipartiteGraph graph;
    int budget = 0;
};

struct KernelStep {
    int rule;                          // 1, 2 or 3
    std::vector<VertexRef> removed;    // rule 1: whole component; rule 2: one vertex
    std::optional<Edge> deleted_edge;  // rule 3 only
    int budget_delta;                  // 1 for rule 3, else 0
};

inline std::string vertex_token(VertexRef v) {
    return (v.side == Side::Left ? "l" : "r") + std::to_string(v.index + 1);
}

// Audit trail of rule applications. Line format, 1-based indices:
//   R1 <vertex tokens of the removed component>
//   R2 <vertex token>
//   R3 <left> <right>
struct KernelTrace {
    std::vector<KernelStep> steps;

    int budget_spent() const {
        int s = 0;
        for (const auto& st : steps) s += st.budget_delta;
        return s;
    }

    std::string to_text() const {
        std::string out;
        for (const auto& st : steps) {
            if (st.rule == 3) {
                out += "R3 " + std::to_string(st.deleted_edge->left + 1) + " " +
                       std::to_string(st.deleted_edge->right + 1) + "\n";
            } else {
                out += st.rule == 1 ? "R1" : "R2";
                for (VertexRef v : st.removed) out += " " + vertex_token(v);
                out += "\n";
            }
        }
        return out;
    }
};

struct KernelResult {
    Instance instance;
    KernelTrace trace;
    bool no_certificate = false;  // rule 3 fired with budget already 0
};

struct Sister {
    VertexRef t;       // the sister itself (twin-free)
    VertexRef extra;   // the one neighbor of t outside N(R)
};

// The sister structure of a twin class R: S = N(R) and the vertices
// t in N(S) \ R without a twin whose neighborhood is exactly S plus one
// extra vertex.
struct SisterSet {
    Side side;                     // side of R (and of the sisters)
    std::vector<int> twin_class;   // R
    std::vector<int> neighborhood; // S, indices on the opposite side
    std::vector<Sister> sisters;   // ascending by t
};

inline SisterSet sisters(const BipartiteGraph& g, Side side, const std::vector<int>& klass) {
    SisterSet out;
    out.side = side;
    out.twin_class = klass;
    const Bitset& s = g.row({side, klass[0]});
    out.neighborhood = s.to_vector();
    if (s.none()) return out;
    Bitset candidates(g.side_size(side));
    s.for_each([&](int j) { candidates |= g.row({opposite(side), j}); });
    for (int m : klass) candidates.reset(m);
    candidates.for_each([&](int t) {
        const Bitset& nt = g.row({side, t});
        if (nt.count() != s.count() + 1 || !s.is_subset_of(nt)) return;
        if (twin_class_of(g, {side, t}).size() != 1) return;
        Bitset extra = nt;
        extra.subtract(s);
        out.sisters.push_back({{side, t}, {opposite(side), extra.find_first()}});
    });
    return out;
}

// Rule 1: remove every connected component that is a bicluster (isolated
// vertices included). Budget unchanged.
inline KernelResult rule1(Instance inst) {
    KernelResult res;
    for (const Component& c : bicluster_components(inst.graph)) {
        if (!c.is_bicluster) continue;
        res.trace.steps.push_back({1, c.vertices, std::nullopt, 0});
        inst.graph = inst.graph.without_vertices(c.vertices);
    }
    res.instance = std::move(inst);
    return res;
}

// Rule 2: while some twin class R has |R| > |N(N(R)) \ R|, remove the
// largest-index member of R. Budget unchanged. Classes are scanned left side
// first, ordered by smallest member; recomputed after every removal.
inline KernelResult rule2(Instance inst) {
    KernelResult res;
    bool fired = true;
    while (fired) {
        fired = false;
        TwinPartition tp = twin_classes(inst.graph);
        for (Side side : {Side::Left, Side::Right}) {
            for (const auto& klass : tp.classes(side)) {
                const Bitset& s = inst.graph.row({side, klass[0]});
                Bitset w(inst.graph.side_size(side));
                s.for_each([&](int j) { w |= inst.graph.row({opposite(side), j}); });
                for (int m : klass) w.reset(m);
                if (static_cast<int>(klass.size()) > w.count()) {
                    VertexRef victim{side, klass.back()};
                    res.trace.steps.push_back({2, {victim}, std::nullopt, 0});
                    inst.graph = inst.graph.without_vertices({victim});
                    fired = true;
                    break;
                }
            }
            if (fired) break;
        }
    }
    res.instance = std::move(inst);
    return res;
}

// Rule 3: if a twin class R with sisters T and W = N(N(R)) \ (R u T)
// satisfies |R| > |W| and |T| >= 1, delete the edge between the
// smallest-index sister and its extra neighbor and spend one unit of budget.
// Applied at most once per call; firing with budget 0 certifies NO.
inline KernelResult rule3(Instance inst) {
    KernelResult res;
    TwinPartition tp = twin_classes(inst.graph);
    for (Side side : {Side::Left, Side::Right}) {
        for (const auto& klass : tp.classes(side)) {
            SisterSet ss = sisters(inst.graph, side, klass);
            if (ss.sisters.empty()) continue;
            Bitset w(inst.graph.side_size(side));
            const Bitset& s = inst.graph.row({side, klass[0]});
            s.for_each([&](int j) { w |= inst.graph.row({opposite(side), j}); });
            for (int m : klass) w.reset(m);
            for (const Sister& sis : ss.sisters) w.reset(sis.t.index);
            if (static_cast<int>(klass.size()) <= w.count()) continue;
            if (inst.budget == 0) {
                res.instance = std::move(inst);
                res.no_certificate = true;
                return res;
            }
            const Sister& chosen = ss.sisters.front();
            Edge e = side == Side::Left ? Edge{chosen.t.index, chosen.extra.index}
                                        : Edge{chosen.extra.index, chosen.t.index};
            EditSet del;
            del.deletions.insert(e);
            inst.graph = inst.graph.apply_edits(del);
            inst.budget -= 1;
            res.trace.steps.push_back({3, {}, e, 1});
            res.instance = std::move(inst);
            return res;
        }
    }
    res.instance = std::move(inst);
    return res;
}

// Runs Rules 1-3 to a fixpoint: Rule 1, Rule 2 exhaustively, then a single
// Rule-3 step, repeated until nothing applies. Rules 1 and 2 are free, so
// they are always preferred over the budget-spending Rule 3.
inline KernelResult kernelize(Instance inst) {
    if (inst.budget < 0) throw std::invalid_argument("kernelize: negative budget");
    KernelResult res;
    res.instance = std::move(inst);
    while (true) {
        bool changed = false;
        KernelResult r1 = rule1(std::move(res.instance));
        if (!r1.trace.steps.empty()) changed = true;
        for (auto& st : r1.trace.steps) res.trace.steps.push_back(std::move(st));
        KernelResult r2 = rule2(std::move(r1.instance));
        if (!r2.trace.steps.empty()) changed = true;
        for (auto& st : r2.trace.steps) res.trace.steps.push_back(std::move(st));
        KernelResult r3 = rule3(std::move(r2.instance));
        res.instance = std::move(r3.instance);
        if (r3.no_certificate) {
            res.no_certificate = true;
            return res;
        }
        if (!r3.trace.steps.empty()) changed = true;
        for (auto& st : r3.trace.steps) res.trace.steps.push_back(std::move(st));
        if (!changed) return res;
    }
}

}  // namespace bce
