#pragma once

#include <cstdint>
#include <istream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bce/bigraph.hpp"
#include "bce/solver.hpp"

namespace bce {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// ---- .bce instance format ----
//
//   c free-form comment
//   p bce <n_left> <n_right> <m>
//   e <left> <right>            (1-based, m lines)
//
// The edit budget is not part of the file; it travels on the command line.

inline BipartiteGraph parse_instance(std::istream& in) {
    int lineno = 0;
    bool have_header = false;
    int nl = 0, nr = 0, m = 0;
    std::vector<Edge> edges;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;  // blank line
        if (tag == "c") continue;
        if (tag == "p") {
            if (have_header) throw ParseError(lineno, "duplicate header");
            std::string fmt;
            if (!(ls >> fmt >> nl >> nr >> m) || fmt != "bce")
                throw ParseError(lineno, "malformed header, expected 'p bce <n_left> <n_right> <m>'");
            if (nl < 0 || nr < 0 || m < 0) throw ParseError(lineno, "negative count in header");
            have_header = true;
        } else if (tag == "e") {
            if (!have_header) throw ParseError(lineno, "edge before header");
            int l = 0, r = 0;
            if (!(ls >> l >> r)) throw ParseError(lineno, "malformed edge line");
            if (l < 1 || l > nl || r < 1 || r > nr)
                throw ParseError(lineno, "edge endpoint out of range");
            if (static_cast<int>(edges.size()) >= m)
                throw ParseError(lineno, "more edges than declared");
            for (const Edge& e : edges) {
                if (e.left == l - 1 && e.right == r - 1)
                    throw ParseError(lineno, "duplicate edge " + std::to_string(l) + " " +
                                                 std::to_string(r));
            }
            edges.push_back({l - 1, r - 1});
        } else {
            throw ParseError(lineno, "unknown line type '" + tag + "'");
        }
    }
    if (!have_header) throw ParseError(lineno, "missing header");
    if (static_cast<int>(edges.size()) != m)
        throw ParseError(lineno, "edge count mismatch: header says " + std::to_string(m) +
                                     ", found " + std::to_string(edges.size()));
    return BipartiteGraph::from_edges(nl, nr, edges);
}

inline BipartiteGraph parse_instance_text(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

inline std::string write_instance(const BipartiteGraph& g,
                                  const std::vector<std::string>& comments = {}) {
    BipartiteGraph c = g.compacted();
    std::string out;
    for (const std::string& line : comments) out += "c " + line + "\n";
    out += "p bce " + std::to_string(c.n_left()) + " " + std::to_string(c.n_right()) + " " +
           std::to_string(c.edge_count()) + "\n";
    for (const Edge& e : c.edges())
        out += "e " + std::to_string(e.left + 1) + " " + std::to_string(e.right + 1) + "\n";
    return out;
}

// ---- solution format ----
//
//   s YES <cost> | s NO
//   - <left> <right>     one line per deletion, sorted
//   + <left> <right>     one line per insertion, sorted
//   b <id> <vertex tokens>   resulting clusters (informative)

struct Solution {
    bool yes = false;
    int claimed_cost = 0;
    EditSet edits;
};

inline std::string write_solution(const BipartiteGraph& g, const SolveResult& r) {
    if (!r.yes) return "s NO\n";
    std::string out = "s YES " + std::to_string(r.witness.cost()) + "\n";
    for (const Edge& e : r.witness.deletions)
        out += "- " + std::to_string(e.left + 1) + " " + std::to_string(e.right + 1) + "\n";
    for (const Edge& e : r.witness.insertions)
        out += "+ " + std::to_string(e.left + 1) + " " + std::to_string(e.right + 1) + "\n";
    int id = 0;
    for (const Component& c : bicluster_components(g.apply_edits(r.witness))) {
        out += "b " + std::to_string(++id);
        for (VertexRef v : c.vertices) out += " " + vertex_token(v);
        out += "\n";
    }
    return out;
}

inline Solution parse_solution(std::istream& in) {
    Solution sol;
    bool have_status = false;
    int lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "c" || tag == "b") continue;
        if (tag == "s") {
            if (have_status) throw ParseError(lineno, "duplicate status line");
            std::string verdict;
            if (!(ls >> verdict)) throw ParseError(lineno, "malformed status line");
            if (verdict == "YES") {
                if (!(ls >> sol.claimed_cost) || sol.claimed_cost < 0)
                    throw ParseError(lineno, "malformed YES cost");
                sol.yes = true;
            } else if (verdict == "NO") {
                sol.yes = false;
            } else {
                throw ParseError(lineno, "status must be YES or NO");
            }
            have_status = true;
        } else if (tag == "-" || tag == "+") {
            if (!have_status) throw ParseError(lineno, "edit before status line");
            int l = 0, r = 0;
            if (!(ls >> l >> r) || l < 1 || r < 1) throw ParseError(lineno, "malformed edit line");
            if (tag == "-")
                sol.edits.deletions.insert({l - 1, r - 1});
            else
                sol.edits.insertions.insert({l - 1, r - 1});
        } else {
            throw ParseError(lineno, "unknown line type '" + tag + "'");
        }
    }
    if (!have_status) throw ParseError(lineno, "missing status line");
    return sol;
}

// ---- solution checking ----

struct Violation {
    std::string category;  // bad-edit | cost-mismatch | not-bicluster
    std::string detail;
};

// End-to-end check of a claimed solution against an instance, independent of
// any solver: the edits must form a valid EditSet for the graph, realize at
// most the claimed cost, and leave only bicluster components.
inline std::vector<Violation> verify(const BipartiteGraph& g, const Solution& sol) {
    std::vector<Violation> out;
    if (!sol.yes) return out;
    auto edge_str = [](const Edge& e) {
        return std::to_string(e.left + 1) + " " + std::to_string(e.right + 1);
    };
    bool edits_ok = true;
    auto in_range = [&](const Edge& e) {
        return e.left >= 0 && e.left < g.n_left() && e.right >= 0 && e.right < g.n_right();
    };
    for (const Edge& e : sol.edits.deletions) {
        if (!in_range(e)) {
            out.push_back({"bad-edit", "deletion out of range: " + edge_str(e)});
            edits_ok = false;
        } else if (!g.has_edge(e.left, e.right)) {
            out.push_back({"bad-edit", "deletion of a non-edge: " + edge_str(e)});
            edits_ok = false;
        }
    }
    for (const Edge& e : sol.edits.insertions) {
        if (!in_range(e)) {
            out.push_back({"bad-edit", "insertion out of range: " + edge_str(e)});
            edits_ok = false;
        } else if (g.has_edge(e.left, e.right)) {
            out.push_back({"bad-edit", "insertion of an existing edge: " + edge_str(e)});
            edits_ok = false;
        }
        if (sol.edits.deletions.count(e)) {
            out.push_back({"bad-edit", "edge both inserted and deleted: " + edge_str(e)});
            edits_ok = false;
        }
    }
    if (sol.edits.cost() > sol.claimed_cost)
        out.push_back({"cost-mismatch", "edits cost " + std::to_string(sol.edits.cost()) +
                                            " but the solution claims " +
                                            std::to_string(sol.claimed_cost)});
    if (!edits_ok) return out;
    BipartiteGraph h = g.apply_edits(sol.edits);
    for (const Component& c : bicluster_components(h)) {
        if (!c.is_bicluster) {
            std::string detail = "component";
            for (VertexRef v : c.vertices) detail += " " + vertex_token(v);
            out.push_back({"not-bicluster", detail});
        }
    }
    return out;
}

// ---- instance generators ----

// c >= 1 disjoint copies of the 6-vertex chordless path; optimum c.
inline BipartiteGraph gen_p6(int copies) {
    if (copies < 1) throw std::invalid_argument("gen_p6: copies must be >= 1");
    std::vector<Edge> es;
    for (int c = 0; c < copies; ++c) {
        int l = 3 * c, r = 3 * c;
        es.push_back({l, r});
        es.push_back({l + 1, r});
        es.push_back({l + 1, r + 1});
        es.push_back({l + 2, r + 1});
        es.push_back({l + 2, r + 2});
    }
    return BipartiteGraph::from_edges(3 * copies, 3 * copies, es);
}

// c >= 1 disjoint copies of the 9-vertex reduction fixpoint (a P6 with every
// left vertex twinned); optimum 2c, and no reduction rule applies.
inline BipartiteGraph gen_tight(int copies) {
    if (copies < 1) throw std::invalid_argument("gen_tight: copies must be >= 1");
    std::vector<Edge> es;
    for (int c = 0; c < copies; ++c) {
        int l = 6 * c, r = 3 * c;
        for (int x : {0, 1}) es.push_back({l + x, r});
        for (int x : {2, 3}) {
            es.push_back({l + x, r});
            es.push_back({l + x, r + 1});
        }
        for (int x : {4, 5}) {
            es.push_back({l + x, r + 1});
            es.push_back({l + x, r + 2});
        }
    }
    return BipartiteGraph::from_edges(6 * copies, 3 * copies, es);
}

// Every cross pair is an edge independently with probability p. The same
// seed always yields the same graph.
inline BipartiteGraph gen_random(int n_left, int n_right, double p, std::uint32_t seed) {
    if (n_left < 0 || n_right < 0) throw std::invalid_argument("gen_random: negative side size");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_random: probability out of [0,1]");
    std::mt19937 rng(seed);
    std::vector<Edge> es;
    for (int i = 0; i < n_left; ++i) {
        for (int j = 0; j < n_right; ++j) {
            double u = rng() * (1.0 / 4294967296.0);
            if (u < p) es.push_back({i, j});
        }
    }
    return BipartiteGraph::from_edges(n_left, n_right, es);
}

struct PlantedInstance {
    BipartiteGraph graph;
    int flips;  // the optimum is at most this
};

// Disjoint complete blocks of the given sizes, then each cross pair flipped
// independently with probability q. The flips themselves undo the noise, so
// the optimum never exceeds their number.
inline PlantedInstance gen_planted(const std::vector<std::pair<int, int>>& blocks, double q,
                                   std::uint32_t seed) {
    if (blocks.empty()) throw std::invalid_argument("gen_planted: no blocks");
    for (auto [a, b] : blocks) {
        if (a < 1 || b < 1) throw std::invalid_argument("gen_planted: block sides must be >= 1");
    }
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("gen_planted: probability out of [0,1]");
    int nl = 0, nr = 0;
    std::vector<std::pair<int, int>> offsets;
    for (auto [a, b] : blocks) {
        offsets.push_back({nl, nr});
        nl += a;
        nr += b;
    }
    std::vector<std::vector<bool>> adj(nl, std::vector<bool>(nr, false));
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        for (int i = 0; i < blocks[k].first; ++i)
            for (int j = 0; j < blocks[k].second; ++j)
                adj[offsets[k].first + i][offsets[k].second + j] = true;
    }
    std::mt19937 rng(seed);
    int flips = 0;
    for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nr; ++j) {
            double u = rng() * (1.0 / 4294967296.0);
            if (u < q) {
                adj[i][j] = !adj[i][j];
                ++flips;
            }
        }
    }
    std::vector<Edge> es;
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nr; ++j)
            if (adj[i][j]) es.push_back({i, j});
    return {BipartiteGraph::from_edges(nl, nr, es), flips};
}

}  // namespace bce
