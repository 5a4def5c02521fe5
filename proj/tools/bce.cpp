// Command-line front end: solving, kernelization, the brute-force oracle,
// solution verification, instance generators, and branching-vector analysis.
//
// Exit codes: 0 success / YES, 1 NO decision, 2 errors (bad input, parse
// failures, failed verification).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bce/branching.hpp"
#include "bce/io.hpp"
#include "bce/kernelize.hpp"
#include "bce/oracle.hpp"
#include "bce/solver.hpp"

namespace {

bce::BipartiteGraph load_instance(const std::string& path) {
    if (path == "-") return bce::parse_instance(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return bce::parse_instance(in);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

void print_stats(const bce::SolveStats& st) {
    std::cout << "c nodes " << st.nodes << "\n";
    std::cout << "c max-depth " << st.max_depth << "\n";
    std::cout << "c dispatches degree1=" << st.degree_one_dispatches
              << " twins=" << st.twin_dispatches << " merge=" << st.merge_dispatches
              << " general=" << st.general_dispatches << " poly=" << st.poly_solved << "\n";
    std::cout << "c filtered-children " << st.children_filtered << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact bicluster editing toolkit"};
    app.require_subcommand(1);

    std::string file, solfile, outfile, trace_file, vector_text;
    int budget = 0, copies = 1, cd_c = 0, cd_d = 0;
    int nl = 0, nr = 0, blocks = 1, block_left = 1, block_right = 1;
    double prob = 0.5, noise = 0.1, tol = 1e-9, limit = 1e8;
    unsigned seed = 1;
    bool stats = false;

    auto* solve = app.add_subcommand("solve", "decide whether <= K edits suffice");
    solve->add_option("--budget,-k", budget, "edit budget K")->required();
    solve->add_flag("--stats", stats, "print search statistics");
    solve->add_option("file", file, "instance file (.bce, '-' for stdin)")->required();

    auto* optimal = app.add_subcommand("optimal", "find the minimum number of edits");
    optimal->add_flag("--stats", stats, "print search statistics");
    optimal->add_option("file", file, "instance file")->required();

    auto* kern = app.add_subcommand("kernelize", "reduce the instance with rules 1-3");
    kern->add_option("--budget,-k", budget, "edit budget K")->required();
    kern->add_option("--out,-o", outfile, "write the reduced instance here (default stdout)");
    kern->add_option("--trace", trace_file, "write the rule trace here (default stderr)");
    kern->add_option("file", file, "instance file")->required();

    auto* oracle = app.add_subcommand("oracle", "exact optimum by exhaustive enumeration");
    oracle->add_option("--limit", limit, "maximum number of enumeration states");
    oracle->add_option("file", file, "instance file")->required();

    auto* verify = app.add_subcommand("verify", "check a solution file against an instance");
    verify->add_option("file", file, "instance file")->required();
    verify->add_option("solution", solfile, "solution file")->required();

    auto* gen = app.add_subcommand("gen", "instance generators");
    gen->require_subcommand(1);
    auto* gen_p6_cmd = gen->add_subcommand("p6", "disjoint 6-vertex paths, optimum = copies");
    gen_p6_cmd->add_option("--copies,-c", copies, "number of copies")->required();
    gen_p6_cmd->add_option("--out,-o", outfile, "output file (default stdout)");
    auto* gen_tight_cmd =
        gen->add_subcommand("tight", "reduction-rule fixpoints with 9 vertices per 2 of optimum");
    gen_tight_cmd->add_option("--copies,-c", copies, "number of copies")->required();
    gen_tight_cmd->add_option("--out,-o", outfile, "output file (default stdout)");
    auto* gen_rand_cmd = gen->add_subcommand("random", "independent edges with probability p");
    gen_rand_cmd->add_option("--left", nl, "left side size")->required();
    gen_rand_cmd->add_option("--right", nr, "right side size")->required();
    gen_rand_cmd->add_option("--prob,-p", prob, "edge probability");
    gen_rand_cmd->add_option("--seed,-s", seed, "random seed");
    gen_rand_cmd->add_option("--out,-o", outfile, "output file (default stdout)");
    auto* gen_plant_cmd =
        gen->add_subcommand("planted", "complete blocks with noise, optimum <= flips");
    gen_plant_cmd->add_option("--blocks,-b", blocks, "number of blocks");
    gen_plant_cmd->add_option("--block-left", block_left, "left vertices per block");
    gen_plant_cmd->add_option("--block-right", block_right, "right vertices per block");
    gen_plant_cmd->add_option("--noise,-q", noise, "flip probability");
    gen_plant_cmd->add_option("--seed,-s", seed, "random seed");
    gen_plant_cmd->add_option("--out,-o", outfile, "output file (default stdout)");

    auto* analyze = app.add_subcommand("analyze", "branching-vector arithmetic");
    auto* vec_opt = analyze->add_option("--vector", vector_text, "comma-separated decrements");
    auto* cd_opt = analyze->add_option("--cd", "two-loop factor lrr(c,d)")
                       ->expected(2)
                       ->check(CLI::PositiveNumber);
    analyze->add_option("--tol", tol, "root tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve) {
            bce::BipartiteGraph g = load_instance(file);
            if (budget < 0) throw std::runtime_error("budget must be non-negative");
            bce::SolveResult r = bce::solve_decision({g, budget});
            std::cout << bce::write_solution(g, r);
            if (stats) print_stats(r.stats);
            return r.yes ? 0 : 1;
        }
        if (*optimal) {
            bce::BipartiteGraph g = load_instance(file);
            bce::SolveResult r = bce::solve_optimal(g);
            std::cout << bce::write_solution(g, r);
            if (stats) print_stats(r.stats);
            return 0;
        }
        if (*kern) {
            bce::BipartiteGraph g = load_instance(file);
            if (budget < 0) throw std::runtime_error("budget must be non-negative");
            bce::KernelResult r = bce::kernelize({g, budget});
            std::string trace = r.trace.to_text();
            if (trace_file.empty())
                std::cerr << trace;
            else
                write_output(trace_file, trace);
            if (r.no_certificate) {
                std::cout << "s NO\n";
                return 1;
            }
            std::vector<std::string> comments = {"reduced budget " +
                                                 std::to_string(r.instance.budget)};
            write_output(outfile, bce::write_instance(r.instance.graph, comments));
            return 0;
        }
        if (*oracle) {
            bce::BipartiteGraph g = load_instance(file);
            bce::OracleResult r = bce::oracle_opt(g, limit);
            bce::SolveResult as_solve;
            as_solve.yes = true;
            as_solve.cost = r.cost;
            as_solve.witness = bce::edits_of(g, r.clustering);
            std::cout << bce::write_solution(g, as_solve);
            return 0;
        }
        if (*verify) {
            bce::BipartiteGraph g = load_instance(file);
            std::ifstream sin(solfile);
            if (!sin) throw std::runtime_error("cannot open " + solfile);
            bce::Solution sol = bce::parse_solution(sin);
            auto violations = bce::verify(g, sol);
            if (violations.empty()) {
                std::cout << "OK\n";
                return 0;
            }
            for (const auto& v : violations) std::cerr << v.category << ": " << v.detail << "\n";
            return 2;
        }
        if (*gen) {
            if (*gen_p6_cmd) {
                write_output(outfile, bce::write_instance(bce::gen_p6(copies)));
            } else if (*gen_tight_cmd) {
                write_output(outfile, bce::write_instance(bce::gen_tight(copies)));
            } else if (*gen_rand_cmd) {
                write_output(outfile, bce::write_instance(bce::gen_random(nl, nr, prob, seed)));
            } else {
                std::vector<std::pair<int, int>> shape(blocks, {block_left, block_right});
                bce::PlantedInstance p = bce::gen_planted(shape, noise, seed);
                write_output(outfile, bce::write_instance(
                                          p.graph, {"flips " + std::to_string(p.flips)}));
            }
            return 0;
        }
        if (*analyze) {
            if (vec_opt->count() == 0 && cd_opt->count() == 0)
                throw std::runtime_error("analyze needs --vector or --cd");
            double value;
            if (cd_opt->count() > 0) {
                auto cd = cd_opt->as<std::vector<int>>();
                cd_c = cd[0];
                cd_d = cd[1];
                value = bce::lrr_cd(cd_c, cd_d, tol).value;
            } else {
                value = bce::branching_factor(bce::parse_vector(vector_text), tol).value;
            }
            std::printf("%.5f\n", value);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
