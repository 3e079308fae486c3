// Command-line front end: solving, kernelizing, generating, verifying, and
// gadget-library management for the locating-domination tool set.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "idsolve/fes_kernel.hpp"
#include "idsolve/lds_fpt.hpp"
#include "idsolve/locating.hpp"
#include "idsolve/random_gen.hpp"
#include "idsolve/reductions.hpp"
#include "idsolve/test_cover.hpp"
#include "idsolve/tree_dp.hpp"

using namespace idsolve;
using nlohmann::json;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << text;
}

std::string witness_csv(const std::vector<int>& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w[i] + 1);
    }
    return s;
}

std::vector<int> parse_witness(const std::string& csv, int n) {
    std::vector<int> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        int v = std::stoi(tok);
        if (v < 1 || v > n) throw std::invalid_argument("witness id out of range: " + tok);
        out.push_back(v - 1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int report_solution(const std::optional<Solution>& sol, bool json_mode,
                    const std::string& command, json extra = {}) {
    if (json_mode) {
        json doc;
        doc["command"] = command;
        doc["result"] = sol ? "yes" : "no";
        if (sol) {
            doc["size"] = sol->size();
            json w = json::array();
            for (int v : sol->vertices) w.push_back(v + 1);
            doc["witness"] = w;
        }
        for (auto& [k, v] : extra.items()) doc[k] = v;
        std::cout << doc.dump(2) << "\n";
    } else if (sol) {
        std::cout << "result=yes size=" << sol->size() << " witness="
                  << witness_csv(sol->vertices) << "\n";
    } else {
        std::cout << "result=no size=- witness=-\n";
    }
    return sol ? kExitYes : kExitNo;
}

GadgetLibrary load_or_discover(const std::string& path_flag, int max_n, int threads) {
    std::string path = path_flag;
    if (path.empty())
        if (const char* env = std::getenv("IDSOLVE_GADGETS")) path = env;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open gadget library: " + path);
        return load_gadget_library(in);
    }
    return discover_gadgets(max_n, threads);
}

std::string to_dot(const Graph& g) {
    std::ostringstream out;
    out << "graph kernel {\n";
    for (int v = 0; v < g.n; ++v) out << "  v" << v + 1 << ";\n";
    for (auto [u, v] : g.edges()) out << "  v" << u + 1 << " -- v" << v + 1 << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solvers and kernels for locating-dominating set and test cover"};
    app.require_subcommand(1);

    std::string input, param = "vc", out_path, dot_path, witness_arg, gadget_path;
    int k = -1, threads = 0, cap = 20, root1 = 1, root2 = 0, max_n = 10;
    bool optimize = false, json_mode = false;
    int nr = 4, nb = 3, kprime = 2;
    unsigned seed = 1;
    double edge_prob = 0.5;
    std::string gen_from = "rbds", gen_to = "lds", oracle_problem = "lds";

    auto add_common = [&](CLI::App* cmd, bool with_k) {
        cmd->add_option("input", input, "input file, or - for stdin")->required();
        cmd->add_flag("--json", json_mode, "machine-readable report");
        cmd->add_option("--threads", threads, "worker cap for the guess loops (0 = all cores)");
        if (with_k) {
            cmd->add_option("-k,--budget", k, "decision budget");
            cmd->add_flag("--opt", optimize, "report the exact optimum instead");
        }
    };

    auto* cmd_solve_lds = app.add_subcommand("solve-lds", "solve locating-dominating set");
    cmd_solve_lds->add_option("--param", param, "vc | tc | dc | nd | bruteforce");
    cmd_solve_lds->add_option("--cap", cap, "brute-force vertex cap (nd, bruteforce)");
    add_common(cmd_solve_lds, true);

    auto* cmd_solve_tc = app.add_subcommand("solve-tc", "solve test cover");
    add_common(cmd_solve_tc, true);

    auto* cmd_kernelize = app.add_subcommand("kernelize", "shrink an instance");
    cmd_kernelize->add_option("--param", param, "fes | nd")->required();
    cmd_kernelize->add_option("--out", out_path, "kernel output file (default stdout)");
    cmd_kernelize->add_option("--dot", dot_path, "also write the kernel as DOT");
    cmd_kernelize->add_option("--gadgets", gadget_path, "gadget library file");
    cmd_kernelize->add_option("--max-n", max_n, "discovery bound when no library file is given");
    add_common(cmd_kernelize, true);

    auto* cmd_gen = app.add_subcommand("gen", "generate instances via the reductions");
    cmd_gen->add_option("--from", gen_from, "source problem (rbds)");
    cmd_gen->add_option("--to", gen_to, "target problem: lds | tc");
    cmd_gen->add_option("--nr", nr, "red vertices");
    cmd_gen->add_option("--nb", nb, "blue vertices");
    cmd_gen->add_option("--kprime", kprime, "source budget");
    cmd_gen->add_option("--edge-prob", edge_prob, "edge probability");
    cmd_gen->add_option("--seed", seed, "rng seed");
    cmd_gen->add_option("--out", out_path, "output file (default stdout)");
    cmd_gen->add_flag("--json", json_mode, "machine-readable report");

    auto* cmd_verify = app.add_subcommand("verify", "check a witness against an instance");
    cmd_verify->add_option("--witness", witness_arg, "comma-separated 1-based ids")->required();
    add_common(cmd_verify, false);

    auto* cmd_tree_opt = app.add_subcommand("tree-opt", "rooted tree optimum profiles");
    cmd_tree_opt->add_option("--root", root1, "root (1-based)");
    cmd_tree_opt->add_option("--root2", root2, "second root (1-based) for the 25-type profile");
    add_common(cmd_tree_opt, false);

    auto* cmd_gadgets = app.add_subcommand("gadgets", "gadget library management");
    auto* cmd_discover = cmd_gadgets->add_subcommand("discover", "enumerate gadget classes");
    cmd_discover->add_option("--max-n", max_n, "largest tree size to enumerate");
    cmd_discover->add_option("--out", out_path, "library file to write")->required();
    cmd_discover->add_option("--threads", threads, "workers (0 = all cores)");
    auto* cmd_info = cmd_gadgets->add_subcommand("info", "print library facts");
    cmd_info->add_option("input", input, "library file")->required();
    cmd_gadgets->require_subcommand(1);

    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force reference solvers");
    cmd_oracle->add_option("--problem", oracle_problem, "lds | tc");
    cmd_oracle->add_option("--cap", cap, "enumeration cap");
    add_common(cmd_oracle, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_solve_lds->parsed()) {
            if (!optimize && k < 0) throw std::invalid_argument("need -k or --opt");
            Graph g = parse_graph_string(read_input(input));
            LdsOptions opts;
            opts.threads = threads;
            opts.optimize = optimize;
            std::optional<Solution> sol;
            if (param == "bruteforce") {
                Solution s = brute_force_lds(g, cap);
                sol = (optimize || s.size() <= k) ? std::optional<Solution>(s) : std::nullopt;
            } else if (param == "nd") {
                sol = solve_lds_nd(g, optimize ? g.n : k, cap);
            } else {
                LdsMode mode;
                if (param == "vc") mode = LdsMode::VertexCover;
                else if (param == "tc") mode = LdsMode::TwinCover;
                else if (param == "dc") mode = LdsMode::DistClique;
                else throw std::invalid_argument("unknown --param " + param);
                sol = optimize ? std::optional<Solution>(lds_optimum(g, mode, opts))
                               : lds_detail::solve_structured(g, k, mode, opts);
            }
            return report_solution(sol, json_mode, "solve-lds",
                                   {{"param", param}, {"n", g.n}, {"m", g.edge_count()}});
        }

        if (cmd_solve_tc->parsed()) {
            if (!optimize && k < 0) throw std::invalid_argument("need -k or --opt");
            SetSystem sys = parse_set_system_string(read_input(input));
            TcOptions opts;
            opts.threads = threads;
            auto sol = optimize ? tc_optimum(sys, opts) : solve_tc(sys, k, opts);
            return report_solution(sol, json_mode, "solve-tc",
                                   {{"universe", sys.universe}, {"tests", sys.tests.size()}});
        }

        if (cmd_kernelize->parsed()) {
            Graph g = parse_graph_string(read_input(input));
            if (k < 0) throw std::invalid_argument("kernelize needs -k");
            Graph kernel;
            int k_out = 0;
            json extra;
            if (param == "fes") {
                GadgetLibrary lib = load_or_discover(gadget_path, max_n, threads);
                KernelResult res = kernelize_fes(g, k, lib);
                kernel = res.graph;
                k_out = res.k;
                extra = {{"fes", res.report.fes},
                         {"kernel_n", res.report.kernel_n},
                         {"kernel_m", res.report.kernel_m},
                         {"ratio", res.report.ratio},
                         {"gadget_gaps", res.report.gadget_gaps}};
                if (!res.report.gadget_gaps.empty()) {
                    std::cerr << "gadget gap: " << res.report.gadget_gaps.size()
                              << " unreduced core paths (rerun discovery with a larger --max-n)\n";
                }
            } else if (param == "nd") {
                NdKernel res = nd_kernel(g, k);
                kernel = res.graph;
                k_out = res.k;
                extra = {{"kernel_n", kernel.n}, {"kernel_m", kernel.edge_count()}};
            } else {
                throw std::invalid_argument("kernelize --param must be fes or nd");
            }
            if (json_mode) {
                json doc;
                doc["command"] = "kernelize";
                doc["param"] = param;
                doc["k"] = k_out;
                doc["kernel"] = write_graph(kernel);
                for (auto& [key, v] : extra.items()) doc[key] = v;
                std::cout << doc.dump(2) << "\n";
            } else {
                std::string text = write_graph(kernel) + "c k'=" + std::to_string(k_out) + "\n";
                write_output(out_path, text);
                if (!out_path.empty() && out_path != "-")
                    std::cout << "k'=" << k_out << "\n";
            }
            if (!dot_path.empty()) write_output(dot_path, to_dot(kernel));
            return kExitYes;
        }

        if (cmd_gen->parsed()) {
            if (gen_from != "rbds") throw std::invalid_argument("gen --from must be rbds");
            std::mt19937 rng(seed);
            std::bernoulli_distribution coin(edge_prob);
            RbdsInstance in;
            in.nr = nr;
            in.nb = nb;
            in.k = kprime;
            for (int r = 0; r < nr; ++r)
                for (int b = 0; b < nb; ++b)
                    if (coin(rng)) in.edges.emplace_back(r, b);
            auto pre = preprocess_rbds(in);
            if (pre.outcome == RbdsOutcome::TrivialNo)
                throw Refused("generated instance is a trivial no (isolated blue vertex)");
            const RbdsInstance& inst = pre.inst;
            std::string text;
            int k_out;
            if (gen_to == "lds") {
                auto red = rbds_to_lds(inst);
                k_out = red.k;
                text = "c k=" + std::to_string(red.k) + "\n" + write_graph(red.g);
            } else if (gen_to == "tc") {
                auto red = rbds_to_tc(inst);
                k_out = red.k;
                text = "c k=" + std::to_string(red.k) + "\n" + write_set_system(red.sys);
            } else {
                throw std::invalid_argument("gen --to must be lds or tc");
            }
            if (json_mode) {
                json doc{{"command", "gen"}, {"to", gen_to}, {"k", k_out}, {"instance", text}};
                std::cout << doc.dump(2) << "\n";
            } else {
                write_output(out_path, text);
            }
            return kExitYes;
        }

        if (cmd_verify->parsed()) {
            std::string text = read_input(input);
            std::istringstream probe(text);
            std::string first_tag;
            probe >> first_tag;
            while (first_tag == "c") {
                std::string rest;
                std::getline(probe, rest);
                probe >> first_tag;
            }
            bool ok;
            if (first_tag == "p") {
                Graph g = parse_graph_string(text);
                auto w = parse_witness(witness_arg, g.n);
                ok = is_locating_dominating(g, w);
            } else if (first_tag == "u") {
                SetSystem sys = parse_set_system_string(text);
                auto w = parse_witness(witness_arg, (int)sys.tests.size());
                ok = is_test_cover(sys, w);
            } else {
                throw std::invalid_argument("unrecognized instance format");
            }
            if (json_mode)
                std::cout << json{{"command", "verify"}, {"result", ok ? "yes" : "no"}}.dump(2)
                          << "\n";
            else
                std::cout << "result=" << (ok ? "yes" : "no") << "\n";
            return ok ? kExitYes : kExitNo;
        }

        if (cmd_tree_opt->parsed()) {
            Graph g = parse_graph_string(read_input(input));
            if (root1 < 1 || root1 > g.n) throw std::invalid_argument("--root out of range");
            if (root2 == 0) {
                auto v = opt_rooted(g, root1 - 1);
                auto cls = classify_rooted(g, root1 - 1);
                if (json_mode) {
                    std::cout << json{{"command", "tree-opt"},
                                      {"opt", v},
                                      {"class", std::string(1, type_name(cls.type))},
                                      {"k", cls.k}}
                                     .dump(2)
                              << "\n";
                } else {
                    std::cout << "opt=";
                    for (int x = 0; x < 5; ++x) std::cout << (x ? "," : "") << v[x];
                    std::cout << " class=" << type_name(cls.type) << " k=" << cls.k << "\n";
                }
            } else {
                if (root2 < 1 || root2 > g.n) throw std::invalid_argument("--root2 out of range");
                auto v = opt_doubly(g, root1 - 1, root2 - 1);
                auto cls = classify_doubly(g, root1 - 1, root2 - 1);
                if (json_mode) {
                    std::cout << json{{"command", "tree-opt"},
                                      {"opt", v},
                                      {"signature", cls.signature()},
                                      {"k", cls.k}}
                                     .dump(2)
                              << "\n";
                } else {
                    std::cout << "opt=";
                    for (int i = 0; i < 25; ++i) std::cout << (i ? "," : "") << v[i];
                    std::cout << " signature=" << cls.signature() << " k=" << cls.k << "\n";
                }
            }
            return kExitYes;
        }

        if (cmd_discover->parsed()) {
            GadgetLibrary lib = discover_gadgets(max_n, threads);
            std::ofstream out(out_path);
            if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
            save_gadget_library(lib, out);
            std::cout << "entries=" << lib.entries.size() << " max_n=" << lib.max_n << "\n";
            return kExitYes;
        }

        if (cmd_info->parsed()) {
            std::ifstream in(input);
            if (!in) throw std::invalid_argument("cannot open library file: " + input);
            GadgetLibrary lib = load_gadget_library(in);
            std::cout << "entries=" << lib.entries.size() << " max_n=" << lib.max_n << "\n";
            return kExitYes;
        }

        if (cmd_oracle->parsed()) {
            if (oracle_problem == "lds") {
                Graph g = parse_graph_string(read_input(input));
                Solution s = brute_force_lds(g, cap);
                return report_solution(s, json_mode, "oracle", {{"problem", "lds"}});
            }
            if (oracle_problem == "tc") {
                SetSystem sys = parse_set_system_string(read_input(input));
                auto s = brute_force_tc(sys, cap);
                return report_solution(s, json_mode, "oracle", {{"problem", "tc"}});
            }
            throw std::invalid_argument("oracle --problem must be lds or tc");
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Refused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
