// Command-line front end: batch verifications with JSON reports.
// Exit codes: 0 ok, 2 mathematical negative (infeasible / not-found /
// diverged), 1 usage or data errors.

#include "g2/parallel.hpp"
#include "g2/reports.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using g2::json;
using namespace g2::reports;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("parse error in '" + path + "': " + e.what());
    }
    return j;
}

int emit(const std::string& command, const Report& rep, const std::string& out_path) {
    json doc = envelope(command, rep);
    std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write '" << out_path << "'\n";
            return 1;
        }
        out << text;
    }
    return exit_code(rep.status);
}

g2::k3::ZVec parse_zvec(const std::string& s) {
    g2::k3::ZVec v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.emplace_back(tok);
    if (v.size() != 22) throw std::invalid_argument("vector needs 22 comma-separated integers");
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verifications for compact G2-holonomy constructions"};
    app.require_subcommand(1);

    std::string out_path;
    std::uint64_t seed = 1;
    int threads = 1;
    double tolerance = 1e-8;
    app.add_option("--out", out_path, "write the JSON report to this path");
    app.add_option("--seed", seed, "seed for randomized searches and samples");
    app.add_option("--threads", threads, "worker threads for data-parallel kernels");
    app.add_option("--tolerance", tolerance, "numeric tolerance where applicable");

    auto* cmd_phi0 = app.add_subcommand("verify-phi0", "standard G2 form, metric, Hodge dual");

    auto* cmd_orb = app.add_subcommand("orbifold", "group, fixed loci, Betti bookkeeping");
    std::string group_spec = "builtin:joyce";
    long delta_b2 = 1, delta_b3 = 3;
    cmd_orb->add_option("--group", group_spec, "builtin:joyce or a group JSON file");
    cmd_orb->add_option("--delta-b2", delta_b2, "per-component b2 increment of the resolution");
    cmd_orb->add_option("--delta-b3", delta_b3, "per-component b3 increment of the resolution");

    auto* cmd_eh = app.add_subcommand("eh-check", "Eguchi-Hanson certificates and decay fits");
    double eh_s = 1.0;
    int eh_points = 1000;
    cmd_eh->add_option("--s", eh_s, "metric parameter s > 0");
    cmd_eh->add_option("--points", eh_points, "number of chart sample points");

    auto* cmd_k3 = app.add_subcommand("k3", "K3 lattice computations");
    cmd_k3->require_subcommand(1);
    auto* k3_inv = cmd_k3->add_subcommand("lattice-invariants", "rank, parity, det, signature");
    auto* k3_find = cmd_k3->add_subcommand("find-isometry", "map one primitive vector to another");
    std::string vec_v, vec_w;
    long budget = 4096;
    k3_find->add_option("--v", vec_v, "22 comma-separated integers")->required();
    k3_find->add_option("--w", vec_w, "22 comma-separated integers")->required();
    k3_find->add_option("--search-budget", budget, "step budget for the reduction");
    auto* k3_match_cmd = cmd_k3->add_subcommand("match", "Donaldson matching of class triples");
    std::string match_file;
    long match_budget = 2000;
    k3_match_cmd->add_option("--file", match_file,
                         "JSON with {\"triple1\": {cI,cJ,cK}, \"triple2\": ...}; "
                         "defaults to the octic example");
    k3_match_cmd->add_option("--search-budget", match_budget, "candidate budget");
    auto* k3_pairs = cmd_k3->add_subcommand("random-pairs", "seeded equal-square isometry search");
    int pair_count = 50;
    k3_pairs->add_option("--pairs", pair_count, "number of primitive pairs");

    auto* cmd_tcs = app.add_subcommand("tcs", "twisted-connected-sum bookkeeping");
    cmd_tcs->require_subcommand(1);
    auto* tcs_betti_cmd = cmd_tcs->add_subcommand("betti", "Betti sum of a glued pair");
    std::string block1, block2, catalog_path;
    long asserted_b2 = -1;
    tcs_betti_cmd->add_option("--block1", block1, "building block name")->required();
    tcs_betti_cmd->add_option("--block2", block2, "building block name")->required();
    tcs_betti_cmd->add_option("--b2", asserted_b2, "assert b2 of the glued manifold");
    tcs_betti_cmd->add_option("--catalog", catalog_path, "catalog JSON (default: builtin)");
    auto* tcs_neck = cmd_tcs->add_subcommand("neck-check", "gluing-map form preservation");
    bool violate = false;
    tcs_neck->add_flag("--violate", violate, "omit the kappa_K negation deliberately");
    auto* tcs_cat = cmd_tcs->add_subcommand("catalog", "validate and print a catalog");
    std::string cat_file;
    tcs_cat->add_option("--file", cat_file, "catalog JSON (default: builtin)");

    auto* cmd_solve = app.add_subcommand("solve-torsion", "torsion-free iteration on flat T^7");
    double epsilon = 0.01;
    std::string modes_spec;
    int max_iter = 60, resolution = 16;
    cmd_solve->add_option("--epsilon", epsilon, "perturbation amplitude");
    cmd_solve->add_option("--modes", modes_spec,
                          "semicolon-separated 7-tuples of wavenumbers (default 1,1,1,0,0,0,0)");
    cmd_solve->add_option("--tol", tolerance, "residual tolerance");
    cmd_solve->add_option("--max-iter", max_iter, "iteration budget");
    cmd_solve->add_option("--resolution", resolution, "grid resolution per active axis");

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1; // usage errors exit 1, --help exits 0
    }
    g2::set_threads(threads);

    try {
        if (cmd_phi0->parsed()) return emit("verify-phi0", verify_phi0(), out_path);

        if (cmd_orb->parsed()) {
            g2::orbifold::OrbifoldGroup group;
            if (group_spec == "builtin:joyce") {
                auto gens = g2::orbifold::joyce_generators();
                group = g2::orbifold::generate({gens[0], gens[1], gens[2]});
            } else {
                group = group_from_json(load_json_file(group_spec));
            }
            return emit("orbifold", orbifold_report(group, delta_b2, delta_b3), out_path);
        }

        if (cmd_eh->parsed()) {
            EhOptions opt;
            opt.s = eh_s;
            opt.seed = seed;
            opt.points = eh_points;
            return emit("eh-check", eh_check(opt), out_path);
        }

        if (k3_inv->parsed()) return emit("k3 lattice-invariants", k3_invariants(), out_path);
        if (k3_find->parsed())
            return emit("k3 find-isometry",
                        k3_find_isometry(parse_zvec(vec_v), parse_zvec(vec_w), budget), out_path);
        if (k3_match_cmd->parsed()) {
            g2::k3::HyperKahlerClasses c1, c2;
            if (match_file.empty()) {
                std::tie(c1, c2) = octic_matching_example();
            } else {
                json j = load_json_file(match_file);
                if (j.contains("gram")) {
                    auto L = g2::k3::k3_lattice();
                    const auto& gram = j.at("gram");
                    if (static_cast<int>(gram.size()) != L.rank)
                        throw std::invalid_argument("class file gram must be the rank-22 K3 gram");
                    for (int r = 0; r < L.rank; ++r)
                        for (int c = 0; c < L.rank; ++c)
                            if (gram[static_cast<size_t>(r)][static_cast<size_t>(c)].get<long>() !=
                                L.gram[static_cast<size_t>(r)][static_cast<size_t>(c)])
                                throw std::invalid_argument(
                                    "class file gram does not match the K3 lattice");
                }
                c1 = classes_from_json(j.at("triple1"), 22);
                c2 = classes_from_json(j.at("triple2"), 22);
            }
            return emit("k3 match", g2::reports::k3_match(c1, c2, seed, match_budget), out_path);
        }
        if (k3_pairs->parsed())
            return emit("k3 random-pairs", k3_random_pairs(seed, pair_count, budget), out_path);

        if (tcs_betti_cmd->parsed()) {
            auto cat = catalog_path.empty() ? g2::tcs::builtin_catalog()
                                            : catalog_from_json(load_json_file(catalog_path));
            std::optional<long> b2;
            if (asserted_b2 >= 0) b2 = asserted_b2;
            return emit("tcs betti", g2::reports::tcs_betti(cat, block1, block2, b2), out_path);
        }
        if (tcs_neck->parsed()) return emit("tcs neck-check", tcs_neck_check(violate), out_path);
        if (tcs_cat->parsed()) {
            auto cat = cat_file.empty() ? g2::tcs::builtin_catalog()
                                        : catalog_from_json(load_json_file(cat_file));
            return emit("tcs catalog", tcs_catalog(cat), out_path);
        }

        if (cmd_solve->parsed()) {
            TorsionOptions opt;
            opt.epsilon = epsilon;
            if (!modes_spec.empty()) opt.modes = parse_modes(modes_spec);
            opt.tolerance = tolerance;
            opt.max_iterations = max_iter;
            opt.resolution = resolution;
            opt.seed = seed;
            return emit("solve-torsion", solve_torsion(opt), out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "no subcommand dispatched\n";
    return 1;
}
