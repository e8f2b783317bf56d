#include "g2/reports.hpp"

#include "g2/eguchi_hanson.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace g2::reports {

std::string status_name(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::Infeasible: return "infeasible";
        case Status::NotFound: return "not-found";
        case Status::Diverged: return "diverged";
        default: return "error";
    }
}

int exit_code(Status s) {
    switch (s) {
        case Status::Ok: return 0;
        case Status::Infeasible:
        case Status::NotFound:
        case Status::Diverged: return 2;
        default: return 1;
    }
}

json envelope(const std::string& command, const Report& r) {
    return json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"status", status_name(r.status)},
                {"payload", r.payload}};
}

Report verify_phi0() {
    Report rep;
    FormQ phi0 = standard_phi0<Rat>();
    MetricQ m = metric_from_three_form(phi0);
    FormQ star = hodge_star(m, phi0);
    bool identity = m.g == mat7_identity<Rat>();
    rep.payload = json{{"phi0", to_json(phi0)},
                       {"metric_is_identity", identity},
                       {"volume", rat_to_string(m.volume)},
                       {"hodge_dual", to_json(star)},
                       {"support_size", 7}};
    if (!identity || !(m.volume == Rat(1))) rep.status = Status::Error;
    return rep;
}

orbifold::OrbifoldGroup group_from_json(const json& j) {
    std::vector<orbifold::AffineIsometry> gens;
    int idx = 0;
    for (const auto& g : j.at("generators")) {
        orbifold::AffineIsometry a;
        if (g.contains("diag")) {
            auto d = g.at("diag");
            if (d.size() != 7) throw std::invalid_argument("diag needs 7 entries");
            for (int i = 0; i < 7; ++i) a.sign[i] = d[static_cast<size_t>(i)].get<int>();
        } else {
            auto p = g.at("perm");
            auto sgns = g.at("sign");
            for (int i = 0; i < 7; ++i) {
                a.perm[i] = p[static_cast<size_t>(i)].get<int>() - 1;
                a.sign[i] = sgns[static_cast<size_t>(i)].get<int>();
            }
        }
        if (g.contains("t")) {
            auto t = g.at("t");
            for (int i = 0; i < 7; ++i)
                a.t[i] = mod1(rat_from_string(t[static_cast<size_t>(i)].get<std::string>()));
        }
        a.label = g.contains("name") ? g.at("name").get<std::string>()
                                     : ("g" + std::to_string(idx));
        a.validate();
        gens.push_back(std::move(a));
        ++idx;
    }
    return orbifold::generate(gens);
}

Report orbifold_report(const orbifold::OrbifoldGroup& group, long delta_b2, long delta_b3) {
    Report rep;
    auto analysis = orbifold::analyze(group);
    auto [b2, b3] = orbifold::resolution_betti(analysis, delta_b2, delta_b3);

    json fixed = json::array();
    for (const auto& [label, count] : analysis.fixed_counts)
        fixed.push_back(json{{"element", label}, {"components", count}});
    json singular = json::array();
    for (const auto& s : analysis.singular) {
        json pinned = json::object();
        for (const auto& [ax, v] : s.representative.pinned)
            pinned[std::to_string(ax + 1)] = rat_to_string(v);
        json free_axes = json::array();
        for (int a = 0; a < 7; ++a)
            if (s.representative.free_axis[a]) free_axes.push_back(a + 1);
        singular.push_back(json{{"free_axes", free_axes},
                                {"pinned", pinned},
                                {"stabilizer", s.representative.stabilizer},
                                {"orbit_size", s.orbit_size}});
    }
    rep.payload = json{{"group_order", analysis.order},
                       {"fixed_loci", fixed},
                       {"singular_components", singular},
                       {"singular_count", analysis.singular.size()},
                       {"all_fixed_disjoint", analysis.all_fixed_disjoint},
                       {"invariant_betti", analysis.invariant_betti},
                       {"delta_b2", delta_b2},
                       {"delta_b3", delta_b3},
                       {"resolution_b2", b2},
                       {"resolution_b3", b3}};
    return rep;
}

Report eh_check(const EhOptions& opt) {
    Report rep;
    eh::EHParameter s{opt.s};
    double rmin = 0.3 * std::max(opt.s, 0.5), rmax = 10.0 * std::max(opt.s, 0.5);
    auto pts = eh::sample_points(opt.seed, opt.points, rmin, rmax);
    double det_dev = eh::max_det_deviation(s, pts);
    double ricci = eh::ricci_check(s, {eh::cplx(opt.s, 0), eh::cplx(opt.s, 0)}, 1e-3 * opt.s);

    std::vector<double> radii;
    for (double f : {10.0, 30.0, 100.0, 300.0, 1000.0}) radii.push_back(f * opt.s);
    auto fit0 = eh::ale_decay_fit(s, radii, 0);
    auto fit1 = eh::ale_decay_fit(s, radii, 1);

    // dilation candidates at a deterministic set of (lambda, point)
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> ul(1.3, 2.5);
    auto spts = eh::sample_points(opt.seed + 1, 5, 0.8 * opt.s, 2.5 * opt.s);
    int winner_a = 0, winner_b = 0;
    double worst_winner = 0;
    for (const auto& p : spts) {
        double lambda = ul(rng);
        auto res = eh::scaling_check(s, lambda, p);
        if (res.vs_lambda_s < res.vs_s_over_lambda) {
            ++winner_a;
            worst_winner = std::max(worst_winner, res.vs_lambda_s);
        } else {
            ++winner_b;
            worst_winner = std::max(worst_winner, res.vs_s_over_lambda);
        }
    }
    std::string winner = winner_a > winner_b ? "lambda*s" : "s/lambda";

    rep.payload = json{{"s", opt.s},
                       {"points", opt.points},
                       {"det_h_max_dev", det_dev},
                       {"ricci_max", ricci},
                       {"ale_exponent_k0", fit0.exponent},
                       {"ale_exponent_k1", fit1.exponent},
                       {"scaling_winner", winner},
                       {"scaling_winner_residual", worst_winner},
                       {"curvature_proxy", eh::curvature_proxy(s)}};
    if (winner_a != 0 && winner_b != 0) rep.status = Status::Error;
    return rep;
}

Report k3_invariants() {
    Report rep;
    auto L = k3::k3_lattice();
    auto [pos, neg] = k3::signature(L);
    rep.payload = json{{"rank", L.rank},
                       {"even", k3::is_even(L)},
                       {"determinant", k3::determinant(L).get_str()},
                       {"signature", json::array({pos, neg})}};
    return rep;
}

namespace {

json zvec_to_json(const k3::ZVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
}

json isometry_to_json(const k3::Isometry& m) {
    json rows = json::array();
    for (const auto& r : m.m) rows.push_back(zvec_to_json(r));
    return rows;
}

k3::ZVec zvec_from_json(const json& j, int rank) {
    if (static_cast<int>(j.size()) != rank)
        throw std::invalid_argument("vector length must match lattice rank");
    k3::ZVec v;
    for (const auto& x : j) v.emplace_back(x.get<std::string>());
    return v;
}

} // namespace

Report k3_find_isometry(const k3::ZVec& v, const k3::ZVec& w, long budget) {
    Report rep;
    auto L = k3::k3_lattice();
    auto res = k3::find_isometry(L, v, w, budget);
    rep.payload = json{{"square", k3::inner(L, v, v).get_str()},
                       {"steps", res.steps},
                       {"note", res.note}};
    if (res.status == k3::SearchStatus::Found) {
        rep.payload["isometry"] = isometry_to_json(*res.isometry);
    } else {
        rep.status = Status::NotFound;
    }
    return rep;
}

k3::HyperKahlerClasses classes_from_json(const json& j, int rank) {
    const json& vecs = j.contains("vectors") ? j.at("vectors") : j;
    k3::HyperKahlerClasses c;
    auto parse = [&](const char* key) {
        const auto& arr = vecs.at(key);
        if (static_cast<int>(arr.size()) != rank)
            throw std::invalid_argument("class vector length must match lattice rank");
        k3::QVec v;
        for (const auto& x : arr) v.push_back(rat_from_string(x.get<std::string>()));
        return v;
    };
    c.cI = parse("cI");
    c.cJ = parse("cJ");
    c.cK = parse("cK");
    return c;
}

std::pair<k3::HyperKahlerClasses, k3::HyperKahlerClasses> octic_matching_example() {
    auto qv = [](const k3::ZVec& z) {
        k3::QVec q;
        for (const auto& x : z) q.emplace_back(x);
        return q;
    };
    k3::HyperKahlerClasses c;
    c.cI = qv(k3::hyperbolic_vector(0, 1, 4));
    c.cJ = qv(k3::hyperbolic_vector(1, 1, 4));
    c.cK = qv(k3::hyperbolic_vector(2, 1, 4));
    return {c, c};
}

Report k3_match(const k3::HyperKahlerClasses& c1, const k3::HyperKahlerClasses& c2,
                std::uint64_t seed, long budget) {
    Report rep;
    auto L = k3::k3_lattice();
    auto res = k3::donaldson_match(L, c1, c2, seed, budget);
    rep.payload = json{{"tried", res.tried}, {"note", res.note}};
    switch (res.status) {
        case k3::SearchStatus::Found:
            rep.payload["isometry"] = isometry_to_json(*res.isometry);
            break;
        case k3::SearchStatus::Infeasible:
            rep.status = Status::Infeasible;
            break;
        default:
            rep.status = Status::NotFound;
            break;
    }
    return rep;
}

Report k3_random_pairs(std::uint64_t seed, int pairs, long budget) {
    Report rep;
    auto L = k3::k3_lattice();
    std::mt19937_64 seeder(seed);
    int found = 0;
    long total_steps = 0;
    json detail = json::array();
    int produced = 0;
    long guard = 0;
    while (produced < pairs && guard < 100000) {
        ++guard;
        k3::ZVec v = k3::random_hyperbolic_primitive(L, seeder(), 20);
        k3::ZVec w = k3::random_hyperbolic_primitive(L, seeder(), 20);
        if (k3::inner(L, v, v) != k3::inner(L, w, w)) continue;
        ++produced;
        auto res = k3::find_isometry(L, v, w, budget);
        total_steps += res.steps;
        bool ok = res.status == k3::SearchStatus::Found;
        if (ok) ++found;
        detail.push_back(json{{"square", k3::inner(L, v, v).get_str()}, {"found", ok}});
    }
    rep.payload = json{{"pairs", produced},
                       {"found", found},
                       {"total_steps", total_steps},
                       {"detail", detail}};
    if (found != produced || produced != pairs) rep.status = Status::NotFound;
    return rep;
}

namespace {

std::string kind_name(tcs::BlockKind k) {
    switch (k) {
        case tcs::BlockKind::FanoType: return "fano-type";
        case tcs::BlockKind::InvolutionType: return "involution-type";
        default: return "reference";
    }
}

tcs::BlockKind kind_from_name(const std::string& s) {
    if (s == "fano-type") return tcs::BlockKind::FanoType;
    if (s == "involution-type") return tcs::BlockKind::InvolutionType;
    if (s == "reference") return tcs::BlockKind::Reference;
    throw std::invalid_argument("unknown block kind '" + s + "'");
}

json block_to_json(const tcs::BuildingBlock& b) {
    json j{{"name", b.name},
           {"d", b.d},
           {"simply_connected", b.simply_connected},
           {"kind", kind_name(b.kind)}};
    j["b2_bar"] = b.b2_bar ? json(*b.b2_bar) : json(nullptr);
    j["b3_bar"] = b.b3_bar ? json(*b.b3_bar) : json(nullptr);
    if (b.polarization) {
        json gram = json::array();
        for (const auto& row : b.polarization->n.gram) {
            json r = json::array();
            for (long x : row) r.push_back(x);
            gram.push_back(r);
        }
        json emb = json::array();
        for (const auto& v : b.polarization->embedding) emb.push_back(zvec_to_json(v));
        j["polarization"] = json{{"gram", gram}, {"embedding", emb}};
    } else {
        j["polarization"] = nullptr;
    }
    return j;
}

tcs::BuildingBlock block_from_json(const json& j) {
    tcs::BuildingBlock b;
    b.name = j.at("name").get<std::string>();
    if (j.contains("b2_bar") && !j.at("b2_bar").is_null()) b.b2_bar = j.at("b2_bar").get<long>();
    if (j.contains("b3_bar") && !j.at("b3_bar").is_null()) b.b3_bar = j.at("b3_bar").get<long>();
    b.d = j.value("d", 0L);
    b.simply_connected = j.value("simply_connected", false);
    b.kind = kind_from_name(j.value("kind", std::string("fano-type")));
    if (j.contains("polarization") && !j.at("polarization").is_null()) {
        const auto& p = j.at("polarization");
        k3::Polarization pol;
        for (const auto& row : p.at("gram")) {
            std::vector<long> r;
            for (const auto& x : row) r.push_back(x.get<long>());
            pol.n.gram.push_back(std::move(r));
        }
        pol.n.rank = static_cast<int>(pol.n.gram.size());
        for (const auto& v : p.at("embedding")) pol.embedding.push_back(zvec_from_json(v, 22));
        b.polarization = std::move(pol);
    }
    b.validate();
    return b;
}

} // namespace

json catalog_to_json(const tcs::Catalog& cat) {
    json blocks = json::array();
    for (const auto& b : cat.blocks) blocks.push_back(block_to_json(b));
    return json{{"blocks", blocks}};
}

tcs::Catalog catalog_from_json(const json& j) {
    tcs::Catalog cat;
    if (j.is_null() || (j.is_object() && !j.contains("blocks"))) return cat;
    for (const auto& b : j.at("blocks")) {
        tcs::BuildingBlock blk = block_from_json(b);
        if (cat.contains(blk.name))
            throw std::invalid_argument("duplicate building block '" + blk.name + "'");
        cat.blocks.push_back(std::move(blk));
    }
    return cat;
}

Report tcs_betti(const tcs::Catalog& cat, const std::string& block1, const std::string& block2,
                 std::optional<long> asserted_b2) {
    Report rep;
    const auto& b1 = cat.lookup(block1);
    const auto& b2 = cat.lookup(block2);
    auto tr = tcs::tcs_report(b1, b2, asserted_b2);
    rep.payload = json{{"block1", block1},
                       {"block2", block2},
                       {"betti_sum", tr.betti_sum},
                       {"pi1", tr.pi1 == tcs::Pi1::SimplyConnected ? "simply-connected" : "finite"}};
    if (asserted_b2) {
        rep.payload["asserted_b2"] = *asserted_b2;
        rep.payload["b3"] = *tr.b3_if_b2_known;
    }
    return rep;
}

Report tcs_neck_check(bool violate) {
    Report rep;
    tcs::NeckModel m1 = tcs::standard_neck_model();
    tcs::NeckModel m2 = tcs::rotate_model(m1);
    if (violate) m2.kappaK = -m2.kappaK; // undo the negation
    FormQ resid = tcs::gluing_pullback_check(m1, m2);
    Rat largest(0);
    for (int r = 0; r < ext7::degree_size(3); ++r)
        if (abs(resid[r]) > largest) largest = abs(resid[r]);
    rep.payload = json{{"violate", violate},
                       {"residual_zero", resid.is_zero()},
                       {"largest_coefficient", rat_to_string(largest)},
                       {"residual", to_json(resid)}};
    if (!violate && !resid.is_zero()) rep.status = Status::Error;
    if (violate && resid.is_zero()) rep.status = Status::Error;
    return rep;
}

Report tcs_catalog(const tcs::Catalog& cat) {
    Report rep;
    rep.payload = catalog_to_json(cat);
    return rep;
}

torsion::Mode default_mode() {
    torsion::Mode m;
    m.wave = {1, 1, 1, 0, 0, 0, 0};
    return m;
}

std::vector<torsion::Mode> parse_modes(const std::string& spec) {
    std::vector<torsion::Mode> modes;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (part.empty()) continue;
        torsion::Mode m;
        std::stringstream ps(part);
        std::string tok;
        int i = 0;
        while (std::getline(ps, tok, ',')) {
            if (i >= 7) throw std::invalid_argument("mode needs exactly 7 integers");
            m.wave[i++] = std::stoi(tok);
        }
        if (i != 7) throw std::invalid_argument("mode needs exactly 7 integers");
        modes.push_back(m);
    }
    if (modes.empty()) throw std::invalid_argument("empty mode spec");
    return modes;
}

Report solve_torsion(const TorsionOptions& opt) {
    Report rep;
    torsion::SolverConfig cfg;
    cfg.tolerance = opt.tolerance;
    cfg.max_iterations = opt.max_iterations;
    cfg.resolution = opt.resolution;
    auto modes = opt.modes.empty() ? std::vector<torsion::Mode>{default_mode()} : opt.modes;

    try {
        auto s = torsion::perturbed_structure(opt.epsilon, modes, opt.resolution);
        auto res = torsion::solve(s, cfg);
        json trace = json::array();
        for (const auto& r : res.trace.records)
            trace.push_back(json::array({r.residual, r.deta_l2, r.deta_max, r.deta_grad}));
        rep.payload = json{{"epsilon", opt.epsilon},
                           {"resolution", opt.resolution},
                           {"seed", opt.seed},
                           {"converged", res.status == torsion::SolveStatus::Converged},
                           {"iterations", res.iterations},
                           {"final_residual", res.final_residual},
                           {"note", res.note},
                           {"trace", trace}};
        if (res.status != torsion::SolveStatus::Converged) rep.status = Status::Diverged;
    } catch (const torsion::PerturbationTooLarge& e) {
        rep.status = Status::Error;
        rep.payload = json{{"error", e.what()}};
    }
    return rep;
}

} // namespace g2::reports
