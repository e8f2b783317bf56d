#pragma once

// JSON report builders shared by the CLI and the acceptance suite.  Reports
// are deterministic for fixed inputs and seeds (no timestamps).

#include "g2/json_io.hpp"
#include "g2/k3_lattice.hpp"
#include "g2/orbifold.hpp"
#include "g2/tcs.hpp"
#include "g2/torsion.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace g2::reports {

inline constexpr int kSchemaVersion = 1;

enum class Status { Ok, Infeasible, NotFound, Diverged, Error };

std::string status_name(Status s);
int exit_code(Status s);

struct Report {
    Status status = Status::Ok;
    json payload;
};

json envelope(const std::string& command, const Report& r);

Report verify_phi0();

Report orbifold_report(const orbifold::OrbifoldGroup& group, long delta_b2, long delta_b3);
orbifold::OrbifoldGroup group_from_json(const json& j);

struct EhOptions {
    double s = 1.0;
    std::uint64_t seed = 1;
    int points = 1000;
};
Report eh_check(const EhOptions& opt);

Report k3_invariants();
Report k3_find_isometry(const k3::ZVec& v, const k3::ZVec& w, long budget);
Report k3_match(const k3::HyperKahlerClasses& c1, const k3::HyperKahlerClasses& c2,
                std::uint64_t seed, long budget);
// The octic worked example: equal triples supported in the three hyperbolic
// blocks with square 8.
std::pair<k3::HyperKahlerClasses, k3::HyperKahlerClasses> octic_matching_example();
k3::HyperKahlerClasses classes_from_json(const json& j, int rank);

// Seeded equal-square primitive pairs in the hyperbolic summands; used by
// the isometry-search criterion and the determinism check.
Report k3_random_pairs(std::uint64_t seed, int pairs, long budget);

Report tcs_betti(const tcs::Catalog& cat, const std::string& block1, const std::string& block2,
                 std::optional<long> asserted_b2);
Report tcs_neck_check(bool violate);
Report tcs_catalog(const tcs::Catalog& cat);
tcs::Catalog catalog_from_json(const json& j);
json catalog_to_json(const tcs::Catalog& cat);

struct TorsionOptions {
    double epsilon = 0.01;
    std::vector<torsion::Mode> modes;
    double tolerance = 1e-8;
    int max_iterations = 60;
    int resolution = 16;
    std::uint64_t seed = 0; // echoed into the report; the solve is deterministic
};
Report solve_torsion(const TorsionOptions& opt);

std::vector<torsion::Mode> parse_modes(const std::string& spec);
torsion::Mode default_mode();

} // namespace g2::reports
