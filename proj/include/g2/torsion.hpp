#pragma once

// Pseudo-spectral torsion-free iteration on flat T^7.  The structure is kept
// as phi = phi0 + d(potential), so closedness and the cohomology class are
// invariants of the representation; the iteration drives the co-closedness
// residual d(*_phi phi) to zero with the flat Hodge Laplacian as the
// preconditioner on coexact 2-forms.

#include "g2/spectral.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace g2::torsion {

struct PerturbationTooLarge : std::domain_error {
    explicit PerturbationTooLarge(const std::string& what) : std::domain_error(what) {}
};

struct Mode {
    std::array<int, 7> wave{};
    // Axes of the two shear directions.  The perturbing 2-form is
    //   2 eps [cos(m.x) iota_{e_a} phi0 + sin(m~.x) iota_{e_b} phi0]
    // with m~ the companion frequency (last nonzero component of m negated,
    // or 2m when m has a single nonzero component).  A single shear is an
    // exact diffeomorphism pullback of phi0 with zero torsion; the
    // non-commuting pair leaves a torsion residual that is quadratic in eps.
    int axis_a = 3;
    int axis_b = 4;

    std::array<int, 7> companion() const;
};

// A closed positive 3-form phi0 + d(potential); dphi = 0 holds by
// representation since d of a spectral d-image vanishes identically.
struct ClosedStructure {
    spec::GridShape shape;
    spec::SpectralField potential; // degree 2, band-limited
    double epsilon = 0;

    spec::SpectralField three_form() const; // phi0 + d potential
};

struct SolverConfig {
    double tolerance = 1e-8;
    int max_iterations = 60;
    int resolution = 16; // per active axis, power of 2 >= 8
    double damping = 1.0;
};

struct IterationRecord {
    double residual = 0;   // L2 of d(*phi phi)
    double deta_l2 = 0;    // L2 of d eta
    double deta_max = 0;   // grid max of d eta
    double deta_grad = 0;  // frequency-weighted proxy for grad d eta
};

struct IterationTrace {
    std::vector<IterationRecord> records;
};

enum class SolveStatus { Converged, Diverged, PositivityLost };

struct SolveResult {
    SolveStatus status = SolveStatus::Diverged;
    spec::SpectralField eta; // degree 2, coexact
    IterationTrace trace;
    double final_residual = 0;
    int iterations = 0;
    std::string note;
};

// Shear perturbation phi = phi0 + d beta with beta the two-direction form
// above summed over the modes; positive at every node of the dealiased
// evaluation grid or PerturbationTooLarge.
ClosedStructure perturbed_structure(double epsilon, const std::vector<Mode>& modes,
                                    int resolution);

struct ResidualReport {
    spec::SpectralField residual5; // d(*phi phi), degree 5, band-limited
    double l2 = 0;
    double max = 0;
    bool positive = true;
};

// Pointwise Hodge star of the structure on the doubled grid, transformed
// back to the band and differentiated.
ResidualReport torsion_residual(const ClosedStructure& s);

SolveResult solve(const ClosedStructure& s, const SolverConfig& config);

struct NormPattern {
    bool monotone_after_first = true;
    double bound_l2 = 0;   // max_j ||d eta_j|| / initial residual
    double bound_max = 0;
    double bound_grad = 0;
    double initial_residual = 0;
};

NormPattern estimate_norm_pattern(const IterationTrace& trace);

// Internal pieces exposed for tests: pointwise Theta of a band-limited
// 3-form on its doubled grid (returns false on positivity failure).
bool theta_of_field(const spec::SpectralField& phi3, spec::SpectralField& theta_out);

} // namespace g2::torsion
