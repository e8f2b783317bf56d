#include "g2/torsion.hpp"

#include "g2/forms.hpp"
#include "g2/parallel.hpp"
#include "g2/theta_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace g2::torsion {

using spec::GridShape;
using spec::SpectralField;

namespace {

GridShape shape_for(const std::vector<Mode>& modes, int resolution) {
    if (resolution < 8 || (resolution & (resolution - 1)) != 0)
        throw std::invalid_argument("resolution must be a power of 2 and at least 8");
    GridShape sh;
    int active = 0;
    for (int a = 0; a < 7; ++a) {
        bool used = false;
        for (const Mode& m : modes)
            if (m.wave[a] != 0) used = true;
        if (used) {
            sh.n[a] = resolution;
            ++active;
        }
    }
    if (active == 0) throw std::invalid_argument("mode set has no active axis");
    if (active > 3)
        throw std::invalid_argument("desk-scale solver supports at most 3 active axes");
    for (const Mode& m : modes)
        for (int a = 0; a < 7; ++a) {
            if (std::abs(m.wave[a]) >= resolution / 2)
                throw std::invalid_argument("mode wavenumber exceeds the band");
            if (std::abs(m.companion()[a]) >= resolution / 2)
                throw std::invalid_argument("companion wavenumber exceeds the band");
        }
    return sh;
}

SpectralField phi0_constant(const GridShape& sh) {
    SpectralField f(3, sh);
    FormQ phi0 = standard_phi0<Rat>();
    for (int r = 0; r < 35; ++r)
        f.comp[static_cast<size_t>(r)][0] = spec::cplx(phi0[r].get_d(), 0.0);
    return f;
}

// Pointwise Theta over the doubled grid; false on any positivity failure.
bool theta_grid(const SpectralField& phi3, SpectralField& theta_out) {
    GridShape big = phi3.shape.doubled();
    spec::GridData grid = spec::to_grid(spec::zero_pad(phi3, big));
    long nodes = big.size();
    spec::GridData theta;
    theta.degree = 4;
    theta.shape = big;
    theta.values.assign(35, std::vector<double>(static_cast<size_t>(nodes), 0.0));
    std::vector<char> ok(static_cast<size_t>(nodes), 1);
    parallel_for(nodes, [&](long i) {
        double phi[35], th[35];
        for (int c = 0; c < 35; ++c) phi[c] = grid.values[static_cast<size_t>(c)][static_cast<size_t>(i)];
        if (!theta::theta_point(phi, th)) {
            ok[static_cast<size_t>(i)] = 0;
            return;
        }
        for (int c = 0; c < 35; ++c) theta.values[static_cast<size_t>(c)][static_cast<size_t>(i)] = th[c];
    });
    for (char c : ok)
        if (!c) return false;
    theta_out = spec::truncate_to(spec::from_grid(theta), phi3.shape);
    return true;
}

} // namespace

std::array<int, 7> Mode::companion() const {
    std::array<int, 7> c = wave;
    int last = -1, nonzero = 0;
    for (int a = 0; a < 7; ++a)
        if (c[a] != 0) {
            last = a;
            ++nonzero;
        }
    if (nonzero <= 1) {
        for (int a = 0; a < 7; ++a) c[a] *= 2;
    } else {
        c[last] = -c[last];
    }
    return c;
}

SpectralField ClosedStructure::three_form() const {
    SpectralField f = phi0_constant(shape);
    f += spec::spectral_d(potential);
    return f;
}

bool theta_of_field(const SpectralField& phi3, SpectralField& theta_out) {
    return theta_grid(phi3, theta_out);
}

ClosedStructure perturbed_structure(double epsilon, const std::vector<Mode>& modes,
                                    int resolution) {
    if (modes.empty()) throw std::invalid_argument("need at least one mode");
    ClosedStructure s;
    s.shape = shape_for(modes, resolution);
    s.epsilon = epsilon;
    s.potential = SpectralField(2, s.shape);
    FormQ phi0 = standard_phi0<Rat>();
    for (const Mode& m : modes) {
        if (m.axis_a == m.axis_b)
            throw std::invalid_argument("mode needs two distinct shear axes");
        FormQ omega_a = contract(m.axis_a, phi0);
        FormQ omega_b = contract(m.axis_b, phi0);
        auto freq_pair = [&](const std::array<int, 7>& wave) {
            std::array<int, 7> plus{}, minus{};
            for (int a = 0; a < 7; ++a) {
                plus[a] = wave[a] >= 0 ? wave[a] : wave[a] + s.shape.n[a];
                int neg = -wave[a];
                minus[a] = neg >= 0 ? neg : neg + s.shape.n[a];
            }
            return std::pair<long, long>{s.shape.index_of(plus), s.shape.index_of(minus)};
        };
        auto [ip, im] = freq_pair(m.wave);
        auto [jp, jm] = freq_pair(m.companion());
        for (int r = 0; r < 21; ++r) {
            // beta = 2 eps [cos(m.x) w_a + sin(m~.x) w_b]: coefficient eps at
            // each of +-m (cos) and -+ i eps (sin)
            double ca = omega_a[r].get_d() * epsilon;
            double cb = omega_b[r].get_d() * epsilon;
            if (ca != 0.0) {
                s.potential.comp[static_cast<size_t>(r)][static_cast<size_t>(ip)] += spec::cplx(ca, 0);
                s.potential.comp[static_cast<size_t>(r)][static_cast<size_t>(im)] += spec::cplx(ca, 0);
            }
            if (cb != 0.0) {
                s.potential.comp[static_cast<size_t>(r)][static_cast<size_t>(jp)] += spec::cplx(0, -cb);
                s.potential.comp[static_cast<size_t>(r)][static_cast<size_t>(jm)] += spec::cplx(0, cb);
            }
        }
    }
    // positivity on the evaluation grid
    SpectralField theta;
    if (!theta_grid(s.three_form(), theta))
        throw PerturbationTooLarge("structure is not positive at every grid node");
    return s;
}

ResidualReport torsion_residual(const ClosedStructure& s) {
    ResidualReport rep;
    SpectralField theta;
    if (!theta_grid(s.three_form(), theta)) {
        rep.positive = false;
        rep.residual5 = SpectralField(5, s.shape);
        return rep;
    }
    rep.residual5 = spec::spectral_d(theta);
    rep.l2 = spec::l2_norm(rep.residual5);
    rep.max = spec::max_norm(rep.residual5);
    return rep;
}

SolveResult solve(const ClosedStructure& s, const SolverConfig& config) {
    if (config.tolerance <= 0) throw std::invalid_argument("tolerance must be positive");
    if (config.max_iterations < 1) throw std::invalid_argument("need at least one iteration");
    SolveResult out;
    out.eta = SpectralField(2, s.shape);

    double damping = config.damping;
    if (!(damping > 0) || damping > 1) throw std::invalid_argument("damping must be in (0,1]");
    int halvings = 0, increase_streak = 0;
    double prev_residual = 0;
    bool have_prev = false;

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        ClosedStructure cur = s;
        cur.potential += out.eta;

        SpectralField theta;
        if (!theta_grid(cur.three_form(), theta)) {
            out.status = SolveStatus::PositivityLost;
            out.note = "positivity lost at iteration " + std::to_string(iter);
            out.iterations = iter;
            return out;
        }
        SpectralField r5 = spec::spectral_d(theta);
        double res = spec::l2_norm(r5);

        SpectralField deta = spec::spectral_d(out.eta);
        IterationRecord rec;
        rec.residual = res;
        rec.deta_l2 = spec::l2_norm(deta);
        rec.deta_max = spec::max_norm(deta);
        rec.deta_grad = spec::grad_proxy_norm(deta);
        out.trace.records.push_back(rec);

        out.final_residual = res;
        out.iterations = iter;
        if (res <= config.tolerance) {
            out.status = SolveStatus::Converged;
            return out;
        }

        if (have_prev && res > prev_residual) {
            ++increase_streak;
            if (increase_streak >= 5) {
                out.status = SolveStatus::Diverged;
                out.note = "residual increased for 5 consecutive iterations";
                return out;
            }
            if (halvings < 3) {
                damping *= 0.5;
                ++halvings;
            } else {
                out.status = SolveStatus::Diverged;
                out.note = "residual kept increasing after 3 damping halvings";
                return out;
            }
        } else {
            increase_streak = 0;
        }
        prev_residual = res;
        have_prev = true;

        // update: eta -= damping * invLap(coexact(*r5))
        SpectralField m2 = spec::coexact_project(spec::spectral_flat_star(r5));
        SpectralField step = spec::inverse_laplacian(m2);
        step *= damping;
        out.eta -= step;
    }
    out.status = SolveStatus::Diverged;
    out.note = "iteration budget exhausted";
    return out;
}

NormPattern estimate_norm_pattern(const IterationTrace& trace) {
    NormPattern p;
    if (trace.records.empty()) return p;
    p.initial_residual = trace.records.front().residual;
    for (size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        if (p.initial_residual > 0) {
            p.bound_l2 = std::max(p.bound_l2, r.deta_l2 / p.initial_residual);
            p.bound_max = std::max(p.bound_max, r.deta_max / p.initial_residual);
            p.bound_grad = std::max(p.bound_grad, r.deta_grad / p.initial_residual);
        }
        if (i >= 2 && r.residual > trace.records[i - 1].residual)
            p.monotone_after_first = false;
    }
    return p;
}

} // namespace g2::torsion
