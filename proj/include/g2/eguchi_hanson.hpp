#pragma once

// Eguchi-Hanson metrics on the chart C^2 \ {0}: Kahler potential, metric
// samples in closed form, Ricci and decay diagnostics, the hyper-Kahler
// triple, and the product G2-structure on R^3 x R^4.
//
// Chart conventions: z1 = x4 + i x5, z2 = x6 + i x7; real 2-forms produced
// here live on axes 4..7 of R^7 so they can be wedged with torus directions
// 1..3 directly.

#include "g2/forms.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace g2::eh {

using cplx = std::complex<double>;

struct EHParameter {
    double s = 1.0;
};

struct ChartPoint {
    cplx z1, z2;
    double r2() const { return std::norm(z1) + std::norm(z2); }
    double r() const { return std::sqrt(r2()); }
};

struct HermitianMetricSample {
    // h[i][j] = h_{i jbar}
    std::array<std::array<cplx, 2>, 2> h;
    double det() const {
        return (h[0][0] * h[1][1] - h[0][1] * h[1][0]).real();
    }
};

struct HyperKahlerTriple {
    FormR kappaI, kappaJ, kappaK; // degree-2 forms on axes 4..7
};

struct DecayFit {
    double exponent = 0;
    double residual = 0;
    std::vector<double> radii;
};

// f_s(r) = sqrt(r^4 + s^4) + 2 s^2 log r - s^2 log(sqrt(r^4+s^4) + s^2);
// the flat limit s = 0 gives r^2.
double kahler_potential(EHParameter s, double r);

// First and second derivatives of F(rho) = f_s(sqrt(rho)) in closed form:
// F'(rho) = sqrt(rho^2 + s^4)/rho, F''(rho) = -s^4 / (rho^2 sqrt(rho^2+s^4)).
double potential_F1(EHParameter s, double rho);
double potential_F2(EHParameter s, double rho);

// h_{i jbar} = F'(rho) delta_ij + F''(rho) conj(z_i) z_j at rho = |z|^2.
HermitianMetricSample metric_sample(EHParameter s, const ChartPoint& p);

// Max |Ric_{i jbar}| with Ric = -d_i d_jbar log det h computed by central
// differences of det(metric_sample); the exact metric has det == 1, so the
// value is pure discretization noise.
double ricci_check(EHParameter s, const ChartPoint& p, double step);

// Same finite-difference Ricci applied to an arbitrary log-det function;
// used by the convergence-order oracle in the tests.
template <class F>
double ricci_fd_logdet(F&& logdet, const ChartPoint& p, double step);

// Least-squares slope of log ||h_s - h_0|| against log r over the given radii.
// order = 0 fits the metric difference itself, order = 1 a first-derivative
// proxy (central difference in x4).
DecayFit ale_decay_fit(EHParameter s, const std::vector<double>& radii, int order = 0);

// Residuals of the dilation pullback of omega_s under z -> lambda z against
// the two candidates lambda^2 omega_{lambda s} and lambda^2 omega_{s/lambda}.
struct ScalingResiduals {
    double vs_lambda_s = 0;
    double vs_s_over_lambda = 0;
};
ScalingResiduals scaling_check(EHParameter s, double lambda, const ChartPoint& p);

// kappa_I = omega_s(p), kappa_J + i kappa_K = dz1 ^ dz2 in real coordinates.
HyperKahlerTriple hyperkahler_triple(EHParameter s, const ChartPoint& p);

// phi = tau^3 dx123 + tau (dx1 ^ kI + dx2 ^ kJ - dx3 ^ kK) with tau the torus
// scale; positive for every chart point and s >= 0.
FormR product_g2_form(EHParameter s, const ChartPoint& p, double torus_scale);

// Pointwise Monge-Ampere certificate max |det h - 1| over a point set;
// serial reference and OpenMP variants.
double max_det_deviation_serial(EHParameter s, const std::vector<ChartPoint>& pts);
double max_det_deviation_omp(EHParameter s, const std::vector<ChartPoint>& pts, int threads);
double max_det_deviation(EHParameter s, const std::vector<ChartPoint>& pts);

// ||d^2 h|| spot proxy at r = s; scales like s^{-2} (reported, not asserted).
double curvature_proxy(EHParameter s);

// Deterministic chart-point sampler for reports and tests.
std::vector<ChartPoint> sample_points(std::uint64_t seed, int count, double rmin, double rmax);

template <class F>
double ricci_fd_logdet(F&& logdet, const ChartPoint& p, double step) {
    if (!(step > 0) || step >= 0.5 * p.r())
        throw std::domain_error("ricci step too large for the chart point");
    // real coordinates (x4, x5, x6, x7)
    auto shift = [&](int axis, double d) {
        ChartPoint q = p;
        switch (axis) {
            case 0: q.z1 += d; break;
            case 1: q.z1 += cplx(0, d); break;
            case 2: q.z2 += d; break;
            default: q.z2 += cplx(0, d); break;
        }
        return q;
    };
    auto shift2 = [&](const ChartPoint& q, int axis, double d) {
        ChartPoint r = q;
        switch (axis) {
            case 0: r.z1 += d; break;
            case 1: r.z1 += cplx(0, d); break;
            case 2: r.z2 += d; break;
            default: r.z2 += cplx(0, d); break;
        }
        return r;
    };
    double f0 = logdet(p);
    // second derivatives d_a d_b of logdet
    std::array<std::array<double, 4>, 4> hess{};
    for (int a = 0; a < 4; ++a) {
        hess[a][a] = (logdet(shift(a, step)) - 2 * f0 + logdet(shift(a, -step))) / (step * step);
        for (int b = a + 1; b < 4; ++b) {
            double v = (logdet(shift2(shift(a, step), b, step)) -
                        logdet(shift2(shift(a, step), b, -step)) -
                        logdet(shift2(shift(a, -step), b, step)) +
                        logdet(shift2(shift(a, -step), b, -step))) /
                       (4 * step * step);
            hess[a][b] = hess[b][a] = v;
        }
    }
    // complex Hessian: d_{z_i} d_{zbar_j} = 1/4 [(d_a + i d_a') (d_b - i d_b')]
    // with (a, a') the real/imaginary axes of z_i and (b, b') of z_j.
    double maxabs = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            int a = 2 * i, a2 = 2 * i + 1, b = 2 * j, b2 = 2 * j + 1;
            cplx v = 0.25 * cplx(hess[a][b] + hess[a2][b2], hess[a2][b] - hess[a][b2]);
            maxabs = std::max(maxabs, std::abs(v));
        }
    return maxabs;
}

} // namespace g2::eh
