#include "g2/eguchi_hanson.hpp"

#include "g2/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace g2::eh {

double kahler_potential(EHParameter s, double r) {
    if (!(r > 0)) throw std::domain_error("kahler_potential requires r > 0");
    if (s.s == 0.0) return r * r;
    double s2 = s.s * s.s, s4 = s2 * s2;
    double r4 = r * r * r * r;
    double u = std::sqrt(r4 + s4);
    return u + 2 * s2 * std::log(r) - s2 * std::log(u + s2);
}

double potential_F1(EHParameter s, double rho) {
    if (!(rho > 0)) throw std::domain_error("rho must be positive");
    double s4 = s.s * s.s * s.s * s.s;
    return std::sqrt(rho * rho + s4) / rho;
}

double potential_F2(EHParameter s, double rho) {
    if (!(rho > 0)) throw std::domain_error("rho must be positive");
    double s4 = s.s * s.s * s.s * s.s;
    return -s4 / (rho * rho * std::sqrt(rho * rho + s4));
}

HermitianMetricSample metric_sample(EHParameter s, const ChartPoint& p) {
    double rho = p.r2();
    if (!(rho > 0)) throw std::domain_error("metric_sample requires a nonzero chart point");
    double f1 = potential_F1(s, rho), f2 = potential_F2(s, rho);
    HermitianMetricSample m;
    std::array<cplx, 2> z{p.z1, p.z2};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            m.h[i][j] = f2 * std::conj(z[i]) * z[j];
            if (i == j) m.h[i][j] += f1;
        }
    return m;
}

double ricci_check(EHParameter s, const ChartPoint& p, double step) {
    auto logdet = [&](const ChartPoint& q) { return std::log(metric_sample(s, q).det()); };
    return ricci_fd_logdet(logdet, p, step);
}

namespace {

double metric_diff_norm(EHParameter s, double r, int order, double fd_step) {
    auto point = [&](double radius) {
        double c = radius / std::sqrt(2.0);
        return ChartPoint{cplx(c, 0), cplx(c, 0)};
    };
    auto diff = [&](const ChartPoint& q) {
        HermitianMetricSample m = metric_sample(s, q);
        double acc = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cplx v = m.h[i][j] - (i == j ? cplx(1, 0) : cplx(0, 0));
                acc += std::norm(v);
            }
        return std::sqrt(acc);
    };
    if (order == 0) return diff(point(r));
    // first-derivative proxy: central difference along x4 of (h - I)
    ChartPoint q = point(r);
    ChartPoint qp = q, qm = q;
    qp.z1 += fd_step;
    qm.z1 -= fd_step;
    HermitianMetricSample mp = metric_sample(s, qp), mm = metric_sample(s, qm);
    double acc = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) acc += std::norm((mp.h[i][j] - mm.h[i][j]) / (2 * fd_step));
    return std::sqrt(acc);
}

} // namespace

DecayFit ale_decay_fit(EHParameter s, const std::vector<double>& radii, int order) {
    if (radii.size() < 4) throw std::invalid_argument("decay fit needs at least 4 radii");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("decay fit radii must be strictly increasing");
    if (s.s > 0 && radii.front() < 5 * s.s)
        throw std::invalid_argument("decay fit radii too close to the curvature scale");
    std::vector<double> lx, ly;
    for (double r : radii) {
        double v = metric_diff_norm(s, r, order, 1e-4 * r);
        if (!(v > 0)) throw std::invalid_argument("degenerate decay data (zero difference)");
        lx.push_back(std::log(r));
        ly.push_back(std::log(v));
    }
    size_t n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - slope * sx) / n;
    double resid = 0;
    for (size_t i = 0; i < n; ++i)
        resid = std::max(resid, std::fabs(ly[i] - (slope * lx[i] + icept)));
    DecayFit fit;
    fit.exponent = slope;
    fit.residual = resid;
    fit.radii = radii;
    return fit;
}

ScalingResiduals scaling_check(EHParameter s, double lambda, const ChartPoint& p) {
    if (!(s.s > 0) || !(lambda > 0)) throw std::domain_error("scaling_check needs s, lambda > 0");
    ChartPoint scaled{lambda * p.z1, lambda * p.z2};
    HermitianMetricSample pulled = metric_sample(s, scaled); // coefficient of the pullback / lambda^2
    HermitianMetricSample a = metric_sample(EHParameter{lambda * s.s}, p);
    HermitianMetricSample b = metric_sample(EHParameter{s.s / lambda}, p);
    double l2 = lambda * lambda;
    ScalingResiduals out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            out.vs_lambda_s += std::norm(l2 * pulled.h[i][j] - l2 * a.h[i][j]);
            out.vs_s_over_lambda += std::norm(l2 * pulled.h[i][j] - l2 * b.h[i][j]);
        }
    out.vs_lambda_s = std::sqrt(out.vs_lambda_s);
    out.vs_s_over_lambda = std::sqrt(out.vs_s_over_lambda);
    return out;
}

namespace {

// Real expansion of i/2 * dz_i ^ dzbar_j on axes 4..7 with z1 = x4 + i x5,
// z2 = x6 + i x7.
FormR complex_11_to_real(const std::array<std::array<cplx, 2>, 2>& h) {
    // complex 1-forms: dz1 = dx4 + i dx5, dzbar1 = dx4 - i dx5, etc.
    using C = std::complex<double>;
    auto one_form = [](int axis) {
        KForm<C> f(1);
        f.set(1u << axis, C(1, 0));
        return f;
    };
    KForm<C> dz[2] = {one_form(3), one_form(5)};
    KForm<C> dzb[2] = {one_form(3), one_form(5)};
    {
        KForm<C> i4(1), i6(1);
        i4.set(1u << 4, C(0, 1));
        i6.set(1u << 6, C(0, 1));
        dz[0] += i4;
        dz[1] += i6;
        dzb[0] -= i4;
        dzb[1] -= i6;
    }
    KForm<C> acc(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            KForm<C> w = wedge(dz[i], dzb[j]);
            w *= C(0, 0.5) * h[i][j];
            acc += w;
        }
    FormR out(2);
    for (int r = 0; r < ext7::degree_size(2); ++r) out[r] = acc[r].real();
    return out;
}

} // namespace

HyperKahlerTriple hyperkahler_triple(EHParameter s, const ChartPoint& p) {
    HyperKahlerTriple t;
    t.kappaI = complex_11_to_real(metric_sample(s, p).h);
    // kappa_J + i kappa_K = dz1 ^ dz2
    using C = std::complex<double>;
    KForm<C> dz1(1), dz2(1);
    dz1.set(1u << 3, C(1, 0));
    dz1.set(1u << 4, C(0, 1));
    dz2.set(1u << 5, C(1, 0));
    dz2.set(1u << 6, C(0, 1));
    KForm<C> om = wedge(dz1, dz2);
    t.kappaJ = FormR(2);
    t.kappaK = FormR(2);
    for (int r = 0; r < ext7::degree_size(2); ++r) {
        t.kappaJ[r] = om[r].real();
        t.kappaK[r] = om[r].imag();
    }
    return t;
}

FormR product_g2_form(EHParameter s, const ChartPoint& p, double torus_scale) {
    if (!(torus_scale > 0)) throw std::domain_error("torus scale must be positive");
    HyperKahlerTriple t = hyperkahler_triple(s, p);
    double tau = torus_scale;
    FormR phi = (tau * tau * tau) * dx<double>({1, 2, 3});
    phi += tau * wedge(dx<double>({1}), t.kappaI);
    phi += tau * wedge(dx<double>({2}), t.kappaJ);
    phi -= tau * wedge(dx<double>({3}), t.kappaK);
    return phi;
}

double max_det_deviation_serial(EHParameter s, const std::vector<ChartPoint>& pts) {
    std::vector<double> dev(pts.size());
    serial_for(static_cast<std::ptrdiff_t>(pts.size()), [&](std::ptrdiff_t i) {
        dev[static_cast<size_t>(i)] =
            std::fabs(metric_sample(s, pts[static_cast<size_t>(i)]).det() - 1.0);
    });
    return pts.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

double max_det_deviation_omp(EHParameter s, const std::vector<ChartPoint>& pts, int threads) {
    std::vector<double> dev(pts.size());
    omp_for(
        static_cast<std::ptrdiff_t>(pts.size()),
        [&](std::ptrdiff_t i) {
            dev[static_cast<size_t>(i)] =
                std::fabs(metric_sample(s, pts[static_cast<size_t>(i)]).det() - 1.0);
        },
        threads);
    return pts.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

double max_det_deviation(EHParameter s, const std::vector<ChartPoint>& pts) {
    std::vector<double> dev(pts.size());
    parallel_for(static_cast<std::ptrdiff_t>(pts.size()), [&](std::ptrdiff_t i) {
        dev[static_cast<size_t>(i)] =
            std::fabs(metric_sample(s, pts[static_cast<size_t>(i)]).det() - 1.0);
    });
    return pts.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

double curvature_proxy(EHParameter s) {
    if (!(s.s > 0)) throw std::domain_error("curvature proxy needs s > 0");
    ChartPoint p{cplx(s.s, 0), cplx(0, 0)};
    double step = s.s / 64.0;
    double maxd2 = 0;
    for (int axis = 0; axis < 4; ++axis) {
        auto shift = [&](double d) {
            ChartPoint q = p;
            switch (axis) {
                case 0: q.z1 += d; break;
                case 1: q.z1 += cplx(0, d); break;
                case 2: q.z2 += d; break;
                default: q.z2 += cplx(0, d); break;
            }
            return q;
        };
        HermitianMetricSample mp = metric_sample(s, shift(step));
        HermitianMetricSample m0 = metric_sample(s, p);
        HermitianMetricSample mm = metric_sample(s, shift(-step));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cplx d2 = (mp.h[i][j] - 2.0 * m0.h[i][j] + mm.h[i][j]) / (step * step);
                maxd2 = std::max(maxd2, std::abs(d2));
            }
    }
    return maxd2;
}

std::vector<ChartPoint> sample_points(std::uint64_t seed, int count, double rmin, double rmax) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(rmin, rmax);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
    std::uniform_real_distribution<double> mix(0.05, 0.95);
    std::vector<ChartPoint> pts;
    pts.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        double r = ur(rng);
        double w = mix(rng);
        double a1 = ang(rng), a2 = ang(rng);
        double m1 = r * std::sqrt(w), m2 = r * std::sqrt(1 - w);
        pts.push_back({m1 * std::polar(1.0, a1), m2 * std::polar(1.0, a2)});
    }
    return pts;
}

} // namespace g2::eh
