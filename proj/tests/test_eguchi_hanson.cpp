#include "g2/eguchi_hanson.hpp"

#include <doctest.h>

#include <cmath>

using namespace g2;
using namespace g2::eh;

TEST_CASE("kahler potential values") {
    CHECK(kahler_potential(EHParameter{0}, 3.0) == 9.0);
    // s = 1, r = 1: sqrt(2) - log(sqrt(2) + 1)
    double expect = std::sqrt(2.0) - std::log(std::sqrt(2.0) + 1.0);
    CHECK(kahler_potential(EHParameter{1}, 1.0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(std::fabs(expect - 0.5328399) < 1e-6);
    // large radius: f approaches r^2 well inside the stated slack
    CHECK(std::fabs(kahler_potential(EHParameter{1}, 100.0) - 1e4) < 10.0);
    CHECK(std::fabs(kahler_potential(EHParameter{1}, 100.0) - 1e4) < 1e-3);
    CHECK_THROWS_AS(kahler_potential(EHParameter{1}, 0.0), std::domain_error);
    CHECK_THROWS_AS(kahler_potential(EHParameter{1}, -1.0), std::domain_error);
}

TEST_CASE("closed-form F' and F'' match a high-precision difference oracle") {
    EHParameter s{1.3};
    auto F = [&](long double rho) {
        long double s2 = 1.3L * 1.3L, s4 = s2 * s2;
        long double u = sqrtl(rho * rho + s4);
        return u + s2 * logl(rho) - s2 * logl(u + s2);
    };
    for (double rho : {0.4, 1.0, 2.7, 11.0}) {
        long double h = 1e-5L * rho;
        long double d1 = (F(rho + h) - F(rho - h)) / (2 * h);
        long double d2 = (F(rho + h) - 2 * F(rho) + F(rho - h)) / (h * h);
        CHECK(potential_F1(s, rho) == doctest::Approx(static_cast<double>(d1)).epsilon(1e-8));
        CHECK(potential_F2(s, rho) == doctest::Approx(static_cast<double>(d2)).epsilon(1e-5));
    }
}

TEST_CASE("metric sample structure") {
    // flat limit
    auto flat = metric_sample(EHParameter{0}, {cplx(0.3, 1.0), cplx(-2, 0.5)});
    CHECK(flat.h[0][0] == cplx(1, 0));
    CHECK(flat.h[1][1] == cplx(1, 0));
    CHECK(flat.h[0][1] == cplx(0, 0));
    // z2 = 0 forces the stated diagonal structure
    EHParameter s{1};
    auto m = metric_sample(s, {cplx(1, 0), cplx(0, 0)});
    CHECK(m.h[0][0].real() == doctest::Approx(potential_F1(s, 1) + potential_F2(s, 1)));
    CHECK(m.h[1][1].real() == doctest::Approx(potential_F1(s, 1)));
    CHECK(std::abs(m.h[0][1]) == 0.0);
    CHECK(m.det() == doctest::Approx(1.0).epsilon(1e-14));
    // hermitian
    auto g = metric_sample(s, {cplx(0.7, -0.2), cplx(0.4, 1.1)});
    CHECK(g.h[0][1] == std::conj(g.h[1][0]));
}

TEST_CASE("monge-ampere certificate over random points") {
    auto pts = sample_points(2024, 1000, 0.3, 10.0);
    for (double s : {0.5, 1.0, 2.0})
        CHECK(max_det_deviation_serial(EHParameter{s}, pts) < 1e-10);
}

TEST_CASE("serial and omp det certificates agree bitwise") {
    auto pts = sample_points(5, 2000, 0.4, 6.0);
    EHParameter s{1.2};
    CHECK(max_det_deviation_serial(s, pts) == max_det_deviation_omp(s, pts, 2));
}

TEST_CASE("chart involution symmetry z -> -z") {
    EHParameter s{0.9};
    ChartPoint p{cplx(0.6, -0.3), cplx(-0.2, 1.4)};
    ChartPoint q{-p.z1, -p.z2};
    auto a = metric_sample(s, p), b = metric_sample(s, q);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(a.h[i][j] == b.h[i][j]);
}

TEST_CASE("finite-difference ricci") {
    CHECK(ricci_check(EHParameter{1}, {cplx(1, 0), cplx(1, 0)}, 1e-3) < 1e-6);
    CHECK(ricci_check(EHParameter{0}, {cplx(1, 0), cplx(1, 0)}, 1e-3) == 0.0);
    CHECK_THROWS_AS(ricci_check(EHParameter{1}, {cplx(0.1, 0), cplx(0, 0)}, 0.2),
                    std::domain_error);
}

TEST_CASE("ricci stencil converges at second order on a curved oracle") {
    // potential rho + rho^2/2: log det h = log(1+rho) + log(1+2 rho), with
    // Ricci available in closed form
    auto logdet = [](const ChartPoint& q) {
        double rho = q.r2();
        return std::log(1 + rho) + std::log(1 + 2 * rho);
    };
    auto exact = [](const ChartPoint& q) {
        double rho = q.r2();
        double g1 = 1 / (1 + rho) + 2 / (1 + 2 * rho);
        double g2 = -1 / ((1 + rho) * (1 + rho)) - 4 / ((1 + 2 * rho) * (1 + 2 * rho));
        cplx z[2] = {q.z1, q.z2};
        double mx = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                mx = std::max(mx, std::abs(g1 * (i == j ? 1.0 : 0.0) + g2 * std::conj(z[i]) * z[j]));
        return mx;
    };
    ChartPoint p{cplx(0.8, 0.1), cplx(0.5, -0.3)};
    double e1 = std::fabs(ricci_fd_logdet(logdet, p, 1e-2) - exact(p));
    double e2 = std::fabs(ricci_fd_logdet(logdet, p, 5e-3) - exact(p));
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("ale decay fits") {
    EHParameter s{1};
    std::vector<double> radii{10, 30, 100, 300, 1000};
    auto f0 = ale_decay_fit(s, radii, 0);
    CHECK(f0.exponent > -4.3);
    CHECK(f0.exponent < -3.7);
    auto f1 = ale_decay_fit(s, radii, 1);
    CHECK(f1.exponent > -5.3);
    CHECK(f1.exponent < -4.7);

    CHECK_THROWS(ale_decay_fit(s, {10, 30, 100}, 0));              // too few
    CHECK_THROWS(ale_decay_fit(s, {30, 10, 100, 300}, 0));         // unsorted
    CHECK_THROWS(ale_decay_fit(s, {2, 10, 100, 300}, 0));          // inside the core
    CHECK_THROWS(ale_decay_fit(EHParameter{0}, radii, 0));         // degenerate data
}

TEST_CASE("dilation scaling resolves to s/lambda") {
    EHParameter s{1};
    auto r = scaling_check(s, 2.0, {cplx(1, 0), cplx(1, 0)});
    CHECK(r.vs_s_over_lambda < 1e-10);
    CHECK(r.vs_lambda_s > 1e-3);
    auto r1 = scaling_check(s, 1.0, {cplx(1, 0), cplx(1, 0)});
    CHECK(r1.vs_lambda_s == 0.0);
    CHECK(r1.vs_s_over_lambda == 0.0);
    // group law: the resolved rule s -> s/lambda applied at lambda and then
    // at 1/lambda returns the original parameter
    ChartPoint p{cplx(0.4, 0.9), cplx(-0.7, 0.1)};
    auto pull = [&](double lam, EHParameter ss, const ChartPoint& q) {
        auto h = metric_sample(ss, {lam * q.z1, lam * q.z2});
        for (auto& row : h.h)
            for (auto& x : row) x *= lam * lam;
        return h;
    };
    // first application: pullback at lambda = 2 equals 4 omega_{s/2}
    auto first = pull(2.0, s, p);
    auto law1 = metric_sample(EHParameter{s.s / 2.0}, p);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(first.h[i][j] - 4.0 * law1.h[i][j]) < 1e-10);
    // second application at lambda = 1/2 starting from s/2 lands back on s
    auto second = pull(0.5, EHParameter{s.s / 2.0}, p);
    auto law2 = metric_sample(s, p);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(second.h[i][j] - 0.25 * law2.h[i][j]) < 1e-10);
}

TEST_CASE("winner is the same across parameter sweeps") {
    auto pts = sample_points(9, 20, 0.8, 2.5);
    int idx = 0;
    for (const auto& p : pts) {
        double s = 0.6 + 0.06 * idx;
        double lam = 1.3 + 0.05 * idx;
        ++idx;
        auto r = scaling_check(EHParameter{s}, lam, p);
        CHECK(r.vs_s_over_lambda < 1e-10);
        CHECK(r.vs_s_over_lambda < r.vs_lambda_s);
    }
}

TEST_CASE("hyperkahler triple invariants") {
    EHParameter s{1};
    ChartPoint p{cplx(1, 0), cplx(1, 0)};
    auto t = hyperkahler_triple(s, p);
    FormR jj = wedge(t.kappaJ, t.kappaJ), kk = wedge(t.kappaK, t.kappaK),
          ii = wedge(t.kappaI, t.kappaI);
    CHECK(coeff_max(jj - kk) == 0.0); // both are parts of a (2,0)-form squared
    unsigned vol4 = 0b1111000;
    CHECK(ii.coeff(vol4) / jj.coeff(vol4) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(coeff_max(wedge(t.kappaJ, t.kappaK)) == 0.0);
    CHECK(coeff_max(wedge(t.kappaI, t.kappaJ)) < 1e-10);
    CHECK(coeff_max(wedge(t.kappaI, t.kappaK)) < 1e-10);
}

TEST_CASE("product g2 structure") {
    // flat chart reproduces phi0 exactly
    FormR flat = product_g2_form(EHParameter{0}, {cplx(1, 0), cplx(0.5, 0)}, 1.0);
    CHECK(coeff_max(flat - to_real(standard_phi0<Rat>())) < 1e-15);

    EHParameter s{1};
    auto pts = sample_points(77, 100, 0.3, 4.0);
    for (double tau : {1.0, 1.3})
        for (const auto& p : pts) CHECK(is_positive(product_g2_form(s, p, tau)));

    // block structure and the volume identity
    ChartPoint p{cplx(0.7, 0.2), cplx(-0.4, 1.1)};
    double tau = 1.3;
    MetricR m = metric_from_three_form(product_g2_form(s, p, tau));
    for (int i = 0; i < 3; ++i)
        for (int j = 3; j < 7; ++j) CHECK(std::fabs(at(m.g, i, j)) < 1e-10);
    for (int i = 0; i < 3; ++i) CHECK(at(m.g, i, i) == doctest::Approx(tau * tau).epsilon(1e-10));
    // det_C h = 1 so the real 4x4 block has unit determinant
    CHECK(m.volume == doctest::Approx(tau * tau * tau).epsilon(1e-10));
}

TEST_CASE("curvature proxy scales like s^-2") {
    double c1 = curvature_proxy(EHParameter{1.0});
    double c2 = curvature_proxy(EHParameter{0.5});
    CHECK(c1 > 0);
    CHECK(c2 / c1 == doctest::Approx(4.0).epsilon(0.2));
}
