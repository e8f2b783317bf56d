// Timing comparison of the serial reference kernels against their OpenMP
// variants: pointwise Hodge star over a grid, the central-difference
// exterior derivative, and Eguchi-Hanson metric sampling.

#include "g2/eguchi_hanson.hpp"
#include "g2/form_field.hpp"
#include "g2/parallel.hpp"
#include "g2/spectral.hpp"
#include "g2/theta_kernel.hpp"
#include "g2/torsion.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

struct Timing {
    double serial = 0, parallel = 0;
    double checksum_serial = 0, checksum_parallel = 0;
};

Timing bench_theta(int threads) {
    using namespace g2;
    torsion::Mode m;
    m.wave = {1, 1, 1, 0, 0, 0, 0};
    auto s = torsion::perturbed_structure(0.01, {m}, 16);
    spec::SpectralField phi = s.three_form();
    spec::GridShape big = phi.shape.doubled();
    spec::GridData grid = spec::to_grid(spec::zero_pad(phi, big));
    long nodes = big.size();

    auto run = [&](bool omp, int t) {
        std::vector<double> out(static_cast<size_t>(nodes), 0.0);
        auto body = [&](long i) {
            double p[35], th[35];
            for (int c = 0; c < 35; ++c) p[c] = grid.values[static_cast<size_t>(c)][static_cast<size_t>(i)];
            theta::theta_point(p, th);
            double acc = 0;
            for (int c = 0; c < 35; ++c) acc += th[c];
            out[static_cast<size_t>(i)] = acc;
        };
        double t0 = now();
        if (omp)
            omp_for(nodes, body, t);
        else
            serial_for(nodes, body);
        double t1 = now();
        double checksum = 0;
        for (double x : out) checksum += x;
        return std::pair<double, double>{t1 - t0, checksum};
    };
    Timing tm;
    std::tie(tm.serial, tm.checksum_serial) = run(false, 1);
    std::tie(tm.parallel, tm.checksum_parallel) = run(true, threads);
    return tm;
}

Timing bench_exterior_derivative(int threads) {
    using namespace g2;
    std::array<int, 7> res{32, 32, 32, 1, 1, 1, 1};
    FormField f(res, 3);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(-1, 1);
    for (auto& v : f.values)
        for (auto& x : v.c) x = ur(rng);
    auto checksum = [](const FormField& g) {
        double acc = 0;
        for (const auto& v : g.values)
            for (double x : v.c) acc += x;
        return acc;
    };
    Timing tm;
    double t0 = now();
    FormField ds = exterior_derivative_serial(f);
    tm.serial = now() - t0;
    tm.checksum_serial = checksum(ds);
    t0 = now();
    FormField dp = exterior_derivative_omp(f, threads);
    tm.parallel = now() - t0;
    tm.checksum_parallel = checksum(dp);
    return tm;
}

Timing bench_eh(int threads) {
    using namespace g2;
    auto pts = eh::sample_points(11, 400000, 0.3, 8.0);
    eh::EHParameter s{1.0};
    Timing tm;
    double t0 = now();
    tm.checksum_serial = eh::max_det_deviation_serial(s, pts);
    tm.serial = now() - t0;
    t0 = now();
    tm.checksum_parallel = eh::max_det_deviation_omp(s, pts, threads);
    tm.parallel = now() - t0;
    return tm;
}

void report(const char* name, const Timing& t) {
    bool match = t.checksum_serial == t.checksum_parallel;
    std::printf("%-22s serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   results %s\n", name,
                1e3 * t.serial, 1e3 * t.parallel,
                t.parallel > 0 ? t.serial / t.parallel : 0.0, match ? "identical" : "DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    int threads = 2;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    if (argc > 1) threads = std::atoi(argv[1]);
    std::printf("kernel benchmark, %d threads\n", threads);
    report("pointwise hodge star", bench_theta(threads));
    report("exterior derivative", bench_exterior_derivative(threads));
    report("eh det certificate", bench_eh(threads));
    return 0;
}
