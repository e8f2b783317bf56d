#pragma once

// Sampled form fields on a flat torus chart, with the central-difference
// exterior derivative.  Axes with resolution 1 are inactive (the field is
// constant along them); active axes need resolution >= 4.

#include "g2/forms.hpp"
#include "g2/parallel.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace g2 {

struct FormField {
    std::array<int, 7> res{1, 1, 1, 1, 1, 1, 1};
    std::array<double, 7> period{1, 1, 1, 1, 1, 1, 1};
    int degree = 0;
    std::vector<FormR> values; // row-major, axis 7 fastest

    FormField() = default;
    FormField(std::array<int, 7> resolution, int deg, std::array<double, 7> per = {1, 1, 1, 1, 1, 1, 1})
        : res(resolution), period(per), degree(deg) {
        for (int a = 0; a < 7; ++a) {
            if (res[a] < 1) throw std::invalid_argument("resolution must be >= 1");
            if (res[a] > 1 && res[a] < 4)
                throw std::invalid_argument("active axes need resolution >= 4");
            if (period[a] <= 0) throw std::invalid_argument("period must be positive");
        }
        values.assign(static_cast<size_t>(node_count()), FormR(deg));
    }

    long node_count() const {
        long n = 1;
        for (int a = 0; a < 7; ++a) n *= res[a];
        return n;
    }

    long index_of(const std::array<int, 7>& idx) const {
        long n = 0;
        for (int a = 0; a < 7; ++a) n = n * res[a] + idx[a];
        return n;
    }

    std::array<int, 7> coords_of(long n) const {
        std::array<int, 7> idx{};
        for (int a = 6; a >= 0; --a) {
            idx[a] = static_cast<int>(n % res[a]);
            n /= res[a];
        }
        return idx;
    }

    std::array<double, 7> point_of(const std::array<int, 7>& idx) const {
        std::array<double, 7> x{};
        for (int a = 0; a < 7; ++a) x[a] = period[a] * idx[a] / res[a];
        return x;
    }

    double spacing(int axis) const { return period[axis] / res[axis]; }

    // Fill from a pointwise function of the sample location.
    void sample(const std::function<FormR(const std::array<double, 7>&)>& fn) {
        long n = node_count();
        for (long i = 0; i < n; ++i) values[static_cast<size_t>(i)] = fn(point_of(coords_of(i)));
    }
};

namespace detail {

inline void d_node(const FormField& f, FormField& out, long n) {
    auto idx = f.coords_of(n);
    FormR acc(f.degree + 1);
    for (int a = 0; a < 7; ++a) {
        if (f.res[a] == 1) continue; // constant along inactive axes
        auto up = idx, dn = idx;
        up[a] = (idx[a] + 1) % f.res[a];
        dn[a] = (idx[a] - 1 + f.res[a]) % f.res[a];
        const FormR& fu = f.values[static_cast<size_t>(f.index_of(up))];
        const FormR& fd = f.values[static_cast<size_t>(f.index_of(dn))];
        double inv2h = 1.0 / (2.0 * f.spacing(a));
        // (d f)  +=  dx^a ^ (df/dx^a)
        int nin = ext7::degree_size(f.degree);
        for (int r = 0; r < nin; ++r) {
            double deriv = (fu[r] - fd[r]) * inv2h;
            if (deriv == 0.0) continue;
            unsigned m = ext7::mask_of_rank(f.degree, r);
            int s = ext7::sign_merge(1u << a, m);
            if (s == 0) continue;
            acc.c[static_cast<size_t>(ext7::rank_of_mask(m | (1u << a)))] += s * deriv;
        }
    }
    out.values[static_cast<size_t>(n)] = std::move(acc);
}

} // namespace detail

// Serial reference implementation.
inline FormField exterior_derivative_serial(const FormField& f) {
    if (f.degree >= 7) throw std::invalid_argument("cannot raise degree past 7");
    FormField out(f.res, f.degree + 1, f.period);
    serial_for(f.node_count(), [&](long n) { detail::d_node(f, out, n); });
    return out;
}

// OpenMP variant; nodes are independent, so results match the serial path.
inline FormField exterior_derivative_omp(const FormField& f, int threads) {
    if (f.degree >= 7) throw std::invalid_argument("cannot raise degree past 7");
    FormField out(f.res, f.degree + 1, f.period);
    omp_for(f.node_count(), [&](long n) { detail::d_node(f, out, n); }, threads);
    return out;
}

inline FormField exterior_derivative(const FormField& f) {
    if (f.degree >= 7) throw std::invalid_argument("cannot raise degree past 7");
    FormField out(f.res, f.degree + 1, f.period);
    parallel_for(f.node_count(), [&](long n) { detail::d_node(f, out, n); });
    return out;
}

inline double field_rms(const FormField& f) {
    double s = 0;
    for (const FormR& v : f.values)
        for (double x : v.c) s += x * x;
    return std::sqrt(s / static_cast<double>(f.node_count()));
}

inline double field_max(const FormField& f) {
    double s = 0;
    for (const FormR& v : f.values) s = std::max(s, coeff_max(v));
    return s;
}

inline FormField constant_field(std::array<int, 7> res, const FormR& value) {
    FormField f(res, value.degree);
    for (auto& v : f.values) v = value;
    return f;
}

} // namespace g2
