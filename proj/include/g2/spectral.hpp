#pragma once

// Spectral representation of form fields on the flat 2pi-periodic T^7 with
// a small set of active axes.  A SpectralField stores, per coefficient
// component, the full DFT box over the active axes; values are
// f(x) = sum_m c_m e^{i m.x} and reality is maintained as c_{-m} = conj(c_m).
// With this chart the exterior derivative acts per frequency as the wedge
// with i m (integer wavenumbers) and the Hodge Laplacian is |m|^2.

#include "g2/ext7.hpp"

#include <array>
#include <complex>
#include <vector>

namespace g2::spec {

using cplx = std::complex<double>;

struct GridShape {
    std::array<int, 7> n{1, 1, 1, 1, 1, 1, 1};

    long size() const {
        long s = 1;
        for (int a = 0; a < 7; ++a) s *= n[a];
        return s;
    }
    bool operator==(const GridShape&) const = default;

    GridShape doubled() const {
        GridShape d = *this;
        for (int a = 0; a < 7; ++a)
            if (d.n[a] > 1) d.n[a] *= 2;
        return d;
    }

    // wavenumber of index i along axis a
    int wave(int a, int idx) const { return idx <= n[a] / 2 ? idx : idx - n[a]; }

    long index_of(const std::array<int, 7>& idx) const {
        long s = 0;
        for (int a = 0; a < 7; ++a) s = s * n[a] + idx[a];
        return s;
    }
    std::array<int, 7> coords_of(long i) const {
        std::array<int, 7> idx{};
        for (int a = 6; a >= 0; --a) {
            idx[a] = static_cast<int>(i % n[a]);
            i /= n[a];
        }
        return idx;
    }
    std::array<int, 7> waves_of(long i) const {
        auto idx = coords_of(i);
        std::array<int, 7> m{};
        for (int a = 0; a < 7; ++a) m[a] = wave(a, idx[a]);
        return m;
    }
};

struct SpectralField {
    int degree = 0;
    GridShape shape;
    std::vector<std::vector<cplx>> comp; // [component rank][freq index]

    SpectralField() = default;
    SpectralField(int deg, GridShape sh)
        : degree(deg), shape(sh),
          comp(static_cast<size_t>(ext7::degree_size(deg)),
               std::vector<cplx>(static_cast<size_t>(sh.size()), cplx(0, 0))) {}

    int ncomp() const { return ext7::degree_size(degree); }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
};

// d: wedge with i m per frequency; degree + 1.
SpectralField spectral_d(const SpectralField& f);

// Flat codifferential: -i contraction with m per frequency; degree - 1.
SpectralField spectral_codiff(const SpectralField& f);

// Flat Euclidean Hodge star applied per frequency (index shuffle).
SpectralField spectral_flat_star(const SpectralField& f);

// Remove the exact part at each frequency: c -> c - m ^ (iota_m c) / |m|^2.
// Acts on 2-forms (and leaves the zero mode untouched).
SpectralField coexact_project(const SpectralField& f);

// Divide each nonzero frequency by |m|^2; zero mode is zeroed.
SpectralField inverse_laplacian(const SpectralField& f);

// Band embedding into a larger shape (zero padding) and truncation back.
// Truncation also zeroes the Nyquist rows so bands stay symmetric.
SpectralField zero_pad(const SpectralField& f, const GridShape& big);
SpectralField truncate_to(const SpectralField& f, const GridShape& small);

// Transforms between spectral coefficients and grid values (grid is
// component-major: values[comp][node], node indexing = shape.index_of).
// Grid values are real; from_grid discards the imaginary residue.
struct GridData {
    int degree = 0;
    GridShape shape;
    std::vector<std::vector<double>> values;
};

GridData to_grid(const SpectralField& f);
SpectralField from_grid(const GridData& g);

// Parseval L2 norm (RMS over the torus), grid max norm, and the
// frequency-weighted gradient proxy.
double l2_norm(const SpectralField& f);
double max_norm(const SpectralField& f);
double grad_proxy_norm(const SpectralField& f);

// Largest |c_m| over frequencies whose band exceeds the given one; used by
// the dealias diagnostics in tests.
double tail_mass(const SpectralField& f, int band);

} // namespace g2::spec
