#include "g2/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace g2::spec {

namespace {

void check_same(const SpectralField& a, const SpectralField& b) {
    if (a.degree != b.degree || !(a.shape == b.shape))
        throw std::invalid_argument("spectral field shape/degree mismatch");
}

// FFTW plans per shape, reused across calls.  Transforms are run through a
// shared aligned buffer, so plan alignment is stable.
struct PlanSet {
    fftw_plan fwd = nullptr, bwd = nullptr;
    fftw_complex* buf = nullptr;
    long n = 0;
};

class PlanCache {
public:
    PlanSet& get(const GridShape& shape) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(shape.n);
        if (it != cache_.end()) return it->second;
        PlanSet ps;
        ps.n = shape.size();
        ps.buf = fftw_alloc_complex(static_cast<size_t>(ps.n));
        // active axes in row-major order
        std::vector<int> dims;
        for (int a = 0; a < 7; ++a)
            if (shape.n[a] > 1) dims.push_back(shape.n[a]);
        if (dims.empty()) dims.push_back(1);
        ps.fwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), ps.buf, ps.buf,
                               FFTW_FORWARD, FFTW_ESTIMATE);
        ps.bwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), ps.buf, ps.buf,
                               FFTW_BACKWARD, FFTW_ESTIMATE);
        return cache_.emplace(shape.n, ps).first->second;
    }

private:
    std::mutex mu_;
    std::map<std::array<int, 7>, PlanSet> cache_;
};

PlanCache& plans() {
    static PlanCache c;
    return c;
}

} // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    check_same(*this, o);
    for (int c = 0; c < ncomp(); ++c)
        for (size_t i = 0; i < comp[static_cast<size_t>(c)].size(); ++i)
            comp[static_cast<size_t>(c)][i] += o.comp[static_cast<size_t>(c)][i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    check_same(*this, o);
    for (int c = 0; c < ncomp(); ++c)
        for (size_t i = 0; i < comp[static_cast<size_t>(c)].size(); ++i)
            comp[static_cast<size_t>(c)][i] -= o.comp[static_cast<size_t>(c)][i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : comp)
        for (auto& x : v) x *= s;
    return *this;
}

SpectralField spectral_d(const SpectralField& f) {
    if (f.degree >= 7) throw std::invalid_argument("cannot raise degree past 7");
    SpectralField out(f.degree + 1, f.shape);
    long n = f.shape.size();
    int nin = ext7::degree_size(f.degree);
    for (long idx = 0; idx < n; ++idx) {
        auto m = f.shape.waves_of(idx);
        for (int a = 0; a < 7; ++a) {
            if (m[a] == 0) continue;
            cplx factor(0, double(m[a]));
            for (int r = 0; r < nin; ++r) {
                cplx v = f.comp[static_cast<size_t>(r)][static_cast<size_t>(idx)];
                if (v == cplx(0, 0)) continue;
                unsigned mask = ext7::mask_of_rank(f.degree, r);
                int s = ext7::sign_merge(1u << a, mask);
                if (s == 0) continue;
                out.comp[static_cast<size_t>(ext7::rank_of_mask(mask | (1u << a)))]
                        [static_cast<size_t>(idx)] += double(s) * factor * v;
            }
        }
    }
    return out;
}

SpectralField spectral_codiff(const SpectralField& f) {
    if (f.degree <= 0) throw std::invalid_argument("cannot lower degree below 0");
    SpectralField out(f.degree - 1, f.shape);
    long n = f.shape.size();
    int nin = ext7::degree_size(f.degree);
    for (long idx = 0; idx < n; ++idx) {
        auto m = f.shape.waves_of(idx);
        for (int a = 0; a < 7; ++a) {
            if (m[a] == 0) continue;
            cplx factor(0, -double(m[a]));
            for (int r = 0; r < nin; ++r) {
                cplx v = f.comp[static_cast<size_t>(r)][static_cast<size_t>(idx)];
                if (v == cplx(0, 0)) continue;
                unsigned mask = ext7::mask_of_rank(f.degree, r);
                int s = ext7::sign_contract(a, mask);
                if (s == 0) continue;
                out.comp[static_cast<size_t>(ext7::rank_of_mask(mask & ~(1u << a)))]
                        [static_cast<size_t>(idx)] += double(s) * factor * v;
            }
        }
    }
    return out;
}

SpectralField spectral_flat_star(const SpectralField& f) {
    SpectralField out(7 - f.degree, f.shape);
    int nin = ext7::degree_size(f.degree);
    long n = f.shape.size();
    for (int r = 0; r < nin; ++r) {
        unsigned mask = ext7::mask_of_rank(f.degree, r);
        unsigned comp_mask = ext7::complement(mask);
        int s = ext7::sign_merge(mask, comp_mask);
        int ro = ext7::rank_of_mask(comp_mask);
        for (long idx = 0; idx < n; ++idx)
            out.comp[static_cast<size_t>(ro)][static_cast<size_t>(idx)] =
                double(s) * f.comp[static_cast<size_t>(r)][static_cast<size_t>(idx)];
    }
    return out;
}

SpectralField coexact_project(const SpectralField& f) {
    if (f.degree != 2) throw std::invalid_argument("coexact projection implemented for 2-forms");
    SpectralField out = f;
    long n = f.shape.size();
    for (long idx = 0; idx < n; ++idx) {
        auto m = f.shape.waves_of(idx);
        long m2 = 0;
        for (int a = 0; a < 7; ++a) m2 += static_cast<long>(m[a]) * m[a];
        if (m2 == 0) continue;
        // iota_m c (1-form)
        std::array<cplx, 7> im{};
        for (int r = 0; r < 21; ++r) {
            cplx v = f.comp[static_cast<size_t>(r)][static_cast<size_t>(idx)];
            if (v == cplx(0, 0)) continue;
            unsigned mask = ext7::mask_of_rank(2, r);
            for (int a = 0; a < 7; ++a) {
                if (m[a] == 0 || !(mask & (1u << a))) continue;
                int s = ext7::sign_contract(a, mask);
                int rest = ext7::rank_of_mask(mask & ~(1u << a));
                im[static_cast<size_t>(rest)] += double(s * m[a]) * v;
            }
        }
        // subtract m ^ (iota_m c) / |m|^2
        for (int b = 0; b < 7; ++b) {
            if (im[static_cast<size_t>(b)] == cplx(0, 0)) continue;
            for (int a = 0; a < 7; ++a) {
                if (m[a] == 0 || a == b) continue;
                int s = ext7::sign_merge(1u << a, 1u << b);
                int ro = ext7::rank_of_mask((1u << a) | (1u << b));
                out.comp[static_cast<size_t>(ro)][static_cast<size_t>(idx)] -=
                    double(s * m[a]) * im[static_cast<size_t>(b)] / double(m2);
            }
        }
    }
    return out;
}

SpectralField inverse_laplacian(const SpectralField& f) {
    SpectralField out = f;
    long n = f.shape.size();
    for (long idx = 0; idx < n; ++idx) {
        auto m = f.shape.waves_of(idx);
        long m2 = 0;
        for (int a = 0; a < 7; ++a) m2 += static_cast<long>(m[a]) * m[a];
        double factor = (m2 == 0) ? 0.0 : 1.0 / double(m2);
        for (int c = 0; c < f.ncomp(); ++c)
            out.comp[static_cast<size_t>(c)][static_cast<size_t>(idx)] *= factor;
    }
    return out;
}

namespace {

// Map a frequency index in `from` to the index of the same wavenumber in
// `to`; returns -1 when it does not fit.
long remap_index(const GridShape& from, const GridShape& to, long idx) {
    auto m = from.waves_of(idx);
    std::array<int, 7> ti{};
    for (int a = 0; a < 7; ++a) {
        int limit = to.n[a];
        if (m[a] > (limit - 1) / 2 || m[a] < -(limit / 2)) return -1;
        ti[a] = m[a] >= 0 ? m[a] : m[a] + limit;
        if (ti[a] >= limit) return -1;
    }
    return to.index_of(ti);
}

} // namespace

SpectralField zero_pad(const SpectralField& f, const GridShape& big) {
    SpectralField out(f.degree, big);
    long n = f.shape.size();
    for (long idx = 0; idx < n; ++idx) {
        long t = remap_index(f.shape, big, idx);
        if (t < 0) continue;
        for (int c = 0; c < f.ncomp(); ++c)
            out.comp[static_cast<size_t>(c)][static_cast<size_t>(t)] =
                f.comp[static_cast<size_t>(c)][static_cast<size_t>(idx)];
    }
    return out;
}

SpectralField truncate_to(const SpectralField& f, const GridShape& small) {
    SpectralField out(f.degree, small);
    long n = small.size();
    for (long idx = 0; idx < n; ++idx) {
        auto m = small.waves_of(idx);
        bool nyquist = false;
        for (int a = 0; a < 7; ++a)
            if (small.n[a] > 1 && m[a] == -small.n[a] / 2) nyquist = true;
        if (nyquist) continue; // keep bands symmetric under negation
        long t = remap_index(small, f.shape, idx);
        if (t < 0) continue;
        for (int c = 0; c < f.ncomp(); ++c)
            out.comp[static_cast<size_t>(c)][static_cast<size_t>(idx)] =
                f.comp[static_cast<size_t>(c)][static_cast<size_t>(t)];
    }
    return out;
}

GridData to_grid(const SpectralField& f) {
    GridData g;
    g.degree = f.degree;
    g.shape = f.shape;
    g.values.assign(static_cast<size_t>(f.ncomp()),
                    std::vector<double>(static_cast<size_t>(f.shape.size()), 0.0));
    PlanSet& ps = plans().get(f.shape);
    for (int c = 0; c < f.ncomp(); ++c) {
        std::memcpy(ps.buf, f.comp[static_cast<size_t>(c)].data(),
                    sizeof(fftw_complex) * static_cast<size_t>(ps.n));
        fftw_execute(ps.bwd);
        for (long i = 0; i < ps.n; ++i)
            g.values[static_cast<size_t>(c)][static_cast<size_t>(i)] = ps.buf[i][0];
    }
    return g;
}

SpectralField from_grid(const GridData& g) {
    SpectralField f(g.degree, g.shape);
    PlanSet& ps = plans().get(g.shape);
    double inv_n = 1.0 / double(ps.n);
    for (int c = 0; c < f.ncomp(); ++c) {
        for (long i = 0; i < ps.n; ++i) {
            ps.buf[i][0] = g.values[static_cast<size_t>(c)][static_cast<size_t>(i)];
            ps.buf[i][1] = 0.0;
        }
        fftw_execute(ps.fwd);
        for (long i = 0; i < ps.n; ++i)
            f.comp[static_cast<size_t>(c)][static_cast<size_t>(i)] =
                cplx(ps.buf[i][0] * inv_n, ps.buf[i][1] * inv_n);
    }
    return f;
}

double l2_norm(const SpectralField& f) {
    double s = 0;
    for (const auto& v : f.comp)
        for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

double max_norm(const SpectralField& f) {
    GridData g = to_grid(f);
    double best = 0;
    long n = f.shape.size();
    for (long i = 0; i < n; ++i) {
        double s = 0;
        for (const auto& v : g.values) {
            double x = v[static_cast<size_t>(i)];
            s += x * x;
        }
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

double grad_proxy_norm(const SpectralField& f) {
    double s = 0;
    long n = f.shape.size();
    for (long idx = 0; idx < n; ++idx) {
        auto m = f.shape.waves_of(idx);
        long m2 = 0;
        for (int a = 0; a < 7; ++a) m2 += static_cast<long>(m[a]) * m[a];
        double w = double(m2);
        for (const auto& v : f.comp) s += w * std::norm(v[static_cast<size_t>(idx)]);
    }
    return std::sqrt(s);
}

double tail_mass(const SpectralField& f, int band) {
    double best = 0;
    long n = f.shape.size();
    for (long idx = 0; idx < n; ++idx) {
        auto m = f.shape.waves_of(idx);
        bool outside = false;
        for (int a = 0; a < 7; ++a)
            if (std::abs(m[a]) > band) outside = true;
        if (!outside) continue;
        for (const auto& v : f.comp) best = std::max(best, std::abs(v[static_cast<size_t>(idx)]));
    }
    return best;
}

} // namespace g2::spec
