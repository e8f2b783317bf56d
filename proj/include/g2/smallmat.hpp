#pragma once

// Dense helpers for the small (7x7) matrices used by the form algebra.

#include "g2/rational.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace g2 {

template <class S>
using Mat7 = std::array<S, 49>;

template <class S>
inline S& at(Mat7<S>& m, int i, int j) { return m[i * 7 + j]; }
template <class S>
inline const S& at(const Mat7<S>& m, int i, int j) { return m[i * 7 + j]; }

template <class S>
inline Mat7<S> mat7_zero() {
    Mat7<S> m;
    m.fill(S(0));
    return m;
}

template <class S>
inline Mat7<S> mat7_identity() {
    Mat7<S> m = mat7_zero<S>();
    for (int i = 0; i < 7; ++i) at(m, i, i) = S(1);
    return m;
}

template <class S>
inline Mat7<S> mat7_mul(const Mat7<S>& a, const Mat7<S>& b) {
    Mat7<S> c = mat7_zero<S>();
    for (int i = 0; i < 7; ++i)
        for (int k = 0; k < 7; ++k) {
            const S& aik = at(a, i, k);
            if (aik == S(0)) continue;
            for (int j = 0; j < 7; ++j) c[i * 7 + j] += aik * at(b, k, j);
        }
    return c;
}

template <class S>
inline Mat7<S> mat7_transpose(const Mat7<S>& a) {
    Mat7<S> t;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) at(t, i, j) = at(a, j, i);
    return t;
}

namespace detail {
inline bool pivot_larger(const Rat& a, const Rat& b) { return abs(a) > abs(b); }
inline bool pivot_larger(double a, double b) { return std::fabs(a) > std::fabs(b); }
inline bool is_zero_pivot(const Rat& a) { return sgn(a) == 0; }
inline bool is_zero_pivot(double a) { return a == 0.0; }
} // namespace detail

// Determinant by Gaussian elimination with partial pivoting.
template <class S>
inline S mat7_det(Mat7<S> m) {
    S det(1);
    for (int c = 0; c < 7; ++c) {
        int p = c;
        for (int r = c + 1; r < 7; ++r)
            if (detail::pivot_larger(at(m, r, c), at(m, p, c))) p = r;
        if (detail::is_zero_pivot(at(m, p, c))) return S(0);
        if (p != c) {
            for (int j = 0; j < 7; ++j) std::swap(m[p * 7 + j], m[c * 7 + j]);
            det = -det;
        }
        det *= at(m, c, c);
        for (int r = c + 1; r < 7; ++r) {
            if (detail::is_zero_pivot(at(m, r, c))) continue;
            S f = at(m, r, c) / at(m, c, c);
            for (int j = c; j < 7; ++j) m[r * 7 + j] -= f * m[c * 7 + j];
        }
    }
    return det;
}

// Inverse by Gauss-Jordan; throws on a singular input.
template <class S>
inline Mat7<S> mat7_inverse(Mat7<S> m) {
    Mat7<S> inv = mat7_identity<S>();
    for (int c = 0; c < 7; ++c) {
        int p = c;
        for (int r = c + 1; r < 7; ++r)
            if (detail::pivot_larger(at(m, r, c), at(m, p, c))) p = r;
        if (detail::is_zero_pivot(at(m, p, c))) throw std::domain_error("singular 7x7 matrix");
        if (p != c)
            for (int j = 0; j < 7; ++j) {
                std::swap(m[p * 7 + j], m[c * 7 + j]);
                std::swap(inv[p * 7 + j], inv[c * 7 + j]);
            }
        S piv = at(m, c, c);
        for (int j = 0; j < 7; ++j) {
            m[c * 7 + j] /= piv;
            inv[c * 7 + j] /= piv;
        }
        for (int r = 0; r < 7; ++r) {
            if (r == c) continue;
            S f = at(m, r, c);
            if (detail::is_zero_pivot(f)) continue;
            for (int j = 0; j < 7; ++j) {
                m[r * 7 + j] -= f * m[c * 7 + j];
                inv[r * 7 + j] -= f * inv[c * 7 + j];
            }
        }
    }
    return inv;
}

// Leading principal minors, minors[k] = det of the (k+1)x(k+1) block.
template <class S>
inline std::array<S, 7> leading_minors(const Mat7<S>& m) {
    std::array<S, 7> minors;
    for (int k = 1; k <= 7; ++k) {
        // Fraction-free enough for size <= 7: plain elimination on a copy.
        std::vector<S> a(static_cast<size_t>(k) * k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) a[i * k + j] = at(m, i, j);
        S det(1);
        bool singular = false;
        for (int c = 0; c < k && !singular; ++c) {
            int p = c;
            for (int r = c + 1; r < k; ++r)
                if (detail::pivot_larger(a[r * k + c], a[p * k + c])) p = r;
            if (detail::is_zero_pivot(a[p * k + c])) {
                det = S(0);
                singular = true;
                break;
            }
            if (p != c) {
                for (int j = 0; j < k; ++j) std::swap(a[p * k + j], a[c * k + j]);
                det = -det;
            }
            det *= a[c * k + c];
            for (int r = c + 1; r < k; ++r) {
                if (detail::is_zero_pivot(a[r * k + c])) continue;
                S f = a[r * k + c] / a[c * k + c];
                for (int j = c; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
            }
        }
        minors[k - 1] = det;
    }
    return minors;
}

// Eigenvalues of a symmetric 7x7 double matrix by cyclic Jacobi sweeps.
inline std::array<double, 7> sym7_eigenvalues(Mat7<double> a) {
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = 0;
        for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j) off += at(a, i, j) * at(a, i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < 7; ++p)
            for (int q = p + 1; q < 7; ++q) {
                double apq = at(a, p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (at(a, q, q) - at(a, p, p)) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < 7; ++k) {
                    double akp = at(a, k, p), akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 7; ++k) {
                    double apk = at(a, p, k), aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
            }
    }
    std::array<double, 7> ev;
    for (int i = 0; i < 7; ++i) ev[i] = at(a, i, i);
    return ev;
}

} // namespace g2
