#pragma once

// Exterior algebra on R^7 over two interchangeable coefficient domains:
// exact rationals (Rat) and doubles.  KForm<S> stores the binom(7,k)
// coefficients of a degree-k alternating form, indexed per ext7.

#include "g2/ext7.hpp"
#include "g2/rational.hpp"
#include "g2/smallmat.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace g2 {

struct PositivityError : std::domain_error {
    explicit PositivityError(const std::string& what) : std::domain_error(what) {}
};

// Thrown in the exact domain when the metric normalization factor is not a
// rational number (its ninth power is not a perfect power); such inputs can
// only be handled in the real domain.
struct ExactMetricError : std::domain_error {
    explicit ExactMetricError(const std::string& what) : std::domain_error(what) {}
};

template <class S>
struct KForm {
    int degree = 0;
    std::vector<S> c; // size binom(7, degree)

    KForm() : c(1, S(0)) {}
    explicit KForm(int deg) : degree(deg), c(static_cast<size_t>(ext7::degree_size(deg)), S(0)) {
        if (deg < 0 || deg > 7) throw std::invalid_argument("form degree out of range");
    }

    S& operator[](int rank) { return c[static_cast<size_t>(rank)]; }
    const S& operator[](int rank) const { return c[static_cast<size_t>(rank)]; }

    S coeff(unsigned mask) const {
        if (ext7::popcount(mask) != degree) return S(0);
        return c[static_cast<size_t>(ext7::rank_of_mask(mask))];
    }
    void set(unsigned mask, const S& v) {
        if (ext7::popcount(mask) != degree)
            throw std::invalid_argument("monomial mask degree mismatch");
        c[static_cast<size_t>(ext7::rank_of_mask(mask))] = v;
    }

    bool is_zero() const {
        for (const S& x : c)
            if (!(x == S(0))) return false;
        return true;
    }

    KForm& operator+=(const KForm& o) {
        require_same_degree(o);
        for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    KForm& operator-=(const KForm& o) {
        require_same_degree(o);
        for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
        return *this;
    }
    KForm& operator*=(const S& s) {
        for (S& x : c) x *= s;
        return *this;
    }
    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend KForm operator*(const S& s, KForm a) { return a *= s; }
    friend KForm operator-(KForm a) {
        for (S& x : a.c) x = -x;
        return a;
    }
    friend bool operator==(const KForm& a, const KForm& b) {
        return a.degree == b.degree && a.c == b.c;
    }

private:
    void require_same_degree(const KForm& o) const {
        if (degree != o.degree) throw std::invalid_argument("form degree mismatch");
    }
};

using FormQ = KForm<Rat>;
using FormR = KForm<double>;

template <class S>
inline KForm<S> basis_form(unsigned mask, const S& v = S(1)) {
    KForm<S> f(ext7::popcount(mask));
    f.set(mask, v);
    return f;
}

// dx^a ^ dx^b ^ ... for 1-based axes.
template <class S>
inline KForm<S> dx(std::initializer_list<int> axes) {
    unsigned mask = 0;
    int sign = 1;
    int deg = 0;
    for (int a : axes) {
        unsigned bit = 1u << (a - 1);
        if (mask & bit) return KForm<S>(static_cast<int>(axes.size()));
        sign *= ext7::sign_merge(mask, bit);
        mask |= bit;
        ++deg;
    }
    return basis_form<S>(mask, S(sign));
}

template <class S>
inline KForm<S> wedge(const KForm<S>& a, const KForm<S>& b) {
    int deg = a.degree + b.degree;
    if (deg > 7) throw std::invalid_argument("wedge degree exceeds 7");
    KForm<S> out(deg);
    int na = ext7::degree_size(a.degree), nb = ext7::degree_size(b.degree);
    for (int ra = 0; ra < na; ++ra) {
        if (a[ra] == S(0)) continue;
        unsigned ma = ext7::mask_of_rank(a.degree, ra);
        for (int rb = 0; rb < nb; ++rb) {
            if (b[rb] == S(0)) continue;
            unsigned mb = ext7::mask_of_rank(b.degree, rb);
            int s = ext7::sign_merge(ma, mb);
            if (s == 0) continue;
            unsigned m = ma | mb;
            out.c[static_cast<size_t>(ext7::rank_of_mask(m))] += S(s) * a[ra] * b[rb];
        }
    }
    return out;
}

// Interior product with the basis vector e_axis (0-based axis).
template <class S>
inline KForm<S> contract(int axis, const KForm<S>& a) {
    if (a.degree == 0) return KForm<S>(0);
    KForm<S> out(a.degree - 1);
    int n = ext7::degree_size(a.degree);
    for (int r = 0; r < n; ++r) {
        if (a[r] == S(0)) continue;
        unsigned m = ext7::mask_of_rank(a.degree, r);
        int s = ext7::sign_contract(axis, m);
        if (s == 0) continue;
        unsigned rest = m & ~(1u << axis);
        out.c[static_cast<size_t>(ext7::rank_of_mask(rest))] += S(s) * a[r];
    }
    return out;
}

// Evaluate a k-form on k column vectors (v[j][i] = i-th component of vector j).
template <class S>
inline S evaluate(const KForm<S>& a, const std::vector<std::array<S, 7>>& v) {
    if (static_cast<int>(v.size()) != a.degree)
        throw std::invalid_argument("evaluate: vector count != degree");
    int k = a.degree;
    S total(0);
    int n = ext7::degree_size(k);
    for (int r = 0; r < n; ++r) {
        if (a[r] == S(0)) continue;
        unsigned m = ext7::mask_of_rank(k, r);
        std::array<int, 7> idx{};
        int cnt = 0;
        for (int i = 0; i < 7; ++i)
            if (m & (1u << i)) idx[cnt++] = i;
        // det of the k x k minor with rows idx, columns 0..k-1
        std::vector<S> sub(static_cast<size_t>(k) * k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub[i * k + j] = v[static_cast<size_t>(j)][idx[i]];
        // elimination determinant
        S det(1);
        bool zero = false;
        for (int c = 0; c < k && !zero; ++c) {
            int p = -1;
            for (int rr = c; rr < k; ++rr)
                if (!(sub[rr * k + c] == S(0))) {
                    p = rr;
                    break;
                }
            if (p < 0) {
                zero = true;
                break;
            }
            if (p != c) {
                for (int j = 0; j < k; ++j) std::swap(sub[p * k + j], sub[c * k + j]);
                det = -det;
            }
            det *= sub[c * k + c];
            for (int rr = c + 1; rr < k; ++rr) {
                if (sub[rr * k + c] == S(0)) continue;
                S f = sub[rr * k + c] / sub[c * k + c];
                for (int j = c; j < k; ++j) sub[rr * k + j] -= f * sub[c * k + j];
            }
        }
        if (!zero) total += a[r] * det;
    }
    return total;
}

// Pullback under the linear map with matrix A: (A*a)(v,...) = a(Av,...).
template <class S>
inline KForm<S> pullback(const Mat7<S>& A, const KForm<S>& a) {
    int k = a.degree;
    KForm<S> out(k);
    if (k == 0) {
        out.c[0] = a.c[0];
        return out;
    }
    int n = ext7::degree_size(k);
    for (int rj = 0; rj < n; ++rj) {
        unsigned mj = ext7::mask_of_rank(k, rj);
        std::array<int, 7> cols{};
        int cnt = 0;
        for (int i = 0; i < 7; ++i)
            if (mj & (1u << i)) cols[cnt++] = i;
        S acc(0);
        for (int ri = 0; ri < n; ++ri) {
            if (a[ri] == S(0)) continue;
            unsigned mi = ext7::mask_of_rank(k, ri);
            std::array<int, 7> rows{};
            cnt = 0;
            for (int i = 0; i < 7; ++i)
                if (mi & (1u << i)) rows[cnt++] = i;
            // det A[rows, cols]
            std::vector<S> sub(static_cast<size_t>(k) * k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) sub[i * k + j] = at(A, rows[i], cols[j]);
            S det(1);
            bool zero = false;
            for (int c = 0; c < k && !zero; ++c) {
                int p = -1;
                for (int rr = c; rr < k; ++rr)
                    if (!(sub[rr * k + c] == S(0))) {
                        p = rr;
                        break;
                    }
                if (p < 0) {
                    zero = true;
                    break;
                }
                if (p != c) {
                    for (int j = 0; j < k; ++j) std::swap(sub[p * k + j], sub[c * k + j]);
                    det = -det;
                }
                det *= sub[c * k + c];
                for (int rr = c + 1; rr < k; ++rr) {
                    if (sub[rr * k + c] == S(0)) continue;
                    S f = sub[rr * k + c] / sub[c * k + c];
                    for (int j = c; j < k; ++j) sub[rr * k + j] -= f * sub[c * k + j];
                }
            }
            if (!zero) acc += a[ri] * det;
        }
        out[rj] = acc;
    }
    return out;
}

// The standard G2 three-form
//   dx^123 + dx^145 + dx^167 + dx^246 - dx^257 - dx^347 - dx^356.
template <class S>
inline KForm<S> standard_phi0() {
    KForm<S> f(3);
    auto put = [&f](int a, int b, int c, int s) {
        unsigned m = (1u << (a - 1)) | (1u << (b - 1)) | (1u << (c - 1));
        f.set(m, S(s));
    };
    put(1, 2, 3, 1);
    put(1, 4, 5, 1);
    put(1, 6, 7, 1);
    put(2, 4, 6, 1);
    put(2, 5, 7, -1);
    put(3, 4, 7, -1);
    put(3, 5, 6, -1);
    return f;
}

template <class S>
struct MetricTensor {
    Mat7<S> g = mat7_identity<S>();
    S volume = S(1);    // sqrt(det g), always positive
    int orientation = 1; // +1: dx^{1..7} positively oriented, -1: reversed
};

using MetricQ = MetricTensor<Rat>;
using MetricR = MetricTensor<double>;

// B_ij dx^{1..7} = (e_i . phi) ^ (e_j . phi) ^ phi.
template <class S>
inline Mat7<S> b_matrix(const KForm<S>& phi) {
    if (phi.degree != 3) throw std::invalid_argument("b_matrix: need a 3-form");
    std::array<KForm<S>, 7> contr;
    for (int i = 0; i < 7; ++i) contr[i] = contract(i, phi);
    Mat7<S> B = mat7_zero<S>();
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) {
            KForm<S> w = wedge(wedge(contr[i], contr[j]), phi);
            at(B, i, j) = w.c[0];
            at(B, j, i) = w.c[0];
        }
    return B;
}

namespace detail {

// Common part of the reconstruction: orient B so it is a candidate positive
// definite matrix. Returns orientation or throws PositivityError.
template <class S, class DefiniteCheck>
inline int orient_b(Mat7<S>& B, DefiniteCheck&& definite) {
    int d = definite(B);
    if (d > 0) return 1;
    if (d < 0) {
        for (S& x : B) x = -x;
        return -1;
    }
    throw PositivityError("three-form is not positive: bilinear form not definite");
}

} // namespace detail

// Metric reconstruction in the exact domain.  Normalized so that phi0 maps to
// the identity metric with volume 1: g = 6^{-2/9} (det B)^{-1/9} B and
// volume = 1/(6 c) for the scale factor c.
inline MetricQ metric_from_three_form(const FormQ& phi) {
    Mat7<Rat> B = b_matrix(phi);
    auto definite = [](const Mat7<Rat>& m) -> int {
        auto minors = leading_minors(m);
        bool pos = true, neg = true;
        for (int k = 0; k < 7; ++k) {
            int s = sgn(minors[k]);
            if (s <= 0) pos = false;
            int expect = (k % 2 == 0) ? -1 : 1; // alternating for negative definite
            if (s != expect) neg = false;
        }
        return pos ? 1 : (neg ? -1 : 0);
    };
    MetricQ out;
    out.orientation = detail::orient_b(B, definite);
    Rat detB = mat7_det(B);
    auto root = exact_root(Rat(36) * detB, 9);
    if (!root)
        throw ExactMetricError(
            "metric scale (36 det B)^{1/9} is irrational; use the real domain");
    Rat c = Rat(1) / *root;
    for (int i = 0; i < 49; ++i) out.g[i] = c * B[i];
    out.volume = Rat(1) / (Rat(6) * c);
    return out;
}

// Real-domain reconstruction; definiteness uses the scale-invariant
// eigenvalue test lambda_min > 1e-10 * lambda_max.
inline MetricR metric_from_three_form(const FormR& phi) {
    Mat7<double> B = b_matrix(phi);
    auto ev = sym7_eigenvalues(B);
    double lo = ev[0], hi = ev[0], loabs = std::fabs(ev[0]), hiabs = std::fabs(ev[0]);
    for (double e : ev) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        loabs = std::min(loabs, std::fabs(e));
        hiabs = std::max(hiabs, std::fabs(e));
    }
    int orient;
    if (lo > 0 && loabs > 1e-10 * hiabs)
        orient = 1;
    else if (hi < 0 && loabs > 1e-10 * hiabs)
        orient = -1;
    else
        throw PositivityError("three-form is not positive: bilinear form not definite");
    if (orient < 0)
        for (double& x : B) x = -x;
    double detB = mat7_det(B);
    double c = std::pow(36.0 * detB, -1.0 / 9.0);
    MetricR out;
    out.orientation = orient;
    for (int i = 0; i < 49; ++i) out.g[i] = c * B[i];
    out.volume = 1.0 / (6.0 * c);
    return out;
}

template <class S>
inline bool is_positive(const KForm<S>& phi) {
    if (phi.degree != 3) throw std::invalid_argument("is_positive: need a 3-form");
    try {
        (void)metric_from_three_form(phi);
        return true;
    } catch (const PositivityError&) {
        return false;
    }
}

// Hodge star for an arbitrary metric.  For a k-form a,
//   (*a)_J = orient * V * sign(J^c, J) * sum_I det(ginv[J^c, I]) a_I.
template <class S>
inline KForm<S> hodge_star(const MetricTensor<S>& metric, const KForm<S>& a) {
    int k = a.degree;
    Mat7<S> ginv = mat7_inverse(metric.g);
    KForm<S> out(7 - k);
    int nin = ext7::degree_size(k), nout = ext7::degree_size(7 - k);
    for (int rj = 0; rj < nout; ++rj) {
        unsigned mj = ext7::mask_of_rank(7 - k, rj);
        unsigned mk = ext7::complement(mj);
        int s = ext7::sign_merge(mk, mj);
        std::array<int, 7> rows{};
        int cnt = 0;
        for (int i = 0; i < 7; ++i)
            if (mk & (1u << i)) rows[cnt++] = i;
        S acc(0);
        for (int ri = 0; ri < nin; ++ri) {
            if (a[ri] == S(0)) continue;
            unsigned mi = ext7::mask_of_rank(k, ri);
            std::array<int, 7> cols{};
            cnt = 0;
            for (int i = 0; i < 7; ++i)
                if (mi & (1u << i)) cols[cnt++] = i;
            // det ginv[rows, cols], k x k (k = degree of a)
            S det(1);
            if (k > 0) {
                std::vector<S> sub(static_cast<size_t>(k) * k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) sub[i * k + j] = at(ginv, rows[i], cols[j]);
                bool zero = false;
                for (int c = 0; c < k && !zero; ++c) {
                    int p = -1;
                    for (int rr = c; rr < k; ++rr)
                        if (!(sub[rr * k + c] == S(0))) {
                            p = rr;
                            break;
                        }
                    if (p < 0) {
                        zero = true;
                        break;
                    }
                    if (p != c) {
                        for (int j = 0; j < k; ++j) std::swap(sub[p * k + j], sub[c * k + j]);
                        det = -det;
                    }
                    det *= sub[c * k + c];
                    for (int rr = c + 1; rr < k; ++rr) {
                        if (sub[rr * k + c] == S(0)) continue;
                        S f = sub[rr * k + c] / sub[c * k + c];
                        for (int j = c; j < k; ++j) sub[rr * k + j] -= f * sub[c * k + j];
                    }
                }
                if (zero) det = S(0);
            }
            acc += S(s) * det * a[ri];
        }
        out[rj] = S(metric.orientation) * metric.volume * acc;
    }
    return out;
}

template <class S>
inline MetricTensor<S> euclidean_metric() {
    return MetricTensor<S>{};
}

inline double coeff_norm(const FormR& a) {
    double s = 0;
    for (double x : a.c) s += x * x;
    return std::sqrt(s);
}

inline double coeff_max(const FormR& a) {
    double s = 0;
    for (double x : a.c) s = std::max(s, std::fabs(x));
    return s;
}

inline FormR to_real(const FormQ& a) {
    FormR out(a.degree);
    for (size_t i = 0; i < a.c.size(); ++i) out.c[i] = a.c[i].get_d();
    return out;
}

inline Mat7<double> to_real(const Mat7<Rat>& m) {
    Mat7<double> out;
    for (int i = 0; i < 49; ++i) out[i] = m[i].get_d();
    return out;
}

// Human-readable monomial label "1,2,3" for a mask.
inline std::string monomial_label(unsigned mask) {
    std::string s;
    for (int i = 0; i < 7; ++i)
        if (mask & (1u << i)) {
            if (!s.empty()) s += ',';
            s += static_cast<char>('1' + i);
        }
    return s;
}

} // namespace g2
