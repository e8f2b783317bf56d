#include "g2/theta_kernel.hpp"

namespace g2::theta {

Tables::Tables() {
    using namespace ext7;
    // B_ij dx^{1..7} = (e_i . phi) ^ (e_j . phi) ^ phi expanded into trilinear
    // terms over the 35 coefficients of phi.
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j)
            for (int ra = 0; ra < 35; ++ra) {
                unsigned A = mask_of_rank(3, ra);
                if (!(A & (1u << i))) continue;
                unsigned P = A & ~(1u << i);
                int sa = sign_contract(i, A);
                for (int rb = 0; rb < 35; ++rb) {
                    unsigned B = mask_of_rank(3, rb);
                    if (!(B & (1u << j))) continue;
                    unsigned Q = B & ~(1u << j);
                    if (P & Q) continue;
                    int sb = sign_contract(j, B);
                    int s1 = sign_merge(P, Q);
                    if (s1 == 0) continue;
                    unsigned C = complement(P | Q);
                    int s2 = sign_merge(P | Q, C);
                    int total = sa * sb * s1 * s2;
                    if (total == 0) continue;
                    BTerm t;
                    t.ij = static_cast<std::uint8_t>(i * 7 + j);
                    t.a = static_cast<std::uint8_t>(ra);
                    t.b = static_cast<std::uint8_t>(rb);
                    t.c = static_cast<std::uint8_t>(rank_of_mask(C));
                    t.sign = static_cast<std::int8_t>(total);
                    b_terms.push_back(t);
                }
            }
    // Hodge star index lists: output rank (degree 4) -> complement axes + sign.
    for (int rj = 0; rj < 35; ++rj) {
        unsigned J = mask_of_rank(4, rj);
        unsigned K = complement(J);
        StarEntry e;
        e.sign = static_cast<std::int8_t>(sign_merge(K, J));
        int c = 0;
        for (int ax = 0; ax < 7; ++ax)
            if (K & (1u << ax)) e.rows[static_cast<size_t>(c++)] = static_cast<std::uint8_t>(ax);
        star[static_cast<size_t>(rj)] = e;
    }
    for (int ri = 0; ri < 35; ++ri) {
        unsigned I = mask_of_rank(3, ri);
        int c = 0;
        for (int ax = 0; ax < 7; ++ax)
            if (I & (1u << ax)) cols[static_cast<size_t>(ri)][static_cast<size_t>(c++)] =
                static_cast<std::uint8_t>(ax);
    }
}

const Tables& tables() {
    static const Tables t;
    return t;
}

namespace {

// Unpivoted symmetric elimination: returns false unless all pivots share one
// sign and clear a relative threshold.  On success fills inv and det of the
// (possibly sign-flipped) positive definite matrix; orient records the flip.
bool sym7_invert(const double* b, double inv[49], double& det, int& orient) {
    double scale = 0;
    for (int i = 0; i < 49; ++i) scale = std::max(scale, std::fabs(b[i]));
    if (!(scale > 0)) return false;

    double m[49];
    int sign0 = b[0] > 0 ? 1 : (b[0] < 0 ? -1 : 0);
    if (sign0 == 0) return false;
    orient = sign0;
    for (int i = 0; i < 49; ++i) m[i] = orient * b[i];

    double a[49];
    for (int i = 0; i < 49; ++i) a[i] = m[i];
    double id[49] = {0};
    for (int i = 0; i < 7; ++i) id[i * 7 + i] = 1;

    det = 1.0;
    for (int c = 0; c < 7; ++c) {
        double piv = a[c * 7 + c];
        if (!(piv > 1e-13 * scale)) return false; // not (safely) positive definite
        det *= piv;
        double ipiv = 1.0 / piv;
        for (int k = 0; k < 7; ++k) {
            a[c * 7 + k] *= ipiv;
            id[c * 7 + k] *= ipiv;
        }
        for (int r = 0; r < 7; ++r) {
            if (r == c) continue;
            double f = a[r * 7 + c];
            if (f == 0) continue;
            for (int k = 0; k < 7; ++k) {
                a[r * 7 + k] -= f * a[c * 7 + k];
                id[r * 7 + k] -= f * id[c * 7 + k];
            }
        }
    }
    for (int i = 0; i < 49; ++i) inv[i] = id[i];
    return true;
}

} // namespace

bool theta_point(const double* phi, double* theta, double* metric_out, double* vol_out) {
    const Tables& tb = tables();

    double B[49] = {0};
    for (const BTerm& t : tb.b_terms)
        B[t.ij] += t.sign * phi[t.a] * phi[t.b] * phi[t.c];
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < i; ++j) B[i * 7 + j] = B[j * 7 + i];

    double binv[49], detB;
    int orient;
    if (!sym7_invert(B, binv, detB, orient)) return false;

    // g = c B, vol = 1/(6c), ginv = binv / c with c = (36 detB)^{-1/9}
    double c = std::pow(36.0 * detB, -1.0 / 9.0);
    double vol = 1.0 / (6.0 * c);
    double icinv = 1.0 / c;

    if (metric_out)
        for (int i = 0; i < 49; ++i) metric_out[i] = c * orient * B[i];
    if (vol_out) *vol_out = vol;

    // (*phi)_J = orient * vol * sign(K,J) * sum_I det(ginv[K,I]) phi_I
    for (int rj = 0; rj < 35; ++rj) {
        const StarEntry& se = tb.star[static_cast<size_t>(rj)];
        const double* r0 = binv + se.rows[0] * 7;
        const double* r1 = binv + se.rows[1] * 7;
        const double* r2 = binv + se.rows[2] * 7;
        double acc = 0;
        for (int ri = 0; ri < 35; ++ri) {
            double p = phi[ri];
            if (p == 0) continue;
            const auto& cl = tb.cols[static_cast<size_t>(ri)];
            double a00 = r0[cl[0]], a01 = r0[cl[1]], a02 = r0[cl[2]];
            double a10 = r1[cl[0]], a11 = r1[cl[1]], a12 = r1[cl[2]];
            double a20 = r2[cl[0]], a21 = r2[cl[1]], a22 = r2[cl[2]];
            double det3 = a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
                          a02 * (a10 * a21 - a11 * a20);
            acc += det3 * p;
        }
        // ginv = binv / c (orientation sign already folded into binv of |B|)
        theta[rj] = orient * se.sign * vol * acc * (icinv * icinv * icinv);
    }
    return true;
}

} // namespace g2::theta
