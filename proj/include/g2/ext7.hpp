#pragma once

// Combinatorial tables for the exterior algebra of R^7.
//
// A degree-k monomial dx^{i1..ik} (1 <= i1 < ... < ik <= 7) is encoded as a
// 7-bit mask with bit (i-1) set for each index i.  Within one degree the
// monomials are ordered by ascending mask value; rank_of_mask/mask_of_rank
// convert between the mask and that dense index.

#include <array>
#include <cstdint>

namespace g2::ext7 {

inline constexpr int kDim = 7;
inline constexpr int kMasks = 1 << kDim;

namespace detail {

struct Tables {
    std::array<std::array<int, kDim + 1>, kDim + 1> binom{};
    std::array<int, kMasks> rank{};                       // rank within its degree
    std::array<std::array<int, 35>, kDim + 1> mask{};     // degree -> rank -> mask
    std::array<int, kDim + 1> size{};                     // binom(7, k)

    Tables() {
        for (int n = 0; n <= kDim; ++n) {
            binom[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0);
        }
        std::array<int, kDim + 1> next{};
        for (int m = 0; m < kMasks; ++m) {
            int k = __builtin_popcount(static_cast<unsigned>(m));
            rank[m] = next[k];
            mask[k][next[k]] = m;
            ++next[k];
        }
        for (int k = 0; k <= kDim; ++k) size[k] = next[k];
    }
};

inline const Tables& tables() {
    static const Tables t;
    return t;
}

} // namespace detail

inline int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    return detail::tables().binom[n][k];
}

inline int degree_size(int k) { return detail::tables().size[k]; }

inline int rank_of_mask(unsigned m) { return detail::tables().rank[m]; }

inline unsigned mask_of_rank(int degree, int r) {
    return static_cast<unsigned>(detail::tables().mask[degree][r]);
}

inline int popcount(unsigned m) { return __builtin_popcount(m); }

inline unsigned complement(unsigned m) { return (~m) & (kMasks - 1u); }

// Sign of dx^A ^ dx^B relative to dx^{A|B}; 0 when A and B overlap.
inline int sign_merge(unsigned a, unsigned b) {
    if (a & b) return 0;
    int inv = 0;
    for (int j = 0; j < kDim; ++j) {
        if (b & (1u << j)) inv += popcount(a >> (j + 1));
    }
    return (inv & 1) ? -1 : 1;
}

// Sign of iota_{e_axis} dx^I relative to dx^{I without axis}; 0 when axis not in I.
// axis is 0-based.
inline int sign_contract(int axis, unsigned m) {
    unsigned bit = 1u << axis;
    if (!(m & bit)) return 0;
    int pos = popcount(m & (bit - 1u)); // indices before axis
    return (pos & 1) ? -1 : 1;
}

} // namespace g2::ext7
