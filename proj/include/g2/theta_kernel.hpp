#pragma once

// Pointwise evaluation of Theta(phi) = *_phi phi for degree-3 coefficient
// vectors, the hot kernel of the torsion solver.  Table-driven: the
// trilinear B-matrix terms and the Hodge-star index lists are precomputed
// once per process.

#include "g2/ext7.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace g2::theta {

struct BTerm {
    std::uint8_t ij;      // i * 7 + j, i <= j
    std::uint8_t a, b, c; // ranks of the three degree-3 monomials
    std::int8_t sign;
};

struct StarEntry {
    std::array<std::uint8_t, 3> rows; // complement axes of the output 4-monomial
    std::int8_t sign;                 // sign(K, J)
};

struct Tables {
    std::vector<BTerm> b_terms;
    std::array<StarEntry, 35> star; // per output rank (degree 4)
    std::array<std::array<std::uint8_t, 3>, 35> cols; // axes of each degree-3 monomial

    Tables();
};

const Tables& tables();

// Theta(phi) for one 3-form coefficient vector; returns false when the
// bilinear form fails the definiteness check (non-positive input).
// metric_out (optional, 49 doubles) receives g, vol_out the volume.
bool theta_point(const double* phi, double* theta, double* metric_out = nullptr,
                 double* vol_out = nullptr);

} // namespace g2::theta
