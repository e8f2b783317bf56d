#pragma once

// Finite groups of affine isometries of T^7 = R^7/Z^7 with signed-permutation
// linear parts, their fixed loci, the singular locus of the quotient, and the
// Betti numbers of the invariant cohomology and of the resolved manifold.

#include "g2/forms.hpp"
#include "g2/rational.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace g2::orbifold {

struct UnsupportedGroupError : std::domain_error {
    explicit UnsupportedGroupError(const std::string& what) : std::domain_error(what) {}
};

// x |-> L x + t mod Z^7 with (L x)_i = sign[i] * x[perm[i]].
struct AffineIsometry {
    std::array<int, 7> perm{0, 1, 2, 3, 4, 5, 6};
    std::array<int, 7> sign{1, 1, 1, 1, 1, 1, 1};
    std::array<Rat, 7> t{};
    std::string label = "id";

    static AffineIsometry identity() { return AffineIsometry{}; }
    static AffineIsometry diagonal(std::array<int, 7> signs, std::array<Rat, 7> trans,
                                   std::string name);

    bool is_identity() const;
    AffineIsometry compose(const AffineIsometry& other) const; // this after other
    AffineIsometry inverse() const;
    Mat7<Rat> linear_matrix() const;
    std::array<Rat, 7> apply(const std::array<Rat, 7>& x) const;

    friend bool operator==(const AffineIsometry& a, const AffineIsometry& b) {
        return a.perm == b.perm && a.sign == b.sign && a.t == b.t;
    }
    friend bool operator<(const AffineIsometry& a, const AffineIsometry& b);

    void validate() const; // signed permutation, translations in [0,1) with denominator | 4
};

struct OrbifoldGroup {
    std::vector<AffineIsometry> elements; // [0] = identity
    int order() const { return static_cast<int>(elements.size()); }
};

// An affine subtorus with axis-aligned free directions.
struct FixedComponent {
    std::array<bool, 7> free_axis{};
    std::map<int, Rat> pinned; // 0-based axis -> value in [0,1)
    std::string stabilizer;    // label of the fixing element

    friend bool operator==(const FixedComponent& a, const FixedComponent& b) {
        return a.free_axis == b.free_axis && a.pinned == b.pinned;
    }
    friend bool operator<(const FixedComponent& a, const FixedComponent& b);
};

struct SingularComponent {
    FixedComponent representative;
    int orbit_size = 1;
    std::vector<std::string> setwise_stabilizer; // labels of elements mapping the torus to itself
};

struct OrbifoldReport {
    int order = 0;
    std::vector<std::pair<std::string, int>> fixed_counts; // per non-identity element
    std::vector<SingularComponent> singular;
    std::array<long, 8> invariant_betti{};
    bool all_fixed_disjoint = true;
};

// The three involutions generating Joyce's Z_2^3 example.
std::array<AffineIsometry, 3> joyce_generators();

// Closure of the generators under composition; throws if the group order
// would exceed the bound.
OrbifoldGroup generate(const std::vector<AffineIsometry>& gens, int bound = 512);

// All fixed components of one affine isometry; empty when there are none.
// Throws UnsupportedGroupError for fixed loci that are not axis-aligned
// (sign-product +1 around a nontrivial permutation cycle with solvable
// translation constraint).
std::vector<FixedComponent> fixed_locus(const AffineIsometry& a);

bool components_disjoint(const FixedComponent& a, const FixedComponent& b);

// Image of a component under a group element.
FixedComponent transform_component(const AffineIsometry& g, const FixedComponent& c);

// One representative per orbit of fixed components under the full group.
std::vector<SingularComponent> singular_locus(const OrbifoldGroup& g);

// Dimensions of the subspace of constant k-forms fixed by every linear part.
std::array<long, 8> invariant_betti(const OrbifoldGroup& g);

// Monomials fixed with sign +1 by every element (spans the invariant space
// for diagonal groups).
std::vector<unsigned> invariant_monomials(const OrbifoldGroup& g, int degree);

// b_i(M) = invariant b_i + (#singular components) * delta_i for i = 2, 3.
std::pair<long, long> resolution_betti(const OrbifoldReport& report, long delta_b2, long delta_b3);

OrbifoldReport analyze(const OrbifoldGroup& g);

} // namespace g2::orbifold
