#pragma once

// Integer lattice arithmetic for the K3 lattice 3H + 2(-E8): invariants,
// primitive vectors, a constructive Eichler-transvection isometry search,
// and Donaldson matching of hyper-Kahler class triples.
//
// Basis ordering (fixed for serialized matrices): hyperbolic pairs
// (e1,f1,e2,f2,e3,f3) at coordinates 0..5, then the two negated E8 blocks at
// 6..13 and 14..21 in the Bourbaki chain order 1-3-4-5-6-7-8 with node 2
// attached to node 4.

#include "g2/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace g2::k3 {

using ZVec = std::vector<mpz_class>;
using QVec = std::vector<Rat>;
using ZMat = std::vector<ZVec>;

struct IntegerLattice {
    int rank = 0;
    std::vector<std::vector<long>> gram;

    void validate() const; // symmetric, nondegenerate
};

mpz_class inner(const IntegerLattice& L, const ZVec& v, const ZVec& w);
Rat inner(const IntegerLattice& L, const QVec& v, const QVec& w);

struct Isometry {
    ZMat m; // column-vector convention: (M v)_i = sum_j m[i][j] v_j

    ZVec apply(const ZVec& v) const;
    QVec apply(const QVec& v) const;
};

// Constructs and validates an isometry (M^T G M = G, det = +-1); throws on
// violation.
Isometry make_isometry(const IntegerLattice& L, ZMat m);

Isometry identity_isometry(int rank);
Isometry compose(const Isometry& a, const Isometry& b);                    // a after b
Isometry isometry_inverse(const IntegerLattice& L, const Isometry& a);

IntegerLattice k3_lattice();

bool is_even(const IntegerLattice& L);
mpz_class determinant(const IntegerLattice& L);
std::pair<int, int> signature(const IntegerLattice& L);

bool is_primitive(const ZVec& v); // throws on the zero vector

// Eichler transvection x -> x + (x.e) a - (x.a) e - (a.a)/2 (x.e) e for an
// isotropic e orthogonal to a.
Isometry transvection(const IntegerLattice& L, const ZVec& e, const ZVec& a);

enum class SearchStatus { Found, NotFound, Infeasible };

struct IsometryResult {
    SearchStatus status = SearchStatus::NotFound;
    std::optional<Isometry> isometry;
    long steps = 0;
    std::string note;
};

// Reduce a primitive vector to the canonical e1 + (v.v/2) f1 by explicit
// transvections and block moves; the result maps v to that canonical form.
IsometryResult reduce_to_canonical(const IntegerLattice& L, const ZVec& v, long max_steps = 4096);

// Integral isometry with M v = w for primitive vectors of equal square.
IsometryResult find_isometry(const IntegerLattice& L, const ZVec& v, const ZVec& w,
                             long max_steps = 4096);

struct HyperKahlerClasses {
    QVec cI, cJ, cK;
    void validate(const IntegerLattice& L) const; // pairwise orthogonal, positive squares, cJ^2 = cK^2
};

struct MatchResult {
    SearchStatus status = SearchStatus::NotFound;
    std::optional<Isometry> isometry;
    long tried = 0;
    std::string note;
};

// Lattice isometry h with h(c2.I) = c1.J, h(c2.J) = c1.I, h(c2.K) = -c1.K.
// Square mismatches are Infeasible; an exhausted search is NotFound.
MatchResult donaldson_match(const IntegerLattice& L, const HyperKahlerClasses& c1,
                            const HyperKahlerClasses& c2, std::uint64_t seed = 0,
                            long budget = 2000);

struct Polarization {
    IntegerLattice n;
    std::vector<ZVec> embedding; // images of the basis of n in L
    void validate(const IntegerLattice& L) const;
};

// Sufficient-only criterion: both polarizing lattices have rank <= 5.
bool matching_feasible_rank(const Polarization& n1, const Polarization& n2);

// Deterministic primitive vectors supported on the hyperbolic summands.
ZVec random_hyperbolic_primitive(const IntegerLattice& L, std::uint64_t seed, long max_square);

// Standard basis helpers (coordinates in the fixed ordering above).
ZVec basis_vector(int rank, int index);
ZVec hyperbolic_vector(int block, long e_coeff, long f_coeff); // block 0..2

} // namespace g2::k3
