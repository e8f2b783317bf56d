#include "g2/orbifold.hpp"

#include <doctest.h>

using namespace g2;
using namespace g2::orbifold;

namespace {

OrbifoldGroup joyce_group() {
    auto g = joyce_generators();
    return generate({g[0], g[1], g[2]});
}

} // namespace

TEST_CASE("joyce generators: involutions, commuting, phi0-preserving") {
    auto gens = joyce_generators();
    FormQ phi0 = standard_phi0<Rat>();
    for (const auto& g : gens) {
        CHECK(g.compose(g).is_identity());
        CHECK(pullback(g.linear_matrix(), phi0) == phi0);
    }
    CHECK(gens[0].compose(gens[1]) == gens[1].compose(gens[0]));
    CHECK(gens[0].compose(gens[2]) == gens[2].compose(gens[0]));
    CHECK(gens[1].compose(gens[2]) == gens[2].compose(gens[1]));
}

TEST_CASE("group generation") {
    CHECK(joyce_group().order() == 8);
    CHECK(generate({joyce_generators()[0]}).order() == 2);
    CHECK(generate({AffineIsometry::identity()}).order() == 1);
    // every non-identity element of the joyce group has order 2
    for (const auto& e : joyce_group().elements)
        if (!e.is_identity()) CHECK(e.compose(e).is_identity());
    // closure bound
    CHECK_THROWS(generate({joyce_generators()[0], joyce_generators()[1]}, 2));
}

TEST_CASE("fixed loci of the generators") {
    auto gens = joyce_generators();
    auto fa = fixed_locus(gens[0]);
    REQUIRE(fa.size() == 16);
    for (const auto& c : fa) {
        CHECK(c.free_axis == std::array<bool, 7>{true, true, true, false, false, false, false});
        for (const auto& [ax, v] : c.pinned) {
            CHECK(ax >= 3);
            CHECK((v == Rat(0) || v == Rat(1, 2)));
        }
    }
    auto fb = fixed_locus(gens[1]);
    REQUIRE(fb.size() == 16);
    for (const auto& c : fb) {
        CHECK(c.free_axis == std::array<bool, 7>{true, false, false, true, true, false, false});
        CHECK((c.pinned.at(5) == Rat(1, 4) || c.pinned.at(5) == Rat(3, 4)));
        CHECK((c.pinned.at(1) == Rat(0) || c.pinned.at(1) == Rat(1, 2)));
    }
    auto fc = fixed_locus(gens[2]);
    REQUIRE(fc.size() == 16);
    for (const auto& c : fc) {
        CHECK((c.pinned.at(4) == Rat(1, 4) || c.pinned.at(4) == Rat(3, 4)));
        CHECK((c.pinned.at(6) == Rat(1, 4) || c.pinned.at(6) == Rat(3, 4)));
    }
    // only the generators fix anything
    for (const auto& e : joyce_group().elements) {
        if (e.is_identity()) continue;
        bool is_gen = false;
        for (const auto& g : gens)
            if (e == g) is_gen = true;
        CHECK(fixed_locus(e).size() == (is_gen ? 16 : 0));
    }
}

TEST_CASE("all 48 generator tori are pairwise disjoint") {
    auto gens = joyce_generators();
    std::vector<FixedComponent> all;
    for (const auto& g : gens)
        for (auto& c : fixed_locus(g)) all.push_back(c);
    REQUIRE(all.size() == 48);
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) CHECK(components_disjoint(all[i], all[j]));
}

TEST_CASE("per-element components are pairwise disjoint") {
    auto fa = fixed_locus(joyce_generators()[0]);
    for (size_t i = 0; i < fa.size(); ++i)
        for (size_t j = i + 1; j < fa.size(); ++j) CHECK(components_disjoint(fa[i], fa[j]));
}

TEST_CASE("singular locus of the joyce quotient") {
    auto sing = singular_locus(joyce_group());
    CHECK(sing.size() == 12);
    for (const auto& s : sing) {
        CHECK(s.orbit_size == 4);
        CHECK(8 % (s.orbit_size * 2) == 0); // orbit size divides the group order
    }
    // alpha's tori under <beta, gamma>: 4 orbits of size 4..., i.e. exactly
    // four of the twelve have stabilizer alpha
    int alpha_reps = 0;
    for (const auto& s : sing)
        if (s.representative.stabilizer == "alpha") ++alpha_reps;
    CHECK(alpha_reps == 4);
    // a single involution alone identifies nothing
    auto sing_a = singular_locus(generate({joyce_generators()[0]}));
    CHECK(sing_a.size() == 16);
    for (const auto& s : sing_a) CHECK(s.orbit_size == 1);
}

TEST_CASE("invariant betti numbers") {
    auto b = invariant_betti(joyce_group());
    CHECK(b == std::array<long, 8>{1, 0, 0, 7, 7, 0, 0, 1});
    auto mono = invariant_monomials(joyce_group(), 3);
    REQUIRE(mono.size() == 7);
    FormQ phi0 = standard_phi0<Rat>();
    for (unsigned m : mono) CHECK(sgn(phi0.coeff(m)) != 0);

    auto triv = invariant_betti(generate({AffineIsometry::identity()}));
    CHECK(triv == std::array<long, 8>{1, 7, 21, 35, 35, 21, 7, 1});
}

TEST_CASE("poincare symmetry of invariant betti vectors") {
    auto gens = joyce_generators();
    for (auto group : {joyce_group(), generate({gens[0]}), generate({gens[0], gens[1]})}) {
        auto b = invariant_betti(group);
        for (int k = 0; k <= 7; ++k) CHECK(b[k] == b[7 - k]);
    }
}

TEST_CASE("resolution betti numbers") {
    auto rep = analyze(joyce_group());
    CHECK(resolution_betti(rep, 1, 3) == std::pair<long, long>{12, 43});
    CHECK(resolution_betti(rep, 0, 0) == std::pair<long, long>{0, 7});
    OrbifoldReport empty;
    empty.invariant_betti = rep.invariant_betti;
    CHECK(resolution_betti(empty, 1, 3) == std::pair<long, long>{0, 7});
}

TEST_CASE("signed permutations with non-axis-aligned fixed loci are rejected") {
    // x1 <-> x2 swap: fixed locus is the diagonal circle x1 = x2
    AffineIsometry swap;
    swap.perm = {1, 0, 2, 3, 4, 5, 6};
    swap.label = "swap12";
    swap.validate();
    CHECK_THROWS_AS(fixed_locus(swap), UnsupportedGroupError);

    // swap with a sign flip pins both coordinates: supported
    AffineIsometry rot;
    rot.perm = {1, 0, 2, 3, 4, 5, 6};
    rot.sign = {1, -1, 1, 1, 1, 1, 1};
    rot.label = "rot12";
    rot.validate();
    // remaining axes are free, the (1,2)-plane contributes isolated pins
    auto f = fixed_locus(rot);
    CHECK(f.size() == 2);
    for (const auto& c : f) {
        CHECK(c.pinned.count(0) == 1);
        CHECK(c.pinned.count(1) == 1);
    }
    // swap with translation along the cycle: no fixed points at all
    AffineIsometry shift = swap;
    shift.t[0] = Rat(1, 2);
    shift.validate();
    CHECK(fixed_locus(shift).empty());
}

TEST_CASE("overlapping fixed loci with distinct stabilizers are rejected") {
    // two involutions whose fixed tori share points
    AffineIsometry a = AffineIsometry::diagonal({1, 1, 1, -1, -1, -1, -1}, {}, "a");
    AffineIsometry b = AffineIsometry::diagonal({1, 1, -1, -1, -1, -1, -1}, {}, "b");
    auto g = generate({a, b});
    CHECK_THROWS_AS(singular_locus(g), UnsupportedGroupError);
}

TEST_CASE("affine isometry validation") {
    AffineIsometry a;
    a.t[0] = Rat(1, 3);
    CHECK_THROWS(a.validate());
    a.t[0] = Rat(5, 4);
    CHECK_THROWS(a.validate());
    a.t[0] = Rat(3, 4);
    CHECK_NOTHROW(a.validate());
}

TEST_CASE("group element inverse and composition") {
    auto gens = joyce_generators();
    auto bc = gens[1].compose(gens[2]);
    CHECK(bc.compose(bc.inverse()).is_identity());
    CHECK(bc.inverse().compose(bc).is_identity());
}
