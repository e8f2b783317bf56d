#include "g2/orbifold.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace g2::orbifold {

namespace {

Rat half() { return Rat(1, 2); }

bool denominator_ok(const Rat& x) {
    Rat c = x;
    c.canonicalize();
    mpz_class d = c.get_den();
    return d == 1 || d == 2 || d == 4;
}

} // namespace

AffineIsometry AffineIsometry::diagonal(std::array<int, 7> signs, std::array<Rat, 7> trans,
                                        std::string name) {
    AffineIsometry a;
    a.sign = signs;
    for (int i = 0; i < 7; ++i) a.t[i] = mod1(trans[i]);
    a.label = std::move(name);
    a.validate();
    return a;
}

void AffineIsometry::validate() const {
    std::array<bool, 7> seen{};
    for (int i = 0; i < 7; ++i) {
        if (perm[i] < 0 || perm[i] >= 7 || seen[perm[i]])
            throw std::invalid_argument("linear part is not a permutation");
        seen[perm[i]] = true;
        if (sign[i] != 1 && sign[i] != -1)
            throw std::invalid_argument("linear part entries must be +-1");
        if (sgn(t[i]) < 0 || t[i] >= Rat(1))
            throw std::invalid_argument("translations must lie in [0,1)");
        if (!denominator_ok(t[i]))
            throw std::invalid_argument("translation denominators limited to 1, 2, 4");
    }
}

bool AffineIsometry::is_identity() const {
    for (int i = 0; i < 7; ++i)
        if (perm[i] != i || sign[i] != 1 || sgn(t[i]) != 0) return false;
    return true;
}

AffineIsometry AffineIsometry::compose(const AffineIsometry& other) const {
    // (this o other)(x) = this(other(x)) = L1 L2 x + L1 t2 + t1
    AffineIsometry r;
    for (int i = 0; i < 7; ++i) {
        r.perm[i] = other.perm[perm[i]];
        r.sign[i] = sign[i] * other.sign[perm[i]];
        r.t[i] = mod1(Rat(sign[i]) * other.t[perm[i]] + t[i]);
    }
    r.label = label + "*" + other.label;
    return r;
}

AffineIsometry AffineIsometry::inverse() const {
    // y = Lx + t  =>  x = L^{-1}(y - t)
    AffineIsometry r;
    for (int i = 0; i < 7; ++i) {
        r.perm[perm[i]] = i;
        r.sign[perm[i]] = sign[i];
    }
    for (int i = 0; i < 7; ++i) r.t[i] = mod1(Rat(-r.sign[i]) * t[r.perm[i]]);
    r.label = label + "^-1";
    return r;
}

Mat7<Rat> AffineIsometry::linear_matrix() const {
    Mat7<Rat> m = mat7_zero<Rat>();
    for (int i = 0; i < 7; ++i) at(m, i, perm[i]) = Rat(sign[i]);
    return m;
}

std::array<Rat, 7> AffineIsometry::apply(const std::array<Rat, 7>& x) const {
    std::array<Rat, 7> y;
    for (int i = 0; i < 7; ++i) y[i] = mod1(Rat(sign[i]) * x[perm[i]] + t[i]);
    return y;
}

bool operator<(const AffineIsometry& a, const AffineIsometry& b) {
    if (a.perm != b.perm) return a.perm < b.perm;
    if (a.sign != b.sign) return a.sign < b.sign;
    for (int i = 0; i < 7; ++i) {
        if (a.t[i] < b.t[i]) return true;
        if (b.t[i] < a.t[i]) return false;
    }
    return false;
}

bool operator<(const FixedComponent& a, const FixedComponent& b) {
    if (a.free_axis != b.free_axis) return a.free_axis < b.free_axis;
    auto ia = a.pinned.begin(), ib = b.pinned.begin();
    for (; ia != a.pinned.end() && ib != b.pinned.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second < ib->second) return true;
        if (ib->second < ia->second) return false;
    }
    return a.pinned.size() < b.pinned.size();
}

std::array<AffineIsometry, 3> joyce_generators() {
    std::array<Rat, 7> zero{};
    std::array<Rat, 7> tb{};
    tb[5] = half(); // (0,0,0,0,0,1/2,0)
    std::array<Rat, 7> tc{};
    tc[4] = half();
    tc[6] = half(); // (0,0,0,0,1/2,0,1/2)
    return {
        AffineIsometry::diagonal({1, 1, 1, -1, -1, -1, -1}, zero, "alpha"),
        AffineIsometry::diagonal({1, -1, -1, 1, 1, -1, -1}, tb, "beta"),
        AffineIsometry::diagonal({-1, 1, -1, 1, -1, 1, -1}, tc, "gamma"),
    };
}

OrbifoldGroup generate(const std::vector<AffineIsometry>& gens, int bound) {
    for (const auto& g : gens) g.validate();
    std::set<AffineIsometry> seen;
    std::vector<AffineIsometry> order;
    AffineIsometry id = AffineIsometry::identity();
    seen.insert(id);
    order.push_back(id);
    size_t frontier = 0;
    while (frontier < order.size()) {
        AffineIsometry cur = order[frontier++];
        for (const auto& g : gens) {
            AffineIsometry nxt = g.compose(cur);
            if (seen.count(nxt)) continue;
            if (static_cast<int>(order.size()) >= bound)
                throw std::runtime_error("group closure not reached within bound");
            // keep the shortest label found first
            seen.insert(nxt);
            if (cur.is_identity()) nxt.label = g.label;
            order.push_back(nxt);
        }
    }
    return OrbifoldGroup{order};
}

std::vector<FixedComponent> fixed_locus(const AffineIsometry& a) {
    // Solve x = L x + t mod Z^7 cycle by cycle.  Each permutation cycle
    // either leaves one coordinate free, pins its coordinates to finitely
    // many values, or has no solution.
    std::array<bool, 7> visited{};
    struct CycleSolution {
        std::vector<int> axes;
        std::vector<std::map<int, Rat>> choices; // empty axes list = free axis
        bool free = false;
    };
    std::vector<CycleSolution> cycles;
    for (int start = 0; start < 7; ++start) {
        if (visited[start]) continue;
        std::vector<int> cyc;
        int i = start;
        do {
            visited[i] = true;
            cyc.push_back(i);
            i = a.perm[i];
        } while (i != start);

        if (cyc.size() == 1) {
            int ax = cyc[0];
            if (a.sign[ax] == 1) {
                if (sgn(a.t[ax]) != 0) return {}; // 0 = t has no solution
                CycleSolution cs;
                cs.axes = {ax};
                cs.free = true;
                cycles.push_back(cs);
            } else {
                // 2x = t mod 1
                CycleSolution cs;
                cs.axes = {ax};
                for (int k = 0; k < 2; ++k) {
                    std::map<int, Rat> pin;
                    pin[ax] = mod1(a.t[ax] / 2 + Rat(k) / 2);
                    cs.choices.push_back(pin);
                }
                cycles.push_back(cs);
            }
            continue;
        }

        // Nontrivial cycle: fixed-point equations x_i = s_i x_{perm[i]} + t_i.
        // Substituting around the cycle gives x_j = S x_j + C with S the sign
        // product and C an accumulated translation.
        int j0 = cyc[0];
        int s_prod = 1;
        Rat c_acc(0);
        // walk: x_{j0} = s_{j0} x_{p(j0)} + t_{j0}; expand x_{p(j0)} similarly
        {
            int j = j0;
            Rat coeff(1);
            for (size_t step = 0; step < cyc.size(); ++step) {
                c_acc += coeff * a.t[j];
                coeff *= Rat(a.sign[j]);
                j = a.perm[j];
            }
            s_prod = (coeff == Rat(1)) ? 1 : -1;
        }
        if (s_prod == 1) {
            // x = x + C: solvable iff C integral, and then a non-axis-aligned
            // circle of solutions.
            if (sgn(mod1(c_acc)) == 0)
                throw UnsupportedGroupError(
                    "fixed locus has a non-axis-aligned free direction (cycle with sign product +1)");
            return {};
        }
        // 2 x_{j0} = C mod 1: two solutions, each propagated around the cycle.
        CycleSolution cs;
        cs.axes = cyc;
        for (int k = 0; k < 2; ++k) {
            std::map<int, Rat> pin;
            Rat x0 = mod1(c_acc / 2 + Rat(k) / 2);
            pin[j0] = x0;
            // propagate backwards: x_i = s_i x_{perm[i]} + t_i
            // walk the cycle from j0: values determined successively
            int j = j0;
            for (size_t step = 0; step + 1 < cyc.size(); ++step) {
                // need x_{perm[j]} from x_j: x_j = s_j x_{perm[j]} + t_j
                Rat xnext = mod1(Rat(a.sign[j]) * (pin[j] - a.t[j]));
                j = a.perm[j];
                pin[j] = xnext;
            }
            cs.choices.push_back(pin);
        }
        cycles.push_back(cs);
    }

    // Cartesian product across pinned cycles.
    std::vector<FixedComponent> out;
    FixedComponent base;
    base.stabilizer = a.label;
    for (const auto& cs : cycles)
        if (cs.free) base.free_axis[cs.axes[0]] = true;
    std::vector<const CycleSolution*> pinned_cycles;
    for (const auto& cs : cycles)
        if (!cs.free) pinned_cycles.push_back(&cs);
    long total = 1;
    for (auto* cs : pinned_cycles) total *= static_cast<long>(cs->choices.size());
    for (long pick = 0; pick < total; ++pick) {
        FixedComponent c = base;
        long p = pick;
        for (auto* cs : pinned_cycles) {
            const auto& choice = cs->choices[static_cast<size_t>(p % cs->choices.size())];
            p /= static_cast<long>(cs->choices.size());
            for (const auto& [ax, v] : choice) c.pinned[ax] = v;
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool components_disjoint(const FixedComponent& a, const FixedComponent& b) {
    for (const auto& [ax, v] : a.pinned) {
        auto it = b.pinned.find(ax);
        if (it != b.pinned.end() && !(it->second == v)) return true;
    }
    return false; // every commonly pinned axis agrees => they intersect
}

FixedComponent transform_component(const AffineIsometry& g, const FixedComponent& c) {
    FixedComponent out;
    out.stabilizer = c.stabilizer;
    for (int i = 0; i < 7; ++i) {
        int src = g.perm[i];
        if (c.free_axis[src]) {
            out.free_axis[i] = true;
        } else {
            auto it = c.pinned.find(src);
            if (it == c.pinned.end()) continue;
            out.pinned[i] = mod1(Rat(g.sign[i]) * it->second + g.t[i]);
        }
    }
    return out;
}

std::vector<SingularComponent> singular_locus(const OrbifoldGroup& g) {
    struct Entry {
        FixedComponent comp;
        std::string element;
    };
    std::vector<Entry> all;
    for (const auto& e : g.elements) {
        if (e.is_identity()) continue;
        for (auto& c : fixed_locus(e)) all.push_back({c, e.label});
    }
    // Components of distinct elements must not overlap (supported class).
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) {
            if (all[i].element == all[j].element) continue;
            if (!components_disjoint(all[i].comp, all[j].comp))
                throw UnsupportedGroupError(
                    "overlapping fixed components with distinct stabilizers");
        }

    // Orbits of the group action on the component set.
    std::map<FixedComponent, size_t> index;
    for (size_t i = 0; i < all.size(); ++i) index[all[i].comp] = i;
    std::vector<size_t> uf(all.size());
    for (size_t i = 0; i < uf.size(); ++i) uf[i] = i;
    std::function<size_t(size_t)> find = [&](size_t x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    std::vector<std::set<std::string>> setwise(all.size());
    for (size_t i = 0; i < all.size(); ++i) {
        for (const auto& e : g.elements) {
            if (e.is_identity()) continue;
            FixedComponent img = transform_component(e, all[i].comp);
            auto it = index.find(img);
            if (it == index.end())
                throw UnsupportedGroupError("group action does not permute the fixed components");
            if (it->second == i) setwise[i].insert(e.label);
            size_t a = find(i), b = find(it->second);
            if (a != b) uf[a] = b;
        }
    }
    std::map<size_t, std::vector<size_t>> orbits;
    for (size_t i = 0; i < all.size(); ++i) orbits[find(i)].push_back(i);

    std::vector<SingularComponent> out;
    for (auto& [root, members] : orbits) {
        size_t rep = *std::min_element(members.begin(), members.end(), [&](size_t a, size_t b) {
            return all[a].comp < all[b].comp;
        });
        SingularComponent sc;
        sc.representative = all[rep].comp;
        sc.orbit_size = static_cast<int>(members.size());
        sc.setwise_stabilizer.assign(setwise[rep].begin(), setwise[rep].end());
        out.push_back(std::move(sc));
    }
    std::sort(out.begin(), out.end(), [](const SingularComponent& a, const SingularComponent& b) {
        return a.representative < b.representative;
    });
    return out;
}

std::array<long, 8> invariant_betti(const OrbifoldGroup& g) {
    // Burnside: dim of invariants = average over the group of the trace of
    // the signed-permutation action on Lambda^k.
    std::array<long, 8> sums{};
    for (const auto& e : g.elements) {
        for (int k = 0; k <= 7; ++k) {
            long tr = 0;
            int n = ext7::degree_size(k);
            for (int r = 0; r < n; ++r) {
                unsigned m = ext7::mask_of_rank(k, r);
                // Pullback maps dx^i to sign[i] dx^{perm[i]}; the monomial
                // contributes to the trace only when its index set is fixed.
                // The coefficient is (prod of signs) * (parity of sorting the
                // permuted index list).
                unsigned img = 0;
                int total = 1;
                std::vector<int> perm_list;
                for (int i = 0; i < 7; ++i)
                    if (m & (1u << i)) {
                        img |= 1u << e.perm[i];
                        total *= e.sign[i];
                        perm_list.push_back(e.perm[i]);
                    }
                if (img != m) continue;
                for (size_t a = 0; a < perm_list.size(); ++a)
                    for (size_t b = a + 1; b < perm_list.size(); ++b)
                        if (perm_list[a] > perm_list[b]) total = -total;
                tr += total;
            }
            sums[k] += tr;
        }
    }
    std::array<long, 8> out{};
    for (int k = 0; k <= 7; ++k) {
        if (sums[k] % g.order() != 0)
            throw std::logic_error("Burnside average is not an integer");
        out[k] = sums[k] / g.order();
    }
    return out;
}

std::vector<unsigned> invariant_monomials(const OrbifoldGroup& g, int degree) {
    std::vector<unsigned> out;
    int n = ext7::degree_size(degree);
    for (int r = 0; r < n; ++r) {
        unsigned m = ext7::mask_of_rank(degree, r);
        FormQ mono = basis_form<Rat>(m);
        bool fixed = true;
        for (const auto& e : g.elements) {
            if (pullback(e.linear_matrix(), mono) == mono) continue;
            fixed = false;
            break;
        }
        if (fixed) out.push_back(m);
    }
    return out;
}

std::pair<long, long> resolution_betti(const OrbifoldReport& report, long delta_b2,
                                       long delta_b3) {
    long n = static_cast<long>(report.singular.size());
    return {report.invariant_betti[2] + n * delta_b2, report.invariant_betti[3] + n * delta_b3};
}

OrbifoldReport analyze(const OrbifoldGroup& g) {
    OrbifoldReport rep;
    rep.order = g.order();
    std::vector<std::pair<std::string, std::vector<FixedComponent>>> loci;
    for (const auto& e : g.elements) {
        if (e.is_identity()) continue;
        auto fc = fixed_locus(e);
        rep.fixed_counts.emplace_back(e.label, static_cast<int>(fc.size()));
        loci.emplace_back(e.label, std::move(fc));
    }
    for (size_t i = 0; i < loci.size() && rep.all_fixed_disjoint; ++i)
        for (size_t j = i + 1; j < loci.size() && rep.all_fixed_disjoint; ++j)
            for (const auto& a : loci[i].second)
                for (const auto& b : loci[j].second)
                    if (!components_disjoint(a, b)) {
                        rep.all_fixed_disjoint = false;
                        break;
                    }
    rep.singular = singular_locus(g);
    rep.invariant_betti = invariant_betti(g);
    return rep;
}

} // namespace g2::orbifold
