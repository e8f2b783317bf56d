#include "g2/tcs.hpp"

#include <algorithm>
#include <stdexcept>

namespace g2::tcs {

void BuildingBlock::validate() const {
    if (name.empty()) throw std::invalid_argument("building block needs a name");
    if (b2_bar && *b2_bar < 0) throw std::invalid_argument(name + ": b2 must be nonnegative");
    if (b3_bar && *b3_bar < 0) throw std::invalid_argument(name + ": b3 must be nonnegative");
    if (d < 0) throw std::invalid_argument(name + ": kernel dimension must be nonnegative");
    if (b2_bar && d > *b2_bar)
        throw std::invalid_argument(name + ": kernel dimension exceeds b2");
    if (polarization) polarization->validate(k3::k3_lattice());
}

const BuildingBlock& Catalog::lookup(const std::string& name) const {
    for (const auto& b : blocks)
        if (b.name == name) return b;
    throw std::invalid_argument("unknown building block '" + name + "'");
}

bool Catalog::contains(const std::string& name) const {
    return std::any_of(blocks.begin(), blocks.end(),
                       [&](const BuildingBlock& b) { return b.name == name; });
}

long betti_sum(const BuildingBlock& b1, const BuildingBlock& b2) {
    if (!b1.b3_bar || !b2.b3_bar)
        throw std::invalid_argument("betti_sum needs b3 of both blocks");
    return *b1.b3_bar + *b2.b3_bar + 2 * b1.d + 2 * b2.d + 23;
}

Pi1 pi1_flag(const BuildingBlock& b1, const BuildingBlock& b2) {
    return (b1.simply_connected && b2.simply_connected) ? Pi1::SimplyConnected : Pi1::Finite;
}

TCSReport tcs_report(const BuildingBlock& b1, const BuildingBlock& b2,
                     std::optional<long> asserted_b2) {
    TCSReport rep;
    rep.betti_sum = betti_sum(b1, b2);
    if (rep.betti_sum < 23) throw std::logic_error("betti sum below the formula floor");
    if (asserted_b2) {
        if (*asserted_b2 < 0 || *asserted_b2 > rep.betti_sum)
            throw std::invalid_argument("asserted b2 out of range");
        rep.b3_if_b2_known = rep.betti_sum - *asserted_b2;
    }
    rep.pi1 = pi1_flag(b1, b2);
    return rep;
}

Catalog builtin_catalog() {
    Catalog cat;
    {
        // Blow-up of the intersection of three quadrics in P^6 along a second
        // anticanonical hyperplane section; octic K3 cross-section.
        BuildingBlock b;
        b.name = "x8-blowup";
        b.b2_bar = 2;
        b.b3_bar = 38;
        b.d = 0;
        b.simply_connected = true;
        b.kind = BlockKind::FanoType;
        k3::Polarization pol;
        pol.n.rank = 1;
        pol.n.gram = {{8}};
        pol.embedding = {k3::hyperbolic_vector(0, 1, 4)};
        b.polarization = pol;
        cat.blocks.push_back(std::move(b));
    }
    {
        // Intersection of a quadric and a cubic; degree-6 polarization, other
        // invariants not recorded here.
        BuildingBlock b;
        b.name = "x6";
        b.d = 0;
        b.simply_connected = true;
        b.kind = BlockKind::FanoType;
        k3::Polarization pol;
        pol.n.rank = 1;
        pol.n.gram = {{6}};
        pol.embedding = {k3::hyperbolic_vector(0, 1, 3)};
        b.polarization = pol;
        cat.blocks.push_back(std::move(b));
    }
    {
        // Reference record: the resolution-construction example with b2 = 0
        // has b3 = 215; the connected-sum b2 = 0 examples sit far below it.
        BuildingBlock b;
        b.name = "joyce-b2-0-comparison";
        b.b2_bar = 0;
        b.b3_bar = 215;
        b.d = 0;
        b.simply_connected = true;
        b.kind = BlockKind::Reference;
        cat.blocks.push_back(std::move(b));
    }
    for (const auto& b : cat.blocks) b.validate();
    return cat;
}

void NeckModel::validate() const {
    if (kappaI.degree != 2 || kappaJ.degree != 2 || kappaK.degree != 2)
        throw std::invalid_argument("neck model needs degree-2 forms");
    unsigned t4 = 0b1111000; // axes 4..7
    for (const FormQ* f : {&kappaI, &kappaJ, &kappaK})
        for (int r = 0; r < ext7::degree_size(2); ++r)
            if (sgn((*f)[r]) != 0 && (ext7::mask_of_rank(2, r) & ~t4))
                throw std::invalid_argument("neck triple must be supported on axes 4..7");
    if (!wedge(kappaJ, kappaK).is_zero())
        throw std::invalid_argument("neck triple needs kJ ^ kK = 0");
    FormQ jj = wedge(kappaJ, kappaJ), kk = wedge(kappaK, kappaK), ii = wedge(kappaI, kappaI);
    if (!(jj == kk) || !(ii == jj))
        throw std::invalid_argument("neck triple needs kI^2 = kJ^2 = kK^2");
    if (ii.is_zero()) throw std::invalid_argument("neck triple is degenerate");
}

NeckModel standard_neck_model() {
    NeckModel m;
    m.kappaI = dx<Rat>({4, 5}) + dx<Rat>({6, 7});
    m.kappaJ = dx<Rat>({4, 6}) - dx<Rat>({5, 7});
    m.kappaK = dx<Rat>({4, 7}) + dx<Rat>({5, 6});
    return m;
}

NeckModel rotate_model(const NeckModel& m) {
    NeckModel r;
    r.kappaI = m.kappaJ;
    r.kappaJ = m.kappaI;
    r.kappaK = -m.kappaK;
    return r;
}

namespace {

// Assembly without the positivity gate; the deliberate-violation path of the
// gluing check feeds orientation-reversed triples through it.
FormQ assemble_neck_form(const NeckModel& m) {
    m.validate();
    FormQ phi = dx<Rat>({1, 2, 3});
    phi += wedge(dx<Rat>({3}), m.kappaI);
    phi += wedge(dx<Rat>({2}), m.kappaJ);
    phi += wedge(dx<Rat>({1}), m.kappaK);
    return phi;
}

} // namespace

FormQ neck_form(const NeckModel& m) {
    FormQ phi = assemble_neck_form(m);
    if (!is_positive(phi)) throw std::invalid_argument("neck form is not positive");
    return phi;
}

Mat7<Rat> gluing_map() {
    Mat7<Rat> f = mat7_zero<Rat>();
    at(f, 0, 0) = Rat(-1);
    at(f, 1, 2) = Rat(1);
    at(f, 2, 1) = Rat(1);
    for (int i = 3; i < 7; ++i) at(f, i, i) = Rat(1);
    return f;
}

FormQ gluing_pullback_check(const NeckModel& model1, const NeckModel& model2) {
    return pullback(gluing_map(), assemble_neck_form(model2)) - assemble_neck_form(model1);
}

FormQ su3_product_form(const FormQ& omega, const FormQ& re_omega3) {
    if (omega.degree != 2 || re_omega3.degree != 3)
        throw std::invalid_argument("su3 product needs a 2-form and a 3-form");
    unsigned axes27 = 0b1111110; // axes 2..7
    for (int r = 0; r < ext7::degree_size(2); ++r)
        if (sgn(omega[r]) != 0 && (ext7::mask_of_rank(2, r) & ~axes27))
            throw std::invalid_argument("omega must be supported on axes 2..7");
    for (int r = 0; r < ext7::degree_size(3); ++r)
        if (sgn(re_omega3[r]) != 0 && (ext7::mask_of_rank(3, r) & ~axes27))
            throw std::invalid_argument("re_omega3 must be supported on axes 2..7");
    FormQ phi = wedge(dx<Rat>({1}), omega) + re_omega3;
    if (!is_positive(phi))
        throw PositivityError("su3 assembly is not a positive 3-form");
    return phi;
}

FormQ standard_su3_omega() {
    return dx<Rat>({2, 3}) + dx<Rat>({4, 5}) + dx<Rat>({6, 7});
}

FormQ standard_su3_re_omega3() {
    return dx<Rat>({2, 4, 6}) - dx<Rat>({2, 5, 7}) - dx<Rat>({3, 4, 7}) - dx<Rat>({3, 5, 6});
}

} // namespace g2::tcs
