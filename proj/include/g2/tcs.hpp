#pragma once

// Twisted-connected-sum bookkeeping: building-block catalog, the Betti sum
// formula, the fundamental-group flag, and exact verification that the
// gluing map preserves the cylindrical G2-form on a flat model.
//
// Neck coordinates: (t, theta, theta~) = axes 1, 2, 3; the flat T^4 stand-in
// for the K3 cross-section occupies axes 4..7.

#include "g2/forms.hpp"
#include "g2/k3_lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace g2::tcs {

enum class BlockKind { FanoType, InvolutionType, Reference };

struct BuildingBlock {
    std::string name;
    std::optional<long> b2_bar;
    std::optional<long> b3_bar;
    long d = 0; // dim ker(iota*) on H^2; supplied, not computed
    std::optional<k3::Polarization> polarization;
    bool simply_connected = false;
    BlockKind kind = BlockKind::FanoType;

    void validate() const;
};

struct Catalog {
    std::vector<BuildingBlock> blocks;
    const BuildingBlock& lookup(const std::string& name) const;
    bool contains(const std::string& name) const;
};

enum class Pi1 { SimplyConnected, Finite };

struct TCSReport {
    long betti_sum = 0; // b2 + b3 of the glued manifold
    std::optional<long> b3_if_b2_known;
    Pi1 pi1 = Pi1::Finite;
};

// b3(W1) + b3(W2) + 2 d1 + 2 d2 + 23.
long betti_sum(const BuildingBlock& b1, const BuildingBlock& b2);

// Report with the sum, the pi1 flag, and b3 filled in when the caller
// asserts b2 of the glued manifold.
TCSReport tcs_report(const BuildingBlock& b1, const BuildingBlock& b2,
                     std::optional<long> asserted_b2 = std::nullopt);

Pi1 pi1_flag(const BuildingBlock& b1, const BuildingBlock& b2);

Catalog builtin_catalog();

// Constant hyper-Kahler triple on the flat T^4 stand-in.
struct NeckModel {
    FormQ kappaI, kappaJ, kappaK; // degree-2, supported on axes 4..7
    void validate() const;        // kJ^kK = 0, kJ^2 = kK^2 = kI^2, all on axes 4..7
};

NeckModel standard_neck_model();

// Donaldson rotation at form level: (kI, kJ, kK) -> (kJ, kI, -kK).
NeckModel rotate_model(const NeckModel& m);

// phi_inf = dt^dtheta^dtheta~ + dtheta~^kI + dtheta^kJ + dt^kK, a positive
// 3-form whenever the model triple is valid.
FormQ neck_form(const NeckModel& m);

// Linear shadow of the gluing map: t -> -t, theta <-> theta~, identity on
// the T^4 factor.
Mat7<Rat> gluing_map();

// F^* neck_form(model2) - neck_form(model1); exactly zero when model2 is the
// rotation image of model1.
FormQ gluing_pullback_check(const NeckModel& model1, const NeckModel& model2);

// phi = dx^1 ^ omega + re_omega3 on axes 2..7; throws when the assembly is
// not positive.
FormQ su3_product_form(const FormQ& omega, const FormQ& re_omega3);

// Flat model inputs for su3_product_form (Kahler form and Re of the standard
// (3,0)-form on axes 2..7).
FormQ standard_su3_omega();
FormQ standard_su3_re_omega3();

} // namespace g2::tcs
