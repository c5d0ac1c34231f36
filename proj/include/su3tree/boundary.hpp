#pragma once

#include <string>
#include <vector>

#include "su3tree/unitary.hpp"

namespace su3tree {

// A rational boundary point of the tree: either the point at infinity or a
// point labelled by an H-pair (u, v) with N(u) + T(v) = 0.  Labels are in
// bijection with isotropic lines of h in ell^3: infinity corresponds to
// span(e_1) and (u, v) to span(-conj(v), u, -1).
struct BoundaryPoint {
    bool infinity = true;
    EllElem u, v;
    const ExtensionContext* ext = nullptr;

    static BoundaryPoint inf(const ExtensionContext& ext);
    static BoundaryPoint at(const EllElem& u, const EllElem& v);  // checks the pair condition

    std::string to_string() const;

    friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b);
    friend bool operator!=(const BoundaryPoint& a, const BoundaryPoint& b) { return !(a == b); }
};

// Representative vector of the isotropic line of xi.
Vec3 isotropic_line(const BoundaryPoint& xi);

// Canonical line representative: scaled so the first nonzero coordinate is 1.
Vec3 line_normalize(const Vec3& w);

// Boundary point of a nonzero isotropic vector (throws if not isotropic).
BoundaryPoint line_boundary(const Vec3& w);

// Action of g on the boundary, two independent routes (kept separate as a
// cross-check): via the Bruhat decomposition of g * g_{u,v}^{-1}, and via
// the line correspondence.
BoundaryPoint act_boundary(const Mat3& g, const BoundaryPoint& xi);
BoundaryPoint act_boundary_line(const Mat3& g, const BoundaryPoint& xi);

// The fixed boundary point of a group of unitary matrices whose nontrivial
// elements are unipotent (a p-subgroup of an arithmetic subgroup): computes
// the common fixed space F over ell, finds an isotropic vector in it, and
// returns its boundary point.  For genuine p-subgroups the point is unique;
// uniqueness is certified by scan tests, not here.  Identity elements are
// ignored; the set must contain a non-identity element.  Throws
// domain_error when no common fixed vector or no isotropic vector exists
// over ell (precondition violation; no field extension is attempted).
BoundaryPoint fixed_boundary_point(const std::vector<Mat3>& elements);

}  // namespace su3tree
