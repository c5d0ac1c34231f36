#pragma once

#include <map>
#include <optional>
#include <vector>

#include "su3tree/boundary.hpp"
#include "su3tree/ideal.hpp"
#include "su3tree/lattice.hpp"
#include "su3tree/unitary.hpp"

namespace su3tree {

// The arithmetic group Gamma = G(A) (unitary matrices over B with det 1) or
// a principal congruence subgroup Gamma_J = ker(Gamma -> SL_3(B/J)).  The
// level ideal must be conjugation-stable so that the subgroup is normal.
struct SubgroupSpec {
    const ExtensionContext* ext = nullptr;
    std::optional<BIdeal> level;

    static SubgroupSpec full(const ExtensionContext& e) { return SubgroupSpec{&e, std::nullopt}; }
    static SubgroupSpec congruence(const ExtensionContext& e, BIdeal J);

    bool is_member(const Mat3& g) const;
    std::string name() const;
};

// All group members gamma with val_Q(gamma_ij) >= -2*degbound for every
// entry (pole order at the ramified place at most 2*degbound).  Column-staged
// search: the hermitian relations between already-chosen columns are linear,
// so each stage enumerates an affine subspace and filters the one quadratic
// condition.  Throws window_error when the staged search exceeds work_cap
// candidates in any single stage.
std::vector<Mat3> enumerate_members(const SubgroupSpec& spec, int degbound,
                                    long long work_cap = 50'000'000);

// Elements of the subgroup mapping vertex `from` to vertex `to`.  The search
// window is exact: any transporter satisfies the per-entry valuation bounds
// derived from the two canonical bases, so the returned list is complete.
std::vector<Mat3> transporter_set(const SubgroupSpec& spec, const LocalContext& model,
                                  const TreeVertex& from, const TreeVertex& to,
                                  long long work_cap = 50'000'000);
std::vector<Mat3> vertex_stabilizer(const SubgroupSpec& spec, const LocalContext& model,
                                    const TreeVertex& v, long long work_cap = 50'000'000);
std::optional<Mat3> find_transporter(const SubgroupSpec& spec, const LocalContext& model,
                                     const TreeVertex& from, const TreeVertex& to,
                                     long long work_cap = 50'000'000);
// Stabilizer of the (unordered) edge {v, w}: fixes both endpoints.
std::vector<Mat3> edge_stabilizer(const SubgroupSpec& spec, const LocalContext& model,
                                  const TreeVertex& v, const TreeVertex& w,
                                  long long work_cap = 50'000'000);

// Census of the finite-order group elements in the pole-order window, with
// multiplicative orders.  Window elements of order > order_cap (including
// elements of infinite order, present once degbound >= 1) are excluded.
struct CensusReport {
    int degbound = 0;
    std::vector<Mat3> elements;
    std::map<long, long> order_histogram;
};
CensusReport finite_order_census(const SubgroupSpec& spec, int degbound, long order_cap = 64,
                                 long long work_cap = 50'000'000);

// g with g * infinity = xi on the boundary; identity for xi = infinity.
Mat3 boundary_conjugator(const BoundaryPoint& xi);

// For g in the stabilizer of xi whose conjugate m = c^{-1} g c (c the
// conjugator above) is unipotent upper triangular, extract (x, y) with
// m = u_a(x, y).  Throws domain_error otherwise.
std::pair<EllElem, EllElem> unipotent_pair(const BoundaryPoint& xi, const Mat3& g);

// Elements of the unipotent radical of the stabilizer of xi in the subgroup,
// inside a degree window on the u_a-coordinates.  For xi = infinity the
// parametrization is exact and linear: x in B, y = -N(x)/2 + z*omega, z in A.
// For general xi the candidate coordinates acquire the bounded denominator
// of the conjugation and are filtered by membership.
struct CuspFiltration {
    BoundaryPoint xi;
    std::vector<Mat3> elements;                       // includes the identity
    std::vector<std::pair<EllElem, EllElem>> pairs;   // u_a coordinates, aligned
    std::vector<EllElem> u_coords;                    // distinct x values observed
};
CuspFiltration cusp_filtration(const SubgroupSpec& spec, const BoundaryPoint& xi, int degbound);

}  // namespace su3tree
