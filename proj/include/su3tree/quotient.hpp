#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "su3tree/arith.hpp"
#include "su3tree/ideal.hpp"
#include "su3tree/lattice.hpp"

namespace su3tree {

using Rational = boost::multiprecision::cpp_rational;

// Canonical entrywise residue of a matrix over B modulo the level.
Mat3 residue_matrix(const BIdeal& level, const Mat3& g);

// Multiplicative closure of residue matrices in the finite ring B/level;
// returns the closure (distinct residues).  Because the target group is
// finite, closure under products alone already yields a group.  Throws
// window_error past cap.
std::vector<Mat3> residue_closure(const BIdeal& level, const std::vector<Mat3>& gens,
                                  size_t cap = 1'000'000);

// One orbit of ball vertices, carried by its BFS-least representative (which
// therefore realizes the minimal depth of the orbit).
struct OrbitVertex {
    size_t rep = 0;       // ball index of the representative
    int depth = 0;        // ball depth of the representative
    int max_depth = 0;    // deepest member (== radius means boundary contact)
    int parity = 0;
    long long stab_order = 1;
    std::vector<Mat3> stabilizer;  // of the representative vertex
    std::vector<size_t> members;   // ball indices, increasing
    bool stable = false;           // trivial stabilizer
};

// One orbit of ball edges.  The action preserves the bipartition, so edge
// endpoints never swap and orientation is canonical: from = parity-0 class.
struct OrbitEdge {
    size_t from = 0, to = 0;  // indices into QuotientGraph::verts
    size_t rep_child = 0;     // representative ball edge (parent[rep_child], rep_child)
    long long stab_order = 1;
    std::vector<Mat3> stabilizer;  // of the representative edge (pointwise = setwise)
    std::vector<size_t> members;   // ball child indices, increasing
    bool stable = false;
};

struct QuotientGraph {
    int radius = 0;
    std::string group;
    std::vector<OrbitVertex> verts;
    std::vector<OrbitEdge> edges;
    std::vector<size_t> orbit_of;       // per ball vertex
    std::vector<Mat3> to_rep;           // gamma with gamma * (ball vertex) = representative
    std::vector<size_t> edge_orbit_of;  // per ball child index; entry 0 = SIZE_MAX
    std::vector<Mat3> edge_to_rep;      // gamma mapping the ball edge onto the representative edge
    size_t cycle_rank() const;          // first Betti number of the window graph
};

// Orbit decomposition of the ball under the subgroup.  For a congruence
// level the full-group quotient is computed first and refined through the
// residue map (no further window searches).
QuotientGraph quotient_ball(const SubgroupSpec& spec, const LocalContext& model, const Ball& ball,
                            long long work_cap = 50'000'000);

// Refinement of a full-group quotient to a congruence subgroup of it via
// canonical residue tags; exposed so callers can reuse one full quotient
// across several levels.
QuotientGraph refine_congruence(const SubgroupSpec& spec, const Ball& ball,
                                const QuotientGraph& full);

// Outward path of orbits whose stabilizer orders grow strictly; certified
// when the strict growth spans at least 3 orbits and the path reaches the
// ball boundary.
struct CuspRay {
    std::vector<size_t> orbits;      // innermost onset first
    std::vector<long long> profile;  // stabilizer orders along the path
    bool certified = false;
};

std::vector<CuspRay> detect_cusp_rays(const QuotientGraph& qg);

// Connected components of the unstable (nontrivial-stabilizer) subgraph.
std::vector<std::vector<size_t>> unstable_components(const QuotientGraph& qg);

struct EulerReport {
    int radius = 0;
    std::string group;
    long long l0 = 0;           // stable vertex orbits
    long long l1 = 0;           // stable edge orbits
    long long chi = 0;          // l0 - l1, meaningful iff chi_valid
    bool chi_valid = false;     // no p'-torsion observed (congruence or certified override)
    Rational eq1_partial;       // sum 1/|Stab_v| - sum 1/|Stab_e| over the window
    Rational residual;          // eq1_partial - (l0 - l1)
    bool residual_outer_only = false;  // residual equals the boundary unstable vertex sum
    bool matched_pairs = false;        // interior unstable vertices pair with outward edges
    bool counts_stable = false;        // l0, l1 agree between radius-1 and radius
};

// Stabilizer-order bookkeeping of the quotient at radii R-1 and R.  For a
// subgroup with p'-torsion the l0 - l1 reading of chi is refused unless
// allow_pprime_override is set, and the override itself is refused when
// p'-torsion is actually observed among the stabilizers (then only
// eq1_partial would be meaningful, and the caller must not ask for chi).
EulerReport euler_report(const SubgroupSpec& spec, const LocalContext& model, int R,
                         long long work_cap = 50'000'000, bool allow_pprime_override = false);

// Same computation on preassembled quotients (qg_prev at R-1, qg at R).
EulerReport euler_from(const QuotientGraph& qg_prev, const QuotientGraph& qg,
                       const Ball& ball, int p, bool allow_pprime_override = false);

}  // namespace su3tree
