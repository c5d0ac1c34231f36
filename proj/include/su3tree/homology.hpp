#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "su3tree/quotient.hpp"

namespace su3tree {

using BigInt = boost::multiprecision::cpp_int;

// Smith normal form of an integer matrix (rows = relations over the column
// generators).  `divisors` lists the nontrivial diagonal entries d1 | d2 | ...
// and `rank` counts all nonzero diagonal entries, so the presented abelian
// group is Z^(cols - rank) + sum Z/d_i.
struct SmithResult {
    std::vector<BigInt> divisors;
    size_t rank = 0;
};
SmithResult smith_normal_form(std::vector<std::vector<BigInt>> m);

// Abelianization of one finite matrix group: commutator subgroup by closure
// of the pair commutators, then a staircase generating set of the abelian
// quotient with its relation rows and a discrete-log table (element key ->
// exponent vector over the staircase generators).
struct FiniteAbelianization {
    std::vector<Mat3> gens;
    std::vector<std::vector<BigInt>> relations;  // square block, one row per generator
    std::vector<long long> dlog(const Mat3& g) const;
    size_t derived_order = 1;

    std::map<std::string, std::vector<long long>> exps_;  // coset key -> exponents
    std::map<std::string, std::string> coset_;             // element key -> coset key
};
FiniteAbelianization abelianize_group(const std::vector<Mat3>& group);

// Graph of groups carried by a quotient window: the stabilizer of each vertex
// orbit as its vertex group, and for each edge orbit the edge group together
// with its two inclusions into the endpoint vertex groups, realized by the
// recorded transporters.  Construction verifies both inclusions elementwise.
struct EdgeGroup {
    size_t child_orbit = 0, parent_orbit = 0;  // inclusion targets
    std::vector<Mat3> gens;                    // stabilizer of the representative ball edge
    std::vector<Mat3> child_images;            // gens inside vertex_groups[child_orbit]
    std::vector<Mat3> parent_images;           // gens inside vertex_groups[parent_orbit]
};
struct GraphOfGroups {
    int radius = 0;
    std::string group;
    std::vector<std::vector<Mat3>> vertex_groups;  // one per vertex orbit
    std::vector<EdgeGroup> edge_groups;            // one per edge orbit
    size_t cycle_rank = 0;
};
GraphOfGroups graph_of_groups(const Ball& ball, const QuotientGraph& qg);

// Abelianized fundamental group of the graph of groups: one generator block
// per vertex-orbit abelianization, one relation per edge-group element
// equating its two endpoint inclusions.  Stable letters of edges outside a
// spanning tree lose their conjugation relations under abelianization and
// contribute exactly cycle_rank free generators.
struct AbelianizationReport {
    int radius = 0;
    std::string group;
    size_t generators = 0;  // torsion-block columns (free letters not included)
    size_t free_rank = 0;   // (generators - matrix rank) + cycle rank
    std::vector<BigInt> torsion;
    long long torsion_p_rank(long long p) const;
};
AbelianizationReport abelianization(const GraphOfGroups& gog);
AbelianizationReport abelianization(const Ball& ball, const QuotientGraph& qg);

// The same torsion measured on the cusps alone (no presentation): for each
// certified ray the deepest stabilizer S is a p-group of unipotents fixing a
// common boundary point; its commutator subgroup is the additive span of the
// pair-commutator values u(0, x yb - xb y), so the abelianization is
// elementary of rank log_p|S| - dim span.  Throws domain_error when a deep
// ray stabilizer is not unipotent (p'-torsion present).
struct CuspTorsionReport {
    std::vector<long long> per_ray;
    long long total = 0;
};
CuspTorsionReport cusp_torsion_rank(const QuotientGraph& qg);

// Window consistency of the homology picture.  steinberg_rank = l1 - l0 from
// the euler report; h1_rel_rank is computed independently as the rank of
// H1(window graph, unstable subgraph) via the Smith form of the relative
// boundary matrix, and equals -chi exactly when H0 of the pair vanishes.
// `consistency` conjoins: chi valid, steinberg_rank = h1_rel_rank = -chi,
// H0(rel) = 0, abelianization free rank = cycle rank and <= -chi, torsion
// divisors all p-powers with p-rank equal to the cusp filtration total.
// Stabilization of the euler report in R is the caller's precondition.
struct RelHomReport {
    long long chi = 0;
    long long steinberg_rank = 0;
    long long h1_rel_rank = 0;
    bool consistency = false;

    size_t ab_free_rank = 0;
    size_t cycle_rank = 0;
    long long ab_p_rank = 0;
    long long cusp_p_rank = 0;
};
RelHomReport relhom_report(const Ball& ball, const QuotientGraph& qg, const EulerReport& er);

}  // namespace su3tree
