#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "su3tree/arith.hpp"
#include "su3tree/errors.hpp"
#include "su3tree/homology.hpp"
#include "su3tree/quotient.hpp"
#include "testutil.hpp"

using namespace su3tree;
using namespace su3tree::testutil;

namespace {

const FqContext F3(3, 1);
const ExtensionContext EXT(F3, Poly::t(F3));  // D = t
const LocalContext MODEL(EXT, 96);

using Mat = std::vector<std::vector<BigInt>>;

std::vector<BigInt> divisors_of(const Mat& m) { return smith_normal_form(m).divisors; }

std::vector<BigInt> threes(size_t n) { return std::vector<BigInt>(n, BigInt(3)); }

std::set<std::string> key_set(const std::vector<Mat3>& v) {
    std::set<std::string> s;
    for (const Mat3& g : v) s.insert(g.to_string());
    return s;
}

}  // namespace

TEST_CASE("smith normal form on pinned matrices") {
    SUBCASE("generic 2x2") {
        SmithResult s = smith_normal_form(Mat{{2, 4}, {6, 8}});  // det -8, entry gcd 2
        CHECK(s.rank == 2);
        CHECK(s.divisors == std::vector<BigInt>{2, 4});
    }
    SUBCASE("identity and zero") {
        SmithResult id = smith_normal_form(Mat{{1, 0}, {0, 1}});
        CHECK(id.rank == 2);
        CHECK(id.divisors.empty());
        SmithResult z = smith_normal_form(Mat{{0, 0}, {0, 0}});
        CHECK(z.rank == 0);
        CHECK(z.divisors.empty());
    }
    SUBCASE("diagonal inputs are rechained") {
        CHECK(divisors_of({{6}}) == std::vector<BigInt>{6});
        CHECK(divisors_of({{2, 0}, {0, 3}}) == std::vector<BigInt>{6});
        CHECK(divisors_of({{4, 0}, {0, 6}}) == std::vector<BigInt>{2, 12});
    }
    SUBCASE("rectangular") {
        // entry gcd 2; gcd of the 2x2 minors 12
        Mat m{{2, 4, 4}, {-6, 6, 12}};
        SmithResult s = smith_normal_form(m);
        CHECK(s.rank == 2);
        CHECK(s.divisors == std::vector<BigInt>{2, 6});
        Mat mt{{2, -6}, {4, 6}, {4, 12}};
        SmithResult st = smith_normal_form(mt);
        CHECK(st.rank == 2);
        CHECK(st.divisors == std::vector<BigInt>{2, 6});
    }
}

TEST_CASE("smith normal form is invariant under the unimodular moves it claims") {
    std::mt19937 gen(20260814u);
    auto ri = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(gen);
    };
    for (int trial = 0; trial < 60; ++trial) {
        size_t R = size_t(ri(1, 4)), C = size_t(ri(1, 4));
        Mat m(R, std::vector<BigInt>(C));
        for (auto& row : m)
            for (auto& x : row) x = ri(-9, 9);
        SmithResult base = smith_normal_form(m);

        // divisibility chain
        for (size_t i = 0; i + 1 < base.divisors.size(); ++i)
            CHECK(base.divisors[i + 1] % base.divisors[i] == 0);
        CHECK(base.rank <= std::min(R, C));

        Mat shuffled = m;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        std::vector<size_t> perm(C);
        std::iota(perm.begin(), perm.end(), size_t{0});
        std::shuffle(perm.begin(), perm.end(), gen);
        for (auto& row : shuffled) {
            std::vector<BigInt> r(C);
            for (size_t j = 0; j < C; ++j) r[j] = row[perm[j]];
            row = std::move(r);
        }
        for (auto& row : shuffled)
            if (ri(0, 1)) {
                for (auto& x : row) x = -x;
            }
        SmithResult moved = smith_normal_form(shuffled);
        CHECK(moved.rank == base.rank);
        CHECK(moved.divisors == base.divisors);

        Mat trans(C, std::vector<BigInt>(R));
        for (size_t i = 0; i < R; ++i)
            for (size_t j = 0; j < C; ++j) trans[j][i] = m[i][j];
        SmithResult t = smith_normal_form(trans);
        CHECK(t.rank == base.rank);
        CHECK(t.divisors == base.divisors);
    }
}

TEST_CASE("finite stabilizer abelianizations match their group structure") {
    Ball b4 = build_ball(MODEL, 4);
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GW = SubgroupSpec::congruence(EXT, principal_ideal(EXT.omega()));
    QuotientGraph qw = refine_congruence(GW, b4, quotient_ball(G, MODEL, b4));

    // deepest ray stabilizer: order-81 unipotent group with center of order
    // 3 as derived subgroup, abelianization (Z/3)^3
    const OrbitVertex* deep = nullptr;
    for (const auto& v : qw.verts)
        if (v.stab_order == 81) deep = &v;
    REQUIRE(deep != nullptr);
    FiniteAbelianization fa = abelianize_group(deep->stabilizer);
    CHECK(fa.derived_order == 3);
    CHECK(fa.gens.size() == 3);
    CHECK(divisors_of(fa.relations) == threes(3));

    // discrete logs: identity at zero, generators at unit vectors, and the
    // relation lattice is 3Z^3, so logs add componentwise mod 3
    Mat3 id = Mat3::identity(EXT);
    for (long long e : fa.dlog(id)) CHECK(e == 0);
    for (size_t i = 0; i < fa.gens.size(); ++i) {
        auto e = fa.dlog(fa.gens[i]);
        for (size_t j = 0; j < e.size(); ++j) CHECK(e[j] == (i == j ? 1 : 0));
    }
    for (int trial = 0; trial < 20; ++trial) {
        const Mat3& x = deep->stabilizer[size_t(rint(0, 80))];
        const Mat3& y = deep->stabilizer[size_t(rint(0, 80))];
        auto ex = fa.dlog(x), ey = fa.dlog(y), exy = fa.dlog(x * y);
        for (size_t j = 0; j < exy.size(); ++j)
            CHECK(exy[j] % 3 == (ex[j] + ey[j]) % 3);
    }

    // base stabilizer of the full group: order 24, derived subgroup of order
    // 12, abelianization Z/2
    std::vector<Mat3> s24 = vertex_stabilizer(G, MODEL, b4.verts[0]);
    REQUIRE(s24.size() == 24);
    FiniteAbelianization f24 = abelianize_group(s24);
    CHECK(f24.derived_order == 12);
    CHECK(divisors_of(f24.relations) == std::vector<BigInt>{2});

    // elements outside the group are refused
    CHECK_THROWS_AS((void)fa.dlog(s24[1]), domain_error);
}

TEST_CASE("graph of groups: verified inclusions, ray edges equal their inner group") {
    Ball b4 = build_ball(MODEL, 4);
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GW = SubgroupSpec::congruence(EXT, principal_ideal(EXT.omega()));
    QuotientGraph qw = refine_congruence(GW, b4, quotient_ball(G, MODEL, b4));
    GraphOfGroups gog = graph_of_groups(b4, qw);  // construction verifies inclusions

    REQUIRE(gog.vertex_groups.size() == qw.verts.size());
    REQUIRE(gog.edge_groups.size() == qw.edges.size());
    CHECK(gog.cycle_rank == 0);
    for (const EdgeGroup& eg : gog.edge_groups) {
        CHECK(gog.vertex_groups[eg.child_orbit].size() % eg.gens.size() == 0);
        CHECK(gog.vertex_groups[eg.parent_orbit].size() % eg.gens.size() == 0);
        CHECK(eg.child_images.size() == eg.gens.size());
        CHECK(eg.parent_images.size() == eg.gens.size());
    }

    // on a cusp ray the edge group is the full inner (closer-to-core) vertex
    // group; the parent side is inner because depth grows along the ray
    std::set<std::pair<size_t, size_t>> ray_pairs;
    for (const CuspRay& ray : detect_cusp_rays(qw)) {
        if (!ray.certified) continue;
        for (size_t i = 0; i + 1 < ray.orbits.size(); ++i)
            ray_pairs.emplace(ray.orbits[i], ray.orbits[i + 1]);
    }
    REQUIRE(ray_pairs.size() >= 12);  // four rays, three or more edges each
    size_t seen = 0;
    for (const EdgeGroup& eg : gog.edge_groups) {
        if (!ray_pairs.count({eg.parent_orbit, eg.child_orbit})) continue;
        ++seen;
        CHECK(key_set(eg.parent_images) == key_set(gog.vertex_groups[eg.parent_orbit]));
    }
    CHECK(seen == ray_pairs.size());
}

TEST_CASE("free-action window: trivial groups, nothing to present") {
    Ball b2 = build_ball(MODEL, 2);
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GT = SubgroupSpec::congruence(EXT, principal_ideal(EXT.t()));
    QuotientGraph qt = refine_congruence(GT, b2, quotient_ball(G, MODEL, b2));

    for (const auto& v : qt.verts) CHECK(v.stab_order == 1);
    for (const auto& e : qt.edges) CHECK(e.stab_order == 1);
    GraphOfGroups gog = graph_of_groups(b2, qt);
    AbelianizationReport a = abelianization(gog);
    CHECK(a.generators == 0);
    CHECK(a.free_rank == qt.cycle_rank());
    CHECK(a.torsion.empty());
}

TEST_CASE("window abelianization against the cusp filtration, two routes") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GW = SubgroupSpec::congruence(EXT, principal_ideal(EXT.omega()));
    SubgroupSpec GT = SubgroupSpec::congruence(EXT, principal_ideal(EXT.t()));
    Ball b3 = build_ball(MODEL, 3);
    Ball b4 = build_ball(MODEL, 4);
    Ball b5 = build_ball(MODEL, 5);
    QuotientGraph f3 = quotient_ball(G, MODEL, b3);
    QuotientGraph f4 = quotient_ball(G, MODEL, b4);
    QuotientGraph f5 = quotient_ball(G, MODEL, b5);

    SUBCASE("ramified level, growing windows") {
        QuotientGraph w4 = refine_congruence(GW, b4, f4);
        QuotientGraph w5 = refine_congruence(GW, b5, f5);
        AbelianizationReport a4 = abelianization(b4, w4);
        AbelianizationReport a5 = abelianization(b5, w5);
        CuspTorsionReport c4 = cusp_torsion_rank(w4);
        CuspTorsionReport c5 = cusp_torsion_rank(w5);

        CHECK(a4.generators == 36);
        CHECK(a4.free_rank == 0);
        CHECK(a4.torsion == threes(12));
        CHECK(c4.per_ray == std::vector<long long>{3, 3, 3, 3});
        CHECK(a4.torsion_p_rank(3) == c4.total);

        CHECK(a5.free_rank == 0);
        CHECK(a5.torsion == threes(16));
        CHECK(c5.per_ray == std::vector<long long>{4, 4, 4, 4});
        CHECK(a5.torsion_p_rank(3) == c5.total);
    }
    SUBCASE("square level: free part carries the cycle rank") {
        QuotientGraph t4 = refine_congruence(GT, b4, f4);
        AbelianizationReport a = abelianization(b4, t4);
        CuspTorsionReport c = cusp_torsion_rank(t4);
        CHECK(a.free_rank == 24);
        CHECK(a.free_rank == t4.cycle_rank());
        CHECK(a.torsion == threes(8));
        CHECK(c.per_ray == std::vector<long long>{2, 2, 2, 2});
        CHECK(a.torsion_p_rank(3) == c.total);
    }
    SUBCASE("full group window: mixed torsion, no free part") {
        AbelianizationReport a = abelianization(b3, f3);
        CHECK(a.generators == 6);
        CHECK(a.free_rank == 0);
        CHECK(a.torsion == std::vector<BigInt>{6});
    }
}

TEST_CASE("relative homology report: boundary rank route agrees with stable counts") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GW = SubgroupSpec::congruence(EXT, principal_ideal(EXT.omega()));
    SubgroupSpec GT = SubgroupSpec::congruence(EXT, principal_ideal(EXT.t()));
    Ball b3 = build_ball(MODEL, 3);
    Ball b4 = build_ball(MODEL, 4);
    Ball b5 = build_ball(MODEL, 5);
    QuotientGraph f3 = quotient_ball(G, MODEL, b3);
    QuotientGraph f4 = quotient_ball(G, MODEL, b4);
    QuotientGraph f5 = quotient_ball(G, MODEL, b5);

    SUBCASE("stabilized ramified window") {
        QuotientGraph w4 = refine_congruence(GW, b4, f4);
        QuotientGraph w5 = refine_congruence(GW, b5, f5);
        EulerReport er = euler_from(w4, w5, b5, 3);
        REQUIRE(er.chi_valid);
        REQUIRE(er.counts_stable);
        RelHomReport r = relhom_report(b5, w5, er);
        CHECK(r.chi == -3);
        CHECK(r.steinberg_rank == 3);
        CHECK(r.h1_rel_rank == 3);
        CHECK(r.ab_free_rank == 0);  // quotient window is a tree: d = 0 with -chi > 0
        CHECK(r.cycle_rank == 0);
        CHECK(r.ab_p_rank == 16);
        CHECK(r.cusp_p_rank == 16);
        CHECK(r.consistency);
    }
    SUBCASE("square level window, not yet stabilized but internally consistent") {
        QuotientGraph t3 = refine_congruence(GT, b3, f3);
        QuotientGraph t4 = refine_congruence(GT, b4, f4);
        EulerReport er = euler_from(t3, t4, b4, 3);
        REQUIRE(er.chi_valid);
        CHECK_FALSE(er.counts_stable);
        RelHomReport r = relhom_report(b4, t4, er);
        CHECK(r.chi == -27);
        CHECK(r.steinberg_rank == 27);
        CHECK(r.h1_rel_rank == 27);
        CHECK(r.ab_free_rank == 24);
        CHECK(r.cycle_rank == 24);
        CHECK(r.ab_free_rank <= size_t(-r.chi));
        CHECK(r.ab_p_rank == 8);
        CHECK(r.cusp_p_rank == 8);
        CHECK(r.consistency);
    }
}

TEST_CASE("reported invariants do not depend on generator order") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GW = SubgroupSpec::congruence(EXT, principal_ideal(EXT.omega()));
    Ball b4 = build_ball(MODEL, 4);
    QuotientGraph qw = refine_congruence(GW, b4, quotient_ball(G, MODEL, b4));
    GraphOfGroups gog = graph_of_groups(b4, qw);
    AbelianizationReport base = abelianization(gog);

    std::mt19937 gen(41u);
    for (int trial = 0; trial < 3; ++trial) {
        GraphOfGroups shuffled = gog;
        for (auto& vg : shuffled.vertex_groups) std::shuffle(vg.begin(), vg.end(), gen);
        for (auto& eg : shuffled.edge_groups) {
            std::vector<size_t> perm(eg.gens.size());
            std::iota(perm.begin(), perm.end(), size_t{0});
            std::shuffle(perm.begin(), perm.end(), gen);
            EdgeGroup moved;
            moved.child_orbit = eg.child_orbit;
            moved.parent_orbit = eg.parent_orbit;
            for (size_t i : perm) {
                moved.gens.push_back(eg.gens[i]);
                moved.child_images.push_back(eg.child_images[i]);
                moved.parent_images.push_back(eg.parent_images[i]);
            }
            eg = std::move(moved);
        }
        std::shuffle(shuffled.edge_groups.begin(), shuffled.edge_groups.end(), gen);
        AbelianizationReport moved = abelianization(shuffled);
        CHECK(moved.generators == base.generators);
        CHECK(moved.free_rank == base.free_rank);
        CHECK(moved.torsion == base.torsion);
    }
}
