#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "su3tree/arith.hpp"
#include "su3tree/errors.hpp"
#include "su3tree/quotient.hpp"
#include "testutil.hpp"

using namespace su3tree;
using namespace su3tree::testutil;

namespace {

const FqContext F3(3, 1);
const ExtensionContext EXT(F3, Poly::t(F3));                          // D = t
const ExtensionContext EXT3(F3, Poly::from_ints(F3, {0, -1, 0, 1}));  // D = t^3 - t
const LocalContext MODEL(EXT, 96);
const LocalContext MODEL3(EXT3, 96);

std::multiset<long long> vstabs(const QuotientGraph& q) {
    std::multiset<long long> s;
    for (const auto& v : q.verts) s.insert(v.stab_order);
    return s;
}

std::multiset<long long> estabs(const QuotientGraph& q) {
    std::multiset<long long> s;
    for (const auto& e : q.edges) s.insert(e.stab_order);
    return s;
}

size_t member_total(const QuotientGraph& q) {
    size_t n = 0;
    for (const auto& v : q.verts) n += v.members.size();
    return n;
}

size_t edge_member_total(const QuotientGraph& q) {
    size_t n = 0;
    for (const auto& e : q.edges) n += e.members.size();
    return n;
}

long long stable_verts(const QuotientGraph& q) {
    long long n = 0;
    for (const auto& v : q.verts) n += v.stable;
    return n;
}

long long stable_edges(const QuotientGraph& q) {
    long long n = 0;
    for (const auto& e : q.edges) n += e.stable;
    return n;
}

int certified_count(const std::vector<CuspRay>& rays) {
    int n = 0;
    for (const auto& r : rays) n += r.certified;
    return n;
}

bool power_of(long long n, long long p) {
    while (n % p == 0) n /= p;
    return n == 1;
}

// elements that fail to fix both endpoints of the representative ball edge
size_t frame_misses(const LocalContext& model, const Ball& ball, const QuotientGraph& q) {
    size_t misses = 0;
    for (const auto& e : q.edges) {
        const TreeVertex& c = ball.verts[e.rep_child];
        const TreeVertex& p = ball.verts[size_t(ball.parent[e.rep_child])];
        for (const Mat3& s : e.stabilizer)
            misses += tree_act(model, s, c).key != c.key || tree_act(model, s, p).key != p.key;
    }
    return misses;
}

}  // namespace

TEST_CASE("full-group quotient of the standard curve is a ray") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    Ball b3 = build_ball(MODEL, 3);
    Ball b4 = build_ball(MODEL, 4);
    QuotientGraph q3 = quotient_ball(G, MODEL, b3);
    QuotientGraph q4 = quotient_ball(G, MODEL, b4);

    // one orbit per depth, stabilizers 24, 18, 54, 162, 486, edges 6, 18, ...
    REQUIRE(q3.verts.size() == 4);
    REQUIRE(q3.edges.size() == 3);
    CHECK(q3.cycle_rank() == 0);
    REQUIRE(q4.verts.size() == 5);
    REQUIRE(q4.edges.size() == 4);
    CHECK(q4.cycle_rank() == 0);

    std::vector<long long> vexp = {24, 18, 54, 162, 486};
    std::vector<long long> eexp = {6, 18, 54, 162};
    for (size_t i = 0; i < q4.verts.size(); ++i) {
        CHECK(q4.verts[i].stab_order == vexp[i]);
        CHECK(q4.verts[i].depth == int(i));
        CHECK(q4.verts[i].parity == int(i % 2));
        CHECK_FALSE(q4.verts[i].stable);
        CHECK(q4.verts[i].stabilizer.size() == size_t(vexp[i]));
    }
    for (size_t i = 0; i < q4.edges.size(); ++i) CHECK(q4.edges[i].stab_order == eexp[i]);

    // every off-ray window vertex folds into one of those orbits
    std::vector<size_t> mexp3 = {9, 36, 4, 4};
    std::vector<size_t> mexp4 = {81, 36, 36, 4, 4};
    for (size_t i = 0; i < 4; ++i) CHECK(q3.verts[i].members.size() == mexp3[i]);
    for (size_t i = 0; i < 5; ++i) CHECK(q4.verts[i].members.size() == mexp4[i]);
    CHECK(member_total(q3) == b3.verts.size());
    CHECK(member_total(q4) == b4.verts.size());
    CHECK(edge_member_total(q4) == b4.verts.size() - 1);  // window is a tree
    CHECK(frame_misses(MODEL, b3, q3) == 0);
    CHECK(frame_misses(MODEL, b4, q4) == 0);

    // canonical edge orientation: from side has parity 0
    for (const auto& e : q4.edges) {
        CHECK(q4.verts[e.from].parity == 0);
        CHECK(q4.verts[e.to].parity == 1);
    }

    // transporters recorded with the quotient really move members onto reps
    for (size_t i = 0; i < b4.verts.size(); ++i) {
        const OrbitVertex& o = q4.verts[q4.orbit_of[i]];
        CHECK(tree_act(MODEL, q4.to_rep[i], b4.verts[i]).key == b4.verts[o.rep].key);
    }

    CHECK(stable_verts(q4) == 0);
    CHECK(stable_edges(q4) == 0);
    CHECK(unstable_components(q4).size() == 1);

    auto rays3 = detect_cusp_rays(q3);
    auto rays4 = detect_cusp_rays(q4);
    REQUIRE(rays3.size() == 1);
    REQUIRE(rays4.size() == 1);
    CHECK(rays3[0].certified);
    CHECK(rays4[0].certified);
    CHECK(rays4[0].profile == std::vector<long long>{18, 54, 162, 486});

    // at depth 2 the chain is too short to certify
    Ball b2 = build_ball(MODEL, 2);
    auto rays2 = detect_cusp_rays(quotient_ball(G, MODEL, b2));
    REQUIRE(rays2.size() == 1);
    CHECK_FALSE(rays2[0].certified);
}

TEST_CASE("orbit splitting agrees with independent transporter searches") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    Ball b3 = build_ball(MODEL, 3);
    QuotientGraph q3 = quotient_ball(G, MODEL, b3);

    for (const auto& o : q3.verts) {
        const TreeVertex& rep = b3.verts[o.rep];
        const TreeVertex& deep = b3.verts[o.members.back()];
        auto g = find_transporter(G, MODEL, deep, rep);
        REQUIRE(g.has_value());
        CHECK(tree_act(MODEL, *g, deep).key == rep.key);
        CHECK(vertex_stabilizer(G, MODEL, rep).size() == size_t(o.stab_order));
    }

    // vertices in distinct orbits admit no transporter (the search window is
    // complete, so the empty answer is definitive)
    auto none = find_transporter(G, MODEL, apartment_vertex(MODEL, 0), apartment_vertex(MODEL, 2));
    CHECK_FALSE(none.has_value());
}

TEST_CASE("congruence refinement matches direct level searches") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GW = SubgroupSpec::congruence(EXT, principal_ideal(EXT.omega()));
    Ball b3 = build_ball(MODEL, 3);
    QuotientGraph full = quotient_ball(G, MODEL, b3);
    QuotientGraph qw = refine_congruence(GW, b3, full);

    REQUIRE(qw.verts.size() == 13);
    for (const auto& o : qw.verts) {
        // stabilizers produced by residue filtering vs a fresh window search
        const TreeVertex& rep = b3.verts[o.rep];
        CHECK(vertex_stabilizer(GW, MODEL, rep).size() == size_t(o.stab_order));
        const TreeVertex& deep = b3.verts[o.members.back()];
        CHECK(vertex_stabilizer(GW, MODEL, deep).size() == size_t(o.stab_order));
        for (const Mat3& s : o.stabilizer) {
            CHECK(GW.is_member(s));
            CHECK(tree_act(MODEL, s, rep).key == rep.key);
        }
    }
    for (const auto& e : qw.edges) {
        size_t child = e.rep_child;
        const TreeVertex& v = b3.verts[child];
        const TreeVertex& w = b3.verts[size_t(b3.parent[child])];
        CHECK(edge_stabilizer(GW, MODEL, v, w).size() == size_t(e.stab_order));
    }
    CHECK(member_total(qw) == b3.verts.size());
    CHECK(edge_member_total(qw) == b3.verts.size() - 1);
    CHECK(frame_misses(MODEL, b3, qw) == 0);

    // transporters of the refinement are members of the level subgroup
    for (size_t i = 0; i < b3.verts.size(); ++i) {
        CHECK(GW.is_member(qw.to_rep[i]));
        CHECK(tree_act(MODEL, qw.to_rep[i], b3.verts[i]).key ==
              b3.verts[qw.verts[qw.orbit_of[i]].rep].key);
    }
}

TEST_CASE("ramified-level quotient: four rays out of a free center") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GW = SubgroupSpec::congruence(EXT, principal_ideal(EXT.omega()));
    Ball b4 = build_ball(MODEL, 4);
    Ball b5 = build_ball(MODEL, 5);
    QuotientGraph q4 = refine_congruence(GW, b4, quotient_ball(G, MODEL, b4));
    QuotientGraph q5 = refine_congruence(GW, b5, quotient_ball(G, MODEL, b5));

    REQUIRE(q4.verts.size() == 17);
    REQUIRE(q4.edges.size() == 16);
    CHECK(q4.cycle_rank() == 0);
    REQUIRE(q5.verts.size() == 21);
    REQUIRE(q5.edges.size() == 20);
    CHECK(q5.cycle_rank() == 0);

    CHECK(vstabs(q4) == std::multiset<long long>{1, 3, 3, 3, 3, 9, 9, 9, 9, 27, 27, 27, 27, 81,
                                                 81, 81, 81});
    CHECK(estabs(q4) == std::multiset<long long>{1, 1, 1, 1, 3, 3, 3, 3, 9, 9, 9, 9, 27, 27, 27,
                                                 27});
    for (const auto& v : q4.verts) CHECK(power_of(v.stab_order, 3));

    CHECK(stable_verts(q4) == 1);
    CHECK(stable_edges(q4) == 4);
    CHECK(stable_verts(q5) == 1);
    CHECK(stable_edges(q5) == 4);

    auto rays = detect_cusp_rays(q5);
    REQUIRE(rays.size() == 4);
    CHECK(certified_count(rays) == 4);
    std::multiset<std::vector<long long>> profiles(
        {rays[0].profile, rays[1].profile, rays[2].profile, rays[3].profile});
    std::multiset<std::vector<long long>> expected{{1, 3, 9, 27, 81, 243},
                                                   {3, 9, 27, 81, 243},
                                                   {3, 9, 27, 81, 243},
                                                   {3, 9, 27, 81, 243}};
    CHECK(profiles == expected);
    CHECK(unstable_components(q5).size() == 4);
}

TEST_CASE("square-level quotient keeps cycles and a deeper free core") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GT = SubgroupSpec::congruence(EXT, principal_ideal(EXT.t()));
    Ball b4 = build_ball(MODEL, 4);
    QuotientGraph qt = refine_congruence(GT, b4, quotient_ball(G, MODEL, b4));

    CHECK(qt.verts.size() == 129);
    CHECK(qt.edges.size() == 152);
    CHECK(qt.cycle_rank() == 24);
    CHECK(stable_verts(qt) == 121);
    CHECK(stable_edges(qt) == 148);
    CHECK(member_total(qt) == b4.verts.size());

    BIdeal level = principal_ideal(EXT.t());
    for (const auto& o : qt.verts) {
        CHECK(power_of(o.stab_order, 3));
        for (const Mat3& s : o.stabilizer) CHECK(residue_matrix(level, s).is_identity());
    }
    CHECK(frame_misses(MODEL, b4, qt) == 0);
    auto rays = detect_cusp_rays(qt);
    CHECK(certified_count(rays) == 4);
}

TEST_CASE("euler reports: exact stabilizer sums and matched-pair cancellation") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    SubgroupSpec GW = SubgroupSpec::congruence(EXT, principal_ideal(EXT.omega()));

    EulerReport r4 = euler_report(GW, MODEL, 4);
    EulerReport r5 = euler_report(GW, MODEL, 5);
    for (const EulerReport* r : {&r4, &r5}) {
        CHECK(r->l0 == 1);
        CHECK(r->l1 == 4);
        CHECK(r->chi == -3);
        CHECK(r->chi_valid);
        CHECK(r->counts_stable);
        CHECK(r->matched_pairs);
        CHECK(r->residual_outer_only);
    }
    CHECK(r4.eq1_partial == Rational(-239, 81));
    CHECK(r4.residual == Rational(4, 81));
    CHECK(r5.eq1_partial == Rational(-725, 243));
    CHECK(r5.residual == Rational(4, 243));

    // the full group has stabilizers of order 24: chi must be refused, and
    // the override must also be refused because p'-torsion is really there
    EulerReport rf = euler_report(G, MODEL, 3);
    CHECK_FALSE(rf.chi_valid);
    CHECK(rf.l0 == 0);
    CHECK(rf.l1 == 0);
    CHECK_THROWS_AS(euler_report(G, MODEL, 3, 50'000'000, true), domain_error);
}

TEST_CASE("class-number-four curve: wider core, slow ray onsets") {
    SubgroupSpec G3 = SubgroupSpec::full(EXT3);
    Ball b4 = build_ball(MODEL3, 4);
    Ball b5 = build_ball(MODEL3, 5);
    QuotientGraph q4 = quotient_ball(G3, MODEL3, b4);
    QuotientGraph q5 = quotient_ball(G3, MODEL3, b5);

    REQUIRE(q4.verts.size() == 17);
    REQUIRE(q4.edges.size() == 16);
    CHECK(q4.cycle_rank() == 0);
    CHECK(vstabs(q4) == std::multiset<long long>{1, 2, 2, 2, 2, 2, 2, 2, 2, 3, 6, 6, 6, 6, 18,
                                                 24, 54});
    CHECK(estabs(q4) ==
          std::multiset<long long>{1, 2, 2, 2, 2, 2, 2, 2, 2, 3, 6, 6, 6, 6, 6, 18});
    CHECK(member_total(q4) == b4.verts.size());
    CHECK(frame_misses(MODEL3, b4, q4) == 0);

    // cycles appear at depth 5; the apartment ray is certified either way
    CHECK(q5.verts.size() == 30);
    CHECK(q5.edges.size() == 32);
    CHECK(q5.cycle_rank() == 3);
    auto rays4 = detect_cusp_rays(q4);
    auto rays5 = detect_cusp_rays(q5);
    REQUIRE(certified_count(rays4) == 1);
    REQUIRE(certified_count(rays5) == 1);
    for (const auto& r : rays5)
        if (r.certified) CHECK(r.profile == std::vector<long long>{6, 18, 54, 162});
}

TEST_CASE("residue closure reproduces the level-quotient image") {
    SubgroupSpec G = SubgroupSpec::full(EXT);
    BIdeal Jw = principal_ideal(EXT.omega());

    // generating window: the base stabilizer together with a deep apartment
    // stabilizer (the apartment stabilizers are nested upward)
    std::vector<Mat3> gens = vertex_stabilizer(G, MODEL, apartment_vertex(MODEL, 0));
    auto s3 = vertex_stabilizer(G, MODEL, apartment_vertex(MODEL, 3));
    gens.insert(gens.end(), s3.begin(), s3.end());
    auto cw = residue_closure(Jw, gens);
    CHECK(cw.size() == 24);

    // widening the window certifies that the closure stopped growing
    auto s4 = vertex_stabilizer(G, MODEL, apartment_vertex(MODEL, 4));
    gens.insert(gens.end(), s4.begin(), s4.end());
    CHECK(residue_closure(Jw, gens).size() == 24);

    CHECK_THROWS_AS(residue_closure(Jw, gens, 10), window_error);
}

TEST_CASE("residue reduction is canonical on each coset") {
    BIdeal Jw = principal_ideal(EXT.omega());
    BIdeal Jt = principal_ideal(EXT.t());

    std::set<std::string> rw, rt;
    for (int a0 = 0; a0 < 3; ++a0)
        for (int a1 = 0; a1 < 3; ++a1)
            for (int b0 = 0; b0 < 3; ++b0)
                for (int b1 = 0; b1 < 3; ++b1) {
                    EllElem x = EXT.make(Poly::from_ints(F3, {a0, a1}),
                                         Poly::from_ints(F3, {b0, b1}));
                    EllElem w = ideal_reduce(Jw, x);
                    EllElem t = ideal_reduce(Jt, x);
                    rw.insert(w.to_string());
                    rt.insert(t.to_string());
                    // canonical: reducing a residue is the identity
                    CHECK(ideal_reduce(Jw, w) == w);
                    CHECK(ideal_reduce(Jt, t) == t);
                    // compatible with the ring operations
                    EllElem y = EXT.make(Poly::from_ints(F3, {b1, a0}),
                                         Poly::from_ints(F3, {a1, 2}));
                    CHECK(ideal_reduce(Jt, x + y) == ideal_reduce(Jt, ideal_reduce(Jt, x) + y));
                    CHECK(ideal_reduce(Jt, x * y) == ideal_reduce(Jt, ideal_reduce(Jt, x) * y));
                }
    // residue counts match the ideal norms |B/(w)| = 3 and |B/(t)| = 9
    CHECK(rw.size() == 3);
    CHECK(rt.size() == 9);
    CHECK(ideal_reduce(Jw, EXT.omega()).is_zero());
    CHECK(ideal_reduce(Jt, EXT.t()).is_zero());

    // a split prime of the class-number-four curve: norm 9 residue ring
    EllElem gen1 = EXT3.make(Poly::from_ints(F3, {1, 0, 1}), Poly::constant(F3, 0));
    EllElem gen2 = EXT3.make(-Poly::from_ints(F3, {1, -1}), Poly::constant(F3, 1));
    BIdeal P = ideal_from_generators(EXT3, {gen1, gen2});
    std::set<std::string> rp;
    for (int a0 = 0; a0 < 3; ++a0)
        for (int a1 = 0; a1 < 3; ++a1)
            for (int b0 = 0; b0 < 3; ++b0)
                for (int b1 = 0; b1 < 3; ++b1) {
                    EllElem x = EXT3.make(Poly::from_ints(F3, {a0, a1}),
                                          Poly::from_ints(F3, {b0, b1}));
                    rp.insert(ideal_reduce(P, x).to_string());
                }
    CHECK(rp.size() == 9);
    CHECK(ideal_reduce(P, gen1).is_zero());
    CHECK(ideal_reduce(P, gen2).is_zero());
}
