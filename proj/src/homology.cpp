#include "su3tree/homology.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "su3tree/arith.hpp"
#include "su3tree/boundary.hpp"
#include "su3tree/errors.hpp"
#include "su3tree/linalg_fq.hpp"

namespace su3tree {

namespace {

BigInt big_abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

}  // namespace

SmithResult smith_normal_form(std::vector<std::vector<BigInt>> m) {
    SmithResult res;
    if (m.empty() || m[0].empty()) return res;
    size_t R = m.size(), C = m[0].size();
    std::vector<BigInt> diag;

    for (size_t k = 0; k < std::min(R, C); ++k) {
        // pivot: the nonzero entry of smallest magnitude in the corner block
        size_t pi = k, pj = k;
        bool found = false;
        for (size_t i = k; i < R; ++i)
            for (size_t j = k; j < C; ++j)
                if (m[i][j] != 0 &&
                    (!found || big_abs(m[i][j]) < big_abs(m[pi][pj]))) {
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        std::swap(m[k], m[pi]);
        for (size_t i = 0; i < R; ++i) std::swap(m[i][k], m[i][pj]);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            // clear the column, reselecting the pivot whenever a smaller
            // remainder appears
            for (size_t i = k + 1; i < R; ++i) {
                if (m[i][k] == 0) continue;
                BigInt q = m[i][k] / m[k][k];
                for (size_t j = k; j < C; ++j) m[i][j] -= q * m[k][j];
                if (m[i][k] != 0) {
                    std::swap(m[k], m[i]);
                    dirty = true;
                }
            }
            for (size_t j = k + 1; j < C; ++j) {
                if (m[k][j] == 0) continue;
                BigInt q = m[k][j] / m[k][k];
                for (size_t i = 0; i < R; ++i) m[i][j] -= q * m[i][k];
                if (m[k][j] != 0) {
                    for (size_t i = 0; i < R; ++i) std::swap(m[i][k], m[i][j]);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // pivot must divide the rest of the block; fold a bad row in
            for (size_t i = k + 1; i < R && !dirty; ++i)
                for (size_t j = k + 1; j < C && !dirty; ++j)
                    if (m[i][j] % m[k][k] != 0) {
                        for (size_t c = k; c < C; ++c) m[k][c] += m[i][c];
                        dirty = true;
                    }
        }
        diag.push_back(big_abs(m[k][k]));
    }

    // enforce the divisibility chain
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) {
            BigInt g = gcd(diag[i], diag[j]);
            diag[j] = diag[i] / g * diag[j];
            diag[i] = g;
        }
    res.rank = diag.size();
    for (const BigInt& d : diag)
        if (d > 1) res.divisors.push_back(d);
    return res;
}

std::vector<long long> FiniteAbelianization::dlog(const Mat3& g) const {
    auto c = coset_.find(g.to_string());
    SU3_CHECK(c != coset_.end(), "abelianization: element outside the group");
    return exps_.at(c->second);
}

FiniteAbelianization abelianize_group(const std::vector<Mat3>& group) {
    SU3_CHECK(!group.empty(), "abelianization of an empty element list");
    FiniteAbelianization ab;

    // derived subgroup: closure of the pair commutators under products
    std::map<std::string, Mat3> derived;
    Mat3 id = Mat3::identity(*group[0].ext);
    derived.emplace(id.to_string(), id);
    std::deque<Mat3> queue;
    for (const Mat3& a : group)
        for (const Mat3& b : group) {
            Mat3 c = a * b * a.unitary_inverse() * b.unitary_inverse();
            auto [it, fresh] = derived.emplace(c.to_string(), c);
            if (fresh) queue.push_back(c);
        }
    while (!queue.empty()) {
        Mat3 x = queue.front();
        queue.pop_front();
        std::vector<Mat3> snapshot;
        snapshot.reserve(derived.size());
        for (auto& [k, v] : derived) snapshot.push_back(v);
        for (const Mat3& y : snapshot) {
            Mat3 z = x * y;
            auto [it, fresh] = derived.emplace(z.to_string(), z);
            if (fresh) queue.push_back(z);
        }
    }
    ab.derived_order = derived.size();

    // cosets: key each element by the least product with the derived subgroup
    std::map<std::string, Mat3> coset_rep;  // coset key -> one representative
    for (const Mat3& g : group) {
        std::string least;
        for (auto& [k, d] : derived) {
            std::string s = (g * d).to_string();
            if (least.empty() || s < least) least = s;
        }
        ab.coset_[g.to_string()] = least;
        coset_rep.emplace(least, g);
    }
    SU3_INVARIANT(coset_rep.size() * derived.size() == group.size(),
                  "abelianization: cosets do not tile the group");

    // staircase generators of the abelian quotient with exponent tracking
    auto ckey = [&](const Mat3& g) { return ab.coset_.at(g.to_string()); };
    std::map<std::string, std::pair<std::vector<long long>, Mat3>> sub;
    sub.emplace(ckey(id), std::make_pair(std::vector<long long>{}, id));
    while (sub.size() < coset_rep.size()) {
        auto pick = coset_rep.end();
        for (auto it = coset_rep.begin(); it != coset_rep.end(); ++it)
            if (!sub.count(it->first)) {
                pick = it;
                break;
            }
        const Mat3& h = pick->second;
        size_t k = ab.gens.size();
        // order of h relative to the current subgroup
        long long n = 1;
        Mat3 pw = h;
        while (!sub.count(ckey(pw))) {
            pw = pw * h;
            ++n;
        }
        std::vector<long long> tail = sub.at(ckey(pw)).first;
        tail.resize(k, 0);
        std::vector<BigInt> row(k + 1);
        for (size_t j = 0; j < k; ++j) row[j] = -tail[j];
        row[k] = n;
        for (auto& r : ab.relations) r.resize(k + 1, 0);
        ab.relations.push_back(std::move(row));
        ab.gens.push_back(h);

        std::vector<std::pair<std::vector<long long>, Mat3>> base;
        base.reserve(sub.size());
        for (auto& [key, val] : sub) base.push_back(val);
        Mat3 hp = h;
        for (long long j = 1; j < n; ++j) {
            for (auto& [vec, rep] : base) {
                Mat3 g = rep * hp;
                std::vector<long long> e = vec;
                e.resize(k + 1, 0);
                e[k] = j;
                sub.emplace(ckey(g), std::make_pair(std::move(e), g));
            }
            hp = hp * h;
        }
    }
    for (auto& [key, val] : sub) {
        val.first.resize(ab.gens.size(), 0);
        ab.exps_[key] = val.first;
    }
    return ab;
}

GraphOfGroups graph_of_groups(const Ball& ball, const QuotientGraph& qg) {
    GraphOfGroups gog;
    gog.radius = qg.radius;
    gog.group = qg.group;
    gog.cycle_rank = qg.cycle_rank();
    gog.vertex_groups.reserve(qg.verts.size());
    for (const OrbitVertex& v : qg.verts) gog.vertex_groups.push_back(v.stabilizer);

    std::vector<std::set<std::string>> vkeys(qg.verts.size());
    for (size_t o = 0; o < qg.verts.size(); ++o)
        for (const Mat3& s : gog.vertex_groups[o]) vkeys[o].insert(s.to_string());

    gog.edge_groups.reserve(qg.edges.size());
    for (const OrbitEdge& e : qg.edges) {
        EdgeGroup eg;
        size_t child = e.rep_child;
        size_t par = size_t(ball.parent[child]);
        eg.child_orbit = qg.orbit_of[child];
        eg.parent_orbit = qg.orbit_of[par];
        SU3_INVARIANT(size_t(e.stab_order) <= gog.vertex_groups[eg.child_orbit].size() &&
                          size_t(e.stab_order) <= gog.vertex_groups[eg.parent_orbit].size(),
                      "graph of groups: edge order exceeds an endpoint order");
        const Mat3& tc = qg.to_rep[child];
        const Mat3& tp = qg.to_rep[par];
        eg.gens = e.stabilizer;
        for (const Mat3& s : eg.gens) {
            Mat3 sc = tc * s * tc.unitary_inverse();
            Mat3 sp = tp * s * tp.unitary_inverse();
            SU3_INVARIANT(vkeys[eg.child_orbit].count(sc.to_string()) &&
                              vkeys[eg.parent_orbit].count(sp.to_string()),
                          "graph of groups: edge inclusion leaves the endpoint group");
            eg.child_images.push_back(std::move(sc));
            eg.parent_images.push_back(std::move(sp));
        }
        gog.edge_groups.push_back(std::move(eg));
    }
    return gog;
}

long long AbelianizationReport::torsion_p_rank(long long p) const {
    long long n = 0;
    for (const BigInt& d : torsion) n += (d % p == 0);
    return n;
}

AbelianizationReport abelianization(const GraphOfGroups& gog) {
    AbelianizationReport rep;
    rep.radius = gog.radius;
    rep.group = gog.group;

    std::vector<FiniteAbelianization> local(gog.vertex_groups.size());
    std::vector<size_t> offset(gog.vertex_groups.size(), 0);
    size_t cols = 0;
    for (size_t o = 0; o < gog.vertex_groups.size(); ++o) {
        offset[o] = cols;
        if (gog.vertex_groups[o].size() == 1) continue;
        local[o] = abelianize_group(gog.vertex_groups[o]);
        cols += local[o].gens.size();
    }
    rep.generators = cols;

    std::vector<std::vector<BigInt>> m;
    for (size_t o = 0; o < gog.vertex_groups.size(); ++o)
        for (const auto& r : local[o].relations) {
            std::vector<BigInt> row(cols);
            for (size_t j = 0; j < r.size(); ++j) row[offset[o] + j] = r[j];
            m.push_back(std::move(row));
        }

    // edge relations: both endpoint inclusions of each edge-group element
    // agree in the abelianization
    for (const EdgeGroup& eg : gog.edge_groups) {
        size_t oc = eg.child_orbit, op = eg.parent_orbit;
        for (size_t i = 0; i < eg.gens.size(); ++i) {
            if (eg.gens[i].is_identity()) continue;
            std::vector<BigInt> row(cols);
            auto ec = local[oc].dlog(eg.child_images[i]);
            auto ep = local[op].dlog(eg.parent_images[i]);
            for (size_t j = 0; j < ec.size(); ++j) row[offset[oc] + j] += ec[j];
            for (size_t j = 0; j < ep.size(); ++j) row[offset[op] + j] -= ep[j];
            m.push_back(std::move(row));
        }
    }

    SmithResult snf = smith_normal_form(std::move(m));
    rep.torsion = snf.divisors;
    rep.free_rank = (cols - snf.rank) + gog.cycle_rank;
    return rep;
}

AbelianizationReport abelianization(const Ball& ball, const QuotientGraph& qg) {
    return abelianization(graph_of_groups(ball, qg));
}

CuspTorsionReport cusp_torsion_rank(const QuotientGraph& qg) {
    CuspTorsionReport rep;
    for (const CuspRay& ray : detect_cusp_rays(qg)) {
        if (!ray.certified) continue;
        const OrbitVertex& deep = qg.verts[ray.orbits.back()];
        const std::vector<Mat3>& S = deep.stabilizer;
        int p = S[0].ext->fq().p();
        long long n = 0, order = deep.stab_order;
        while (order % p == 0) {
            order /= p;
            ++n;
        }
        SU3_CHECK(order == 1, "cusp torsion: deep ray stabilizer is not a p-group");

        BoundaryPoint xi = fixed_boundary_point(S);
        std::vector<EllElem> xs;
        for (const Mat3& s : S) {
            if (s.is_identity()) continue;
            xs.push_back(unipotent_pair(xi, s).first);
        }

        // commutator values u(0, x yb - xb y); their span is the derived
        // subgroup, exactly (the central factors add)
        std::vector<RatF> vals;
        Poly den = Poly::constant(S[0].ext->fq(), 1);
        for (size_t i = 0; i < xs.size(); ++i)
            for (size_t j = i + 1; j < xs.size(); ++j) {
                EllElem z = xs[i] * xs[j].conj() - xs[i].conj() * xs[j];
                SU3_INVARIANT(z.a.is_zero(), "cusp torsion: commutator has nonzero trace part");
                if (z.b.is_zero()) continue;
                vals.push_back(z.b);
                Poly g = Poly::gcd(den, z.b.den());
                den = Poly::divmod(den * z.b.den(), g).first;
            }
        int dim = 0;
        if (!vals.empty()) {
            int width = 0;
            std::vector<Poly> nums;
            for (const RatF& v : vals) {
                Poly scaled = v.num() * Poly::divmod(den, v.den()).first;
                width = std::max(width, scaled.deg() + 1);
                nums.push_back(std::move(scaled));
            }
            FqMatrix mat(S[0].ext->fq(), 0, width);
            for (const Poly& f : nums) {
                std::vector<uint16_t> row(size_t(width), 0);
                for (int c = 0; c <= f.deg(); ++c) row[size_t(c)] = f.coeff(c);
                mat.append_row(row);
            }
            dim = mat.rank();
        }
        rep.per_ray.push_back(n - dim);
        rep.total += n - dim;
    }
    return rep;
}

RelHomReport relhom_report(const Ball& ball, const QuotientGraph& qg, const EulerReport& er) {
    SU3_CHECK(er.radius == qg.radius && er.group == qg.group,
              "relative homology: euler report does not match the window");
    RelHomReport rep;
    rep.chi = er.chi;
    rep.steinberg_rank = er.l1 - er.l0;

    // relative boundary matrix of (window graph, unstable subgraph): stable
    // edges over stable-vertex columns
    std::vector<size_t> col(qg.verts.size(), SIZE_MAX);
    size_t nstable = 0;
    for (size_t v = 0; v < qg.verts.size(); ++v)
        if (qg.verts[v].stable) col[v] = nstable++;
    std::vector<std::vector<BigInt>> bd;
    long long l1 = 0;
    for (const OrbitEdge& e : qg.edges) {
        if (!e.stable) continue;
        ++l1;
        std::vector<BigInt> row(nstable);
        if (col[e.to] != SIZE_MAX) row[col[e.to]] += 1;
        if (col[e.from] != SIZE_MAX) row[col[e.from]] -= 1;
        bd.push_back(std::move(row));
    }
    SmithResult snf = smith_normal_form(std::move(bd));
    rep.h1_rel_rank = l1 - static_cast<long long>(snf.rank);
    // H0 of the pair: cokernel of the boundary; zero exactly when the rank is
    // full and no divisor exceeds 1
    bool h0_zero = snf.rank == nstable && snf.divisors.empty();

    AbelianizationReport ab = abelianization(ball, qg);
    CuspTorsionReport cusp = cusp_torsion_rank(qg);
    rep.ab_free_rank = ab.free_rank;
    rep.cycle_rank = qg.cycle_rank();
    rep.cusp_p_rank = cusp.total;

    long long p = qg.verts[0].stabilizer[0].ext->fq().p();
    rep.ab_p_rank = ab.torsion_p_rank(p);
    bool p_power = true;
    for (BigInt d : ab.torsion) {
        while (d % p == 0) d /= p;
        if (d != 1) p_power = false;
    }

    rep.consistency = er.chi_valid && h0_zero && rep.steinberg_rank == -rep.chi &&
                      rep.h1_rel_rank == -rep.chi && rep.ab_free_rank == rep.cycle_rank &&
                      rep.chi < 0 && rep.ab_free_rank <= size_t(-rep.chi) && p_power &&
                      rep.ab_p_rank == rep.cusp_p_rank;
    return rep;
}

}  // namespace su3tree
