#include "su3tree/quotient.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "su3tree/errors.hpp"

namespace su3tree {

namespace {

bool is_p_power(long long n, int p) {
    if (n < 1) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

}  // namespace

Mat3 residue_matrix(const BIdeal& level, const Mat3& g) {
    SU3_CHECK(g.ext != nullptr, "residue of a matrix without context");
    Mat3 r = g;
    for (auto& e : r.e) e = ideal_reduce(level, e);
    return r;
}

std::vector<Mat3> residue_closure(const BIdeal& level, const std::vector<Mat3>& gens, size_t cap) {
    std::vector<Mat3> out;
    std::map<std::string, size_t> seen;
    std::deque<size_t> queue;
    auto add = [&](const Mat3& g) {
        Mat3 r = residue_matrix(level, g);
        auto [it, fresh] = seen.emplace(r.to_string(), out.size());
        if (!fresh) return;
        if (out.size() >= cap) throw window_error("residue closure exceeds the cap");
        queue.push_back(out.size());
        out.push_back(std::move(r));
    };
    for (const Mat3& g : gens) add(g);
    // BFS over words in the deduplicated generator residues; closure under
    // products is already a group because the residues live in a finite
    // matrix group.
    size_t ngen = out.size();
    while (!queue.empty()) {
        size_t i = queue.front();
        queue.pop_front();
        for (size_t j = 0; j < ngen; ++j) add(out[i] * out[j]);
    }
    return out;
}

size_t QuotientGraph::cycle_rank() const {
    std::vector<size_t> dsu(verts.size());
    std::iota(dsu.begin(), dsu.end(), size_t{0});
    auto find = [&](size_t x) {
        while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
        return x;
    };
    size_t comps = verts.size();
    for (const OrbitEdge& e : edges) {
        size_t a = find(e.from), b = find(e.to);
        if (a != b) {
            dsu[a] = b;
            --comps;
        }
    }
    return edges.size() - verts.size() + comps;
}

namespace {

struct NeighborClass {
    TreeVertex rep_nb;
    bool resolved = false;
    size_t target = SIZE_MAX;
    Mat3 to_target;  // gamma * rep_nb = target representative vertex
};

struct OrbitWork {
    std::vector<NeighborClass> classes;
    std::map<std::string, std::pair<size_t, Mat3>> class_of;  // key -> (class, sigma to class rep)
};

QuotientGraph quotient_full(const SubgroupSpec& spec, const LocalContext& model, const Ball& ball,
                            long long work_cap) {
    const ExtensionContext& ext = *spec.ext;
    const size_t n = ball.verts.size();

    QuotientGraph qg;
    qg.radius = ball.radius;
    qg.group = spec.name();
    qg.orbit_of.assign(n, SIZE_MAX);
    qg.to_rep.assign(n, Mat3::identity(ext));
    qg.edge_orbit_of.assign(n, SIZE_MAX);
    qg.edge_to_rep.assign(n, Mat3::identity(ext));

    std::vector<OrbitWork> work;
    std::map<std::pair<size_t, size_t>, size_t> geom;  // canonical (orbit0, class0) -> edge id
    std::vector<std::pair<std::string, std::string>> edge_rep_keys;

    auto new_orbit = [&](size_t ball_idx) -> size_t {
        OrbitVertex ov;
        ov.rep = ball_idx;
        ov.depth = ball.depth[ball_idx];
        ov.max_depth = ov.depth;
        ov.parity = ball.verts[ball_idx].parity;
        ov.stabilizer = vertex_stabilizer(spec, model, ball.verts[ball_idx], work_cap);
        ov.stab_order = static_cast<long long>(ov.stabilizer.size());
        ov.stable = ov.stab_order == 1;
        qg.verts.push_back(std::move(ov));

        const OrbitVertex& back = qg.verts.back();
        OrbitWork w;
        std::vector<TreeVertex> nbs = tree_neighbors(ball.verts[ball_idx]);
        for (const TreeVertex& nb : nbs) {
            if (w.class_of.count(nb.key)) continue;
            std::map<std::string, std::pair<TreeVertex, Mat3>> images;  // orbit of nb under Stab
            for (const Mat3& s : back.stabilizer) {
                TreeVertex img = tree_act(model, s, nb);
                images.emplace(img.key, std::make_pair(img, s));
            }
            size_t cls = w.classes.size();
            const auto& [rep_key, rep_pair] = *images.begin();  // lex-least image
            NeighborClass nc;
            nc.rep_nb = rep_pair.first;
            w.classes.push_back(std::move(nc));
            const Mat3& to_rep_nb = rep_pair.second;  // maps nb to the class representative
            for (const auto& [k, pr] : images)
                w.class_of.emplace(k, std::make_pair(cls, to_rep_nb * pr.second.unitary_inverse()));
        }
        work.push_back(std::move(w));
        return qg.verts.size() - 1;
    };

    auto resolve = [&](size_t oid, size_t cls, size_t trigger, const Mat3& chain) {
        if (work[oid].classes[cls].resolved) return;
        TreeVertex nb = work[oid].classes[cls].rep_nb;
        for (size_t o2 = 0; o2 < qg.verts.size(); ++o2) {
            if (qg.verts[o2].parity != nb.parity) continue;
            if (auto g = find_transporter(spec, model, nb, ball.verts[qg.verts[o2].rep], work_cap)) {
                NeighborClass& nc = work[oid].classes[cls];
                nc.target = o2;
                nc.to_target = *g;
                nc.resolved = true;
                return;
            }
        }
        size_t o2 = new_orbit(trigger);  // may reallocate `work`
        NeighborClass& nc = work[oid].classes[cls];
        nc.target = o2;
        nc.to_target = chain.unitary_inverse();
        nc.resolved = true;
    };

    // geometric edge lookup; canonical side (orbit0, class0) has parity 0
    auto edge_index = [&](size_t o0, size_t c0, size_t other_orbit, size_t trigger) -> size_t {
        auto key = std::make_pair(o0, c0);
        auto it = geom.find(key);
        if (it != geom.end()) return it->second;
        OrbitEdge e;
        e.from = o0;
        e.to = other_orbit;
        e.rep_child = trigger;
        e.stabilizer = edge_stabilizer(spec, model, ball.verts[qg.verts[o0].rep],
                                       work[o0].classes[c0].rep_nb, work_cap);
        e.stab_order = static_cast<long long>(e.stabilizer.size());
        e.stable = e.stab_order == 1;
        qg.edges.push_back(std::move(e));
        edge_rep_keys.emplace_back(ball.verts[qg.verts[o0].rep].key,
                                   work[o0].classes[c0].rep_nb.key);
        geom.emplace(key, qg.edges.size() - 1);
        return qg.edges.size() - 1;
    };

    size_t o0 = new_orbit(0);
    qg.orbit_of[0] = o0;
    qg.verts[o0].members.push_back(0);

    for (size_t i = 1; i < n; ++i) {
        size_t p = static_cast<size_t>(ball.parent[i]);
        size_t op = qg.orbit_of[p];
        TreeVertex nbv = tree_act(model, qg.to_rep[p], ball.verts[i]);
        auto it = work[op].class_of.find(nbv.key);
        SU3_INVARIANT(it != work[op].class_of.end(), "quotient: neighbor image missing from table");
        size_t cls = it->second.first;
        Mat3 chain = it->second.second * qg.to_rep[p];  // v_i -> class representative
        resolve(op, cls, i, chain);
        const NeighborClass& nc = work[op].classes[cls];

        qg.orbit_of[i] = nc.target;
        qg.to_rep[i] = nc.to_target * chain;
        OrbitVertex& tv = qg.verts[nc.target];
        tv.members.push_back(i);
        tv.max_depth = std::max(tv.max_depth, ball.depth[i]);
        SU3_INVARIANT(tree_act(model, qg.to_rep[i], ball.verts[i]).key == ball.verts[tv.rep].key,
                      "quotient: transporter chain does not reach the representative");

        // ball edge (p, i)
        size_t eidx;
        if (qg.verts[op].parity == 0) {
            eidx = edge_index(op, cls, nc.target, i);
            qg.edge_to_rep[i] = chain;
        } else {
            size_t B = nc.target;
            TreeVertex y = tree_act(model, nc.to_target, ball.verts[qg.verts[op].rep]);
            auto jt = work[B].class_of.find(y.key);
            SU3_INVARIANT(jt != work[B].class_of.end(), "quotient: partner image missing from table");
            size_t cls2 = jt->second.first;
            eidx = edge_index(B, cls2, op, i);
            qg.edge_to_rep[i] = jt->second.second * nc.to_target * chain;
        }
        qg.edge_orbit_of[i] = eidx;
        qg.edges[eidx].members.push_back(i);
        std::set<std::string> got{tree_act(model, qg.edge_to_rep[i], ball.verts[p]).key,
                                  tree_act(model, qg.edge_to_rep[i], ball.verts[i]).key};
        std::set<std::string> want{edge_rep_keys[eidx].first, edge_rep_keys[eidx].second};
        SU3_INVARIANT(got == want, "quotient: edge carrier misses the representative edge");
    }

    // Stabilizers above were computed against the canonical pair (orbit
    // representative, class representative neighbor); re-express each against
    // the representative ball edge (parent[rep_child], rep_child), the frame
    // the header promises.  edge_to_rep[rep_child] carries that ball edge onto
    // the canonical pair, so conjugation by it transports the stabilizer back.
    for (OrbitEdge& e : qg.edges) {
        const Mat3& g = qg.edge_to_rep[e.rep_child];
        Mat3 inv = g.unitary_inverse();
        for (Mat3& s : e.stabilizer) s = inv * s * g;
    }
    return qg;
}

}  // namespace

QuotientGraph quotient_ball(const SubgroupSpec& spec, const LocalContext& model, const Ball& ball,
                            long long work_cap) {
    SU3_CHECK(spec.ext != nullptr, "subgroup spec missing extension context");
    if (!spec.level) return quotient_full(spec, model, ball, work_cap);
    SubgroupSpec full = SubgroupSpec::full(*spec.ext);
    QuotientGraph fq = quotient_full(full, model, ball, work_cap);
    return refine_congruence(spec, ball, fq);
}

QuotientGraph refine_congruence(const SubgroupSpec& spec, const Ball& ball,
                                const QuotientGraph& full) {
    SU3_CHECK(spec.ext != nullptr && spec.level.has_value(),
              "refinement needs a congruence level");
    const BIdeal& J = *spec.level;
    const ExtensionContext& ext = *spec.ext;
    const size_t n = ball.verts.size();
    SU3_CHECK(full.orbit_of.size() == n, "full quotient does not match the ball");

    QuotientGraph qg;
    qg.radius = full.radius;
    qg.group = spec.name();
    qg.orbit_of.assign(n, SIZE_MAX);
    qg.to_rep.assign(n, Mat3::identity(ext));
    qg.edge_orbit_of.assign(n, SIZE_MAX);
    qg.edge_to_rep.assign(n, Mat3::identity(ext));

    const std::string idkey = residue_matrix(J, Mat3::identity(ext)).to_string();

    // distinct stabilizer residues (with one preimage each) per full orbit
    auto reduce_set = [&](const std::vector<Mat3>& stab) {
        std::vector<std::pair<Mat3, size_t>> out;  // (residue, index of preimage)
        std::set<std::string> seen;
        for (size_t t = 0; t < stab.size(); ++t) {
            Mat3 r = residue_matrix(J, stab[t]);
            if (seen.insert(r.to_string()).second) out.emplace_back(std::move(r), t);
        }
        return out;
    };
    // Edge stabilizers are stored against the ball edge (parent[rep_child],
    // rep_child), but the coset test below compares residues against carriers
    // that land on the canonical pair, so transport them back first.
    std::vector<std::vector<Mat3>> ecan;
    ecan.reserve(full.edges.size());
    for (const OrbitEdge& oe : full.edges) {
        const Mat3& g = full.edge_to_rep[oe.rep_child];
        Mat3 inv = g.unitary_inverse();
        std::vector<Mat3> can;
        can.reserve(oe.stabilizer.size());
        for (const Mat3& s : oe.stabilizer) can.push_back(g * s * inv);
        ecan.push_back(std::move(can));
    }

    std::vector<std::vector<std::pair<Mat3, size_t>>> vres, eres;
    vres.reserve(full.verts.size());
    for (const OrbitVertex& ov : full.verts) vres.push_back(reduce_set(ov.stabilizer));
    eres.reserve(full.edges.size());
    for (const std::vector<Mat3>& can : ecan) eres.push_back(reduce_set(can));

    auto coset_tag = [&](const std::vector<std::pair<Mat3, size_t>>& rs, const Mat3& ri) {
        std::string best;
        for (const auto& [r, t] : rs) {
            std::string k = residue_matrix(J, r * ri).to_string();
            if (best.empty() || k < best) best = k;
        }
        return best;
    };

    // conjugated stabilizer of a concrete ball object, filtered into the kernel
    auto kernel_stab = [&](const std::vector<Mat3>& stab, const Mat3& carry) {
        Mat3 inv = carry.unitary_inverse();
        std::vector<Mat3> out;
        for (const Mat3& t : stab) {
            Mat3 g = inv * t * carry;
            if (residue_matrix(J, g).to_string() == idkey) out.push_back(std::move(g));
        }
        return out;
    };

    // vertices
    std::map<std::pair<size_t, std::string>, size_t> bucket;
    std::vector<std::string> rep_reskey;  // residue key of full.to_rep[rep] per refined orbit
    for (size_t i = 0; i < n; ++i) {
        size_t o = full.orbit_of[i];
        Mat3 ri = residue_matrix(J, full.to_rep[i]);
        std::string tag = coset_tag(vres[o], ri);
        auto key = std::make_pair(o, tag);
        auto it = bucket.find(key);
        if (it == bucket.end()) {
            OrbitVertex ov;
            ov.rep = i;
            ov.depth = ball.depth[i];
            ov.max_depth = ov.depth;
            ov.parity = ball.verts[i].parity;
            ov.stabilizer = kernel_stab(full.verts[o].stabilizer, full.to_rep[i]);
            ov.stab_order = static_cast<long long>(ov.stabilizer.size());
            ov.stable = ov.stab_order == 1;
            ov.members.push_back(i);
            bucket.emplace(key, qg.verts.size());
            qg.orbit_of[i] = qg.verts.size();
            rep_reskey.push_back(ri.to_string());
            qg.verts.push_back(std::move(ov));
        } else {
            size_t ro = it->second;
            size_t r = qg.verts[ro].rep;
            // delta = to_rep[r]^{-1} tau to_rep[i] lies in the kernel and carries i to r
            const Mat3* tau = nullptr;
            for (const auto& [rr, t] : vres[o])
                if (residue_matrix(J, rr * ri).to_string() == rep_reskey[ro]) {
                    tau = &full.verts[o].stabilizer[t];
                    break;
                }
            SU3_INVARIANT(tau != nullptr, "refinement: coset representative not found");
            Mat3 delta = full.to_rep[r].unitary_inverse() * (*tau) * full.to_rep[i];
            SU3_INVARIANT(spec.is_member(delta), "refinement: carrier not in the subgroup");
            qg.to_rep[i] = std::move(delta);
            qg.orbit_of[i] = ro;
            qg.verts[ro].members.push_back(i);
            qg.verts[ro].max_depth = std::max(qg.verts[ro].max_depth, ball.depth[i]);
        }
    }

    // edges
    std::map<std::pair<size_t, std::string>, size_t> ebucket;
    std::vector<std::string> erep_reskey;
    for (size_t j = 1; j < n; ++j) {
        size_t E = full.edge_orbit_of[j];
        size_t p = static_cast<size_t>(ball.parent[j]);
        Mat3 rj = residue_matrix(J, full.edge_to_rep[j]);
        std::string tag = coset_tag(eres[E], rj);
        auto key = std::make_pair(E, tag);
        auto it = ebucket.find(key);
        if (it == ebucket.end()) {
            OrbitEdge e;
            e.rep_child = j;
            size_t a = qg.orbit_of[p], b = qg.orbit_of[j];
            e.from = qg.verts[a].parity == 0 ? a : b;
            e.to = qg.verts[a].parity == 0 ? b : a;
            e.stabilizer = kernel_stab(ecan[E], full.edge_to_rep[j]);
            e.stab_order = static_cast<long long>(e.stabilizer.size());
            e.stable = e.stab_order == 1;
            e.members.push_back(j);
            ebucket.emplace(key, qg.edges.size());
            qg.edge_orbit_of[j] = qg.edges.size();
            erep_reskey.push_back(rj.to_string());
            qg.edges.push_back(std::move(e));
        } else {
            size_t eo = it->second;
            size_t rc = qg.edges[eo].rep_child;
            const Mat3* tau = nullptr;
            for (const auto& [rr, t] : eres[E])
                if (residue_matrix(J, rr * rj).to_string() == erep_reskey[eo]) {
                    tau = &ecan[E][t];
                    break;
                }
            SU3_INVARIANT(tau != nullptr, "refinement: edge coset representative not found");
            Mat3 delta = full.edge_to_rep[rc].unitary_inverse() * (*tau) * full.edge_to_rep[j];
            SU3_INVARIANT(spec.is_member(delta), "refinement: edge carrier not in the subgroup");
            qg.edge_to_rep[j] = std::move(delta);
            qg.edge_orbit_of[j] = eo;
            OrbitEdge& e = qg.edges[eo];
            e.members.push_back(j);
            // projection must stay a graph morphism
            size_t a = qg.orbit_of[p], b = qg.orbit_of[j];
            SU3_INVARIANT((a == e.from && b == e.to) || (a == e.to && b == e.from),
                          "refinement: edge members disagree on endpoint classes");
        }
    }
    return qg;
}

std::vector<CuspRay> detect_cusp_rays(const QuotientGraph& qg) {
    const size_t nv = qg.verts.size();
    std::vector<std::set<size_t>> adj(nv);
    for (const OrbitEdge& e : qg.edges) {
        adj[e.from].insert(e.to);
        adj[e.to].insert(e.from);
    }
    // outward successor: the strictly-heavier neighbor one layer deeper
    std::vector<size_t> succ(nv, SIZE_MAX);
    std::vector<bool> has_pred(nv, false);
    for (size_t v = 0; v < nv; ++v) {
        size_t best = SIZE_MAX;
        for (size_t w : adj[v]) {
            if (qg.verts[w].depth != qg.verts[v].depth + 1) continue;
            if (qg.verts[w].stab_order <= qg.verts[v].stab_order) continue;
            if (best == SIZE_MAX || qg.verts[w].stab_order > qg.verts[best].stab_order ||
                (qg.verts[w].stab_order == qg.verts[best].stab_order &&
                 qg.verts[w].rep < qg.verts[best].rep))
                best = w;
        }
        succ[v] = best;
    }
    for (size_t v = 0; v < nv; ++v)
        if (succ[v] != SIZE_MAX) has_pred[succ[v]] = true;

    // chains from onset orbits, deduplicated by tail (longest wins)
    std::map<size_t, CuspRay> by_tail;
    for (size_t v = 0; v < nv; ++v) {
        if (succ[v] == SIZE_MAX || has_pred[v]) continue;
        CuspRay ray;
        size_t cur = v;
        while (true) {
            ray.orbits.push_back(cur);
            ray.profile.push_back(qg.verts[cur].stab_order);
            if (succ[cur] == SIZE_MAX) break;
            cur = succ[cur];
        }
        ray.certified = ray.orbits.size() >= 3 && qg.verts[cur].max_depth == qg.radius;
        auto it = by_tail.find(cur);
        if (it == by_tail.end() || it->second.orbits.size() < ray.orbits.size())
            by_tail[cur] = std::move(ray);
    }
    std::vector<CuspRay> rays;
    for (auto& [tail, ray] : by_tail) rays.push_back(std::move(ray));
    std::sort(rays.begin(), rays.end(), [](const CuspRay& a, const CuspRay& b) {
        return a.orbits.front() < b.orbits.front();
    });
    return rays;
}

std::vector<std::vector<size_t>> unstable_components(const QuotientGraph& qg) {
    const size_t nv = qg.verts.size();
    std::vector<size_t> dsu(nv);
    std::iota(dsu.begin(), dsu.end(), size_t{0});
    auto find = [&](size_t x) {
        while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
        return x;
    };
    for (const OrbitEdge& e : qg.edges)
        if (!e.stable) dsu[find(e.from)] = find(e.to);
    std::map<size_t, std::vector<size_t>> comps;
    for (size_t v = 0; v < nv; ++v)
        if (!qg.verts[v].stable) comps[find(v)].push_back(v);
    std::vector<std::vector<size_t>> out;
    for (auto& [root, vs] : comps) out.push_back(std::move(vs));
    return out;
}

EulerReport euler_from(const QuotientGraph& qg_prev, const QuotientGraph& qg, const Ball& ball,
                       int p, bool allow_pprime_override) {
    EulerReport rep;
    rep.radius = qg.radius;
    rep.group = qg.group;

    bool pprime = false;
    for (const OrbitVertex& v : qg.verts)
        if (!is_p_power(v.stab_order, p)) pprime = true;
    for (const OrbitEdge& e : qg.edges)
        if (!is_p_power(e.stab_order, p)) pprime = true;
    if (pprime && allow_pprime_override)
        throw domain_error("euler: override refused, p'-torsion observed in the stabilizers");
    rep.chi_valid = !pprime;

    auto stable_counts = [](const QuotientGraph& g) {
        long long v = 0, e = 0;
        for (const OrbitVertex& ov : g.verts) v += ov.stable ? 1 : 0;
        for (const OrbitEdge& oe : g.edges) e += oe.stable ? 1 : 0;
        return std::make_pair(v, e);
    };
    auto [l0, l1] = stable_counts(qg);
    auto [p0, p1] = stable_counts(qg_prev);
    rep.l0 = l0;
    rep.l1 = l1;
    rep.chi = l0 - l1;
    rep.counts_stable = l0 == p0 && l1 == p1;

    Rational eq1 = 0;
    for (const OrbitVertex& v : qg.verts) eq1 += Rational(1, v.stab_order);
    for (const OrbitEdge& e : qg.edges) eq1 -= Rational(1, e.stab_order);
    rep.eq1_partial = eq1;
    rep.residual = eq1 - Rational(l0 - l1);

    // matched pairs: each interior unstable vertex class pairs with an
    // outward unstable edge class of the same stabilizer order
    size_t interior_unstable = 0, unstable_edges = 0;
    bool ok = true;
    for (const OrbitEdge& e : qg.edges) {
        if (e.stable) continue;
        ++unstable_edges;
        const OrbitVertex& a = qg.verts[e.from];
        const OrbitVertex& b = qg.verts[e.to];
        const OrbitVertex& inner = a.depth <= b.depth ? a : b;
        if (a.depth == b.depth || e.stab_order != inner.stab_order) ok = false;
    }
    for (size_t v = 0; v < qg.verts.size(); ++v) {
        if (qg.verts[v].stable || qg.verts[v].depth >= qg.radius) continue;
        ++interior_unstable;
        bool found = false;
        for (const OrbitEdge& e : qg.edges) {
            if (e.stable || (e.from != v && e.to != v)) continue;
            size_t other = e.from == v ? e.to : e.from;
            if (qg.verts[other].depth == qg.verts[v].depth + 1 &&
                e.stab_order == qg.verts[v].stab_order)
                found = true;
        }
        if (!found) ok = false;
    }
    if (interior_unstable != unstable_edges) ok = false;
    rep.matched_pairs = ok;

    Rational outer = 0;
    for (const OrbitVertex& v : qg.verts)
        if (!v.stable && v.depth >= qg.radius) outer += Rational(1, v.stab_order);
    rep.residual_outer_only = rep.residual == outer;
    (void)ball;
    return rep;
}

EulerReport euler_report(const SubgroupSpec& spec, const LocalContext& model, int R,
                         long long work_cap, bool allow_pprime_override) {
    SU3_CHECK(spec.ext != nullptr, "subgroup spec missing extension context");
    SU3_CHECK(R >= 1, "euler report needs radius >= 1");
    Ball prev_ball = build_ball(model, R - 1);
    Ball cur_ball = build_ball(model, R);
    QuotientGraph qp = quotient_ball(spec, model, prev_ball, work_cap);
    QuotientGraph qc = quotient_ball(spec, model, cur_ball, work_cap);
    EulerReport rep =
        euler_from(qp, qc, cur_ball, spec.ext->fq().p(), allow_pprime_override);
    if (!spec.level && !allow_pprime_override) rep.chi_valid = false;
    SU3_INVARIANT(!spec.level || rep.chi_valid,
                  "euler: congruence subgroup shows p'-torsion");
    return rep;
}

}  // namespace su3tree
