// su3lab: batch front end over the library.  One command per process; every
// run writes JSON (+ DOT where a graph exists) and a summary.txt into --out.
// Exit codes: 0 success, 2 invalid config/input, 3 search-window or precision
// exhaustion (partial artifacts are labeled provisional), 1 broken invariant.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "su3tree/arith.hpp"
#include "su3tree/boundary.hpp"
#include "su3tree/errors.hpp"
#include "su3tree/homology.hpp"
#include "su3tree/quotient.hpp"
#include "su3tree/unitary.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace su3tree;

namespace {

struct RunConfig {
    int schema = 1;
    int p = 3, r = 1;
    std::vector<int> modulus;     // F_q modulus coefficients, empty = least
    std::vector<int> D = {0, 1};  // coefficients of D, low -> high
    std::string subgroup = "gamma";
    std::vector<std::pair<std::vector<int>, std::vector<int>>> J;  // a/b parts
    int radius = 4;
    int degbound = 3;
    long order_cap = 64;
    long long work_cap = 50'000'000;
    long long vertex = 0;
    int samples = 5;
    bool scan = false;
    std::string precision = "strict";
    unsigned seed = 0;
};

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::istringstream in(s);
    int x;
    while (in >> x) out.push_back(x);
    if (!in.eof()) throw config_error("config: expected integers, got '" + s + "'");
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void parse_config_line(RunConfig& cfg, const std::string& key, const std::string& val) {
    auto as_int = [&](long long lo, long long hi) {
        long long x;
        try {
            x = std::stoll(val);
        } catch (const std::exception&) {
            throw config_error("config: key '" + key + "' needs an integer, got '" + val + "'");
        }
        if (x < lo || x > hi)
            throw config_error("config: key '" + key + "' out of range [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]");
        return x;
    };
    if (key == "schema")
        cfg.schema = int(as_int(1, 1));
    else if (key == "p")
        cfg.p = int(as_int(2, 97));
    else if (key == "r")
        cfg.r = int(as_int(1, 4));
    else if (key == "modulus")
        cfg.modulus = parse_ints(val);
    else if (key == "D")
        cfg.D = parse_ints(val);
    else if (key == "subgroup")
        cfg.subgroup = val;
    else if (key == "J") {
        cfg.J.clear();
        std::istringstream gens(val);
        std::string gen;
        while (std::getline(gens, gen, ';')) {
            size_t slash = gen.find('/');
            if (slash == std::string::npos)
                throw config_error("config: J generator needs 'a-part / omega-part'");
            cfg.J.emplace_back(parse_ints(trim(gen.substr(0, slash))),
                               parse_ints(trim(gen.substr(slash + 1))));
        }
        if (cfg.J.empty()) throw config_error("config: J present but empty");
    } else if (key == "radius")
        cfg.radius = int(as_int(0, 12));
    else if (key == "degbound")
        cfg.degbound = int(as_int(0, 8));
    else if (key == "order_cap")
        cfg.order_cap = long(as_int(1, 1'000'000));
    else if (key == "work_cap")
        cfg.work_cap = as_int(1, 4'000'000'000'000LL);
    else if (key == "vertex")
        cfg.vertex = as_int(0, 1'000'000'000);
    else if (key == "samples")
        cfg.samples = int(as_int(1, 1000));
    else if (key == "scan")
        cfg.scan = as_int(0, 1) != 0;
    else if (key == "precision")
        cfg.precision = val;
    else if (key == "seed")
        cfg.seed = unsigned(as_int(0, 0xffffffffLL));
    else
        throw config_error("config: unknown key '" + key + "'");
}

RunConfig read_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw config_error("config: expected 'key = value': " + line);
        parse_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void validate(const RunConfig& cfg) {
    if (!is_prime(cfg.p)) throw config_error("p = " + std::to_string(cfg.p) + " is not prime");
    if (cfg.p == 2)
        throw config_error(
            "characteristic 2 is not supported: the hermitian construction needs 2 "
            "invertible in F_q");
    long long q = 1;
    for (int i = 0; i < cfg.r; ++i) q *= cfg.p;
    if (q > 9)
        throw config_error("q = " + std::to_string(q) + " exceeds the desk-scale cap q <= 9");
    if (cfg.D.empty() || cfg.D.back() == 0) throw config_error("D needs a nonzero leading term");
    if (cfg.D.size() % 2 == 0) throw config_error("deg D must be odd");
    if (cfg.subgroup != "gamma" && cfg.subgroup != "congruence")
        throw config_error("subgroup must be 'gamma' or 'congruence'");
    if (cfg.subgroup == "congruence" && cfg.J.empty())
        throw config_error("congruence subgroup needs J generators");
    if (cfg.precision != "strict" && cfg.precision != "provisional")
        throw config_error("precision must be 'strict' or 'provisional'");
}

// Contexts wired together with stable addresses.
struct Lab {
    FqContext F;
    ExtensionContext ext;
    LocalContext model;
    SubgroupSpec spec;

    Lab(const RunConfig& cfg)
        : F(cfg.p, cfg.r, cfg.modulus),
          ext(F, poly_of(F, cfg.D)),
          model(ext, std::max(64, 8 * cfg.radius + 32)),
          spec(make_spec(ext, cfg)) {}

    Lab(const Lab&) = delete;

  private:
    static Poly poly_of(const FqContext& F, const std::vector<int>& c) {
        std::vector<uint16_t> cc;
        for (int x : c) cc.push_back(F.from_int(x));
        return Poly(F, cc);
    }
    static SubgroupSpec make_spec(const ExtensionContext& ext, const RunConfig& cfg) {
        if (cfg.subgroup == "gamma") return SubgroupSpec::full(ext);
        std::vector<EllElem> gens;
        for (const auto& [a, b] : cfg.J)
            gens.push_back(ext.make(poly_of(ext.fq(), a.empty() ? std::vector<int>{0} : a),
                                    poly_of(ext.fq(), b.empty() ? std::vector<int>{0} : b)));
        return SubgroupSpec::congruence(ext, ideal_from_generators(ext, gens));
    }
};

json config_json(const RunConfig& cfg, const std::string& command) {
    json j;
    j["schema_version"] = cfg.schema;
    j["command"] = command;
    j["p"] = cfg.p;
    j["r"] = cfg.r;
    if (!cfg.modulus.empty()) j["modulus"] = cfg.modulus;
    j["D"] = cfg.D;
    j["subgroup"] = cfg.subgroup;
    if (!cfg.J.empty()) {
        json gens = json::array();
        for (const auto& [a, b] : cfg.J) gens.push_back(json{{"a", a}, {"omega", b}});
        j["J"] = gens;
    }
    j["radius"] = cfg.radius;
    j["degbound"] = cfg.degbound;
    j["work_cap"] = cfg.work_cap;
    j["precision"] = cfg.precision;
    j["seed"] = cfg.seed;
    return j;
}

std::string timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

void write_json(const fs::path& out, const std::string& name, json j) {
    j["generated_at"] = timestamp();  // the one field exempt from reproducibility
    std::ofstream f(out / name);
    f << j.dump(2) << '\n';
}

void write_text(const fs::path& out, const std::string& name, const std::string& body) {
    std::ofstream f(out / name);
    f << body;
}

std::string rat_str(const Rational& r) { return r.str(); }

json rays_json(const std::vector<CuspRay>& rays) {
    json arr = json::array();
    for (const CuspRay& r : rays) {
        json jr;
        jr["orbits"] = r.orbits;
        jr["profile"] = r.profile;
        jr["certified"] = r.certified;
        arr.push_back(std::move(jr));
    }
    return arr;
}

int certified_count(const std::vector<CuspRay>& rays) {
    int n = 0;
    for (const CuspRay& r : rays) n += r.certified;
    return n;
}

std::string quotient_dot(const QuotientGraph& qg, int certified) {
    std::ostringstream s;
    s << "graph quotient {\n";
    s << "  label=\"" << qg.group << "  R=" << qg.radius << "  certified_rays=" << certified
      << "\";\n";
    for (size_t v = 0; v < qg.verts.size(); ++v) {
        const OrbitVertex& o = qg.verts[v];
        s << "  v" << v << " [label=\"d" << o.depth << " |S|=" << o.stab_order << "\""
          << (o.stable ? "" : ", style=bold") << "];\n";
    }
    for (const OrbitEdge& e : qg.edges)
        s << "  v" << e.from << " -- v" << e.to << " [label=\"" << e.stab_order << "\"];\n";
    s << "}\n";
    return s.str();
}

// Quotient of the radius-R ball, plus the same for R-1 when asked: the
// companion window is what certifies stabilization.
QuotientGraph window(const Lab& lab, const RunConfig& cfg, int R, Ball& ball) {
    ball = build_ball(lab.model, R);
    return quotient_ball(lab.spec, lab.model, ball, cfg.work_cap);
}

int cmd_tree_ball(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    Ball ball = build_ball(lab.model, cfg.radius);
    std::vector<int> per_depth(size_t(cfg.radius) + 1, 0);
    for (int d : ball.depth) ++per_depth[size_t(d)];
    int expected_degree = lab.F.q() + 1;
    bool degree_ok = true;
    for (size_t v = 0; v < ball.verts.size(); ++v)
        if (ball.depth[v] < cfg.radius && ball.adj[v].size() != size_t(expected_degree))
            degree_ok = false;
    bool parity_ok = true;
    for (size_t v = 1; v < ball.verts.size(); ++v)
        if (ball.verts[v].parity == ball.verts[size_t(ball.parent[v])].parity) parity_ok = false;

    json j = config_json(cfg, "tree-ball");
    j["vertices"] = ball.verts.size();
    j["edges"] = ball.verts.size() - 1;
    j["per_depth"] = per_depth;
    j["interior_degree"] = expected_degree;
    j["degree_ok"] = degree_ok;
    j["bipartite_ok"] = parity_ok;
    write_json(out, "tree_ball.json", j);

    std::ostringstream dot;
    dot << "graph ball {\n  node [shape=point];\n";
    for (size_t v = 1; v < ball.verts.size(); ++v)
        dot << "  v" << ball.parent[v] << " -- v" << v << ";\n";
    dot << "}\n";
    write_text(out, "ball.dot", dot.str());

    std::ostringstream sum;
    sum << "tree-ball R=" << cfg.radius << ": " << ball.verts.size() << " vertices, "
        << ball.verts.size() - 1 << " edges, interior degree " << expected_degree
        << (degree_ok && parity_ok ? "" : "  [INVARIANT FAILURE]") << "\n";
    write_text(out, "summary.txt", sum.str());
    return degree_ok && parity_ok ? 0 : 1;
}

int cmd_quotient(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    Ball ball;
    QuotientGraph qg = window(lab, cfg, cfg.radius, ball);
    auto rays = detect_cusp_rays(qg);
    int certified = certified_count(rays);

    json j = config_json(cfg, "quotient");
    j["group"] = qg.group;
    j["vertices"] = qg.verts.size();
    j["edges"] = qg.edges.size();
    j["cycle_rank"] = qg.cycle_rank();
    json vs = json::array();
    long long stable_v = 0, stable_e = 0;
    for (const OrbitVertex& v : qg.verts) {
        vs.push_back(json{{"depth", v.depth},
                          {"max_depth", v.max_depth},
                          {"parity", v.parity},
                          {"stab_order", v.stab_order},
                          {"members", v.members.size()}});
        stable_v += v.stable;
    }
    j["orbits"] = vs;
    json es = json::array();
    for (const OrbitEdge& e : qg.edges) {
        es.push_back(json{{"from", e.from},
                          {"to", e.to},
                          {"stab_order", e.stab_order},
                          {"members", e.members.size()}});
        stable_e += e.stable;
    }
    j["edge_orbits"] = es;
    j["stable_vertices"] = stable_v;
    j["stable_edges"] = stable_e;
    j["rays"] = rays_json(rays);
    j["certified_rays"] = certified;
    write_json(out, "quotient.json", j);
    write_text(out, "quotient.dot", quotient_dot(qg, certified));

    std::ostringstream sum;
    sum << "quotient " << qg.group << " R=" << cfg.radius << ": V=" << qg.verts.size()
        << " E=" << qg.edges.size() << " cycle_rank=" << qg.cycle_rank()
        << " certified_rays=" << certified << "\n";
    write_text(out, "summary.txt", sum.str());
    return 0;
}

int cmd_euler(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    if (cfg.radius < 1) throw config_error("euler needs radius >= 1");
    Ball prev_ball, ball;
    QuotientGraph prev = window(lab, cfg, cfg.radius - 1, prev_ball);
    QuotientGraph qg = window(lab, cfg, cfg.radius, ball);
    EulerReport er = euler_from(prev, qg, ball, cfg.p);

    bool certified = er.chi_valid && er.counts_stable && er.matched_pairs &&
                     er.residual_outer_only;
    json j = config_json(cfg, "euler");
    j["group"] = er.group;
    j["l0"] = er.l0;
    j["l1"] = er.l1;
    j["chi_valid"] = er.chi_valid;
    if (er.chi_valid) j["chi"] = er.chi;
    j["eq1_partial"] = rat_str(er.eq1_partial);
    j["residual"] = rat_str(er.residual);
    j["residual_outer_only"] = er.residual_outer_only;
    j["matched_pairs"] = er.matched_pairs;
    j["counts_stable"] = er.counts_stable;
    j["certified"] = certified;
    j["provisional"] = !certified;
    write_json(out, "euler.json", j);

    std::ostringstream sum;
    sum << "euler " << er.group << " R=" << cfg.radius << ": l0=" << er.l0 << " l1=" << er.l1;
    if (er.chi_valid) sum << " chi=" << er.chi;
    sum << " eq1=" << rat_str(er.eq1_partial) << (certified ? "  [certified]" : "  [provisional]")
        << "\n";
    write_text(out, "summary.txt", sum.str());
    return 0;
}

int cmd_cusps(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    Ball ball;
    QuotientGraph qg = window(lab, cfg, cfg.radius, ball);
    auto rays = detect_cusp_rays(qg);
    auto comps = unstable_components(qg);

    json j = config_json(cfg, "cusps");
    j["group"] = qg.group;
    j["rays"] = rays_json(rays);
    j["certified_rays"] = certified_count(rays);
    std::vector<size_t> sizes;
    for (const auto& c : comps) sizes.push_back(c.size());
    j["unstable_component_sizes"] = sizes;
    write_json(out, "cusps.json", j);

    std::ostringstream sum;
    sum << "cusps " << qg.group << " R=" << cfg.radius << ": " << certified_count(rays)
        << " certified of " << rays.size() << " candidate rays, " << comps.size()
        << " unstable components\n";
    for (const CuspRay& r : rays) {
        sum << "  ray";
        for (long long s : r.profile) sum << ' ' << s;
        sum << (r.certified ? "  [certified]" : "  [window-limited]") << "\n";
    }
    write_text(out, "summary.txt", sum.str());
    return 0;
}

int cmd_stabilizer(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    Ball ball = build_ball(lab.model, cfg.radius);
    if (cfg.vertex < 0 || size_t(cfg.vertex) >= ball.verts.size())
        throw config_error("vertex index " + std::to_string(cfg.vertex) +
                           " outside the ball (size " + std::to_string(ball.verts.size()) + ")");
    const TreeVertex& v = ball.verts[size_t(cfg.vertex)];
    std::vector<Mat3> stab = vertex_stabilizer(lab.spec, lab.model, v, cfg.work_cap);

    std::map<long long, long long> hist;
    for (const Mat3& g : stab) ++hist[element_order(g, long(stab.size()) + 1)];
    json j = config_json(cfg, "stabilizer");
    j["group"] = lab.spec.name();
    j["vertex"] = cfg.vertex;
    j["depth"] = ball.depth[size_t(cfg.vertex)];
    j["parity"] = v.parity;
    j["order"] = stab.size();
    json oh = json::array();
    for (auto [o, n] : hist) oh.push_back(json{{"element_order", o}, {"count", n}});
    j["order_histogram"] = oh;
    if (stab.size() <= 256) {
        json els = json::array();
        for (const Mat3& g : stab) els.push_back(g.to_string());
        j["elements"] = els;
    } else {
        j["elements_omitted"] = true;
    }
    write_json(out, "stabilizer.json", j);

    std::ostringstream sum;
    sum << "stabilizer " << lab.spec.name() << " vertex " << cfg.vertex << " (depth "
        << ball.depth[size_t(cfg.vertex)] << "): order " << stab.size() << "\n";
    write_text(out, "summary.txt", sum.str());
    return 0;
}

int cmd_abelianization(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    if (cfg.radius < 1) throw config_error("abelianization needs radius >= 1");
    Ball prev_ball, ball;
    QuotientGraph prev = window(lab, cfg, cfg.radius - 1, prev_ball);
    QuotientGraph qg = window(lab, cfg, cfg.radius, ball);
    EulerReport er = euler_from(prev, qg, ball, cfg.p);
    AbelianizationReport ab = abelianization(ball, qg);

    json j = config_json(cfg, "abelianization");
    j["group"] = qg.group;
    json inv;
    inv["radius"] = ab.radius;
    inv["group"] = ab.group;
    inv["generators"] = ab.generators;
    inv["free_rank"] = ab.free_rank;
    json tor = json::array();
    for (const BigInt& d : ab.torsion) tor.push_back(d.str());
    inv["torsion"] = tor;
    j["abelian_invariants"] = inv;

    bool certified = false;
    if (er.chi_valid) {
        RelHomReport r = relhom_report(ball, qg, er);
        json rel;
        rel["chi"] = r.chi;
        rel["steinberg_rank"] = r.steinberg_rank;
        rel["h1_rel_rank"] = r.h1_rel_rank;
        rel["ab_free_rank"] = r.ab_free_rank;
        rel["cycle_rank"] = r.cycle_rank;
        rel["ab_p_rank"] = r.ab_p_rank;
        rel["cusp_p_rank"] = r.cusp_p_rank;
        rel["consistency"] = r.consistency;
        j["relative_homology"] = rel;
        certified = r.consistency && er.counts_stable;
    } else {
        j["relative_homology"] = nullptr;  // p'-torsion: chi has no l0 - l1 reading
    }
    j["certified"] = certified;
    j["provisional"] = !certified;
    write_json(out, "abelianization.json", j);

    std::ostringstream sum;
    sum << "abelianization " << qg.group << " R=" << cfg.radius << ": free rank "
        << ab.free_rank << ", torsion";
    if (ab.torsion.empty()) sum << " none";
    for (const BigInt& d : ab.torsion) sum << ' ' << d.str();
    sum << (certified ? "  [certified]" : "  [provisional]") << "\n";
    write_text(out, "summary.txt", sum.str());
    return 0;
}

int cmd_fixed_point(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    std::mt19937 gen(cfg.seed);
    auto rnd_poly = [&](int maxdeg) {
        std::uniform_int_distribution<int> dd(0, maxdeg), dc(0, lab.F.q() - 1);
        std::vector<uint16_t> c(size_t(dd(gen)) + 1);
        for (auto& x : c) x = uint16_t(dc(gen));
        return Poly(lab.F, c);
    };
    auto rnd_unipotent = [&]() {
        EllElem u = lab.ext.make(rnd_poly(2), rnd_poly(2));
        RatF half = RatF::constant(lab.F, lab.F.inv(lab.F.from_int(2)));
        EllElem v = lab.ext.make(-(u.norm().a * half), RatF::of(rnd_poly(2)));
        return u_a(u, v);
    };
    auto rnd_conjugator = [&]() {
        Mat3 g = Mat3::identity(lab.ext);
        std::uniform_int_distribution<int> dk(0, 2);
        for (int i = 0, len = dk(gen); i < len; ++i) {
            switch (dk(gen)) {
                case 0: g = g * weyl_s(lab.ext); break;
                case 1: g = g * torus_a(lab.ext.make(rnd_poly(1), rnd_poly(0))); break;
                default: g = g * rnd_unipotent(); break;
            }
        }
        return g;
    };

    json runs = json::array();
    bool all_ok = true;
    for (int s = 0; s < cfg.samples; ++s) {
        Mat3 c = rnd_conjugator();
        Mat3 cinv = c.unitary_inverse();
        std::vector<Mat3> gens;
        std::uniform_int_distribution<int> dn(1, 3);
        for (int i = 0, n = dn(gen); i < n; ++i) {
            Mat3 m = c * rnd_unipotent() * cinv;
            if (!m.is_identity()) gens.push_back(m);
        }
        if (gens.empty()) gens.push_back(c * u_a(lab.ext.zero(), lab.ext.omega()) * cinv);

        BoundaryPoint xi = fixed_boundary_point(gens);
        bool fixed = true;
        for (const Mat3& g : gens) fixed = fixed && act_boundary(g, xi) == xi;
        json run;
        run["generators"] = gens.size();
        run["fixed_point"] = xi.to_string();
        run["fixed_by_all"] = fixed;
        all_ok = all_ok && fixed;

        if (cfg.scan) {
            // bounded sweep of the H-pair chart u = u0 + u1 w, v = -N(u)/2 + z w
            long long candidates = 1, matches = 0;
            RatF half = RatF::constant(lab.F, lab.F.inv(lab.F.from_int(2)));
            bool inf_fixed = true;
            for (const Mat3& g : gens)
                inf_fixed = inf_fixed && act_boundary(g, BoundaryPoint::inf(lab.ext)) ==
                                             BoundaryPoint::inf(lab.ext);
            matches += inf_fixed;
            for_each_poly(lab.F, cfg.degbound, [&](const Poly& u0) {
                for_each_poly(lab.F, cfg.degbound, [&](const Poly& u1) {
                    EllElem u = lab.ext.make(u0, u1);
                    RatF va = -(u.norm().a * half);
                    for_each_poly(lab.F, cfg.degbound, [&](const Poly& z) {
                        ++candidates;
                        BoundaryPoint xi2 = BoundaryPoint::at(u, lab.ext.make(va, RatF::of(z)));
                        for (const Mat3& g : gens)
                            if (act_boundary(g, xi2) != xi2) return;
                        ++matches;
                    });
                });
            });
            run["scan_candidates"] = candidates;
            run["scan_fixed_points"] = matches;
            all_ok = all_ok && matches == 1;
        }
        runs.push_back(std::move(run));
    }

    json j = config_json(cfg, "fixed-point");
    j["samples"] = runs;
    j["all_verified"] = all_ok;
    write_json(out, "fixed_point.json", j);
    std::ostringstream sum;
    sum << "fixed-point: " << cfg.samples << " sampled unipotent subgroups, "
        << (all_ok ? "all verified" : "FAILURES present") << (cfg.scan ? " (with scan)" : "")
        << "\n";
    write_text(out, "summary.txt", sum.str());
    return all_ok ? 0 : 1;
}

int cmd_class_group(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    ClassGroup cg = class_group(lab.ext);
    auto pts = class_number_from_points(lab.ext);

    json j = config_json(cfg, "class-group");
    j["order"] = cg.order();
    json reps = json::array();
    for (const BIdeal& I : cg.reps) reps.push_back(I.to_string());
    j["representatives"] = reps;
    if (pts) {
        j["point_count_order"] = *pts;
        j["oracles_agree"] = *pts == cg.order();
    } else {
        j["point_count_order"] = nullptr;  // genus too large for the point-count route
    }
    write_json(out, "class_group.json", j);

    std::ostringstream sum;
    sum << "class-group: order " << cg.order();
    if (pts) sum << " (point count " << *pts << (*pts == cg.order() ? ", agree" : ", DISAGREE")
                 << ")";
    sum << "\n";
    write_text(out, "summary.txt", sum.str());
    return pts && *pts != cg.order() ? 1 : 0;
}

int cmd_census(const Lab& lab, const RunConfig& cfg, const fs::path& out) {
    CensusReport rep = finite_order_census(lab.spec, cfg.degbound, cfg.order_cap, cfg.work_cap);
    json j = config_json(cfg, "census");
    j["group"] = lab.spec.name();
    j["element_count"] = rep.elements.size();
    json oh = json::array();
    for (auto [o, n] : rep.order_histogram) oh.push_back(json{{"element_order", o}, {"count", n}});
    j["order_histogram"] = oh;
    write_json(out, "census.json", j);

    std::ostringstream sum;
    sum << "census " << lab.spec.name() << " degbound=" << cfg.degbound << ": "
        << rep.elements.size() << " finite-order elements, orders";
    for (auto [o, n] : rep.order_histogram) sum << ' ' << o << "(x" << n << ")";
    sum << "\n";
    write_text(out, "summary.txt", sum.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"su3lab: unitary-group tree laboratory"};
    std::string command, config_path, out_dir = ".";
    int radius_flag = -1, degbound_flag = -1;
    long long seed_flag = -1;
    app.add_option("command", command,
                   "one of: tree-ball quotient euler cusps stabilizer abelianization "
                   "fixed-point class-group census")
        ->required();
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_option("--radius", radius_flag, "override the config radius");
    app.add_option("--deg-bound", degbound_flag, "override the config degree bound");
    app.add_option("--seed", seed_flag, "override the sampling seed");
    CLI11_PARSE(app, argc, argv);

    fs::path out(out_dir);
    try {
        RunConfig cfg = read_config(config_path);
        if (radius_flag >= 0) cfg.radius = radius_flag;
        if (degbound_flag >= 0) cfg.degbound = degbound_flag;
        if (seed_flag >= 0) cfg.seed = unsigned(seed_flag);
        validate(cfg);
        fs::create_directories(out);
        Lab lab(cfg);

        if (command == "tree-ball") return cmd_tree_ball(lab, cfg, out);
        if (command == "quotient") return cmd_quotient(lab, cfg, out);
        if (command == "euler") return cmd_euler(lab, cfg, out);
        if (command == "cusps") return cmd_cusps(lab, cfg, out);
        if (command == "stabilizer") return cmd_stabilizer(lab, cfg, out);
        if (command == "abelianization") return cmd_abelianization(lab, cfg, out);
        if (command == "fixed-point") return cmd_fixed_point(lab, cfg, out);
        if (command == "class-group") return cmd_class_group(lab, cfg, out);
        if (command == "census") return cmd_census(lab, cfg, out);
        throw config_error("unknown command '" + command + "'");
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const window_error& e) {
        std::fprintf(stderr, "window exhausted: %s\n", e.what());
        write_text(out, "summary.txt", std::string("provisional: window exhausted: ") + e.what() +
                                           "\n");
        return 3;
    } catch (const precision_error& e) {
        std::fprintf(stderr, "precision exhausted: %s\n", e.what());
        write_text(out, "summary.txt", std::string("provisional: precision exhausted: ") +
                                           e.what() + "\n");
        return 3;
    } catch (const invariant_error& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
