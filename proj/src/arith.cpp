#include "su3tree/arith.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <utility>

#include "su3tree/errors.hpp"
#include "su3tree/linalg_fq.hpp"

namespace su3tree {

namespace {

// ---------------------------------------------------------------------------
// Coefficient boxes.  A box records, per column entry, the highest allowed
// t-degree of the A-part and the omega-part; -1 means the part is forced to
// vanish.  Variables are the F_q coefficients, ordered entry-major, A-part
// before omega-part, low degree first.

EllElem monom(const ExtensionContext& ext, int k, bool om) {
    const FqContext& F = ext.fq();
    std::vector<uint16_t> c(static_cast<size_t>(k) + 1, 0);
    c[static_cast<size_t>(k)] = 1;
    Poly m(F, c);
    return om ? ext.make(Poly(F), m) : ext.make(m, Poly(F));
}

struct ColBox {
    std::array<int, 3> ud{{-1, -1, -1}}, vd{{-1, -1, -1}};
    int nvars() const {
        int n = 0;
        for (int r = 0; r < 3; ++r) n += (ud[r] + 1) + (vd[r] + 1);
        return n;
    }
};

Vec3 col_from_raw(const ExtensionContext& ext, const ColBox& box, const std::vector<uint16_t>& x) {
    const FqContext& F = ext.fq();
    Vec3 out{ext.zero(), ext.zero(), ext.zero()};
    size_t pos = 0;
    for (int r = 0; r < 3; ++r) {
        std::vector<uint16_t> uc(static_cast<size_t>(box.ud[r] + 1));
        std::vector<uint16_t> vc(static_cast<size_t>(box.vd[r] + 1));
        for (auto& c : uc) c = x[pos++];
        for (auto& c : vc) c = x[pos++];
        out[r] = ext.make(Poly(F, uc), Poly(F, vc));
    }
    return out;
}

// F_q-coefficient rows of the affine conditions h(col, prev) == target over
// the variables of `box`.  h is linear in its first slot, so each constraint
// contributes one row per coefficient slot of the value.
struct StageSystem {
    FqMatrix A;
    std::vector<uint16_t> rhs;
};

StageSystem build_stage(const ExtensionContext& ext, const ColBox& box,
                        const std::vector<std::pair<Vec3, EllElem>>& constraints) {
    const FqContext& F = ext.fq();
    const int nv = box.nvars();
    StageSystem sys{FqMatrix(F, 0, nv), {}};
    for (const auto& [prev, target] : constraints) {
        std::vector<EllElem> vals;
        vals.reserve(static_cast<size_t>(nv));
        for (int r = 0; r < 3; ++r) {
            EllElem pc = prev[static_cast<size_t>(2 - r)].conj();
            for (int k = 0; k <= box.ud[r]; ++k) vals.push_back(monom(ext, k, false) * pc);
            for (int k = 0; k <= box.vd[r]; ++k) vals.push_back(monom(ext, k, true) * pc);
        }
        int da = -1, db = -1;
        auto widen = [&](const EllElem& e) {
            SU3_CHECK(e.in_B(), "stage constraint requires integral data");
            da = std::max(da, e.a.num().deg());
            db = std::max(db, e.b.num().deg());
        };
        for (const auto& e : vals) widen(e);
        widen(target);
        for (int kk = 0; kk <= da; ++kk) {
            std::vector<uint16_t> row(static_cast<size_t>(nv));
            for (int j = 0; j < nv; ++j) row[static_cast<size_t>(j)] = vals[static_cast<size_t>(j)].a.num().coeff(kk);
            sys.A.append_row(row);
            sys.rhs.push_back(target.a.num().coeff(kk));
        }
        for (int kk = 0; kk <= db; ++kk) {
            std::vector<uint16_t> row(static_cast<size_t>(nv));
            for (int j = 0; j < nv; ++j) row[static_cast<size_t>(j)] = vals[static_cast<size_t>(j)].b.num().coeff(kk);
            sys.A.append_row(row);
            sys.rhs.push_back(target.b.num().coeff(kk));
        }
    }
    return sys;
}

// Append the digit rows at negative exponents of
//   sum_var x_var * latvar[var][l] == rhs[l],   l = 0..2,
// which certify integrality of a staged lattice condition.
void append_digit_rows(StageSystem& sys, const std::vector<std::array<LocalElem, 3>>& latvar,
                       const std::array<LocalElem, 3>& rhs) {
    const int nv = sys.A.cols();
    SU3_INVARIANT(static_cast<int>(latvar.size()) == nv, "lattice row variable mismatch");
    for (int l = 0; l < 3; ++l) {
        int lo = 0;
        auto consider = [&](const LocalElem& s) {
            if (s.prec() < 0) throw precision_error("window rows exceed working precision");
            if (!s.is_zero_to_prec()) lo = std::min(lo, s.val());
        };
        for (const auto& a : latvar) consider(a[static_cast<size_t>(l)]);
        consider(rhs[static_cast<size_t>(l)]);
        for (int ee = lo; ee < 0; ++ee) {
            std::vector<uint16_t> row(static_cast<size_t>(nv));
            bool nz = false;
            for (int v = 0; v < nv; ++v) {
                row[static_cast<size_t>(v)] = latvar[static_cast<size_t>(v)][static_cast<size_t>(l)].digit(ee);
                nz = nz || row[static_cast<size_t>(v)];
            }
            uint16_t r = rhs[static_cast<size_t>(l)].digit(ee);
            if (nz || r) {
                sys.A.append_row(row);
                sys.rhs.push_back(r);
            }
        }
    }
}

int lmat_rowmin(const LMat& m, int i) {
    int best = INT_MAX;
    for (int j = 0; j < 3; ++j)
        if (!m.at(i, j).is_zero_to_prec()) best = std::min(best, m.at(i, j).val());
    SU3_INVARIANT(best != INT_MAX, "basis row vanished to working precision");
    return best;
}

int lmat_colmin(const LMat& m, int j) {
    int best = INT_MAX;
    for (int i = 0; i < 3; ++i)
        if (!m.at(i, j).is_zero_to_prec()) best = std::min(best, m.at(i, j).val());
    SU3_INVARIANT(best != INT_MAX, "basis column vanished to working precision");
    return best;
}

// All subgroup elements gamma with gamma . from = to for every condition
// pair, up to max_results.  The per-entry valuation window is exact: any
// transporter gamma factors as Bw M Bv^{-1} with M integral (and likewise
// through the inverse and the dual lattices), which bounds every entry from
// below.  Within the window the search stages the columns of gamma: the
// canonical bases are upper triangular, so the lattice conditions on column
// j are affine given columns < j, and the hermitian relations against the
// chosen columns are affine as well.  Each stage solves the affine system
// and filters the one quadratic condition (the column norm); survivors of
// stage 2 are checked in full.
std::vector<Mat3> window_search(const SubgroupSpec& spec, const LocalContext& model,
                                const std::vector<std::pair<const TreeVertex*, const TreeVertex*>>& conds,
                                long long work_cap, size_t max_results) {
    SU3_CHECK(spec.ext != nullptr, "subgroup spec missing extension context");
    SU3_CHECK(!conds.empty(), "window search needs at least one condition");
    const ExtensionContext& ext = *spec.ext;
    const FqContext& F = ext.fq();
    const int q = F.q();
    const int d = ext.d();

    for (const auto& [from, to] : conds)
        if (from->parity != to->parity) return {};  // unitary maps preserve the class parity

    struct CondMats {
        LMat Bw, Bv, Bwinv;
    };
    std::vector<CondMats> mats;
    std::array<int, 9> minval{};
    minval.fill(INT_MIN);
    for (const auto& [from, to] : conds) {
        CondMats cm{to->basis, from->basis, lmat_inverse(to->basis)};
        const LMat Bvinv = lmat_inverse(cm.Bv);
        const LMat Bwd = dual_basis(cm.Bw), Bvd = dual_basis(cm.Bv);
        const LMat Bwdinv = lmat_inverse(Bwd), Bvdinv = lmat_inverse(Bvd);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                int bA = lmat_rowmin(cm.Bw, i) + lmat_colmin(Bvinv, j);
                int bB = lmat_rowmin(cm.Bv, 2 - j) + lmat_colmin(cm.Bwinv, 2 - i);
                int bC = lmat_rowmin(Bwd, i) + lmat_colmin(Bvdinv, j);
                int bD = lmat_rowmin(Bvd, 2 - j) + lmat_colmin(Bwdinv, 2 - i);
                int& mv = minval[static_cast<size_t>(3 * i + j)];
                mv = std::max({mv, bA, bB, bC, bD});
            }
        }
        mats.push_back(std::move(cm));
    }

    std::array<ColBox, 3> boxes;
    int maxdeg = 0;
    for (int j = 0; j < 3; ++j) {
        for (int r = 0; r < 3; ++r) {
            const int mv = minval[static_cast<size_t>(3 * r + j)];
            boxes[static_cast<size_t>(j)].ud[static_cast<size_t>(r)] = mv > 0 ? -1 : (-mv) / 2;
            const int vr = -mv - d;
            boxes[static_cast<size_t>(j)].vd[static_cast<size_t>(r)] = (mv > 0 || vr < 0) ? -1 : vr / 2;
            maxdeg = std::max({maxdeg, boxes[static_cast<size_t>(j)].ud[static_cast<size_t>(r)],
                               boxes[static_cast<size_t>(j)].vd[static_cast<size_t>(r)]});
        }
    }

    // Embedded monomials, shared across stages.
    std::vector<LocalElem> embu(static_cast<size_t>(maxdeg) + 1), embv(static_cast<size_t>(maxdeg) + 1);
    for (int k = 0; k <= maxdeg; ++k) {
        embu[static_cast<size_t>(k)] = model.embed(monom(ext, k, false));
        embv[static_cast<size_t>(k)] = model.embed(monom(ext, k, true));
    }
    auto embedded = [&](const EllElem& e) { return model.embed(e); };

    // Lattice left-hand sides: lat[j][ci][var][l] = (Bwinv col r * emb) * Bv(j,j).
    std::array<std::vector<std::vector<std::array<LocalElem, 3>>>, 3> lat;
    for (int j = 0; j < 3; ++j) {
        lat[static_cast<size_t>(j)].resize(mats.size());
        for (size_t ci = 0; ci < mats.size(); ++ci) {
            const LMat& Bwinv = mats[ci].Bwinv;
            const LocalElem piv = mats[ci].Bv.at(j, j);
            auto& dst = lat[static_cast<size_t>(j)][ci];
            for (int r = 0; r < 3; ++r) {
                auto add_var = [&](const LocalElem& emb) {
                    std::array<LocalElem, 3> s;
                    for (int l = 0; l < 3; ++l) s[static_cast<size_t>(l)] = Bwinv.at(l, r) * emb * piv;
                    dst.push_back(std::move(s));
                };
                for (int k = 0; k <= boxes[static_cast<size_t>(j)].ud[static_cast<size_t>(r)]; ++k)
                    add_var(embu[static_cast<size_t>(k)]);
                for (int k = 0; k <= boxes[static_cast<size_t>(j)].vd[static_cast<size_t>(r)]; ++k)
                    add_var(embv[static_cast<size_t>(k)]);
            }
        }
    }

    long long budget = work_cap;
    auto spend = [&](long long n) {
        budget -= n;
        if (budget < 0)
            throw window_error("transporter window search exceeds the work cap");
    };

    const LocalElem lzero = LocalElem::zero(F, model.prec());
    const EllElem one = ext.one(), zero = ext.zero();
    std::vector<Mat3> out;
    bool stopped = false;

    // Stage 0: homogeneous lattice conditions on the first column.
    StageSystem s0{FqMatrix(F, 0, boxes[0].nvars()), {}};
    for (size_t ci = 0; ci < mats.size(); ++ci)
        append_digit_rows(s0, lat[0][ci], {lzero, lzero, lzero});
    auto sp0 = solve_affine(s0.A, s0.rhs);
    SU3_INVARIANT(sp0.has_value(), "homogeneous stage lost its zero solution");
    {
        long long cand = 1;
        for (size_t b = 0; b < sp0->basis.size(); ++b) {
            cand *= q;
            if (cand > work_cap)
                throw window_error("transporter window of dimension " +
                                   std::to_string(sp0->basis.size()) + " exceeds the work cap");
        }
        spend(cand);
    }

    enumerate_affine(F, *sp0, [&](const std::vector<uint16_t>& x0) {
        Vec3 c0 = col_from_raw(ext, boxes[0], x0);
        if (c0[0].is_zero() && c0[1].is_zero() && c0[2].is_zero()) return true;
        if (hform(c0, c0) != zero) return true;

        // W0[ci][l] = (Bwinv * c0)_l, the fixed part of later lattice rows.
        std::vector<std::array<LocalElem, 3>> W0(mats.size());
        for (size_t ci = 0; ci < mats.size(); ++ci) {
            for (int l = 0; l < 3; ++l) {
                LocalElem acc = lzero;
                for (int s = 0; s < 3; ++s)
                    acc = acc + mats[ci].Bwinv.at(l, s) * embedded(c0[static_cast<size_t>(s)]);
                W0[ci][static_cast<size_t>(l)] = std::move(acc);
            }
        }

        StageSystem s1 = build_stage(ext, boxes[1], {{c0, zero}});
        for (size_t ci = 0; ci < mats.size(); ++ci) {
            std::array<LocalElem, 3> rhs;
            for (int l = 0; l < 3; ++l)
                rhs[static_cast<size_t>(l)] = -(W0[ci][static_cast<size_t>(l)] * mats[ci].Bv.at(0, 1));
            append_digit_rows(s1, lat[1][ci], rhs);
        }
        auto sp1 = solve_affine(s1.A, s1.rhs);
        if (!sp1) return true;
        spend(sp1->size(q));

        enumerate_affine(F, *sp1, [&](const std::vector<uint16_t>& x1) {
            Vec3 c1 = col_from_raw(ext, boxes[1], x1);
            if (hform(c1, c1) != one) return true;

            std::vector<std::array<LocalElem, 3>> W1(mats.size());
            for (size_t ci = 0; ci < mats.size(); ++ci) {
                for (int l = 0; l < 3; ++l) {
                    LocalElem acc = lzero;
                    for (int s = 0; s < 3; ++s)
                        acc = acc + mats[ci].Bwinv.at(l, s) * embedded(c1[static_cast<size_t>(s)]);
                    W1[ci][static_cast<size_t>(l)] = std::move(acc);
                }
            }

            StageSystem s2 = build_stage(ext, boxes[2], {{c0, one}, {c1, zero}});
            for (size_t ci = 0; ci < mats.size(); ++ci) {
                std::array<LocalElem, 3> rhs;
                for (int l = 0; l < 3; ++l)
                    rhs[static_cast<size_t>(l)] =
                        -(W0[ci][static_cast<size_t>(l)] * mats[ci].Bv.at(0, 2) +
                          W1[ci][static_cast<size_t>(l)] * mats[ci].Bv.at(1, 2));
                append_digit_rows(s2, lat[2][ci], rhs);
            }
            auto sp2 = solve_affine(s2.A, s2.rhs);
            if (!sp2) return true;
            spend(sp2->size(q));

            enumerate_affine(F, *sp2, [&](const std::vector<uint16_t>& x2) {
                Vec3 c2 = col_from_raw(ext, boxes[2], x2);
                if (hform(c2, c2) != zero) return true;
                Mat3 g = Mat3::zero(ext);
                for (int r = 0; r < 3; ++r) {
                    g.at(r, 0) = c0[static_cast<size_t>(r)];
                    g.at(r, 1) = c1[static_cast<size_t>(r)];
                    g.at(r, 2) = c2[static_cast<size_t>(r)];
                }
                if (g.det() != one) return true;
                if (!is_unitary(g)) return true;
                if (!spec.is_member(g)) return true;
                SU3_INVARIANT(tree_act(model, g, *conds[0].first).key == conds[0].second->key,
                              "window survivor fails to transport the vertex");
                out.push_back(std::move(g));
                if (out.size() >= max_results) {
                    stopped = true;
                    return false;
                }
                return true;
            });
            return !stopped;
        });
        return !stopped;
    });
    return out;
}

AffineSpace free_space(int nvars) {
    AffineSpace sp;
    sp.origin.assign(static_cast<size_t>(nvars), 0);
    for (int j = 0; j < nvars; ++j) {
        std::vector<uint16_t> b(static_cast<size_t>(nvars), 0);
        b[static_cast<size_t>(j)] = 1;
        sp.basis.push_back(std::move(b));
    }
    return sp;
}

Poly poly_lcm(const Poly& a, const Poly& b) {
    Poly g = Poly::gcd(a, b);
    auto [quo, rem] = Poly::divmod(a * b, g);
    SU3_INVARIANT(rem.deg() < 0, "lcm division left a remainder");
    return quo.monic();
}

}  // namespace

// ---------------------------------------------------------------------------

SubgroupSpec SubgroupSpec::congruence(const ExtensionContext& e, BIdeal J) {
    SU3_CHECK(J.a.deg() >= 0, "congruence level must be a nonzero ideal");
    SU3_CHECK(ideal_conj(J) == J, "congruence level must be conjugation-stable");
    return SubgroupSpec{&e, std::move(J)};
}

bool SubgroupSpec::is_member(const Mat3& g) const {
    if (!g.entries_in_B()) return false;
    if (!is_unitary(g)) return false;
    if (level) {
        const EllElem one = ext->one();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                EllElem diff = i == j ? g.at(i, j) - one : g.at(i, j);
                if (!ideal_contains(*level, diff)) return false;
            }
    }
    return true;
}

std::string SubgroupSpec::name() const {
    return level ? "Gamma[" + level->to_string() + "]" : "Gamma";
}

std::vector<Mat3> enumerate_members(const SubgroupSpec& spec, int degbound, long long work_cap) {
    SU3_CHECK(spec.ext != nullptr, "subgroup spec missing extension context");
    SU3_CHECK(degbound >= 0, "degree bound must be nonnegative");
    const ExtensionContext& ext = *spec.ext;
    const FqContext& F = ext.fq();
    const int q = F.q();

    ColBox box;
    const int vdeg = std::max(-1, degbound - (ext.d() + 1) / 2);
    for (int r = 0; r < 3; ++r) {
        box.ud[r] = degbound;
        box.vd[r] = vdeg;
    }
    const int nv = box.nvars();

    long long budget = work_cap;
    auto spend = [&](long long n) {
        budget -= n;
        if (budget < 0) throw window_error("member enumeration exceeds the work cap");
    };
    long long full = 1;
    for (int j = 0; j < nv; ++j) {
        full *= q;
        if (full > work_cap) throw window_error("member enumeration exceeds the work cap");
    }
    spend(full);

    const EllElem one = ext.one(), zero = ext.zero();
    std::vector<Mat3> out;
    enumerate_affine(F, free_space(nv), [&](const std::vector<uint16_t>& x0) {
        Vec3 c0 = col_from_raw(ext, box, x0);
        if (c0[0].is_zero() && c0[1].is_zero() && c0[2].is_zero()) return true;
        if (hform(c0, c0) != zero) return true;
        StageSystem s1 = build_stage(ext, box, {{c0, zero}});
        auto sp1 = solve_affine(s1.A, s1.rhs);
        if (!sp1) return true;
        spend(sp1->size(q));
        enumerate_affine(F, *sp1, [&](const std::vector<uint16_t>& x1) {
            Vec3 c1 = col_from_raw(ext, box, x1);
            if (hform(c1, c1) != one) return true;
            StageSystem s2 = build_stage(ext, box, {{c0, one}, {c1, zero}});
            auto sp2 = solve_affine(s2.A, s2.rhs);
            if (!sp2) return true;
            spend(sp2->size(q));
            enumerate_affine(F, *sp2, [&](const std::vector<uint16_t>& x2) {
                Vec3 c2 = col_from_raw(ext, box, x2);
                if (hform(c2, c2) != zero) return true;
                Mat3 g = Mat3::zero(ext);
                for (int r = 0; r < 3; ++r) {
                    g.at(r, 0) = c0[static_cast<size_t>(r)];
                    g.at(r, 1) = c1[static_cast<size_t>(r)];
                    g.at(r, 2) = c2[static_cast<size_t>(r)];
                }
                if (g.det() != one) return true;
                if (!spec.is_member(g)) return true;
                SU3_INVARIANT(is_unitary(g), "staged search produced a non-unitary matrix");
                out.push_back(std::move(g));
                return true;
            });
            return true;
        });
        return true;
    });
    return out;
}

std::vector<Mat3> transporter_set(const SubgroupSpec& spec, const LocalContext& model,
                                  const TreeVertex& from, const TreeVertex& to, long long work_cap) {
    return window_search(spec, model, {{&from, &to}}, work_cap, SIZE_MAX);
}

std::vector<Mat3> vertex_stabilizer(const SubgroupSpec& spec, const LocalContext& model,
                                    const TreeVertex& v, long long work_cap) {
    return window_search(spec, model, {{&v, &v}}, work_cap, SIZE_MAX);
}

std::optional<Mat3> find_transporter(const SubgroupSpec& spec, const LocalContext& model,
                                     const TreeVertex& from, const TreeVertex& to, long long work_cap) {
    std::vector<Mat3> r = window_search(spec, model, {{&from, &to}}, work_cap, 1);
    if (r.empty()) return std::nullopt;
    return r[0];
}

std::vector<Mat3> edge_stabilizer(const SubgroupSpec& spec, const LocalContext& model,
                                  const TreeVertex& v, const TreeVertex& w, long long work_cap) {
    return window_search(spec, model, {{&v, &v}, {&w, &w}}, work_cap, SIZE_MAX);
}

CensusReport finite_order_census(const SubgroupSpec& spec, int degbound, long order_cap,
                                 long long work_cap) {
    CensusReport rep;
    rep.degbound = degbound;
    // Elements whose order exceeds order_cap (in particular, elements of
    // infinite order, which the window does contain once degbound >= 1) are
    // excluded rather than reported.
    for (Mat3& g : enumerate_members(spec, degbound, work_cap)) {
        Mat3 pw = g;
        long ord = 1;
        while (!pw.is_identity() && ord <= order_cap) {
            pw = pw * g;
            ++ord;
        }
        if (ord > order_cap) continue;
        rep.order_histogram[ord]++;
        rep.elements.push_back(std::move(g));
    }
    return rep;
}

Mat3 boundary_conjugator(const BoundaryPoint& xi) {
    SU3_CHECK(xi.ext != nullptr, "boundary point missing extension context");
    if (xi.infinity) return Mat3::identity(*xi.ext);
    return g_uv(xi.u, xi.v).unitary_inverse();
}

std::pair<EllElem, EllElem> unipotent_pair(const BoundaryPoint& xi, const Mat3& g) {
    SU3_CHECK(xi.ext != nullptr && g.ext == xi.ext, "mismatched contexts");
    const ExtensionContext& ext = *xi.ext;
    Mat3 c = boundary_conjugator(xi);
    Mat3 m = c.unitary_inverse() * g * c;
    const EllElem one = ext.one();
    SU3_CHECK(m.is_upper_triangular(), "element does not fix the cusp unipotently");
    SU3_CHECK(m.at(0, 0) == one && m.at(1, 1) == one && m.at(2, 2) == one,
              "element is not unipotent at the cusp");
    EllElem x = m.at(1, 2), y = m.at(0, 2);
    SU3_CHECK(m.at(0, 1) == -(x.conj()), "conjugate is not of standard unipotent shape");
    SU3_INVARIANT(hpair_check(x, y), "unipotent coordinates fail the pair condition");
    return {x, y};
}

CuspFiltration cusp_filtration(const SubgroupSpec& spec, const BoundaryPoint& xi, int degbound) {
    SU3_CHECK(spec.ext != nullptr && xi.ext == spec.ext, "mismatched contexts");
    SU3_CHECK(degbound >= 0, "degree bound must be nonnegative");
    const ExtensionContext& ext = *spec.ext;
    const FqContext& F = ext.fq();
    SU3_CHECK(F.p() != 2, "filtration parametrization needs odd characteristic");

    Mat3 c = boundary_conjugator(xi);
    Mat3 cinv = c.unitary_inverse();
    Poly den = Poly::constant(F, 1);
    for (const Mat3* mp : {&c, &cinv})
        for (const EllElem& e : mp->e) {
            den = poly_lcm(den, e.a.den());
            den = poly_lcm(den, e.b.den());
        }

    const int nd = degbound + den.deg();
    long long cand = 1;
    for (int i = 0; i < 3 * (nd + 1); ++i) {
        cand *= F.q();
        if (cand > 20'000'000) throw window_error("cusp filtration window too large");
    }

    const EllElem half = ext.from_fq(F.inv(F.from_int(2)));
    CuspFiltration out{xi, {}, {}, {}};
    const int len = nd + 1;
    enumerate_affine(F, free_space(3 * len), [&](const std::vector<uint16_t>& raw) {
        Poly X0(F, std::vector<uint16_t>(raw.begin(), raw.begin() + len));
        Poly X1(F, std::vector<uint16_t>(raw.begin() + len, raw.begin() + 2 * len));
        Poly Z(F, std::vector<uint16_t>(raw.begin() + 2 * len, raw.end()));
        EllElem x = ext.make(RatF(X0, den), RatF(X1, den));
        EllElem y = -(x.norm()) * half + ext.make(RatF(Poly(F), den), RatF(Z, den));
        Mat3 m = u_a(x, y);
        Mat3 g = xi.infinity ? m : c * m * cinv;
        if (!spec.is_member(g)) return true;
        out.elements.push_back(std::move(g));
        out.pairs.emplace_back(x, y);
        bool seen = false;
        for (const EllElem& u : out.u_coords)
            if (u == x) {
                seen = true;
                break;
            }
        if (!seen) out.u_coords.push_back(x);
        return true;
    });
    return out;
}

}  // namespace su3tree
