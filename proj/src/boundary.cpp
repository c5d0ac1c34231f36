#include "su3tree/boundary.hpp"

#include "su3tree/errors.hpp"

namespace su3tree {

BoundaryPoint BoundaryPoint::inf(const ExtensionContext& ext) {
    return BoundaryPoint{true, ext.zero(), ext.zero(), &ext};
}

BoundaryPoint BoundaryPoint::at(const EllElem& u, const EllElem& v) {
    SU3_CHECK(hpair_check(u, v), "boundary: label requires N(u) + T(v) = 0");
    return BoundaryPoint{false, u, v, u.ext};
}

std::string BoundaryPoint::to_string() const {
    if (infinity) return "inf";
    return "(" + u.to_string() + ", " + v.to_string() + ")";
}

bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.infinity != b.infinity) return false;
    if (a.infinity) return true;
    return a.u == b.u && a.v == b.v;
}

Vec3 isotropic_line(const BoundaryPoint& xi) {
    const ExtensionContext& ext = *xi.ext;
    if (xi.infinity) return {ext.one(), ext.zero(), ext.zero()};
    return {-xi.v.conj(), xi.u, -ext.one()};
}

Vec3 line_normalize(const Vec3& w) {
    for (int i = 0; i < 3; ++i) {
        if (w[i].is_zero()) continue;
        EllElem s = w[i].inv();
        Vec3 r;
        for (int j = 0; j < 3; ++j) r[j] = s * w[j];
        return r;
    }
    throw domain_error("line: zero vector");
}

BoundaryPoint line_boundary(const Vec3& w) {
    const ExtensionContext& ext = *w[0].ext;
    SU3_CHECK(!(w[0].is_zero() && w[1].is_zero() && w[2].is_zero()), "boundary: zero vector");
    SU3_CHECK(hform(w, w).is_zero(), "boundary: vector not isotropic");
    if (w[2].is_zero()) {
        // isotropy forces w_2 = 0 as well: the line is span(e_1)
        SU3_INVARIANT(w[1].is_zero(), "boundary: isotropic with w3=0 needs w2=0");
        return BoundaryPoint::inf(ext);
    }
    EllElem s = -(w[2].inv());
    return BoundaryPoint::at(s * w[1], -(s * w[0]).conj());
}

BoundaryPoint act_boundary(const Mat3& g, const BoundaryPoint& xi) {
    Mat3 m = xi.infinity ? g : g * g_uv(xi.u, xi.v).unitary_inverse();
    BruhatDecomp d = bruhat(m);
    if (d.in_borel) return BoundaryPoint::inf(*xi.ext);
    return BoundaryPoint::at(-d.x, d.y.conj());
}

BoundaryPoint act_boundary_line(const Mat3& g, const BoundaryPoint& xi) {
    return line_boundary(g * isotropic_line(xi));
}

BoundaryPoint fixed_boundary_point(const std::vector<Mat3>& elements) {
    SU3_CHECK(!elements.empty(), "fixed: empty element set");
    const ExtensionContext& ext = *elements[0].ext;

    // F = intersection of the kernels of g - 1 over the non-identity g,
    // maintained as the kernel of the stacked matrix; with only 3 columns we
    // can intersect pairwise via kernel of [basis matrix restricted].
    bool nontrivial = false;
    // Represent F by a basis; start with the full space.
    std::vector<Vec3> F = {{ext.one(), ext.zero(), ext.zero()},
                           {ext.zero(), ext.one(), ext.zero()},
                           {ext.zero(), ext.zero(), ext.one()}};
    for (const auto& g : elements) {
        if (g.is_identity()) continue;
        nontrivial = true;
        // Solve (g-1) (sum_j c_j F_j) = 0 for the coefficient vector c.
        Mat3 n = g;
        for (int i = 0; i < 3; ++i) n.at(i, i) = n.at(i, i) - ext.one();
        std::vector<std::vector<EllElem>> rows(3, std::vector<EllElem>(F.size(), ext.zero()));
        for (size_t j = 0; j < F.size(); ++j) {
            Vec3 img = n * F[j];
            for (int i = 0; i < 3; ++i) rows[i][j] = img[i];
        }
        std::vector<Vec3> newF;
        for (const auto& c : ell_kernel(rows, ext)) {
            Vec3 v = {ext.zero(), ext.zero(), ext.zero()};
            for (size_t j = 0; j < F.size(); ++j)
                for (int i = 0; i < 3; ++i) v[i] = v[i] + c[j] * F[j][i];
            newF.push_back(v);
        }
        F = std::move(newF);
        if (F.empty()) break;
    }
    SU3_CHECK(nontrivial, "fixed: trivial group fixes the whole boundary");
    if (F.empty()) throw domain_error("fixed: no common fixed vector (input not unipotent-compatible)");
    SU3_INVARIANT(F.size() <= 2, "fixed: nontrivial unitary element with full fixed space");

    if (F.size() == 1) {
        if (hform(F[0], F[0]).is_zero()) return line_boundary(F[0]);
        throw domain_error("fixed: one-dimensional fixed space is anisotropic (precondition violation)");
    }

    // dim F = 2.  Radical of h restricted to F first: h(c1 w1 + c2 w2, w_j)
    // = 0 for j = 1, 2.  For groups of unipotent unitary elements the
    // restriction is degenerate and the radical is the unique isotropic
    // line.
    Vec3 w1 = F[0], w2 = F[1];
    EllElem h11 = hform(w1, w1), h12 = hform(w1, w2);
    EllElem h21 = hform(w2, w1), h22 = hform(w2, w2);
    std::vector<std::vector<EllElem>> gram = {{h11, h21}, {h12, h22}};
    std::vector<std::vector<EllElem>> rad = ell_kernel(gram, ext);
    SU3_INVARIANT(rad.size() <= 1, "fixed: restricted form cannot vanish on a 2-dim fixed space");
    if (rad.size() == 1) {
        Vec3 r;
        for (int i = 0; i < 3; ++i) r[i] = rad[0][0] * w1[i] + rad[0][1] * w2[i];
        SU3_INVARIANT(hform(r, r).is_zero(), "fixed: radical vector must be isotropic");
        return line_boundary(r);
    }

    // Nondegenerate restriction (non-generic input): diagonalize, then the
    // quadratic in one variable.  Square roots are taken in ell only, i.e.
    // pure solutions lambda in k or in k*omega of N(lambda) = mu.
    if (h11.is_zero()) return line_boundary(w1);
    if (h22.is_zero()) return line_boundary(w2);
    EllElem fcoef = h12 / h22;
    Vec3 w1p;
    for (int i = 0; i < 3; ++i) w1p[i] = w1[i] - fcoef * w2[i];
    EllElem h11p = hform(w1p, w1p);
    if (h11p.is_zero()) return line_boundary(w1p);
    // Lines w1' + lambda w2: isotropic iff N(lambda) = -h11'/h22 =: mu in k.
    EllElem muE = -(h11p / h22);
    SU3_INVARIANT(muE.in_k(), "fixed: diagonal ratio of a hermitian form must lie in k");
    RatF mu = muE.a;
    EllElem lam = ext.zero();
    if (auto a = ratf_sqrt(mu)) {
        lam = ext.make(*a, RatF(ext.fq()));
    } else if (auto b = ratf_sqrt(-(mu / RatF::of(ext.D())))) {
        lam = ext.make(RatF(ext.fq()), *b);
    } else {
        throw domain_error("fixed: no isotropic vector over ell (precondition violation)");
    }
    Vec3 v;
    for (int i = 0; i < 3; ++i) v[i] = w1p[i] + lam * w2[i];
    return line_boundary(v);
}

}  // namespace su3tree
