#include "su3tree/unitary.hpp"

#include "su3tree/errors.hpp"

namespace su3tree {

Mat3 Mat3::zero(const ExtensionContext& ext) {
    Mat3 m;
    m.ext = &ext;
    for (auto& x : m.e) x = ext.zero();
    return m;
}

Mat3 Mat3::identity(const ExtensionContext& ext) {
    Mat3 m = zero(ext);
    for (int i = 0; i < 3; ++i) m.at(i, i) = ext.one();
    return m;
}

Mat3 Mat3::conj() const {
    Mat3 m = *this;
    for (auto& x : m.e) x = x.conj();
    return m;
}

Mat3 Mat3::transpose() const {
    Mat3 m = *this;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = at(j, i);
    return m;
}

EllElem Mat3::det() const {
    auto& m = *this;
    return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
           m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
           m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

Mat3 Mat3::unitary_inverse() const {
    // (H conj(g)^T H)_{ij} = conj(g_{2-j, 2-i})
    Mat3 m = *this;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = at(2 - j, 2 - i).conj();
    return m;
}

bool Mat3::entries_in_B() const {
    for (const auto& x : e)
        if (!x.in_B()) return false;
    return true;
}

bool Mat3::is_upper_triangular() const {
    return at(1, 0).is_zero() && at(2, 0).is_zero() && at(2, 1).is_zero();
}

bool Mat3::is_identity() const { return *this == identity(*ext); }

std::string Mat3::to_string() const {
    std::string s = "[";
    for (int i = 0; i < 3; ++i) {
        s += i ? "; " : "";
        for (int j = 0; j < 3; ++j) s += (j ? ", " : "") + at(i, j).to_string();
    }
    return s + "]";
}

Mat3 operator*(const Mat3& x, const Mat3& y) {
    SU3_CHECK(x.ext == y.ext, "unitary: context mismatch");
    Mat3 m = Mat3::zero(*x.ext);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            EllElem s = x.ext->zero();
            for (int k = 0; k < 3; ++k) s = s + x.at(i, k) * y.at(k, j);
            m.at(i, j) = s;
        }
    return m;
}

Vec3 operator*(const Mat3& m, const Vec3& v) {
    Vec3 w;
    for (int i = 0; i < 3; ++i) {
        EllElem s = m.ext->zero();
        for (int k = 0; k < 3; ++k) s = s + m.at(i, k) * v[k];
        w[i] = s;
    }
    return w;
}

bool operator==(const Mat3& x, const Mat3& y) {
    for (int i = 0; i < 9; ++i)
        if (x.e[i] != y.e[i]) return false;
    return true;
}

EllElem hform(const Vec3& x, const Vec3& y) {
    return x[0] * y[2].conj() + x[1] * y[1].conj() + x[2] * y[0].conj();
}

bool is_unitary(const Mat3& g) {
    if (g.det() != g.ext->one()) return false;
    return (g.unitary_inverse() * g).is_identity();
}

bool is_unipotent(const Mat3& g) {
    Mat3 n = g;
    for (int i = 0; i < 3; ++i) n.at(i, i) = n.at(i, i) - g.ext->one();
    return (n * n * n) == Mat3::zero(*g.ext);
}

Mat3 u_a(const EllElem& u, const EllElem& v) {
    SU3_CHECK(hpair_check(u, v), "unitary: u_a requires N(u) + T(v) = 0");
    const ExtensionContext& ext = *u.ext;
    Mat3 m = Mat3::identity(ext);
    m.at(0, 1) = -u.conj();
    m.at(0, 2) = v;
    m.at(1, 2) = u;
    return m;
}

Mat3 torus_a(const EllElem& tau) {
    SU3_CHECK(!tau.is_zero(), "unitary: torus element needs tau != 0");
    const ExtensionContext& ext = *tau.ext;
    Mat3 m = Mat3::zero(ext);
    m.at(0, 0) = tau;
    m.at(1, 1) = tau.conj() / tau;
    m.at(2, 2) = tau.conj().inv();
    return m;
}

Mat3 weyl_s(const ExtensionContext& ext) {
    Mat3 m = Mat3::zero(ext);
    EllElem minus1 = -ext.one();
    m.at(0, 2) = minus1;
    m.at(1, 1) = minus1;
    m.at(2, 0) = minus1;
    return m;
}

Mat3 g_uv(const EllElem& u, const EllElem& v) { return weyl_s(*u.ext) * u_a(u, v); }

BruhatDecomp bruhat(const Mat3& g) {
    const ExtensionContext& ext = *g.ext;
    BruhatDecomp d{true, ext.zero(), ext.zero(), g};
    if (g.at(2, 0).is_zero()) {
        SU3_INVARIANT(g.is_upper_triangular(),
                      "bruhat: unitary matrix with zero corner must be triangular");
        return d;
    }
    // Left-multiplying by g_{-x, ybar} with x = g21/g31 and
    // ybar = -(g11 + conj(x) g21)/g31 clears the first column below the
    // corner; then g = u_a(x, conj(ybar)) * s * b.
    EllElem x = g.at(1, 0) / g.at(2, 0);
    EllElem ybar = -(g.at(0, 0) + x.conj() * g.at(1, 0)) / g.at(2, 0);
    d.in_borel = false;
    d.x = x;
    d.y = ybar.conj();
    d.b = g_uv(-x, ybar) * g;
    SU3_INVARIANT(d.b.is_upper_triangular(), "bruhat: reduction failed");
    return d;
}

std::vector<std::vector<EllElem>> ell_kernel(const std::vector<std::vector<EllElem>>& rows,
                                             const ExtensionContext& ext) {
    size_t nr = rows.size();
    size_t nc = nr ? rows[0].size() : 0;
    for (const auto& r : rows) SU3_CHECK(r.size() == nc, "kernel: ragged matrix");
    std::vector<std::vector<EllElem>> m = rows;
    size_t row = 0;
    std::vector<int> colpiv(nc, -1);
    std::vector<size_t> pivcol;
    for (size_t c = 0; c < nc && row < nr; ++c) {
        size_t piv = nr;
        for (size_t i = row; i < nr; ++i)
            if (!m[i][c].is_zero()) { piv = i; break; }
        if (piv == nr) continue;
        std::swap(m[piv], m[row]);
        EllElem inv = m[row][c].inv();
        for (size_t j = 0; j < nc; ++j) m[row][j] = inv * m[row][j];
        for (size_t i = 0; i < nr; ++i) {
            if (i == row || m[i][c].is_zero()) continue;
            EllElem f = m[i][c];
            for (size_t j = 0; j < nc; ++j) m[i][j] = m[i][j] - f * m[row][j];
        }
        colpiv[c] = int(row);
        pivcol.push_back(c);
        row++;
    }
    std::vector<std::vector<EllElem>> basis;
    for (size_t j = 0; j < nc; ++j) {
        if (colpiv[j] >= 0) continue;
        std::vector<EllElem> v(nc, ext.zero());
        v[j] = ext.one();
        for (size_t i = 0; i < row; ++i) v[pivcol[i]] = -m[i][j];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Vec3> kernel(const Mat3& mat) {
    const ExtensionContext& ext = *mat.ext;
    std::vector<std::vector<EllElem>> rows(3, std::vector<EllElem>(3, ext.zero()));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rows[i][j] = mat.at(i, j);
    std::vector<Vec3> basis;
    for (auto& v : ell_kernel(rows, ext)) basis.push_back(Vec3{v[0], v[1], v[2]});
    return basis;
}

std::vector<Mat3> group_closure(const std::vector<Mat3>& gens, size_t cap) {
    SU3_CHECK(!gens.empty(), "closure: empty generating set");
    std::vector<Mat3> els = {Mat3::identity(*gens[0].ext)};
    auto known = [&](const Mat3& g) {
        for (const auto& h : els)
            if (h == g) return true;
        return false;
    };
    for (const auto& g : gens)
        if (!known(g)) els.push_back(g);
    size_t frontier = 0;
    while (frontier < els.size()) {
        Mat3 g = els[frontier++];
        for (const auto& h : gens) {
            Mat3 gh = g * h;
            if (!known(gh)) {
                if (els.size() >= cap)
                    throw window_error("closure: cap exceeded (not a finite p-group within bound)");
                els.push_back(gh);
            }
        }
    }
    return els;
}

long long element_order(const Mat3& g, long long cap) {
    Mat3 p = g;
    Mat3 id = Mat3::identity(*g.ext);
    for (long long n = 1; n <= cap; ++n) {
        if (p == id) return n;
        p = p * g;
    }
    throw window_error("order: exceeds cap");
}

}  // namespace su3tree
