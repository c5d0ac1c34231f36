#pragma once

#include <array>
#include <string>
#include <vector>

#include "su3tree/quad_ext.hpp"

namespace su3tree {

using Vec3 = std::array<EllElem, 3>;

// 3x3 matrix over ell.  The special unitary group of the hermitian form
//   h(x, y) = x_1 conj(y_3) + x_2 conj(y_2) + x_3 conj(y_1)
// (Gram matrix H = antidiag(1,1,1)) is the ambient group of everything here.
struct Mat3 {
    std::array<EllElem, 9> e;
    const ExtensionContext* ext = nullptr;

    const EllElem& at(int i, int j) const { return e[size_t(i) * 3 + j]; }
    EllElem& at(int i, int j) { return e[size_t(i) * 3 + j]; }

    static Mat3 zero(const ExtensionContext& ext);
    static Mat3 identity(const ExtensionContext& ext);

    Mat3 conj() const;       // entrywise conjugation
    Mat3 transpose() const;
    EllElem det() const;
    // Inverse of a unitary matrix: H conj(g)^T H; cheap and exact.
    Mat3 unitary_inverse() const;

    bool entries_in_B() const;
    bool is_upper_triangular() const;
    bool is_identity() const;

    std::string to_string() const;

    friend Mat3 operator*(const Mat3& x, const Mat3& y);
    friend Vec3 operator*(const Mat3& m, const Vec3& v);
    friend bool operator==(const Mat3& x, const Mat3& y);
    friend bool operator!=(const Mat3& x, const Mat3& y) { return !(x == y); }
};

// h(x, y) for column vectors.
EllElem hform(const Vec3& x, const Vec3& y);

// det g = 1 and conj(g)^T H g = H.
bool is_unitary(const Mat3& g);

// (g - 1)^3 = 0.
bool is_unipotent(const Mat3& g);

// Standard generators.
//
// Unipotent upper-triangular:
//   u_a(u, v) = [[1, -conj(u), v], [0, 1, u], [0, 0, 1]],
// defined exactly when N(u) + T(v) = 0 (throws otherwise).  Law:
//   u_a(u,v) u_a(x,y) = u_a(u+x, v+y-conj(u)x),  u_a(u,v)^{-1} = u_a(-u, conj(v)).
Mat3 u_a(const EllElem& u, const EllElem& v);

// Torus element diag(tau, conj(tau)/tau, 1/conj(tau)), tau != 0.
Mat3 torus_a(const EllElem& tau);

// The Weyl involution antidiag(-1,-1,-1).
Mat3 weyl_s(const ExtensionContext& ext);

// g_{u,v} = s * u_a(u,v); sends the boundary point labelled (u, v) to the
// point at infinity (its inverse maps infinity to (u, v)).  g_infinity = 1.
Mat3 g_uv(const EllElem& u, const EllElem& v);

// Bruhat decomposition of g in SU(h)(k): either g is upper triangular, or
// g = u_a(x, y) * s * b with b upper triangular.  Unitarity forces
// g_{21} = g_{32} = 0 whenever g_{31} = 0, which the routine asserts.
struct BruhatDecomp {
    bool in_borel;
    EllElem x, y;  // meaningful iff !in_borel
    Mat3 b;        // upper triangular; equals g itself when in_borel
};
BruhatDecomp bruhat(const Mat3& g);

// Basis of the right kernel of a rectangular matrix over ell (rows of equal
// length); used for fixed-space computations.
std::vector<std::vector<EllElem>> ell_kernel(const std::vector<std::vector<EllElem>>& rows,
                                             const ExtensionContext& ext);
// Basis of the right kernel over ell.
std::vector<Vec3> kernel(const Mat3& m);

// Closure of gens under multiplication; throws window_error beyond cap.
std::vector<Mat3> group_closure(const std::vector<Mat3>& gens, size_t cap);

// Multiplicative order, by repeated multiplication; throws window_error if
// the order exceeds cap.
long long element_order(const Mat3& g, long long cap);

}  // namespace su3tree
