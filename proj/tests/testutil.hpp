#pragma once

#include <random>

#include "su3tree/boundary.hpp"
#include "su3tree/quad_ext.hpp"
#include "su3tree/unitary.hpp"

namespace su3tree::testutil {

// Deterministic RNG for the randomized suites; a --seed style override is
// not needed because regressions must be reproducible.
inline std::mt19937& rng() {
    static std::mt19937 gen(0x5eed5u);
    return gen;
}

inline int rint(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng());
}

inline uint16_t random_fq(const FqContext& F) { return uint16_t(rint(0, F.q() - 1)); }

inline Poly random_poly(const FqContext& F, int maxdeg) {
    std::vector<uint16_t> c(size_t(rint(0, maxdeg)) + 1);
    for (auto& x : c) x = random_fq(F);
    return Poly(F, c);
}

inline Poly random_nonzero_poly(const FqContext& F, int maxdeg) {
    while (true) {
        Poly p = random_poly(F, maxdeg);
        if (!p.is_zero()) return p;
    }
}

inline RatF random_ratf(const FqContext& F, int maxdeg) {
    return RatF(random_poly(F, maxdeg), random_nonzero_poly(F, maxdeg));
}

inline EllElem random_ell(const ExtensionContext& ext, int maxdeg) {
    return ext.make(random_ratf(ext.fq(), maxdeg), random_ratf(ext.fq(), maxdeg));
}

inline EllElem random_nonzero_ell(const ExtensionContext& ext, int maxdeg) {
    while (true) {
        EllElem x = random_ell(ext, maxdeg);
        if (!x.is_zero()) return x;
    }
}

// Random (u, v) with N(u) + T(v) = 0: pick u and the omega-part of v, then
// the k-part of v is forced to -N(u)/2.
inline std::pair<EllElem, EllElem> random_hpair(const ExtensionContext& ext, int maxdeg) {
    const FqContext& F = ext.fq();
    EllElem u = random_ell(ext, maxdeg);
    RatF half = RatF::constant(F, F.inv(F.from_int(2)));
    RatF va = -(u.norm().a * half);
    EllElem v = ext.make(va, random_ratf(F, maxdeg));
    return {u, v};
}

// Random element of SU(h)(k) as a product of generators.
inline Mat3 random_group_element(const ExtensionContext& ext, int factors, int maxdeg) {
    Mat3 g = Mat3::identity(ext);
    for (int i = 0; i < factors; ++i) {
        switch (rint(0, 2)) {
            case 0: {
                auto [u, v] = random_hpair(ext, maxdeg);
                g = g * u_a(u, v);
                break;
            }
            case 1:
                g = g * torus_a(random_nonzero_ell(ext, maxdeg));
                break;
            default:
                g = g * weyl_s(ext);
        }
    }
    return g;
}

}  // namespace su3tree::testutil
