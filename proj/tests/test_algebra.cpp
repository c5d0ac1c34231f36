#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <climits>
#include <set>

#include "su3tree/errors.hpp"
#include "su3tree/poly.hpp"
#include "su3tree/quad_ext.hpp"
#include "testutil.hpp"

using namespace su3tree;
using namespace su3tree::testutil;

TEST_CASE("F_3 base arithmetic") {
    FqContext F(3, 1);
    CHECK(F.q() == 3);
    CHECK(F.add(2, 2) == 1);
    CHECK(F.mul(2, 2) == 1);
    CHECK(F.inv(2) == 2);
    CHECK(F.inv(1) == 1);
    CHECK_THROWS_AS(F.inv(0), domain_error);
    auto els = F.elements();
    REQUIRE(els.size() == 3);
    CHECK(els[0] == 0);
    CHECK(els[1] == 1);
    CHECK(els[2] == 2);
}

TEST_CASE("F_9 modulus selection and arithmetic") {
    FqContext F(3, 2);
    // smallest-lexicographic irreducible over F_3 of degree 2 is x^2 + 1
    CHECK(F.modulus() == std::vector<int>({1, 0, 1}));
    uint16_t x = F.from_coords({0, 1});
    CHECK(F.mul(x, x) == F.from_int(2));  // x^2 = -1 = 2
    // inv(x) = 2x: frozen from the extended-Euclid computation
    // x * 2x = 2x^2 = 2*(-1) = 1 mod (x^2+1)
    uint16_t twox = F.from_coords({0, 2});
    CHECK(F.inv(x) == twox);
    CHECK(F.mul(x, twox) == F.one());

    auto els = F.elements();
    std::set<uint16_t> seen(els.begin(), els.end());
    CHECK(seen.size() == 9);
    for (uint16_t a : F.elements())
        if (a != 0) CHECK(F.pow(a, 8) == F.one());
}

TEST_CASE("field axioms, randomized") {
    for (auto [p, r] : {std::pair{3, 1}, {3, 2}, {5, 1}, {7, 1}}) {
        FqContext F(p, r);
        for (int it = 0; it < 2000; ++it) {
            uint16_t a = random_fq(F), b = random_fq(F), c = random_fq(F);
            CHECK(F.add(a, b) == F.add(b, a));
            CHECK(F.mul(a, b) == F.mul(b, a));
            CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
            CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
            CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            CHECK(F.add(a, F.neg(a)) == 0);
            if (a != 0) {
                CHECK(F.mul(a, F.inv(a)) == F.one());
                CHECK(F.inv(F.inv(a)) == a);
                CHECK(F.pow(a, F.q() - 1) == F.one());
            }
            CHECK(F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b)));
        }
    }
}

TEST_CASE("context rules") {
    CHECK_THROWS_AS(FqContext(2, 1), domain_error);   // characteristic 2 excluded
    CHECK_THROWS_AS(FqContext(4, 1), domain_error);   // not prime
    CHECK_THROWS_AS(FqContext(3, 5), domain_error);   // q > table cap
    FqContext F1(3, 1), F2(3, 1);
    FqElem a(1, F1), b(1, F2);
    CHECK_THROWS_AS((void)(a + b), domain_error);
}

TEST_CASE("polynomial division, gcd, xgcd") {
    FqContext F(3, 1);
    for (int it = 0; it < 1000; ++it) {
        Poly a = random_poly(F, 6), b = random_nonzero_poly(F, 4);
        auto [q, rem] = Poly::divmod(a, b);
        CHECK(q * b + rem == a);
        CHECK((rem.is_zero() || rem.deg() < b.deg()));

        Poly g, x, y;
        Poly::xgcd(a, b, g, x, y);
        CHECK(x * a + y * b == g);
        CHECK(g == Poly::gcd(a, b));
        if (!g.is_zero()) {
            CHECK(g.is_monic());
            CHECK(Poly::divmod(a, g).second.is_zero());
            CHECK(Poly::divmod(b, g).second.is_zero());
        }
    }
}

TEST_CASE("rational function valuation at the infinite place") {
    FqContext F(3, 1);
    RatF t = RatF::of(Poly::t(F));
    CHECK(ExtensionContext::val_P(t) == -1);
    Poly t2p1 = Poly::from_ints(F, {1, 0, 1});
    CHECK(ExtensionContext::val_P(RatF(Poly::constant(F, 1), t2p1)) == 2);
    CHECK(ExtensionContext::val_P(RatF(F)) == INT_MAX);
    for (int it = 0; it < 2000; ++it) {
        RatF x = random_ratf(F, 4), y = random_ratf(F, 4);
        if (x.is_zero() || y.is_zero()) continue;
        CHECK(ExtensionContext::val_P(x * y) ==
              ExtensionContext::val_P(x) + ExtensionContext::val_P(y));
        RatF s = x + y;
        if (!s.is_zero())
            CHECK(ExtensionContext::val_P(s) >=
                  std::min(ExtensionContext::val_P(x), ExtensionContext::val_P(y)));
    }
}

TEST_CASE("square roots") {
    FqContext F(3, 1);
    for (int it = 0; it < 500; ++it) {
        Poly s = random_poly(F, 5);
        auto r = poly_sqrt(s * s);
        REQUIRE(r.has_value());
        CHECK(*r * *r == s * s);
    }
    // t has no square root
    CHECK(!poly_sqrt(Poly::t(F)).has_value());
    // 2 = -1 is not a square mod 3
    CHECK(!poly_sqrt(Poly::constant(F, 2)).has_value());
}

static ExtensionContext make_ext_t(const FqContext& F) {
    return ExtensionContext(F, Poly::t(F));
}

TEST_CASE("extension context validation") {
    FqContext F(3, 1);
    CHECK_THROWS_AS(ExtensionContext(F, Poly::from_ints(F, {1, 0, 1})), domain_error);  // even degree
    CHECK_THROWS_AS(ExtensionContext(F, Poly::from_ints(F, {0, 0, 0, 1})), domain_error);  // t^3 = t*t^2 not squarefree
    ExtensionContext ok(F, Poly::from_ints(F, {0, -1, 0, 1}));  // t^3 - t squarefree
    CHECK(ok.d() == 3);
}

TEST_CASE("conjugation, norm, trace") {
    FqContext F(3, 1);
    ExtensionContext ext = make_ext_t(F);
    CHECK(ext.omega().conj() == -ext.omega());
    CHECK(ext.t().conj() == ext.t());
    CHECK(ext.omega().norm() == -ext.t());    // N(w) = -D = -t
    CHECK(ext.omega().trace() == ext.zero());
    CHECK(ext.one().norm() == ext.one());
    CHECK(ext.one().trace() == ext.from_int(2));
    for (int it = 0; it < 2000; ++it) {
        EllElem x = random_ell(ext, 3), y = random_ell(ext, 3);
        CHECK(x.conj().conj() == x);
        CHECK((x * y).conj() == x.conj() * y.conj());
        CHECK((x + y).conj() == x.conj() + y.conj());
        // norm formula against the explicit product
        CHECK(x.norm() == x * x.conj());
        CHECK(x.trace() == x + x.conj());
        CHECK(x.norm().in_k());
        CHECK(x.trace().in_k());
        if (!x.is_zero()) CHECK(x * x.inv() == ext.one());
        // fixed field of conjugation is exactly k
        CHECK((x.conj() == x) == x.in_k());
    }
}

TEST_CASE("H-pair condition and group law compatibility") {
    FqContext F(3, 1);
    ExtensionContext ext = make_ext_t(F);
    CHECK(hpair_check(ext.zero(), ext.zero()));
    // (1, -1/2): T(-1/2) = -1 = -N(1)
    RatF mhalf = -RatF::constant(F, F.inv(F.from_int(2)));
    CHECK(hpair_check(ext.one(), ext.make(mhalf, RatF(F))));
    CHECK(!hpair_check(ext.one(), ext.zero()));
    CHECK(hpair0_check(ext.zero(), ext.omega()));
    CHECK(!hpair0_check(ext.one(), ext.make(mhalf, RatF(F))));
    for (int it = 0; it < 2000; ++it) {
        auto [u, v] = random_hpair(ext, 3);
        auto [x, y] = random_hpair(ext, 3);
        CHECK(hpair_check(u, v));
        // the unipotent group law stays inside H(ell,k)
        CHECK(hpair_check(u + x, v + y - u.conj() * x));
    }
}

TEST_CASE("valuation at Q") {
    FqContext F(3, 1);
    ExtensionContext ext = make_ext_t(F);
    CHECK(ext.val_Q(ext.t()) == -2);
    CHECK(ext.val_Q(ext.omega()) == -1);
    CHECK(ext.val_Q(ext.zero()) == INT_MAX);
    ExtensionContext ext3(F, Poly::from_ints(F, {0, -1, 0, 1}));
    CHECK(ext3.val_Q(ext3.omega()) == -3);
    for (int it = 0; it < 2000; ++it) {
        EllElem x = random_nonzero_ell(ext, 3), y = random_nonzero_ell(ext, 3);
        CHECK(ext.val_Q(x.conj()) == ext.val_Q(x));
        CHECK(ext.val_Q(x * y) == ext.val_Q(x) + ext.val_Q(y));
        EllElem s = x + y;
        if (!s.is_zero()) CHECK(ext.val_Q(s) >= std::min(ext.val_Q(x), ext.val_Q(y)));
        // norm compatibility: val_Q(x conj(x)) = 2 val_P(N(x))
        CHECK(ext.val_Q(x * x.conj()) == 2 * ExtensionContext::val_P(x.norm().a));
    }
}

TEST_CASE("integrality in B") {
    FqContext F(3, 1);
    ExtensionContext ext = make_ext_t(F);
    CHECK((ext.t() + ext.omega()).in_B());
    CHECK(!ext.t().inv().in_B());
    CHECK(!(ext.omega() / ext.make(ext.D(), Poly(F))).in_B());  // w/D
    CHECK(ext.t().in_A());
    CHECK(!ext.omega().in_A());
    // nonzero integral elements have val_Q <= 0
    for (int it = 0; it < 500; ++it) {
        EllElem x = ext.make(random_poly(F, 3), random_poly(F, 3));
        if (x.is_zero()) continue;
        CHECK(ext.val_Q(x) <= 0);
    }
    // principal divisibility
    EllElem w = ext.omega();
    CHECK(ext.divides(w, ext.t()));            // t = w * w
    CHECK(ext.divides(w, w));
    CHECK(!ext.divides(w, ext.one()));
    CHECK(ext.divides(ext.one(), w));
}
