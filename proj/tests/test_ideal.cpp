#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "su3tree/errors.hpp"
#include "su3tree/ideal.hpp"
#include "testutil.hpp"

using namespace su3tree;
using namespace su3tree::testutil;

namespace {

const FqContext F3(3, 1);
const ExtensionContext EXT(F3, Poly::t(F3));                       // D = t
const ExtensionContext EXT3(F3, Poly::from_ints(F3, {0, -1, 0, 1}));  // D = t^3 - t

EllElem random_b_elem(const ExtensionContext& ext, int maxdeg) {
    return ext.make(random_poly(ext.fq(), maxdeg), random_poly(ext.fq(), maxdeg));
}

BIdeal random_ideal(const ExtensionContext& ext, int maxdeg) {
    while (true) {
        EllElem g = random_b_elem(ext, maxdeg);
        EllElem h = random_b_elem(ext, maxdeg);
        if (g.is_zero() && h.is_zero()) continue;
        return ideal_from_generators(ext, {g, h});
    }
}

}  // namespace

TEST_CASE("principal ideal normal forms") {
    BIdeal one = principal_ideal(EXT.one());
    CHECK(one.is_unit_ideal());
    CHECK(ideal_norm(one).is_one());

    BIdeal w = principal_ideal(EXT.omega());
    CHECK(w.a == Poly::t(F3));
    CHECK(w.b.is_zero());
    CHECK(w.c.is_one());
    CHECK(ideal_norm(w) == Poly::t(F3));

    // (omega)^2 = (t) since omega^2 = t
    BIdeal t = principal_ideal(EXT.t());
    CHECK(ideal_product(w, w) == t);
    CHECK(ideal_norm(t) == Poly::t(F3) * Poly::t(F3));

    // normal form does not depend on the generating set
    for (int trial = 0; trial < 200; ++trial) {
        EllElem g = random_b_elem(EXT, 3);
        if (g.is_zero()) continue;
        BIdeal direct = principal_ideal(g);
        BIdeal padded = ideal_from_generators(EXT, {g, g * EXT.omega(), g * EXT.t(), g * g});
        CHECK(direct == padded);
    }
}

TEST_CASE("membership") {
    BIdeal w = principal_ideal(EXT.omega());
    CHECK(ideal_contains(w, EXT.omega()));
    CHECK(ideal_contains(w, EXT.t()));
    CHECK(ideal_contains(w, EXT.t() + EXT.omega()));
    CHECK(ideal_contains(w, EXT.zero()));
    CHECK(!ideal_contains(w, EXT.one()));
    CHECK(!ideal_contains(w, EXT.one() + EXT.omega()));
    // non-integral elements are never members
    CHECK(!ideal_contains(w, EXT.omega() * EXT.make(RatF(Poly::constant(F3, 1), Poly::t(F3)), RatF(F3))));

    for (int trial = 0; trial < 100; ++trial) {
        BIdeal I = random_ideal(EXT, 2);
        EllElem x = random_b_elem(EXT, 2);
        EllElem y = random_b_elem(EXT, 2);
        EllElem ga = EXT.make(I.a, Poly(F3));
        EllElem gw = EXT.make(I.b, I.c);
        CHECK(ideal_contains(I, ga * x + gw * y));
    }
}

TEST_CASE("product, conjugate, norm") {
    for (int trial = 0; trial < 80; ++trial) {
        BIdeal I = random_ideal(EXT, 2);
        BIdeal J = random_ideal(EXT, 2);
        BIdeal IJ = ideal_product(I, J);
        CHECK(ideal_norm(IJ) == ideal_norm(I) * ideal_norm(J));
        CHECK(ideal_product(I, principal_ideal(EXT.one())) == I);
        CHECK(ideal_product(I, J) == ideal_product(J, I));
        CHECK(ideal_conj(ideal_conj(I)) == I);
        // I * conj(I) = (N(I))
        CHECK(ideal_product(I, ideal_conj(I)) == principal_ideal(EXT.make(ideal_norm(I), Poly(F3))));
    }
}

TEST_CASE("principality decisions") {
    BIdeal w = principal_ideal(EXT.omega());
    auto g = principal_generator(w);
    REQUIRE(g.has_value());
    CHECK(principal_ideal(*g) == w);

    for (int trial = 0; trial < 60; ++trial) {
        EllElem x = random_b_elem(EXT, 2);
        if (x.is_zero()) continue;
        auto gen = principal_generator(principal_ideal(x));
        REQUIRE(gen.has_value());
        CHECK(principal_ideal(*gen) == principal_ideal(x));
    }

    // ramified prime over t for D = t^3 - t is not principal
    BIdeal p0 = ideal_from_generators(EXT3, {EXT3.t(), EXT3.omega()});
    CHECK(p0.a == Poly::t(F3));
    CHECK(!principal_generator(p0).has_value());
}

TEST_CASE("class group oracles") {
    // rational function field analogue: trivial class group for D = t
    ClassGroup cg1 = class_group(EXT);
    CHECK(cg1.order() == 1);
    CHECK(cg1.reps[0].is_unit_ideal());

    // D = t^3 - t: class number equals the point count of y^2 = x^3 - x
    // over F_3, which is 4 (three affine 2-torsion points and infinity)
    ClassGroup cg3 = class_group(EXT3);
    CHECK(cg3.order() == 4);
    CHECK(cg3.reps[0].is_unit_ideal());
    for (const BIdeal& I : cg3.reps) CHECK(I.is_primitive());
    // every nontrivial class has order 2 (2-torsion Jacobian)
    for (const BIdeal& I : cg3.reps) {
        CHECK(principal_generator(ideal_product(I, I)).has_value());
        CHECK(ideal_conj(I) == I);
    }
    // pairwise inequivalent
    for (size_t i = 0; i < cg3.reps.size(); ++i)
        for (size_t j = i + 1; j < cg3.reps.size(); ++j)
            CHECK(!principal_generator(ideal_product(cg3.reps[i], ideal_conj(cg3.reps[j]))).has_value());

    // the point-count route agrees with the ideal enumeration
    CHECK(class_number_from_points(EXT) == 1);
    CHECK(class_number_from_points(EXT3) == 4);
    ExtensionContext ext_b(F3, Poly::from_ints(F3, {0, 1, 0, 1}));  // D = t^3 + t
    CHECK(class_number_from_points(ext_b).value() == class_group(ext_b).order());
    ExtensionContext ext_g2(F3, Poly::from_ints(F3, {0, 1, 0, 0, 0, 1}));  // genus 2
    CHECK(!class_number_from_points(ext_g2).has_value());
}
