#pragma once

#include <optional>
#include <vector>

#include "su3tree/quad_ext.hpp"

namespace su3tree {

// Nonzero ideal of B = A[omega] in A-module normal form
//   I = a A + (b + c omega) A,   a, c monic, c | a, c | b, deg b < deg a,
// with the closure condition ac | b^2 - c^2 D.  The triple (a, b, c) is
// canonical, so equality is structural.  B is the integral closure of A
// (D squarefree), hence every nonzero ideal is invertible.
struct BIdeal {
    const ExtensionContext* ext = nullptr;
    Poly a, b, c;

    bool is_primitive() const { return c.is_one(); }
    bool is_unit_ideal() const { return a.is_one() && b.is_zero() && c.is_one(); }
    std::string to_string() const;

    friend bool operator==(const BIdeal& x, const BIdeal& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
    friend bool operator!=(const BIdeal& x, const BIdeal& y) { return !(x == y); }
};

// Ideal generated by B-elements (at least one nonzero).
BIdeal ideal_from_generators(const ExtensionContext& ext, const std::vector<EllElem>& gens);
BIdeal principal_ideal(const EllElem& g);
BIdeal ideal_product(const BIdeal& x, const BIdeal& y);
BIdeal ideal_conj(const BIdeal& x);
Poly ideal_norm(const BIdeal& x);  // monic generator of N_{ell/k}(I), = a c
bool ideal_contains(const BIdeal& x, const EllElem& g);

// Canonical residue of g modulo x: the unique coset representative u + v*omega
// with deg v < deg c and deg u < deg a.  Requires g in B.  Reduction is
// A-linear, so reducing after each ring operation realizes B/x exactly.
EllElem ideal_reduce(const BIdeal& x, const EllElem& g);

// Exhaustive search for a generator: alpha in I with monic N(alpha) = N(I).
// Complete because B has unit group F_q^*, so a generator exists iff one
// exists at this exact norm degree.
std::optional<EllElem> principal_generator(const BIdeal& x);

struct ClassGroup {
    std::vector<BIdeal> reps;  // one primitive ideal per class; reps[0] = (1)
    int order() const { return static_cast<int>(reps.size()); }
};

// Brute enumeration of reduced primitive ideals (deg a <= genus) and pairwise
// equivalence tests I ~ J  iff  I conj(J) is principal.
ClassGroup class_group(const ExtensionContext& ext);

// Independent class-number oracle from rational points of y^2 = D.  The
// infinite place is ramified of degree 1 (deg D odd), so Pic(B) is the
// degree-zero class group: trivial for deg D = 1, and for deg D = 3 in
// bijection with the F_q-points of the elliptic curve.  Higher genus would
// need point counts over extensions; nullopt there.
std::optional<long long> class_number_from_points(const ExtensionContext& ext);

}  // namespace su3tree
