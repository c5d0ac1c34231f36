#pragma once

#include <string>

#include "su3tree/poly.hpp"

namespace su3tree {

class ExtensionContext;

// Element a + b*omega of the quadratic extension of F_q(t), omega^2 = D.
struct EllElem {
    RatF a, b;
    const ExtensionContext* ext = nullptr;

    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    bool in_k() const { return b.is_zero(); }
    // in the order B = A[omega]
    bool in_B() const { return a.is_poly() && b.is_poly(); }
    bool in_A() const { return b.is_zero() && a.is_poly(); }

    EllElem conj() const;        // a - b*omega
    EllElem norm() const;        // x * conj(x), lies in k
    EllElem trace() const;       // x + conj(x), lies in k
    EllElem inv() const;
    std::string to_string() const;

    friend EllElem operator+(const EllElem& x, const EllElem& y);
    friend EllElem operator-(const EllElem& x, const EllElem& y);
    friend EllElem operator*(const EllElem& x, const EllElem& y);
    friend EllElem operator/(const EllElem& x, const EllElem& y);
    EllElem operator-() const;
    friend bool operator==(const EllElem& x, const EllElem& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const EllElem& x, const EllElem& y) { return !(x == y); }
};

// The quadratic extension ell = k(omega), omega^2 = D, over k = F_q(t).
// Requires q odd, D squarefree of odd degree, so the place at infinity of k
// ramifies in ell; the ring of integers of ell away from that place is
// B = A[omega].
class ExtensionContext {
public:
    ExtensionContext(const FqContext& fq, Poly D);

    const FqContext& fq() const { return *fq_; }
    const Poly& D() const { return D_; }
    int d() const { return d_; }            // deg D (odd)
    uint16_t lead() const { return c_; }    // leading coefficient of D

    EllElem make(RatF a, RatF b) const { return EllElem{std::move(a), std::move(b), this}; }
    EllElem make(const Poly& a, const Poly& b) const { return make(RatF::of(a), RatF::of(b)); }
    EllElem zero() const;
    EllElem one() const;
    EllElem omega() const;
    EllElem t() const;
    EllElem from_fq(uint16_t c) const;
    EllElem from_int(long long n) const { return from_fq(fq_->from_int(n)); }

    // Valuation at the degree place P of k (v_P(t) = -1 normalization is NOT
    // used; here val_p(f/g) = deg g - deg f, so val_p(1/t) = 1).  INT_MAX on 0.
    static int val_P(const RatF& x) { return x.val_p(); }

    // Valuation at the unique place Q of ell over P, normalized with value
    // group Z: val_Q restricted to k is 2 val_P, and val_Q(omega) = -d.
    // Exact on a + b*omega because the two parities never cancel.
    int val_Q(const EllElem& x) const;

    // a + b*omega with b' * omega-part divisibility: membership in the ideal
    // of B generated by gens (computed via the 2x2 A-module of coordinates).
    // Provided by ideal.hpp; here only principal (g) via exact division.
    bool divides(const EllElem& g, const EllElem& x) const;

private:
    const FqContext* fq_;
    Poly D_;
    int d_;
    uint16_t c_;
};

// Pair condition for the Heisenberg-type unipotent group: N(u) + T(v) = 0.
bool hpair_check(const EllElem& u, const EllElem& v);
// Degenerate-pair condition: u = 0 and T(v) = 0.
bool hpair0_check(const EllElem& u, const EllElem& v);

}  // namespace su3tree
