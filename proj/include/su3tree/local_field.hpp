#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "su3tree/quad_ext.hpp"

namespace su3tree {

// Truncated Laurent series over F_q in the uniformizer rho of the local
// field E at Q, with rho^2 = 1/(c t), c = leading coefficient of D.  All
// exponents >= prec are unknown; stored digits are trimmed (no leading or
// trailing zeros), so equality of known data is structural.
//
// An empty digit vector means "zero to precision prec"; exact zeros and
// cancellations are not distinguished.  Operations that need a valuation
// (inverse, pivot selection) throw precision_error on such elements.
class LocalElem {
public:
    LocalElem() = default;
    LocalElem(const FqContext& F, int lo, std::vector<uint16_t> digits, int prec);
    static LocalElem zero(const FqContext& F, int prec);
    static LocalElem one(const FqContext& F, int prec);
    // c * rho^e, c != 0
    static LocalElem monomial(const FqContext& F, uint16_t c, int e, int prec);

    const FqContext& fq() const { return *F_; }
    int prec() const { return prec_; }
    bool is_zero_to_prec() const { return c_.empty(); }
    // Least exponent with nonzero digit; throws precision_error when the
    // element is indistinguishable from zero.
    int val() const;
    uint16_t digit(int e) const;  // coefficient at rho^e (0 outside stored range)
    int lo() const { return lo_; }
    const std::vector<uint16_t>& digits() const { return c_; }

    LocalElem truncated(int new_prec) const;  // lower precision view
    LocalElem shifted(int e) const;           // multiply by rho^e
    LocalElem scaled(uint16_t c) const;       // multiply by a field constant
    // The part with exponents >= e, divided by rho^e (an element of O when
    // e >= 0 region matters); used by Hermite reduction.
    LocalElem floor_div_pow(int e) const;

    // Conjugation rho -> -rho (the nontrivial automorphism of E over k_P).
    LocalElem conj() const;

    LocalElem inv() const;
    // Square root of a series with even valuation whose leading digit is a
    // square; chooses the root whose leading digit is the canonical square
    // root.  Throws domain_error when no root exists in E.
    LocalElem sqrt() const;

    std::string to_string() const;

    friend LocalElem operator+(const LocalElem& a, const LocalElem& b);
    friend LocalElem operator-(const LocalElem& a, const LocalElem& b);
    friend LocalElem operator*(const LocalElem& a, const LocalElem& b);
    friend LocalElem operator-(const LocalElem& a);
    // Equality of the overlapping known window; vertex canonical forms are
    // compared through their exact digit data instead.
    bool same_digits(const LocalElem& o) const { return lo_ == o.lo_ && c_ == o.c_; }

private:
    const FqContext* F_ = nullptr;
    int lo_ = 0;
    std::vector<uint16_t> c_;
    int prec_ = 0;
    void trim();
};

// Embedding of the global objects into E at a fixed working precision.
// omega embeds as c^{(1-d)/2} * rho^{-d} * sqrt(u0(c rho^2)) where
// D(t) = c t^d u0(1/t); the sqrt is the Newton/recurrence series root with
// constant digit 1.
class LocalContext {
public:
    LocalContext(const ExtensionContext& ext, int prec);

    const ExtensionContext& ext() const { return *ext_; }
    int prec() const { return prec_; }
    const LocalElem& omega_series() const { return omega_; }

    LocalElem embed(const Poly& f) const;
    LocalElem embed(const RatF& x) const;
    LocalElem embed(const EllElem& x) const;

private:
    const ExtensionContext* ext_;
    int prec_;
    LocalElem omega_;
};

}  // namespace su3tree
