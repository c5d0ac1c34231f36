#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "su3tree/fq.hpp"

namespace su3tree {

// Polynomial in t over F_q.  Invariant: no trailing zero coefficients;
// the zero polynomial has an empty coefficient vector.
class Poly {
public:
    Poly() = default;
    explicit Poly(const FqContext& ctx) : ctx_(&ctx) {}
    Poly(const FqContext& ctx, std::vector<uint16_t> coeffs);
    static Poly from_ints(const FqContext& ctx, const std::vector<long long>& coeffs);
    static Poly constant(const FqContext& ctx, uint16_t c);
    static Poly t(const FqContext& ctx);  // the variable

    const FqContext& ctx() const {
        SU3_CHECK(ctx_, "poly: uninitialized");
        return *ctx_;
    }
    bool is_zero() const { return c_.empty(); }
    // deg(0) = -1 by convention; callers treat zero separately.
    int deg() const { return int(c_.size()) - 1; }
    uint16_t coeff(int i) const {
        return (i >= 0 && i < int(c_.size())) ? c_[i] : 0;
    }
    uint16_t lc() const {
        SU3_CHECK(!c_.empty(), "poly: leading coefficient of zero");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == ctx_->one(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == ctx_->one(); }
    const std::vector<uint16_t>& coeffs() const { return c_; }

    uint16_t eval(uint16_t x) const;
    Poly monic() const;  // divide by leading coefficient

    std::string to_string() const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a);
    friend Poly operator*(FqElem s, const Poly& a);
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    bool operator<(const Poly& o) const;  // by degree, then lexicographic; for canonical orderings

    // Euclidean division: returns (quotient, remainder) with deg r < deg b.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
    static Poly gcd(const Poly& a, const Poly& b);  // monic (or zero)
    // g = gcd (monic), g = x*a + y*b.
    static void xgcd(const Poly& a, const Poly& b, Poly& g, Poly& x, Poly& y);

private:
    const FqContext* ctx_ = nullptr;
    std::vector<uint16_t> c_;
    void trim();
    friend class RatF;
};

// Rational function over F_q.  Invariant: denominator monic, gcd(num, den)
// = 1, zero is 0/1.
class RatF {
public:
    RatF() = default;
    explicit RatF(const FqContext& ctx) : num_(ctx), den_(Poly::constant(ctx, ctx.one())) {}
    RatF(Poly num, Poly den);
    static RatF of(const Poly& p);
    static RatF constant(const FqContext& ctx, uint16_t c) { return of(Poly::constant(ctx, c)); }

    const FqContext& ctx() const { return den_.ctx(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.is_one(); }

    // Valuation at the place at infinity: deg den - deg num; INT_MAX for 0.
    int val_p() const { return is_zero() ? INT_MAX : den_.deg() - num_.deg(); }

    std::string to_string() const;

    friend RatF operator+(const RatF& a, const RatF& b);
    friend RatF operator-(const RatF& a, const RatF& b);
    friend RatF operator*(const RatF& a, const RatF& b);
    friend RatF operator/(const RatF& a, const RatF& b);
    friend RatF operator-(const RatF& a);
    friend bool operator==(const RatF& a, const RatF& b);
    friend bool operator!=(const RatF& a, const RatF& b) { return !(a == b); }

private:
    Poly num_, den_;
    void normalize();
};

// Square root in F_q (q odd): some s with s*s = a, if a is a square.
std::optional<uint16_t> fq_sqrt(const FqContext& ctx, uint16_t a);
// Square root in F_q[t], if f is a perfect square.
std::optional<Poly> poly_sqrt(const Poly& f);
// Square root in F_q(t), if x is a square.
std::optional<RatF> ratf_sqrt(const RatF& x);

}  // namespace su3tree
