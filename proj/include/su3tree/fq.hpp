#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "su3tree/errors.hpp"

namespace su3tree {

// Finite field F_q, q = p^r with p an odd prime, table-driven.
// Elements are indices in [0, q); index sum_i c_i p^i encodes the
// coefficient vector (c_0, ..., c_{r-1}) in the power basis of a fixed
// irreducible modulus.  Index order is the canonical enumeration order.
class FqContext {
public:
    // modulus: monic irreducible of degree r over F_p, little-endian
    // coefficients including the leading 1; empty selects the
    // lexicographically smallest irreducible.
    FqContext(int p, int r, std::vector<int> modulus = {});

    int p() const { return p_; }
    int r() const { return r_; }
    int q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    uint16_t add(uint16_t a, uint16_t b) const { return add_[a * q_ + b]; }
    uint16_t sub(uint16_t a, uint16_t b) const { return add_[a * q_ + neg_[b]]; }
    uint16_t mul(uint16_t a, uint16_t b) const { return mul_[a * q_ + b]; }
    uint16_t neg(uint16_t a) const { return neg_[a]; }
    uint16_t inv(uint16_t a) const {
        SU3_CHECK(a != 0, "fq: inverse of zero");
        return inv_[a];
    }
    uint16_t div(uint16_t a, uint16_t b) const { return mul(a, inv(b)); }
    uint16_t pow(uint16_t a, long long e) const;

    uint16_t zero() const { return 0; }
    uint16_t one() const { return one_; }
    // Image of an integer under Z -> F_p subset F_q.
    uint16_t from_int(long long n) const;
    // Coefficient vector (c_0..c_{r-1}) of an element.
    std::vector<int> coords(uint16_t a) const;
    uint16_t from_coords(const std::vector<int>& c) const;

    // Frobenius x -> x^p.
    uint16_t frob(uint16_t a) const { return frob_[a]; }

    std::string to_string(uint16_t a) const;

    bool same(const FqContext& other) const { return this == &other; }

    // All q elements in canonical (index) order: 0, 1, 2, ...
    std::vector<uint16_t> elements() const;

    static constexpr int kMaxQ = 81;  // table cap; config layer enforces q <= 9

private:
    int p_, r_, q_;
    uint16_t one_;
    std::vector<int> modulus_;
    std::vector<uint16_t> add_, mul_, neg_, inv_, frob_;
};

// A field element tagged with its context; all mixed-context arithmetic
// throws.  Cheap to copy.
struct FqElem {
    uint16_t v = 0;
    const FqContext* ctx = nullptr;

    FqElem() = default;
    FqElem(uint16_t value, const FqContext& c) : v(value), ctx(&c) {}

    bool is_zero() const { return v == 0; }
};

inline void require_same_ctx(const FqElem& a, const FqElem& b) {
    SU3_CHECK(a.ctx && b.ctx && a.ctx == b.ctx, "fq: context mismatch");
}

inline FqElem operator+(FqElem a, FqElem b) {
    require_same_ctx(a, b);
    return {a.ctx->add(a.v, b.v), *a.ctx};
}
inline FqElem operator-(FqElem a, FqElem b) {
    require_same_ctx(a, b);
    return {a.ctx->sub(a.v, b.v), *a.ctx};
}
inline FqElem operator*(FqElem a, FqElem b) {
    require_same_ctx(a, b);
    return {a.ctx->mul(a.v, b.v), *a.ctx};
}
inline FqElem operator-(FqElem a) { return {a.ctx->neg(a.v), *a.ctx}; }
inline FqElem inv(FqElem a) { return {a.ctx->inv(a.v), *a.ctx}; }
inline bool operator==(FqElem a, FqElem b) {
    require_same_ctx(a, b);
    return a.v == b.v;
}
inline bool operator!=(FqElem a, FqElem b) { return !(a == b); }

}  // namespace su3tree
