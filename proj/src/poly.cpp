#include "su3tree/poly.hpp"

#include <algorithm>

namespace su3tree {

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly::Poly(const FqContext& ctx, std::vector<uint16_t> coeffs) : ctx_(&ctx), c_(std::move(coeffs)) {
    for (uint16_t c : c_) SU3_CHECK(c < ctx.q(), "poly: coefficient out of range");
    trim();
}

Poly Poly::from_ints(const FqContext& ctx, const std::vector<long long>& coeffs) {
    std::vector<uint16_t> c;
    c.reserve(coeffs.size());
    for (long long x : coeffs) c.push_back(ctx.from_int(x));
    return Poly(ctx, std::move(c));
}

Poly Poly::constant(const FqContext& ctx, uint16_t c) {
    return Poly(ctx, std::vector<uint16_t>{c});
}

Poly Poly::t(const FqContext& ctx) { return Poly(ctx, {0, ctx.one()}); }

uint16_t Poly::eval(uint16_t x) const {
    if (c_.empty()) return 0;
    const FqContext& F = *ctx_;
    uint16_t v = 0;
    for (int i = int(c_.size()) - 1; i >= 0; --i) v = F.add(F.mul(v, x), c_[i]);
    return v;
}

Poly Poly::monic() const {
    SU3_CHECK(!is_zero(), "poly: monic of zero");
    if (is_monic()) return *this;
    uint16_t s = ctx_->inv(lc());
    Poly r(*ctx_);
    r.c_.resize(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = ctx_->mul(s, c_[i]);
    return r;
}

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
        if (c_[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || c_[i] != ctx_->one() || ctx_->r() > 1) s += ctx_->to_string(c_[i]);
        if (i >= 1) {
            if (c_[i] != ctx_->one() || ctx_->r() > 1) s += "*";
            s += "t";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

Poly operator+(const Poly& a, const Poly& b) {
    SU3_CHECK(a.ctx_ == b.ctx_ && a.ctx_, "poly: context mismatch");
    const FqContext& F = *a.ctx_;
    Poly r(F);
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < r.c_.size(); ++i)
        r.c_[i] = F.add(i < a.c_.size() ? a.c_[i] : 0, i < b.c_.size() ? b.c_[i] : 0);
    r.trim();
    return r;
}

Poly operator-(const Poly& a) {
    const FqContext& F = a.ctx();
    Poly r(F);
    r.c_.resize(a.c_.size());
    for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = F.neg(a.c_[i]);
    return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    SU3_CHECK(a.ctx_ == b.ctx_ && a.ctx_, "poly: context mismatch");
    const FqContext& F = *a.ctx_;
    if (a.is_zero() || b.is_zero()) return Poly(F);
    Poly r(F);
    r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j)
            r.c_[i + j] = F.add(r.c_[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    r.trim();
    return r;
}

Poly operator*(FqElem s, const Poly& a) {
    SU3_CHECK(s.ctx == a.ctx_, "poly: context mismatch");
    const FqContext& F = *a.ctx_;
    Poly r(F);
    r.c_.resize(a.c_.size());
    for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = F.mul(s.v, a.c_[i]);
    r.trim();
    return r;
}

bool operator==(const Poly& a, const Poly& b) {
    SU3_CHECK(a.ctx_ == b.ctx_ && a.ctx_, "poly: context mismatch");
    return a.c_ == b.c_;
}

bool Poly::operator<(const Poly& o) const {
    if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
    for (size_t i = c_.size(); i-- > 0;)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
    SU3_CHECK(a.ctx_ == b.ctx_ && a.ctx_, "poly: context mismatch");
    SU3_CHECK(!b.is_zero(), "poly: division by zero");
    const FqContext& F = *a.ctx_;
    Poly q(F), r = a;
    if (a.deg() < b.deg()) return {q, r};
    q.c_.assign(a.deg() - b.deg() + 1, 0);
    uint16_t binv = F.inv(b.lc());
    for (int i = a.deg(); i >= b.deg(); --i) {
        uint16_t c = r.coeff(i);
        if (c == 0) continue;
        uint16_t qc = F.mul(c, binv);
        q.c_[i - b.deg()] = qc;
        for (int j = 0; j <= b.deg(); ++j) {
            size_t k = size_t(i - b.deg() + j);
            if (k < r.c_.size()) r.c_[k] = F.sub(r.c_[k], F.mul(qc, b.c_[j]));
        }
    }
    q.trim();
    r.trim();
    return {q, r};
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = divmod(x, y).second;
        x = y;
        y = r;
    }
    return x.is_zero() ? x : x.monic();
}

void Poly::xgcd(const Poly& a, const Poly& b, Poly& g, Poly& x, Poly& y) {
    const FqContext& F = a.ctx();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::constant(F, F.one()), s1 = Poly(F);
    Poly t0 = Poly(F), t1 = Poly::constant(F, F.one());
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        Poly s = s0 - q * s1, t = t0 - q * t1;
        r0 = r1; r1 = r;
        s0 = s1; s1 = s;
        t0 = t1; t1 = t;
    }
    if (r0.is_zero()) {
        g = r0; x = s0; y = t0;
        return;
    }
    uint16_t sc = F.inv(r0.lc());
    FqElem scale(sc, F);
    g = r0.monic();
    x = scale * s0;
    y = scale * t0;
}

// --- RatF ---

RatF::RatF(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    SU3_CHECK(!den_.is_zero(), "ratf: zero denominator");
    normalize();
}

RatF RatF::of(const Poly& p) {
    RatF r;
    r.num_ = p;
    r.den_ = Poly::constant(p.ctx(), p.ctx().one());
    return r;
}

void RatF::normalize() {
    const FqContext& F = den_.ctx();
    if (num_.is_zero()) {
        den_ = Poly::constant(F, F.one());
        return;
    }
    Poly g = Poly::gcd(num_, den_);
    if (!g.is_one()) {
        num_ = Poly::divmod(num_, g).first;
        den_ = Poly::divmod(den_, g).first;
    }
    if (!den_.is_monic()) {
        FqElem s(F.inv(den_.lc()), F);
        num_ = s * num_;
        den_ = s * den_;
    }
}

std::string RatF::to_string() const {
    if (is_poly()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RatF operator+(const RatF& a, const RatF& b) {
    return RatF(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
RatF operator-(const RatF& a, const RatF& b) {
    return RatF(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
RatF operator*(const RatF& a, const RatF& b) { return RatF(a.num_ * b.num_, a.den_ * b.den_); }
RatF operator/(const RatF& a, const RatF& b) {
    SU3_CHECK(!b.is_zero(), "ratf: division by zero");
    return RatF(a.num_ * b.den_, a.den_ * b.num_);
}
RatF operator-(const RatF& a) {
    RatF r = a;
    r.num_ = -r.num_;
    return r;
}
bool operator==(const RatF& a, const RatF& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

// --- square roots ---

std::optional<uint16_t> fq_sqrt(const FqContext& ctx, uint16_t a) {
    // q <= 81: scan
    for (uint16_t s = 0; s < ctx.q(); ++s)
        if (ctx.mul(s, s) == a) return s;
    return std::nullopt;
}

std::optional<Poly> poly_sqrt(const Poly& f) {
    const FqContext& F = f.ctx();
    if (f.is_zero()) return Poly(F);
    if (f.deg() % 2 != 0) return std::nullopt;
    auto lead = fq_sqrt(F, f.lc());
    if (!lead) return std::nullopt;
    int m = f.deg() / 2;
    // Solve s top-down: coefficient of t^{m+j} in s^2 is linear in s_j once
    // s_{j+1..m} are known.
    std::vector<uint16_t> s(m + 1, 0);
    s[m] = *lead;
    uint16_t inv2lead = F.inv(F.add(s[m], s[m]));
    for (int j = m - 1; j >= 0; --j) {
        uint16_t acc = 0;  // sum over i+k = m+j with i,k > j
        for (int i = j + 1; i <= m; ++i) {
            int k = m + j - i;
            if (k > j && k <= m) acc = F.add(acc, F.mul(s[i], s[size_t(k)]));
        }
        s[j] = F.mul(F.sub(f.coeff(m + j), acc), inv2lead);
    }
    Poly r(F, s);
    if (r * r == f) return r;
    return std::nullopt;
}

std::optional<RatF> ratf_sqrt(const RatF& x) {
    auto n = poly_sqrt(x.num());
    if (!n) return std::nullopt;
    auto d = poly_sqrt(x.den());
    if (!d) return std::nullopt;
    return RatF(*n, *d);
}

}  // namespace su3tree
