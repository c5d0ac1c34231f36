#include "su3tree/local_field.hpp"

#include <algorithm>
#include <sstream>

#include "su3tree/errors.hpp"

namespace su3tree {

void LocalElem::trim() {
    if (lo_ + static_cast<int>(c_.size()) > prec_) {
        c_.resize(static_cast<size_t>(std::max(0, prec_ - lo_)));
    }
    size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
        lo_ += static_cast<int>(lead);
    }
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    if (c_.empty()) lo_ = 0;
}

LocalElem::LocalElem(const FqContext& F, int lo, std::vector<uint16_t> digits, int prec)
    : F_(&F), lo_(lo), c_(std::move(digits)), prec_(prec) {
    for (uint16_t d : c_) SU3_CHECK(d < F.q(), "local series digit out of range");
    trim();
}

LocalElem LocalElem::zero(const FqContext& F, int prec) { return LocalElem(F, 0, {}, prec); }

LocalElem LocalElem::one(const FqContext& F, int prec) { return LocalElem(F, 0, {1}, prec); }

LocalElem LocalElem::monomial(const FqContext& F, uint16_t c, int e, int prec) {
    SU3_CHECK(c != 0 && c < F.q(), "monomial digit must be a nonzero field element");
    SU3_CHECK(e < prec, "monomial exponent at or beyond precision");
    return LocalElem(F, e, {c}, prec);
}

int LocalElem::val() const {
    if (c_.empty()) throw precision_error("valuation of a series that is zero to precision O(rho^" + std::to_string(prec_) + ")");
    return lo_;
}

uint16_t LocalElem::digit(int e) const {
    if (e >= prec_) throw precision_error("digit request beyond known precision");
    if (e < lo_ || e >= lo_ + static_cast<int>(c_.size())) return 0;
    return c_[static_cast<size_t>(e - lo_)];
}

LocalElem LocalElem::truncated(int new_prec) const {
    SU3_CHECK(new_prec <= prec_, "cannot raise precision by truncation");
    return LocalElem(*F_, lo_, c_, new_prec);
}

LocalElem LocalElem::shifted(int e) const {
    if (c_.empty()) return LocalElem(*F_, 0, {}, prec_ + e);
    return LocalElem(*F_, lo_ + e, c_, prec_ + e);
}

LocalElem LocalElem::scaled(uint16_t c) const {
    SU3_CHECK(c < F_->q(), "scalar out of field range");
    if (c == 0) return LocalElem(*F_, 0, {}, prec_);
    std::vector<uint16_t> out(c_);
    for (auto& d : out) d = F_->mul(d, c);
    return LocalElem(*F_, lo_, std::move(out), prec_);
}

LocalElem LocalElem::floor_div_pow(int e) const {
    std::vector<uint16_t> out;
    int start = std::max(lo_, e);
    for (int i = start; i < lo_ + static_cast<int>(c_.size()); ++i)
        out.push_back(c_[static_cast<size_t>(i - lo_)]);
    return LocalElem(*F_, start - e, std::move(out), prec_ - e);
}

LocalElem LocalElem::conj() const {
    std::vector<uint16_t> out(c_);
    for (size_t i = 0; i < out.size(); ++i) {
        int e = lo_ + static_cast<int>(i);
        if (e % 2 != 0) out[i] = F_->neg(out[i]);
    }
    return LocalElem(*F_, lo_, std::move(out), prec_);
}

LocalElem operator+(const LocalElem& a, const LocalElem& b) {
    const FqContext& F = a.fq();
    SU3_CHECK(F.same(b.fq()), "local series over different fields");
    int prec = std::min(a.prec_, b.prec_);
    if (a.c_.empty() && b.c_.empty()) return LocalElem(F, 0, {}, prec);
    int lo = a.c_.empty() ? b.lo_ : (b.c_.empty() ? a.lo_ : std::min(a.lo_, b.lo_));
    int hi = std::min(prec, std::max(a.lo_ + static_cast<int>(a.c_.size()),
                                     b.lo_ + static_cast<int>(b.c_.size())));
    std::vector<uint16_t> out;
    for (int e = lo; e < hi; ++e) {
        uint16_t x = (e >= a.lo_ && e < a.lo_ + static_cast<int>(a.c_.size())) ? a.c_[static_cast<size_t>(e - a.lo_)] : 0;
        uint16_t y = (e >= b.lo_ && e < b.lo_ + static_cast<int>(b.c_.size())) ? b.c_[static_cast<size_t>(e - b.lo_)] : 0;
        out.push_back(F.add(x, y));
    }
    return LocalElem(F, lo, std::move(out), prec);
}

LocalElem operator-(const LocalElem& a) {
    std::vector<uint16_t> out(a.c_);
    for (auto& d : out) d = a.F_->neg(d);
    return LocalElem(*a.F_, a.lo_, std::move(out), a.prec_);
}

LocalElem operator-(const LocalElem& a, const LocalElem& b) { return a + (-b); }

LocalElem operator*(const LocalElem& a, const LocalElem& b) {
    const FqContext& F = a.fq();
    SU3_CHECK(F.same(b.fq()), "local series over different fields");
    int va = a.c_.empty() ? a.prec_ : a.lo_;
    int vb = b.c_.empty() ? b.prec_ : b.lo_;
    int prec = std::min(a.prec_ + vb, b.prec_ + va);
    if (a.c_.empty() || b.c_.empty()) return LocalElem(F, 0, {}, prec);
    int lo = a.lo_ + b.lo_;
    int n = std::min(prec - lo, static_cast<int>(a.c_.size() + b.c_.size()) - 1);
    if (n <= 0) return LocalElem(F, 0, {}, prec);
    std::vector<uint16_t> out(static_cast<size_t>(n), 0);
    for (size_t i = 0; i < a.c_.size() && i < static_cast<size_t>(n); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size() && i + j < static_cast<size_t>(n); ++j) {
            out[i + j] = F.add(out[i + j], F.mul(a.c_[i], b.c_[j]));
        }
    }
    return LocalElem(F, lo, std::move(out), prec);
}

LocalElem LocalElem::inv() const {
    const FqContext& F = *F_;
    if (c_.empty()) throw precision_error("inverse of a series that is zero to precision");
    int v = lo_;
    int m = prec_ - v;  // number of known unit digits
    std::vector<uint16_t> w(static_cast<size_t>(m), 0);
    uint16_t u0inv = F.inv(c_[0]);
    w[0] = u0inv;
    for (int n = 1; n < m; ++n) {
        uint16_t acc = 0;
        for (int i = 1; i <= n; ++i) {
            uint16_t ui = (i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : 0;
            if (ui == 0) continue;
            acc = F.add(acc, F.mul(ui, w[static_cast<size_t>(n - i)]));
        }
        w[static_cast<size_t>(n)] = F.neg(F.mul(u0inv, acc));
    }
    return LocalElem(F, -v, std::move(w), prec_ - 2 * v);
}

LocalElem LocalElem::sqrt() const {
    const FqContext& F = *F_;
    if (c_.empty()) throw precision_error("square root of a series that is zero to precision");
    if (lo_ % 2 != 0) throw domain_error("square root of a series with odd valuation");
    auto s0 = fq_sqrt(F, c_[0]);
    if (!s0) throw domain_error("square root: leading digit is not a square");
    int m = prec_ - lo_;
    std::vector<uint16_t> s(static_cast<size_t>(m), 0);
    s[0] = *s0;
    uint16_t half = F.inv(F.add(*s0, *s0));  // (2 s0)^{-1}
    for (int n = 1; n < m; ++n) {
        uint16_t acc = 0;
        for (int i = 1; i < n; ++i) acc = F.add(acc, F.mul(s[static_cast<size_t>(i)], s[static_cast<size_t>(n - i)]));
        uint16_t un = (n < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(n)] : 0;
        s[static_cast<size_t>(n)] = F.mul(F.sub(un, acc), half);
    }
    return LocalElem(F, lo_ / 2, std::move(s), prec_ - lo_ / 2);
}

std::string LocalElem::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        int e = lo_ + static_cast<int>(i);
        if (c_[i] != 1 || e == 0) os << F_->to_string(c_[i]);
        if (e != 0) {
            if (c_[i] != 1) os << "*";
            os << "rho^" << e;
        }
    }
    if (first) os << "0";
    os << " + O(rho^" << prec_ << ")";
    return os.str();
}

LocalContext::LocalContext(const ExtensionContext& ext, int prec)
    : ext_(&ext), prec_(prec), omega_(LocalElem::zero(ext.fq(), prec)) {
    SU3_CHECK(prec >= 2, "local working precision too small");
    const FqContext& F = ext.fq();
    const Poly& D = ext.D();
    int d = ext.d();
    uint16_t c = ext.lead();
    uint16_t cinv = F.inv(c);
    // u0(c rho^2) = sum_j (D_{d-j}/c) c^j rho^{2j}, constant digit 1
    std::vector<uint16_t> u0(static_cast<size_t>(2 * d + 1), 0);
    uint16_t cpow = 1;
    for (int j = 0; j <= d; ++j) {
        u0[static_cast<size_t>(2 * j)] = F.mul(F.mul(D.coeff(d - j), cinv), cpow);
        cpow = F.mul(cpow, c);
    }
    LocalElem u(F, 0, std::move(u0), prec + 2 * d);
    LocalElem s = u.sqrt();
    uint16_t scale = F.pow(cinv, (d - 1) / 2);  // c^{(1-d)/2}, d odd
    omega_ = LocalElem::monomial(F, scale, -d, prec) * s;
    SU3_INVARIANT((omega_ * omega_ - embed(ext.D())).is_zero_to_prec(),
                  "omega series does not square to D");
    SU3_INVARIANT((omega_.conj() + omega_).is_zero_to_prec(),
                  "conjugation does not negate the omega series");
}

LocalElem LocalContext::embed(const Poly& f) const {
    const FqContext& F = ext_->fq();
    LocalElem out = LocalElem::zero(F, prec_);
    uint16_t cinv = F.inv(ext_->lead());
    uint16_t cpow = 1;  // c^{-i}
    for (int i = 0; i <= f.deg(); ++i) {
        uint16_t digit = F.mul(f.coeff(i), cpow);
        if (digit != 0) out = out + LocalElem::monomial(F, digit, -2 * i, prec_);
        cpow = F.mul(cpow, cinv);
    }
    return out;
}

LocalElem LocalContext::embed(const RatF& x) const {
    if (x.is_zero()) return LocalElem::zero(ext_->fq(), prec_);
    if (x.is_poly()) return embed(x.num());
    return embed(x.num()) * embed(x.den()).inv();
}

LocalElem LocalContext::embed(const EllElem& x) const {
    return embed(x.a) + embed(x.b) * omega_;
}

}  // namespace su3tree
