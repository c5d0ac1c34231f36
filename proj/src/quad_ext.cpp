#include "su3tree/quad_ext.hpp"

#include <climits>

#include "su3tree/errors.hpp"

namespace su3tree {

namespace {

const ExtensionContext* require_same(const EllElem& x, const EllElem& y) {
    SU3_CHECK(x.ext && y.ext && x.ext == y.ext, "quad_ext: context mismatch");
    return x.ext;
}

Poly derivative(const Poly& f) {
    const FqContext& F = f.ctx();
    std::vector<uint16_t> c;
    for (int i = 1; i <= f.deg(); ++i)
        c.push_back(F.mul(F.from_int(i), f.coeff(i)));
    return Poly(F, c);
}

}  // namespace

ExtensionContext::ExtensionContext(const FqContext& fq, Poly D)
    : fq_(&fq), D_(std::move(D)) {
    SU3_CHECK(&D_.ctx() == fq_, "quad_ext: D over wrong field");
    d_ = D_.deg();
    SU3_CHECK(d_ >= 1 && d_ % 2 == 1, "quad_ext: D must have odd positive degree");
    Poly Dp = derivative(D_);
    SU3_CHECK(!(Dp == Poly(fq)), "quad_ext: D must be squarefree");
    SU3_CHECK(Poly::gcd(D_, Dp).is_one(), "quad_ext: D must be squarefree");
    c_ = D_.lc();
}

EllElem ExtensionContext::zero() const { return make(RatF(*fq_), RatF(*fq_)); }
EllElem ExtensionContext::one() const { return make(RatF::constant(*fq_, fq_->one()), RatF(*fq_)); }
EllElem ExtensionContext::omega() const { return make(RatF(*fq_), RatF::constant(*fq_, fq_->one())); }
EllElem ExtensionContext::t() const { return make(RatF::of(Poly::t(*fq_)), RatF(*fq_)); }
EllElem ExtensionContext::from_fq(uint16_t c) const {
    return make(RatF::constant(*fq_, c), RatF(*fq_));
}

int ExtensionContext::val_Q(const EllElem& x) const {
    if (x.is_zero()) return INT_MAX;
    int v = INT_MAX;
    if (!x.a.is_zero()) v = 2 * x.a.val_p();
    if (!x.b.is_zero()) v = std::min(v, 2 * x.b.val_p() - d_);
    return v;
}

bool ExtensionContext::divides(const EllElem& g, const EllElem& x) const {
    if (g.is_zero()) return x.is_zero();
    return (x * g.inv()).in_B();
}

EllElem EllElem::conj() const { return EllElem{a, -b, ext}; }

EllElem EllElem::norm() const {
    SU3_CHECK(ext, "quad_ext: null context");
    RatF Dr = RatF::of(ext->D());
    return EllElem{a * a - b * b * Dr, RatF(a.num().ctx()), ext};
}

EllElem EllElem::trace() const { return EllElem{a + a, RatF(a.num().ctx()), ext}; }

EllElem EllElem::inv() const {
    SU3_CHECK(!is_zero(), "quad_ext: division by zero");
    RatF n = norm().a;
    return EllElem{a / n, -(b / n), ext};
}

EllElem operator+(const EllElem& x, const EllElem& y) {
    return EllElem{x.a + y.a, x.b + y.b, require_same(x, y)};
}

EllElem operator-(const EllElem& x, const EllElem& y) {
    return EllElem{x.a - y.a, x.b - y.b, require_same(x, y)};
}

EllElem operator*(const EllElem& x, const EllElem& y) {
    const ExtensionContext* e = require_same(x, y);
    RatF Dr = RatF::of(e->D());
    return EllElem{x.a * y.a + x.b * y.b * Dr, x.a * y.b + x.b * y.a, e};
}

EllElem operator/(const EllElem& x, const EllElem& y) { return x * y.inv(); }

EllElem EllElem::operator-() const { return EllElem{-a, -b, ext}; }

std::string EllElem::to_string() const {
    if (b.is_zero()) return a.to_string();
    std::string s;
    if (!a.is_zero()) s += a.to_string() + " + ";
    s += "(" + b.to_string() + ")*w";
    return s;
}

bool hpair_check(const EllElem& u, const EllElem& v) {
    return (u.norm() + v.trace()).is_zero();
}

bool hpair0_check(const EllElem& u, const EllElem& v) {
    return u.is_zero() && v.trace().is_zero();
}

}  // namespace su3tree
