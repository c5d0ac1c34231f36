#include "su3tree/ideal.hpp"

#include <algorithm>
#include <sstream>

#include "su3tree/errors.hpp"

namespace su3tree {

namespace {

bool poly_divides(const Poly& g, const Poly& x) {
    if (x.is_zero()) return true;
    if (g.is_zero()) return false;
    auto [q, r] = Poly::divmod(x, g);
    (void)q;
    return r.is_zero();
}

// Enumerate polynomials of degree <= dmax (including zero when allowed).
template <typename Fn>
void for_each_poly(const FqContext& F, int dmax, Fn&& fn) {
    if (dmax < 0) {
        fn(Poly(F));
        return;
    }
    std::vector<uint16_t> digits(static_cast<size_t>(dmax) + 1, 0);
    while (true) {
        fn(Poly(F, digits));
        size_t k = 0;
        while (k < digits.size() && digits[k] == F.q() - 1) digits[k++] = 0;
        if (k == digits.size()) break;
        ++digits[k];
    }
}

}  // namespace

std::string BIdeal::to_string() const {
    std::ostringstream os;
    os << "(" << a.to_string() << ", " << b.to_string() << " + " << c.to_string() << "*w)";
    return os.str();
}

BIdeal ideal_from_generators(const ExtensionContext& ext, const std::vector<EllElem>& gens) {
    const FqContext& F = ext.fq();
    // A-module generators: each g and omega*g, as coordinate columns (x, y)
    // for x + y*omega.
    std::vector<std::pair<Poly, Poly>> cols;
    for (const EllElem& g : gens) {
        SU3_CHECK(g.in_B(), "ideal generators must lie in B");
        if (g.is_zero()) continue;
        const Poly& x = g.a.num();
        const Poly& y = g.b.num();
        cols.emplace_back(x, y);
        cols.emplace_back(y * ext.D(), x);  // omega * g
    }
    SU3_CHECK(!cols.empty(), "ideal needs a nonzero generator");

    // Euclidean column reduction on the omega row.
    while (true) {
        int piv = -1;
        for (size_t i = 0; i < cols.size(); ++i) {
            if (cols[i].second.is_zero()) continue;
            if (piv < 0 || cols[i].second.deg() < cols[static_cast<size_t>(piv)].second.deg()) piv = static_cast<int>(i);
        }
        if (piv < 0) break;
        bool changed = false;
        for (size_t i = 0; i < cols.size(); ++i) {
            if (static_cast<int>(i) == piv || cols[i].second.is_zero()) continue;
            auto [q, r] = Poly::divmod(cols[i].second, cols[static_cast<size_t>(piv)].second);
            cols[i].first = cols[i].first - q * cols[static_cast<size_t>(piv)].first;
            cols[i].second = r;
            changed = true;
        }
        if (!changed) {
            // single column with nonzero omega coordinate remains
            break;
        }
    }
    int wcol = -1;
    for (size_t i = 0; i < cols.size(); ++i)
        if (!cols[i].second.is_zero()) {
            SU3_INVARIANT(wcol < 0, "omega row not fully reduced");
            wcol = static_cast<int>(i);
        }
    SU3_INVARIANT(wcol >= 0, "ideal of rank < 2 (omega coordinate vanished)");

    Poly c = cols[static_cast<size_t>(wcol)].second;
    Poly b = cols[static_cast<size_t>(wcol)].first;
    if (!c.is_monic()) {
        FqElem s(F.inv(c.lc()), F);
        c = s * c;
        b = s * b;
    }
    Poly a(F);
    for (size_t i = 0; i < cols.size(); ++i) {
        if (static_cast<int>(i) == wcol) continue;
        SU3_INVARIANT(cols[i].second.is_zero(), "stray omega coordinate");
        a = Poly::gcd(a, cols[i].first);
    }
    SU3_INVARIANT(!a.is_zero(), "ideal intersects A trivially");
    b = Poly::divmod(b, a).second;  // reduce b mod a

    BIdeal out{&ext, a, b, c};
    SU3_INVARIANT(poly_divides(c, a) && poly_divides(c, b), "content does not divide the pivots");
    SU3_INVARIANT(poly_divides(a * c, b * b - c * c * ext.D()), "normal form violates the closure condition");
    return out;
}

BIdeal principal_ideal(const EllElem& g) {
    SU3_CHECK(g.ext != nullptr && !g.is_zero(), "principal ideal needs a nonzero element");
    return ideal_from_generators(*g.ext, {g});
}

BIdeal ideal_product(const BIdeal& x, const BIdeal& y) {
    const ExtensionContext& ext = *x.ext;
    EllElem xa = ext.make(x.a, Poly(ext.fq()));
    EllElem xw = ext.make(x.b, x.c);
    EllElem ya = ext.make(y.a, Poly(ext.fq()));
    EllElem yw = ext.make(y.b, y.c);
    return ideal_from_generators(ext, {xa * ya, xa * yw, xw * ya, xw * yw});
}

BIdeal ideal_conj(const BIdeal& x) {
    const ExtensionContext& ext = *x.ext;
    EllElem xa = ext.make(x.a, Poly(ext.fq()));
    EllElem xw = ext.make(x.b, x.c);
    return ideal_from_generators(ext, {xa, xw.conj()});
}

Poly ideal_norm(const BIdeal& x) { return x.a * x.c; }

bool ideal_contains(const BIdeal& x, const EllElem& g) {
    if (!g.in_B()) return false;
    if (g.is_zero()) return true;
    const Poly& u = g.a.num();
    const Poly& v = g.b.num();
    if (!poly_divides(x.c, v)) return false;
    Poly w = Poly::divmod(v, x.c).first;
    return poly_divides(x.a, u - w * x.b);
}

EllElem ideal_reduce(const BIdeal& x, const EllElem& g) {
    SU3_CHECK(x.ext != nullptr, "ideal missing extension context");
    SU3_CHECK(g.in_B(), "residue reduction needs an integral element");
    const Poly& u = g.a.num();
    const Poly& v = g.b.num();
    auto [q, vr] = Poly::divmod(v, x.c);
    Poly ur = Poly::divmod(u - q * x.b, x.a).second;
    return x.ext->make(ur, vr);
}

std::optional<EllElem> principal_generator(const BIdeal& x) {
    const ExtensionContext& ext = *x.ext;
    const FqContext& F = ext.fq();
    Poly n = ideal_norm(x);
    int nd = n.deg();
    std::optional<EllElem> found;
    // N(u + v omega) = u^2 - v^2 D must equal n up to a unit
    for_each_poly(F, nd / 2, [&](const Poly& u) {
        if (found) return;
        for_each_poly(F, (nd - ext.d()) / 2, [&](const Poly& v) {
            if (found) return;
            if (u.is_zero() && v.is_zero()) return;
            Poly norm = u * u - v * v * ext.D();
            if (norm.is_zero() || norm.deg() != nd) return;
            if (!(norm.monic() == n)) return;
            EllElem alpha = ext.make(u, v);
            if (!ideal_contains(x, alpha)) return;
            found = alpha;
        });
    });
    return found;
}

ClassGroup class_group(const ExtensionContext& ext) {
    const FqContext& F = ext.fq();
    int genus = (ext.d() - 1) / 2;
    // reduced primitive ideals: a monic, deg a <= genus, deg b < deg a,
    // a | b^2 - D
    std::vector<BIdeal> reduced;
    for (int da = 0; da <= genus; ++da) {
        for_each_poly(F, da - 1, [&](const Poly& low) {
            std::vector<uint16_t> cf(static_cast<size_t>(da) + 1, 0);
            for (int i = 0; i <= low.deg(); ++i) cf[static_cast<size_t>(i)] = low.coeff(i);
            cf[static_cast<size_t>(da)] = 1;
            Poly a(F, cf);
            for_each_poly(F, da - 1, [&](const Poly& b) {
                if (!poly_divides(a, b * b - ext.D())) return;
                reduced.push_back(BIdeal{&ext, a, b, Poly::constant(F, 1)});
            });
        });
    }
    SU3_INVARIANT(!reduced.empty(), "no reduced ideals (unit ideal missing)");

    ClassGroup cg;
    for (const BIdeal& I : reduced) {
        bool fresh = true;
        for (const BIdeal& J : cg.reps) {
            if (principal_generator(ideal_product(I, ideal_conj(J)))) {
                fresh = false;
                break;
            }
        }
        if (fresh) cg.reps.push_back(I);
    }
    // the unit ideal's class sits first
    std::stable_sort(cg.reps.begin(), cg.reps.end(), [](const BIdeal& x, const BIdeal& y) {
        return x.is_unit_ideal() && !y.is_unit_ideal();
    });
    return cg;
}

std::optional<long long> class_number_from_points(const ExtensionContext& ext) {
    if (ext.d() == 1) return 1;
    if (ext.d() != 3) return std::nullopt;
    const FqContext& F = ext.fq();
    long long n = 1;  // the point at infinity
    for (uint16_t x : F.elements()) {
        uint16_t v = ext.D().eval(x);
        if (v == 0)
            n += 1;
        else if (fq_sqrt(F, v))
            n += 2;
    }
    return n;
}

}  // namespace su3tree
