#include "su3tree/fq.hpp"

#include <algorithm>
#include <numeric>

namespace su3tree {
namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Polynomial arithmetic over F_p on int vectors (little-endian), used only
// to bootstrap the tables.
std::vector<int> pmul(const std::vector<int>& a, const std::vector<int>& b, int p) {
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return c;
}

void pmod(std::vector<int>& a, const std::vector<int>& m, int p) {
    int dm = int(m.size()) - 1;
    for (int i = int(a.size()) - 1; i >= dm; --i) {
        int c = a[i] % p;
        if (c == 0) continue;
        // m is monic
        for (int j = 0; j <= dm; ++j) {
            int& t = a[i - dm + j];
            t = ((t - c * m[j]) % p + p) % p;
        }
    }
    a.resize(std::max<size_t>(1, std::min(a.size(), size_t(dm))));
    while (a.size() > 1 && a.back() == 0) a.pop_back();
}

bool has_root(const std::vector<int>& f, int p) {
    for (int x = 0; x < p; ++x) {
        long long v = 0, xp = 1;
        for (int c : f) {
            v = (v + c * xp) % p;
            xp = (xp * x) % p;
        }
        if (v % p == 0) return true;
    }
    return false;
}

// Trial division by all monic polynomials of degree <= deg(f)/2.
bool is_irreducible(const std::vector<int>& f, int p) {
    int d = int(f.size()) - 1;
    if (d == 1) return true;
    if (has_root(f, p)) return false;
    if (d <= 3) return true;  // no factor of degree 1 => irreducible for d<=3
    for (int dd = 2; 2 * dd <= d; ++dd) {
        std::vector<int> g(dd + 1, 0);
        g[dd] = 1;
        // enumerate lower coefficients
        long long count = 1;
        for (int i = 0; i < dd; ++i) count *= p;
        for (long long n = 0; n < count; ++n) {
            long long m = n;
            for (int i = 0; i < dd; ++i) {
                g[i] = int(m % p);
                m /= p;
            }
            std::vector<int> rem = f;
            // remainder of f by g via repeated subtraction
            int dg = dd;
            std::vector<int> r = f;
            for (int i = int(r.size()) - 1; i >= dg; --i) {
                int c = r[i] % p;
                if (c == 0) continue;
                for (int j = 0; j <= dg; ++j) {
                    int& t = r[i - dg + j];
                    t = ((t - c * g[j]) % p + p) % p;
                }
            }
            bool zero = true;
            for (int i = 0; i < dg && zero; ++i) zero = (r[i] % p == 0);
            (void)rem;
            if (zero) return false;
        }
    }
    return true;
}

}  // namespace

FqContext::FqContext(int p, int r, std::vector<int> modulus) : p_(p), r_(r) {
    SU3_CHECK(is_prime(p) && p % 2 == 1, "fq: p must be an odd prime");
    SU3_CHECK(r >= 1, "fq: r must be positive");
    long long q = 1;
    for (int i = 0; i < r; ++i) q *= p;
    SU3_CHECK(q <= kMaxQ, "fq: q exceeds supported cap");
    q_ = int(q);

    if (r == 1) {
        modulus_ = {0, 1};  // x, unused
    } else if (!modulus.empty()) {
        SU3_CHECK(int(modulus.size()) == r + 1 && modulus.back() % p == 1,
                  "fq: modulus must be monic of degree r");
        for (int& c : modulus) c = ((c % p) + p) % p;
        SU3_CHECK(is_irreducible(modulus, p), "fq: modulus is reducible");
        modulus_ = modulus;
    } else {
        // lexicographically smallest monic irreducible of degree r
        std::vector<int> f(r + 1, 0);
        f[r] = 1;
        long long count = 1;
        for (int i = 0; i < r; ++i) count *= p;
        bool found = false;
        for (long long n = 0; n < count && !found; ++n) {
            long long m = n;
            for (int i = 0; i < r; ++i) {
                f[i] = int(m % p);
                m /= p;
            }
            if (is_irreducible(f, p)) {
                modulus_ = f;
                found = true;
            }
        }
        SU3_INVARIANT(found, "fq: no irreducible modulus found");
    }

    one_ = 1;  // index of the constant 1 is p^0 coefficient 1 => index 1
    add_.resize(size_t(q_) * q_);
    mul_.resize(size_t(q_) * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    frob_.resize(q_);

    auto decode = [&](uint16_t a) {
        std::vector<int> c(r_);
        for (int i = 0; i < r_; ++i) {
            c[i] = a % p_;
            a = uint16_t(a / p_);
        }
        return c;
    };
    auto encode = [&](const std::vector<int>& c) {
        int a = 0;
        for (int i = int(c.size()) - 1; i >= 0; --i) a = a * p_ + (i < int(c.size()) ? c[i] : 0);
        // careful: little-endian encode
        a = 0;
        long long w = 1;
        for (int i = 0; i < int(c.size()) && i < r_; ++i) {
            a += int(c[i] * w);
            w *= p_;
        }
        return uint16_t(a);
    };

    for (int a = 0; a < q_; ++a) {
        auto ca = decode(uint16_t(a));
        std::vector<int> cn(r_);
        for (int i = 0; i < r_; ++i) cn[i] = (p_ - ca[i]) % p_;
        neg_[a] = encode(cn);
        for (int b = 0; b < q_; ++b) {
            auto cb = decode(uint16_t(b));
            std::vector<int> cs(r_);
            for (int i = 0; i < r_; ++i) cs[i] = (ca[i] + cb[i]) % p_;
            add_[size_t(a) * q_ + b] = encode(cs);
            std::vector<int> prod = pmul(ca, cb, p_);
            if (r_ > 1)
                pmod(prod, modulus_, p_);
            else
                prod = {prod[0] % p_};
            prod.resize(r_, 0);
            mul_[size_t(a) * q_ + b] = encode(prod);
        }
    }
    for (int a = 1; a < q_; ++a) {
        for (int b = 1; b < q_; ++b) {
            if (mul_[size_t(a) * q_ + b] == one_) {
                inv_[a] = uint16_t(b);
                break;
            }
        }
        SU3_INVARIANT(inv_[a] != 0, "fq: element without inverse");
    }
    for (int a = 0; a < q_; ++a) {
        uint16_t x = uint16_t(a);
        uint16_t y = one_;
        for (int i = 0; i < p_; ++i) y = mul_[size_t(y) * q_ + x];
        // y = x^p computed as 1*x*...*x, p factors
        frob_[a] = y;
    }
}

uint16_t FqContext::pow(uint16_t a, long long e) const {
    SU3_CHECK(!(a == 0 && e < 0), "fq: zero to negative power");
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    uint16_t res = one_, base = a;
    while (e > 0) {
        if (e & 1) res = mul(res, base);
        base = mul(base, base);
        e >>= 1;
    }
    return res;
}

uint16_t FqContext::from_int(long long n) const {
    long long m = ((n % p_) + p_) % p_;
    return uint16_t(m);  // constants live in the prime field: index = residue
}

std::vector<int> FqContext::coords(uint16_t a) const {
    std::vector<int> c(r_);
    for (int i = 0; i < r_; ++i) {
        c[i] = a % p_;
        a = uint16_t(a / p_);
    }
    return c;
}

uint16_t FqContext::from_coords(const std::vector<int>& c) const {
    SU3_CHECK(int(c.size()) <= r_, "fq: coordinate vector too long");
    long long a = 0, w = 1;
    for (size_t i = 0; i < c.size(); ++i) {
        a += (((c[i] % p_) + p_) % p_) * w;
        w *= p_;
    }
    return uint16_t(a);
}

std::string FqContext::to_string(uint16_t a) const {
    if (r_ == 1) return std::to_string(a);
    auto c = coords(a);
    std::string s = "[";
    for (int i = 0; i < r_; ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    return s + "]";
}

std::vector<uint16_t> FqContext::elements() const {
    std::vector<uint16_t> e(q_);
    std::iota(e.begin(), e.end(), 0);
    return e;
}

}  // namespace su3tree
