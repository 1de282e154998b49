#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "g2rank/errors.hpp"
#include "g2rank/integers.hpp"

namespace g2r {

// Dense univariate polynomial over a field (or over Z via Integer), stored
// low degree first with no trailing zeros.  The zero polynomial has an empty
// coefficient list; degree() reports -1 for it (standing in for "-infinity").
template <class F>
struct Poly {
    std::vector<F> c;

    Poly() = default;
    explicit Poly(std::vector<F> coeffs) : c(std::move(coeffs)) { normalize(); }

    void normalize() {
        while (!c.empty() && is_zero(c.back())) c.pop_back();
    }
    int degree() const { return (int)c.size() - 1; }
    bool zero() const { return c.empty(); }
    const F& lc() const {
        check_internal(!c.empty(), "Poly: leading coefficient of zero polynomial");
        return c.back();
    }
    // coefficient of x^i, with an explicit zero for out-of-range i
    F coeff(size_t i, const F& zero_ctx) const { return i < c.size() ? c[i] : zero_like(zero_ctx); }
};

template <class F>
Poly<F> poly_from(std::vector<F> coeffs) { return Poly<F>(std::move(coeffs)); }

template <class F>
bool operator==(const Poly<F>& a, const Poly<F>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (size_t i = 0; i < a.c.size(); ++i)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}
template <class F>
bool operator!=(const Poly<F>& a, const Poly<F>& b) { return !(a == b); }

template <class F>
Poly<F> operator+(const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), a.c.empty() ? (b.c.empty() ? F() : zero_like(b.c[0])) : zero_like(a.c[0]));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size() && i < b.c.size()) r.c[i] = a.c[i] + b.c[i];
        else if (i < a.c.size()) r.c[i] = a.c[i];
        else r.c[i] = b.c[i];
    }
    r.normalize();
    return r;
}

template <class F>
Poly<F> operator-(const Poly<F>& a) {
    Poly<F> r = a;
    for (auto& x : r.c) x = -x;
    return r;
}
template <class F>
Poly<F> operator-(const Poly<F>& a, const Poly<F>& b) { return a + (-b); }

template <class F>
Poly<F> operator*(const Poly<F>& a, const Poly<F>& b) {
    if (a.zero() || b.zero()) return Poly<F>();
    Poly<F> r;
    r.c.assign(a.c.size() + b.c.size() - 1, zero_like(a.c[0]));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    r.normalize();
    return r;
}

template <class F>
Poly<F> operator*(const F& s, const Poly<F>& a) {
    Poly<F> r = a;
    for (auto& x : r.c) x = s * x;
    r.normalize();
    return r;
}

template <class F>
Poly<F> shift_up(const Poly<F>& a, size_t k) {  // a * x^k
    if (a.zero()) return a;
    Poly<F> r;
    r.c.assign(a.c.size() + k, zero_like(a.c[0]));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i + k] = a.c[i];
    return r;
}

// Horner evaluation in the coefficient field
template <class F>
F eval(const Poly<F>& p, const F& x) {
    F acc = zero_like(x);
    for (size_t i = p.c.size(); i-- > 0;) acc = acc * x + p.c[i];
    return acc;
}

template <class F>
Poly<F> derivative(const Poly<F>& p) {
    if (p.c.size() <= 1) return Poly<F>();
    Poly<F> r;
    r.c.reserve(p.c.size() - 1);
    for (size_t i = 1; i < p.c.size(); ++i) {
        F k = zero_like(p.c[0]);
        for (size_t j = 0; j < i; ++j) k = k + one_like(p.c[0]);
        r.c.push_back(k * p.c[i]);
    }
    r.normalize();
    return r;
}

template <class F>
Poly<F> monic(const Poly<F>& p) {
    check_internal(!p.zero(), "Poly: monic of zero polynomial");
    F inv = one_like(p.lc()) / p.lc();
    return inv * p;
}

// division with remainder; the divisor's leading coefficient must be invertible
template <class F>
std::pair<Poly<F>, Poly<F>> divmod(const Poly<F>& a, const Poly<F>& b) {
    check_internal(!b.zero(), "Poly: division by zero polynomial");
    if (a.degree() < b.degree()) return {Poly<F>(), a};
    F lcb_inv = one_like(b.lc()) / b.lc();
    Poly<F> r = a;
    Poly<F> q;
    q.c.assign((size_t)(a.degree() - b.degree() + 1), zero_like(b.lc()));
    while (!r.zero() && r.degree() >= b.degree()) {
        size_t shift = (size_t)(r.degree() - b.degree());
        F coef = r.lc() * lcb_inv;
        q.c[shift] = q.c[shift] + coef;
        for (size_t i = 0; i < b.c.size(); ++i)
            r.c[shift + i] = r.c[shift + i] - coef * b.c[i];
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

template <class F>
Poly<F> operator%(const Poly<F>& a, const Poly<F>& b) { return divmod(a, b).second; }
template <class F>
Poly<F> operator/(const Poly<F>& a, const Poly<F>& b) {
    auto [q, r] = divmod(a, b);
    check_internal(r.zero(), "Poly: inexact division");
    return q;
}

template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
    while (!b.zero()) {
        Poly<F> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.zero()) return a;
    return monic(a);
}

// g = s*a + t*b with g monic (or zero)
template <class F>
void xgcd(const Poly<F>& a, const Poly<F>& b, Poly<F>& g, Poly<F>& s, Poly<F>& t) {
    Poly<F> r0 = a, r1 = b;
    Poly<F> s0, s1, t0, t1;
    F one = a.zero() ? (b.zero() ? F() : one_like(b.c[0])) : one_like(a.c[0]);
    s0 = poly_from<F>({one});
    t1 = poly_from<F>({one});
    while (!r1.zero()) {
        auto [q, r] = divmod(r0, r1);
        Poly<F> s2 = s0 - q * s1;
        Poly<F> t2 = t0 - q * t1;
        r0 = std::move(r1); r1 = std::move(r);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.zero()) { g = r0; s = s0; t = t0; return; }
    F inv = one_like(r0.lc()) / r0.lc();
    g = inv * r0;
    s = inv * s0;
    t = inv * t0;
}

template <class F>
F pow_field(F base, unsigned k) {
    F r = one_like(base);
    while (k) {
        if (k & 1u) r = r * base;
        base = base * base;
        k >>= 1u;
    }
    return r;
}

// resultant over a field via the classical polynomial remainder sequence
template <class F>
F resultant_field(Poly<F> a, Poly<F> b) {
    require(!a.zero() && !b.zero(), "resultant: zero polynomial");
    F res = one_like(a.lc());
    if (a.degree() < b.degree()) {
        if ((a.degree() & 1) && (b.degree() & 1)) res = -res;
        std::swap(a, b);
    }
    while (true) {
        Poly<F> r = a % b;
        if (r.zero()) {
            if (b.degree() > 0) return zero_like(res);
            return res * pow_field(b.lc(), (unsigned)a.degree());
        }
        if ((a.degree() & 1) && (b.degree() & 1)) res = -res;
        res = res * pow_field(b.lc(), (unsigned)(a.degree() - r.degree()));
        a = std::move(b);
        b = std::move(r);
        if (b.degree() == 0) return res * pow_field(b.lc(), (unsigned)a.degree());
    }
}

// ---- integer polynomials ----------------------------------------------------

using ZPoly = Poly<Integer>;
using QPoly = Poly<Rational>;

inline Integer content(const ZPoly& p) {
    Integer g = 0;
    for (const auto& x : p.c) g = gcd(g, x);
    return g == 0 ? Integer(1) : g;
}

// pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r
inline ZPoly pseudo_rem(const ZPoly& a, const ZPoly& b) {
    check_internal(!b.zero(), "pseudo_rem: zero divisor");
    ZPoly r = a;
    Integer lcb = b.lc();
    int target = b.degree();
    int steps = a.degree() - b.degree() + 1;
    int done = 0;
    while (!r.zero() && r.degree() >= target) {
        Integer coef = r.lc();
        size_t shift = (size_t)(r.degree() - target);
        for (auto& x : r.c) x *= lcb;
        for (size_t i = 0; i < b.c.size(); ++i)
            r.c[shift + i] -= coef * b.c[i];
        r.normalize();
        ++done;
    }
    for (; done < steps; ++done)
        for (auto& x : r.c) x *= lcb;
    return r;
}

// Resultant over Z by the subresultant pseudo-remainder sequence.  Integer
// coefficients stay integral throughout, avoiding rational blow-up on the
// sextic discriminants that dominate the enumeration workload.
inline Integer resultant_z(ZPoly a, ZPoly b) {
    require(!a.zero() && !b.zero(), "resultant: zero polynomial");
    int sign = 1;
    if (a.degree() < b.degree()) {
        if ((a.degree() & 1) && (b.degree() & 1)) sign = -sign;
        std::swap(a, b);
    }
    if (b.degree() == 0) return pow(b.c[0], (unsigned)a.degree()) * sign;
    Integer ca = content(a), cb = content(b);
    for (auto& x : a.c) x /= ca;
    for (auto& x : b.c) x /= cb;
    Integer scale = pow(ca, (unsigned)b.degree()) * pow(cb, (unsigned)a.degree());
    Integer g = 1, h = 1;
    while (true) {
        int d = a.degree() - b.degree();
        if ((a.degree() & 1) && (b.degree() & 1)) sign = -sign;
        ZPoly r = pseudo_rem(a, b);
        a = std::move(b);
        Integer div = g * pow(h, (unsigned)d);
        for (auto& x : r.c) {
            check_internal(x % div == 0, "subresultant: inexact division");
            x /= div;
        }
        b = std::move(r);
        g = a.lc();
        if (d > 0) {
            Integer gd = pow(g, (unsigned)d);
            Integer hd = pow(h, (unsigned)(d - 1));
            check_internal(gd % hd == 0, "subresultant: inexact h update");
            h = gd / hd;
        }
        if (b.zero()) return Integer(0);
        if (b.degree() == 0) {
            Integer bd = pow(b.c[0], (unsigned)a.degree());
            Integer hd = pow(h, (unsigned)(a.degree() - 1));
            check_internal(bd % hd == 0, "subresultant: inexact final division");
            return sign * scale * (bd / hd);
        }
    }
}

inline Integer discriminant_z(const ZPoly& p) {
    require(p.degree() >= 1, "discriminant: degree too small");
    ZPoly dp;
    dp.c.reserve(p.c.size() - 1);
    for (size_t i = 1; i < p.c.size(); ++i) dp.c.push_back(Integer(i) * p.c[i]);
    dp.normalize();
    if (dp.zero()) return Integer(0);
    Integer res = resultant_z(p, dp);
    int n = p.degree();
    Integer num = (n * (n - 1) / 2) % 2 == 0 ? res : -res;
    check_internal(num % p.lc() == 0, "discriminant: resultant not divisible by lc");
    return num / p.lc();
}

inline ZPoly clear_denominators(const QPoly& p, Integer& denom_out) {
    Integer d = 1;
    for (const auto& x : p.c) d = d / gcd(d, denominator(x)) * denominator(x);
    ZPoly z;
    z.c.reserve(p.c.size());
    for (const auto& x : p.c) z.c.push_back(numerator(x) * (d / denominator(x)));
    z.normalize();
    denom_out = d;
    return z;
}

inline ZPoly to_zpoly(const QPoly& p) {
    ZPoly z;
    z.c.reserve(p.c.size());
    for (const auto& x : p.c) {
        require(denominator(x) == 1, "expected integer coefficients");
        z.c.push_back(numerator(x));
    }
    z.normalize();
    return z;
}

inline QPoly to_qpoly(const ZPoly& p) {
    QPoly q;
    q.c.reserve(p.c.size());
    for (const auto& x : p.c) q.c.push_back(Rational(x));
    q.normalize();
    return q;
}

// disc(P/D) = disc(P) / D^(2n-2)
inline Rational discriminant_q(const QPoly& p) {
    require(p.degree() >= 1, "discriminant: degree too small");
    Integer d;
    ZPoly z = clear_denominators(p, d);
    int n = p.degree();
    return Rational(discriminant_z(z)) / Rational(pow(d, (unsigned)(2 * n - 2)));
}

// Discriminant of p viewed as a binary form of degree n >= deg p, i.e. with a
// root at infinity of multiplicity n - deg p.  Zero once that multiplicity
// exceeds 1.
inline Integer discriminant_as_form(const ZPoly& p, int n) {
    require(!p.zero() && n >= p.degree(), "discriminant_as_form: bad degree");
    if (n == p.degree()) return discriminant_z(p);
    if (n == p.degree() + 1) return p.lc() * p.lc() * discriminant_z(p);
    return Integer(0);
}

template <class F>
F discriminant_field(const Poly<F>& p) {
    require(p.degree() >= 1, "discriminant: degree too small");
    Poly<F> dp = derivative(p);
    if (dp.zero()) return zero_like(p.lc());
    F res = resultant_field(p, dp);
    int n = p.degree();
    if ((n * (n - 1) / 2) % 2 == 1) res = -res;
    return res / p.lc();
}

// p(x) -> p(x + a)
template <class F>
Poly<F> translate(const Poly<F>& p, const F& a) {
    Poly<F> acc;
    Poly<F> lin = poly_from<F>({a, one_like(a)});
    for (size_t i = p.c.size(); i-- > 0;) {
        acc = acc * lin;
        acc = acc + poly_from<F>({p.c[i]});
    }
    return acc;
}

// p(x) -> s^deg(p) * p(x/s) (keeps monic polynomials monic; roots scale by s)
template <class F>
Poly<F> scale_roots(const Poly<F>& p, const F& s) {
    if (p.zero()) return p;
    Poly<F> r = p;
    F mult = one_like(s);
    for (size_t i = r.c.size(); i-- > 0;) {
        r.c[i] = r.c[i] * mult;
        mult = mult * s;
    }
    r.normalize();
    return r;
}

template <class F>
Poly<F> poly_of_roots(const std::vector<F>& roots) {
    check_internal(!roots.empty(), "poly_of_roots: no roots");
    Poly<F> r = poly_from<F>({one_like(roots[0])});
    for (const auto& a : roots) r = r * poly_from<F>({-a, one_like(a)});
    return r;
}

}  // namespace g2r
