#pragma once

#include <cstdint>
#include <string>

#include "g2rank/errors.hpp"
#include "g2rank/integers.hpp"

namespace g2r {

// Prime-field element with the modulus carried alongside the residue.
// Carrying p per element costs a word but keeps mixed-modulus bugs
// impossible and the type free of global state.
struct Fp {
    uint64_t v = 0;  // canonical residue in [0, p)
    uint64_t p = 0;  // 0 means "unattached zero" (additive identity of any Fp)

    Fp() = default;
    Fp(uint64_t value, uint64_t modulus) : v(value % modulus), p(modulus) {}

    static Fp from_integer(const Integer& n, uint64_t p) {
        Integer r = n % p;
        if (r < 0) r += p;
        return Fp((uint64_t)r, p);
    }
    // p must not divide the denominator
    static Fp from_rational(const Rational& q, uint64_t p);

    bool attached() const { return p != 0; }
};

inline void check_same_field(const Fp& a, const Fp& b) {
    check_internal(a.p == b.p || a.p == 0 || b.p == 0, "Fp: mixed moduli");
}

inline uint64_t modulus_of(const Fp& a, const Fp& b) { return a.p ? a.p : b.p; }

inline bool is_zero(const Fp& a) { return a.v == 0; }
inline Fp zero_like(const Fp& a) { return Fp(0, a.p ? a.p : 1); }
inline Fp one_like(const Fp& a) { check_internal(a.attached(), "Fp: one_like of unattached zero"); return Fp(1, a.p); }

inline bool operator==(const Fp& a, const Fp& b) {
    check_same_field(a, b);
    return a.v == b.v;
}
inline bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

inline Fp operator+(const Fp& a, const Fp& b) {
    check_same_field(a, b);
    uint64_t p = modulus_of(a, b);
    if (!p) return Fp();
    uint64_t s = a.v + b.v;
    if (s >= p) s -= p;
    return Fp(s, p);
}
inline Fp operator-(const Fp& a) {
    if (!a.p || a.v == 0) return a;
    return Fp(a.p - a.v, a.p);
}
inline Fp operator-(const Fp& a, const Fp& b) { return a + (-b); }
inline Fp operator*(const Fp& a, const Fp& b) {
    check_same_field(a, b);
    uint64_t p = modulus_of(a, b);
    if (!p) return Fp();
    return Fp((uint64_t)((__uint128_t)a.v * b.v % p), p);
}

inline Fp pow(Fp a, uint64_t e) {
    check_internal(a.attached(), "Fp: pow of unattached zero");
    Fp r(1, a.p);
    while (e) {
        if (e & 1) r = r * a;
        a = a * a;
        e >>= 1;
    }
    return r;
}

inline Fp inverse(const Fp& a) {
    check_internal(a.attached(), "Fp: inverse needs a modulus");
    require(a.v != 0, "Fp: division by zero");
    // extended Euclid on (v, p)
    int64_t t = 0, new_t = 1;
    int64_t r = (int64_t)a.p, new_r = (int64_t)a.v;
    while (new_r != 0) {
        int64_t q = r / new_r;
        int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    check_internal(r == 1, "Fp: modulus not prime (inverse failed), factor " + std::to_string(r));
    if (t < 0) t += (int64_t)a.p;
    return Fp((uint64_t)t, a.p);
}
inline Fp operator/(const Fp& a, const Fp& b) { return a * inverse(b); }

inline Fp Fp::from_rational(const Rational& q, uint64_t p) {
    Fp den = Fp::from_integer(denominator(q), p);
    require(den.v != 0, "Fp: denominator divisible by p=" + std::to_string(p));
    return Fp::from_integer(numerator(q), p) * inverse(den);
}

// Legendre symbol: +1 square, -1 nonsquare, 0 zero
inline int legendre(const Fp& a) {
    check_internal(a.attached(), "Fp: legendre of unattached zero");
    if (a.v == 0) return 0;
    Fp r = pow(a, (a.p - 1) / 2);
    return r.v == 1 ? 1 : -1;
}

// Square root by scan; only used on small moduli (test oracles, inert-infinity
// bookkeeping), where p stays within the prime guard.
inline std::optional<Fp> sqrt_scan(const Fp& a, uint64_t scan_guard = 100000) {
    check_internal(a.attached(), "Fp: sqrt of unattached zero");
    require(a.p <= scan_guard, "Fp: sqrt scan guard exceeded");
    for (uint64_t t = 0; t < a.p; ++t)
        if ((__uint128_t)t * t % a.p == a.v) return Fp(t, a.p);
    return std::nullopt;
}

inline uint64_t smallest_nonresidue(uint64_t p) {
    require(p > 2, "Fp2: p must be odd");
    for (uint64_t d = 2; d < p; ++d)
        if (legendre(Fp(d, p)) == -1) return d;
    throw internal_error("Fp2: no quadratic nonresidue found");
}

// F_{p^2} = F_p(t), t^2 = delta with delta a fixed nonresidue mod p.
struct Fp2 {
    Fp a, b;          // a + b t
    uint64_t delta = 0;

    Fp2() = default;
    Fp2(Fp a_, Fp b_, uint64_t delta_) : a(a_), b(b_), delta(delta_) {}
    static Fp2 lift(const Fp& x, uint64_t delta) { return Fp2(x, Fp(0, x.p), delta); }

    uint64_t p() const { return a.p; }
    bool in_base_field() const { return b.v == 0; }
};

inline bool is_zero(const Fp2& x) { return x.a.v == 0 && x.b.v == 0; }
inline Fp2 zero_like(const Fp2& x) { return Fp2(zero_like(x.a), zero_like(x.a), x.delta); }
inline Fp2 one_like(const Fp2& x) { return Fp2(one_like(x.a), zero_like(x.a), x.delta); }

inline bool operator==(const Fp2& x, const Fp2& y) { return x.a == y.a && x.b == y.b; }
inline bool operator!=(const Fp2& x, const Fp2& y) { return !(x == y); }

inline Fp2 operator+(const Fp2& x, const Fp2& y) { return Fp2(x.a + y.a, x.b + y.b, x.delta ? x.delta : y.delta); }
inline Fp2 operator-(const Fp2& x) { return Fp2(-x.a, -x.b, x.delta); }
inline Fp2 operator-(const Fp2& x, const Fp2& y) { return x + (-y); }
inline Fp2 operator*(const Fp2& x, const Fp2& y) {
    uint64_t delta = x.delta ? x.delta : y.delta;
    uint64_t p = modulus_of(x.a, y.a);
    Fp d(delta % (p ? p : 1), p ? p : 1);
    return Fp2(x.a * y.a + d * x.b * y.b, x.a * y.b + x.b * y.a, delta);
}

inline Fp norm(const Fp2& x) {  // x * conj(x) = a^2 - delta b^2
    Fp d(x.delta % x.p(), x.p());
    return x.a * x.a - d * x.b * x.b;
}
inline Fp2 conjugate(const Fp2& x) { return Fp2(x.a, -x.b, x.delta); }
inline Fp2 frobenius(const Fp2& x) { return conjugate(x); }

inline Fp2 inverse(const Fp2& x) {
    require(!is_zero(x), "Fp2: division by zero");
    Fp n_inv = inverse(norm(x));
    return Fp2(x.a * n_inv, -x.b * n_inv, x.delta);
}
inline Fp2 operator/(const Fp2& x, const Fp2& y) { return x * inverse(y); }

inline bool is_square(const Fp2& x) {
    if (is_zero(x)) return true;
    return legendre(norm(x)) == 1;  // norm is surjective onto F_p^*
}

// every element of F_p has a square root in F_{p^2}
inline Fp2 sqrt_in_fp2(const Fp& c, uint64_t delta) {
    if (c.v == 0) return Fp2(c, c, delta);
    if (legendre(c) == 1) {
        auto r = sqrt_scan(c);
        return Fp2(*r, Fp(0, c.p), delta);
    }
    Fp d(delta % c.p, c.p);
    auto r = sqrt_scan(c * inverse(d));  // c = (r t)^2
    return Fp2(Fp(0, c.p), *r, delta);
}

}  // namespace g2r
