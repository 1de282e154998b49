#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "g2rank/counting.hpp"
#include "g2rank/errors.hpp"
#include "g2rank/fp.hpp"
#include "g2rank/integers.hpp"
#include "g2rank/poly.hpp"

namespace g2r {

// Minimal elliptic helper for the split/glue families: curves y^2 = cubic(x)
// with exact rational arithmetic and char-sum point counts mod p.

// y^2 = a3 x^3 + a2 x^2 + a1 x + a0  ->  Y^2 = X^3 + a2 X^2 + a1 a3 X + a0 a3^2
// via (X, Y) = (a3 x, a3 y); denominators are cleared first.
inline ZPoly integral_monic_cubic(const QPoly& cubic) {
    require(cubic.degree() == 3, "elliptic: cubic expected");
    Integer den;
    ZPoly C = clear_denominators(cubic, den);       // cubic = C / den
    ZPoly C2 = Integer(den) * C;                    // (den*y)^2 = den*C, integral
    Integer a3 = C2.c[3];
    ZPoly monic({C2.c[0] * a3 * a3, C2.c[1] * a3, C2.c[2], Integer(1)});
    if (a3 < 0) {
        // keep the leading coefficient positive before monicizing: twist by
        // the square (-1)^2 does not change the curve
        ZPoly C3 = Integer(-1) * C2;
        a3 = C3.c[3];
        monic = ZPoly({C3.c[0] * a3 * a3, C3.c[1] * a3, C3.c[2], Integer(1)});
    }
    return monic;
}

inline bool elliptic_good_reduction(const ZPoly& cubic, uint64_t p) {
    if (p <= 2) return false;
    if (cubic.lc() % p == 0) return false;
    return discriminant_z(cubic) % p != 0;
}

// #E(F_p) including the point at infinity
inline int64_t count_points_elliptic(const ZPoly& cubic, uint64_t p) {
    require(cubic.degree() == 3, "elliptic: cubic expected");
    require(p > 2 && is_prime_u64(p), "elliptic: odd prime expected");
    require(elliptic_good_reduction(cubic, p), "bad prime");
    Poly<Fp> f = reduce_mod_p(cubic, p);
    int64_t total = 1;
    for (uint64_t x = 0; x < p; ++x) total += 1 + legendre(eval(f, Fp(x, p)));
    return total;
}

// affine rational point; infinity is represented separately
struct ECPoint {
    Rational x, y;
};

// chord-tangent group law on y^2 = monic cubic; nullopt plays the identity
inline std::optional<ECPoint> ec_add(const ZPoly& cubic, const std::optional<ECPoint>& P,
                                     const std::optional<ECPoint>& Q) {
    check_internal(cubic.degree() == 3 && cubic.lc() == 1, "ec_add: monic cubic expected");
    if (!P) return Q;
    if (!Q) return P;
    QPoly f = to_qpoly(cubic);
    Rational lambda;
    if (P->x == Q->x) {
        if (P->y == -Q->y) return std::nullopt;  // inverse pair (includes 2-torsion)
        lambda = eval(derivative(f), P->x) / (Rational(2) * P->y);
    } else {
        lambda = (Q->y - P->y) / (Q->x - P->x);
    }
    Rational a2 = Rational(cubic.c[2]);
    Rational x3 = lambda * lambda - a2 - P->x - Q->x;
    Rational y3 = lambda * (P->x - x3) - P->y;
    return ECPoint{x3, y3};
}

inline std::optional<ECPoint> ec_mul(const ZPoly& cubic, int k, const std::optional<ECPoint>& P) {
    std::optional<ECPoint> acc;
    for (int i = 0; i < k; ++i) acc = ec_add(cubic, acc, P);
    return acc;
}

// A rational point of infinite order certifies positive rank.  By Mazur's
// classification rational torsion has order at most 12, so surviving all
// multiples up to 12 settles it.
inline bool ec_point_has_infinite_order(const ZPoly& cubic, const ECPoint& P) {
    std::optional<ECPoint> acc = P;
    for (int k = 2; k <= 12; ++k) {
        acc = ec_add(cubic, acc, P);
        if (!acc) return false;
    }
    return true;
}

// naive search for a rational point x = p/q with max(|p|, q) <= height and
// y != 0; returns a witness of infinite order if one is found
inline std::optional<ECPoint> positive_rank_witness(const ZPoly& cubic, int64_t height) {
    require(cubic.degree() == 3, "elliptic: cubic expected");
    ZPoly monic = integral_monic_cubic(to_qpoly(cubic));
    for (int64_t q = 1; q <= height; ++q) {
        for (int64_t pnum = -height; pnum <= height; ++pnum) {
            if (std::gcd(std::abs(pnum), q) != 1) continue;
            // y^2 = f(p/q) = N / q^3, rational square iff N*q is a square
            Integer N = 0;
            Integer qq(q);
            for (int i = 3; i >= 0; --i) N = N * pnum + monic.c[(size_t)i] * pow(qq, (unsigned)(3 - i));
            Integer target = N * q;
            if (target <= 0) continue;  // y = 0 gives torsion, negatives impossible
            auto r = is_square(target);
            if (!r) continue;
            // y^2 = N / q^3 = (N q) / q^4, so y = sqrt(N q) / q^2
            ECPoint P{Rational(pnum, q), Rational(*r, Integer(q) * q)};
            check_internal(P.y * P.y == eval(to_qpoly(monic), P.x), "witness: not on curve");
            if (ec_point_has_infinite_order(monic, P)) return P;
        }
    }
    return std::nullopt;
}

// j-invariant of y^2 = (x-r1)(x-r2)(x-r3) through the Legendre parameter
inline Rational j_invariant_from_roots(const Rational& r1, const Rational& r2, const Rational& r3) {
    Rational lambda = (r3 - r1) / (r2 - r1);
    Rational num = lambda * lambda - lambda + 1;
    Rational den = lambda * lambda * (1 - lambda) * (1 - lambda);
    return Rational(256) * num * num * num / den;
}

}  // namespace g2r
