#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "g2rank/errors.hpp"
#include "g2rank/fp.hpp"
#include "g2rank/jacobian.hpp"
#include "g2rank/model.hpp"
#include "g2rank/util.hpp"

namespace g2r {

inline Poly<Fp> reduce_mod_p(const ZPoly& f, uint64_t p) {
    std::vector<Fp> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(Fp::from_integer(x, p));
    return Poly<Fp>(std::move(c));
}

inline Poly<Fp2> lift_to_fp2(const Poly<Fp>& f, uint64_t delta) {
    std::vector<Fp2> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(Fp2::lift(x, delta));
    return Poly<Fp2>(std::move(c));
}

// Good reduction for counting purposes: p odd, the degree of g is preserved
// and the reduced form is squarefree (as a degree-6 form, so the fiber at
// infinity stays smooth too).
inline bool good_reduction(const SimplifiedModel& m, uint64_t p) {
    if (p == 2) return false;
    if (m.disc_form() % p == 0) return false;
    if (m.g.lc() % p == 0) return false;
    return true;
}

// #C(F_{p^k}) for k = 1, 2, points at infinity included.
inline int64_t count_points_curve(const SimplifiedModel& m, uint64_t p, int k) {
    require(k == 1 || k == 2, "count: k must be 1 or 2");
    require(p > 2 && is_prime_u64(p), "count: p must be an odd prime");
    require(good_reduction(m, p), "bad prime");
    double pk = std::pow((double)p, k);
    require(pk <= 1e6, "count: p^k exceeds the counting guard");

    Poly<Fp> g = reduce_mod_p(m.g, p);
    int64_t total = 0;
    if (k == 1) {
        for (uint64_t x = 0; x < p; ++x) {
            Fp y2 = eval(g, Fp(x, p));
            total += 1 + legendre(y2);  // 1 point when y2 = 0
        }
        if (g.degree() == 5) total += 1;
        else total += 1 + legendre(Fp::from_integer(m.c, p));
    } else {
        uint64_t delta = smallest_nonresidue(p);
        Poly<Fp2> g2 = lift_to_fp2(g, delta);
        for (uint64_t a = 0; a < p; ++a)
            for (uint64_t b = 0; b < p; ++b) {
                Fp2 x(Fp(a, p), Fp(b, p), delta);
                Fp2 y2 = eval(g2, x);
                if (is_zero(y2)) total += 1;
                else total += is_square(y2) ? 2 : 0;
            }
        if (g.degree() == 5) total += 1;
        else total += 2;  // lc is a square in F_{p^2} always
    }
    return total;
}

// Independent slow path used to cross-check the character-sum count.
inline int64_t count_points_curve_bruteforce(const SimplifiedModel& m, uint64_t p) {
    require(good_reduction(m, p), "bad prime");
    Poly<Fp> g = reduce_mod_p(m.g, p);
    int64_t total = 0;
    for (uint64_t x = 0; x < p; ++x)
        for (uint64_t y = 0; y < p; ++y)
            if (Fp(y, p) * Fp(y, p) == eval(g, Fp(x, p))) ++total;
    if (g.degree() == 5) total += 1;
    else total += 1 + legendre(Fp::from_integer(m.c, p));
    return total;
}

// |J(F_p)| = (N1^2 + N2)/2 - p, validated against the Weil interval.
inline Integer group_order(const SimplifiedModel& m, uint64_t p) {
    require(p <= prime_guard_max(), "group_order: p exceeds the prime guard");
    int64_t n1 = count_points_curve(m, p, 1);
    int64_t n2 = count_points_curve(m, p, 2);
    Integer order = (Integer(n1) * n1 + n2) / 2 - p;
    double sq = std::sqrt((double)p);
    double lo = std::pow(sq - 1.0, 4) - 0.5;
    double hi = std::pow(sq + 1.0, 4) + 0.5;
    check_internal(order >= Integer((int64_t)std::floor(lo)) && order <= Integer((int64_t)std::ceil(hi)),
                   "group_order: Weil bound violated (counting bug)");
    return order;
}

// exact order of a divisor class, given the group order
template <class F>
Integer order_of(const Jacobian<F>& jac, const Divisor<F>& d, const Integer& group_order_value) {
    require(group_order_value > 0, "order_of: group order must be positive");
    require(group_order_value < Integer("10000000000000000"), "order unresolved: group order beyond factorization guard");
    uint64_t m = group_order_value.convert_to<uint64_t>();
    Integer order = group_order_value;
    for (auto [q, e] : factor_u64(m)) {
        for (unsigned i = 0; i < e; ++i) {
            Integer cand = order / q;
            if (order % q == 0 && jac.is_identity(jac.mul(cand, d))) order = cand;
            else break;
        }
    }
    check_internal(jac.is_identity(jac.mul(order, d)), "order_of: group order does not kill the class");
    return order;
}

// ---- reductions Q -> F_p -----------------------------------------------------

using QDivisor = Divisor<Rational>;

inline Jacobian<Rational> jacobian_over_q(const SimplifiedModel& m) {
    QPoly g = to_qpoly(m.g);
    std::optional<Rational> s;
    if (g.degree() == 6) {
        if (auto r = is_square(m.c)) s = Rational(*r);
    }
    return Jacobian<Rational>(g, s);
}

// good reduction for divisor transport: degree and smoothness preserved and,
// on even models, the two points at infinity stay distinct and rational
inline bool good_prime_for_divisors(const SimplifiedModel& m, uint64_t p) {
    return good_reduction(m, p);
}

inline Jacobian<Fp> jacobian_mod_p(const SimplifiedModel& m, uint64_t p) {
    require(good_reduction(m, p), "bad prime");
    Poly<Fp> g = reduce_mod_p(m.g, p);
    std::optional<Fp> s;
    if (g.degree() == 6) {
        if (auto r = is_square(m.c)) s = Fp::from_integer(*r, p);
        else if (auto t = sqrt_scan(Fp::from_integer(m.c, p), prime_guard_max())) s = *t;
    }
    return Jacobian<Fp>(g, s);
}

inline Fp reduce_rational(const Rational& q, uint64_t p) { return Fp::from_rational(q, p); }

inline Poly<Fp> reduce_poly(const QPoly& f, uint64_t p) {
    std::vector<Fp> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(Fp::from_rational(x, p));
    return Poly<Fp>(std::move(c));
}

// Transport an exact divisor class to J(F_p).  Requires all denominators
// prime to p; the monicity of u keeps degrees stable.
inline Divisor<Fp> reduce_divisor(const QDivisor& d, uint64_t p) {
    Divisor<Fp> out{reduce_poly(d.u, p), reduce_poly(d.v, p), d.n};
    check_internal(out.u.degree() == d.u.degree(), "reduce: u degree dropped");
    return out;
}

}  // namespace g2r
