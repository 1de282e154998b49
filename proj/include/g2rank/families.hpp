#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "g2rank/elliptic.hpp"
#include "g2rank/model.hpp"

namespace g2r {

// ---- split family  y^2 = d^3 x^6 + m^3 ---------------------------------------

struct SplitFamilyMember {
    int64_t d = 0, m = 0;            // primes > 3, both 3 mod 4
    WeierstrassModel curve;          // y^2 = d^3 x^6 + m^3
    ZPoly e_d, e_m;                  // y^2 = x^3 + d^3 and y^2 = x^3 + m^3
    int predicted_rank = 2;
    bool diagonal = false;           // d == m, kept out of rank-2 counts
};

// rank of y^2 = x^3 + p^3 for prime p > 3 by congruence class; primes that
// are 1 mod 12 fall outside the classification and come back empty
inline std::optional<int> split_factor_rank(int64_t p) {
    require(p > 3 && is_prime_u64((uint64_t)p), "split: prime > 3 expected");
    if (p % 12 == 5) return 0;
    if (p % 4 == 3) return 1;
    return std::nullopt;  // p = 1 mod 12: unclassified
}

inline ZPoly split_factor_cubic(int64_t p) {
    Integer p3 = pow(Integer(p), 3);
    return ZPoly({p3, Integer(0), Integer(0), Integer(1)});
}

inline SplitFamilyMember split_member(int64_t d, int64_t m) {
    SplitFamilyMember out;
    out.d = d;
    out.m = m;
    out.diagonal = d == m;
    Integer d3 = pow(Integer(d), 3), m3 = pow(Integer(m), 3);
    out.curve = WeierstrassModel(ZPoly({m3, Integer(0), Integer(0), Integer(0), Integer(0), Integer(0), d3}),
                                 {0, 0, 0, 0});
    out.e_d = split_factor_cubic(d);
    out.e_m = split_factor_cubic(m);
    auto rd = split_factor_rank(d), rm = split_factor_rank(m);
    check_internal(rd == 1 && rm == 1, "split: family member outside the rank-1 congruence class");
    out.predicted_rank = *rd + *rm;
    return out;
}

// all ordered pairs of primes d, m <= X^(1/3), both > 3 and 3 mod 4; the
// diagonal d = m is kept in the list but flagged
inline std::vector<SplitFamilyMember> split_family(int64_t X) {
    require(X >= 343, "split_family: X must be at least 343");
    int64_t bound = kth_root_floor(Integer(X), 3).convert_to<int64_t>();
    std::vector<int64_t> ps;
    for (int64_t p : primes_up_to(bound))
        if (p > 3 && p % 4 == 3) ps.push_back(p);
    std::vector<SplitFamilyMember> out;
    for (int64_t d : ps)
        for (int64_t m : ps) out.push_back(split_member(d, m));
    return out;
}

// local check of the splitting: #J(F_p) = #E_d(F_p) * #E_m(F_p)
inline bool verify_split(const SplitFamilyMember& mem, const std::vector<uint64_t>& primes) {
    for (uint64_t p : primes) {
        require(p > 2 && is_prime_u64(p), "verify_split: odd prime expected");
        require((int64_t)p != mem.d && (int64_t)p != mem.m && p != 3, "bad prime");
        SimplifiedModel s = SimplifiedModel::of(mem.curve);
        check_internal(good_reduction(s, p), "verify_split: expected good reduction away from 6dm");
        Integer jac_count = group_order(s, p);
        Integer prod = Integer(count_points_elliptic(mem.e_d, p)) * count_points_elliptic(mem.e_m, p);
        if (jac_count != prod) return false;
    }
    return true;
}

// ---- gluing along rational 2-torsion ------------------------------------------

struct GlueSpec {
    std::array<Rational, 3> roots_f, roots_g;
    Rational a1, b1, a2, b2, A, B;
    QPoly sextic;             // glue(f, g)
    bool j_invariants_equal = false;  // warning: the 2-torsion map may come from an isomorphism
};

// glue(f,g) for f, g monic cubics given by their root triples:
//   a1 = sum (a_{i+2}-a_{i+1})^2 / (b_{i+2}-b_{i+1}),   b1 symmetric,
//   a2 = sum a_i (b_{i+2}-b_{i+1}),                     b2 symmetric,
//   A = disc(g) a1/a2,  B = disc(f) b1/b2,
//   glue = -prod_i [ A (a_{i+1}-a_i)(a_i-a_{i-1}) x^2 + B (b_{i+1}-b_i)(b_i-b_{i+2}) ]
// with all indices cyclic mod 3.
inline GlueSpec glue(const std::array<Rational, 3>& rf, const std::array<Rational, 3>& rg) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            require(rf[(size_t)i] != rf[(size_t)j], "glue: coincident roots in f");
            require(rg[(size_t)i] != rg[(size_t)j], "glue: coincident roots in g");
        }
    GlueSpec out;
    out.roots_f = rf;
    out.roots_g = rg;
    auto af = [&](int i) { return rf[(size_t)(((i % 3) + 3) % 3)]; };
    auto bg = [&](int i) { return rg[(size_t)(((i % 3) + 3) % 3)]; };

    Rational a1 = 0, b1 = 0, a2 = 0, b2 = 0;
    for (int i = 0; i < 3; ++i) {
        Rational da = af(i + 2) - af(i + 1);
        Rational db = bg(i + 2) - bg(i + 1);
        a1 += da * da / db;
        b1 += db * db / da;
        a2 += af(i) * db;
        b2 += bg(i) * da;
    }
    out.a1 = a1;
    out.b1 = b1;
    out.a2 = a2;
    out.b2 = b2;
    require(a2 != 0 && b2 != 0, "glue degenerate");

    auto disc_of = [](auto root_at) {
        Rational d = 1;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Rational diff = root_at(i) - root_at(j);
                d *= diff * diff;
            }
        return d;
    };
    out.A = disc_of(bg) * a1 / a2;
    out.B = disc_of(af) * b1 / b2;

    QPoly prod = poly_from<Rational>({Rational(-1)});
    for (int i = 1; i <= 3; ++i) {
        Rational qa = out.A * (af(i + 1) - af(i)) * (af(i) - af(i - 1));
        Rational qb = out.B * (bg(i + 1) - bg(i)) * (bg(i) - bg(i + 2));
        prod = prod * poly_from<Rational>({qb, Rational(0), qa});
    }
    out.sextic = prod;
    require(out.sextic.degree() == 6, "glue degenerate");
    require(discriminant_q(out.sextic) != 0, "glue: sextic not separable");
    out.j_invariants_equal =
        j_invariant_from_roots(rf[0], rf[1], rf[2]) == j_invariant_from_roots(rg[0], rg[1], rg[2]);
    return out;
}

// monic cubic over Q -> rational roots, if it splits completely
inline std::optional<std::array<Rational, 3>> rational_roots_of_monic_cubic(const QPoly& f) {
    if (f.degree() != 3 || f.lc() != 1) return std::nullopt;
    // clear denominators by scaling x; integer roots then divide the constant
    Integer k = 1;
    for (const auto& c : f.c) k = k / gcd(k, denominator(c)) * denominator(c);
    ZPoly scaled;  // y = k x: y^3 + c2 k y^2 + c1 k^2 y + c0 k^3
    scaled.c = {numerator(f.c[0] * k * k * k), numerator(f.c[1] * k * k), numerator(f.c[2] * k), Integer(1)};
    std::vector<Rational> roots;
    QPoly rest = to_qpoly(scaled);
    for (int trials = 0; trials < 3; ++trials) {
        if (rest.degree() < 1) break;
        Integer c0 = numerator(rest.c[0] * 1);
        bool found = false;
        if (c0 == 0) {
            roots.push_back(Rational(0));
            rest = rest / poly_from<Rational>({Rational(0), Rational(1)});
            found = true;
        } else {
            Integer bound = abs(c0);
            for (Integer r = 1; r <= bound && !found; ++r) {
                if (c0 % r != 0) continue;
                for (Integer sgn : {Integer(r), Integer(-r)}) {
                    if (eval(rest, Rational(sgn)) == 0) {
                        roots.push_back(Rational(sgn));
                        rest = rest / poly_from<Rational>({Rational(-sgn), Rational(1)});
                        found = true;
                        break;
                    }
                }
            }
        }
        if (!found) return std::nullopt;
    }
    if (roots.size() != 3) return std::nullopt;
    return std::array<Rational, 3>{roots[0] / k, roots[1] / k, roots[2] / k};
}

// ---- positive-rank twist parametrization --------------------------------------

// d(u) = (l1-l2)(u^2-1)(1-l2+(l1-1)u^2)(l1 u^2 - l2) for the Legendre pair
// x(x-1)(x-l1), x(x-1)(x-l2)
inline Rational twist_family_d(const Rational& l1, const Rational& l2, const Rational& u) {
    require(l1 != l2, "twist family: parameters must differ");
    Rational u2 = u * u;
    return (l1 - l2) * (u2 - 1) * (Rational(1) - l2 + (l1 - 1) * u2) * (l1 * u2 - l2);
}

// ---- families with Jacobian a square of an elliptic curve ----------------------

struct FreemanSatohCurve {
    enum Form { Deg5, Deg6 } form = Deg5;
    Rational a, b;
    int m = 4;                        // 4 for deg-5 models, 3 for deg-6
    std::optional<Rational> c;        // a / sqrt(b) when b is a rational square
    std::optional<QPoly> e_cubic;     // E(c), rational coefficients
    std::optional<ZPoly> e_integral;  // monic integral normalization
    std::string marker;               // "extension-only" when c is irrational
};

inline std::optional<Rational> rational_sqrt(const Rational& b) {
    if (b < 0) return std::nullopt;
    auto n = is_square(numerator(b));
    auto d = is_square(denominator(b));
    if (!n || !d) return std::nullopt;
    return Rational(*n, *d);
}

// E(c): for y^2 = x^5 + a x^3 + b x (m = 4):
//   y^2 = (c+2) x^3 - (3c-10) x^2 + (3c-10) x - (c+2)
// for y^2 = x^6 + a x^3 + b (m = 3):
//   y^2 = (c+2) x^3 - (3c-30) x^2 + (3c+30) x - (c-2)
inline FreemanSatohCurve freeman_satoh_E(FreemanSatohCurve::Form form, const Rational& a, const Rational& b) {
    require(b != 0, "freeman-satoh: b must be nonzero");
    FreemanSatohCurve out;
    out.form = form;
    out.a = a;
    out.b = b;
    out.m = form == FreemanSatohCurve::Deg5 ? 4 : 3;
    auto sb = rational_sqrt(b);
    if (!sb) {
        out.marker = "extension-only";
        return out;
    }
    Rational c = a / *sb;
    out.c = c;
    QPoly e;
    if (form == FreemanSatohCurve::Deg5) {
        e = poly_from<Rational>({-(c + 2), 3 * c - 10, -(3 * c - 10), c + 2});
    } else {
        e = poly_from<Rational>({-(c - 2), 3 * c + 30, -(3 * c - 30), c + 2});
    }
    require(e.degree() == 3, "freeman-satoh: E(c) degenerates (c = -2)");
    require(discriminant_q(e) != 0, "freeman-satoh: E(c) is singular");
    out.e_cubic = e;
    out.e_integral = integral_monic_cubic(e);
    return out;
}

// ---- local rank-doubling consequence -------------------------------------------

struct RankDoublingRow {
    Integer d;
    uint64_t p = 0;
    bool skipped = false;
    bool equal = false;
    std::string note;
};

// For a genus-2 curve C with #J = (#E)^2 locally, the same identity holds for
// every joint quadratic twist: check it on dy^2 = g(x) vs dy^2 = cubic at the
// supplied primes.  Global rank statements are not asserted.
inline std::vector<RankDoublingRow> rank_doubling_check(const ZPoly& e_cubic, const WeierstrassModel& square_curve,
                                                        const std::vector<Integer>& d_list,
                                                        const std::vector<uint64_t>& primes) {
    require(e_cubic.degree() == 3, "rank doubling: cubic expected");
    require(square_curve.h_is_zero(), "rank doubling: h = 0 model expected");
    std::vector<RankDoublingRow> rows;
    for (const Integer& d : d_list) {
        require(d != 0, "rank doubling: twist by zero");
        WeierstrassModel twisted = is_square(d) ? square_curve : quadratic_twist(square_curve, d);
        ZPoly e_twisted = is_square(d) ? e_cubic : ZPoly(d * e_cubic);
        SimplifiedModel s = SimplifiedModel::of(twisted);
        for (uint64_t p : primes) {
            RankDoublingRow row;
            row.d = d;
            row.p = p;
            if (p <= 2 || !is_prime_u64(p) || d % p == 0 || !good_reduction(s, p) ||
                !elliptic_good_reduction(e_twisted, p)) {
                row.skipped = true;
                row.note = "bad reduction";
                rows.push_back(row);
                continue;
            }
            Integer jc = group_order(s, p);
            Integer ec = count_points_elliptic(e_twisted, p);
            row.equal = jc == ec * ec;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace g2r
