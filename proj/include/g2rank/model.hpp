#pragma once

#include <array>
#include <optional>
#include <string>

#include "g2rank/errors.hpp"
#include "g2rank/integers.hpp"
#include "g2rank/poly.hpp"

namespace g2r {

// Integral model  y^2 + h(x) y = f(x)  with deg f <= 6 and h in {0,1}^4.
// The completed square  g = 4f + h^2  has degree 5 or 6 on valid models and
// disc-form(g) != 0; those two conditions are exactly smoothness of the
// genus-2 curve including the fiber at infinity.
struct WeierstrassModel {
    ZPoly f;                     // coefficients a0..a6
    std::array<int, 4> h{0, 0, 0, 0};
    std::string provenance;      // free-form note (e.g. twist history); not serialized

    WeierstrassModel() = default;
    WeierstrassModel(ZPoly f_, std::array<int, 4> h_) : f(std::move(f_)), h(h_) {
        require(f.degree() <= 6, "model: deg f must be at most 6");
        for (int b : h) require(b == 0 || b == 1, "model: h coefficients must be 0 or 1");
    }

    static WeierstrassModel from_coeffs(const std::vector<Integer>& a, std::array<int, 4> hbits = {0, 0, 0, 0}) {
        return WeierstrassModel(ZPoly(a), hbits);
    }

    Integer a(size_t i) const { return i < f.c.size() ? f.c[i] : Integer(0); }

    ZPoly h_poly() const {
        std::vector<Integer> c;
        for (int b : h) c.push_back(b);
        return ZPoly(c);
    }

    ZPoly g() const {  // 4f + h^2
        ZPoly hp = h_poly();
        return Integer(4) * f + hp * hp;
    }

    Integer c() const { return 4 * a(6) + Integer(h[3]) * h[3]; }

    bool h_is_zero() const { return h[0] == 0 && h[1] == 0 && h[2] == 0 && h[3] == 0; }
};

inline bool operator==(const WeierstrassModel& a, const WeierstrassModel& b) {
    return a.f == b.f && a.h == b.h;
}

// Completed-square form (2y + h)^2 = g(x), carrying the x^6 coefficient c.
struct SimplifiedModel {
    ZPoly g;
    Integer c;  // coefficient of x^6 in g (0 when deg g < 6)
    mutable std::optional<Integer> disc_cache;

    static SimplifiedModel of(const WeierstrassModel& m) {
        SimplifiedModel s;
        s.g = m.g();
        s.c = s.g.coeff(6, Integer(0));
        check_internal(s.c == m.c(), "simplified model: c mismatch");
        return s;
    }

    // discriminant as a degree-6 form, cached (good-prime scans hit it often)
    const Integer& disc_form() const {
        if (!disc_cache) disc_cache = discriminant_as_form(g, 6);
        return *disc_cache;
    }
};

// 2^12 * Delta(f,h); as a form of degree 6, so a degree-5 g with a simple
// root at infinity still counts as smooth.
inline Integer model_disc(const WeierstrassModel& m) {
    ZPoly g = m.g();
    if (g.degree() < 1) return Integer(0);
    return discriminant_as_form(g, 6);
}

inline Rational model_delta(const WeierstrassModel& m) {
    return Rational(model_disc(m)) / Rational(pow(Integer(2), 12));
}

struct Validity {
    bool valid = false;
    std::string reason;  // which check failed; empty when valid
};

inline Validity validate(const WeierstrassModel& m) {
    ZPoly g = m.g();
    if (g.degree() < 5) return {false, "degree of 4f+h^2 below 5"};
    if (discriminant_as_form(g, 6) == 0) return {false, "discriminant zero"};
    return {true, ""};
}

// Structure of the fiber at infinity of the completed-square model.
struct InfinityClass {
    enum Kind { TwoRationalPoints, TwoConjugatePoints, OnePoint } kind;
    std::optional<Integer> c_root;  // sqrt(c) when TwoRationalPoints
};

inline InfinityClass infinity_class(const WeierstrassModel& m) {
    require(validate(m).valid, "infinity_class: model is not valid");
    ZPoly g = m.g();
    if (g.degree() == 5) return {InfinityClass::OnePoint, std::nullopt};
    Integer c = m.c();
    if (auto r = is_square(c)) return {InfinityClass::TwoRationalPoints, *r};
    return {InfinityClass::TwoConjugatePoints, std::nullopt};
}

// Height data.  h2 is the pair (k, |c_k|) attaining max |c_k|^(20/k); the
// mixed-power comparison is done in exact integers as |c_j|^(20k) vs
// |c_k|^(20j).  The all-zero tail has height 1 by convention, stored (0, 1).
struct HeightValue {
    Integer h1;
    std::pair<unsigned, Integer> h2{0, 1};
};

enum class HeightKind { H1, H2 };

inline bool h2_pair_less(unsigned j, const Integer& cj, unsigned k, const Integer& ck) {
    // |cj|^(20/j) < |ck|^(20/k)  <=>  |cj|^(20k) < |ck|^(20j)
    if (j == 0) return !(ck == 0);  // sentinel "height 1"
    if (k == 0) return false;
    return pow(abs(cj), 20 * k) < pow(abs(ck), 20 * j);
}

inline HeightValue height(const WeierstrassModel& m, HeightKind kind) {
    HeightValue out;
    out.h1 = 0;
    for (const auto& x : m.f.c) out.h1 = std::max(out.h1, abs(x));
    if (kind == HeightKind::H1) return out;
    // normal form for H2: monic quintic with vanishing x^4 term, h = 0
    require(m.h_is_zero() && m.f.degree() == 5 && m.f.lc() == 1 && m.a(4) == 0,
            "height H2: model not in monic odd-degree normal form");
    for (unsigned k = 2; k <= 5; ++k) {
        Integer ck = m.a(5 - k);
        if (ck == 0) continue;
        if (h2_pair_less(out.h2.first, out.h2.second, k, ck)) out.h2 = {k, abs(ck)};
    }
    return out;
}

// H2 box membership |c_k|^(20/k) <= X for all k, exact
inline bool h2_within(const WeierstrassModel& m, const Integer& X) {
    for (unsigned k = 2; k <= 5; ++k) {
        Integer ck = abs(m.a(5 - k));
        if (pow(ck, 20) > pow(X, k)) return false;
    }
    return true;
}

// Quadratic twist by squarefree d, on completed-square (h = 0) models:
// d y^2 = f(x) rescaled integrally to  y^2 = d f(x)  via y -> y/d.
// Over F_p with (d|p) = 1 the twist is isomorphic to the input.
inline WeierstrassModel quadratic_twist(const WeierstrassModel& m, const Integer& d) {
    require(d != 0, "twist: d must be nonzero");
    require(is_squarefree(d), "twist: d must be squarefree");
    require(m.h_is_zero(), "twist: defined on h = 0 models");
    if (d == 1) return m;
    WeierstrassModel out(d * m.f, m.h);
    out.provenance = "twist(" + d.str() + ") of y^2 = f";
    return out;
}

}  // namespace g2r
