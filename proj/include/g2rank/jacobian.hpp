#pragma once

#include <optional>
#include <string>
#include <utility>

#include "g2rank/errors.hpp"
#include "g2rank/poly.hpp"

namespace g2r {

// Divisor class on a genus-2 Jacobian in balanced Mumford form.
//
// On y^2 = g(x) with deg g = 6 and rational points oo+ and oo- at infinity
// (oo+ is the branch where y/x^3 tends to +sqrt(lc g)), the triple (u, v, n)
// stands for the degree-zero class
//
//     [ E(u,v) + n*(oo+) + (2 - deg u - n)*(oo-) - (oo+ + oo-) ]
//
// where E(u,v) is the affine divisor cut out by u(x) = 0, y = v(x).  Reduced
// representatives have deg u <= 2 and 0 <= n <= 2 - deg u, and are unique.
// On deg g = 5 models the two infinite points coincide, n carries no
// information and is normalized to 0; the class is [E(u,v) - (deg u)*oo].
//
// An equivalent formulation runs continued-fraction reduction in the real
// quadratic function field of the even model; the explicit weight n is used
// here instead so that [oo+ - oo-] is a plain representable value over any
// field with rational points at infinity, Q included.
template <class F>
struct Divisor {
    Poly<F> u;  // monic, deg <= 2 when reduced
    Poly<F> v;  // reduced mod u
    int n = 0;  // weight of oo+ in the balancing divisor
};

template <class F>
bool operator==(const Divisor<F>& a, const Divisor<F>& b) {
    return a.n == b.n && a.u == b.u && a.v == b.v;
}
template <class F>
bool operator!=(const Divisor<F>& a, const Divisor<F>& b) { return !(a == b); }

template <class F>
class Jacobian {
public:
    // s = sqrt(lc g) for deg-6 models whose points at infinity are rational
    // over F; arithmetic on even models is unavailable without it.
    Jacobian(Poly<F> g, std::optional<F> s) : g_(std::move(g)), s_(std::move(s)) {
        require(g_.degree() == 5 || g_.degree() == 6, "jacobian: deg g must be 5 or 6");
        require(!is_zero(discriminant_field(g_)), "jacobian: g must be squarefree");
        if (s_) {
            check_internal(even() && *s_ * *s_ == g_.lc() && !is_zero(*s_),
                           "jacobian: s^2 != lc(g)");
        }
    }

    const Poly<F>& g() const { return g_; }
    bool even() const { return g_.degree() == 6; }
    bool has_rational_infinity() const { return !even() || s_.has_value(); }
    const F& c_root() const {
        require(s_.has_value(), "infinity not rational");
        return *s_;
    }

    F zero_elt() const { return zero_like(g_.lc()); }
    F one_elt() const { return one_like(g_.lc()); }

    Divisor<F> identity() const { return {Poly<F>(poly_from<F>({one_elt()})), Poly<F>(), even() ? 1 : 0}; }

    bool is_identity(const Divisor<F>& d) const {
        return d.u.degree() == 0 && (d.n == (even() ? 1 : 0));
    }

    // alpha = [oo+ - oo-]; defined exactly when both infinite points are rational
    Divisor<F> infinity_class_point() const {
        require(even(), "infinity class: model has a single point at infinity");
        require(s_.has_value(), "infinity not rational");
        return {poly_from<F>({one_elt()}), Poly<F>(), 2};
    }

    bool on_curve(const F& x, const F& y) const { return y * y == eval(g_, x); }

    // [P - oo+]  (on odd models, [P - oo])
    Divisor<F> embed_point(const F& x, const F& y) const {
        require(on_curve(x, y), "embed: point not on curve");
        if (even()) require(s_.has_value(), "infinity not rational");
        return {poly_from<F>({-x, one_elt()}), poly_from<F>({y}), 0};
    }

    Divisor<F> negate(const Divisor<F>& d) const {
        Divisor<F> r{d.u, (-d.v) % d.u, 0};
        if (even()) r.n = 2 - d.u.degree() - d.n;
        return r;
    }

    Divisor<F> add(const Divisor<F>& a, const Divisor<F>& b) const {
        check_divisor(a);
        check_divisor(b);
        Divisor<F> s = compose(a, b);
        normalize(s);
        return s;
    }

    Divisor<F> mul(Integer k, const Divisor<F>& d) const {
        if (k < 0) return mul(-k, negate(d));
        Divisor<F> acc = identity();
        Divisor<F> base = d;
        while (k > 0) {
            if ((k & 1) != 0) acc = add(acc, base);
            k >>= 1;
            if (k > 0) base = add(base, base);
        }
        return acc;
    }

    // membership + representation sanity; throws on violation
    void check_divisor(const Divisor<F>& d) const {
        check_internal(!d.u.zero() && d.u.degree() <= 2, "divisor: u must be monic of degree <= 2");
        check_internal(d.u.lc() == one_elt(), "divisor: u not monic");
        check_internal(d.v.degree() < d.u.degree() || (d.v.zero() && d.u.degree() == 0),
                       "divisor: v not reduced mod u");
        if (d.u.degree() > 0)
            check_internal(((d.v * d.v - g_) % d.u).zero(), "divisor: u does not divide v^2 - g");
        if (even())
            check_internal(0 <= d.n && d.n <= 2 - d.u.degree(), "divisor: infinity weight out of range");
        else
            check_internal(d.n == 0, "divisor: nonzero weight on odd-degree model");
        if (even() && !s_.has_value())
            require(d.u.degree() == 2 ? d.n == 0 : (d.u.degree() == 0 && d.n == 1),
                    "infinity not rational");
    }

private:
    // Cantor composition; output is semi-reduced with deg u <= 4 and the
    // infinity weight tracked without range constraints.
    Divisor<F> compose(const Divisor<F>& a, const Divisor<F>& b) const {
        Poly<F> d1, e1, e2;
        xgcd(a.u, b.u, d1, e1, e2);
        Poly<F> e, c1, c2;
        xgcd(d1, a.v + b.v, e, c1, c2);
        Poly<F> s1 = c1 * e1, s2 = c1 * e2, s3 = c2;
        Poly<F> u3 = (a.u / e) * (b.u / e);
        Poly<F> num = s1 * a.u * b.v + s2 * b.u * a.v + s3 * (a.v * b.v + g_);
        Poly<F> v3 = (num / e) % u3;
        int n3 = even() ? a.n + b.n + e.degree() - 1 : 0;
        return {u3, v3, n3};
    }

    // One reduction step through the function y - V(x), V = v mod u (+ a
    // steering multiple of u on even models).  Divisor bookkeeping:
    //   div(y - V) = E(u,V) + E(u',-v') - (3 - e+) oo+ - (3 - e-) oo-
    // where e+/e- measure leading-term cancellation against the two branches
    // of y at infinity.  The new weight follows from that identity.
    void reduce_step(Divisor<F>& d, int sigma) const {
        const int du = d.u.degree();
        Poly<F> V = d.v % d.u;
        if (even() && sigma != 0) {
            // force deg V = 3 with lc = sigma * s; the free lower terms of q
            // soak up the top coefficients of V^2 - g one exponent at a time
            // (weight shifts at deg u <= 2 use them all, deg u = 3 has none)
            const F ssig = sigma > 0 ? *s_ : -*s_;
            const F two_s = (one_elt() + one_elt()) * ssig;
            std::vector<F> qc((size_t)(4 - du), zero_elt());
            qc.back() = ssig;
            for (int epos = 5; epos >= 3 + du; --epos) {
                Poly<F> q(qc);
                Poly<F> W = V + q * d.u;
                F coef = (W * W - g_).coeff((size_t)epos, zero_elt());
                qc[(size_t)(epos - 3 - du)] = qc[(size_t)(epos - 3 - du)] - coef / two_s;
            }
            V = V + Poly<F>(qc) * d.u;
        }
        Poly<F> N = V * V - g_;
        check_internal(!N.zero(), "reduce: g is a square");
        Poly<F> u_new = monic(N / d.u);
        Poly<F> v_new = (-V) % u_new;
        if (even()) {
            int e_plus = 0, e_minus = 0;
            // without a rational sqrt(lc g) no polynomial leading coefficient
            // can cancel a branch of y at infinity, so e+ = e- = 0 there
            if (V.degree() == 3 && s_) {
                if (V.lc() == *s_) e_plus = 6 - N.degree();
                else if (V.lc() == -*s_) e_minus = 6 - N.degree();
            }
            check_internal(e_plus > 0 || e_minus > 0 || N.degree() == 6,
                           "reduce: unexpected degree drop");
            d.n = d.n + 3 - e_plus - u_new.degree();
        } else {
            d.n = 0;
        }
        d.u = u_new;
        d.v = v_new;
    }

    void normalize(Divisor<F>& d) const {
        for (int guard = 0; guard < 64; ++guard) {
            int du = d.u.degree();
            bool weight_ok = !even() || (0 <= d.n && d.n <= 2 - du);
            if (du <= 2 && weight_ok) {
                d.v = d.v % d.u;
                return;
            }
            if (du > 2) {
                if (!even() || du == 4) {
                    // a plain pass already reduces the degree; on even models
                    // the weight is steered afterwards if needed
                    reduce_step(d, 0);
                } else {
                    require(s_.has_value(), "infinity not rational");
                    // deg u = 3 on an even model: both signs make progress,
                    // pick the one landing nearest the balanced range
                    Divisor<F> plus = d, minus = d;
                    reduce_step(plus, +1);
                    reduce_step(minus, -1);
                    auto badness = [this](const Divisor<F>& x) {
                        int hi = 2 - x.u.degree();
                        if (x.n < 0) return -x.n;
                        if (x.n > hi) return x.n - hi;
                        return 0;
                    };
                    d = badness(plus) <= badness(minus) ? plus : minus;
                }
            } else {
                require(s_.has_value(), "infinity not rational");
                reduce_step(d, d.n > 2 - du ? +1 : -1);
            }
        }
        throw internal_error("normalize: reduction did not terminate");
    }

    Poly<F> g_;
    std::optional<F> s_;
};

}  // namespace g2r
