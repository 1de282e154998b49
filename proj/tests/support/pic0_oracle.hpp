#pragma once

// Brute-force Pic^0 oracle for genus-2 curves over tiny prime fields.
//
// Classes of J(F_p) are represented by their unique effective degree-2
// divisor E (conjugate points allowed), with all x-fibers {P, tau P}
// collapsed to the zero class.  Addition finds a function
// phi = c0 + c1 x + c2 x^2 + c3 x^3 + c4 y with div(phi) + 3*Dinf >= E1 + E2
// by linear algebra on local power-series vanishing conditions, computes the
// full divisor of phi analytically, and returns tau applied to the residual.
// Nothing here shares code with the balanced Mumford arithmetic it checks:
// no composition, no reduction, no resultants.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <vector>

#include "g2rank/counting.hpp"
#include "g2rank/fp.hpp"
#include "g2rank/jacobian.hpp"
#include "g2rank/model.hpp"
#include "g2rank/poly.hpp"

namespace g2r::testing {

constexpr int kSeriesPrec = 12;

struct Series {
    std::vector<Fp2> c;  // exactly kSeriesPrec coefficients

    static Series zero(const Fp2& ctx) { return Series{std::vector<Fp2>((size_t)kSeriesPrec, zero_like(ctx))}; }
    static Series constant(const Fp2& value) {
        Series s = zero(value);
        s.c[0] = value;
        return s;
    }
    int ord() const {
        for (size_t i = 0; i < c.size(); ++i)
            if (!is_zero(c[i])) return (int)i;
        return kSeriesPrec;  // "at least precision"
    }
};

inline Series operator+(const Series& a, const Series& b) {
    Series r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
    return r;
}
inline Series operator-(const Series& a, const Series& b) {
    Series r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
    return r;
}
inline Series operator*(const Series& a, const Series& b) {
    Series r = Series::zero(a.c[0]);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; i + j < (size_t)kSeriesPrec; ++j)
            r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    return r;
}
inline Series operator*(const Fp2& s, const Series& a) {
    Series r = a;
    for (auto& x : r.c) x = s * x;
    return r;
}
inline bool operator==(const Series& a, const Series& b) {
    for (size_t i = 0; i < a.c.size(); ++i)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}

// divide by a series with invertible constant term
inline Series series_div(const Series& a, const Series& b) {
    Series q = Series::zero(a.c[0]);
    Fp2 inv = inverse(b.c[0]);
    std::vector<Fp2> rem = a.c;
    for (size_t i = 0; i < (size_t)kSeriesPrec; ++i) {
        Fp2 qi = rem[i] * inv;
        q.c[i] = qi;
        for (size_t j = 0; i + j < (size_t)kSeriesPrec; ++j)
            rem[i + j] = rem[i + j] - qi * b.c[j];
    }
    return q;
}

inline Series eval_series(const Poly<Fp2>& f, const Series& x) {
    Series acc = Series::zero(x.c[0]);
    for (size_t i = f.c.size(); i-- > 0;)
        acc = acc * x + Series::constant(f.c[i]);
    return acc;
}

// sqrt by scan; fields here have at most 49 elements
inline std::optional<Fp2> sqrt_fp2(const Fp2& v) {
    uint64_t p = v.p();
    for (uint64_t a = 0; a < p; ++a)
        for (uint64_t b = 0; b < p; ++b) {
            Fp2 z(Fp(a, p), Fp(b, p), v.delta);
            if (z * z == v) return z;
        }
    return std::nullopt;
}

struct OPoint {
    bool infinite = false;
    int inf_sign = 0;  // +1 -> oo+, -1 -> oo-; 0 for the odd-model point
    Fp2 x, y;

    std::array<uint64_t, 6> key() const {
        return {infinite ? 1ull : 0ull, (uint64_t)(inf_sign + 1), x.a.v, x.b.v, y.a.v, y.b.v};
    }
};
inline bool operator==(const OPoint& a, const OPoint& b) { return a.key() == b.key(); }
inline bool operator<(const OPoint& a, const OPoint& b) { return a.key() < b.key(); }

// effective degree-2 divisor as an ordered pair; Zero = collapsed fiber class
struct OClass {
    bool zero = true;
    OPoint p1, p2;
};
inline bool operator==(const OClass& a, const OClass& b) {
    if (a.zero != b.zero) return false;
    if (a.zero) return true;
    return a.p1 == b.p1 && a.p2 == b.p2;
}
inline bool operator<(const OClass& a, const OClass& b) {
    if (a.zero != b.zero) return a.zero;
    if (a.zero) return false;
    if (!(a.p1 == b.p1)) return a.p1 < b.p1;
    return a.p2 < b.p2;
}

class Pic0Oracle {
public:
    Pic0Oracle(const SimplifiedModel& m, uint64_t p) : p_(p) {
        require(p >= 3 && p <= 7, "oracle: p guard is 3..7");
        require(good_reduction(m, p), "oracle: bad prime");
        delta_ = smallest_nonresidue(p);
        g_ = lift_to_fp2(reduce_mod_p(m.g, p), delta_);
        even_ = g_.degree() == 6;
        if (even_) {
            s_ = sqrt_in_fp2(Fp::from_integer(m.c, p), delta_);
            check_internal(s_ * s_ == g_.lc(), "oracle: bad sqrt of leading coefficient");
        }
        enumerate_points();
        enumerate_classes();
    }

    bool even() const { return even_; }
    bool split_infinity() const { return even_ && s_.b.v == 0; }
    const std::vector<OClass>& elements() const { return classes_; }
    size_t order() const { return classes_.size(); }

    OClass zero() const { return OClass{}; }

    OPoint tau(const OPoint& q) const {
        OPoint r = q;
        if (q.infinite) r.inf_sign = -q.inf_sign;
        else r.y = -q.y;
        return r;
    }

    OPoint frob(const OPoint& q) const {
        OPoint r = q;
        if (q.infinite) {
            if (even_ && s_.b.v != 0) r.inf_sign = -q.inf_sign;  // conjugate infinities
            return r;
        }
        r.x = frobenius(q.x);
        r.y = frobenius(q.y);
        return r;
    }

    OClass neg(const OClass& a) const {
        if (a.zero) return a;
        return make_class(tau(a.p1), tau(a.p2));
    }

    OClass add(const OClass& a, const OClass& b) const {
        if (a.zero) return b;
        if (b.zero) return a;
        // multiplicities of E1 + E2, keyed by point
        std::map<OPoint, int> mult;
        for (const OPoint& q : {a.p1, a.p2, b.p1, b.p2}) mult[q]++;

        std::vector<Fp> phi = solve_phi(mult);

        // full divisor div(phi) + 3*Dinf, computed point by point
        std::map<OPoint, int> dv = divisor_of(phi);
        int total = 0;
        for (auto& [q, m] : dv) total += m;
        check_internal(total == 6, "oracle: function divisor has wrong degree");
        for (auto& [q, m] : mult) {
            check_internal(dv[q] >= m, "oracle: solved function misses a required zero");
            dv[q] -= m;
        }
        std::vector<OPoint> residual;
        for (auto& [q, m] : dv)
            for (int i = 0; i < m; ++i) residual.push_back(q);
        check_internal(residual.size() == 2, "oracle: residual is not a degree-2 divisor");
        return make_class(tau(residual[0]), tau(residual[1]));
    }

    // bijection with balanced Mumford triples over F_{p^2}
    Divisor<Fp2> to_mumford(const OClass& cls) const {
        Fp2 one = one_like(g_.lc());
        if (cls.zero) return {poly_from<Fp2>({one}), Poly<Fp2>(), even_ ? 1 : 0};
        std::vector<OPoint> aff;
        int n_plus = 0, n_inf = 0;
        for (const OPoint& q : {cls.p1, cls.p2}) {
            if (q.infinite) {
                ++n_inf;
                if (q.inf_sign > 0) ++n_plus;
            } else {
                aff.push_back(q);
            }
        }
        Poly<Fp2> u, v;
        if (aff.empty()) {
            u = poly_from<Fp2>({one});
        } else if (aff.size() == 1) {
            u = poly_from<Fp2>({-aff[0].x, one});
            v = poly_from<Fp2>({aff[0].y});
        } else if (!(aff[0].x == aff[1].x)) {
            u = poly_from<Fp2>({-aff[0].x, one}) * poly_from<Fp2>({-aff[1].x, one});
            Fp2 slope = (aff[1].y - aff[0].y) / (aff[1].x - aff[0].x);
            v = poly_from<Fp2>({aff[0].y - slope * aff[0].x, slope});
        } else {
            // doubled non-Weierstrass point: tangent line
            check_internal(aff[0].y == aff[1].y && !is_zero(aff[0].y), "oracle: fiber escaped canonicalization");
            Poly<Fp2> root = poly_from<Fp2>({-aff[0].x, one});
            u = root * root;
            Fp2 two = one + one;
            Fp2 slope = eval(derivative(g_), aff[0].x) / (two * aff[0].y);
            v = poly_from<Fp2>({aff[0].y - slope * aff[0].x, slope});
        }
        int n = even_ ? n_plus : 0;
        return {u, v % u, n};
    }

    OClass from_mumford(const Divisor<Fp2>& d) const {
        std::vector<OPoint> pts;
        int deg = d.u.degree();
        if (deg == 1) {
            Fp2 x = -d.u.c[0];
            pts.push_back(affine_point(x, eval(d.v, x)));
        } else if (deg == 2) {
            // roots via the quadratic formula over F_{p^2}
            Fp2 one = one_like(g_.lc());
            Fp2 two = one + one;
            Fp2 b = d.u.c[1], c = d.u.c[0];
            Fp2 disc = b * b - (two + two) * c;
            auto r = sqrt_fp2(disc);
            check_internal(r.has_value(), "oracle: u does not split over F_{p^2}");
            Fp2 x1 = (-b + *r) / two, x2 = (-b - *r) / two;
            pts.push_back(affine_point(x1, eval(d.v, x1)));
            pts.push_back(affine_point(x2, eval(d.v, x2)));
        }
        int n_plus = even_ ? d.n : 0;
        int n_minus = even_ ? (2 - deg - d.n) : (2 - deg);
        for (int i = 0; i < n_plus; ++i) pts.push_back(infinite_point(+1));
        for (int i = 0; i < n_minus; ++i) pts.push_back(infinite_point(even_ ? -1 : 0));
        check_internal(pts.size() == 2, "oracle: bad Mumford degree");
        return make_class(pts[0], pts[1]);
    }

    OPoint infinite_point(int sign) const {
        OPoint q;
        q.infinite = true;
        q.inf_sign = even_ ? sign : 0;
        q.x = zero_like(g_.lc());
        q.y = zero_like(g_.lc());
        return q;
    }

    OPoint affine_point(const Fp2& x, const Fp2& y) const {
        check_internal(y * y == eval(g_, x), "oracle: affine point not on curve");
        OPoint q;
        q.x = x;
        q.y = y;
        return q;
    }

private:
    OClass make_class(const OPoint& a, const OPoint& b) const {
        // fibers of the x-line are the zero class
        if (a == tau(b)) return OClass{};
        OClass r;
        r.zero = false;
        r.p1 = std::min(a, b);
        r.p2 = std::max(a, b);
        return r;
    }

    void enumerate_points() {
        uint64_t p = p_;
        for (uint64_t xa = 0; xa < p; ++xa)
            for (uint64_t xb = 0; xb < p; ++xb)
                for (uint64_t ya = 0; ya < p; ++ya)
                    for (uint64_t yb = 0; yb < p; ++yb) {
                        Fp2 x(Fp(xa, p), Fp(xb, p), delta_);
                        Fp2 y(Fp(ya, p), Fp(yb, p), delta_);
                        if (y * y == eval(g_, x)) {
                            OPoint q;
                            q.x = x;
                            q.y = y;
                            all_points_.push_back(q);
                        }
                    }
        if (even_) {
            all_points_.push_back(infinite_point(+1));
            all_points_.push_back(infinite_point(-1));
        } else {
            all_points_.push_back(infinite_point(0));
        }
    }

    void enumerate_classes() {
        std::vector<OPoint> rational, pair_reps;
        for (const OPoint& q : all_points_) {
            OPoint f = frob(q);
            if (f == q) rational.push_back(q);
            else if (q < f) pair_reps.push_back(q);
        }
        std::vector<OClass> out;
        for (size_t i = 0; i < rational.size(); ++i)
            for (size_t j = i; j < rational.size(); ++j) {
                OClass c = make_class(rational[i], rational[j]);
                if (!c.zero) out.push_back(c);
            }
        for (const OPoint& q : pair_reps) {
            OClass c = make_class(q, frob(q));
            if (!c.zero) out.push_back(c);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        classes_.push_back(OClass{});  // zero
        classes_.insert(classes_.end(), out.begin(), out.end());
    }

    // local expansions of the basis (1, x, x^2, x^3, y); at infinite points
    // of even models the basis is premultiplied by t^3 so that vanishing
    // conditions read directly off leading coefficients
    std::array<Series, 5> expand_basis(const OPoint& q) const {
        Fp2 ctx = g_.lc();
        Fp2 one = one_like(ctx);
        if (!q.infinite) {
            Series x_t = Series::zero(ctx), y_t = Series::zero(ctx);
            if (!is_zero(q.y)) {
                // local parameter t = x - x0; y = sqrt(g(x0 + t)), Newton
                x_t.c[0] = q.x;
                x_t.c[1] = one;
                Series G = eval_series(g_, x_t);
                y_t.c[0] = q.y;
                Fp2 half = inverse(one + one);
                for (int it = 0; it < 6; ++it)
                    y_t = half * (y_t + series_div(G, y_t));
                check_internal(y_t * y_t == G, "oracle: sqrt series failed");
            } else {
                // Weierstrass point, local parameter t = y; solve g(x(t)) = t^2
                Series t2 = Series::zero(ctx);
                t2.c[2] = one;
                x_t.c[0] = q.x;
                Poly<Fp2> gp = derivative(g_);
                for (int it = 0; it < 6; ++it) {
                    Series num = eval_series(g_, x_t) - t2;
                    Series den = eval_series(gp, x_t);
                    x_t = x_t - series_div(num, den);
                }
                y_t.c[1] = one;
                check_internal(eval_series(g_, x_t) - y_t * y_t == Series::zero(ctx),
                               "oracle: Weierstrass series failed");
            }
            Series x2 = x_t * x_t;
            return {Series::constant(one), x_t, x2, x2 * x_t, y_t};
        }
        check_internal(even_, "oracle: odd-model infinity needs no series");
        // t = 1/x; w = y t^3 satisfies w^2 = rev(g); basis * t^3
        Poly<Fp2> rev;
        rev.c.assign(7, zero_like(ctx));
        for (int i = 0; i <= 6; ++i) rev.c[(size_t)(6 - i)] = g_.coeff((size_t)i, ctx);
        rev.normalize();
        Series t = Series::zero(ctx);
        t.c[1] = one;
        Series G = eval_series(rev, t);
        Series w = Series::zero(ctx);
        w.c[0] = q.inf_sign > 0 ? s_ : -s_;
        Fp2 half = inverse(one + one);
        for (int it = 0; it < 6; ++it) w = half * (w + series_div(G, w));
        check_internal(w * w == G, "oracle: infinity series failed");
        Series t2 = t * t, t3 = t2 * t;
        return {t3, t2, t, Series::constant(one), w};
    }

    // solve for phi with div(phi) + 3 Dinf >= the given multiplicity divisor
    std::vector<Fp> solve_phi(const std::map<OPoint, int>& mult) const {
        std::vector<std::array<Fp, 5>> rows;
        auto add_row = [&](const std::array<Fp2, 5>& r) {
            std::array<Fp, 5> ra, rb;
            bool nza = false, nzb = false;
            for (int j = 0; j < 5; ++j) {
                ra[(size_t)j] = r[(size_t)j].a;
                rb[(size_t)j] = r[(size_t)j].b;
                nza |= r[(size_t)j].a.v != 0;
                nzb |= r[(size_t)j].b.v != 0;
            }
            if (nza) rows.push_back(ra);
            if (nzb) rows.push_back(rb);
        };
        std::vector<OPoint> seen;
        for (auto& [q, m] : mult) {
            // impose conditions once per Frobenius orbit
            if (std::find(seen.begin(), seen.end(), q) != seen.end()) continue;
            seen.push_back(q);
            seen.push_back(frob(q));
            if (!even_ && q.infinite) {
                // pole orders of (1, x, x^2, x^3, y) at oo are (0,2,4,6,5):
                // distinct, so ord >= m - 6 just forbids the big ones
                for (int j = 0; j < 5; ++j) {
                    int pole = j <= 3 ? 2 * j : 5;
                    if (pole > 6 - m) {
                        std::array<Fp, 5> row{Fp(0, p_), Fp(0, p_), Fp(0, p_), Fp(0, p_), Fp(0, p_)};
                        row[(size_t)j] = Fp(1, p_);
                        rows.push_back(row);
                    }
                }
                continue;
            }
            auto basis = expand_basis(q);
            for (int k = 0; k < m; ++k) {
                std::array<Fp2, 5> r;
                for (int j = 0; j < 5; ++j) r[(size_t)j] = basis[(size_t)j].c[(size_t)k];
                add_row(r);
            }
        }
        // Gaussian elimination over F_p, deterministic kernel vector
        size_t nrows = rows.size();
        std::vector<int> pivot_col;
        size_t rank = 0;
        for (int col = 0; col < 5 && rank < nrows; ++col) {
            size_t piv = rank;
            while (piv < nrows && rows[piv][(size_t)col].v == 0) ++piv;
            if (piv == nrows) continue;
            std::swap(rows[rank], rows[piv]);
            Fp inv = inverse(rows[rank][(size_t)col]);
            for (int j = 0; j < 5; ++j) rows[rank][(size_t)j] = rows[rank][(size_t)j] * inv;
            for (size_t r = 0; r < nrows; ++r) {
                if (r == rank) continue;
                Fp f = rows[r][(size_t)col];
                if (f.v == 0) continue;
                for (int j = 0; j < 5; ++j)
                    rows[r][(size_t)j] = rows[r][(size_t)j] - f * rows[rank][(size_t)j];
            }
            pivot_col.push_back(col);
            ++rank;
        }
        check_internal(rank < 5, "oracle: no nonzero function satisfies the conditions");
        // first free column -> kernel vector
        int free_col = 0;
        while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
        std::vector<Fp> phi(5, Fp(0, p_));
        phi[(size_t)free_col] = Fp(1, p_);
        for (size_t r = 0; r < rank; ++r)
            phi[(size_t)pivot_col[r]] = -rows[r][(size_t)free_col];
        return phi;
    }

    std::map<OPoint, int> divisor_of(const std::vector<Fp>& phi) const {
        Fp2 ctx = g_.lc();
        std::array<Fp2, 5> cf;
        for (int j = 0; j < 5; ++j) cf[(size_t)j] = Fp2::lift(phi[(size_t)j], delta_);
        std::map<OPoint, int> out;
        for (const OPoint& q : all_points_) {
            if (!q.infinite) {
                Fp2 val = cf[0] + cf[1] * q.x + cf[2] * q.x * q.x + cf[3] * q.x * q.x * q.x + cf[4] * q.y;
                if (!is_zero(val)) continue;
                auto basis = expand_basis(q);
                Series s = Series::zero(ctx);
                for (int j = 0; j < 5; ++j) s = s + cf[(size_t)j] * basis[(size_t)j];
                int ord = s.ord();
                check_internal(ord < kSeriesPrec, "oracle: zero beyond series precision");
                if (ord > 0) out[q] = ord;
            } else if (even_) {
                auto basis = expand_basis(q);
                Series s = Series::zero(ctx);
                for (int j = 0; j < 5; ++j) s = s + cf[(size_t)j] * basis[(size_t)j];
                int shifted = s.ord();  // = ord_P(phi) + 3
                check_internal(shifted < kSeriesPrec, "oracle: zero beyond series precision");
                if (shifted > 0) out[q] = shifted;
            } else {
                int pole = 0;
                for (int j = 0; j < 5; ++j) {
                    if (is_zero(cf[(size_t)j])) continue;
                    pole = std::max(pole, j <= 3 ? 2 * j : 5);
                }
                int m = 6 - pole;
                if (m > 0) out[q] = m;
            }
        }
        return out;
    }

    uint64_t p_;
    uint64_t delta_ = 0;
    Poly<Fp2> g_;
    bool even_ = false;
    Fp2 s_;
    std::vector<OPoint> all_points_;
    std::vector<OClass> classes_;
};

}  // namespace g2r::testing
