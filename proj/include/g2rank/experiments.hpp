#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "g2rank/boxes.hpp"
#include "g2rank/certify.hpp"
#include "g2rank/model.hpp"
#include "g2rank/util.hpp"

namespace g2r {

// One report row per (box, X).  Everything upstream of the slope fit is
// exact; the fit itself is the one place floating point is allowed.
struct DensityRow {
    std::string box;
    int64_t x = 0;
    double total = 0;           // box count (exact or estimated)
    double square_leading = 0;  // count of the square-leading-coefficient subset
    int64_t torsion = 0;
    int64_t nontorsion = 0;
    int64_t undecided = 0;
    double slope = 0;           // fitted log-log slope for this row's box
    double stderr_ = 0;
    int64_t sample_size = 0;    // 0 = exhaustive
    uint64_t seed = 0;
};

struct DensityReport {
    std::vector<DensityRow> rows;
    std::string note;  // conventions (H2 exponent 20/k for genus 2, sampling plan)
};

// least-squares slope of log(count) against log(X); zero counts are dropped
// with a note, at least 3 surviving points required
inline std::pair<double, double> fit_log_slope(const std::vector<std::pair<int64_t, double>>& points,
                                               std::string* note = nullptr) {
    std::vector<std::pair<double, double>> pts;
    for (auto [x, count] : points) {
        require(x >= 1, "fit: X must be positive");
        if (count <= 0) {
            if (note) *note += "dropped zero-count point at X=" + std::to_string(x) + "; ";
            continue;
        }
        pts.push_back({std::log((double)x), std::log(count)});
    }
    require(pts.size() >= 3, "fit: need at least 3 points with positive counts");
    double n = (double)pts.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    double ss = 0;
    for (auto [x, y] : pts) {
        double r = y - (slope * x + intercept);
        ss += r * r;
    }
    double var = pts.size() > 2 ? ss / (n - 2) / (sxx - sx * sx / n) : 0;
    return {slope, std::sqrt(std::max(0.0, var))};
}

// number of raw lattice cells of the box (validity not yet applied)
inline Integer box_volume(const BoxSpec& spec) {
    spec.check();
    Integer side = 2 * Integer(spec.x) + 1;
    auto h_slices = [&]() { return Integer(spec.h_mask ? 1 : 16); };
    switch (spec.kind) {
        case BoxKind::C1: return pow(side, 7);
        case BoxKind::S1: return h_slices() * pow(side, 7);
        case BoxKind::S2: {
            Integer v = h_slices();
            for (int i = 0; i <= 6; ++i)
                v *= 2 * Integer(spec.x) * pow(Integer(*spec.y), (unsigned)(6 - i)) + 1;
            return v;
        }
        case BoxKind::U11: return pow(side, 5);
        case BoxKind::C2: {
            Integer v = 1;
            for (unsigned k = 2; k <= 5; ++k)
                v *= 2 * kth_root_floor(pow(Integer(spec.x), k), 20) + 1;
            return v;
        }
        case BoxKind::S1Square: {
            Integer slices = 0;
            for (int hr = 0; hr < 16; ++hr) {
                if (spec.h_mask && hr != *spec.h_mask) continue;
                slices += (int64_t)square_leading_choices(spec.x, h_tuple(hr)[3]).size();
            }
            return slices * pow(side, 6);
        }
    }
    return 0;
}

// draw one raw lattice cell and report whether it is a member of the box
inline bool sample_membership(const BoxSpec& spec, Rng& rng) {
    const int64_t X = spec.x;
    std::vector<Integer> a(7, Integer(0));
    std::array<int, 4> h{0, 0, 0, 0};
    switch (spec.kind) {
        case BoxKind::C1:
            for (int i = 0; i <= 6; ++i) a[(size_t)i] = rng.range(-X, X);
            break;
        case BoxKind::S1:
            h = h_tuple(spec.h_mask ? *spec.h_mask : (int)rng.below(16));
            for (int i = 0; i <= 6; ++i) a[(size_t)i] = rng.range(-X, X);
            break;
        case BoxKind::S2:
            h = h_tuple(spec.h_mask ? *spec.h_mask : (int)rng.below(16));
            for (int i = 0; i <= 6; ++i) {
                int64_t b = X;
                for (int e = 0; e < 6 - i; ++e) b *= *spec.y;
                a[(size_t)i] = rng.range(-b, b);
            }
            break;
        case BoxKind::U11:
            a[6] = 1;
            a[0] = 1;
            for (int i = 1; i <= 5; ++i) a[(size_t)i] = rng.range(-X, X);
            break;
        case BoxKind::C2: {
            a[5] = 1;
            for (unsigned k = 2; k <= 5; ++k) {
                int64_t b = (int64_t)kth_root_floor(pow(Integer(X), k), 20);
                a[(size_t)(5 - k)] = rng.range(-b, b);
            }
            break;
        }
        case BoxKind::S1Square: {
            std::vector<std::pair<int, int64_t>> slices;
            for (int hr = 0; hr < 16; ++hr) {
                if (spec.h_mask && hr != *spec.h_mask) continue;
                for (int64_t a6 : square_leading_choices(X, h_tuple(hr)[3]))
                    slices.push_back({hr, a6});
            }
            require(!slices.empty(), "sample: empty s1sq box");
            auto [hr, a6] = slices[rng.below(slices.size())];
            h = h_tuple(hr);
            a[6] = a6;
            for (int i = 0; i <= 5; ++i) a[(size_t)i] = rng.range(-X, X);
            break;
        }
    }
    return in_box(WeierstrassModel{ZPoly(a), h}, spec);
}

// Exact count by enumeration when the raw lattice is small, otherwise the
// lattice volume scaled by a sampled membership fraction (exact tests on
// each draw).  The exhaustive threshold and sample size come from the plan.
inline double box_count(const BoxSpec& spec, const SamplingPlan& plan, unsigned workers = 1,
                        int64_t exhaustive_threshold = 2000000, int64_t* exact_out = nullptr) {
    Integer vol = box_volume(spec);
    if (plan.mode == SamplingPlan::Exhaustive || vol <= exhaustive_threshold) {
        BoxEnumerator e(spec);
        int64_t n = 0;
        while (e.next()) ++n;
        if (exact_out) *exact_out = n;
        return (double)n;
    }
    require(plan.sample_size > 0, "box_count: empty sampling plan");
    std::vector<uint8_t> hits(plan.sample_size, 0);
    parallel_for(plan.sample_size, workers, [&](size_t i) {
        Rng rng = Rng::child(plan.seed ^ 0x9e3779b9u, i);
        hits[i] = sample_membership(spec, rng) ? 1 : 0;
    });
    int64_t hit = 0;
    for (uint8_t b : hits) hit += b;
    double fraction = (double)hit / (double)plan.sample_size;
    return fraction * vol.convert_to<double>();
}

// counts and fitted slopes across an ascending X grid, one row per (kind, X)
inline DensityReport box_count_experiment(const std::vector<BoxKind>& kinds, const std::vector<int64_t>& x_grid,
                                          const SamplingPlan& plan, std::optional<int> h_mask = std::nullopt,
                                          unsigned workers = 1) {
    require(x_grid.size() >= 3, "experiment: X grid needs at least 3 points");
    for (size_t i = 1; i < x_grid.size(); ++i)
        require(x_grid[i] > x_grid[i - 1], "experiment: X grid must ascend");
    DensityReport rep;
    rep.note = "H2 convention: |c_k|^(20/k) (genus 2); counts are exact or sampled with exact membership tests";
    for (BoxKind kind : kinds) {
        std::vector<std::pair<int64_t, double>> pts;
        std::vector<DensityRow> rows;
        for (int64_t x : x_grid) {
            BoxSpec spec{kind, x, std::nullopt, std::nullopt};
            if (kind == BoxKind::S1 || kind == BoxKind::S2 || kind == BoxKind::S1Square) spec.h_mask = h_mask;
            DensityRow row;
            row.box = box_kind_name(kind);
            row.x = x;
            row.seed = plan.seed;
            row.sample_size = plan.mode == SamplingPlan::Uniform ? (int64_t)plan.sample_size : 0;
            row.total = box_count(spec, plan, workers);
            if (kind == BoxKind::S1 || kind == BoxKind::C1) {
                // c1 is the h = 0 slice, so its square-leading subset is too
                BoxSpec sq{BoxKind::S1Square, x, std::nullopt,
                           kind == BoxKind::C1 ? std::optional<int>(0) : spec.h_mask};
                row.square_leading = box_count(sq, plan, workers);
            } else if (kind == BoxKind::S1Square) {
                row.square_leading = row.total;
            }
            pts.push_back({x, row.total});
            rows.push_back(row);
        }
        auto [slope, err] = fit_log_slope(pts, &rep.note);
        for (auto& r : rows) {
            r.slope = slope;
            r.stderr_ = err;
            rep.rows.push_back(r);
        }
    }
    return rep;
}

// torsion fractions of the infinity class across an X grid (s1sq by default)
inline DensityReport torsion_density_experiment(const std::vector<int64_t>& x_grid, const SamplingPlan& plan,
                                                const CertifyOptions& opts = {}, unsigned workers = 1,
                                                BoxKind kind = BoxKind::S1Square) {
    DensityReport rep;
    rep.note = "torsion fractions of [oo+ - oo-]; undecided tallied separately, never guessed";
    std::vector<std::pair<int64_t, double>> pts;
    double prev = 2.0;
    bool monotone = true;
    for (int64_t x : x_grid) {
        BoxSpec spec{kind, x, std::nullopt, std::nullopt};
        TorsionTally tally = torsion_scan(spec, plan, opts, workers);
        DensityRow row;
        row.box = box_kind_name(kind);
        row.x = x;
        row.torsion = tally.torsion;
        row.nontorsion = tally.nontorsion;
        row.undecided = tally.undecided;
        row.total = (double)tally.total();
        row.seed = plan.seed;
        row.sample_size = plan.mode == SamplingPlan::Uniform ? (int64_t)plan.sample_size : 0;
        double fraction = tally.total() ? (double)tally.torsion / (double)tally.total() : 0.0;
        if (fraction > prev) monotone = false;
        prev = fraction;
        pts.push_back({x, fraction});
        rep.rows.push_back(row);
    }
    rep.note += monotone ? "; torsion fraction non-increasing across the grid"
                         : "; torsion fraction NOT monotone across the grid (soft check)";
    return rep;
}

// ---- the x^5 + a experiment ----------------------------------------------------

struct XaReport {
    int64_t a_max = 0;
    int64_t height_bound = 0;
    int64_t squarefree_count = 0;        // a <= a_max squarefree
    int64_t with_three_points = 0;       // x = u/v, max(|u|, v) <= H; infinity and both signs counted
    int64_t with_three_points_sqden = 0; // x = u/b^2, max(|u|, b) <= H (odd-model denominator convention)
    int64_t with_three_affine_x = 0;     // distinct affine x with rational y, x = u/v convention
    int64_t reference_count = 3559;      // reported value for a_max = 1e5, height 500
};

namespace detail {

inline bool is_square_u128(unsigned __int128 v) {
    static const auto qr64 = []() {
        std::array<bool, 64> t{};
        for (int i = 0; i < 64; ++i) t[(size_t)((i * i) & 63)] = true;
        return t;
    }();
    if (!qr64[(size_t)(v & 63)]) return false;
    unsigned __int128 r = (unsigned __int128)std::sqrt((double)v);
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v;
}

// x-candidates p/q in lowest terms with max(|p|, q) <= height, with the two
// powers entering q^6 * f(p/q) = q p^5 + a q^6 precomputed; the table is
// shared across all values of a
struct XaPairTable {
    std::vector<std::pair<__int128, __int128>> rows;        // (q p^5, q^6) for x = p/q
    std::vector<std::pair<__int128, __int128>> rows_sqden;  // (u^5, b^10)  for x = u/b^2

    explicit XaPairTable(int64_t height) {
        for (int64_t q = 1; q <= height; ++q) {
            __int128 q6 = (__int128)q * q * q * q * q * q;
            for (int64_t p = -height; p <= height; ++p) {
                if (std::gcd(std::abs(p), q) != 1) continue;
                __int128 p5 = (__int128)p * p * p * p * p;
                rows.push_back({p5 * q, q6});
            }
        }
        for (int64_t b = 1; b <= height; ++b) {
            __int128 b2 = (__int128)b * b;
            __int128 b10 = b2 * b2 * b2 * b2 * b2;
            for (int64_t u = -height; u <= height; ++u) {
                if (std::gcd(std::abs(u), b) != 1) continue;
                __int128 u5 = (__int128)u * u * u * u * u;
                rows_sqden.push_back({u5, b10});
            }
        }
    }
};

// number of projective rational points on y^2 = x^5 + a with
// max(|p|, q) <= height for x = p/q; the point at infinity contributes 1,
// affine points with y != 0 contribute 2
inline void xa_point_counts(int64_t a, const XaPairTable& table, int64_t& projective, int64_t& affine_x,
                            int64_t* projective_sqden = nullptr) {
    projective = 1;  // single point at infinity on a quintic model
    affine_x = 0;
    for (const auto& [qp5, q6] : table.rows) {
        __int128 val = qp5 + (__int128)a * q6;
        if (val < 0) continue;
        if (val == 0) {
            projective += 1;
            affine_x += 1;
            continue;
        }
        if (!is_square_u128((unsigned __int128)val)) continue;
        projective += 2;
        affine_x += 1;
    }
    if (!projective_sqden) return;
    *projective_sqden = 1;
    for (const auto& [u5, b10] : table.rows_sqden) {
        __int128 val = u5 + (__int128)a * b10;  // (y b^5)^2 = u^5 + a b^10
        if (val < 0) continue;
        if (val == 0) {
            *projective_sqden += 1;
            continue;
        }
        if (!is_square_u128((unsigned __int128)val)) continue;
        *projective_sqden += 2;
    }
}

}  // namespace detail

inline XaReport xa_family_experiment(int64_t a_max, int64_t height_bound, unsigned workers = 1) {
    require(a_max >= 1, "xa: a_max must be positive");
    require(height_bound >= 0, "xa: height bound must be nonnegative");
    XaReport rep;
    rep.a_max = a_max;
    rep.height_bound = height_bound;
    rep.squarefree_count = squarefree_count_up_to(a_max);

    if (height_bound == 0) return rep;
    std::vector<bool> squarefree((size_t)a_max + 1, true);
    squarefree[0] = false;
    for (int64_t p = 2; p * p <= a_max; ++p)
        for (int64_t j = p * p; j <= a_max; j += p * p) squarefree[(size_t)j] = false;
    std::vector<int64_t> as;
    for (int64_t a = 1; a <= a_max; ++a)
        if (squarefree[(size_t)a]) as.push_back(a);

    std::vector<uint8_t> three_proj(as.size(), 0), three_affine(as.size(), 0), three_sq(as.size(), 0);
    detail::XaPairTable table(height_bound);
    parallel_for(as.size(), workers, [&](size_t i) {
        int64_t projective = 0, affine_x = 0, sqden = 0;
        detail::xa_point_counts(as[i], table, projective, affine_x, &sqden);
        three_proj[i] = projective >= 3 ? 1 : 0;
        three_affine[i] = affine_x >= 3 ? 1 : 0;
        three_sq[i] = sqden >= 3 ? 1 : 0;
    });
    for (size_t i = 0; i < as.size(); ++i) {
        rep.with_three_points += three_proj[i];
        rep.with_three_affine_x += three_affine[i];
        rep.with_three_points_sqden += three_sq[i];
    }
    return rep;
}

}  // namespace g2r
