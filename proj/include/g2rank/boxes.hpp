#pragma once

#include <optional>
#include <string>
#include <vector>

#include "g2rank/errors.hpp"
#include "g2rank/model.hpp"
#include "g2rank/util.hpp"

namespace g2r {

enum class BoxKind { C1, C2, S1, S2, S1Square, U11 };

inline const char* box_kind_name(BoxKind k) {
    switch (k) {
        case BoxKind::C1: return "c1";
        case BoxKind::C2: return "c2";
        case BoxKind::S1: return "s1";
        case BoxKind::S2: return "s2";
        case BoxKind::S1Square: return "s1sq";
        case BoxKind::U11: return "u11";
    }
    return "?";
}

inline std::optional<BoxKind> box_kind_from_name(const std::string& s) {
    if (s == "c1") return BoxKind::C1;
    if (s == "c2") return BoxKind::C2;
    if (s == "s1") return BoxKind::S1;
    if (s == "s2") return BoxKind::S2;
    if (s == "s1sq") return BoxKind::S1Square;
    if (s == "u11") return BoxKind::U11;
    return std::nullopt;
}

struct BoxSpec {
    BoxKind kind = BoxKind::S1;
    int64_t x = 1;
    std::optional<int64_t> y;   // S2 only
    std::optional<int> h_mask;  // restrict S1/S2/S1Square to one h (0..15)

    void check() const {
        require(x >= 1, "box: X must be at least 1");
        require((kind == BoxKind::S2) == y.has_value(), "box: Y is required exactly for s2");
        if (y) require(*y >= 1, "box: Y must be at least 1");
        if (h_mask) {
            require(*h_mask >= 0 && *h_mask < 16, "box: h-mask must be in 0..15");
            require(kind == BoxKind::S1 || kind == BoxKind::S2 || kind == BoxKind::S1Square,
                    "box: h-mask applies to s1, s2, s1sq only");
        }
    }
};

// h tuples ordered lexicographically on (h0, h1, h2, h3)
inline std::array<int, 4> h_tuple(int rank) {
    return {(rank >> 3) & 1, (rank >> 2) & 1, (rank >> 1) & 1, rank & 1};
}
inline int h_rank(const std::array<int, 4>& h) {
    return h[0] * 8 + h[1] * 4 + h[2] * 2 + h[3];
}

// leading coefficients a6 with c = 4 a6 + h3^2 a positive perfect square
inline std::vector<int64_t> square_leading_choices(int64_t x, int h3) {
    std::vector<int64_t> out;
    if (h3 == 0) {
        for (int64_t t = 1; t * t <= x; ++t) out.push_back(t * t);
    } else {
        for (int64_t k = 0; k * (k + 1) <= x; ++k) out.push_back(k * (k + 1));
    }
    return out;
}

// Streaming enumerator.  Iteration order is lexicographic on
// (h, a6, ..., a0), each coefficient ascending; this order is the contract
// that makes runs resumable.  Only valid models are yielded, and s1sq
// additionally keeps deg g = 6 with square leading coefficient.
class BoxEnumerator {
public:
    explicit BoxEnumerator(BoxSpec spec) : spec_(spec) {
        spec_.check();
        switch (spec_.kind) {
            case BoxKind::C1:
            case BoxKind::U11:
                h_list_ = {0};
                break;
            case BoxKind::C2:
                h_list_ = {0};
                break;
            case BoxKind::S1:
            case BoxKind::S2:
            case BoxKind::S1Square:
                if (spec_.h_mask) h_list_ = {*spec_.h_mask};
                else for (int i = 0; i < 16; ++i) h_list_.push_back(i);
                break;
        }
        begin_h(0);
    }

    // position key: h rank followed by a6..a0 (descending exponent), as the
    // values of the last emitted model
    using Key = std::vector<int64_t>;

    std::optional<WeierstrassModel> next() {
        while (!done_) {
            WeierstrassModel m = current_model();
            bool ok = admit(m);
            advance();
            if (ok) return m;
        }
        return std::nullopt;
    }

    // continue after a previously emitted key
    void seek_after(const Key& key) {
        require(key.size() == 8, "checkpoint: malformed key");
        int hr = (int)key[0];
        size_t hi = 0;
        while (hi < h_list_.size() && h_list_[hi] < hr) ++hi;
        if (hi == h_list_.size() || h_list_[hi] != hr) throw precondition_error("checkpoint: h not in box");
        begin_h(hi);
        require(!done_ && h_index_ == hi, "checkpoint: empty slice for stored h");
        for (int i = 0; i < 7; ++i) {
            int64_t v = key[(size_t)i + 1];
            const Dim& d = dims_[(size_t)i];
            if (d.uses_list) {
                size_t idx = 0;
                while (idx < d.explicit_values.size() && d.explicit_values[idx] != v) ++idx;
                require(idx < d.explicit_values.size(), "checkpoint: key value not in box slice");
                cur_[(size_t)i] = (int64_t)idx;
            } else {
                require(v >= d.lo && v <= d.hi, "checkpoint: key outside box");
                cur_[(size_t)i] = v;
            }
        }
        last_key_ = key;  // position is meaningful even if nothing is emitted after
        advance();
    }

    Key last_key() const { return last_key_; }

private:
    struct Dim {
        int64_t lo = 0, hi = -1;
        std::vector<int64_t> explicit_values;  // used for the s1sq leading coefficient
        bool uses_list = false;
    };

    void begin_h(size_t h_index) {
        h_index_ = h_index;
        if (h_index_ >= h_list_.size()) { done_ = true; return; }
        dims_.assign(7, Dim{});
        const int64_t X = spec_.x;
        auto all = [&](int64_t bound) { return Dim{-bound, bound, {}, false}; };
        auto fixed = [&](int64_t v) { return Dim{v, v, {}, false}; };
        switch (spec_.kind) {
            case BoxKind::C1:
            case BoxKind::S1:
                for (int i = 0; i < 7; ++i) dims_[(size_t)i] = all(X);
                break;
            case BoxKind::S2:
                for (int i = 0; i < 7; ++i) {
                    // dims_[i] holds a_{6-i}
                    int exp = i;
                    dims_[(size_t)i] = all(X * pow_i64(*spec_.y, exp));
                }
                break;
            case BoxKind::U11:
                dims_[0] = fixed(1);
                for (int i = 1; i < 6; ++i) dims_[(size_t)i] = all(X);
                dims_[6] = fixed(1);
                break;
            case BoxKind::C2: {
                // y^2 = x^5 + c2 x^3 + c3 x^2 + c4 x + c5, bound |ck|^20 <= X^k
                dims_[0] = fixed(0);  // a6
                dims_[1] = fixed(1);  // a5
                dims_[2] = fixed(0);  // a4
                for (unsigned k = 2; k <= 5; ++k) {
                    int64_t b = (int64_t)kth_root_floor(pow(Integer(X), k), 20);
                    dims_[(size_t)(k + 1)] = all(b);  // a_{5-k} at position 6-(5-k) = k+1
                }
                break;
            }
            case BoxKind::S1Square: {
                Dim lead;
                lead.uses_list = true;
                lead.explicit_values = square_leading_choices(X, h_tuple(h_list_[h_index_])[3]);
                dims_[0] = lead;
                for (int i = 1; i < 7; ++i) dims_[(size_t)i] = all(X);
                break;
            }
        }
        cur_.assign(7, 0);
        for (int i = 0; i < 7; ++i) cur_[(size_t)i] = dim_first(i);
        done_ = false;
        for (int i = 0; i < 7; ++i) {
            if (dim_empty(i)) {  // empty slice (no admissible leading coefficient)
                begin_h(h_index_ + 1);
                return;
            }
        }
    }

    static int64_t pow_i64(int64_t b, int e) {
        int64_t r = 1;
        for (int i = 0; i < e; ++i) {
            require(r <= (int64_t)4e17 / std::max<int64_t>(b, 1), "box: S2 bound overflows");
            r *= b;
        }
        return r;
    }

    bool dim_empty(int i) const {
        const Dim& d = dims_[(size_t)i];
        return d.uses_list ? d.explicit_values.empty() : d.lo > d.hi;
    }
    int64_t dim_first(int i) const {
        const Dim& d = dims_[(size_t)i];
        return d.uses_list ? 0 : d.lo;  // list dims iterate by index
    }
    bool dim_advance(int i) {
        Dim& d = dims_[(size_t)i];
        if (d.uses_list) {
            if (cur_[(size_t)i] + 1 < (int64_t)d.explicit_values.size()) { ++cur_[(size_t)i]; return true; }
        } else {
            if (cur_[(size_t)i] < d.hi) { ++cur_[(size_t)i]; return true; }
        }
        return false;
    }
    int64_t dim_value(int i) const {
        const Dim& d = dims_[(size_t)i];
        return d.uses_list ? d.explicit_values[(size_t)cur_[(size_t)i]] : cur_[(size_t)i];
    }

    WeierstrassModel current_model() const {
        std::vector<Integer> a(7);
        for (int i = 0; i < 7; ++i) a[(size_t)(6 - i)] = dim_value(i);  // position i holds a_{6-i}
        WeierstrassModel m{ZPoly(a), h_tuple(h_list_[h_index_])};
        return m;
    }

    bool admit(const WeierstrassModel& m) {
        if (!validate(m).valid) return false;
        if (spec_.kind == BoxKind::S1Square) {
            if (m.g().degree() != 6) return false;
            if (!is_square(m.c())) return false;  // guaranteed by construction; kept as a cheap recheck
        }
        record_key(m);
        return true;
    }

    void record_key(const WeierstrassModel&) {
        last_key_.assign(8, 0);
        last_key_[0] = h_list_[h_index_];
        for (int i = 0; i < 7; ++i) last_key_[(size_t)(i + 1)] = dim_value(i);
    }

    void advance() {
        for (int i = 6; i >= 0; --i) {
            if (dim_advance(i)) {
                for (int j = i + 1; j < 7; ++j) cur_[(size_t)j] = dim_first(j);
                return;
            }
        }
        begin_h(h_index_ + 1);
    }

    BoxSpec spec_;
    std::vector<int> h_list_;
    size_t h_index_ = 0;
    std::vector<Dim> dims_;
    std::vector<int64_t> cur_;
    Key last_key_;
    bool done_ = false;
};

// exact membership test (the admission filters of BoxEnumerator, point-wise)
inline bool in_box(const WeierstrassModel& m, const BoxSpec& spec) {
    spec.check();
    if (!validate(m).valid) return false;
    const int64_t X = spec.x;
    auto within = [&](const Integer& v, const Integer& bound) { return abs(v) <= bound; };
    switch (spec.kind) {
        case BoxKind::C1:
            if (!m.h_is_zero()) return false;
            for (int i = 0; i <= 6; ++i)
                if (!within(m.a((size_t)i), X)) return false;
            return true;
        case BoxKind::S1:
            if (spec.h_mask && h_rank(m.h) != *spec.h_mask) return false;
            for (int i = 0; i <= 6; ++i)
                if (!within(m.a((size_t)i), X)) return false;
            return true;
        case BoxKind::S2:
            if (spec.h_mask && h_rank(m.h) != *spec.h_mask) return false;
            for (int i = 0; i <= 6; ++i)
                if (!within(m.a((size_t)i), Integer(X) * pow(Integer(*spec.y), (unsigned)(6 - i)))) return false;
            return true;
        case BoxKind::S1Square: {
            if (spec.h_mask && h_rank(m.h) != *spec.h_mask) return false;
            for (int i = 0; i <= 6; ++i)
                if (!within(m.a((size_t)i), X)) return false;
            if (m.g().degree() != 6) return false;
            auto r = is_square(m.c());
            return r.has_value() && *r > 0;
        }
        case BoxKind::U11:
            if (!m.h_is_zero() || m.a(6) != 1 || m.a(0) != 1) return false;
            for (int i = 1; i <= 5; ++i)
                if (!within(m.a((size_t)i), X)) return false;
            return true;
        case BoxKind::C2:
            if (!m.h_is_zero() || m.f.degree() != 5 || m.f.lc() != 1 || m.a(4) != 0) return false;
            return h2_within(m, Integer(X));
    }
    return false;
}

// Uniform sample from the box (valid models only, exact membership).  For
// s1sq the (h, a6) pair is drawn uniformly from the admissible slice list, so
// the draw is uniform over the whole box.
inline WeierstrassModel sample_box(const BoxSpec& spec, Rng& rng, int max_tries = 10000) {
    spec.check();
    const int64_t X = spec.x;
    for (int attempt = 0; attempt < max_tries; ++attempt) {
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
                // uniform over admissible (h, a6) slices; all slices have
                // (2X+1)^6 interior points
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
        WeierstrassModel m{ZPoly(a), h};
        if (in_box(m, spec)) return m;
    }
    throw internal_error("sample: no valid model found (box too degenerate?)");
}

}  // namespace g2r
