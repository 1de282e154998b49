#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "g2rank/boxes.hpp"
#include "g2rank/counting.hpp"
#include "g2rank/jacobian.hpp"
#include "g2rank/model.hpp"

namespace g2r {

// Certificates here are per-curve evidence objects.  Statements about the
// universal family (Zariski-closedness of torsion loci, thin exceptional
// sets, the generic subgroup spanned by the two sections) have no per-curve
// computational counterpart and are deliberately out of scope: nothing in
// this module claims more than what its recorded primes and exact
// transcripts re-verify.

// Cap for the exact search over Q, kappa * (log H)^2 rounded up.  kappa is a
// runtime knob, not part of any correctness claim: certificates never guess,
// they come back "undecided" when the cap bites.  The floor keeps the cap
// meaningful at height 1, where the raw formula collapses to zero.
struct TorsionBound {
    Integer height;
    Integer bound;

    static TorsionBound of(const WeierstrassModel& m, int kappa, int floor_bound = 24) {
        TorsionBound t;
        t.height = g2r::height(m, HeightKind::H1).h1;
        double lg = std::log(std::max(1.0, t.height.convert_to<double>()));
        t.bound = std::max<int64_t>((int64_t)std::ceil(kappa * lg * lg), floor_bound);
        check_internal(t.bound >= 1, "torsion bound must be positive");
        return t;
    }
};

struct CertifyOptions {
    int kappa = 4;
    size_t prime_count = 4;          // first odd primes of good reduction
    uint64_t max_coeff_bits = 1 << 20;  // guard on exact-Q coordinate growth
};

struct CertEvidence {
    uint64_t p = 0;
    Integer group_order;
    Integer alpha_order;
    std::optional<Integer> beta_order;
};

// transcript entry for a computation done exactly over Q
struct ExactClaim {
    std::string claim;  // "alpha_multiple_zero" | "alpha_multiple_nonzero" | "pair_relation_zero" | "pair_relation_nonzero"
    Integer m;          // coefficient of alpha
    Integer n;          // coefficient of beta (0 for alpha-only claims)
    bool is_zero = false;
};

struct RankCertificate {
    enum Kind { NonTorsion, TorsionOfOrder, IndependentUpTo, RelationFound };

    WeierstrassModel curve;
    Kind kind = NonTorsion;
    Integer order;                      // TorsionOfOrder
    Integer bound;                      // IndependentUpTo
    std::pair<Integer, Integer> relation{0, 0};  // RelationFound: m*alpha + n*beta = 0
    std::vector<CertEvidence> evidence;
    std::vector<ExactClaim> exact;
    int kappa = 4;
};

inline bool operator==(const CertEvidence& a, const CertEvidence& b) {
    return a.p == b.p && a.group_order == b.group_order && a.alpha_order == b.alpha_order &&
           a.beta_order == b.beta_order;
}
inline bool operator==(const ExactClaim& a, const ExactClaim& b) {
    return a.claim == b.claim && a.m == b.m && a.n == b.n && a.is_zero == b.is_zero;
}
inline bool operator==(const RankCertificate& a, const RankCertificate& b) {
    return a.curve == b.curve && a.kind == b.kind && a.order == b.order && a.bound == b.bound &&
           a.relation == b.relation && a.evidence == b.evidence && a.exact == b.exact && a.kappa == b.kappa;
}

inline const char* certificate_kind_name(RankCertificate::Kind k) {
    switch (k) {
        case RankCertificate::NonTorsion: return "non_torsion";
        case RankCertificate::TorsionOfOrder: return "torsion_of_order";
        case RankCertificate::IndependentUpTo: return "independent_up_to";
        case RankCertificate::RelationFound: return "relation_found";
    }
    return "?";
}

// first `count` odd primes of good reduction (degree, smoothness and the
// points at infinity all survive)
inline std::vector<uint64_t> choose_good_primes(const SimplifiedModel& m, size_t count) {
    std::vector<uint64_t> out;
    for (uint64_t p = 3; out.size() < count; p += 2) {
        require(p <= prime_guard_max(), "no good prime below the prime guard");
        if (!is_prime_u64(p)) continue;
        if (!good_reduction(m, p)) continue;
        out.push_back(p);
    }
    return out;
}

namespace detail {

inline uint64_t rational_bits(const Rational& q) {
    auto nbits = [](const Integer& n) { return n == 0 ? 0u : (unsigned)boost::multiprecision::msb(abs(n)) + 1; };
    return std::max<uint64_t>(nbits(numerator(q)), nbits(denominator(q)));
}

inline uint64_t divisor_bits(const QDivisor& d) {
    uint64_t b = 0;
    for (const auto& x : d.u.c) b = std::max(b, rational_bits(x));
    for (const auto& x : d.v.c) b = std::max(b, rational_bits(x));
    return b;
}

// double-and-add with a growth guard; throws undecided_error at the cap
inline QDivisor mul_guarded(const Jacobian<Rational>& jac, Integer k, const QDivisor& d,
                            uint64_t max_bits, const std::string& what) {
    QDivisor acc = jac.identity();
    QDivisor base = k < 0 ? jac.negate(d) : d;
    if (k < 0) k = -k;
    while (k > 0) {
        if ((k & 1) != 0) acc = jac.add(acc, base);
        k >>= 1;
        if (k > 0) base = jac.add(base, base);
        if (divisor_bits(acc) > max_bits || divisor_bits(base) > max_bits)
            throw undecided_error("exact computation exceeded the coefficient guard", what);
    }
    return acc;
}

}  // namespace detail

// Decision procedure for the class [oo+ - oo-]:
//   (i)  its order in J(F_p) for each supplied good prime;
//   (ii) two distinct orders certify non-torsion (torsion injects at odd
//        good primes, so a torsion class shows one fixed order everywhere);
//   (iii) a common order n is settled exactly over Q: n*alpha = 0 gives
//        torsion of order exactly n, n*alpha != 0 gives non-torsion.
inline RankCertificate certify_alpha(const WeierstrassModel& m, const std::vector<uint64_t>& primes,
                                     const CertifyOptions& opts = {}) {
    require(validate(m).valid, "certify: model is not valid");
    auto inf = infinity_class(m);
    require(inf.kind == InfinityClass::TwoRationalPoints, "infinity not rational");
    require(!primes.empty(), "no good prime supplied");

    SimplifiedModel s = SimplifiedModel::of(m);
    RankCertificate cert;
    cert.curve = m;
    cert.kappa = opts.kappa;

    for (uint64_t p : primes) {
        require(p > 2 && is_prime_u64(p), "certify: primes must be odd");
        require(good_reduction(s, p), "bad prime");
        auto jac_p = jacobian_mod_p(s, p);
        check_internal(jac_p.has_rational_infinity(), "certify: infinity lost mod p");
        Integer n = group_order(s, p);
        Integer ord = order_of(jac_p, jac_p.infinity_class_point(), n);
        cert.evidence.push_back({p, n, ord, std::nullopt});
        if (ord != cert.evidence[0].alpha_order) {
            // distinct orders at two good primes; a torsion class reduces
            // with its exact order everywhere, so this settles it
            cert.kind = RankCertificate::NonTorsion;
            return cert;
        }
    }

    Integer n = cert.evidence[0].alpha_order;
    TorsionBound tb = TorsionBound::of(m, opts.kappa);
    if (n > tb.bound) {
        std::string ev = "common reduction order " + n.str() + " exceeds torsion cap " + tb.bound.str();
        throw undecided_error("certify: exact check not attempted (order above torsion cap)", ev);
    }

    auto jac = jacobian_over_q(s);
    auto alpha = jac.infinity_class_point();
    QDivisor n_alpha = detail::mul_guarded(jac, n, alpha, opts.max_coeff_bits, "n*alpha");
    if (!jac.is_identity(n_alpha)) {
        cert.kind = RankCertificate::NonTorsion;
        cert.exact.push_back({"alpha_multiple_nonzero", n, Integer(0), false});
        return cert;
    }
    // order is exactly n: every proper divisor multiple must be nonzero,
    // otherwise reduction would have shown the smaller order
    cert.exact.push_back({"alpha_multiple_zero", n, Integer(0), true});
    for (auto [q, e] : factor_u64(n.convert_to<uint64_t>())) {
        (void)e;
        Integer k = n / q;
        QDivisor ka = detail::mul_guarded(jac, k, alpha, opts.max_coeff_bits, "minimality");
        check_internal(!jac.is_identity(ka), "certify: reduction order is not minimal");
        cert.exact.push_back({"alpha_multiple_nonzero", k, Integer(0), false});
    }
    cert.kind = RankCertificate::TorsionOfOrder;
    cert.order = n;
    return cert;
}

inline RankCertificate certify_alpha_auto(const WeierstrassModel& m, const CertifyOptions& opts = {}) {
    return certify_alpha(m, choose_good_primes(SimplifiedModel::of(m), opts.prime_count), opts);
}

// Pair certification on the two-section family (h = 0, a6 = a0 = 1):
// candidate relations m*alpha + n*beta = 0 with |m|,|n| <= B are killed
// prime by prime; each survivor is settled exactly over Q.
inline RankCertificate certify_pair(const WeierstrassModel& m, const Integer& B,
                                    const std::vector<uint64_t>& primes, const CertifyOptions& opts = {}) {
    require(B >= 1, "empty bound");
    require(m.h_is_zero() && m.a(6) == 1 && m.a(0) == 1, "certify_pair: model not in the two-section family");
    require(validate(m).valid, "certify: model is not valid");
    require(!primes.empty(), "no good prime supplied");

    SimplifiedModel s = SimplifiedModel::of(m);
    RankCertificate cert;
    cert.curve = m;
    cert.kappa = opts.kappa;
    cert.bound = B;

    int64_t b = B.convert_to<int64_t>();
    std::vector<std::pair<int64_t, int64_t>> survivors;
    bool first = true;

    for (uint64_t p : primes) {
        require(p > 2 && is_prime_u64(p), "certify: primes must be odd");
        require(good_reduction(s, p), "bad prime");
        auto jac_p = jacobian_mod_p(s, p);
        Integer N = group_order(s, p);
        auto alpha_p = jac_p.infinity_class_point();
        // P = (0,-1) on y^2 = f is (0,-2) on the completed square
        auto beta_p = jac_p.embed_point(Fp(0, p), Fp::from_integer(Integer(-2), p));
        cert.evidence.push_back({p, N, order_of(jac_p, alpha_p, N), order_of(jac_p, beta_p, N)});

        // multiples tables, then intersect the relation set
        std::vector<Divisor<Fp>> am((size_t)(2 * b + 1), jac_p.identity());
        std::vector<Divisor<Fp>> bn((size_t)(2 * b + 1), jac_p.identity());
        for (int64_t k = -b; k <= b; ++k) {
            am[(size_t)(k + b)] = jac_p.mul(k, alpha_p);
            bn[(size_t)(k + b)] = jac_p.mul(k, beta_p);
        }
        std::vector<std::pair<int64_t, int64_t>> still;
        auto relation_holds = [&](int64_t mm, int64_t nn) {
            return jac_p.is_identity(jac_p.add(am[(size_t)(mm + b)], bn[(size_t)(nn + b)]));
        };
        if (first) {
            for (int64_t mm = -b; mm <= b; ++mm)
                for (int64_t nn = -b; nn <= b; ++nn) {
                    if (mm == 0 && nn == 0) continue;
                    if (relation_holds(mm, nn)) still.push_back({mm, nn});
                }
            first = false;
        } else {
            for (auto [mm, nn] : survivors)
                if (relation_holds(mm, nn)) still.push_back({mm, nn});
        }
        survivors = std::move(still);
        if (survivors.empty()) break;
    }

    if (survivors.empty()) {
        cert.kind = RankCertificate::IndependentUpTo;
        return cert;
    }

    auto jac = jacobian_over_q(s);
    auto alpha = jac.infinity_class_point();
    auto beta = jac.embed_point(Rational(0), Rational(-2));
    std::sort(survivors.begin(), survivors.end());
    for (auto [mm, nn] : survivors) {
        QDivisor lhs = jac.add(detail::mul_guarded(jac, mm, alpha, opts.max_coeff_bits, "m*alpha"),
                               detail::mul_guarded(jac, nn, beta, opts.max_coeff_bits, "n*beta"));
        if (jac.is_identity(lhs)) {
            cert.kind = RankCertificate::RelationFound;
            cert.relation = {Integer(mm), Integer(nn)};
            cert.exact.push_back({"pair_relation_zero", Integer(mm), Integer(nn), true});
            return cert;
        }
        cert.exact.push_back({"pair_relation_nonzero", Integer(mm), Integer(nn), false});
    }
    cert.kind = RankCertificate::IndependentUpTo;
    return cert;
}

// Re-derives a certificate with its own recorded primes and compares; a
// sound certificate reproduces itself bit for bit.
inline bool verify_certificate(const RankCertificate& cert, const CertifyOptions& opts_in = {}) {
    CertifyOptions opts = opts_in;
    opts.kappa = cert.kappa;
    std::vector<uint64_t> primes;
    for (const auto& e : cert.evidence) primes.push_back(e.p);
    RankCertificate again;
    if (cert.kind == RankCertificate::IndependentUpTo || cert.kind == RankCertificate::RelationFound) {
        again = certify_pair(cert.curve, cert.bound, primes, opts);
    } else {
        again = certify_alpha(cert.curve, primes, opts);
    }
    return again == cert;
}

// Scan outcome tallies for a box sample; "undecided" is counted, never guessed.
struct TorsionTally {
    int64_t nontorsion = 0;
    int64_t torsion = 0;
    int64_t undecided = 0;

    int64_t total() const { return nontorsion + torsion + undecided; }
};

struct SamplingPlan {
    enum Mode { Exhaustive, Uniform } mode = Exhaustive;
    size_t sample_size = 0;
    uint64_t seed = 0;
};

inline void tally_one(const WeierstrassModel& m, const CertifyOptions& opts, TorsionTally& out) {
    try {
        RankCertificate c = certify_alpha_auto(m, opts);
        if (c.kind == RankCertificate::TorsionOfOrder) out.torsion += 1;
        else out.nontorsion += 1;
    } catch (const undecided_error&) {
        out.undecided += 1;
    }
}

// alpha-torsion scan over s1sq or u11
inline TorsionTally torsion_scan(const BoxSpec& box, const SamplingPlan& plan,
                                 const CertifyOptions& opts = {}, unsigned workers = 1) {
    require(box.kind == BoxKind::S1Square || box.kind == BoxKind::U11,
            "torsion_scan: box must be s1sq or u11");
    TorsionTally tally;
    if (plan.mode == SamplingPlan::Exhaustive) {
        BoxEnumerator e(box);
        std::vector<WeierstrassModel> models;
        while (auto m = e.next()) {
            if (box.kind == BoxKind::U11 && !is_square(m->c())) continue;
            models.push_back(*m);
        }
        std::vector<TorsionTally> parts(models.size());
        parallel_for(models.size(), workers, [&](size_t i) { tally_one(models[i], opts, parts[i]); });
        for (const auto& t : parts) {
            tally.nontorsion += t.nontorsion;
            tally.torsion += t.torsion;
            tally.undecided += t.undecided;
        }
        return tally;
    }
    require(plan.sample_size > 0, "torsion_scan: empty sampling plan");
    std::vector<TorsionTally> parts(plan.sample_size);
    parallel_for(plan.sample_size, workers, [&](size_t i) {
        Rng rng = Rng::child(plan.seed, i);
        WeierstrassModel m = sample_box(box, rng);
        if (box.kind == BoxKind::U11 && !is_square(m.c())) {
            // a6 = 1 always has c = 4; unreachable, kept as a guard
            return;
        }
        tally_one(m, opts, parts[i]);
    });
    for (const auto& t : parts) {
        tally.nontorsion += t.nontorsion;
        tally.torsion += t.torsion;
        tally.undecided += t.undecided;
    }
    return tally;
}

}  // namespace g2r
