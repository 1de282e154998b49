#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "g2rank/counting.hpp"
#include "g2rank/jacobian.hpp"
#include "g2rank/util.hpp"

namespace g2r {

// Group-operation accounting for the multi-scalar-multiplication benchmarks.
// Identity absorption is free; a doubling is add(x, x) on a nonidentity x.
struct CostLedger {
    uint64_t additions = 0;
    uint64_t doublings = 0;
    uint64_t table_entries = 0;

    uint64_t group_ops() const { return additions + doublings; }
};

template <class F>
class CountingGroup {
public:
    CountingGroup(const Jacobian<F>& jac, CostLedger& ledger) : jac_(jac), ledger_(ledger) {}

    Divisor<F> add(const Divisor<F>& a, const Divisor<F>& b) {
        if (jac_.is_identity(a)) return b;
        if (jac_.is_identity(b)) return a;
        if (a == b) ledger_.doublings += 1;
        else ledger_.additions += 1;
        return jac_.add(a, b);
    }

    Divisor<F> dbl(const Divisor<F>& a) { return add(a, a); }

    // left-to-right double-and-add, nonnegative scalar
    Divisor<F> scalar_mul(const Integer& k, const Divisor<F>& d) {
        check_internal(k >= 0, "msm: scalars must be nonnegative");
        if (k == 0) return jac_.identity();
        Divisor<F> acc = jac_.identity();
        for (int bit = (int)boost::multiprecision::msb(k); bit >= 0; --bit) {
            acc = dbl(acc);
            if (boost::multiprecision::bit_test(k, (unsigned)bit)) acc = add(acc, d);
        }
        return acc;
    }

private:
    const Jacobian<F>& jac_;
    CostLedger& ledger_;
};

template <class F>
std::pair<Divisor<F>, CostLedger> msm_naive(const Jacobian<F>& jac, const std::vector<Divisor<F>>& gens,
                                            const std::vector<Integer>& z) {
    require(gens.size() == z.size(), "msm: generator/scalar length mismatch");
    for (const auto& k : z) require(k >= 0, "msm: scalars must be nonnegative");
    CostLedger ledger;
    CountingGroup<F> ops(jac, ledger);
    Divisor<F> acc = jac.identity();
    for (size_t i = 0; i < gens.size(); ++i)
        acc = ops.add(acc, ops.scalar_mul(z[i], gens[i]));
    return {acc, ledger};
}

// Pippenger bucket method: per window level, scalars are sliced into w-bit
// chunks, chunk values index buckets, and the level sum
// sum_b b * bucket[b] comes from one suffix-accumulation pass.
template <class F>
std::pair<Divisor<F>, CostLedger> msm_pippenger(const Jacobian<F>& jac, const std::vector<Divisor<F>>& gens,
                                                const std::vector<Integer>& z, unsigned window) {
    require(gens.size() == z.size(), "msm: generator/scalar length mismatch");
    require(window >= 1, "msm: window must be at least 1");
    require(window <= 20, "msm: window exceeds the table memory guard");
    for (const auto& k : z) require(k >= 0, "msm: scalars must be nonnegative");

    CostLedger ledger;
    CountingGroup<F> ops(jac, ledger);
    unsigned max_bits = 1;
    for (const auto& k : z)
        if (k > 0) max_bits = std::max(max_bits, (unsigned)boost::multiprecision::msb(k) + 1);
    unsigned levels = (max_bits + window - 1) / window;
    size_t nbuckets = ((size_t)1 << window);
    ledger.table_entries = nbuckets - 1;

    auto chunk_of = [&](const Integer& k, unsigned level) {
        uint64_t v = 0;
        for (unsigned b = 0; b < window; ++b) {
            unsigned bit = level * window + b;
            if (bit < max_bits && boost::multiprecision::bit_test(k, bit)) v |= (uint64_t)1 << b;
        }
        return v;
    };

    Divisor<F> acc = jac.identity();
    for (unsigned level = levels; level-- > 0;) {
        for (unsigned b = 0; b < window; ++b) acc = ops.dbl(acc);
        std::vector<Divisor<F>> buckets(nbuckets, jac.identity());
        for (size_t i = 0; i < gens.size(); ++i) {
            uint64_t b = chunk_of(z[i], level);
            if (b) buckets[b] = ops.add(buckets[b], gens[i]);
        }
        Divisor<F> running = jac.identity();
        Divisor<F> level_sum = jac.identity();
        for (size_t b = nbuckets - 1; b >= 1; --b) {
            running = ops.add(running, buckets[b]);
            level_sum = ops.add(level_sum, running);
        }
        acc = ops.add(acc, level_sum);
    }
    return {acc, ledger};
}

inline unsigned default_window(size_t d) {
    // round(log2 d), floored at 1
    unsigned w = 1;
    while (((size_t)1 << (w + 1)) <= d) ++w;
    if ((unsigned long long)d * d >= (1ull << (2 * w + 1))) ++w;
    return std::max(1u, w);
}

// ---- lifting rational generators to J(F_q) -------------------------------------

struct GeneratorSet {
    uint64_t q = 0;
    SimplifiedModel lift;
    std::vector<Divisor<Fp>> gens;
};

// g_1..g_{d-2} lifted generators followed by the DLP pair g_{d-1} = h and
// g_d = g, the layout the relation lattice expects
inline std::vector<Divisor<Fp>> protocol_generators(const GeneratorSet& lifted, const Divisor<Fp>& h,
                                                    const Divisor<Fp>& g) {
    std::vector<Divisor<Fp>> out = lifted.gens;
    out.push_back(h);
    out.push_back(g);
    return out;
}

// Reduce exact divisor classes of a lifted curve mod q.  The protocol roles
// put the DLP pair last: callers append h as g_{d-1} and g as g_d.
inline GeneratorSet lift_and_reduce(const SimplifiedModel& lift, const std::vector<QDivisor>& points, uint64_t q) {
    require(q > 2 && is_prime_u64(q), "lift: q must be an odd prime");
    require(good_reduction(lift, q), "bad prime");
    GeneratorSet out;
    out.q = q;
    out.lift = lift;
    auto jac_q = jacobian_mod_p(lift, q);
    auto jac_Q = jacobian_over_q(lift);
    for (size_t i = 0; i < points.size(); ++i) {
        jac_Q.check_divisor(points[i]);
        Divisor<Fp> r;
        try {
            r = reduce_divisor(points[i], q);
        } catch (const precondition_error&) {
            throw precondition_error("lift: generator #" + std::to_string(i + 1) +
                                     " has a denominator divisible by q");
        }
        jac_q.check_divisor(r);
        require(!jac_q.is_identity(r), "lift: generator #" + std::to_string(i + 1) + " reduces to the identity");
        out.gens.push_back(r);
    }
    return out;
}

// ---- cost accounting across the d + n/d tradeoff --------------------------------

struct CostRow {
    unsigned n_bits = 0;
    size_t d = 0;
    uint64_t additions = 0;
    uint64_t doublings = 0;
    uint64_t table_entries = 0;
    uint64_t model_cost = 0;  // d + ceil(n/d)
};

// Measured group-operation counts of one multi-scalar multiplication with d
// generators of n/d-bit scalars, against the d + ceil(n/d) model column.
// d = 1 degenerates to a plain scalar multiplication (naive path).
inline std::vector<CostRow> cost_report(unsigned n_bits, const std::vector<size_t>& d_grid,
                                        const Jacobian<Fp>& jac, const std::vector<Divisor<Fp>>& pool,
                                        uint64_t seed, std::optional<unsigned> window = std::nullopt) {
    require(n_bits >= 1, "cost: n must be positive");
    require(!pool.empty(), "cost: need at least one generator");
    std::vector<CostRow> rows;
    for (size_t d : d_grid) {
        require(d >= 1, "cost: d must be positive");
        Rng rng(seed ^ (0xC0u + (uint64_t)d));
        std::vector<Divisor<Fp>> gens;
        for (size_t i = 0; i < d; ++i) gens.push_back(pool[i % pool.size()]);
        unsigned chunk = (n_bits + (unsigned)d - 1) / (unsigned)d;
        std::vector<Integer> z;
        for (size_t i = 0; i < d; ++i) {
            Integer k = 0;
            for (unsigned b = 0; b < chunk; ++b)
                if (rng.coin()) boost::multiprecision::bit_set(k, b);
            z.push_back(k);
        }
        CostRow row;
        row.n_bits = n_bits;
        row.d = d;
        row.model_cost = (uint64_t)d + chunk;
        if (d == 1) {
            auto [res, ledger] = msm_naive(jac, gens, z);
            (void)res;
            row.additions = ledger.additions;
            row.doublings = ledger.doublings;
            row.table_entries = ledger.table_entries;
        } else {
            unsigned w = window ? *window : default_window(d);
            auto [res, ledger] = msm_pippenger(jac, gens, z, w);
            auto [res2, ledger2] = msm_naive(jac, gens, z);
            check_internal(res == res2, "cost: bucket and naive results disagree");
            row.additions = ledger.additions;
            row.doublings = ledger.doublings;
            row.table_entries = ledger.table_entries;
        }
        rows.push_back(row);
    }
    return rows;
}

// Toy stand-in for the quantum step: find a nonzero lattice vector z with
// sum z_i g_i = 0 by birthday collisions over random small multi-scalars.
inline std::optional<std::vector<int64_t>> find_relation(const Jacobian<Fp>& jac,
                                                         const std::vector<Divisor<Fp>>& gens,
                                                         unsigned bits, uint64_t seed, size_t tries = 20000) {
    require(bits >= 1 && bits <= 16, "relation: bit guard");
    auto key_of = [&](const Divisor<Fp>& d) {
        std::string k = std::to_string(d.n) + "|";
        for (const auto& c : d.u.c) k += std::to_string(c.v) + ",";
        k += "|";
        for (const auto& c : d.v.c) k += std::to_string(c.v) + ",";
        return k;
    };
    Rng rng(seed);
    std::map<std::string, std::vector<int64_t>> seen;
    for (size_t t = 0; t < tries; ++t) {
        std::vector<int64_t> z;
        std::vector<Integer> zi;
        for (size_t i = 0; i < gens.size(); ++i) {
            int64_t v = (int64_t)rng.below((uint64_t)1 << bits);
            z.push_back(v);
            zi.push_back(v);
        }
        auto [sum, ledger] = msm_naive(jac, gens, zi);
        (void)ledger;
        std::string k = key_of(sum);
        auto it = seen.find(k);
        if (it != seen.end()) {
            std::vector<int64_t> rel(z.size());
            bool nonzero = false;
            for (size_t i = 0; i < z.size(); ++i) {
                rel[i] = z[i] - it->second[i];
                nonzero |= rel[i] != 0;
            }
            if (!nonzero) continue;
            // verify membership in the relation lattice
            Divisor<Fp> acc = jac.identity();
            for (size_t i = 0; i < rel.size(); ++i) acc = jac.add(acc, jac.mul(rel[i], gens[i]));
            check_internal(jac.is_identity(acc), "relation: collision failed verification");
            return rel;
        }
        seen.emplace(std::move(k), std::move(z));
    }
    return std::nullopt;
}

}  // namespace g2r
