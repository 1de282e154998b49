#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "g2rank/errors.hpp"

namespace g2r {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer abs(const Integer& n) { return boost::multiprecision::abs(n); }
inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

inline Integer pow(const Integer& base, unsigned k) {
    Integer r = 1, b = base;
    while (k) {
        if (k & 1u) r *= b;
        b *= b;
        k >>= 1u;
    }
    return r;
}

// floor of the square root, n >= 0
inline Integer sqrt_floor(const Integer& n) {
    require(n >= 0, "sqrt_floor: negative argument");
    return boost::multiprecision::sqrt(n);
}

// Exact square root if n is a perfect square; empty otherwise (negatives included).
inline std::optional<Integer> is_square(const Integer& n) {
    if (n < 0) return std::nullopt;
    Integer r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

// floor of the k-th root, n >= 0, k >= 1
inline Integer kth_root_floor(const Integer& n, unsigned k) {
    require(k >= 1, "kth_root_floor: k must be positive");
    require(n >= 0, "kth_root_floor: negative argument");
    if (n == 0 || k == 1) return n;
    // initial guess from bit length, then clamp by a monotone walk
    Integer r = Integer(1) << (unsigned)((boost::multiprecision::msb(n) / k) + 1);
    while (pow(r, k) > n) {
        // Newton step for r^k - n, rounded down
        Integer rk1 = pow(r, k - 1);
        Integer next = ((k - 1) * r * rk1 + n) / (k * rk1);
        if (next >= r) { --r; } else { r = next; }
    }
    while (pow(r + 1, k) <= n) ++r;
    return r;
}

inline std::vector<int64_t> primes_up_to(int64_t x) {
    require(x >= 2, "primes_up_to: bound must be at least 2");
    std::vector<bool> comp((size_t)x + 1, false);
    std::vector<int64_t> out;
    for (int64_t i = 2; i <= x; ++i) {
        if (comp[(size_t)i]) continue;
        out.push_back(i);
        for (int64_t j = i * i; j <= x; j += i) comp[(size_t)j] = true;
    }
    return out;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    auto mulmod = [n](uint64_t a, uint64_t b) { return (uint64_t)((__uint128_t)a * b % n); };
    auto powmod = [&](uint64_t a, uint64_t e) {
        uint64_t r = 1;
        a %= n;
        while (e) {
            if (e & 1) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

inline Integer smallest_prime_factor(const Integer& n) {
    require(n > 1, "smallest_prime_factor: argument must exceed 1");
    for (Integer p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

// prime -> exponent, ascending; trial division (inputs here stay near 64 bits)
inline std::vector<std::pair<uint64_t, unsigned>> factor_u64(uint64_t n) {
    require(n >= 1, "factor_u64: argument must be positive");
    std::vector<std::pair<uint64_t, unsigned>> out;
    for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

// Squarefreeness by trial division with a perfect-power screen on the
// remaining cofactor.  Inputs beyond the trial bound whose cofactor is
// neither prime, a square, nor another perfect power raise undecided_error
// instead of guessing.
inline bool is_squarefree(const Integer& n, int64_t trial_bound = 1000000) {
    require(n != 0, "is_squarefree: undefined at 0");
    Integer m = abs(n);
    if (m == 1) return true;
    for (int64_t p = 2; p <= trial_bound && Integer(p) * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0) return false;
    }
    if (m == 1) return true;
    if (Integer(trial_bound) * trial_bound >= m) return true;  // cofactor is prime
    if (is_square(m)) return false;
    for (unsigned k = 3; (Integer(1) << k) <= m; ++k) {
        Integer r = kth_root_floor(m, k);
        if (r > 1 && pow(r, k) == m) return false;
    }
    throw undecided_error("is_squarefree: cofactor exceeds factorization guard",
                          "cofactor " + m.str());
}

// count of squarefree integers in [1, a_max], by sieving multiples of p^2
inline int64_t squarefree_count_up_to(int64_t a_max) {
    require(a_max >= 1, "squarefree_count_up_to: bound must be positive");
    std::vector<bool> hit((size_t)a_max + 1, false);
    for (int64_t p = 2; p * p <= a_max; ++p) {
        int64_t p2 = p * p;
        for (int64_t j = p2; j <= a_max; j += p2) hit[(size_t)j] = true;
    }
    int64_t count = 0;
    for (int64_t i = 1; i <= a_max; ++i)
        if (!hit[(size_t)i]) ++count;
    return count;
}

inline Integer to_integer(const std::string& s) { return Integer(s); }

// context-free zero/one for the rational field (prime fields overload these)
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline bool is_zero(const Rational& r) { return r == 0; }

inline Integer zero_like(const Integer&) { return Integer(0); }
inline Integer one_like(const Integer&) { return Integer(1); }
inline bool is_zero(const Integer& n) { return n == 0; }

}  // namespace g2r
