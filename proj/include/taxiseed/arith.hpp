#pragma once

// Closed-form seed quantities for sums of like powers, in exact arithmetic.
//
// For an exponent m the three quantities that drive everything are
//
//     d  = gcd(3^m - 2^m, 2^m - 1)
//     l3 = (3^m - 1) / d      length of the shortest 3s-and-1s sum equal to l3 * 2^m
//     l4 = 2^m + 1            length of the 4-and-1s sum equal to l4 * 2^m
//
// Two-way seeds are min(l3, l4); three-way seeds (m >= 4) are the second
// smallest of {l3, l4, 2 l3, 2 l4}; for t >= 4 the (t-1)-st smallest value of
// a*l3 + b*l4 is an upper bound that is conjectured to be exact.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taxiseed/errors.hpp"

namespace taxiseed {

using BigInt = mpz_class;

inline std::string to_decimal(const BigInt& x) { return x.get_str(10); }

inline BigInt pow_ui(unsigned long base, unsigned long exponent) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
    return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// Divides and throws InternalConsistencyError unless the division is exact.
inline BigInt exact_div(const BigInt& num, const BigInt& den, std::string_view what) {
    if (den == 0 || !mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
        throw InternalConsistencyError("inexact division: " + std::string(what));
    BigInt q;
    mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

struct SeedQuantities {
    unsigned m = 0;
    BigInt d;
    BigInt l3;
    BigInt l4;
};

enum class SeedStatus { exact, conjectured_upper_bound };

/// Which member of {l3, l4, 2 l3, 2 l4} is the three-way seed.
enum class SeedCase { case1_2l4, case2_l4, case3_l3, case4_2l3, small_m_special };

/// Which of l3, l4 realises the two-way seed.
enum class TwoWaySource { l3, l4 };

constexpr std::string_view to_string(SeedStatus s) {
    return s == SeedStatus::exact ? "exact" : "conjectured-upper-bound";
}

constexpr std::string_view to_string(SeedCase c) {
    switch (c) {
    case SeedCase::case1_2l4: return "case1-2l4";
    case SeedCase::case2_l4: return "case2-l4";
    case SeedCase::case3_l3: return "case3-l3";
    case SeedCase::case4_2l3: return "case4-2l3";
    case SeedCase::small_m_special: return "small-m-special";
    }
    return "?";
}

constexpr std::string_view to_string(TwoWaySource s) { return s == TwoWaySource::l3 ? "l3" : "l4"; }

struct SeedReport {
    unsigned m = 0;
    unsigned t = 0;
    BigInt seed_number;
    BigInt seed_value; // seed_number * 2^m
    SeedStatus status = SeedStatus::exact;
    std::optional<SeedCase> case_label;
};

namespace detail {

inline void require_exponent(unsigned m) {
    if (m < 1)
        throw PreconditionViolation("exponent m must be >= 1");
}

/// Builds the quantities from already-computed 3^m, 2^m and d. The scanner
/// keeps the powers incrementally and goes through here too.
inline SeedQuantities quantities_from(unsigned m, const BigInt& pow3, const BigInt& pow2, const BigInt& d) {
    SeedQuantities q;
    q.m = m;
    q.d = d;
    q.l3 = exact_div(pow3 - 1, d, "(3^m - 1) / d");
    q.l4 = pow2 + 1;
    return q;
}

inline BigInt with_power_of_two(const BigInt& n, unsigned m) {
    BigInt r;
    mpz_mul_2exp(r.get_mpz_t(), n.get_mpz_t(), m);
    return r;
}

} // namespace detail

inline SeedQuantities seed_quantities(unsigned m) {
    detail::require_exponent(m);
    const BigInt pow3 = pow_ui(3, m);
    const BigInt pow2 = pow_ui(2, m);
    return detail::quantities_from(m, pow3, pow2, gcd(pow3 - pow2, pow2 - 1));
}

/// gcd(3^m - 1, 2^m - 1); equal to d for every m.
inline BigInt gcd_equivalent_form(unsigned m) {
    detail::require_exponent(m);
    return gcd(pow_ui(3, m) - 1, pow_ui(2, m) - 1);
}

inline TwoWaySource two_way_source(const SeedQuantities& q) {
    return q.l3 < q.l4 ? TwoWaySource::l3 : TwoWaySource::l4;
}

struct ThreeWayChoice {
    BigInt seed;
    SeedCase label;
};

/// Second smallest of [l3, l4, 2 l3, 2 l4] with multiplicity (stable on the
/// listed order), or the tabulated constants for m <= 3.
inline ThreeWayChoice three_way_choice(const SeedQuantities& q) {
    switch (q.m) {
    case 1: return {BigInt(3), SeedCase::small_m_special};
    case 2: return {BigInt(8), SeedCase::small_m_special};
    case 3: return {BigInt(18), SeedCase::small_m_special};
    default: break;
    }
    std::array<ThreeWayChoice, 4> candidates{{
        {q.l3, SeedCase::case3_l3},
        {q.l4, SeedCase::case2_l4},
        {2 * q.l3, SeedCase::case4_2l3},
        {2 * q.l4, SeedCase::case1_2l4},
    }};
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const ThreeWayChoice& a, const ThreeWayChoice& b) { return a.seed < b.seed; });
    return candidates[1];
}

inline SeedReport seed_two_ways(unsigned m) {
    const SeedQuantities q = seed_quantities(m);
    SeedReport r;
    r.m = m;
    r.t = 2;
    r.seed_number = two_way_source(q) == TwoWaySource::l3 ? q.l3 : q.l4;
    r.seed_value = detail::with_power_of_two(r.seed_number, m);
    r.status = SeedStatus::exact;
    return r;
}

inline SeedReport seed_three_ways(unsigned m) {
    const SeedQuantities q = seed_quantities(m);
    ThreeWayChoice choice = three_way_choice(q);
    SeedReport r;
    r.m = m;
    r.t = 3;
    r.seed_number = std::move(choice.seed);
    r.seed_value = detail::with_power_of_two(r.seed_number, m);
    r.status = SeedStatus::exact;
    r.case_label = choice.label;
    return r;
}

/// One term a*l3 + b*l4 of the general-t enumeration.
struct PairValue {
    unsigned long a = 0;
    unsigned long b = 0;
    BigInt value;
};

/// The `count` smallest values a*l3 + b*l4 over (a, b) != (0, 0), counted with
/// multiplicity and ordered by (value, a, b).
inline std::vector<PairValue> smallest_pair_values(const SeedQuantities& q, unsigned long count) {
    std::vector<PairValue> out;
    if (count == 0)
        return out;
    // (k, 0) and (0, k) for k <= count already give `count` values not above
    // count * min(l3, l4), so nothing larger can be selected.
    const BigInt bound = BigInt(count) * std::min(q.l3, q.l4);
    for (unsigned long a = 0; a <= count; ++a) {
        const BigInt base = BigInt(a) * q.l3;
        if (base > bound)
            break;
        for (unsigned long b = 0; b <= count; ++b) {
            if (a == 0 && b == 0)
                continue;
            BigInt v = base + BigInt(b) * q.l4;
            if (v > bound)
                break;
            out.push_back({a, b, std::move(v)});
        }
    }
    std::sort(out.begin(), out.end(), [](const PairValue& x, const PairValue& y) {
        if (x.value != y.value)
            return x.value < y.value;
        return x.a < y.a;
    });
    out.resize(count);
    return out;
}

/// The (t-1)-st smallest a*l3 + b*l4. Exact for t in {2, 3}, where it is
/// checked against the dedicated formulas; an upper bound otherwise (valid for
/// m large enough relative to t).
inline SeedReport conjectured_seed(unsigned m, unsigned t) {
    detail::require_exponent(m);
    if (t < 2)
        throw PreconditionViolation("number of ways t must be >= 2");
    const SeedQuantities q = seed_quantities(m);
    const auto pairs = smallest_pair_values(q, t - 1);

    SeedReport r;
    r.m = m;
    r.t = t;
    r.seed_number = pairs.back().value;
    r.seed_value = detail::with_power_of_two(r.seed_number, m);
    r.status = SeedStatus::conjectured_upper_bound;

    if (t == 2 || t == 3) {
        const SeedReport exact = t == 2 ? seed_two_ways(m) : seed_three_ways(m);
        if (exact.seed_number != r.seed_number)
            throw InternalConsistencyError("pair-value seed " + to_decimal(r.seed_number) +
                                           " disagrees with closed form " + to_decimal(exact.seed_number) +
                                           " at m=" + std::to_string(m) + ", t=" + std::to_string(t));
        r.status = SeedStatus::exact;
        r.case_label = exact.case_label;
    }
    return r;
}

/// True iff 5^m >= n0 * 2^m with n0 the pair-value seed, i.e. no base >= 5
/// can appear in a sum of n0 m-th powers equal to n0 * 2^m.
inline bool no_large_part_predicate(unsigned m, unsigned t) {
    const SeedReport r = conjectured_seed(m, t);
    return pow_ui(5, m) >= r.seed_value;
}

} // namespace taxiseed
