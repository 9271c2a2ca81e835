#pragma once

// Explicit equal-sum constructions and their verification.
//
// A witness is a set of t sums of the same number of m-th powers, all with the
// same value and pairwise distinct as multisets; it certifies
// T(length, m, t) <= common_value. Lengths grow like 2^m, so every sum is kept
// run-length encoded as (base, multiplicity) pairs with bignum multiplicities.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taxiseed/arith.hpp"
#include "taxiseed/errors.hpp"

namespace taxiseed {

struct Term {
    std::uint64_t base = 0;
    BigInt count;

    friend bool operator==(const Term& a, const Term& b) { return a.base == b.base && a.count == b.count; }
};

/// Sum of m-th powers in run-length form. Canonical form: bases strictly
/// decreasing, every count positive.
using RunLengthSum = std::vector<Term>;

inline RunLengthSum canonical(RunLengthSum s) {
    std::sort(s.begin(), s.end(), [](const Term& a, const Term& b) { return a.base > b.base; });
    RunLengthSum out;
    for (auto& term : s) {
        if (!out.empty() && out.back().base == term.base)
            out.back().count += term.count;
        else
            out.push_back(std::move(term));
    }
    std::erase_if(out, [](const Term& term) { return term.count == 0; });
    return out;
}

inline BigInt term_count(const RunLengthSum& s) {
    BigInt n = 0;
    for (const auto& term : s)
        n += term.count;
    return n;
}

inline BigInt power_sum(const RunLengthSum& s, unsigned m) {
    BigInt v = 0;
    for (const auto& term : s)
        v += term.count * pow_ui(term.base, m);
    return v;
}

enum class WitnessKind { lemma21, eq1, eq2, eq3, eq4, eq6, eq7, thm51 };

constexpr std::string_view to_string(WitnessKind k) {
    switch (k) {
    case WitnessKind::lemma21: return "lemma21";
    case WitnessKind::eq1: return "eq1";
    case WitnessKind::eq2: return "eq2";
    case WitnessKind::eq3: return "eq3";
    case WitnessKind::eq4: return "eq4";
    case WitnessKind::eq6: return "eq6";
    case WitnessKind::eq7: return "eq7";
    case WitnessKind::thm51: return "thm51";
    }
    return "?";
}

inline std::optional<WitnessKind> parse_witness_kind(std::string_view s) {
    for (auto k : {WitnessKind::lemma21, WitnessKind::eq1, WitnessKind::eq2, WitnessKind::eq3, WitnessKind::eq4,
                   WitnessKind::eq6, WitnessKind::eq7, WitnessKind::thm51})
        if (to_string(k) == s)
            return k;
    return std::nullopt;
}

struct WitnessSet {
    unsigned m = 0;
    unsigned t = 0;
    BigInt length;
    std::vector<RunLengthSum> sums;
    BigInt common_value;
    WitnessKind kind = WitnessKind::lemma21;
};

struct VerificationReport {
    bool ok = true;
    std::string detail;
    std::optional<std::size_t> sum_index; // first offending sum, if localised

    explicit operator bool() const { return ok; }
};

/// Recomputes every sum exactly. Failures are reported, never thrown.
inline VerificationReport verify_witness(const WitnessSet& w) {
    auto fail = [](std::string what, std::optional<std::size_t> at = std::nullopt) {
        return VerificationReport{false, std::move(what), at};
    };
    if (w.sums.size() != w.t)
        return fail("expected " + std::to_string(w.t) + " sums, found " + std::to_string(w.sums.size()));

    std::vector<RunLengthSum> forms;
    for (std::size_t i = 0; i < w.sums.size(); ++i) {
        const auto& s = w.sums[i];
        for (const auto& term : s) {
            if (term.base < 1)
                return fail("sum " + std::to_string(i) + " has base 0", i);
            if (term.count < 0)
                return fail("sum " + std::to_string(i) + " has a negative multiplicity", i);
        }
        const BigInt n = term_count(s);
        if (n != w.length)
            return fail("sum " + std::to_string(i) + " has " + to_decimal(n) + " terms, expected " +
                            to_decimal(w.length),
                        i);
        const BigInt v = power_sum(s, w.m);
        if (v != w.common_value)
            return fail("sum " + std::to_string(i) + " evaluates to " + to_decimal(v) + ", expected " +
                            to_decimal(w.common_value),
                        i);
        auto form = canonical(s);
        for (std::size_t j = 0; j < forms.size(); ++j)
            if (forms[j] == form)
                return fail("sums " + std::to_string(j) + " and " + std::to_string(i) + " are the same multiset", i);
        forms.push_back(std::move(form));
    }
    return {};
}

/// Adds a single 1 to every sum: length + 1, value + 1.
inline WitnessSet extend_with_one(WitnessSet w) {
    for (auto& s : w.sums) {
        s.push_back({1, BigInt(1)});
        s = canonical(std::move(s));
    }
    w.length += 1;
    w.common_value += 1;
    return w;
}

namespace detail {

inline WitnessSet checked(WitnessSet w) {
    for (auto& s : w.sums)
        s = canonical(std::move(s));
    if (auto report = verify_witness(w); !report)
        throw InternalConsistencyError(std::string(to_string(w.kind)) + " construction failed: " + report.detail);
    return w;
}

/// Run-length pieces shared by the equation generators.
struct Blocks {
    unsigned m;
    SeedQuantities q;
    BigInt threes; // (2^m - 1) / d
    BigInt ones;   // (3^m - 2^m) / d
    BigInt pow2;

    explicit Blocks(unsigned m_) : m(m_), q(seed_quantities(m_)), pow2(pow_ui(2, m_)) {
        threes = exact_div(pow2 - 1, q.d, "(2^m - 1) / d");
        ones = exact_div(pow_ui(3, m) - pow2, q.d, "(3^m - 2^m) / d");
    }

    // `copies` of the 3s-and-1s sum of length l3
    RunLengthSum three_block(const BigInt& copies) const { return {{3, copies * threes}, {1, copies * ones}}; }
    // `copies` of the 4-and-1s sum of length l4
    RunLengthSum four_block(const BigInt& copies) const { return {{4, copies}, {1, copies * pow2}}; }

    static RunLengthSum twos(const BigInt& count) { return {{2, count}}; }

    static RunLengthSum join(RunLengthSum a, const RunLengthSum& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }

    WitnessSet make(WitnessKind kind, const BigInt& length, std::vector<RunLengthSum> sums) const {
        WitnessSet w;
        w.m = m;
        w.t = static_cast<unsigned>(sums.size());
        w.length = length;
        w.common_value = length * pow2;
        w.kind = kind;
        w.sums = std::move(sums);
        return w;
    }
};

} // namespace detail

/// t sums of equal length and value: n copies of t^m, and for each i < t a mix
/// of (t-i)^m and (t+i)^m balanced through lcm(t^m - (t-i)^m, (t+i)^m - t^m).
inline WitnessSet lemma21_construction(unsigned m, unsigned t) {
    if (m < 1 || t < 1)
        throw PreconditionViolation("lemma21 needs m >= 1 and t >= 1");
    const BigInt top = pow_ui(t, m);

    struct Mix {
        BigInt alpha, beta, gamma;
    };
    std::vector<Mix> mixes;
    BigInt n = 1;
    for (unsigned i = 1; i < t; ++i) {
        const BigInt below = top - pow_ui(t - i, m);
        const BigInt above = pow_ui(t + i, m) - top;
        const BigInt l = lcm(below, above);
        Mix mix;
        mix.alpha = exact_div(l, below, "l_i / a_i");
        mix.beta = exact_div(l, above, "l_i / b_i");
        mix.gamma = mix.alpha + mix.beta;
        n = lcm(n, mix.gamma);
        mixes.push_back(std::move(mix));
    }

    WitnessSet w;
    w.m = m;
    w.t = t;
    w.kind = WitnessKind::lemma21;
    w.length = n;
    w.common_value = n * top;
    w.sums.push_back({{t, n}});
    for (unsigned i = 1; i < t; ++i) {
        const auto& mix = mixes[i - 1];
        const BigInt delta = exact_div(n, mix.gamma, "n / gamma_i");
        w.sums.push_back({{t + i, mix.beta * delta}, {t - i, mix.alpha * delta}});
    }
    return detail::checked(std::move(w));
}

/// The literal multisets of the named identity at exponent m.
inline WitnessSet equation_witness(WitnessKind kind, unsigned m) {
    const detail::Blocks k(m);
    const auto& q = k.q;
    using B = detail::Blocks;
    switch (kind) {
    case WitnessKind::eq1:
        return detail::checked(k.make(kind, q.l4, {k.four_block(1), B::twos(q.l4)}));
    case WitnessKind::eq2:
        return detail::checked(k.make(kind, q.l3, {k.three_block(1), B::twos(q.l3)}));
    case WitnessKind::eq3: {
        const BigInt len = 2 * q.l4;
        return detail::checked(
            k.make(kind, len, {k.four_block(2), B::join(k.four_block(1), B::twos(q.l4)), B::twos(len)}));
    }
    case WitnessKind::eq4:
        if (q.l3 > q.l4)
            throw PreconditionViolation("eq4 needs l3 <= l4 (padding l4 - l3 would be negative) at m = " +
                                        std::to_string(m));
        return detail::checked(
            k.make(kind, q.l4, {k.four_block(1), B::join(k.three_block(1), B::twos(q.l4 - q.l3)), B::twos(q.l4)}));
    case WitnessKind::eq6:
        if (q.l4 > q.l3)
            throw PreconditionViolation("eq6 needs l4 <= l3 (padding l3 - l4 would be negative) at m = " +
                                        std::to_string(m));
        return detail::checked(
            k.make(kind, q.l3, {B::join(k.four_block(1), B::twos(q.l3 - q.l4)), k.three_block(1), B::twos(q.l3)}));
    case WitnessKind::eq7: {
        const BigInt len = 2 * q.l3;
        return detail::checked(
            k.make(kind, len, {k.three_block(2), B::join(k.three_block(1), B::twos(q.l3)), B::twos(len)}));
    }
    case WitnessKind::lemma21:
    case WitnessKind::thm51:
        break;
    }
    throw PreconditionViolation(std::string(to_string(kind)) + " is not a fixed identity; use its construction");
}

/// All-2s sum of length n0 plus, for each of the t-1 smallest pairs (a, b),
/// a 3s-and-1s blocks and b 4-and-1s blocks padded with 2s up to n0 terms.
inline WitnessSet thm51_construction(unsigned m, unsigned t) {
    const SeedReport seed = conjectured_seed(m, t);
    const detail::Blocks k(m);
    const auto pairs = smallest_pair_values(k.q, t - 1);

    std::vector<RunLengthSum> sums{detail::Blocks::twos(seed.seed_number)};
    for (const auto& p : pairs) {
        RunLengthSum s = detail::Blocks::join(k.three_block(p.a), k.four_block(p.b));
        s = detail::Blocks::join(std::move(s), detail::Blocks::twos(seed.seed_number - p.value));
        sums.push_back(std::move(s));
    }
    return detail::checked(k.make(WitnessKind::thm51, seed.seed_number, std::move(sums)));
}

} // namespace taxiseed
