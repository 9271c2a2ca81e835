#pragma once

// Brute-force ground truth for generalized taxicab numbers.
//
// T(n, m, t) is the least v that is a sum of n positive m-th powers in at
// least t ways, ways being distinct multisets of bases. Nothing in here uses
// the closed forms from arith.hpp to produce a value; the only contact is the
// optional default search limit, which merely bounds the scan.
//
// Two independent counting routes are provided:
//   * RepresentationCounter: memoized recursion over nonincreasing bases,
//       r(v, n, b) = sum_{c <= b, c^m <= v - (n-1)} r(v - c^m, n - 1, c)
//   * detail::first_hits: a bottom-up table over (terms, value) that adds one
//     base at a time, used for the v = n, n+1, ... scans.
// Arithmetic is checked 64-bit; anything that would wrap throws
// ArithmeticOverflow.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "taxiseed/arith.hpp"
#include "taxiseed/errors.hpp"

namespace taxiseed {

inline constexpr std::uint64_t kUnboundedCount = std::numeric_limits<std::uint64_t>::max();
inline constexpr std::size_t kAllRepresentations = std::numeric_limits<std::size_t>::max();

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw ArithmeticOverflow("64-bit addition overflow");
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw ArithmeticOverflow("64-bit multiplication overflow");
    return r;
}

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exponent; ++i)
        r = checked_mul(r, base);
    return r;
}

/// Largest b >= 0 with b^m <= x.
inline std::uint64_t integer_root(std::uint64_t x, unsigned m) {
    if (m == 1 || x < 2)
        return x;
    auto fits = [&](std::uint64_t b) {
        std::uint64_t p = 1;
        for (unsigned i = 0; i < m; ++i)
            if (__builtin_mul_overflow(p, b, &p))
                return false;
        return p <= x;
    };
    auto b = static_cast<std::uint64_t>(std::pow(static_cast<long double>(x), 1.0L / m));
    while (b > 0 && !fits(b))
        --b;
    while (fits(b + 1))
        ++b;
    return b;
}

/// One way of writing `value` as a sum of m-th powers; bases nonincreasing.
struct Representation {
    unsigned m = 0;
    std::vector<std::uint64_t> bases;
    std::uint64_t value = 0;

    friend bool operator==(const Representation& a, const Representation& b) {
        return a.m == b.m && a.bases == b.bases;
    }

    bool contains(std::uint64_t base) const {
        return std::find(bases.begin(), bases.end(), base) != bases.end();
    }
};

/// Memoized multiset counter for a fixed exponent. Counts saturate at `cap`;
/// with the default cap a true overflow throws. The memo lives as long as the
/// counter, so one counter per query.
class RepresentationCounter {
public:
    explicit RepresentationCounter(unsigned m, std::uint64_t cap = kUnboundedCount) : m_(m), cap_(cap) {
        if (m < 1)
            throw PreconditionViolation("exponent m must be >= 1");
        if (cap < 1)
            throw PreconditionViolation("cap must be >= 1");
        powers_.push_back(0);
    }

    unsigned exponent() const { return m_; }
    std::uint64_t cap() const { return cap_; }

    std::uint64_t power(std::uint64_t b) {
        if (m_ == 1)
            return b;
        while (powers_.size() <= b)
            powers_.push_back(checked_pow(powers_.size(), m_));
        return powers_[b];
    }

    /// Multisets of n bases >= 1 whose m-th powers sum to v, capped.
    std::uint64_t count(std::uint64_t v, std::uint64_t n) { return count_bounded(v, n, integer_root(v, m_)); }

    /// As count(), restricted to bases <= max_base.
    std::uint64_t count_bounded(std::uint64_t v, std::uint64_t n, std::uint64_t max_base) {
        if (n == 0)
            return v == 0 ? 1 : 0;
        if (v < n)
            return 0;
        max_base = std::min(max_base, integer_root(v - (n - 1), m_));
        if (max_base == 0)
            return 0;
        const std::uint64_t top = power(max_base);
        if (n == 1)
            return top == v ? 1 : 0;
        if (!can_reach(top, n, v))
            return 0;

        const Key key{v, n, max_base};
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;

        std::uint64_t total = 0;
        for (std::uint64_t b = max_base; b >= 1; --b) {
            const std::uint64_t p = power(b);
            if (!can_reach(p, n, v))
                break;
            total = saturating_add(total, count_bounded(v - p, n - 1, b));
            if (total >= cap_)
                break;
        }
        memo_.emplace(key, total);
        return total;
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    struct Key {
        std::uint64_t v, n, max_base;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t h = k.v * 0x9E3779B97F4A7C15ull;
            h ^= k.n + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
            h ^= k.max_base + 0x94D049BB133111EBull + (h << 6) + (h >> 2);
            return static_cast<std::size_t>(h);
        }
    };

    // n copies of the largest allowed power must reach v.
    static bool can_reach(std::uint64_t p, std::uint64_t n, std::uint64_t v) {
        std::uint64_t r;
        if (__builtin_mul_overflow(p, n, &r))
            return true;
        return r >= v;
    }

    std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r;
        if (__builtin_add_overflow(a, b, &r)) {
            if (cap_ == kUnboundedCount)
                throw ArithmeticOverflow("representation count exceeds 64 bits");
            return cap_;
        }
        return std::min(r, cap_);
    }

    unsigned m_;
    std::uint64_t cap_;
    std::vector<std::uint64_t> powers_;
    std::unordered_map<Key, std::uint64_t, KeyHash> memo_;
};

namespace detail {

inline void require_positive(std::uint64_t x, const char* name) {
    if (x < 1)
        throw PreconditionViolation(std::string(name) + " must be >= 1");
}

inline void enumerate_into(RepresentationCounter& exists, std::uint64_t v, std::uint64_t n, std::uint64_t max_base,
                           std::vector<std::uint64_t>& prefix, std::vector<Representation>& out,
                           std::size_t max_count, std::uint64_t value) {
    if (out.size() >= max_count)
        return;
    if (n == 0) {
        if (v == 0)
            out.push_back({exists.exponent(), prefix, value});
        return;
    }
    if (v < n)
        return;
    max_base = std::min(max_base, integer_root(v - (n - 1), exists.exponent()));
    for (std::uint64_t b = max_base; b >= 1 && out.size() < max_count; --b) {
        const std::uint64_t p = exists.power(b);
        std::uint64_t reach;
        if (!__builtin_mul_overflow(p, n, &reach) && reach < v)
            break;
        if (exists.count_bounded(v - p, n - 1, b) == 0)
            continue;
        prefix.push_back(b);
        enumerate_into(exists, v - p, n - 1, b, prefix, out, max_count, value);
        prefix.pop_back();
    }
}

// Tables beyond this are refused rather than thrashing the machine.
inline constexpr std::uint64_t kMaxTableBytes = std::uint64_t{3} << 30;

template <class Count>
std::vector<std::optional<std::uint64_t>> first_hits_impl(unsigned m, std::uint64_t t, std::size_t max_terms,
                                                          std::uint64_t size) {
    using Wide = std::conditional_t<sizeof(Count) == 1, unsigned, std::uint64_t>;
    const Count cap = static_cast<Count>(t);
    std::vector<std::vector<Count>> layers(max_terms + 1, std::vector<Count>(size, 0));
    layers[0][0] = 1;
    for (std::uint64_t b = 1;; ++b) {
        std::uint64_t w;
        try {
            w = checked_pow(b, m);
        } catch (const ArithmeticOverflow&) {
            break;
        }
        if (w >= size)
            break;
        for (std::size_t k = 1; k <= max_terms; ++k) {
            Count* __restrict dst = layers[k].data();
            const Count* __restrict src = layers[k - 1].data();
            for (std::uint64_t v = w; v < size; ++v) {
                const Wide s = static_cast<Wide>(dst[v]) + static_cast<Wide>(src[v - w]);
                dst[v] = s > cap ? cap : static_cast<Count>(s);
            }
        }
    }
    std::vector<std::optional<std::uint64_t>> hits(max_terms + 1);
    for (std::size_t k = 1; k <= max_terms; ++k) {
        for (std::uint64_t v = k; v < size; ++v) {
            if (layers[k][v] >= cap) {
                hits[k] = v;
                break;
            }
        }
    }
    return hits;
}

/// For every k <= max_terms, the least v < size with at least t
/// representations as a sum of k m-th powers, if any.
inline std::vector<std::optional<std::uint64_t>> first_hits(unsigned m, std::uint64_t t, std::size_t max_terms,
                                                            std::uint64_t size) {
    const std::uint64_t width = t <= 0xFF ? 1 : 4;
    if (t > 0xFFFFFFFFull)
        throw PreconditionViolation("t too large for the search table");
    std::uint64_t bytes;
    if (__builtin_mul_overflow(static_cast<std::uint64_t>(max_terms + 1), size, &bytes) ||
        __builtin_mul_overflow(bytes, width, &bytes) || bytes > kMaxTableBytes)
        throw PreconditionViolation("search table of " + std::to_string(max_terms + 1) + " x " +
                                    std::to_string(size) + " entries exceeds the memory budget");
    if (width == 1)
        return first_hits_impl<std::uint8_t>(m, t, max_terms, size);
    return first_hits_impl<std::uint32_t>(m, t, max_terms, size);
}

inline constexpr std::uint64_t kInitialScanSize = 4096;

inline std::uint64_t grow(std::uint64_t size, std::uint64_t limit) {
    return size > limit / 2 ? limit : std::min(limit, size * 2);
}

/// T(n, m, t) if it is below `limit`. Doubles the table until found or the
/// limit is reached.
inline std::optional<std::uint64_t> taxicab_value(std::uint64_t n, unsigned m, std::uint64_t t,
                                                  std::uint64_t limit) {
    std::uint64_t size = std::min(limit, std::max(kInitialScanSize, n + 1));
    for (;;) {
        const auto hits = first_hits(m, t, n, size);
        if (hits[n])
            return hits[n];
        if (size == limit)
            return std::nullopt;
        size = grow(size, limit);
    }
}

struct FirstExisting {
    std::uint64_t n = 0;
    std::uint64_t value = 0;
};

/// Least n <= n_limit with T(n, m, t) < v_limit, and that T.
inline FirstExisting first_existing(unsigned m, std::uint64_t t, std::uint64_t n_limit, std::uint64_t v_limit) {
    std::optional<FirstExisting> best;
    std::uint64_t top = n_limit;
    std::uint64_t size = std::min(v_limit, std::max(kInitialScanSize, n_limit + 1));
    while (top > 0) {
        const auto hits = first_hits(m, t, top, size);
        for (std::uint64_t k = 1; k <= top; ++k) {
            if (hits[k]) {
                best = FirstExisting{k, *hits[k]};
                top = k - 1;
                break;
            }
        }
        if (size == v_limit)
            break;
        size = grow(size, v_limit);
    }
    if (!best)
        throw NotFoundWithinLimit("no n <= " + std::to_string(n_limit) + " has T(n, " + std::to_string(m) + ", " +
                                      std::to_string(t) + ") below " + std::to_string(v_limit),
                                  v_limit);
    return *best;
}

} // namespace detail

inline std::uint64_t count_representations(std::uint64_t v, std::uint64_t n, unsigned m,
                                           std::uint64_t cap = kUnboundedCount) {
    detail::require_positive(v, "v");
    detail::require_positive(n, "n");
    RepresentationCounter counter(m, cap);
    return counter.count(v, n);
}

/// Up to max_count representations of v as n m-th powers, in lexicographically
/// decreasing order of bases.
inline std::vector<Representation> enumerate_representations(std::uint64_t v, std::uint64_t n, unsigned m,
                                                             std::size_t max_count = kAllRepresentations) {
    detail::require_positive(v, "v");
    detail::require_positive(n, "n");
    RepresentationCounter exists(m, 1);
    std::vector<Representation> out;
    std::vector<std::uint64_t> prefix;
    prefix.reserve(n);
    detail::enumerate_into(exists, v, n, integer_root(v, m), prefix, out, max_count, v);
    return out;
}

enum class RepsPolicy { first_t, all };

struct TaxicabResult {
    std::uint64_t n = 0;
    unsigned m = 0;
    std::uint64_t t = 0;
    std::uint64_t value = 0;
    std::vector<Representation> representations;
    std::uint64_t search_ceiling = 0; // exclusive bound actually scanned
};

/// Search bound that is guaranteed to contain T(n, m, t) when n is at least
/// the pair-value seed n0: the padded construction gives T(n) <= n0 2^m + n - n0.
inline std::optional<std::uint64_t> default_search_limit(std::uint64_t n, unsigned m, std::uint64_t t) {
    if (t < 2 || t > std::numeric_limits<unsigned>::max())
        return std::nullopt;
    const SeedReport seed = conjectured_seed(m, static_cast<unsigned>(t));
    if (BigInt(std::to_string(n)) < seed.seed_number)
        return std::nullopt;
    const BigInt bound = seed.seed_value + (BigInt(std::to_string(n)) - seed.seed_number) + 1;
    if (!bound.fits_ulong_p())
        return std::nullopt;
    return static_cast<std::uint64_t>(bound.get_ui());
}

inline TaxicabResult taxicab(std::uint64_t n, unsigned m, std::uint64_t t, std::optional<std::uint64_t> limit = {},
                             RepsPolicy policy = RepsPolicy::first_t) {
    detail::require_positive(n, "n");
    detail::require_positive(m, "m");
    detail::require_positive(t, "t");
    if (!limit)
        limit = default_search_limit(n, m, t);
    if (!limit)
        throw PreconditionViolation("a search limit is required when n is below the constructive seed");
    if (*limit <= n)
        throw PreconditionViolation("search limit must exceed n");

    const auto value = detail::taxicab_value(n, m, t, *limit);
    if (!value)
        throw NotFoundWithinLimit("T(" + std::to_string(n) + ", " + std::to_string(m) + ", " + std::to_string(t) +
                                      ") not found below " + std::to_string(*limit),
                                  *limit);

    TaxicabResult r;
    r.n = n;
    r.m = m;
    r.t = t;
    r.value = *value;
    r.search_ceiling = *value + 1;
    const std::size_t max_count = policy == RepsPolicy::all ? kAllRepresentations : static_cast<std::size_t>(t);
    r.representations = enumerate_representations(*value, n, m, max_count);
    if (r.representations.size() < t)
        throw InternalConsistencyError("table found " + std::to_string(t) + " ways at " + std::to_string(*value) +
                                       " but enumeration found " + std::to_string(r.representations.size()));
    return r;
}

/// Least n <= n_limit for which T(n, m, t) exists below v_limit.
inline std::uint64_t min_terms(unsigned m, std::uint64_t t, std::uint64_t n_limit, std::uint64_t v_limit) {
    detail::require_positive(m, "m");
    detail::require_positive(t, "t");
    detail::require_positive(n_limit, "n_limit");
    detail::require_positive(v_limit, "v_limit");
    return detail::first_existing(m, t, n_limit, v_limit).n;
}

struct DropReport {
    unsigned m = 0;
    std::uint64_t t = 0;
    std::uint64_t n0 = 0;
    std::vector<std::uint64_t> absent_below; // n < n0 with no T below v_limit
    std::vector<std::pair<std::uint64_t, std::uint64_t>> taxicab_sequence;
    std::set<std::uint64_t> drops;
    std::uint64_t empirical_seed = 0;
    std::uint64_t seed_value = 0;
    std::uint64_t stabilization_window = 0;
    bool window_too_small = false;

    std::uint64_t value_at(std::uint64_t n) const {
        return taxicab_sequence.at(n - taxicab_sequence.front().first).second;
    }
};

/// Computes T(n, m, t) for n0 <= n <= n_max + window, the drop set inside
/// that range, and the empirical seed max(D) + 1 (n0 if D is empty).
///
/// n0 is the first n whose T lies below v_limit. Later values need no limit of
/// their own since T(n + 1) <= T(n) + 1. With workers > 1 each n is an
/// independent query; with one worker a single shared table answers all n.
inline DropReport drops(unsigned m, std::uint64_t t, std::uint64_t n_max, std::uint64_t v_limit,
                        std::uint64_t window = 3, unsigned workers = 1) {
    detail::require_positive(m, "m");
    detail::require_positive(t, "t");
    detail::require_positive(window, "window");
    const auto first = detail::first_existing(m, t, n_max, v_limit);
    if (n_max <= first.n)
        throw PreconditionViolation("n_max must exceed n0 = " + std::to_string(first.n));

    DropReport r;
    r.m = m;
    r.t = t;
    r.n0 = first.n;
    for (std::uint64_t n = 1; n < first.n; ++n)
        r.absent_below.push_back(n);

    const std::uint64_t n_top = checked_add(n_max, window);
    const std::uint64_t limit = checked_add(checked_add(first.value, n_top - first.n), 1);
    const std::size_t count = n_top - first.n + 1;
    std::vector<std::optional<std::uint64_t>> values(count);

    if (workers <= 1) {
        const auto hits = detail::first_hits(m, t, n_top, limit);
        for (std::size_t i = 0; i < count; ++i)
            values[i] = hits[first.n + i];
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> failures(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = next++; i < count; i = next++)
                            values[i] = detail::taxicab_value(first.n + i, m, t, limit);
                    } catch (...) {
                        failures[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& f : failures)
            if (f)
                std::rethrow_exception(f);
    }

    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t n = first.n + i;
        if (!values[i])
            throw InternalConsistencyError("T(" + std::to_string(n) + ") missing although T(n0) exists");
        if (*values[i] < n)
            throw InternalConsistencyError("T(n) < n at n = " + std::to_string(n));
        r.taxicab_sequence.emplace_back(n, *values[i]);
    }
    for (std::size_t i = 0; i + 1 < count; ++i) {
        const auto [n, here] = r.taxicab_sequence[i];
        const auto next_value = r.taxicab_sequence[i + 1].second;
        if (next_value > here + 1)
            throw InternalConsistencyError("T(n + 1) > T(n) + 1 at n = " + std::to_string(n));
        if (next_value < here + 1)
            r.drops.insert(n);
    }

    r.empirical_seed = r.drops.empty() ? r.n0 : *r.drops.rbegin() + 1;
    r.seed_value = r.value_at(r.empirical_seed);
    r.stabilization_window = n_top - r.empirical_seed;
    r.window_too_small = n_max < r.empirical_seed + window;
    return r;
}

} // namespace taxiseed
