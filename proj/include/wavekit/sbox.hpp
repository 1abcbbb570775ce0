#pragma once

// S-box representation and statistics: difference distribution tables,
// linear approximation tables, differential uniformity (plain and weak),
// derivative images, image sum sets, and the subspace non-invariance test
// used by the primitivity conditions.

#include "wavekit/gf2.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wavekit {

// ---------------------------------------------------------------------------
// SBoxTable
// ---------------------------------------------------------------------------

// A lookup table for an s-bit to t-bit function (s <= t in all shipped uses).
struct SBoxTable {
    int in_bits = 0;                  // s
    int out_bits = 0;                 // t
    std::vector<std::uint32_t> table; // 2^s entries, each < 2^t

    std::uint32_t operator()(std::uint32_t x) const { return table[x]; }
    std::uint32_t domain_size() const { return std::uint32_t{1} << in_bits; }

    bool maps_zero_to_zero() const { return table[0] == 0; }

    // Text format: header line `sbox s=<s> t=<t>`, then 2^s whitespace-
    // separated hex outputs; '#' starts a comment.
    static SBoxTable from_text(std::string_view text);
    std::string to_text() const;

    friend bool operator==(const SBoxTable& a, const SBoxTable& b) = default;
};

// ---------------------------------------------------------------------------
// DDT / LAT
// ---------------------------------------------------------------------------

struct DDTable {
    int s = 0, t = 0;
    std::vector<int> counts;          // 2^s rows x 2^t cols, row-major

    int at(std::uint32_t u, std::uint32_t v) const {
        return counts[(static_cast<size_t>(u) << t) | v];
    }
};

struct LATable {
    int s = 0, t = 0;
    std::vector<int> corr;            // c(a,b) = #{x : a.x = b.f(x)} - 2^{s-1}

    int at(std::uint32_t a, std::uint32_t b) const {
        return corr[(static_cast<size_t>(a) << t) | b];
    }
};

// Exact fraction num/den in lowest terms (den > 0). Enough arithmetic for the
// bias and probability bookkeeping done here; never converted to float.
struct Rational {
    long long num = 0;
    long long den = 1;

    friend bool operator==(const Rational& a, const Rational& b) = default;
};

Rational make_rational(long long num, long long den);

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

// entries[u][v] = #{x : f(x) ^ f(x^u) = v}.
DDTable ddt(const SBoxTable& f);

// max over u != 0 of the DDT entries (>= 2 for any function).
int differential_uniformity(const SBoxTable& f);

bool is_apn(const SBoxTable& f);

// |{f(x) ^ f(x^u) : x}|; equals 1 when u = 0.
int derivative_image_size(const SBoxTable& f, std::uint32_t u);

// Weak delta-differential uniformity: |Im f^_u| > 2^{s-1}/delta for all u != 0
// (strict inequality).
bool is_weakly_delta_du(const SBoxTable& f, int delta);

// {f(x) ^ f(y) : x, y}, returned as a sorted list of t-bit values. Always
// contains 0.
std::vector<std::uint32_t> image_sum_set(const SBoxTable& f);

// The t-bit values missing from image_sum_set(f), sorted.
std::vector<std::uint32_t> missing_sum_vectors(const SBoxTable& f);

bool is_injective(const SBoxTable& f);

// c(a,b) correlation table.
LATable lat(const SBoxTable& f);

// max over a != 0, b != 0 of |c(a,b)| / 2^s. Approximations with a = 0 or
// b = 0 never describe an active S-box inside a trail, so they are excluded;
// for expanding injective tables the a = 0 column is genuinely biased, and it
// stays inspectable through lat().
Rational max_bias(const SBoxTable& f);

// ---------------------------------------------------------------------------
// Non-invariance
// ---------------------------------------------------------------------------

struct NonInvarianceResult {
    bool non_invariant = false;
    // When non_invariant is false: a violating pair, i.e. proper subspaces
    // with V' * f + kernel_brick equal (as a point set) to W' of dim >= s-delta.
    std::optional<Subspace> violating_v;
    std::optional<Subspace> violating_w;
};

// Literal quantified condition: for every pair of proper subspaces V' < (F2)^s
// and W' < (F2)^t with {f(v) ^ k : v in V', k in kernel_brick} == W' as point
// sets, dim(W') < s - delta must hold. Returns the truth of that statement.
//
// Requires f injective with f(0) = 0, kernel_brick of ambient width t, and
// 0 <= delta < s. Guards: s <= 6 and t <= 7.
NonInvarianceResult is_delta_non_invariant(const SBoxTable& f,
                                           const Subspace& kernel_brick,
                                           int delta);

} // namespace wavekit
