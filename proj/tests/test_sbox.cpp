#include "doctest.h"

#include "wavekit/errors.hpp"
#include "wavekit/sbox.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

using namespace wavekit;

namespace {

// The bundled 4-to-5-bit S-box of the 64-bit instance.
SBoxTable instance_sbox() {
    return SBoxTable{4, 5,
                     {0x00, 0x0B, 0x1B, 0x08, 0x1D, 0x17, 0x12, 0x04, 0x0D, 0x14, 0x01,
                      0x1E, 0x18, 0x02, 0x0E, 0x07}};
}

// 3-bit cube permutation (x^3 in F_8 written as a table); APN and bijective.
SBoxTable cube_sbox() { return SBoxTable{3, 3, {0, 1, 3, 4, 5, 6, 7, 2}}; }

// Small expanding non-linear injection used by the toy specs.
SBoxTable toy_sbox() { return SBoxTable{2, 3, {0, 3, 5, 1}}; }

SBoxTable identity_sbox(int s) {
    SBoxTable f{s, s, {}};
    for (std::uint32_t x = 0; x < (1u << s); ++x)
        f.table.push_back(x);
    return f;
}

DDTable brute_force_ddt(const SBoxTable& f) {
    DDTable d;
    d.s = f.in_bits;
    d.t = f.out_bits;
    d.counts.assign(size_t{1} << (f.in_bits + f.out_bits), 0);
    for (std::uint32_t u = 0; u < f.domain_size(); ++u)
        for (std::uint32_t x = 0; x < f.domain_size(); ++x)
            ++d.counts[(static_cast<size_t>(u) << f.out_bits) | (f(x) ^ f(x ^ u))];
    return d;
}

} // namespace

TEST_CASE("sbox text round-trip and parse errors") {
    const SBoxTable f = instance_sbox();
    const SBoxTable back = SBoxTable::from_text(f.to_text());
    CHECK(back == f);

    const SBoxTable parsed = SBoxTable::from_text(
        "# comment\nsbox s=2 t=3\n0 3   # inline\n5 1\n");
    CHECK(parsed == toy_sbox());

    CHECK_THROWS_AS(SBoxTable::from_text("sbox s=2 t=3\n0 3 5\n"), data_format_error);
    CHECK_THROWS_AS(SBoxTable::from_text("sbox s=2 t=3\n0 3 5 1 7\n"), data_format_error);
    CHECK_THROWS_AS(SBoxTable::from_text("0 3 5 1\n"), data_format_error);
    CHECK_THROWS_AS(SBoxTable::from_text("sbox s=2 t=3\n0 3 5 9\n"), data_format_error);
    CHECK_THROWS_AS(SBoxTable::from_text("sbox s=0 t=3\n"), data_format_error);
}

TEST_CASE("ddt matches brute force and has the row-sum property") {
    std::mt19937_64 rng(99);
    std::vector<SBoxTable> samples = {instance_sbox(), cube_sbox(), toy_sbox()};
    for (int trial = 0; trial < 5; ++trial) {
        SBoxTable f{3, 4, {}};
        std::vector<std::uint32_t> pool(16);
        for (std::uint32_t i = 0; i < 16; ++i)
            pool[i] = i;
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(8);
        if (std::find(pool.begin(), pool.end(), 0u) == pool.end())
            pool[0] = 0;
        f.table = pool;
        samples.push_back(f);
    }
    for (const SBoxTable& f : samples) {
        const DDTable d = ddt(f);
        const DDTable ref = brute_force_ddt(f);
        REQUIRE(d.counts == ref.counts);
        for (std::uint32_t u = 0; u < f.domain_size(); ++u) {
            int sum = 0;
            for (std::uint32_t v = 0; v < (1u << f.out_bits); ++v) {
                sum += d.at(u, v);
                CHECK(d.at(u, v) % 2 == 0);   // pairs (x, x^u) come in twos
            }
            CHECK(sum == static_cast<int>(f.domain_size()));
        }
        CHECK(d.at(0, 0) == static_cast<int>(f.domain_size()));
    }
}

TEST_CASE("instance sbox differential profile") {
    const SBoxTable f = instance_sbox();
    CHECK(is_injective(f));
    CHECK(f.maps_zero_to_zero());
    CHECK(differential_uniformity(f) == 2);
    CHECK(is_apn(f));

    // One full frozen DDT row, independently derived: inputs differing by 1
    // produce exactly these output differences.
    const DDTable d = ddt(f);
    const std::set<std::uint32_t> expect = {0x09, 0x0A, 0x0B, 0x13, 0x16, 0x19, 0x1A, 0x1F};
    for (std::uint32_t v = 0; v < 32; ++v)
        CHECK(d.at(1, v) == (expect.count(v) ? 2 : 0));

    for (std::uint32_t u = 1; u < 16; ++u)
        CHECK(derivative_image_size(f, u) == 8);
    CHECK(derivative_image_size(f, 0) == 1);
}

TEST_CASE("instance sbox sum set misses exactly 0x11") {
    const SBoxTable f = instance_sbox();
    const auto sums = image_sum_set(f);
    CHECK(sums.size() == 31);
    CHECK(std::binary_search(sums.begin(), sums.end(), 0u));
    const auto missing = missing_sum_vectors(f);
    REQUIRE(missing.size() == 1);
    CHECK(missing[0] == 0x11);

    // Brute-force cross-check of the set definition.
    std::set<std::uint32_t> ref;
    for (std::uint32_t x = 0; x < 16; ++x)
        for (std::uint32_t y = 0; y < 16; ++y)
            ref.insert(f(x) ^ f(y));
    CHECK(std::vector<std::uint32_t>(ref.begin(), ref.end()) == sums);
}

TEST_CASE("weak differential uniformity thresholds") {
    const SBoxTable f = instance_sbox();
    // Derivative images have 8 elements; 8 > 2^{s-1}/2 = 4 but not > 8.
    CHECK(is_weakly_delta_du(f, 2));
    CHECK_FALSE(is_weakly_delta_du(f, 1));
    CHECK(is_weakly_delta_du(cube_sbox(), 2));
}

TEST_CASE("lat matches brute force and the instance bias is 1/4") {
    const SBoxTable f = instance_sbox();
    const LATable l = lat(f);
    for (std::uint32_t a = 0; a < 16; ++a)
        for (std::uint32_t b = 0; b < 32; ++b) {
            int count = 0;
            for (std::uint32_t x = 0; x < 16; ++x)
                if (__builtin_parity(a & x) == __builtin_parity(b & f(x)))
                    ++count;
            REQUIRE(l.at(a, b) == count - 8);
        }
    CHECK(l.at(0, 0) == 8);
    CHECK(max_bias(f) == make_rational(1, 4));

    // The a = 0 column is genuinely biased for an expanding injection (half
    // the masks never see a balanced image) and is excluded from max_bias,
    // but stays visible in the raw table.
    int worst_a0 = 0;
    for (std::uint32_t b = 1; b < 32; ++b)
        worst_a0 = std::max(worst_a0, std::abs(l.at(0, b)));
    CHECK(worst_a0 > 4);   // strictly worse than the 1/4 bias reported
}

TEST_CASE("rational normalization") {
    CHECK(make_rational(4, 8) == make_rational(1, 2));
    CHECK(make_rational(0, 7) == make_rational(0, 1));
    CHECK(make_rational(-2, 4).num == -1);
    CHECK(make_rational(-2, 4).den == 2);
    CHECK(make_rational(2, -4) == make_rational(-1, 2));
    CHECK(make_rational(6, 3) == make_rational(2, 1));
}

TEST_CASE("toy sboxes: small profiles used across the suite") {
    const SBoxTable g = toy_sbox();
    CHECK(is_injective(g));
    CHECK(g.maps_zero_to_zero());
    CHECK(differential_uniformity(g) == 2);
    // Non-linear: the images of 1, 2, 3 do not satisfy f(3) = f(1) ^ f(2).
    CHECK((g(1) ^ g(2)) != g(3));

    const SBoxTable c = cube_sbox();
    CHECK(is_injective(c));
    CHECK(is_apn(c));
    CHECK(c.maps_zero_to_zero());
}

TEST_CASE("non-invariance: identity map literal semantics") {
    // With the zero kernel, pairs (V', W') satisfying the point-set equation
    // for the identity are exactly V' = W', so the condition reduces to
    // dim(V') < s - delta for all proper subspaces.
    const SBoxTable id = identity_sbox(3);
    const Subspace zero_kernel = Subspace::zero(3);
    CHECK(is_delta_non_invariant(id, zero_kernel, 0).non_invariant);
    const NonInvarianceResult r1 = is_delta_non_invariant(id, zero_kernel, 1);
    CHECK_FALSE(r1.non_invariant);
    REQUIRE(r1.violating_v.has_value());
    CHECK(r1.violating_v->dim() == 2);
    CHECK(*r1.violating_v == *r1.violating_w);
}

TEST_CASE("non-invariance of the instance sbox w.r.t. its kernel brick") {
    const SBoxTable f = instance_sbox();
    const Subspace kernel_brick = Subspace::span_of(5, {0x11});

    CHECK(is_delta_non_invariant(f, kernel_brick, 0).non_invariant);

    const NonInvarianceResult r = is_delta_non_invariant(f, kernel_brick, 1);
    CHECK_FALSE(r.non_invariant);
    REQUIRE(r.violating_v.has_value());
    REQUIRE(r.violating_w.has_value());
    // The returned pair really violates: the sum point-set equals W' and its
    // dimension reaches s - delta.
    std::set<std::uint64_t> sums;
    for (std::uint64_t v : r.violating_v->elements())
        for (std::uint64_t k : kernel_brick.elements())
            sums.insert(f(static_cast<std::uint32_t>(v)) ^ k);
    const auto welems = r.violating_w->elements();
    CHECK(sums == std::set<std::uint64_t>(welems.begin(), welems.end()));
    CHECK(r.violating_w->dim() >= 4 - 1);
    CHECK(r.violating_v->dim() < 4);
    CHECK(r.violating_w->dim() < 5);

    // Independently frozen violating pair: V' = <0x1, 0xC> maps onto a
    // 3-dimensional W' once the kernel brick is added.
    const Subspace vprime = Subspace::span_of(4, {0x1, 0xC});
    std::set<std::uint64_t> frozen_sums;
    for (std::uint64_t v : vprime.elements())
        for (std::uint64_t k : kernel_brick.elements())
            frozen_sums.insert(f(static_cast<std::uint32_t>(v)) ^ k);
    const Subspace span = Subspace::span_of(
        5, std::vector<std::uint64_t>(frozen_sums.begin(), frozen_sums.end()));
    CHECK(span.dim() == 3);
    CHECK(frozen_sums.size() == span.size());
}

TEST_CASE("non-invariance of the cube sbox with trivial kernel") {
    // This is the property that lets the 6-bit toy instance pass the full
    // sufficient-conditions checklist at delta = 1.
    CHECK(is_delta_non_invariant(cube_sbox(), Subspace::zero(3), 1).non_invariant);
}

TEST_CASE("non-invariance input validation") {
    const SBoxTable f = instance_sbox();
    const Subspace k = Subspace::span_of(5, {0x11});
    CHECK_THROWS_AS(is_delta_non_invariant(f, k, 4), std::invalid_argument);
    CHECK_THROWS_AS(is_delta_non_invariant(f, k, -1), std::invalid_argument);
    CHECK_THROWS_AS(is_delta_non_invariant(f, Subspace::zero(4), 1),
                    std::invalid_argument);   // kernel width mismatch
    SBoxTable not_injective{2, 3, {0, 1, 1, 2}};
    CHECK_THROWS_AS(is_delta_non_invariant(not_injective, Subspace::zero(3), 1),
                    std::invalid_argument);
}
