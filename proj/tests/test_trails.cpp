#include "doctest.h"

#include "wavekit/diffusion.hpp"
#include "wavekit/errors.hpp"
#include "wavekit/trails.hpp"

#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

using namespace wavekit;

namespace {

WaveSpec instance_spec() {
    const std::vector<std::uint32_t> gamma1 = {0x00, 0x0B, 0x1B, 0x08, 0x1D, 0x17, 0x12, 0x04,
                                               0x0D, 0x14, 0x01, 0x1E, 0x18, 0x02, 0x0E, 0x07};
    constexpr int row_to_col[40] = {1,  17, 2,  18, 1,  3,  19, 4,  20, 3,  5,  21, 6, 22,
                                    5,  7,  23, 8,  24, 7,  9,  25, 10, 26, 9,  11, 27, 12,
                                    28, 11, 13, 29, 14, 30, 13, 15, 31, 16, 32, 15};
    WaveSpec spec;
    spec.layout = BrickLayout{8, 4, 5};
    spec.sboxes.assign(8, SBoxTable{4, 5, gamma1});
    spec.lambda.layout = spec.layout;
    spec.lambda.matrix = BitMatrix(40, 32);
    for (int r = 0; r < 40; ++r)
        spec.lambda.matrix.set(r, row_to_col[r] - 1, true);
    return spec;
}

WaveSpec tiny_spec() {
    WaveSpec spec;
    spec.layout = BrickLayout{1, 2, 3};
    spec.sboxes = {SBoxTable{2, 3, {0, 3, 5, 6}}};
    spec.lambda.layout = spec.layout;
    spec.lambda.matrix = BitMatrix(3, 2);
    spec.lambda.matrix.row_words = {0b10, 0b01, 0b11};
    return spec;
}

WaveSpec skew_spec() {
    WaveSpec spec;
    spec.layout = BrickLayout{2, 2, 3};
    spec.sboxes.assign(2, SBoxTable{2, 3, {0, 3, 5, 1}});
    spec.lambda.layout = spec.layout;
    spec.lambda.matrix = BitMatrix(6, 4);
    spec.lambda.matrix.row_words = {0xE, 0xF, 0x1, 0x2, 0x4, 0x8};
    return spec;
}

WaveSpec cube_spec() {
    WaveSpec spec;
    spec.layout = BrickLayout{2, 3, 3};
    spec.sboxes.assign(2, SBoxTable{3, 3, {0, 1, 3, 4, 5, 6, 7, 2}});
    spec.lambda.layout = spec.layout;
    spec.lambda.matrix = BitMatrix(6, 6);
    spec.lambda.matrix.row_words = {0b000100, 0b000010, 0b000001,
                                    0b100100, 0b010010, 0b001001};
    return spec;
}

// Re-implementation of the model transition rule, used to audit witnesses.
bool model_transition_ok(const TruncatedState& from, const TruncatedState& to,
                         std::uint32_t nr_mask) {
    if (to.left != from.right)
        return false;
    if (from.right == 0)
        return to.right == from.left;
    const std::uint32_t d = from.left ^ to.right;
    if (d & ~nr_mask)
        return false;
    return d != 0 || (from.left & to.right & nr_mask) != 0;
}

void audit_witness(const WaveSpec& spec, const MinActiveResult& res) {
    REQUIRE(static_cast<int>(res.witness.size()) == res.rounds + 1);
    CHECK((res.witness[0].left | res.witness[0].right) != 0);

    std::vector<std::uint32_t> nr(size_t{1} << spec.layout.b, 0);
    const std::uint32_t all = static_cast<std::uint32_t>(width_mask(spec.layout.b));
    if (res.refined) {
        const auto adj = brick_connectivity(spec.lambda);
        std::vector<std::uint32_t> brick_mask(static_cast<size_t>(spec.layout.b), 0);
        for (int j = 0; j < spec.layout.b; ++j)
            for (int q = 0; q < spec.layout.b; ++q)
                if (adj[j][q])
                    brick_mask[j] |= 1u << q;
        for (std::uint32_t r = 0; r < nr.size(); ++r)
            for (int j = 0; j < spec.layout.b; ++j)
                if ((r >> j) & 1)
                    nr[r] |= brick_mask[j];
    } else {
        for (std::uint32_t r = 1; r < nr.size(); ++r)
            nr[r] = all;
    }

    int cost = 0;
    for (int i = 0; i < res.rounds; ++i) {
        REQUIRE(model_transition_ok(res.witness[i], res.witness[i + 1],
                                    nr[res.witness[i].right]));
        cost += std::popcount(res.witness[i].right);
    }
    CHECK(cost == res.min_active);
}

} // namespace

TEST_CASE("state formatting lists brick 1 leftmost") {
    CHECK(format_state({1, 0}, 8) == "L:10000000 R:00000000");
    CHECK(format_state({0b11, 0b100}, 3) == "L:110 R:001");
}

TEST_CASE("instance minimum active counts") {
    const WaveSpec spec = instance_spec();
    CHECK(min_active_sboxes(spec, 1).min_active == 0);
    CHECK(min_active_sboxes(spec, 2).min_active == 1);

    const MinActiveResult r3 = min_active_sboxes(spec, 3);
    CHECK(r3.min_active == 2);
    CHECK(r3.pattern() == "1-0-1");
    audit_witness(spec, r3);

    const MinActiveResult r48 = min_active_sboxes(spec, 48);
    CHECK(r48.min_active == 32);
    audit_witness(spec, r48);

    // Every third round adds exactly two active S-boxes.
    for (int q = 1; q <= 5; ++q)
        CHECK(min_active_sboxes(spec, 3 * q).min_active == 2 * q);
}

TEST_CASE("connectivity refinement never lowers the bound") {
    for (const WaveSpec& spec : {instance_spec(), skew_spec(), cube_spec()}) {
        for (int rounds = 1; rounds <= 6; ++rounds) {
            const MinActiveResult coarse = min_active_sboxes(spec, rounds, false);
            const MinActiveResult fine = min_active_sboxes(spec, rounds, true);
            REQUIRE(fine.min_active >= coarse.min_active);
            audit_witness(spec, coarse);
            audit_witness(spec, fine);
        }
    }
    // On the instance the diagonal trail survives refinement: brick 1 feeds
    // output brick 1, so 1-0-1 stays optimal.
    const MinActiveResult fine3 = min_active_sboxes(instance_spec(), 3, true);
    CHECK(fine3.min_active == 2);
    CHECK(fine3.pattern() == "1-0-1");
}

TEST_CASE("min-active counts grow monotonically in rounds") {
    const WaveSpec spec = instance_spec();
    int prev = 0;
    for (int rounds = 1; rounds <= 9; ++rounds) {
        const int cur = min_active_sboxes(spec, rounds).min_active;
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("min-active input validation and memory guard") {
    CHECK_THROWS_AS(min_active_sboxes(instance_spec(), 0), std::invalid_argument);
    CHECK_THROWS_AS(min_active_sboxes(instance_spec(), -2), std::invalid_argument);

    // 11 one-bit bricks exceed the DP state guard.
    WaveSpec wide;
    wide.layout = BrickLayout{11, 1, 1};
    wide.sboxes.assign(11, SBoxTable{1, 1, {0, 1}});
    wide.lambda.layout = wide.layout;
    wide.lambda.matrix = identity_matrix(11);
    CHECK_THROWS_AS(min_active_sboxes(wide, 3), domain_too_large);
}

TEST_CASE("exact log2 of dyadic rationals only") {
    CHECK(exact_log2(make_rational(1, 8)) == -3);
    CHECK(exact_log2(make_rational(4, 1)) == 2);
    CHECK(exact_log2(make_rational(1, 1)) == 0);
    CHECK(exact_log2(Rational{2, 4}) == -1);   // works unreduced too
    CHECK_THROWS_AS(exact_log2(make_rational(3, 8)), non_dyadic_value);
    CHECK_THROWS_AS(exact_log2(make_rational(0, 1)), non_dyadic_value);
}

TEST_CASE("instance differential bounds") {
    const WaveSpec spec = instance_spec();
    const BoundLedger b3 = differential_bound(spec, 3);
    CHECK(b3.rounds == 3);
    CHECK(b3.min_active == 2);
    CHECK(b3.max_ddt_ratio == make_rational(1, 8));
    REQUIRE(b3.diff_prob_log2.has_value());
    CHECK(*b3.diff_prob_log2 == -6);
    CHECK_FALSE(b3.bias_log2.has_value());

    const BoundLedger b48 = differential_bound(spec, 48);
    CHECK(b48.min_active == 32);
    CHECK(*b48.diff_prob_log2 == -96);
}

TEST_CASE("instance linear bounds") {
    const WaveSpec spec = instance_spec();
    const BoundLedger l3 = linear_bound(spec, 3);
    CHECK(l3.max_bias_value == make_rational(1, 4));
    REQUIRE(l3.bias_log2.has_value());
    CHECK(*l3.bias_log2 == -3);
    CHECK(*l3.data_complexity_log2 == 6);
    CHECK_FALSE(l3.diff_prob_log2.has_value());

    const BoundLedger l48 = linear_bound(spec, 48);
    CHECK(*l48.bias_log2 == -33);
    CHECK(*l48.data_complexity_log2 == 66);

    CHECK_THROWS_AS(linear_bound(spec, 4), rounds_not_multiple_of_three);
    CHECK_THROWS_AS(linear_bound(spec, 0), rounds_not_multiple_of_three);
}

TEST_CASE("toy bounds carry the same S-box statistics") {
    // Same S-box as the instance, two bricks: identical per-round ratios.
    WaveSpec toy;
    toy.layout = BrickLayout{2, 4, 5};
    const std::vector<std::uint32_t> gamma1 = {0x00, 0x0B, 0x1B, 0x08, 0x1D, 0x17, 0x12, 0x04,
                                               0x0D, 0x14, 0x01, 0x1E, 0x18, 0x02, 0x0E, 0x07};
    toy.sboxes.assign(2, SBoxTable{4, 5, gamma1});
    toy.lambda.layout = toy.layout;
    toy.lambda.matrix = BitMatrix(10, 8);
    const int r2c[10] = {1, 5, 2, 6, 1, 3, 7, 4, 8, 3};
    for (int r = 0; r < 10; ++r)
        toy.lambda.matrix.set(r, r2c[r] - 1, true);

    const BoundLedger d3 = differential_bound(toy, 3);
    CHECK(d3.min_active == 2);
    CHECK(*d3.diff_prob_log2 == -6);
    const BoundLedger l3 = linear_bound(toy, 3);
    CHECK(*l3.bias_log2 == -3);

    const MinActiveResult fine = min_active_sboxes(toy, 3, true);
    CHECK(fine.min_active == 2);
}

TEST_CASE("exhaustive audit: models lower-bound true trails on the toys") {
    for (int rounds = 1; rounds <= 4; ++rounds) {
        const TrailCheckReport tiny = exhaustive_trail_check(tiny_spec(), rounds, 0xA5A5);
        CHECK(tiny.sound);
        CHECK(tiny.invalid_transitions == 0);
        CHECK(tiny.invalid_transitions_refined == 0);
        CHECK(tiny.model_min <= tiny.true_min);
        CHECK(tiny.model_min_refined <= tiny.true_min);
        CHECK(tiny.model_min == min_active_sboxes(tiny_spec(), rounds).min_active);
        CHECK(tiny.pairs_checked > 0);
        CHECK(tiny.masters_tried.size() >= 2);

        const TrailCheckReport skew = exhaustive_trail_check(skew_spec(), rounds, 0x1234);
        CHECK(skew.sound);
        CHECK(skew.model_min <= skew.true_min);
        CHECK(skew.invalid_transitions == 0);
    }

    const TrailCheckReport cube = exhaustive_trail_check(cube_spec(), 3, 0xBEEF);
    CHECK(cube.sound);
    CHECK(cube.model_min <= cube.true_min);
    CHECK(cube.model_min_refined <= cube.true_min);
}

TEST_CASE("exhaustive audit guards") {
    CHECK_THROWS_AS(exhaustive_trail_check(tiny_spec(), 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_trail_check(tiny_spec(), 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_trail_check(instance_spec(), 3, 1), domain_too_large);
}

TEST_CASE("bound ledgers reject invalid round counts") {
    CHECK_THROWS_AS(differential_bound(instance_spec(), 0), std::invalid_argument);
}
