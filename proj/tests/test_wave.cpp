#include "doctest.h"

#include "wavekit/errors.hpp"
#include "wavekit/wave.hpp"

#include <cstdint>
#include <random>
#include <set>
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

// 1-brick toy with a linear S-box; rho is a permutation (and affine).
WaveSpec tiny_spec() {
    WaveSpec spec;
    spec.layout = BrickLayout{1, 2, 3};
    spec.sboxes = {SBoxTable{2, 3, {0, 3, 5, 6}}};
    spec.lambda.layout = spec.layout;
    spec.lambda.matrix = BitMatrix(3, 2);
    spec.lambda.matrix.row_words = {0b10, 0b01, 0b11};
    return spec;
}

// 2-brick toy whose lambda kernel does not split across bricks, forcing the
// bijectivity certificate through the generic path.
WaveSpec skew_spec() {
    WaveSpec spec;
    spec.layout = BrickLayout{2, 2, 3};
    spec.sboxes.assign(2, SBoxTable{2, 3, {0, 3, 5, 1}});
    spec.lambda.layout = spec.layout;
    spec.lambda.matrix = BitMatrix(6, 4);
    spec.lambda.matrix.row_words = {0xE, 0xF, 0x1, 0x2, 0x4, 0x8};
    return spec;
}

// 1-brick spec whose image sum set meets the lambda kernel: NOT bijective.
WaveSpec colliding_spec() {
    WaveSpec spec;
    spec.layout = BrickLayout{1, 2, 3};
    spec.sboxes = {SBoxTable{2, 3, {0, 3, 5, 6}}};
    spec.lambda.layout = spec.layout;
    spec.lambda.matrix = BitMatrix(3, 2);
    spec.lambda.matrix.row_words = {0b10, 0b01, 0b01};   // kernel {0, 3}
    return spec;
}

} // namespace

TEST_CASE("gamma concatenates per-brick S-box outputs, brick 1 most significant") {
    const WaveSpec spec = skew_spec();
    // x = (1, 2): brick values 1 and 2 map to 3 and 5.
    const std::uint64_t x = (1u << 2) | 2u;
    CHECK(gamma_apply(spec, x) == ((3ull << 3) | 5ull));
    CHECK(gamma_apply(spec, 0) == 0);
}

TEST_CASE("instance generating function: frozen values and evaluator agreement") {
    const WaveSpec spec = instance_spec();
    CHECK(rho_apply(spec, 0) == 0);
    CHECK(rho_apply(spec, 1) == 0x20003);

    const WaveEvaluator eval(spec);
    CHECK(eval.state_bits() == 32);
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t x = rng() & width_mask(32);
        REQUIRE(eval.rho(x) == rho_apply(spec, x));
    }
}

TEST_CASE("wave function adds the key after the generating function") {
    const WaveSpec spec = instance_spec();
    const struct {
        std::uint64_t k, x, out;
    } kats[] = {
        {0x950e87d7, 0xf5606615, 0x4da7d38a},
        {0x2c61275c, 0x9e6b6cf8, 0xf7ce103a},
        {0x1f00bca0, 0x042db923, 0x0ff0916e},
    };
    for (const auto& kat : kats) {
        const BitVector got = wave_apply(spec, BitVector(32, kat.k), BitVector(32, kat.x));
        CHECK(got == BitVector(32, kat.out));
        CHECK((rho_apply(spec, kat.x) ^ kat.k) == kat.out);
    }
}

TEST_CASE("bijectivity certificate: instance goes through the per-brick path") {
    const BijectivityCertificate cert = wave_is_bijective(instance_spec());
    CHECK(cert.bijective);
    CHECK(cert.used_parallel_path);
    REQUIRE(cert.per_brick.size() == 8);
    for (const BrickBijectivityEntry& e : cert.per_brick) {
        CHECK(e.sum_set_size == 31);
        CHECK(e.kernel_brick_dim == 1);
        CHECK(e.intersection_trivial);
    }
    CHECK_FALSE(cert.colliding_sum.has_value());
}

TEST_CASE("bijectivity certificate: generic path when the kernel is skewed") {
    const BijectivityCertificate cert = wave_is_bijective(skew_spec());
    CHECK(cert.bijective);
    CHECK_FALSE(cert.used_parallel_path);
    // Exhaustive cross-check: rho really is a permutation of 16 points.
    const WaveSpec spec = skew_spec();
    std::set<std::uint64_t> image;
    for (std::uint64_t x = 0; x < 16; ++x)
        image.insert(rho_apply(spec, x));
    CHECK(image.size() == 16);
}

TEST_CASE("bijectivity certificate: colliding sum vector is reported") {
    const BijectivityCertificate cert = wave_is_bijective(colliding_spec());
    CHECK_FALSE(cert.bijective);
    REQUIRE(cert.colliding_sum.has_value());
    // The reported collision lies in both the image sum set and the kernel.
    const WaveSpec spec = colliding_spec();
    const std::uint64_t c = cert.colliding_sum->word;
    CHECK(c != 0);
    bool in_sums = false;
    for (std::uint32_t x = 0; x < 4 && !in_sums; ++x)
        for (std::uint32_t y = 0; y < 4; ++y)
            if ((spec.sboxes[0](x) ^ spec.sboxes[0](y)) == c) {
                in_sums = true;
                break;
            }
    CHECK(in_sums);
    CHECK(mul_word(c, spec.lambda.matrix) == 0);
    // And rho genuinely collides.
    std::set<std::uint64_t> image;
    for (std::uint64_t x = 0; x < 4; ++x)
        image.insert(rho_apply(spec, x));
    CHECK(image.size() < 4);
}

TEST_CASE("cipher construction refuses non-bijective wave functions") {
    const std::vector<BitVector> keys(4, BitVector(2, 1));
    CHECK_THROWS_AS(FeistelCipher(colliding_spec(), keys), certification_failed);
    CHECK_NOTHROW(FeistelCipher(tiny_spec(), keys));
}

TEST_CASE("two hand-traced rounds of the tiny cipher") {
    // rho table of tiny_spec: x -> gamma -> lambda gives [0, 2, 1, 3].
    const WaveSpec spec = tiny_spec();
    CHECK(rho_apply(spec, 0) == 0);
    CHECK(rho_apply(spec, 1) == 2);
    CHECK(rho_apply(spec, 2) == 1);
    CHECK(rho_apply(spec, 3) == 3);

    const FeistelCipher c(spec, {BitVector(2, 1), BitVector(2, 2)});
    // (x1, x2) = (1, 2):
    //   round 1: F = rho(2) ^ 1 = 0, state (2, 1 ^ 0) = (2, 1)
    //   round 2: F = rho(1) ^ 2 = 0, state (1, 2 ^ 0) = (1, 2)
    const HalfPair ct = feistel_encrypt(c, {BitVector(2, 1), BitVector(2, 2)});
    CHECK(ct.first == BitVector(2, 1));
    CHECK(ct.second == BitVector(2, 2));

    // (x1, x2) = (0, 1):
    //   round 1: F = rho(1) ^ 1 = 3, state (1, 0 ^ 3) = (1, 3)
    //   round 2: F = rho(3) ^ 2 = 1, state (3, 1 ^ 1) = (3, 0)
    const HalfPair ct2 = feistel_encrypt(c, {BitVector(2, 0), BitVector(2, 1)});
    CHECK(ct2.first == BitVector(2, 3));
    CHECK(ct2.second == BitVector(2, 0));

    // Decryption inverts both, using only the forward wave function.
    const HalfPair back = feistel_decrypt(c, ct2);
    CHECK(back.first == BitVector(2, 0));
    CHECK(back.second == BitVector(2, 1));
}

TEST_CASE("tiny cipher round-trips exhaustively") {
    const WaveSpec spec = tiny_spec();
    const std::vector<BitVector> keys = {BitVector(2, 1), BitVector(2, 2), BitVector(2, 3)};
    const FeistelCipher c(spec, keys);
    std::set<std::uint64_t> images;
    for (std::uint64_t x1 = 0; x1 < 4; ++x1)
        for (std::uint64_t x2 = 0; x2 < 4; ++x2) {
            const HalfPair pt{BitVector(2, x1), BitVector(2, x2)};
            const HalfPair ct = feistel_encrypt(c, pt);
            const HalfPair back = feistel_decrypt(c, ct);
            REQUIRE(back == pt);
            images.insert((ct.first.word << 2) | ct.second.word);
        }
    CHECK(images.size() == 16);   // encryption is a permutation
}

TEST_CASE("instance cipher: frozen vectors and random round-trips") {
    const WaveSpec spec = instance_spec();
    const struct {
        std::uint64_t master, pt, ct;
    } kats[] = {
        {0x5714e7ffbb48e6e1, 0x9a38d246c5e4f8e6, 0xc4e2994864fb34e5},
        {0xbc49fe4285d7f80c, 0x5c8b626408acd7ad, 0x817bd0d416278fe9},
        {0x81bf5712d7becaa6, 0xdd1b9f45cc95d15b, 0xb5bf2bd2c4975a6c},
    };
    for (const auto& kat : kats) {
        const FeistelCipher c(spec, test_only_key_expansion(kat.master, 48, 32));
        CHECK(feistel_encrypt64(c, kat.pt) == kat.ct);
        CHECK(feistel_decrypt64(c, kat.ct) == kat.pt);
    }

    std::mt19937_64 rng(77);
    const FeistelCipher c(spec, test_only_key_expansion(rng(), 48, 32));
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t pt = rng();
        REQUIRE(feistel_decrypt64(c, feistel_encrypt64(c, pt)) == pt);
    }
}

TEST_CASE("64-bit wrappers pack the left half most significant") {
    const WaveSpec spec = instance_spec();
    const FeistelCipher c(spec, test_only_key_expansion(0xABCDEF, 4, 32));
    const std::uint64_t pt = 0x0123456789ABCDEFull;
    const HalfPair split{BitVector(32, pt >> 32), BitVector(32, pt & width_mask(32))};
    const HalfPair ct = feistel_encrypt(c, split);
    CHECK(feistel_encrypt64(c, pt) == ((ct.first.word << 32) | ct.second.word));
}

TEST_CASE("key expansion: sliding window over the master key") {
    const std::uint64_t master = 0x0123456789ABCDEFull;
    const auto keys = test_only_key_expansion(master, 10, 32);
    REQUIRE(keys.size() == 10);
    for (int i = 1; i <= 10; ++i) {
        const int r = (7 * i) % 64;
        const std::uint64_t rot = (master << r) | (master >> (64 - r));
        CHECK(keys[i - 1] == BitVector(32, rot & width_mask(32)));
    }
    const auto narrow = test_only_key_expansion(master, 3, 5);
    for (const BitVector& k : narrow)
        CHECK(k.width == 5);
}

TEST_CASE("cipher constructor validates key shape") {
    const WaveSpec spec = tiny_spec();
    CHECK_THROWS_AS(FeistelCipher(spec, {}), std::invalid_argument);
    CHECK_THROWS_AS(FeistelCipher(spec, {BitVector(3, 1)}), std::invalid_argument);
}

TEST_CASE("affineness detector") {
    // The tiny toy's rho = [0,2,1,3] is linear (it is a bit swap).
    const WaveSpec tiny = tiny_spec();
    CHECK(is_affine([&](std::uint64_t x) { return rho_apply(tiny, x); }, 2));

    // The skew toy's rho is a non-affine permutation.
    const WaveSpec skew = skew_spec();
    CHECK_FALSE(is_affine([&](std::uint64_t x) { return rho_apply(skew, x); }, 4));

    // Random affine maps pass; poking one point breaks them (exhaustive path).
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 6;
        std::vector<std::uint64_t> rows(n);
        for (auto& r : rows)
            r = rng() & width_mask(n);
        const std::uint64_t c = rng() & width_mask(n);
        auto f = [&](std::uint64_t x) {
            std::uint64_t acc = c;
            for (int i = 0; i < n; ++i)
                if ((x >> (n - 1 - i)) & 1)
                    acc ^= rows[i];
            return acc;
        };
        CHECK(is_affine(f, n));
        const std::uint64_t poke = 1 + (rng() % (width_mask(n)));
        auto g = [&](std::uint64_t x) { return f(x) ^ (x == poke ? 1 : 0); };
        CHECK_FALSE(is_affine(g, n));
    }

    // Sampled path above 20 bits: affine passes, a quadratic mix fails.
    auto wide_affine = [](std::uint64_t x) { return (x ^ (x >> 1)) & width_mask(22); };
    CHECK(is_affine(wide_affine, 22));
    auto wide_quadratic = [](std::uint64_t x) {
        return (x ^ ((x & (x >> 3)) * 5)) & width_mask(22);
    };
    CHECK_FALSE(is_affine(wide_quadratic, 22));
}

TEST_CASE("spec validation rejects malformed assemblies") {
    WaveSpec bad = tiny_spec();
    bad.sboxes.clear();
    CHECK_THROWS(bad.validate());

    WaveSpec wrong_widths = tiny_spec();
    wrong_widths.sboxes = {SBoxTable{2, 4, {0, 3, 5, 6}}};
    CHECK_THROWS(wrong_widths.validate());

    WaveSpec not_injective = tiny_spec();
    not_injective.sboxes = {SBoxTable{2, 3, {0, 3, 3, 6}}};
    CHECK_THROWS(not_injective.validate());

    WaveSpec not_surjective = tiny_spec();
    not_surjective.lambda.matrix.row_words = {0b10, 0b10, 0b10};
    CHECK_THROWS(not_surjective.validate());

    CHECK_NOTHROW(tiny_spec().validate());
    CHECK_NOTHROW(instance_spec().validate());
}
