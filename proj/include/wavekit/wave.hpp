#pragma once

// Wave functions (expanding S-box layer, compressing linear layer, key
// addition), their bijectivity certificate, the Feistel operator, and full
// cipher encryption/decryption. Decryption uses only the forward wave
// function; no inverse-of-epsilon operation exists anywhere in the library.

#include "wavekit/diffusion.hpp"
#include "wavekit/gf2.hpp"
#include "wavekit/sbox.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wavekit {

// ---------------------------------------------------------------------------
// WaveSpec
// ---------------------------------------------------------------------------

// Brick structure + one injective s->t S-box per brick + diffusion layer.
// Defines the generating function rho(x) = gamma(x) * lambda.
struct WaveSpec {
    BrickLayout layout;
    std::vector<SBoxTable> sboxes;   // exactly layout.b entries
    DiffusionLayer lambda;

    // Structural sanity (widths, injectivity, 0 -> 0, surjectivity).
    // Throws std::invalid_argument / certification_failed on violation.
    void validate() const;
};

// gamma as a whole map: n-bit input -> m-bit output through the parallel
// S-boxes.
std::uint64_t gamma_apply(const WaveSpec& spec, std::uint64_t x);

// rho(x) = gamma(x) * lambda, and the full wave function with key addition.
std::uint64_t rho_apply(const WaveSpec& spec, std::uint64_t x);
BitVector wave_apply(const WaveSpec& spec, const BitVector& k, const BitVector& x);

// Precomputed per-brick contribution tables for fast repeated evaluation of
// rho on the same spec.
class WaveEvaluator {
  public:
    explicit WaveEvaluator(const WaveSpec& spec);
    std::uint64_t rho(std::uint64_t x) const;
    int state_bits() const { return n_; }

  private:
    int n_ = 0, b_ = 0, s_ = 0;
    std::vector<std::vector<std::uint64_t>> brick_tables_;  // [brick][chunk]
};

// ---------------------------------------------------------------------------
// Bijectivity certificate
// ---------------------------------------------------------------------------

struct BrickBijectivityEntry {
    int brick = 0;                     // 1-based
    int sum_set_size = 0;
    int kernel_brick_dim = 0;
    bool intersection_trivial = false; // sum set meets kernel brick only in 0
};

struct BijectivityCertificate {
    bool bijective = false;
    bool used_parallel_path = false;   // per-brick route vs direct sum-set route
    std::vector<BrickBijectivityEntry> per_brick;   // parallel path only
    // Generic path: a non-zero vector in both the image sum set and the
    // kernel, when one exists.
    std::optional<BitVector> colliding_sum;
    std::string detail;                // human-readable summary
};

// Wave functions are bijective exactly when the image sum set of gamma meets
// Ker(lambda) trivially. With a parallel kernel this splits into independent
// per-brick checks (the global sum set is the direct product of the brick sum
// sets); otherwise the sum set is intersected with the kernel directly, with
// a size guard on |Im gamma|^2.
BijectivityCertificate wave_is_bijective(const WaveSpec& spec);

// ---------------------------------------------------------------------------
// FeistelCipher
// ---------------------------------------------------------------------------

struct FeistelCipher {
    WaveSpec spec;
    int rounds = 0;
    std::vector<BitVector> round_keys;   // rounds entries, width n

    // Construction is the certification gate: refuses specs whose wave
    // functions are not bijective.
    FeistelCipher(WaveSpec s, std::vector<BitVector> keys);
};

using HalfPair = std::pair<BitVector, BitVector>;

// r rounds of (x1, x2) -> (x2, x1 ^ wave(k_i, x2)).
HalfPair feistel_encrypt(const FeistelCipher& cipher, const HalfPair& pt);

// Inverse walk using only the forward wave function:
// (y1, y2) -> (y2 ^ wave(k_i, y1), y1), keys in reverse order.
HalfPair feistel_decrypt(const FeistelCipher& cipher, const HalfPair& ct);

// 64-bit convenience wrappers for the n = 32 instance (left half most
// significant).
std::uint64_t feistel_encrypt64(const FeistelCipher& cipher, std::uint64_t pt);
std::uint64_t feistel_decrypt64(const FeistelCipher& cipher, std::uint64_t ct);

// TEST-ONLY key expansion, for known-answer vectors and the CLI. This is a
// reproducibility device, not a key schedule, and is never claimed secure:
// k_i = low n bits of rotl64(master, (7*i) mod 64), i = 1..rounds.
std::vector<BitVector> test_only_key_expansion(std::uint64_t master, int rounds, int n);

// ---------------------------------------------------------------------------
// Affineness test
// ---------------------------------------------------------------------------

// True iff g(x) = f(x) ^ f(0) is linear. Exhaustive over all (x, basis) pairs
// for domain_bits <= 20; above that, 256 seeded random pairs (one-sided: a
// reported "affine" may be wrong with negligible probability, a reported
// "not affine" is certain).
bool is_affine(const std::function<std::uint64_t(std::uint64_t)>& f, int domain_bits,
               std::uint64_t seed = 0x77A7E5EEDULL);

} // namespace wavekit
