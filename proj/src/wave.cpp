#include "wavekit/wave.hpp"

#include "wavekit/errors.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace wavekit {

// ---------------------------------------------------------------------------
// WaveSpec
// ---------------------------------------------------------------------------

void WaveSpec::validate() const {
    if (layout.b < 1 || layout.s < 1 || layout.t < layout.s)
        throw std::invalid_argument("WaveSpec: need b >= 1 and 1 <= s <= t");
    if (layout.n() > 64 || layout.m() > 64)
        throw std::invalid_argument("WaveSpec: state wider than 64 bits");
    if (static_cast<int>(sboxes.size()) != layout.b)
        throw std::invalid_argument("WaveSpec: expected one S-box per brick");
    for (int j = 0; j < layout.b; ++j) {
        const auto& f = sboxes[static_cast<size_t>(j)];
        if (f.in_bits != layout.s || f.out_bits != layout.t)
            throw std::invalid_argument("WaveSpec: S-box " + std::to_string(j + 1) +
                                        " does not match the brick layout");
        if (!is_injective(f))
            throw certification_failed("S-box " + std::to_string(j + 1) + " is not injective");
        if (!f.maps_zero_to_zero())
            throw certification_failed("S-box " + std::to_string(j + 1) + " does not map 0 to 0");
    }
    if (lambda.layout != layout)
        throw std::invalid_argument("WaveSpec: diffusion layout mismatch");
    if (lambda.matrix.rows != layout.m() || lambda.matrix.cols != layout.n())
        throw std::invalid_argument("WaveSpec: diffusion matrix must be m x n");
    if (!is_surjective(lambda))
        throw certification_failed("diffusion layer is not surjective (rank < n)");
}

std::uint64_t gamma_apply(const WaveSpec& spec, std::uint64_t x) {
    const auto& lay = spec.layout;
    std::uint64_t w = 0;
    for (int j = 1; j <= lay.b; ++j) {
        const auto chunk = static_cast<std::uint32_t>(lay.v_brick(x, j));
        w |= lay.w_place(spec.sboxes[static_cast<size_t>(j - 1)](chunk), j);
    }
    return w;
}

std::uint64_t rho_apply(const WaveSpec& spec, std::uint64_t x) {
    return mul_word(gamma_apply(spec, x), spec.lambda.matrix);
}

BitVector wave_apply(const WaveSpec& spec, const BitVector& k, const BitVector& x) {
    const int n = spec.layout.n();
    if (k.width != n || x.width != n)
        throw std::invalid_argument("wave_apply: operand width != n");
    return BitVector(n, rho_apply(spec, x.word) ^ k.word);
}

WaveEvaluator::WaveEvaluator(const WaveSpec& spec)
    : n_(spec.layout.n()), b_(spec.layout.b), s_(spec.layout.s) {
    const auto& lay = spec.layout;
    brick_tables_.resize(static_cast<size_t>(b_));
    for (int j = 1; j <= b_; ++j) {
        auto& tab = brick_tables_[static_cast<size_t>(j - 1)];
        tab.resize(size_t{1} << s_);
        for (std::uint32_t chunk = 0; chunk < (std::uint32_t{1} << s_); ++chunk) {
            const std::uint64_t w = lay.w_place(spec.sboxes[static_cast<size_t>(j - 1)](chunk), j);
            tab[chunk] = mul_word(w, spec.lambda.matrix);
        }
    }
}

std::uint64_t WaveEvaluator::rho(std::uint64_t x) const {
    std::uint64_t acc = 0;
    for (int j = 0; j < b_; ++j)
        acc ^= brick_tables_[static_cast<size_t>(j)]
                            [(x >> (s_ * (b_ - 1 - j))) & width_mask(s_)];
    return acc;
}

// ---------------------------------------------------------------------------
// Bijectivity
// ---------------------------------------------------------------------------

BijectivityCertificate wave_is_bijective(const WaveSpec& spec) {
    spec.validate();
    const auto& lay = spec.layout;
    BijectivityCertificate cert;

    const ParallelKernelReport krep = parallel_kernel_report(spec.lambda);
    if (krep.parallel) {
        // Per-brick route: the global sum set is the direct product of the
        // brick sum sets, so it meets the parallel kernel trivially exactly
        // when every brick sum set meets its kernel brick trivially.
        cert.used_parallel_path = true;
        cert.bijective = true;
        for (int j = 1; j <= lay.b; ++j) {
            const auto sums = image_sum_set(spec.sboxes[static_cast<size_t>(j - 1)]);
            const auto& kb = krep.brick_kernels[static_cast<size_t>(j - 1)];
            BrickBijectivityEntry entry;
            entry.brick = j;
            entry.sum_set_size = static_cast<int>(sums.size());
            entry.kernel_brick_dim = kb.dim();
            entry.intersection_trivial = true;
            for (std::uint32_t v : sums) {
                if (v == 0) continue;
                // kb lives in the m-bit ambient space; place v into brick j.
                if (kb.contains(lay.w_place(v, j))) {
                    entry.intersection_trivial = false;
                    cert.bijective = false;
                    if (!cert.colliding_sum)
                        cert.colliding_sum = BitVector(lay.m(), lay.w_place(v, j));
                    break;
                }
            }
            cert.per_brick.push_back(entry);
        }
        cert.detail = cert.bijective
                          ? "parallel kernel: every brick sum set meets its kernel brick only in 0"
                          : "parallel kernel: a brick sum set contains a non-zero kernel vector";
        return cert;
    }

    // Generic route: materialize the image of gamma and intersect the sum set
    // with the kernel directly. |Im gamma| = 2^n, so the pair scan costs
    // |Im gamma|^2 = 2^{2n}; capped at 2^26.
    cert.used_parallel_path = false;
    if (2 * lay.n() > 26)
        throw domain_too_large("wave_is_bijective: |Im gamma|^2 exceeds the generic-path cap");
    std::vector<std::uint64_t> image;
    image.reserve(size_t{1} << lay.n());
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << lay.n()); ++x)
        image.push_back(gamma_apply(spec, x));
    cert.bijective = true;
    for (size_t i = 0; i < image.size() && cert.bijective; ++i)
        for (size_t k = i + 1; k < image.size(); ++k) {
            const std::uint64_t d = image[i] ^ image[k];
            if (d != 0 && krep.kern.contains(d)) {
                cert.bijective = false;
                cert.colliding_sum = BitVector(lay.m(), d);
                break;
            }
        }
    cert.detail = cert.bijective
                      ? "generic path: image sum set meets the kernel only in 0"
                      : "generic path: found a non-zero sum-set vector inside the kernel";
    return cert;
}

// ---------------------------------------------------------------------------
// Feistel cipher
// ---------------------------------------------------------------------------

FeistelCipher::FeistelCipher(WaveSpec s, std::vector<BitVector> keys)
    : spec(std::move(s)), rounds(static_cast<int>(keys.size())), round_keys(std::move(keys)) {
    if (rounds < 1) throw std::invalid_argument("FeistelCipher: need at least one round key");
    for (const auto& k : round_keys)
        if (k.width != spec.layout.n())
            throw std::invalid_argument("FeistelCipher: round key width != n");
    const auto cert = wave_is_bijective(spec);
    if (!cert.bijective)
        throw certification_failed("FeistelCipher: wave functions are not bijective (" +
                                   cert.detail + ")");
}

HalfPair feistel_encrypt(const FeistelCipher& cipher, const HalfPair& pt) {
    const int n = cipher.spec.layout.n();
    if (pt.first.width != n || pt.second.width != n)
        throw std::invalid_argument("feistel_encrypt: half width != n");
    const WaveEvaluator eval(cipher.spec);
    std::uint64_t x1 = pt.first.word, x2 = pt.second.word;
    for (const auto& k : cipher.round_keys) {
        const std::uint64_t f = eval.rho(x2) ^ k.word;
        const std::uint64_t next = x1 ^ f;
        x1 = x2;
        x2 = next;
    }
    return {BitVector(n, x1), BitVector(n, x2)};
}

HalfPair feistel_decrypt(const FeistelCipher& cipher, const HalfPair& ct) {
    const int n = cipher.spec.layout.n();
    if (ct.first.width != n || ct.second.width != n)
        throw std::invalid_argument("feistel_decrypt: half width != n");
    const WaveEvaluator eval(cipher.spec);
    std::uint64_t y1 = ct.first.word, y2 = ct.second.word;
    for (auto it = cipher.round_keys.rbegin(); it != cipher.round_keys.rend(); ++it) {
        const std::uint64_t f = eval.rho(y1) ^ it->word;   // forward wave only
        const std::uint64_t prev = y2 ^ f;
        y2 = y1;
        y1 = prev;
    }
    return {BitVector(n, y1), BitVector(n, y2)};
}

std::uint64_t feistel_encrypt64(const FeistelCipher& cipher, std::uint64_t pt) {
    const int n = cipher.spec.layout.n();
    if (2 * n > 64) throw std::invalid_argument("feistel_encrypt64: state wider than 64 bits");
    const auto out = feistel_encrypt(cipher, {BitVector(n, pt >> n),
                                              BitVector(n, pt & width_mask(n))});
    return (out.first.word << n) | out.second.word;
}

std::uint64_t feistel_decrypt64(const FeistelCipher& cipher, std::uint64_t ct) {
    const int n = cipher.spec.layout.n();
    if (2 * n > 64) throw std::invalid_argument("feistel_decrypt64: state wider than 64 bits");
    const auto out = feistel_decrypt(cipher, {BitVector(n, ct >> n),
                                              BitVector(n, ct & width_mask(n))});
    return (out.first.word << n) | out.second.word;
}

std::vector<BitVector> test_only_key_expansion(std::uint64_t master, int rounds, int n) {
    if (rounds < 1) throw std::invalid_argument("key expansion: rounds >= 1");
    std::vector<BitVector> keys;
    keys.reserve(static_cast<size_t>(rounds));
    for (int i = 1; i <= rounds; ++i) {
        const int rot = (7 * i) % 64;
        const std::uint64_t rolled =
            rot == 0 ? master : ((master << rot) | (master >> (64 - rot)));
        keys.emplace_back(n, rolled & width_mask(n));
    }
    return keys;
}

// ---------------------------------------------------------------------------
// Affineness
// ---------------------------------------------------------------------------

bool is_affine(const std::function<std::uint64_t(std::uint64_t)>& f, int domain_bits,
               std::uint64_t seed) {
    if (domain_bits < 1 || domain_bits > 63)
        throw std::invalid_argument("is_affine: domain_bits must be 1..63");
    const std::uint64_t f0 = f(0);
    auto g = [&](std::uint64_t x) { return f(x) ^ f0; };
    if (domain_bits <= 20) {
        // g is linear iff it is additive on (x, basis vector) pairs.
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << domain_bits); ++x)
            for (int i = 0; i < domain_bits; ++i) {
                const std::uint64_t e = std::uint64_t{1} << i;
                if (g(x ^ e) != (g(x) ^ g(e))) return false;
            }
        return true;
    }
    std::mt19937_64 rng(seed);
    const std::uint64_t mask = width_mask(domain_bits);
    for (int trial = 0; trial < 256; ++trial) {
        const std::uint64_t x = rng() & mask;
        const std::uint64_t y = rng() & mask;
        if (g(x ^ y) != (g(x) ^ g(y))) return false;
    }
    return true;
}

} // namespace wavekit
