#include "wavekit/trails.hpp"

#include "wavekit/errors.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace wavekit {

namespace {

using u16 = std::uint16_t;
constexpr u16 kInf = 0xFFFF;

u16 sat_add(u16 v, int cost) {
    return v == kInf ? kInf : static_cast<u16>(v + cost);
}

// Per-R admissible F-output support masks. nr[0] is unused.
struct ActivityModel {
    int b = 0;
    std::vector<std::uint32_t> nr;
};

ActivityModel build_model(const WaveSpec& spec, bool refined) {
    ActivityModel model;
    model.b = spec.layout.b;
    const std::uint32_t side = std::uint32_t{1} << model.b;
    const std::uint32_t full = side - 1;
    model.nr.assign(side, 0);
    if (!refined) {
        for (std::uint32_t r = 1; r < side; ++r)
            model.nr[r] = full;
        return model;
    }
    const auto adj = brick_connectivity(spec.lambda);
    std::vector<std::uint32_t> brick_mask(static_cast<size_t>(model.b), 0);
    for (int j = 0; j < model.b; ++j)
        for (int q = 0; q < model.b; ++q)
            if (adj[static_cast<size_t>(j)][static_cast<size_t>(q)])
                brick_mask[static_cast<size_t>(j)] |= std::uint32_t{1} << q;
    for (std::uint32_t r = 1; r < side; ++r) {
        std::uint32_t acc = 0;
        for (int j = 0; j < model.b; ++j)
            if (r & (std::uint32_t{1} << j))
                acc |= brick_mask[static_cast<size_t>(j)];
        model.nr[r] = acc;
    }
    return model;
}

// Transition (L, R) -> (R, X) with R != 0 admits some non-zero F-output
// pattern inside NR exactly when the forced bricks L^X fit in NR and either
// the output pattern is forced non-zero or an optional both-active brick
// inside NR can supply the non-zero output.
bool valid_transition(std::uint32_t l, std::uint32_t x, std::uint32_t nr) {
    const std::uint32_t d = l ^ x;
    if ((d & ~nr) != 0)
        return false;
    return d != 0 || (l & x & nr) != 0;
}

// Backward DP layers: layers[t-1][(L << b) | R] is the cheapest completion
// cost of rounds t..rounds from state (L, R). layers[rounds] is the zero
// horizon.
std::vector<std::vector<u16>> run_dp(const ActivityModel& model, int rounds) {
    const int b = model.b;
    const std::uint32_t side = std::uint32_t{1} << b;
    const size_t states = size_t{1} << (2 * b);
    std::vector<std::vector<u16>> layers(static_cast<size_t>(rounds) + 1);
    layers[static_cast<size_t>(rounds)].assign(states, 0);
    std::vector<u16> all(side), excl0(side);
    for (int t = rounds; t >= 1; --t) {
        auto& g = layers[static_cast<size_t>(t - 1)];
        const auto& gn = layers[static_cast<size_t>(t)];
        g.assign(states, kInf);
        // R = 0: the F-function is inactive and the round is free.
        for (std::uint32_t l = 0; l < side; ++l)
            g[size_t{l} << b] = gn[l];
        for (std::uint32_t r = 1; r < side; ++r) {
            const std::uint32_t nr = model.nr[r];
            const u16* h = &gn[size_t{r} << b];
            std::copy(h, h + side, all.begin());
            std::fill(excl0.begin(), excl0.end(), kInf);
            // Joint subset-minimum transform over the bits of NR:
            // all[L]   = min over D subset NR of h(L ^ D)
            // excl0[L] = the same with D = 0 excluded
            for (int bit = 0; bit < b; ++bit) {
                const std::uint32_t beta = std::uint32_t{1} << bit;
                if ((nr & beta) == 0)
                    continue;
                for (std::uint32_t l = 0; l < side; ++l) {
                    if (l & beta)
                        continue;
                    const std::uint32_t l2 = l | beta;
                    const u16 a0 = all[l], a1 = all[l2];
                    excl0[l] = std::min(excl0[l], a1);
                    excl0[l2] = std::min(excl0[l2], a0);
                    const u16 m = std::min(a0, a1);
                    all[l] = m;
                    all[l2] = m;
                }
            }
            const int cost = std::popcount(r);
            for (std::uint32_t l = 0; l < side; ++l) {
                u16 v = excl0[l];
                if ((l & nr) != 0)
                    v = std::min(v, h[l]);
                g[(size_t{l} << b) | r] = sat_add(v, cost);
            }
        }
    }
    return layers;
}

} // namespace

std::string format_state(const TruncatedState& st, int bricks) {
    std::string out = "L:";
    for (int j = 0; j < bricks; ++j)
        out += (st.left >> j) & 1 ? '1' : '0';
    out += " R:";
    for (int j = 0; j < bricks; ++j)
        out += (st.right >> j) & 1 ? '1' : '0';
    return out;
}

std::string MinActiveResult::pattern() const {
    std::ostringstream out;
    for (size_t i = 0; i + 1 < witness.size(); ++i) {
        if (i > 0)
            out << '-';
        out << std::popcount(witness[i].right);
    }
    return out.str();
}

MinActiveResult min_active_sboxes(const WaveSpec& spec, int rounds, bool refined) {
    spec.validate();
    if (rounds < 1)
        throw std::invalid_argument("min_active_sboxes: rounds >= 1 required");
    const int b = spec.layout.b;
    if (b > 10)
        throw domain_too_large("min_active_sboxes: b <= 10 required (4^b activity states)");
    const size_t states = size_t{1} << (2 * b);
    if ((static_cast<size_t>(rounds) + 1) * states * sizeof(u16) > (size_t{1} << 29))
        throw domain_too_large("min_active_sboxes: DP layers exceed the 512 MiB budget");

    const ActivityModel model = build_model(spec, refined);
    const auto layers = run_dp(model, rounds);
    const std::uint32_t side = std::uint32_t{1} << b;
    const auto& g1 = layers[0];

    u16 best = kInf;
    for (size_t s = 1; s < states; ++s)
        best = std::min(best, g1[s]);
    if (best == kInf)
        throw std::logic_error("min_active_sboxes: no admissible trail (malformed model)");

    // Start preference: single-brick diagonal (these give the periodic
    // 1-0-1 shape), then lexicographic (L, R).
    size_t start = states;
    for (int j = 0; j < b && start == states; ++j) {
        const size_t s = (size_t{1} << (b + j)) | (size_t{1} << j);
        if (g1[s] == best)
            start = s;
    }
    for (size_t s = 1; s < states && start == states; ++s)
        if (g1[s] == best)
            start = s;

    MinActiveResult result;
    result.rounds = rounds;
    result.refined = refined;
    result.min_active = best;
    std::uint32_t l = static_cast<std::uint32_t>(start >> b);
    std::uint32_t r = static_cast<std::uint32_t>(start) & (side - 1);
    result.witness.push_back({l, r});
    for (int t = 1; t <= rounds; ++t) {
        const u16 needed = layers[static_cast<size_t>(t - 1)][(size_t{l} << b) | r];
        std::uint32_t x = side;   // to-be-chosen right half of the next state
        if (r == 0) {
            x = l;
        } else {
            const int cost = std::popcount(r);
            const std::uint32_t nr = model.nr[r];
            for (std::uint32_t cand = 0; cand < side; ++cand) {
                if (!valid_transition(l, cand, nr))
                    continue;
                if (sat_add(layers[static_cast<size_t>(t)][(size_t{r} << b) | cand], cost) ==
                    needed) {
                    x = cand;
                    break;
                }
            }
        }
        if (x == side)
            throw std::logic_error("min_active_sboxes: witness reconstruction failed");
        l = r;   // next state is (old R, X)
        r = x;
        result.witness.push_back({l, r});
    }
    return result;
}

long long exact_log2(const Rational& r) {
    const auto dyadic = [](long long v) { return v > 0 && (v & (v - 1)) == 0; };
    if (!dyadic(r.num) || !dyadic(r.den))
        throw non_dyadic_value("exact_log2: " + std::to_string(r.num) + "/" +
                               std::to_string(r.den) + " is not a power of two");
    const auto log2_of = [](long long v) {
        return static_cast<long long>(63 - __builtin_clzll(static_cast<unsigned long long>(v)));
    };
    return log2_of(r.num) - log2_of(r.den);
}

namespace {

bool rational_less(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;   // denominators are positive
}

} // namespace

BoundLedger differential_bound(const WaveSpec& spec, int rounds) {
    MinActiveResult mar = min_active_sboxes(spec, rounds);
    BoundLedger led;
    led.rounds = rounds;
    led.min_active = mar.min_active;
    led.witness = std::move(mar.witness);
    int max_ddt = 0;
    for (const SBoxTable& f : spec.sboxes)
        max_ddt = std::max(max_ddt, differential_uniformity(f));
    led.max_ddt_ratio = make_rational(max_ddt, 1LL << spec.layout.s);
    led.diff_prob_log2 = static_cast<long long>(led.min_active) * exact_log2(led.max_ddt_ratio);
    return led;
}

BoundLedger linear_bound(const WaveSpec& spec, int rounds) {
    if (rounds < 3 || rounds % 3 != 0)
        throw rounds_not_multiple_of_three("linear_bound: rounds must be a positive multiple "
                                           "of 3 (3-round block composition)");
    MinActiveResult mar = min_active_sboxes(spec, rounds);
    BoundLedger led;
    led.rounds = rounds;
    led.min_active = mar.min_active;
    led.witness = std::move(mar.witness);

    Rational maxbias = make_rational(0, 1);
    for (const SBoxTable& f : spec.sboxes) {
        const Rational bias = max_bias(f);
        if (rational_less(maxbias, bias))
            maxbias = bias;
    }
    led.max_bias_value = maxbias;

    const int a3 = min_active_sboxes(spec, 3).min_active;
    // Piling-up over one 3-round block with a3 active S-boxes, then over the
    // q blocks: bias(3q) = 2^(q-1) * e3^q with e3 = 2^(a3-1) * maxbias^a3.
    const long long e3_log2 =
        (a3 - 1) + static_cast<long long>(a3) * exact_log2(maxbias);
    const long long q = rounds / 3;
    led.bias_log2 = (q - 1) + q * e3_log2;
    led.data_complexity_log2 = -2 * *led.bias_log2;
    return led;
}

TrailCheckReport exhaustive_trail_check(const WaveSpec& spec, int rounds, std::uint64_t seed) {
    spec.validate();
    const int n = spec.layout.n();
    if (4 * n > 26)
        throw domain_too_large("exhaustive_trail_check: 2^(4n) plaintext pairs exceed the "
                               "2^26 work cap");
    if (rounds < 1 || rounds > 4)
        throw std::invalid_argument("exhaustive_trail_check: rounds must be in [1, 4]");

    TrailCheckReport rep;
    rep.rounds = rounds;
    const MinActiveResult coarse = min_active_sboxes(spec, rounds, false);
    const MinActiveResult fine = min_active_sboxes(spec, rounds, true);
    rep.model_min = coarse.min_active;
    rep.model_min_refined = fine.min_active;

    const ActivityModel coarse_model = build_model(spec, false);
    const ActivityModel fine_model = build_model(spec, true);

    rep.masters_tried.push_back(0);
    if (seed != 0)
        rep.masters_tried.push_back(seed);

    const WaveEvaluator eval(spec);
    const std::uint64_t half_mask = width_mask(n);
    const std::uint64_t domain = std::uint64_t{1} << (2 * n);
    const int b = spec.layout.b;

    const auto activity = [&](std::uint64_t value_half) {
        std::uint32_t mask = 0;
        for (int j = 1; j <= b; ++j)
            if (spec.layout.v_brick(value_half, j) != 0)
                mask |= std::uint32_t{1} << (j - 1);
        return mask;
    };

    int true_min = rounds * b + 1;
    for (const std::uint64_t master : rep.masters_tried) {
        const std::vector<BitVector> keys = test_only_key_expansion(master, rounds, n);
        // FeistelCipher certifies bijectivity; the simulation below matches
        // its round function exactly (checked in tests).
        const FeistelCipher cipher(spec, keys);
        (void)cipher;
        // states[t * domain + p] = Feistel state of plaintext p after t rounds
        std::vector<std::uint32_t> states(static_cast<size_t>(rounds + 1) * domain);
        for (std::uint64_t p = 0; p < domain; ++p) {
            std::uint64_t x1 = p >> n, x2 = p & half_mask;
            states[static_cast<size_t>(p)] = static_cast<std::uint32_t>(p);
            for (int t = 1; t <= rounds; ++t) {
                const std::uint64_t f = eval.rho(x2) ^ keys[static_cast<size_t>(t - 1)].word;
                const std::uint64_t nx2 = x1 ^ f;
                x1 = x2;
                x2 = nx2;
                states[static_cast<size_t>(t) * domain + p] =
                    static_cast<std::uint32_t>((x1 << n) | x2);
            }
        }
        for (std::uint64_t delta = 1; delta < domain; ++delta) {
            for (std::uint64_t p = 0; p < domain; ++p) {
                const std::uint64_t q = p ^ delta;
                if (p > q)
                    continue;   // unordered pairs: each trail counted once
                ++rep.pairs_checked;
                int cost_total = 0;
                std::uint32_t prev_l = 0, prev_r = 0;
                for (int t = 0; t <= rounds; ++t) {
                    const std::uint32_t diff =
                        states[static_cast<size_t>(t) * domain + p] ^
                        states[static_cast<size_t>(t) * domain + q];
                    const std::uint32_t dl = activity(diff >> n);
                    const std::uint32_t dr = activity(diff & half_mask);
                    if (t < rounds)
                        cost_total += std::popcount(dr);
                    if (t > 0) {
                        // Transition (prev_l, prev_r) -> (dl, dr): the new
                        // left half is the old right half by construction.
                        bool ok_coarse, ok_fine;
                        if (prev_r == 0) {
                            ok_coarse = ok_fine = (dr == prev_l);
                        } else {
                            ok_coarse = valid_transition(prev_l, dr, coarse_model.nr[prev_r]);
                            ok_fine = valid_transition(prev_l, dr, fine_model.nr[prev_r]);
                        }
                        if (!ok_coarse)
                            ++rep.invalid_transitions;
                        if (!ok_fine)
                            ++rep.invalid_transitions_refined;
                    }
                    prev_l = dl;
                    prev_r = dr;
                }
                true_min = std::min(true_min, cost_total);
            }
        }
    }
    rep.true_min = true_min;
    rep.sound = rep.model_min <= rep.true_min && rep.model_min_refined <= rep.true_min &&
                rep.invalid_transitions == 0 && rep.invalid_transitions_refined == 0;
    return rep;
}

} // namespace wavekit
