#pragma once

// Truncated differential trail search over the Feistel structure, exact
// closed-form differential/linear single-trail bounds, and the toy-scale
// soundness audit that compares the truncated model against exhaustively
// enumerated concrete trails.

#include "wavekit/sbox.hpp"
#include "wavekit/wave.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wavekit {

// ---------------------------------------------------------------------------
// Truncated states and the activity model
// ---------------------------------------------------------------------------

// One Feistel state at brick-activity level. Bit j-1 of a mask corresponds
// to brick j (so rendering bits LSB-first lists brick 1 leftmost); a set bit
// means the brick carries a non-zero difference. Note this is a local
// convention for activity masks only: value words elsewhere keep brick 1 in
// the most significant position.
struct TruncatedState {
    std::uint32_t left = 0;
    std::uint32_t right = 0;

    friend bool operator==(const TruncatedState& a, const TruncatedState& b) = default;
};

// "L:10000000 R:00000000" with brick 1 leftmost.
std::string format_state(const TruncatedState& st, int bricks);

struct MinActiveResult {
    int rounds = 0;
    bool refined = false;     // connectivity-restricted output patterns
    int min_active = 0;
    // One optimal trail: rounds+1 states; round i (1-based) consumes
    // states[i-1] and pays popcount(states[i-1].right) active S-boxes.
    std::vector<TruncatedState> witness;

    // Dash-joined per-round active counts of the witness, e.g. "1-0-1".
    std::string pattern() const;
};

// Minimum total active-S-box count over every non-trivial trail the
// truncated model admits, by exact dynamic programming over activity states
// (backward layers with a per-round subset-minimum transform), plus one
// optimal witness trail.
//
// One round maps (L, R) to (R, X): with R = 0 the F-function is inactive and
// X = L is forced; with R != 0 the F-output pattern ranges over the non-zero
// masks confined to N(R) (all bricks by default; the union of the lambda
// brick-connectivity images of the active bricks when refined = true), and a
// brick of X may drop to 0 only where L and the F-output are both active.
// The model over-approximates the trails of any certified-bijective spec, so
// the result is a valid lower bound on real trails; refinement only prunes.
//
// Witness tie-break, in order: a single-brick diagonal start (e_j, e_j) that
// achieves the optimum (these produce the repeating 1-0-1 shape), else the
// lexicographically smallest optimal start; then the smallest optimal X each
// round. Deterministic either way.
//
// Guards: rounds >= 1; b <= 10 and (rounds+1) * 4^b DP cells within memory.
MinActiveResult min_active_sboxes(const WaveSpec& spec, int rounds, bool refined = false);

// ---------------------------------------------------------------------------
// Bound ledger
// ---------------------------------------------------------------------------

// Exact single-trail bound bookkeeping. All quantities are exact: ratios are
// rationals in lowest terms and the log2 values are integers (computed only
// when the underlying ratio is dyadic; non_dyadic_value otherwise). No
// floating point anywhere.
struct BoundLedger {
    int rounds = 0;
    int min_active = 0;
    std::vector<TruncatedState> witness;       // min-active witness trail

    Rational max_ddt_ratio;                    // max DDT / 2^s, differential route
    std::optional<long long> diff_prob_log2;   // min_active * log2(max_ddt_ratio)

    Rational max_bias_value;                   // max |c(a,b)| / 2^s, linear route
    std::optional<long long> bias_log2;        // piled-up bias over rounds
    std::optional<long long> data_complexity_log2;   // -2 * bias_log2
};

// log2 of a dyadic rational (num and den powers of two); throws
// non_dyadic_value otherwise.
long long exact_log2(const Rational& r);

// Single-trail differential bound: diff_prob_log2 = min_active(rounds) times
// log2(maxDDT / 2^s), maxDDT over all S-boxes.
BoundLedger differential_bound(const WaveSpec& spec, int rounds);

// Single-approximation linear bound for rounds = 3q: with A3 the 3-round
// min-active count and e3 = 2^(A3-1) * maxbias^A3 (piling-up over one
// 3-round block), bias_log2 = (q-1) + q * log2(e3) and
// data_complexity_log2 = -2 * bias_log2. Throws rounds_not_multiple_of_three
// when 3 does not divide rounds.
BoundLedger linear_bound(const WaveSpec& spec, int rounds);

// ---------------------------------------------------------------------------
// Exhaustive soundness audit (toy sizes)
// ---------------------------------------------------------------------------

struct TrailCheckReport {
    int rounds = 0;
    int model_min = 0;            // default-model lower bound
    int model_min_refined = 0;    // connectivity-refined lower bound
    int true_min = 0;             // over all enumerated concrete trails
    std::uint64_t pairs_checked = 0;
    std::uint64_t invalid_transitions = 0;          // vs the default model
    std::uint64_t invalid_transitions_refined = 0;  // vs the refined model
    std::vector<std::uint64_t> masters_tried;       // key-expansion masters
    bool sound = false;   // both minima <= true_min and zero invalid transitions
};

// Enumerates every concrete difference trail of the cipher at toy scale: all
// plaintext pairs, under the all-zero round keys and one seeded expansion.
// Verifies each realized activity transition is reachable in the model and
// that the model minima lower-bound the true minimum. Guards: 4n <= 26 so
// the pair count stays within 2^26, rounds <= 4.
TrailCheckReport exhaustive_trail_check(const WaveSpec& spec, int rounds,
                                        std::uint64_t seed);

} // namespace wavekit
