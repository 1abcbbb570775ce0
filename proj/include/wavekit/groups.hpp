#pragma once

// Permutation-group computations on bitstring domains: orbits, transitivity,
// minimal block systems and primitivity testing, plus the experiment
// harnesses that check the sufficient conditions for primitivity and the
// SPN-to-Feistel reduction at toy scale.

#include "wavekit/gf2.hpp"
#include "wavekit/wave.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wavekit {

// Hard ceiling (in bits) for group-domain sizes. Defaults to 24; the
// WAVEKIT_MAX_DOMAIN_BITS environment variable overrides it. Guards throw
// domain_too_large instead of silently downsampling: verdicts are exact or
// absent.
int max_domain_bits();

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------

// A named bijection on {0, ..., 2^N - 1}, materialized as a full table.
struct Generator {
    std::string name;
    std::vector<std::uint32_t> table;
};

struct GeneratorAction {
    int domain_bits = 0;                 // N
    std::vector<Generator> generators;

    std::uint64_t domain_size() const { return std::uint64_t{1} << domain_bits; }
};

// The n translations x -> x ^ e_i alone (e_1 = most significant bit).
GeneratorAction translation_generators(int n);

// Round-function group of the substitution view: translations of (F2)^n
// together with rho(x) = gamma(x) * lambda. Requires a certified-bijective
// wave spec.
GeneratorAction spn_generators(const WaveSpec& spec);

// Round-function group of the Feistel view on (F2)^n x (F2)^n, encoded as
// (x1 << n) | x2: the translations sigma_(0,e_i) of the right half together
// with rho_bar(x1, x2) = (x2, x1 ^ rho(x2)).
GeneratorAction fn_generators(const WaveSpec& spec);

// Same constructions for an arbitrary permutation table on 2^n points
// (used by the randomized reduction experiments).
GeneratorAction spn_generators_from_table(const std::vector<std::uint32_t>& rho, int n);
GeneratorAction fn_generators_from_table(const std::vector<std::uint32_t>& rho, int n);

// Exhaustive bijectivity check of every generator table.
bool generators_are_bijective(const GeneratorAction& action);

// ---------------------------------------------------------------------------
// Orbits and block systems
// ---------------------------------------------------------------------------

// BFS closure of `start` under the generators, returned sorted ascending.
std::vector<std::uint64_t> orbit(const GeneratorAction& action, std::uint64_t start);

// True iff orbit(0) is the whole domain.
bool is_transitive(const GeneratorAction& action);

struct BlockSystem {
    int domain_bits = 0;
    std::uint64_t cell_size = 0;
    std::uint64_t cell_count = 0;
    // Point -> cell label, labels numbered by first appearance scanning the
    // domain in ascending order. Left empty for trivial systems (singletons
    // or the one-cell partition); those are valid partitions by construction.
    std::vector<std::uint32_t> cell_of;

    bool trivial() const { return cell_size <= 1 || cell_count <= 1; }
    // Sorted points of one cell (requires cell_of).
    std::vector<std::uint64_t> cell_points(std::uint32_t label) const;
};

// Finest block system of a transitive action in which points p and q share a
// cell (seeded union-find closure: merge p,q; repeatedly merge generator
// images of merged pairs until stable). Early-exits to the one-cell system
// as soon as a class passes half the domain, since equal-size cells dividing
// the domain force the closure to be everything from that point on.
BlockSystem minimal_block(const GeneratorAction& action, std::uint64_t p, std::uint64_t q);

// The coset partition {U + v} of a subspace, as a BlockSystem.
BlockSystem coset_partition(int n, const Subspace& u);

// Exhaustive validity check: equal-size cells covering the domain, and every
// generator maps each cell onto a single cell.
bool is_valid_block_system(const GeneratorAction& action, const BlockSystem& bs);

// ---------------------------------------------------------------------------
// Primitivity
// ---------------------------------------------------------------------------

struct PrimitivityResult {
    bool primitive = false;
    // When imprimitive: the smallest point whose minimal block with 0 is a
    // non-trivial system, and that system.
    std::uint64_t witness_point = 0;
    std::optional<BlockSystem> witness;
    double millis = 0.0;
};

// Exhaustive primitivity test: transitivity first (throws not_transitive),
// then minimal_block(0, b) for every b != 0 in ascending order; primitive
// iff every such system is trivial.
PrimitivityResult is_primitive(const GeneratorAction& action);

// Fast path for groups of the shape <T_N, pi> containing every translation
// of (F2)^N. Blocks through 0 of such a group are exactly the subspaces U
// with pi(x ^ u) ^ pi(x) in U for all u in U and all x, so the minimal block
// seeded with {0, d} is a linear closure instead of a pointwise one. The FN
// round-function group qualifies: conjugating a right-half translation by
// the Feistel operator yields the matching left-half translation, so the
// group contains all of T_2n. Cross-validated against is_primitive in tests.
Subspace minimal_translation_block(const std::vector<std::uint32_t>& pi, int domain_bits,
                                   std::uint64_t d);
PrimitivityResult is_primitive_with_translations(const std::vector<std::uint32_t>& pi,
                                                 int domain_bits);

// ---------------------------------------------------------------------------
// Subspace block oracle
// ---------------------------------------------------------------------------

struct SubspaceBlockResult {
    bool primitive = false;
    // When imprimitive: the first (canonical enumeration order) proper
    // non-trivial subspace U with gamma(u ^ v) ^ gamma(v) in the lambda-
    // preimage of U for every u in U, v in V.
    std::optional<Subspace> witness;
};

// Independent algebraic primitivity test for the substitution view, built on
// the block characterization: the round-function group is imprimitive iff
// some proper non-trivial subspace U of (F2)^n satisfies the derivative
// condition above, in which case the cosets of U form a block system.
// Guard: n <= 8 (subspace enumeration).
SubspaceBlockResult subspace_block_oracle(const WaveSpec& spec);

// ---------------------------------------------------------------------------
// Experiment harnesses
// ---------------------------------------------------------------------------

struct ReductionReport {
    // Set when rho is affine: the reduction theorem's hypotheses exclude
    // affine generating functions, so the harness refuses to assert anything.
    bool refused_affine = false;
    PrimitivityResult spn;   // substitution view, domain 2^n
    PrimitivityResult fn;    // Feistel view, domain 2^(2n)
    bool implication_holds = false;   // spn primitive implies fn primitive
};

// Empirical check of the reduction "substitution-view primitive implies
// Feistel-view primitive" for one spec / one permutation table. Guard:
// n <= 10 so the Feistel domain stays within 2^20.
ReductionReport verify_reduction(const WaveSpec& spec);
ReductionReport verify_reduction_from_table(const std::vector<std::uint32_t>& rho, int n);

struct HypothesisVerdict {
    std::string name;
    bool holds = false;
    std::string detail;
};

enum class ConclusionStatus {
    // Hypotheses not met: the sufficient conditions are one-directional, so
    // nothing is asserted.
    not_applicable,
    // Hypotheses met and the exhaustive primitivity check ran and agreed.
    primitive_confirmed,
    // Hypotheses met; the domain is too large for the exhaustive check, so
    // the conclusion rests on the proved implication.
    hypotheses_hold_conclusion_by_theorem,
};

struct SufficientConditionsReport {
    int delta = 0;
    std::vector<HypothesisVerdict> hypotheses;
    // The three sufficient-condition routes. All require a parallel kernel
    // and a bijective generating function.
    bool route_uniformity = false;         // 2^delta-DU + delta-non-invariant
    bool route_weak_uniformity = false;    // weak 2^delta-DU + delta-non-invariant
    bool route_relaxed_invariance = false; // 2^delta-DU + (delta-1)-non-invariant
                                           //   + kernel bricks of dim < s - delta
    bool hypotheses_hold = false;          // any route complete
    ConclusionStatus conclusion = ConclusionStatus::not_applicable;
    std::optional<PrimitivityResult> exhaustive;   // present when directly checked
};

// Evaluates every hypothesis of the sufficient-condition theorems at the
// given delta (1 <= delta < s), then either confirms the conclusion
// exhaustively (small domains) or records that it follows by the theorem.
// Throws certification_failed if hypotheses hold but the exhaustive check
// contradicts them: that would falsify the implementation.
SufficientConditionsReport verify_sufficient_conditions(const WaveSpec& spec, int delta);

} // namespace wavekit
