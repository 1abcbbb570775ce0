#pragma once

// Analysis of the compressing linear layer: kernel structure, the
// parallel-kernel test, the proper-diffusion test over all walls, branch
// number, and brick connectivity.

#include "wavekit/gf2.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wavekit {

// ---------------------------------------------------------------------------
// Brick layout
// ---------------------------------------------------------------------------

// The state splits into b bricks: s bits per brick on the narrow side V,
// t bits per brick on the expanded side W. Brick 1 occupies the most
// significant bits on both sides.
struct BrickLayout {
    int b = 0;   // brick count
    int s = 0;   // V-side brick width
    int t = 0;   // W-side brick width

    int n() const { return b * s; }
    int m() const { return b * t; }

    // The j-th brick (1-based) of an n()-bit V value / m()-bit W value.
    std::uint64_t v_brick(std::uint64_t x, int j) const;
    std::uint64_t w_brick(std::uint64_t x, int j) const;
    // Places a brick value into an otherwise-zero word.
    std::uint64_t v_place(std::uint64_t chunk, int j) const;
    std::uint64_t w_place(std::uint64_t chunk, int j) const;

    friend bool operator==(const BrickLayout& a, const BrickLayout& b) = default;
};

// Number of non-zero bricks of an n-bit V-side value / m-bit W-side value.
int v_brick_weight(const BrickLayout& layout, std::uint64_t x);
int w_brick_weight(const BrickLayout& layout, std::uint64_t x);

// ---------------------------------------------------------------------------
// DiffusionLayer
// ---------------------------------------------------------------------------

// A surjective linear map from the expanded side W (m bits) onto the state
// side V (n bits), applied as x -> x * matrix.
struct DiffusionLayer {
    BrickLayout layout;
    BitMatrix matrix;   // m() rows by n() cols
};

// rank(matrix) == n: the layer actually reaches the whole state space.
bool is_surjective(const DiffusionLayer& layer);

// ---------------------------------------------------------------------------
// Kernel structure
// ---------------------------------------------------------------------------

struct ParallelKernelReport {
    bool parallel = false;
    Subspace kern;                          // Ker(lambda), ambient m bits
    std::vector<Subspace> brick_kernels;    // Ker(lambda) meet W_j, per brick
    std::vector<int> brick_dims;            // dim of each intersection
};

ParallelKernelReport parallel_kernel_report(const DiffusionLayer& layer);
bool is_parallel_kernel(const DiffusionLayer& layer);

// ---------------------------------------------------------------------------
// Properness
// ---------------------------------------------------------------------------

struct ProperReport {
    bool proper = false;
    int walls_checked = 0;
    // First violating wall as a brick set (bit j-1 = brick j active), present
    // only when proper is false.
    std::optional<std::uint32_t> witness_wall;
};

// For every non-empty proper brick subset I: the preimage of the V-side wall
// (+)_{j in I} V_j must not be contained in the W-side wall plus Ker(lambda).
// Walls are scanned in ascending mask order, so the witness is the smallest
// violating brick set.
ProperReport is_proper(const DiffusionLayer& layer);

// ---------------------------------------------------------------------------
// Branch number
// ---------------------------------------------------------------------------

struct BranchNumberResult {
    bool exact = false;
    int value = 0;              // meaningful when exact
    int lower = 0, upper = 0;   // certified interval when the cap was reached
    std::optional<BitVector> witness_input;   // m-bit x achieving the value
    std::optional<BitVector> witness_output;  // x * lambda
};

// min over x not in Ker(lambda) of (active input bricks + active output
// bricks). Any surjective layer has branch number >= 2. The search escalates
// by input brick weight; once the best value found is <= weight_cap + 1 (or
// all weights are exhausted) the result is exact, otherwise a certified
// interval is reported.
BranchNumberResult branch_number(const DiffusionLayer& layer, int weight_cap = 2);

// ---------------------------------------------------------------------------
// Connectivity
// ---------------------------------------------------------------------------

// adjacency[j-1][q-1] = true iff some row of input brick j has a 1 in an
// output column of brick q.
std::vector<std::vector<bool>> brick_connectivity(const DiffusionLayer& layer);

} // namespace wavekit
