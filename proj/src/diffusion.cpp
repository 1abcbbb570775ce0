#include "wavekit/diffusion.hpp"

#include "wavekit/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace wavekit {

// ---------------------------------------------------------------------------
// BrickLayout
// ---------------------------------------------------------------------------

std::uint64_t BrickLayout::v_brick(std::uint64_t x, int j) const {
    return (x >> (s * (b - j))) & width_mask(s);
}

std::uint64_t BrickLayout::w_brick(std::uint64_t x, int j) const {
    return (x >> (t * (b - j))) & width_mask(t);
}

std::uint64_t BrickLayout::v_place(std::uint64_t chunk, int j) const {
    return (chunk & width_mask(s)) << (s * (b - j));
}

std::uint64_t BrickLayout::w_place(std::uint64_t chunk, int j) const {
    return (chunk & width_mask(t)) << (t * (b - j));
}

int v_brick_weight(const BrickLayout& layout, std::uint64_t x) {
    int w = 0;
    for (int j = 1; j <= layout.b; ++j)
        if (layout.v_brick(x, j) != 0) ++w;
    return w;
}

int w_brick_weight(const BrickLayout& layout, std::uint64_t x) {
    int w = 0;
    for (int j = 1; j <= layout.b; ++j)
        if (layout.w_brick(x, j) != 0) ++w;
    return w;
}

// ---------------------------------------------------------------------------
// Surjectivity / kernel
// ---------------------------------------------------------------------------

bool is_surjective(const DiffusionLayer& layer) {
    return rank(layer.matrix) == layer.layout.n();
}

ParallelKernelReport parallel_kernel_report(const DiffusionLayer& layer) {
    const auto& lay = layer.layout;
    ParallelKernelReport rep;
    rep.kern = kernel(layer.matrix);
    int sum_dims = 0;
    for (int j = 1; j <= lay.b; ++j) {
        // W_j as a subspace of the m-bit ambient space.
        std::vector<std::uint64_t> gens;
        for (int bit = 0; bit < lay.t; ++bit)
            gens.push_back(lay.w_place(std::uint64_t{1} << bit, j));
        const Subspace wj = Subspace::span_of(lay.m(), gens);
        Subspace meet = intersect(rep.kern, wj);
        rep.brick_dims.push_back(meet.dim());
        sum_dims += meet.dim();
        rep.brick_kernels.push_back(std::move(meet));
    }
    // The brick-wise intersections always sit inside the kernel with pairwise
    // disjoint supports, so their direct sum matches the kernel exactly when
    // the dimensions add up.
    rep.parallel = (sum_dims == rep.kern.dim());
    return rep;
}

bool is_parallel_kernel(const DiffusionLayer& layer) {
    return parallel_kernel_report(layer).parallel;
}

// ---------------------------------------------------------------------------
// Properness
// ---------------------------------------------------------------------------

ProperReport is_proper(const DiffusionLayer& layer) {
    const auto& lay = layer.layout;
    if (lay.b > 24)
        throw domain_too_large("is_proper: more than 24 bricks");
    ProperReport rep;
    rep.proper = true;
    const Subspace kern = kernel(layer.matrix);
    const std::uint32_t walls = (std::uint32_t{1} << lay.b) - 1;
    for (std::uint32_t wall = 1; wall < walls; ++wall) {
        // V' = sum of V_j for the bricks in `wall` (bit j-1 = brick j).
        std::vector<std::uint64_t> vgens, wgens;
        for (int j = 1; j <= lay.b; ++j) {
            if (!((wall >> (j - 1)) & 1)) continue;
            for (int bit = 0; bit < lay.s; ++bit)
                vgens.push_back(lay.v_place(std::uint64_t{1} << bit, j));
            for (int bit = 0; bit < lay.t; ++bit)
                wgens.push_back(lay.w_place(std::uint64_t{1} << bit, j));
        }
        const Subspace vprime = Subspace::span_of(lay.n(), vgens);
        const Subspace pre = preimage(layer.matrix, vprime);
        const Subspace bound = join(Subspace::span_of(lay.m(), wgens), kern);
        // Containment of subspaces: every basis vector reduces to zero.
        bool contained = true;
        for (std::uint64_t v : pre.basis)
            if (!bound.contains(v)) { contained = false; break; }
        ++rep.walls_checked;
        if (contained) {
            rep.proper = false;
            rep.witness_wall = wall;
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Branch number
// ---------------------------------------------------------------------------

BranchNumberResult branch_number(const DiffusionLayer& layer, int weight_cap) {
    const auto& lay = layer.layout;
    const Subspace kern = kernel(layer.matrix);
    BranchNumberResult res;
    // x outside the kernel has at least one active input brick and a non-zero
    // image, so 2 is a universal lower bound.
    int best = lay.b * 2 + 1;
    std::uint64_t best_x = 0, best_y = 0;

    // Enumerate inputs by ascending brick weight: combinations of active
    // bricks, then non-zero chunk values per active brick (odometer order, so
    // the first witness found at a given weight sum is the smallest input).
    const int max_weight = std::min(weight_cap, lay.b);
    for (int weight = 1; weight <= max_weight; ++weight) {
        if (best <= weight + 1) break;   // no deeper input can improve on best
        std::vector<int> bricks(static_cast<size_t>(weight));
        for (int i = 0; i < weight; ++i) bricks[static_cast<size_t>(i)] = i + 1;
        while (true) {
            // Odometer over the non-zero chunk values of the chosen bricks.
            std::vector<std::uint64_t> chunk(static_cast<size_t>(weight), 1);
            while (true) {
                std::uint64_t x = 0;
                for (int i = 0; i < weight; ++i)
                    x |= lay.w_place(chunk[static_cast<size_t>(i)], bricks[static_cast<size_t>(i)]);
                if (!kern.contains(x)) {
                    const std::uint64_t y = mul_word(x, layer.matrix);
                    const int total = weight + v_brick_weight(lay, y);
                    if (total < best) { best = total; best_x = x; best_y = y; }
                }
                int i = weight - 1;
                while (i >= 0 && chunk[static_cast<size_t>(i)] == width_mask(lay.t)) {
                    chunk[static_cast<size_t>(i)] = 1;
                    --i;
                }
                if (i < 0) break;
                ++chunk[static_cast<size_t>(i)];
            }
            int i = weight - 1;
            while (i >= 0 && bricks[static_cast<size_t>(i)] == lay.b - weight + 1 + i) --i;
            if (i < 0) break;
            ++bricks[static_cast<size_t>(i)];
            for (int j = i + 1; j < weight; ++j)
                bricks[static_cast<size_t>(j)] = bricks[static_cast<size_t>(j - 1)] + 1;
        }
    }

    // Exact when the best value cannot be beaten by any unexplored input: an
    // input of brick weight w contributes at least w + 1, so once
    // best <= max_weight + 2 - 1 the deeper weights cannot win. Exhausting all
    // weights is also exact.
    if (max_weight == lay.b || best <= max_weight + 1) {
        res.exact = true;
        res.value = best;
        res.lower = res.upper = best;
    } else {
        res.exact = false;
        res.lower = std::min(best, max_weight + 2);
        res.upper = best;
    }
    if (best_x != 0 || best_y != 0) {
        res.witness_input = BitVector(lay.m(), best_x);
        res.witness_output = BitVector(lay.n(), best_y);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Connectivity
// ---------------------------------------------------------------------------

std::vector<std::vector<bool>> brick_connectivity(const DiffusionLayer& layer) {
    const auto& lay = layer.layout;
    std::vector<std::vector<bool>> adj(static_cast<size_t>(lay.b),
                                       std::vector<bool>(static_cast<size_t>(lay.b), false));
    for (int j = 1; j <= lay.b; ++j)
        for (int row = lay.t * (j - 1); row < lay.t * j; ++row) {
            const std::uint64_t w = layer.matrix.row_words[static_cast<size_t>(row)];
            for (int q = 1; q <= lay.b; ++q)
                if (lay.v_brick(w, q) != 0) adj[static_cast<size_t>(j - 1)][static_cast<size_t>(q - 1)] = true;
        }
    return adj;
}

} // namespace wavekit
