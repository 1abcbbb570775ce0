#pragma once

// Exact linear algebra over GF(2): bit vectors, bit matrices, rank, kernels,
// preimages and canonical subspace enumeration. Everything in this toolkit is
// at most 64 bits wide, so vectors are single machine words and matrices are
// arrays of row words.
//
// Conventions (used consistently across the whole library):
//   * Bit index 0 of a vector is the MOST significant bit, so the 4-bit
//     vector (0,0,0,1) is 0x1 and hex I/O is plain big-endian hex.
//   * Vectors multiply matrices from the left as row vectors: y = x * M,
//     where x has `rows` bits and y has `cols` bits.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wavekit {

// ---------------------------------------------------------------------------
// BitVector
// ---------------------------------------------------------------------------

struct BitVector {
    int width = 0;             // number of bits, 1..64
    std::uint64_t word = 0;    // value; paper-leftmost bit = numeric MSB

    BitVector() = default;
    BitVector(int w, std::uint64_t value);

    // Bit i with i = 0 the most significant position.
    bool get(int i) const;
    void set(int i, bool v);

    std::string to_hex() const;              // 0x-prefixed, ceil(width/4) digits
    std::string to_binary() const;           // width chars, bit 0 first
    static BitVector from_hex(std::string_view text, int width);

    friend bool operator==(const BitVector& a, const BitVector& b) = default;
};

BitVector operator^(const BitVector& a, const BitVector& b);

// Mask with the low `width` bits set (width = 64 included).
std::uint64_t width_mask(int width);

// ---------------------------------------------------------------------------
// BitMatrix
// ---------------------------------------------------------------------------

struct BitMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint64_t> row_words;    // one word per row, `cols` bits wide

    BitMatrix() = default;
    BitMatrix(int r, int c);

    bool get(int r, int c) const;            // c = 0 is the leftmost column
    void set(int r, int c, bool v);

    // Text format: one row per line of '0'/'1' characters, spaces optional,
    // '#' starts a comment; row/column counts are inferred.
    static BitMatrix from_text(std::string_view text);
    std::string to_text() const;

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;
};

// y = x * M (row-vector times matrix).
BitVector mul(const BitVector& x, const BitMatrix& m);
std::uint64_t mul_word(std::uint64_t x, const BitMatrix& m);

BitMatrix transpose(const BitMatrix& m);
BitMatrix identity_matrix(int n);

// GF(2) rank by Gaussian elimination.
int rank(const BitMatrix& m);

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

// A linear subspace of (F2)^n held as a reduced-row-echelon basis with
// descending pivot positions. RREF is canonical: two subspaces are equal
// exactly when their basis arrays are identical.
struct Subspace {
    int ambient_width = 0;
    std::vector<std::uint64_t> basis;        // RREF rows, descending pivots

    int dim() const { return static_cast<int>(basis.size()); }
    bool is_zero() const { return basis.empty(); }
    bool is_full() const { return dim() == ambient_width; }

    // Membership: x reduces to zero against the basis.
    bool contains(std::uint64_t x) const;
    // The canonical representative of x modulo this subspace.
    std::uint64_t reduce(std::uint64_t x) const;

    // Number of elements, 2^dim (dim <= 63 in all uses).
    std::uint64_t size() const { return std::uint64_t{1} << dim(); }

    // Enumerates all 2^dim elements (ascending combination index).
    std::vector<std::uint64_t> elements() const;

    static Subspace zero(int width);
    static Subspace full(int width);
    static Subspace span_of(int width, const std::vector<std::uint64_t>& gens);

    friend bool operator==(const Subspace& a, const Subspace& b) = default;
};

bool span_contains(const Subspace& s, const BitVector& x);

// {x : x * M = 0}, dimension rows - rank(M).
Subspace kernel(const BitMatrix& m);

// {x : x * M in S}; always contains kernel(M).
Subspace preimage(const BitMatrix& m, const Subspace& s);

// Smallest subspace containing both arguments.
Subspace join(const Subspace& a, const Subspace& b);

// Intersection, computed through orthogonal complements.
Subspace intersect(const Subspace& a, const Subspace& b);

// {y : <x, y> = 0 for all x in S} under the standard dot product.
Subspace complement(const Subspace& s);

// Exact count of subspaces of (F2)^n with dim <= max_dim (sum of Gaussian
// binomials). Used to enforce enumeration caps before any work happens.
std::uint64_t subspace_count(int n, int max_dim);

// Calls fn once per subspace of (F2)^n with dim <= max_dim, each exactly once,
// in canonical order (by dimension, then pivot set, then free entries).
// Throws domain_too_large if the count exceeds `cap`.
void for_each_subspace(int n, int max_dim,
                       const std::function<void(const Subspace&)>& fn,
                       std::uint64_t cap = 10'000'000);

// Materialized form of for_each_subspace.
std::vector<Subspace> enumerate_subspaces(int n, int max_dim,
                                          std::uint64_t cap = 10'000'000);

} // namespace wavekit
