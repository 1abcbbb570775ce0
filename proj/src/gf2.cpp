#include "wavekit/gf2.hpp"

#include "wavekit/errors.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace wavekit {

std::uint64_t width_mask(int width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

// ---------------------------------------------------------------------------
// BitVector
// ---------------------------------------------------------------------------

BitVector::BitVector(int w, std::uint64_t value) : width(w), word(value & width_mask(w)) {
    if (w < 1 || w > 64) throw std::invalid_argument("BitVector width must be 1..64");
}

bool BitVector::get(int i) const {
    if (i < 0 || i >= width) throw std::out_of_range("BitVector::get");
    return (word >> (width - 1 - i)) & 1;
}

void BitVector::set(int i, bool v) {
    if (i < 0 || i >= width) throw std::out_of_range("BitVector::set");
    const std::uint64_t bit = std::uint64_t{1} << (width - 1 - i);
    word = v ? (word | bit) : (word & ~bit);
}

std::string BitVector::to_hex() const {
    const int digits = (width + 3) / 4;
    static const char* hexc = "0123456789abcdef";
    std::string out = "0x";
    for (int d = digits - 1; d >= 0; --d)
        out += hexc[(word >> (4 * d)) & 0xF];
    return out;
}

std::string BitVector::to_binary() const {
    std::string out(static_cast<size_t>(width), '0');
    for (int i = 0; i < width; ++i)
        if (get(i)) out[static_cast<size_t>(i)] = '1';
    return out;
}

BitVector BitVector::from_hex(std::string_view text, int width) {
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) text.remove_prefix(2);
    if (text.empty() || text.size() > 16)
        throw data_format_error("bad hex vector: '" + std::string(text) + "'");
    std::uint64_t v = 0;
    for (char c : text) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw data_format_error(std::string("bad hex digit '") + c + "'");
        v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    if (width < 64 && (v >> width) != 0)
        throw data_format_error("hex value does not fit in width " + std::to_string(width));
    return BitVector(width, v);
}

BitVector operator^(const BitVector& a, const BitVector& b) {
    if (a.width != b.width) throw std::invalid_argument("BitVector xor: width mismatch");
    return BitVector(a.width, a.word ^ b.word);
}

// ---------------------------------------------------------------------------
// BitMatrix
// ---------------------------------------------------------------------------

BitMatrix::BitMatrix(int r, int c) : rows(r), cols(c), row_words(static_cast<size_t>(r), 0) {
    if (r < 1 || r > 64 || c < 1 || c > 64)
        throw std::invalid_argument("BitMatrix dimensions must be 1..64");
}

bool BitMatrix::get(int r, int c) const {
    return (row_words[static_cast<size_t>(r)] >> (cols - 1 - c)) & 1;
}

void BitMatrix::set(int r, int c, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (cols - 1 - c);
    auto& w = row_words[static_cast<size_t>(r)];
    w = v ? (w | bit) : (w & ~bit);
}

BitMatrix BitMatrix::from_text(std::string_view text) {
    std::vector<std::uint64_t> rows;
    int cols = -1;
    std::string line;
    std::istringstream in{std::string(text)};
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::uint64_t w = 0;
        int n = 0;
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            if (c != '0' && c != '1')
                throw data_format_error("matrix line " + std::to_string(lineno) +
                                        ": unexpected character '" + std::string(1, c) + "'");
            w = (w << 1) | static_cast<std::uint64_t>(c - '0');
            if (++n > 64) throw data_format_error("matrix wider than 64 columns");
        }
        if (n == 0) continue;    // blank / comment-only line
        if (cols == -1) cols = n;
        else if (n != cols)
            throw data_format_error("matrix line " + std::to_string(lineno) +
                                    ": expected " + std::to_string(cols) + " columns, got " +
                                    std::to_string(n));
        rows.push_back(w);
    }
    if (rows.empty()) throw data_format_error("matrix text contains no rows");
    BitMatrix m(static_cast<int>(rows.size()), cols);
    m.row_words = std::move(rows);
    return m;
}

std::string BitMatrix::to_text() const {
    std::string out;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) out += get(r, c) ? '1' : '0';
        out += '\n';
    }
    return out;
}

BitVector mul(const BitVector& x, const BitMatrix& m) {
    if (x.width != m.rows) throw std::invalid_argument("mul: vector width != matrix rows");
    return BitVector(m.cols, mul_word(x.word, m));
}

std::uint64_t mul_word(std::uint64_t x, const BitMatrix& m) {
    std::uint64_t acc = 0;
    for (int r = 0; r < m.rows; ++r)
        if ((x >> (m.rows - 1 - r)) & 1) acc ^= m.row_words[static_cast<size_t>(r)];
    return acc;
}

BitMatrix transpose(const BitMatrix& m) {
    BitMatrix t(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c)
            if (m.get(r, c)) t.set(c, r, true);
    return t;
}

BitMatrix identity_matrix(int n) {
    BitMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

namespace {

// Row-reduces `rows` (words of `width` bits) in place to RREF and returns the
// rank. Pivot order is by descending bit position, so the result doubles as a
// canonical subspace basis.
int rref_in_place(std::vector<std::uint64_t>& rows, int width) {
    int r = 0;
    const int n = static_cast<int>(rows.size());
    for (int bit = width - 1; bit >= 0 && r < n; --bit) {
        int pivot = -1;
        for (int k = r; k < n; ++k)
            if ((rows[static_cast<size_t>(k)] >> bit) & 1) { pivot = k; break; }
        if (pivot < 0) continue;
        std::swap(rows[static_cast<size_t>(r)], rows[static_cast<size_t>(pivot)]);
        for (int k = 0; k < n; ++k)
            if (k != r && ((rows[static_cast<size_t>(k)] >> bit) & 1))
                rows[static_cast<size_t>(k)] ^= rows[static_cast<size_t>(r)];
        ++r;
    }
    return r;
}

// Left-kernel of an augmented system: eliminates `lhs` rows while mirroring
// every operation on `tag` rows; tag rows whose lhs became zero span
// { x : x * M = 0 }.
std::vector<std::uint64_t> left_kernel_tags(std::vector<std::uint64_t> lhs,
                                            std::vector<std::uint64_t> tag,
                                            int lhs_width) {
    const int n = static_cast<int>(lhs.size());
    int r = 0;
    for (int bit = lhs_width - 1; bit >= 0 && r < n; --bit) {
        int pivot = -1;
        for (int k = r; k < n; ++k)
            if ((lhs[static_cast<size_t>(k)] >> bit) & 1) { pivot = k; break; }
        if (pivot < 0) continue;
        std::swap(lhs[static_cast<size_t>(r)], lhs[static_cast<size_t>(pivot)]);
        std::swap(tag[static_cast<size_t>(r)], tag[static_cast<size_t>(pivot)]);
        for (int k = 0; k < n; ++k)
            if (k != r && ((lhs[static_cast<size_t>(k)] >> bit) & 1)) {
                lhs[static_cast<size_t>(k)] ^= lhs[static_cast<size_t>(r)];
                tag[static_cast<size_t>(k)] ^= tag[static_cast<size_t>(r)];
            }
        ++r;
    }
    std::vector<std::uint64_t> out;
    for (int k = 0; k < n; ++k)
        if (lhs[static_cast<size_t>(k)] == 0) out.push_back(tag[static_cast<size_t>(k)]);
    return out;
}

} // namespace

int rank(const BitMatrix& m) {
    auto rows = m.row_words;
    return rref_in_place(rows, m.cols);
}

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

bool Subspace::contains(std::uint64_t x) const { return reduce(x) == 0; }

std::uint64_t Subspace::reduce(std::uint64_t x) const {
    for (std::uint64_t b : basis) {
        // XOR when x has the pivot bit of b set; pivot = highest set bit of b.
        const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(b));
        if (x & pivot) x ^= b;
    }
    return x;
}

std::vector<std::uint64_t> Subspace::elements() const {
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<size_t>(size()));
    out.push_back(0);
    for (std::uint64_t b : basis) {
        const size_t half = out.size();
        for (size_t i = 0; i < half; ++i) out.push_back(out[i] ^ b);
    }
    return out;
}

Subspace Subspace::zero(int width) { return Subspace{width, {}}; }

Subspace Subspace::full(int width) {
    Subspace s{width, {}};
    for (int i = width - 1; i >= 0; --i) s.basis.push_back(std::uint64_t{1} << i);
    return s;
}

Subspace Subspace::span_of(int width, const std::vector<std::uint64_t>& gens) {
    auto rows = gens;
    const int r = rref_in_place(rows, width);
    rows.resize(static_cast<size_t>(r));
    return Subspace{width, std::move(rows)};
}

bool span_contains(const Subspace& s, const BitVector& x) {
    if (x.width != s.ambient_width)
        throw std::invalid_argument("span_contains: width mismatch");
    return s.contains(x.word);
}

Subspace kernel(const BitMatrix& m) {
    std::vector<std::uint64_t> tags(static_cast<size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i)
        tags[static_cast<size_t>(i)] = std::uint64_t{1} << (m.rows - 1 - i);
    auto ker = left_kernel_tags(m.row_words, tags, m.cols);
    return Subspace::span_of(m.rows, ker);
}

Subspace preimage(const BitMatrix& m, const Subspace& s) {
    if (s.ambient_width != m.cols)
        throw std::invalid_argument("preimage: subspace ambient != matrix cols");
    // x*M lies in S exactly when the S-canonical representative of x*M is 0,
    // and reduction modulo S is linear, so reduce every row of M and take the
    // left kernel of the reduced matrix.
    auto reduced = m.row_words;
    for (auto& row : reduced) row = s.reduce(row);
    std::vector<std::uint64_t> tags(static_cast<size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i)
        tags[static_cast<size_t>(i)] = std::uint64_t{1} << (m.rows - 1 - i);
    auto ker = left_kernel_tags(std::move(reduced), std::move(tags), m.cols);
    return Subspace::span_of(m.rows, ker);
}

Subspace join(const Subspace& a, const Subspace& b) {
    if (a.ambient_width != b.ambient_width)
        throw std::invalid_argument("join: ambient width mismatch");
    auto gens = a.basis;
    gens.insert(gens.end(), b.basis.begin(), b.basis.end());
    return Subspace::span_of(a.ambient_width, gens);
}

Subspace complement(const Subspace& s) {
    if (s.is_zero()) return Subspace::full(s.ambient_width);
    // y is orthogonal to the whole space iff y * transpose(basis-matrix) = 0.
    BitMatrix bt(s.ambient_width, s.dim());
    for (int j = 0; j < s.dim(); ++j)
        for (int i = 0; i < s.ambient_width; ++i)
            if ((s.basis[static_cast<size_t>(j)] >> (s.ambient_width - 1 - i)) & 1)
                bt.set(i, j, true);
    return kernel(bt);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    return complement(join(complement(a), complement(b)));
}

std::uint64_t subspace_count(int n, int max_dim) {
    // Sum of Gaussian binomials [n choose k]_2 for k = 0..max_dim, via the
    // recurrence G(n,k) = G(n-1,k-1) + 2^k * G(n-1,k). Saturates at 2^63 so
    // oversized counts still compare correctly against enumeration caps.
    constexpr std::uint64_t kSat = std::uint64_t{1} << 63;
    auto sat_add = [](std::uint64_t a, std::uint64_t b) {
        return (a >= kSat || b >= kSat || a + b >= kSat) ? kSat : a + b;
    };
    auto sat_shift = [](std::uint64_t a, int sh) {
        if (a == 0) return a;
        return (sh >= 63 || a >= (kSat >> sh)) ? kSat : (a << sh);
    };
    max_dim = std::min(max_dim, n);
    std::vector<std::uint64_t> g(static_cast<size_t>(max_dim) + 1, 0);
    g[0] = 1;
    for (int row = 1; row <= n; ++row)
        for (int k = std::min(row, max_dim); k >= 1; --k)
            g[static_cast<size_t>(k)] =
                sat_add(g[static_cast<size_t>(k - 1)],
                        sat_shift(g[static_cast<size_t>(k)], k));
    std::uint64_t total = 0;
    for (std::uint64_t v : g) total = sat_add(total, v);
    return total;
}

void for_each_subspace(int n, int max_dim,
                       const std::function<void(const Subspace&)>& fn,
                       std::uint64_t cap) {
    if (n < 0 || n > 32) throw domain_too_large("for_each_subspace: n > 32");
    max_dim = std::min(max_dim, n);
    const std::uint64_t count = subspace_count(n, max_dim);
    if (count > cap)
        throw domain_too_large("for_each_subspace: " + std::to_string(count) +
                               " subspaces exceeds cap " + std::to_string(cap));

    // Enumerate RREF bases directly: choose pivot columns, then fill the free
    // entries to the right of each pivot (excluding other pivot columns).
    fn(Subspace::zero(n));
    for (int k = 1; k <= max_dim; ++k) {
        std::vector<int> piv(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) piv[static_cast<size_t>(i)] = i;
        while (true) {
            // Free positions per basis row: columns after the row's pivot that
            // are not pivots themselves.
            std::vector<std::vector<int>> free_cols(static_cast<size_t>(k));
            int total_free = 0;
            for (int i = 0; i < k; ++i) {
                for (int c = piv[static_cast<size_t>(i)] + 1; c < n; ++c) {
                    bool is_pivot = false;
                    for (int j = 0; j < k; ++j)
                        if (piv[static_cast<size_t>(j)] == c) { is_pivot = true; break; }
                    if (!is_pivot) free_cols[static_cast<size_t>(i)].push_back(c);
                }
                total_free += static_cast<int>(free_cols[static_cast<size_t>(i)].size());
            }
            const std::uint64_t fills = std::uint64_t{1} << total_free;
            for (std::uint64_t fill = 0; fill < fills; ++fill) {
                Subspace s{n, std::vector<std::uint64_t>(static_cast<size_t>(k), 0)};
                int bit = 0;
                for (int i = 0; i < k; ++i) {
                    std::uint64_t row = std::uint64_t{1} << (n - 1 - piv[static_cast<size_t>(i)]);
                    for (int c : free_cols[static_cast<size_t>(i)]) {
                        if ((fill >> bit) & 1) row |= std::uint64_t{1} << (n - 1 - c);
                        ++bit;
                    }
                    s.basis[static_cast<size_t>(i)] = row;
                }
                fn(s);
            }
            // Next pivot combination (lexicographic).
            int i = k - 1;
            while (i >= 0 && piv[static_cast<size_t>(i)] == n - k + i) --i;
            if (i < 0) break;
            ++piv[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                piv[static_cast<size_t>(j)] = piv[static_cast<size_t>(j - 1)] + 1;
        }
    }
}

std::vector<Subspace> enumerate_subspaces(int n, int max_dim, std::uint64_t cap) {
    std::vector<Subspace> out;
    for_each_subspace(n, max_dim, [&](const Subspace& s) { out.push_back(s); }, cap);
    return out;
}

} // namespace wavekit
