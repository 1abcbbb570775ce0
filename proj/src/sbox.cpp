#include "wavekit/sbox.hpp"

#include "wavekit/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

namespace wavekit {

// ---------------------------------------------------------------------------
// SBoxTable I/O
// ---------------------------------------------------------------------------

SBoxTable SBoxTable::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    // Strip comments, collect tokens.
    std::vector<std::string> tokens;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    if (tokens.size() < 3 || tokens[0] != "sbox" ||
        tokens[1].rfind("s=", 0) != 0 || tokens[2].rfind("t=", 0) != 0)
        throw data_format_error("sbox file must start with 'sbox s=<s> t=<t>'");
    SBoxTable f;
    f.in_bits = std::stoi(tokens[1].substr(2));
    f.out_bits = std::stoi(tokens[2].substr(2));
    if (f.in_bits < 1 || f.in_bits > 16 || f.out_bits < 1 || f.out_bits > 31)
        throw data_format_error("sbox dimensions out of range");
    const size_t expect = size_t{1} << f.in_bits;
    if (tokens.size() != 3 + expect)
        throw data_format_error("sbox file: expected " + std::to_string(expect) +
                                " outputs, got " + std::to_string(tokens.size() - 3));
    for (size_t i = 3; i < tokens.size(); ++i) {
        const auto v = BitVector::from_hex(tokens[i], f.out_bits);
        f.table.push_back(static_cast<std::uint32_t>(v.word));
    }
    return f;
}

std::string SBoxTable::to_text() const {
    std::string out = "sbox s=" + std::to_string(in_bits) + " t=" + std::to_string(out_bits) + "\n";
    for (std::uint32_t v : table)
        out += BitVector(out_bits, v).to_hex() + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Differential statistics
// ---------------------------------------------------------------------------

DDTable ddt(const SBoxTable& f) {
    DDTable d;
    d.s = f.in_bits;
    d.t = f.out_bits;
    d.counts.assign(size_t{1} << (d.s + d.t), 0);
    const std::uint32_t n = f.domain_size();
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t x = 0; x < n; ++x)
            ++d.counts[(static_cast<size_t>(u) << d.t) | (f(x) ^ f(x ^ u))];
    return d;
}

int differential_uniformity(const SBoxTable& f) {
    const DDTable d = ddt(f);
    const std::uint32_t n = f.domain_size();
    int best = 0;
    for (std::uint32_t u = 1; u < n; ++u)
        for (std::uint32_t v = 0; v < (std::uint32_t{1} << d.t); ++v)
            best = std::max(best, d.at(u, v));
    return best;
}

bool is_apn(const SBoxTable& f) { return differential_uniformity(f) == 2; }

int derivative_image_size(const SBoxTable& f, std::uint32_t u) {
    std::set<std::uint32_t> img;
    for (std::uint32_t x = 0; x < f.domain_size(); ++x)
        img.insert(f(x) ^ f(x ^ u));
    return static_cast<int>(img.size());
}

bool is_weakly_delta_du(const SBoxTable& f, int delta) {
    if (delta < 1) throw std::invalid_argument("is_weakly_delta_du: delta >= 1 required");
    // |Im f^_u| > 2^{s-1} / delta, checked in integers as delta*|Im| > 2^{s-1}.
    const long long half = 1LL << (f.in_bits - 1);
    for (std::uint32_t u = 1; u < f.domain_size(); ++u)
        if (static_cast<long long>(delta) * derivative_image_size(f, u) <= half)
            return false;
    return true;
}

std::vector<std::uint32_t> image_sum_set(const SBoxTable& f) {
    std::set<std::uint32_t> sums;
    for (std::uint32_t x = 0; x < f.domain_size(); ++x)
        for (std::uint32_t y = 0; y < f.domain_size(); ++y)
            sums.insert(f(x) ^ f(y));
    return {sums.begin(), sums.end()};
}

std::vector<std::uint32_t> missing_sum_vectors(const SBoxTable& f) {
    const auto present = image_sum_set(f);
    std::vector<std::uint32_t> out;
    std::uint32_t next = 0;
    for (std::uint32_t v : present) {
        for (; next < v; ++next) out.push_back(next);
        next = v + 1;
    }
    for (; next < (std::uint32_t{1} << f.out_bits); ++next) out.push_back(next);
    return out;
}

bool is_injective(const SBoxTable& f) {
    auto seen = f.table;
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

// ---------------------------------------------------------------------------
// Linear statistics
// ---------------------------------------------------------------------------

LATable lat(const SBoxTable& f) {
    LATable l;
    l.s = f.in_bits;
    l.t = f.out_bits;
    const std::uint32_t nin = f.domain_size();
    const std::uint32_t nout = std::uint32_t{1} << f.out_bits;
    l.corr.assign(static_cast<size_t>(nin) * nout, 0);
    for (std::uint32_t a = 0; a < nin; ++a)
        for (std::uint32_t b = 0; b < nout; ++b) {
            int match = 0;
            for (std::uint32_t x = 0; x < nin; ++x) {
                const int lhs = std::popcount(a & x) & 1;
                const int rhs = std::popcount(b & f(x)) & 1;
                if (lhs == rhs) ++match;
            }
            l.corr[(static_cast<size_t>(a) << l.t) | b] = match - (1 << (l.s - 1));
        }
    return l;
}

Rational make_rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    return g ? Rational{num / g, den / g} : Rational{0, 1};
}

Rational max_bias(const SBoxTable& f) {
    const LATable l = lat(f);
    int best = 0;
    for (std::uint32_t a = 1; a < f.domain_size(); ++a)
        for (std::uint32_t b = 1; b < (std::uint32_t{1} << f.out_bits); ++b)
            best = std::max(best, std::abs(l.at(a, b)));
    return make_rational(best, 1LL << f.in_bits);
}

// ---------------------------------------------------------------------------
// Non-invariance
// ---------------------------------------------------------------------------

NonInvarianceResult is_delta_non_invariant(const SBoxTable& f,
                                           const Subspace& kernel_brick,
                                           int delta) {
    const int s = f.in_bits;
    const int t = f.out_bits;
    if (s > 6 || t > 7)
        throw domain_too_large("is_delta_non_invariant: s > 6 or t > 7");
    if (!is_injective(f) || !f.maps_zero_to_zero())
        throw std::invalid_argument("is_delta_non_invariant: table must be injective with f(0)=0");
    if (kernel_brick.ambient_width != t)
        throw std::invalid_argument("is_delta_non_invariant: kernel brick width != t");
    if (delta < 0 || delta >= s)
        throw std::invalid_argument("is_delta_non_invariant: need 0 <= delta < s");

    const auto kernel_elems = kernel_brick.elements();
    NonInvarianceResult result;
    result.non_invariant = true;

    for_each_subspace(s, s - 1, [&](const Subspace& vprime) {
        if (!result.non_invariant) return;   // already falsified
        // Materialize the point set {f(v) ^ k : v in V', k in kernel brick}.
        std::vector<bool> in_set(size_t{1} << t, false);
        std::uint64_t count = 0;
        for (std::uint64_t v : vprime.elements())
            for (std::uint64_t k : kernel_elems) {
                const std::uint64_t p = f(static_cast<std::uint32_t>(v)) ^ k;
                if (!in_set[p]) { in_set[p] = true; ++count; }
            }
        // The set can only equal a subspace W' if it is one: a power-of-two
        // size, closed under xor. Then W' is determined, and the quantified
        // condition bites exactly when W' is proper with dim >= s - delta.
        if ((count & (count - 1)) != 0) return;
        if (count == (std::uint64_t{1} << t)) return;     // W' must be proper
        std::vector<std::uint64_t> pts;
        for (std::uint64_t p = 0; p < (std::uint64_t{1} << t); ++p)
            if (in_set[p]) pts.push_back(p);
        const Subspace w = Subspace::span_of(t, pts);
        if (w.size() != count) return;                    // not xor-closed
        if (w.dim() >= s - delta) {
            result.non_invariant = false;
            result.violating_v = vprime;
            result.violating_w = w;
        }
    });
    return result;
}

} // namespace wavekit
