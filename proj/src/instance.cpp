#include "wavekit/instance.hpp"

#include "wavekit/errors.hpp"

#include <bit>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wavekit {

namespace {

// Reference copy of the shipped S-box, used only to cross-check the data
// file transcription.
constexpr std::uint32_t kGamma1[16] = {0x00, 0x0B, 0x1B, 0x08, 0x1D, 0x17, 0x12, 0x04,
                                       0x0D, 0x14, 0x01, 0x1E, 0x18, 0x02, 0x0E, 0x07};

// Expected DDT of the shipped S-box: row 0 is 16 at column 0; every other row
// has the value 2 at exactly these eight columns and 0 elsewhere.
constexpr std::uint32_t kDdtTwos[15][8] = {
    {0x09, 0x0A, 0x0B, 0x13, 0x16, 0x19, 0x1A, 0x1F},
    {0x03, 0x05, 0x0A, 0x0C, 0x0F, 0x13, 0x16, 0x1B},
    {0x05, 0x08, 0x0C, 0x10, 0x13, 0x15, 0x19, 0x1F},
    {0x09, 0x0C, 0x0F, 0x15, 0x16, 0x19, 0x1C, 0x1D},
    {0x06, 0x0C, 0x0F, 0x10, 0x16, 0x17, 0x1A, 0x1F},
    {0x03, 0x06, 0x0F, 0x12, 0x13, 0x19, 0x1C, 0x1F},
    {0x03, 0x04, 0x06, 0x0A, 0x0C, 0x15, 0x19, 0x1A},
    {0x03, 0x05, 0x0D, 0x15, 0x16, 0x1A, 0x1C, 0x1F},
    {0x05, 0x06, 0x09, 0x0A, 0x0F, 0x14, 0x15, 0x1F},
    {0x01, 0x06, 0x0A, 0x10, 0x13, 0x15, 0x16, 0x1C},
    {0x05, 0x0A, 0x0F, 0x10, 0x19, 0x1A, 0x1C, 0x1E},
    {0x03, 0x09, 0x0F, 0x10, 0x13, 0x15, 0x18, 0x1A},
    {0x02, 0x05, 0x06, 0x09, 0x0C, 0x13, 0x1A, 0x1C},
    {0x03, 0x09, 0x0A, 0x0C, 0x0E, 0x10, 0x1C, 0x1F},
    {0x03, 0x05, 0x06, 0x07, 0x09, 0x10, 0x16, 0x19},
};

// Transcription checksum for the 40x32 matrix: the single 1 of row i (1-based)
// sits in this 1-based column. Each consecutive group of five rows is one
// input brick; rows 1 and 5 of each group collide, which is exactly what puts
// the local vector 10001 in the kernel.
constexpr int kRowToCol[40] = {
    1,  17, 2,  18, 1,    // brick 1
    3,  19, 4,  20, 3,    // brick 2
    5,  21, 6,  22, 5,    // brick 3
    7,  23, 8,  24, 7,    // brick 4
    9,  25, 10, 26, 9,    // brick 5
    11, 27, 12, 28, 11,   // brick 6
    13, 29, 14, 30, 13,   // brick 7
    15, 31, 16, 32, 15,   // brick 8
};

constexpr int kBricks = 8;
constexpr int kSBits = 4;
constexpr int kTBits = 5;
constexpr std::uint32_t kKernelBrickValue = 0x11;   // local 10001
constexpr std::uint32_t kMissingSum = 0x11;

void require(std::vector<CertificationCheck>& checks, const std::string& name, bool ok,
             const std::string& detail) {
    checks.push_back({name, ok, detail});
    if (!ok)
        throw certification_failed(name + ": " + detail);
}

std::string hex32(std::uint32_t v) {
    std::ostringstream out;
    out << "0x" << std::hex << std::uppercase << v;
    return out.str();
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_format_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
        throw data_format_error("read error on '" + path + "'");
    return buf.str();
}

std::string default_data_dir() {
    if (const char* env = std::getenv("WAVEKIT_DATA_DIR"); env != nullptr && *env != '\0')
        return env;
#ifdef WAVEKIT_DATA_DIR
    return WAVEKIT_DATA_DIR;
#else
    return "data";
#endif
}

PaperInstance certify_instance(const SBoxTable& gamma1, const BitMatrix& lambda) {
    PaperInstance inst;
    inst.gamma1 = gamma1;
    auto& checks = inst.certification;

    // --- S-box ---
    require(checks, "sbox-shape",
            gamma1.in_bits == kSBits && gamma1.out_bits == kTBits &&
                gamma1.table.size() == 16,
            "expected a 4-to-5-bit table with 16 entries");
    require(checks, "sbox-zero-fixed", gamma1.maps_zero_to_zero(), "table must map 0 to 0");
    require(checks, "sbox-injective", is_injective(gamma1), "table entries must be distinct");

    {
        bool match = true;
        std::uint32_t bad_u = 0, bad_v = 0;
        const DDTable d = ddt(gamma1);
        for (std::uint32_t u = 0; u < 16 && match; ++u) {
            for (std::uint32_t v = 0; v < 32 && match; ++v) {
                int expect = 0;
                if (u == 0) {
                    expect = v == 0 ? 16 : 0;
                } else {
                    for (std::uint32_t c : kDdtTwos[u - 1])
                        if (c == v)
                            expect = 2;
                }
                if (d.at(u, v) != expect) {
                    match = false;
                    bad_u = u;
                    bad_v = v;
                }
            }
        }
        require(checks, "sbox-ddt-table", match,
                match ? "all 512 cells match the reference table"
                      : "DDT mismatch at (" + hex32(bad_u) + ", " + hex32(bad_v) + ")");
    }
    require(checks, "sbox-apn", differential_uniformity(gamma1) == 2,
            "differential uniformity must be exactly 2");
    {
        const auto sums = image_sum_set(gamma1);
        const auto missing = missing_sum_vectors(gamma1);
        require(checks, "sbox-sum-set",
                sums.size() == 31 && missing.size() == 1 && missing[0] == kMissingSum,
                "image sum set must cover 31 vectors, missing exactly 0x11");
    }
    require(checks, "sbox-max-bias", max_bias(gamma1) == make_rational(1, 4),
            "maximum linear bias must be exactly 1/4");

    // --- Diffusion layer ---
    require(checks, "matrix-shape", lambda.rows == 40 && lambda.cols == 32,
            "expected a 40x32 matrix");
    require(checks, "matrix-rank", rank(lambda) == 32,
            "matrix rank must be 32 (surjective); got " + std::to_string(rank(lambda)));
    {
        bool single = true;
        int bad_row = 0;
        for (int r = 0; r < 40 && single; ++r)
            if (std::popcount(lambda.row_words[static_cast<size_t>(r)]) != 1) {
                single = false;
                bad_row = r;
            }
        require(checks, "matrix-row-support", single,
                single ? "every row has exactly one 1"
                       : "row " + std::to_string(bad_row + 1) + " does not have exactly one 1");
    }
    {
        bool match = true;
        int bad_row = 0;
        for (int r = 0; r < 40 && match; ++r)
            if (!lambda.get(r, kRowToCol[r] - 1)) {
                match = false;
                bad_row = r;
            }
        require(checks, "matrix-transcription", match,
                match ? "row-to-column routing matches the reference transcript"
                      : "row " + std::to_string(bad_row + 1) + " routes to the wrong column");
    }

    const BrickLayout layout{kBricks, kSBits, kTBits};
    DiffusionLayer layer{layout, lambda};

    inst.kernel_report = parallel_kernel_report(layer);
    require(checks, "kernel-dimension", inst.kernel_report.kern.dim() == 8,
            "kernel dimension must be 8");
    {
        std::vector<std::uint64_t> gens;
        for (int j = 1; j <= kBricks; ++j)
            gens.push_back(layout.w_place(kKernelBrickValue, j));
        const Subspace expected = Subspace::span_of(layout.m(), gens);
        require(checks, "kernel-span",
                expected.basis == inst.kernel_report.kern.basis,
                "kernel must equal the span of the per-brick 10001 vectors");
    }
    {
        bool bricks_ok = inst.kernel_report.parallel &&
                         inst.kernel_report.brick_dims.size() == kBricks;
        for (int d : inst.kernel_report.brick_dims)
            bricks_ok = bricks_ok && d == 1;
        require(checks, "kernel-parallel", bricks_ok,
                "kernel must decompose as one dimension per brick");
    }

    inst.proper_report = is_proper(layer);
    require(checks, "proper",
            inst.proper_report.proper && inst.proper_report.walls_checked == 254,
            "layer must be proper across all 254 walls");

    inst.branch = branch_number(layer);
    require(checks, "branch-number",
            inst.branch.exact && inst.branch.value == 2 && inst.branch.witness_input &&
                inst.branch.witness_output,
            "branch number must be exactly 2 with a witness");

    // --- Assembled wave function ---
    inst.spec.layout = layout;
    inst.spec.sboxes.assign(kBricks, gamma1);
    inst.spec.lambda = std::move(layer);
    inst.spec.validate();

    inst.bijectivity = wave_is_bijective(inst.spec);
    require(checks, "wave-bijective",
            inst.bijectivity.bijective && inst.bijectivity.used_parallel_path,
            "wave function must certify bijective via the per-brick criterion");

    return inst;
}

PaperInstance build_paper_instance(const std::string& data_dir) {
    const SBoxTable gamma1 = SBoxTable::from_text(read_text_file(data_dir + "/gamma1.sbox"));
    const BitMatrix lambda = BitMatrix::from_text(read_text_file(data_dir + "/lambda40x32.mat"));

    // Guard against simultaneous edits of the data file and the reference:
    // the in-binary table is authoritative for what "the shipped S-box" is.
    for (std::uint32_t x = 0; x < 16; ++x)
        if (gamma1.table[x] != kGamma1[x])
            throw certification_failed("sbox-reference: entry for input " + hex32(x) +
                                       " differs from the reference table");

    return certify_instance(gamma1, lambda);
}

PaperInstance build_paper_instance() { return build_paper_instance(default_data_dir()); }

FeistelCipher PaperInstance::cipher(const std::vector<BitVector>& round_keys) const {
    return FeistelCipher(spec, round_keys);
}

FeistelCipher PaperInstance::cipher_from_master(std::uint64_t master, int rounds) const {
    return FeistelCipher(spec, test_only_key_expansion(master, rounds, spec.layout.n()));
}

// ---------------------------------------------------------------------------
// Aggregated analysis
// ---------------------------------------------------------------------------

AnalysisReport full_analysis_report(const PaperInstance& inst) {
    AnalysisReport rep;
    rep.certification = inst.certification;
    rep.sbox_ddt = ddt(inst.gamma1);
    rep.sum_set = image_sum_set(inst.gamma1);
    rep.missing_sums = missing_sum_vectors(inst.gamma1);
    rep.sbox_max_bias = max_bias(inst.gamma1);
    rep.lambda_rank = rank(inst.spec.lambda.matrix);
    rep.kernel_dim = inst.kernel_report.kern.dim();
    rep.parallel_kernel = inst.kernel_report.parallel;
    rep.proper = inst.proper_report.proper;
    rep.walls_checked = inst.proper_report.walls_checked;
    rep.branch_number = inst.branch.value;
    rep.connectivity = brick_connectivity(inst.spec.lambda);
    rep.active_three_rounds = min_active_sboxes(inst.spec, 3);
    rep.diff_three_rounds = differential_bound(inst.spec, 3);
    rep.diff_default_rounds = differential_bound(inst.spec, inst.default_rounds);
    rep.linear_three_rounds = linear_bound(inst.spec, 3);
    rep.linear_default_rounds = linear_bound(inst.spec, inst.default_rounds);
    rep.primitivity_checklist = verify_sufficient_conditions(inst.spec, 1);
    return rep;
}

namespace {

std::string render_ratio(const Rational& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::string render_log2(const std::optional<long long>& v) {
    return v ? "2^" + std::to_string(*v) : "(not dyadic)";
}

} // namespace

std::string render_text(const AnalysisReport& rep) {
    std::ostringstream out;
    out << "== Certification ==\n";
    for (const CertificationCheck& c : rep.certification)
        out << "  [" << (c.passed ? "ok" : "FAIL") << "] " << c.name << ": " << c.detail
            << "\n";

    out << "\n== S-box ==\n";
    out << "  difference distribution table (rows = input difference, 16 x 32):\n";
    for (std::uint32_t u = 0; u < 16; ++u) {
        out << "    ";
        for (std::uint32_t v = 0; v < 32; ++v) {
            const int c = rep.sbox_ddt.at(u, v);
            out << (c == 0 ? " ." : (c < 10 ? " " + std::to_string(c) : std::to_string(c)));
        }
        out << "\n";
    }
    out << "  sum-set size: " << rep.sum_set.size() << "\n";
    out << "  missing sum vectors:";
    for (std::uint32_t v : rep.missing_sums)
        out << " " << BitVector(5, v).to_hex();
    out << "\n  max linear bias: " << render_ratio(rep.sbox_max_bias) << "\n";

    out << "\n== Diffusion layer ==\n";
    out << "  rank: " << rep.lambda_rank << "\n";
    out << "  kernel dimension: " << rep.kernel_dim << "\n";
    out << "  parallel kernel: " << (rep.parallel_kernel ? "yes" : "no") << "\n";
    out << "  proper: " << (rep.proper ? "yes" : "no") << " (" << rep.walls_checked
        << " walls checked)\n";
    out << "  branch number: " << rep.branch_number << "\n";
    out << "  brick connectivity (input brick -> output bricks):\n";
    for (size_t j = 0; j < rep.connectivity.size(); ++j) {
        out << "    " << (j + 1) << " ->";
        for (size_t q = 0; q < rep.connectivity[j].size(); ++q)
            if (rep.connectivity[j][q])
                out << " " << (q + 1);
        out << "\n";
    }

    out << "\n== Differential bounds ==\n";
    out << "  min active S-boxes over 3 rounds: " << rep.active_three_rounds.min_active
        << " (pattern " << rep.active_three_rounds.pattern() << ")\n";
    out << "  best single-trail probability, 3 rounds:  "
        << render_log2(rep.diff_three_rounds.diff_prob_log2) << "\n";
    out << "  best single-trail probability, " << rep.diff_default_rounds.rounds
        << " rounds: " << render_log2(rep.diff_default_rounds.diff_prob_log2) << "\n";

    out << "\n== Linear bounds ==\n";
    out << "  bias, 3 rounds:  " << render_log2(rep.linear_three_rounds.bias_log2) << "\n";
    out << "  bias, " << rep.linear_default_rounds.rounds
        << " rounds: " << render_log2(rep.linear_default_rounds.bias_log2) << "\n";
    out << "  data complexity: " << render_log2(rep.linear_default_rounds.data_complexity_log2)
        << " known plaintexts\n";

    out << "\n== Primitivity sufficient conditions (delta = 1) ==\n";
    for (const HypothesisVerdict& h : rep.primitivity_checklist.hypotheses)
        out << "  [" << (h.holds ? "ok" : "no") << "] " << h.name << ": " << h.detail << "\n";
    {
        const SufficientConditionsReport& cl = rep.primitivity_checklist;
        out << "  sufficient conditions met: " << (cl.hypotheses_hold ? "yes" : "no");
        if (cl.hypotheses_hold) {
            out << " (route: ";
            if (cl.route_uniformity)
                out << "differential uniformity + non-invariance";
            else if (cl.route_weak_uniformity)
                out << "weak differential uniformity + non-invariance";
            else
                out << "differential uniformity + relaxed invariance";
            out << ")";
        }
        out << "\n";
    }
    const char* conclusion = "not applicable";
    switch (rep.primitivity_checklist.conclusion) {
    case ConclusionStatus::not_applicable: break;
    case ConclusionStatus::primitive_confirmed: conclusion = "primitive (verified exhaustively)"; break;
    case ConclusionStatus::hypotheses_hold_conclusion_by_theorem:
        conclusion = "primitive (hypotheses verified; conclusion by the sufficient-condition "
                     "theorem, domain too large to enumerate)";
        break;
    }
    out << "  conclusion: " << conclusion << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Known-answer tests
// ---------------------------------------------------------------------------

namespace {

std::uint64_t parse_hex64(std::string_view text, const std::string& what) {
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0)
        text.remove_prefix(2);
    if (text.empty() || text.size() > 16)
        throw data_format_error("bad " + what + " value '" + std::string(text) + "'");
    std::uint64_t v = 0;
    for (char c : text) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw data_format_error("bad " + what + " value '" + std::string(text) + "'");
        v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    return v;
}

std::string hex16(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << std::nouppercase;
    out.width(16);
    out.fill('0');
    out << v;
    return out.str();
}

// xorshift64* step; fixed, documented walk so KAT generation is reproducible.
std::uint64_t next_rand(std::uint64_t& state) {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return state * 0x2545F4914F6CDD1DULL;
}

} // namespace

std::vector<KatRecord> parse_kat_records(std::string_view text) {
    std::vector<KatRecord> records;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find('#'); pos != std::string::npos)
            line.erase(pos);
        std::istringstream ls(line);
        std::string tok;
        KatRecord rec;
        int seen = 0;
        while (ls >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw data_format_error("KAT line " + std::to_string(line_no) +
                                        ": expected key=value, got '" + tok + "'");
            const std::string key = tok.substr(0, eq);
            const std::string value = tok.substr(eq + 1);
            if (key == "master") rec.master = parse_hex64(value, "master");
            else if (key == "rounds") {
                std::size_t used = 0;
                int parsed = 0;
                try {
                    parsed = std::stoi(value, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != value.size())
                    throw data_format_error("KAT line " + std::to_string(line_no) +
                                            ": rounds must be a decimal integer, got '" +
                                            value + "'");
                rec.rounds = parsed;
            }
            else if (key == "pt") rec.pt = parse_hex64(value, "pt");
            else if (key == "ct") rec.ct = parse_hex64(value, "ct");
            else
                throw data_format_error("KAT line " + std::to_string(line_no) +
                                        ": unknown field '" + key + "'");
            ++seen;
        }
        if (seen == 0)
            continue;   // blank or comment-only line
        if (seen != 4)
            throw data_format_error("KAT line " + std::to_string(line_no) +
                                    ": expected master/rounds/pt/ct");
        if (rec.rounds < 1)
            throw data_format_error("KAT line " + std::to_string(line_no) +
                                    ": rounds must be positive");
        records.push_back(rec);
    }
    return records;
}

std::string render_kat_records(const std::vector<KatRecord>& records) {
    std::ostringstream out;
    for (const KatRecord& r : records)
        out << "master=" << hex16(r.master) << " rounds=" << r.rounds << " pt=" << hex16(r.pt)
            << " ct=" << hex16(r.ct) << "\n";
    return out.str();
}

KatVerification verify_kats(const PaperInstance& inst, const std::vector<KatRecord>& records) {
    KatVerification result;
    result.total = records.size();
    for (size_t i = 0; i < records.size(); ++i) {
        const KatRecord& rec = records[i];
        const FeistelCipher c = inst.cipher_from_master(rec.master, rec.rounds);
        const bool ok =
            feistel_encrypt64(c, rec.pt) == rec.ct && feistel_decrypt64(c, rec.ct) == rec.pt;
        if (ok)
            ++result.passed;
        else
            result.failed_indices.push_back(i);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Built-in toy specs
// ---------------------------------------------------------------------------

namespace {

WaveSpec assemble_spec(int b, int s, int t, std::vector<std::vector<std::uint32_t>> tables,
                       const std::vector<std::uint64_t>& lambda_rows) {
    WaveSpec spec;
    spec.layout = {b, s, t};
    for (auto& tab : tables) {
        SBoxTable f;
        f.in_bits = s;
        f.out_bits = t;
        f.table = std::move(tab);
        spec.sboxes.push_back(std::move(f));
    }
    BitMatrix m(b * t, b * s);
    m.row_words = lambda_rows;
    spec.lambda = {spec.layout, std::move(m)};
    spec.validate();
    return spec;
}

} // namespace

WaveSpec toy_spec(int b, int s, int t) {
    if (b == 1 && s == 2 && t == 3)
        return assemble_spec(1, 2, 3, {{0, 3, 5, 6}}, {0b10, 0b01, 0b11});
    if (b == 2 && s == 2 && t == 3)
        return assemble_spec(2, 2, 3, {{0, 3, 5, 1}, {0, 3, 5, 1}},
                             {0xE, 0xF, 0x1, 0x2, 0x4, 0x8});
    if (b == 2 && s == 3 && t == 3) {
        const std::vector<std::uint32_t> cube = {0, 1, 3, 4, 5, 6, 7, 2};
        // Block shape [[0, I], [I, I]]: brick 1 feeds output brick 2; brick 2
        // feeds both. Invertible, trivial kernel, proper.
        std::vector<std::uint64_t> rows;
        for (int i = 0; i < 3; ++i)
            rows.push_back(std::uint64_t{1} << (2 - i));
        for (int i = 0; i < 3; ++i)
            rows.push_back((std::uint64_t{1} << (5 - i)) | (std::uint64_t{1} << (2 - i)));
        return assemble_spec(2, 3, 3, {cube, cube}, rows);
    }
    if (b == 2 && s == 4 && t == 5) {
        const std::vector<std::uint32_t> g1(std::begin(kGamma1), std::end(kGamma1));
        const int row_to_col[10] = {1, 5, 2, 6, 1, 3, 7, 4, 8, 3};
        std::vector<std::uint64_t> rows;
        for (int c : row_to_col)
            rows.push_back(std::uint64_t{1} << (8 - c));
        return assemble_spec(2, 4, 5, {g1, g1}, rows);
    }
    throw data_format_error("no built-in toy spec with b=" + std::to_string(b) +
                            " s=" + std::to_string(s) + " t=" + std::to_string(t));
}

std::vector<std::array<int, 3>> toy_spec_catalog() {
    return {{1, 2, 3}, {2, 2, 3}, {2, 3, 3}, {2, 4, 5}};
}

std::vector<KatRecord> generate_kats(const PaperInstance& inst, int count, int rounds,
                                     std::uint64_t seed) {
    if (count < 1)
        throw std::invalid_argument("generate_kats: count >= 1 required");
    if (rounds < 1)
        throw std::invalid_argument("generate_kats: rounds >= 1 required");
    std::uint64_t state = seed ? seed : 0x9E3779B97F4A7C15ULL;
    std::vector<KatRecord> records;
    records.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        KatRecord rec;
        rec.master = next_rand(state);
        rec.rounds = rounds;
        rec.pt = next_rand(state);
        const FeistelCipher c = inst.cipher_from_master(rec.master, rec.rounds);
        rec.ct = feistel_encrypt64(c, rec.pt);
        records.push_back(rec);
    }
    return records;
}

} // namespace wavekit
