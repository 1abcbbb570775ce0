#pragma once

// The shipped 64-bit wave cipher: eight copies of a 4-to-5-bit APN S-box
// behind a 40x32 bit-routing matrix with a parallel kernel, 48 rounds by
// default. Construction loads the two data files, re-derives every claimed
// property, and refuses to hand out an uncertified cipher.

#include "wavekit/diffusion.hpp"
#include "wavekit/groups.hpp"
#include "wavekit/sbox.hpp"
#include "wavekit/trails.hpp"
#include "wavekit/wave.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wavekit {

// Directory holding gamma1.sbox / lambda40x32.mat / kats_r48.txt: the
// WAVEKIT_DATA_DIR environment variable when set, else the path baked in at
// build time.
std::string default_data_dir();

struct CertificationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct PaperInstance {
    WaveSpec spec;
    int default_rounds = 48;
    SBoxTable gamma1;
    BijectivityCertificate bijectivity;
    ParallelKernelReport kernel_report;
    ProperReport proper_report;
    BranchNumberResult branch;
    std::vector<CertificationCheck> certification;

    FeistelCipher cipher(const std::vector<BitVector>& round_keys) const;
    FeistelCipher cipher_from_master(std::uint64_t master, int rounds) const;
};

// Assemble from already-parsed components and run the full certification;
// throws certification_failed naming the first violated invariant. This is
// the single code path behind both file loading and the mutation tests.
PaperInstance certify_instance(const SBoxTable& gamma1, const BitMatrix& lambda);

// Load gamma1.sbox and lambda40x32.mat from the directory and certify.
PaperInstance build_paper_instance(const std::string& data_dir);
PaperInstance build_paper_instance();   // default_data_dir()

// ---------------------------------------------------------------------------
// Aggregated analysis
// ---------------------------------------------------------------------------

struct AnalysisReport {
    std::vector<CertificationCheck> certification;
    DDTable sbox_ddt;
    std::vector<std::uint32_t> sum_set;
    std::vector<std::uint32_t> missing_sums;
    Rational sbox_max_bias;
    int lambda_rank = 0;
    int kernel_dim = 0;
    bool parallel_kernel = false;
    bool proper = false;
    int walls_checked = 0;
    int branch_number = 0;
    std::vector<std::vector<bool>> connectivity;   // [input brick][output brick]
    MinActiveResult active_three_rounds;
    BoundLedger diff_three_rounds;
    BoundLedger diff_default_rounds;
    BoundLedger linear_three_rounds;
    BoundLedger linear_default_rounds;
    SufficientConditionsReport primitivity_checklist;   // delta = 1
};

AnalysisReport full_analysis_report(const PaperInstance& inst);
std::string render_text(const AnalysisReport& rep);

// ---------------------------------------------------------------------------
// Known-answer tests
// ---------------------------------------------------------------------------

// Line format: `master=<hex16> rounds=<r> pt=<hex16> ct=<hex16>` where the
// 64-bit plaintext/ciphertext concatenate the halves, left half most
// significant.
struct KatRecord {
    std::uint64_t master = 0;
    int rounds = 0;
    std::uint64_t pt = 0;
    std::uint64_t ct = 0;

    friend bool operator==(const KatRecord& a, const KatRecord& b) = default;
};

std::vector<KatRecord> parse_kat_records(std::string_view text);
std::string render_kat_records(const std::vector<KatRecord>& records);

struct KatVerification {
    std::size_t total = 0;
    std::size_t passed = 0;
    std::vector<std::size_t> failed_indices;   // 0-based into the record list

    bool all_passed() const { return passed == total && total > 0; }
};

// Re-encrypts (and decrypts) every record with the test-only key expansion.
KatVerification verify_kats(const PaperInstance& inst, const std::vector<KatRecord>& records);

// Deterministic KAT generation from a seed (an xorshift walk over masters and
// plaintexts; the same seed always yields the same records).
std::vector<KatRecord> generate_kats(const PaperInstance& inst, int count, int rounds,
                                     std::uint64_t seed);

std::string read_text_file(const std::string& path);   // data_format_error on I/O failure

// ---------------------------------------------------------------------------
// Built-in toy specs
// ---------------------------------------------------------------------------

// Small fixed wave specs keyed by (b, s, t), used by tests and the CLI --toy
// flag; every entry has a bijective generating function.
//   (1,2,3)  single brick, linear generating function
//   (2,2,3)  non-linear, kernel NOT parallel (near-miss for the sufficient
//            conditions; generating function still bijective and primitive)
//   (2,3,3)  square layer (trivial kernel), satisfies every sufficient-
//            condition hypothesis at delta = 1
//   (2,4,5)  two copies of the shipped S-box behind a 10x8 routing matrix
WaveSpec toy_spec(int b, int s, int t);   // data_format_error if no such entry
std::vector<std::array<int, 3>> toy_spec_catalog();

} // namespace wavekit
