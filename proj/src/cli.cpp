#include "wavekit/cli.hpp"

#include "wavekit/errors.hpp"
#include "wavekit/instance.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <optional>
#include <ostream>
#include <sstream>

namespace wavekit::cli {

namespace {

using nlohmann::json;

// --- small rendering helpers ------------------------------------------------

std::string rational_str(const Rational& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

json rational_json(const Rational& r) { return json{{"num", r.num}, {"den", r.den}}; }

json optional_log2_json(const std::optional<long long>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string log2_str(const std::optional<long long>& v) {
    return v ? "2^" + std::to_string(*v) : "(not dyadic)";
}

const char* yesno(bool v) { return v ? "yes" : "no"; }

// --- input plumbing ----------------------------------------------------------

// "b,s,t" -> a built-in toy spec; empty -> the shipped 64-bit instance.
WaveSpec spec_from_toy_flag(const std::string& toy) {
    if (toy.empty())
        return build_paper_instance().spec;
    int b = 0, s = 0, t = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(toy);
    if (!(in >> b >> c1 >> s >> c2 >> t) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
        throw data_format_error("--toy expects 'b,s,t', got '" + toy + "'");
    return toy_spec(b, s, t);
}

std::vector<BitVector> keys_from_flags(const std::string& keys_file, bool have_master,
                                       std::uint64_t master, int rounds, int n) {
    if (!keys_file.empty()) {
        std::vector<BitVector> keys;
        std::istringstream in(read_text_file(keys_file));
        std::string line;
        while (std::getline(in, line)) {
            if (auto pos = line.find('#'); pos != std::string::npos)
                line.erase(pos);
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok)
                keys.push_back(BitVector::from_hex(tok, n));
        }
        if (keys.empty())
            throw data_format_error("key file '" + keys_file + "' holds no round keys");
        return keys;
    }
    if (!have_master)
        throw data_format_error("provide either --master (with --rounds) or --keys <file>");
    return test_only_key_expansion(master, rounds, n);
}

std::uint64_t parse_hex_flag(const std::string& text, int width, const std::string& what) {
    try {
        return BitVector::from_hex(text, width).word;
    } catch (const data_format_error& e) {
        throw data_format_error(what + ": " + e.what());
    }
}

// --- report fragments ---------------------------------------------------------

json ddt_json(const DDTable& d) {
    json rows = json::array();
    for (std::uint32_t u = 0; u < (std::uint32_t{1} << d.s); ++u) {
        json row = json::array();
        for (std::uint32_t v = 0; v < (std::uint32_t{1} << d.t); ++v)
            row.push_back(d.at(u, v));
        rows.push_back(std::move(row));
    }
    return rows;
}

void print_ddt(std::ostream& out, const DDTable& d, const char* indent) {
    for (std::uint32_t u = 0; u < (std::uint32_t{1} << d.s); ++u) {
        out << indent;
        for (std::uint32_t v = 0; v < (std::uint32_t{1} << d.t); ++v) {
            const int c = d.at(u, v);
            out << (c == 0 ? " ." : (c < 10 ? " " + std::to_string(c) : std::to_string(c)));
        }
        out << "\n";
    }
}

json connectivity_json(const std::vector<std::vector<bool>>& adj) {
    json rows = json::array();
    for (const auto& row : adj) {
        json r = json::array();
        for (bool v : row)
            r.push_back(v);
        rows.push_back(std::move(r));
    }
    return rows;
}

json witness_json(const std::vector<TruncatedState>& witness, int bricks) {
    json arr = json::array();
    for (const TruncatedState& st : witness)
        arr.push_back(format_state(st, bricks));
    return arr;
}

json hypotheses_json(const std::vector<HypothesisVerdict>& hs) {
    json arr = json::array();
    for (const HypothesisVerdict& h : hs)
        arr.push_back({{"name", h.name}, {"holds", h.holds}, {"detail", h.detail}});
    return arr;
}

const char* conclusion_str(ConclusionStatus c) {
    switch (c) {
    case ConclusionStatus::primitive_confirmed: return "primitive-confirmed";
    case ConclusionStatus::hypotheses_hold_conclusion_by_theorem:
        return "primitive-by-sufficient-conditions";
    case ConclusionStatus::not_applicable: break;
    }
    return "not-applicable";
}

json certification_json(const std::vector<CertificationCheck>& checks) {
    json arr = json::array();
    for (const CertificationCheck& c : checks)
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return arr;
}

json bound_json(const BoundLedger& led, int bricks) {
    return json{{"rounds", led.rounds},
                {"min_active", led.min_active},
                {"witness", witness_json(led.witness, bricks)},
                {"max_ddt_ratio", rational_json(led.max_ddt_ratio)},
                {"diff_prob_log2", optional_log2_json(led.diff_prob_log2)},
                {"max_bias", rational_json(led.max_bias_value)},
                {"bias_log2", optional_log2_json(led.bias_log2)},
                {"data_complexity_log2", optional_log2_json(led.data_complexity_log2)}};
}

json primitivity_json(const PrimitivityResult& r) {
    json j{{"primitive", r.primitive}, {"millis", r.millis}};
    if (!r.primitive && r.witness) {
        j["witness_point"] = r.witness_point;
        j["block_cell_size"] = r.witness->cell_size;
        j["block_cell_count"] = r.witness->cell_count;
    }
    return j;
}

void print_primitivity(std::ostream& out, const char* label, const PrimitivityResult& r) {
    out << "  " << label << ": " << (r.primitive ? "primitive" : "IMPRIMITIVE");
    if (!r.primitive && r.witness)
        out << " (block system: " << r.witness->cell_count << " cells of "
            << r.witness->cell_size << ", seed point " << r.witness_point << ")";
    out << " [" << r.millis << " ms]\n";
}

// --- subcommand implementations -----------------------------------------------

int cmd_sbox_analyze(std::ostream& out, const std::string& file, bool as_json) {
    const SBoxTable f = SBoxTable::from_text(read_text_file(file));
    const DDTable d = ddt(f);
    const int du = differential_uniformity(f);
    const auto sums = image_sum_set(f);
    const auto missing = missing_sum_vectors(f);
    const Rational bias = max_bias(f);
    if (as_json) {
        json j{{"s", f.in_bits},
               {"t", f.out_bits},
               {"injective", is_injective(f)},
               {"zero_fixed", f.maps_zero_to_zero()},
               {"differential_uniformity", du},
               {"apn", du == 2},
               {"max_bias", rational_json(bias)},
               {"sum_set_size", sums.size()},
               {"missing_sum_vectors", json::array()},
               {"ddt", ddt_json(d)}};
        for (std::uint32_t v : missing)
            j["missing_sum_vectors"].push_back(BitVector(f.out_bits, v).to_hex());
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "s=" << f.in_bits << " t=" << f.out_bits << "\n";
    out << "injective: " << yesno(is_injective(f)) << "\n";
    out << "fixes zero: " << yesno(f.maps_zero_to_zero()) << "\n";
    out << "differential uniformity: " << du << (du == 2 ? " (APN)" : "") << "\n";
    out << "max linear bias: " << rational_str(bias) << "\n";
    out << "sum-set size: " << sums.size() << "\n";
    out << "missing sum vectors:";
    for (std::uint32_t v : missing)
        out << " " << BitVector(f.out_bits, v).to_hex();
    out << "\ndifference distribution table:\n";
    print_ddt(out, d, "  ");
    return 0;
}

int cmd_lambda_check(std::ostream& out, const std::string& file, const std::string& layout_flag,
                     bool as_json) {
    const BitMatrix m = BitMatrix::from_text(read_text_file(file));
    BrickLayout layout;
    if (!layout_flag.empty()) {
        int b = 0, s = 0, t = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(layout_flag);
        if (!(in >> b >> c1 >> s >> c2 >> t) || c1 != ',' || c2 != ',')
            throw data_format_error("--layout expects 'b,s,t'");
        layout = {b, s, t};
    } else if (m.rows == 40 && m.cols == 32) {
        layout = {8, 4, 5};
    } else {
        throw data_format_error("matrix is not 40x32; pass --layout b,s,t");
    }
    if (m.rows != layout.m() || m.cols != layout.n())
        throw data_format_error("layout b*t x b*s = " + std::to_string(layout.m()) + "x" +
                                std::to_string(layout.n()) + " does not match matrix " +
                                std::to_string(m.rows) + "x" + std::to_string(m.cols));
    const DiffusionLayer layer{layout, m};
    const int rk = rank(m);
    const bool surjective = rk == m.cols;
    const ParallelKernelReport kern = parallel_kernel_report(layer);
    const ProperReport proper = is_proper(layer);
    const BranchNumberResult branch = branch_number(layer);
    const auto adj = brick_connectivity(layer);

    if (as_json) {
        json j{{"rows", m.rows},
               {"cols", m.cols},
               {"rank", rk},
               {"surjective", surjective},
               {"kernel_dim", kern.kern.dim()},
               {"parallel_kernel", kern.parallel},
               {"brick_kernel_dims", kern.brick_dims},
               {"proper", proper.proper},
               {"walls_checked", proper.walls_checked},
               {"branch_number",
                json{{"exact", branch.exact},
                     {"value", branch.value},
                     {"witness_input",
                      branch.witness_input ? json(branch.witness_input->to_hex()) : json(nullptr)},
                     {"witness_output", branch.witness_output
                                            ? json(branch.witness_output->to_hex())
                                            : json(nullptr)}}},
               {"connectivity", connectivity_json(adj)}};
        if (proper.witness_wall)
            j["violating_wall_mask"] = *proper.witness_wall;
        out << j.dump(2) << "\n";
    } else {
        out << "matrix: " << m.rows << "x" << m.cols << ", rank " << rk << " ("
            << (surjective ? "surjective" : "NOT surjective") << ")\n";
        out << "kernel dimension: " << kern.kern.dim() << "\n";
        out << "parallel kernel: " << yesno(kern.parallel) << " (brick dims:";
        for (int d : kern.brick_dims)
            out << " " << d;
        out << ")\n";
        out << "proper: " << yesno(proper.proper) << " (" << proper.walls_checked
            << " walls checked)";
        if (proper.witness_wall)
            out << " violating wall mask " << *proper.witness_wall;
        out << "\n";
        out << "branch number: " << branch.value << (branch.exact ? "" : " (interval)");
        if (branch.witness_input)
            out << "  witness " << branch.witness_input->to_hex() << " -> "
                << branch.witness_output->to_hex();
        out << "\n";
        out << "brick connectivity (input brick -> output bricks):\n";
        for (size_t j = 0; j < adj.size(); ++j) {
            out << "  " << (j + 1) << " ->";
            for (size_t q = 0; q < adj[j].size(); ++q)
                if (adj[j][q])
                    out << " " << (q + 1);
            out << "\n";
        }
    }
    return surjective ? 0 : 1;
}

int cmd_wave_certify(std::ostream& out, const std::string& toy, bool as_json) {
    const WaveSpec spec = spec_from_toy_flag(toy);
    const BijectivityCertificate cert = wave_is_bijective(spec);
    if (as_json) {
        json bricks = json::array();
        for (const BrickBijectivityEntry& e : cert.per_brick)
            bricks.push_back({{"brick", e.brick},
                              {"sum_set_size", e.sum_set_size},
                              {"kernel_brick_dim", e.kernel_brick_dim},
                              {"intersection_trivial", e.intersection_trivial}});
        json j{{"bijective", cert.bijective},
               {"used_parallel_path", cert.used_parallel_path},
               {"per_brick", std::move(bricks)},
               {"colliding_sum",
                cert.colliding_sum ? json(cert.colliding_sum->to_hex()) : json(nullptr)},
               {"detail", cert.detail}};
        out << j.dump(2) << "\n";
    } else {
        out << "bijective: " << yesno(cert.bijective) << "\n";
        out << "route: " << (cert.used_parallel_path ? "per-brick (parallel kernel)"
                                                     : "direct sum-set intersection")
            << "\n";
        for (const BrickBijectivityEntry& e : cert.per_brick)
            out << "  brick " << e.brick << ": sum-set " << e.sum_set_size
                << ", kernel brick dim " << e.kernel_brick_dim << ", intersection trivial: "
                << yesno(e.intersection_trivial) << "\n";
        if (cert.colliding_sum)
            out << "colliding sum vector: " << cert.colliding_sum->to_hex() << "\n";
        out << cert.detail << "\n";
    }
    return cert.bijective ? 0 : 1;
}

int cmd_crypt(std::ostream& out, bool decrypting, const std::string& toy,
              const std::string& input_hex, const std::string& keys_file, bool have_master,
              std::uint64_t master, int rounds, bool as_json) {
    const WaveSpec spec = spec_from_toy_flag(toy);
    const int n = spec.layout.n();
    const std::uint64_t input = parse_hex_flag(input_hex, 2 * n, decrypting ? "--ct" : "--pt");
    const FeistelCipher cipher(spec, keys_from_flags(keys_file, have_master, master, rounds, n));
    const std::uint64_t result = decrypting ? feistel_decrypt64(cipher, input)
                                            : feistel_encrypt64(cipher, input);
    const std::string in_hex = BitVector(2 * n, input).to_hex();
    const std::string out_hex = BitVector(2 * n, result).to_hex();
    if (as_json) {
        json j{{"rounds", cipher.rounds},
               {decrypting ? "ct" : "pt", in_hex},
               {decrypting ? "pt" : "ct", out_hex}};
        out << j.dump(2) << "\n";
    } else {
        out << out_hex << "\n";
    }
    return 0;
}

int cmd_kat_gen(std::ostream& out, int count, int rounds, std::uint64_t seed, bool as_json) {
    const PaperInstance inst = build_paper_instance();
    const auto records = generate_kats(inst, count, rounds, seed);
    if (as_json) {
        json arr = json::array();
        for (const KatRecord& r : records)
            arr.push_back({{"master", BitVector(64, r.master).to_hex()},
                           {"rounds", r.rounds},
                           {"pt", BitVector(64, r.pt).to_hex()},
                           {"ct", BitVector(64, r.ct).to_hex()}});
        out << arr.dump(2) << "\n";
    } else {
        out << render_kat_records(records);
    }
    return 0;
}

int cmd_kat_verify(std::ostream& out, const std::string& file, bool as_json) {
    const std::string path = file.empty() ? default_data_dir() + "/kats_r48.txt" : file;
    const PaperInstance inst = build_paper_instance();
    const auto records = parse_kat_records(read_text_file(path));
    const KatVerification v = verify_kats(inst, records);
    if (as_json) {
        json j{{"file", path},
               {"total", v.total},
               {"passed", v.passed},
               {"failed_indices", v.failed_indices},
               {"all_passed", v.all_passed()}};
        out << j.dump(2) << "\n";
    } else {
        out << "verified " << v.passed << "/" << v.total << " known-answer vectors from "
            << path << "\n";
        for (std::size_t i : v.failed_indices)
            out << "  MISMATCH at record " << (i + 1) << ": "
                << render_kat_records({records[i]});
    }
    return v.all_passed() ? 0 : 1;
}

int cmd_group_check(std::ostream& out, const std::string& toy, bool with_fn, bool as_json) {
    const WaveSpec spec = spec_from_toy_flag(toy);
    const int n = spec.layout.n();
    const PrimitivityResult spn = is_primitive(spn_generators(spec));
    std::optional<PrimitivityResult> fn;
    if (with_fn) {
        // Feistel action on 2^(2n) points via the translation-closure search
        // (the group contains every translation; blocks through 0 are exactly
        // the derivative-closed subspaces).
        const WaveEvaluator eval(spec);
        std::vector<std::uint32_t> rho_bar(std::size_t{1} << (2 * n));
        const std::uint64_t mask = width_mask(n);
        for (std::uint64_t x = 0; x < rho_bar.size(); ++x) {
            const std::uint64_t x1 = x >> n, x2 = x & mask;
            rho_bar[static_cast<std::size_t>(x)] =
                static_cast<std::uint32_t>((x2 << n) | (x1 ^ eval.rho(x2)));
        }
        fn = is_primitive_with_translations(rho_bar, 2 * n);
    }
    const bool all_primitive = spn.primitive && (!fn || fn->primitive);
    if (as_json) {
        json j{{"state_bits", n}, {"spn", primitivity_json(spn)}};
        if (fn)
            j["fn"] = primitivity_json(*fn);
        j["all_primitive"] = all_primitive;
        out << j.dump(2) << "\n";
    } else {
        out << "group actions generated by translations and the generating function:\n";
        print_primitivity(out, "substitution view (2^n points) ", spn);
        if (fn)
            print_primitivity(out, "Feistel view (2^(2n) points)", *fn);
    }
    return all_primitive ? 0 : 1;
}

int cmd_reduce_verify(std::ostream& out, const std::string& toy, bool as_json) {
    const WaveSpec spec = spec_from_toy_flag(toy);
    const ReductionReport rep = verify_reduction(spec);
    if (as_json) {
        json j{{"refused_affine", rep.refused_affine}};
        if (!rep.refused_affine) {
            j["spn"] = primitivity_json(rep.spn);
            j["fn"] = primitivity_json(rep.fn);
            j["implication_holds"] = rep.implication_holds;
        }
        out << j.dump(2) << "\n";
    } else if (rep.refused_affine) {
        out << "generating function is affine: the reduction theorem does not apply "
               "(refused)\n";
    } else {
        print_primitivity(out, "substitution view (2^n points) ", rep.spn);
        print_primitivity(out, "Feistel view (2^(2n) points)", rep.fn);
        out << "implication (substitution primitive => Feistel primitive): "
            << (rep.implication_holds ? "holds" : "VIOLATED") << "\n";
    }
    if (rep.refused_affine)
        return 1;
    return rep.implication_holds ? 0 : 1;
}

int cmd_trail_bound(std::ostream& out, const std::string& toy, int rounds, bool refined,
                    bool linear, bool as_json) {
    const WaveSpec spec = spec_from_toy_flag(toy);
    const int b = spec.layout.b;
    const BoundLedger diff = differential_bound(spec, rounds);
    std::optional<MinActiveResult> fine;
    if (refined)
        fine = min_active_sboxes(spec, rounds, true);
    std::optional<BoundLedger> lin;
    if (linear)
        lin = linear_bound(spec, rounds);

    if (as_json) {
        json j{{"rounds", rounds}, {"differential", bound_json(diff, b)}};
        if (fine)
            j["refined_min_active"] = fine->min_active;
        if (lin)
            j["linear"] = bound_json(*lin, b);
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "rounds: " << rounds << "\n";
    out << "minimum active S-boxes: " << diff.min_active << "\n";
    if (fine)
        out << "minimum active S-boxes (connectivity-refined model): " << fine->min_active
            << "\n";
    out << "witness activity trail (brick masks, brick 1 leftmost):\n";
    for (size_t i = 0; i < diff.witness.size(); ++i)
        out << "  round " << i << ": " << format_state(diff.witness[i], b) << "\n";
    out << "max DDT ratio: " << rational_str(diff.max_ddt_ratio) << "\n";
    out << "differential trail probability bound: " << log2_str(diff.diff_prob_log2) << "\n";
    if (lin) {
        out << "max S-box bias: " << rational_str(lin->max_bias_value) << "\n";
        out << "linear trail bias bound: " << log2_str(lin->bias_log2) << "\n";
        out << "data complexity estimate: " << log2_str(lin->data_complexity_log2)
            << " known plaintexts\n";
    }
    return 0;
}

int cmd_paper_report(std::ostream& out, bool as_json) {
    const PaperInstance inst = build_paper_instance();
    const AnalysisReport rep = full_analysis_report(inst);
    if (!as_json) {
        out << render_text(rep);
        return 0;
    }
    const int b = inst.spec.layout.b;
    json missing = json::array();
    for (std::uint32_t v : rep.missing_sums)
        missing.push_back(BitVector(5, v).to_hex());
    json j{
        {"certification", certification_json(rep.certification)},
        {"sbox",
         json{{"ddt", ddt_json(rep.sbox_ddt)},
              {"sum_set_size", rep.sum_set.size()},
              {"missing_sum_vectors", std::move(missing)},
              {"max_bias", rational_json(rep.sbox_max_bias)}}},
        {"lambda",
         json{{"rank", rep.lambda_rank},
              {"kernel_dim", rep.kernel_dim},
              {"parallel_kernel", rep.parallel_kernel},
              {"proper", rep.proper},
              {"walls_checked", rep.walls_checked},
              {"branch_number", rep.branch_number},
              {"connectivity", connectivity_json(rep.connectivity)}}},
        {"differential",
         json{{"three_rounds", bound_json(rep.diff_three_rounds, b)},
              {"default_rounds", bound_json(rep.diff_default_rounds, b)},
              {"three_round_pattern", rep.active_three_rounds.pattern()}}},
        {"linear",
         json{{"three_rounds", bound_json(rep.linear_three_rounds, b)},
              {"default_rounds", bound_json(rep.linear_default_rounds, b)}}},
        {"primitivity",
         json{{"delta", rep.primitivity_checklist.delta},
              {"hypotheses", hypotheses_json(rep.primitivity_checklist.hypotheses)},
              {"route_uniformity", rep.primitivity_checklist.route_uniformity},
              {"route_weak_uniformity", rep.primitivity_checklist.route_weak_uniformity},
              {"route_relaxed_invariance", rep.primitivity_checklist.route_relaxed_invariance},
              {"hypotheses_hold", rep.primitivity_checklist.hypotheses_hold},
              {"conclusion", conclusion_str(rep.primitivity_checklist.conclusion)}}}};
    out << j.dump(2) << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"wave cipher construction and analysis toolkit"};
    app.name("wavekit");
    app.require_subcommand(1);
    int rc = 0;

    // sbox-analyze ------------------------------------------------------------
    {
        auto* sub = app.add_subcommand("sbox-analyze", "Analyze an S-box table file");
        auto file = std::make_shared<std::string>();
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("file", *file, "S-box file (header 'sbox s=<s> t=<t>')")->required();
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, file, as_json] { rc = cmd_sbox_analyze(out, *file, *as_json); });
    }
    // lambda-check ------------------------------------------------------------
    {
        auto* sub = app.add_subcommand("lambda-check", "Analyze a diffusion-layer matrix file");
        auto file = std::make_shared<std::string>();
        auto layout = std::make_shared<std::string>();
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("file", *file, "matrix file (rows of 0/1 characters)")->required();
        sub->add_option("--layout", *layout, "brick layout b,s,t (default 8,4,5 for 40x32)");
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, file, layout, as_json] {
            rc = cmd_lambda_check(out, *file, *layout, *as_json);
        });
    }
    // wave-certify ------------------------------------------------------------
    {
        auto* sub = app.add_subcommand("wave-certify",
                                       "Certify bijectivity of the wave function");
        auto toy = std::make_shared<std::string>();
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("--toy", *toy, "built-in toy spec b,s,t instead of the shipped cipher");
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, toy, as_json] { rc = cmd_wave_certify(out, *toy, *as_json); });
    }
    // encrypt / decrypt ---------------------------------------------------------
    for (const bool decrypting : {false, true}) {
        auto* sub = app.add_subcommand(decrypting ? "decrypt" : "encrypt",
                                       decrypting ? "Decrypt one block" : "Encrypt one block");
        auto toy = std::make_shared<std::string>();
        auto input = std::make_shared<std::string>();
        auto keys_file = std::make_shared<std::string>();
        auto master_hex = std::make_shared<std::string>();
        auto rounds = std::make_shared<int>(48);
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("--toy", *toy, "built-in toy spec b,s,t instead of the shipped cipher");
        sub->add_option(decrypting ? "--ct" : "--pt", *input, "block value, hex")->required();
        sub->add_option("--master", *master_hex,
                        "64-bit master for the test-only key expansion, hex");
        sub->add_option("--rounds", *rounds, "round count when --master is used (default 48)");
        sub->add_option("--keys", *keys_file, "file of explicit hex round keys, one per line");
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, decrypting, toy, input, keys_file, master_hex, rounds,
                       as_json] {
            const bool have_master = !master_hex->empty();
            const std::uint64_t master =
                have_master ? parse_hex_flag(*master_hex, 64, "--master") : 0;
            rc = cmd_crypt(out, decrypting, *toy, *input, *keys_file, have_master, master,
                           *rounds, *as_json);
        });
    }
    // kat-gen -------------------------------------------------------------------
    {
        auto* sub = app.add_subcommand("kat-gen", "Generate known-answer vectors");
        auto count = std::make_shared<int>(20);
        auto rounds = std::make_shared<int>(48);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("--count", *count, "number of vectors (default 20)");
        sub->add_option("--rounds", *rounds, "round count (default 48)");
        sub->add_option("--seed", *seed, "RNG seed (required; no implicit entropy)")
            ->required();
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, count, rounds, seed, as_json] {
            rc = cmd_kat_gen(out, *count, *rounds, *seed, *as_json);
        });
    }
    // kat-verify ------------------------------------------------------------------
    {
        auto* sub = app.add_subcommand("kat-verify", "Verify a known-answer vector file");
        auto file = std::make_shared<std::string>();
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("file", *file, "KAT file (default: the shipped kats_r48.txt)");
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, file, as_json] { rc = cmd_kat_verify(out, *file, *as_json); });
    }
    // group-check -------------------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "group-check", "Primitivity of the group generated by the round functions");
        auto toy = std::make_shared<std::string>();
        auto with_fn = std::make_shared<bool>(false);
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("--toy", *toy,
                        "built-in toy spec b,s,t (full-scale domains exceed the guard)");
        sub->add_flag("--fn", *with_fn, "also check the Feistel action on 2^(2n) points");
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, toy, with_fn, as_json] {
            rc = cmd_group_check(out, *toy, *with_fn, *as_json);
        });
    }
    // reduce-verify --------------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "reduce-verify",
            "Check the reduction: substitution view primitive => Feistel view primitive");
        auto toy = std::make_shared<std::string>();
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("--toy", *toy, "built-in toy spec b,s,t");
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback(
            [&rc, &out, toy, as_json] { rc = cmd_reduce_verify(out, *toy, *as_json); });
    }
    // trail-bound -----------------------------------------------------------------
    {
        auto* sub = app.add_subcommand("trail-bound",
                                       "Truncated-trail bounds on active S-boxes / bias");
        auto toy = std::make_shared<std::string>();
        auto rounds = std::make_shared<int>(3);
        auto refined = std::make_shared<bool>(false);
        auto linear = std::make_shared<bool>(false);
        auto as_json = std::make_shared<bool>(false);
        sub->add_option("--toy", *toy, "built-in toy spec b,s,t instead of the shipped cipher");
        sub->add_option("--rounds", *rounds, "round count (default 3)");
        sub->add_flag("--refined", *refined, "also run the connectivity-refined model");
        sub->add_flag("--linear", *linear, "also compute the linear bias bound (rounds % 3 == 0)");
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, toy, rounds, refined, linear, as_json] {
            rc = cmd_trail_bound(out, *toy, *rounds, *refined, *linear, *as_json);
        });
    }
    // paper-report ------------------------------------------------------------------
    {
        auto* sub = app.add_subcommand("paper-report",
                                       "Full certification + analysis of the shipped cipher");
        auto as_json = std::make_shared<bool>(false);
        sub->add_flag("--json", *as_json, "JSON output");
        sub->callback([&rc, &out, as_json] { rc = cmd_paper_report(out, *as_json); });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const certification_failed& e) {
        err << "certification failed: " << e.what() << "\n";
        return 1;
    } catch (const not_transitive& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const data_format_error& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const domain_too_large& e) {
        err << "domain guard: " << e.what() << "\n";
        return 2;
    } catch (const rounds_not_multiple_of_three& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const non_dyadic_value& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

} // namespace wavekit::cli
