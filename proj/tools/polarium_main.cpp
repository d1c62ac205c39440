#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "polarium/bp.hpp"
#include "polarium/bpl.hpp"
#include "polarium/channel.hpp"
#include "polarium/code.hpp"
#include "polarium/plot.hpp"
#include "polarium/scl.hpp"
#include "polarium/sim.hpp"

namespace {

using namespace polarium;

void write_output(const std::string& path, const std::string& content, bool force)
{
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    if (std::filesystem::exists(path) && !force)
        throw std::runtime_error("refusing to overwrite existing file " + path +
                                 " (pass --force)");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

std::string read_input(const std::string& path)
{
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

unsigned resolve_threads()
{
    if (const char* env = std::getenv("POLARIUM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    return 0;  // auto
}

struct CodeFlags {
    std::string path;
    unsigned block_length = 0;
    int info_length = -1;
    std::string method = "bhattacharyya";
    double design_eps = 0.5;
    unsigned weight_threshold = 0;
};

void add_code_flags(CLI::App* cmd, CodeFlags& flags, bool allow_file)
{
    if (allow_file)
        cmd->add_option("--code", flags.path, "Code description JSON written by `construct`");
    cmd->add_option("--N", flags.block_length, "Block length (power of two)");
    cmd->add_option("--k", flags.info_length, "Information length");
    cmd->add_option("--method", flags.method, "Construction: bhattacharyya or rm-polar")
        ->check(CLI::IsMember({"bhattacharyya", "rm-polar"}));
    cmd->add_option("--design-eps", flags.design_eps, "Design erasure probability");
    cmd->add_option("--d", flags.weight_threshold, "Row-weight freezing threshold (rm-polar)");
}

PolarCode code_from_flags(const CodeFlags& flags)
{
    if (!flags.path.empty())
        return code_from_json(read_input(flags.path));
    if (flags.block_length == 0 || flags.info_length < 0)
        throw CLI::ValidationError("--code or both --N and --k are required");
    const auto k = static_cast<std::uint32_t>(flags.info_length);
    if (flags.method == "rm-polar")
        return construct_rm_polar(flags.block_length, k, flags.weight_threshold,
                                  flags.design_eps);
    return construct_bhattacharyya(flags.block_length, k, flags.design_eps);
}

struct DecoderFlags {
    std::string name = "bp";
    unsigned list_size = 8;
    unsigned max_iterations = 200;
    double clip = 40.0;
    std::string check_node = "exact";
    std::uint64_t perm_seed = 0;
    std::string perm;
};

void add_decoder_flags(CLI::App* cmd, DecoderFlags& flags, bool with_perm)
{
    cmd->add_option("--decoder", flags.name, "sc, scl, scl-crc, bp or bpl")
        ->check(CLI::IsMember({"sc", "scl", "scl-crc", "bp", "bpl"}));
    cmd->add_option("--list", flags.list_size, "List size (scl, scl-crc, bpl)");
    cmd->add_option("--iters", flags.max_iterations, "Max BP iterations per decoder");
    cmd->add_option("--clip", flags.clip, "LLR saturation magnitude");
    cmd->add_option("--cn", flags.check_node, "Check-node mode: exact or minsum")
        ->check(CLI::IsMember({"exact", "minsum"}));
    cmd->add_option("--perm-seed", flags.perm_seed, "Seed for extra BPL permutations");
    if (with_perm)
        cmd->add_option("--perm", flags.perm,
                        "Stage permutation for bp, comma separated (e.g. 3,2,1)");
}

DecoderSpec decoder_from_flags(const DecoderFlags& flags)
{
    DecoderSpec spec;
    spec.kind = decoder_from_name(flags.name);
    spec.list_size = flags.list_size;
    spec.max_iterations = flags.max_iterations;
    spec.clip = flags.clip;
    spec.check_node = flags.check_node == "minsum" ? CheckNode::min_sum : CheckNode::exact;
    spec.permutation_seed = flags.perm_seed;
    return spec;
}

// scl-crc on a code without a CRC gets the default CRC-16 attached.
void ensure_crc(PolarCode& code, const DecoderSpec& spec)
{
    if (spec.kind != DecoderKind::scl_crc || code.crc)
        return;
    CrcConfig cfg;
    if (code.info_length < cfg.width)
        throw std::runtime_error("scl-crc needs k >= " + std::to_string(cfg.width) +
                                 " to carry the CRC");
    code.crc = cfg;
}

int cmd_construct(const CodeFlags& code_flags, const std::string& out, bool force,
                  bool print_z, bool print_info)
{
    PolarCode code = code_from_flags(code_flags);
    write_output(out, code_to_json(code) + "\n", force);
    if (print_z) {
        auto z = bhattacharyya_parameters(code.stages, code.design_eps);
        std::cerr << "z-values:";
        for (double v : z)
            std::cerr << " " << v;
        std::cerr << "\n";
    }
    if (print_info) {
        std::cerr << "info_set:";
        for (auto i : code.info_set)
            std::cerr << " " << i;
        std::cerr << "\n";
    }
    return 0;
}

int cmd_encode(const CodeFlags& code_flags, const std::string& in, const std::string& out,
               bool force)
{
    const PolarCode code = code_from_flags(code_flags);
    std::string result;
    const auto lines = split_lines(read_input(in));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        BitVector payload;
        try {
            payload = bits_from_string(lines[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("input line " + std::to_string(i + 1) + ": " + e.what());
        }
        if (payload.size() != code.payload_length())
            throw std::runtime_error("input line " + std::to_string(i + 1) + ": expected " +
                                     std::to_string(code.payload_length()) + " bits, got " +
                                     std::to_string(payload.size()));
        const BitVector word = code.crc ? crc_append(payload, *code.crc) : payload;
        result += bits_to_string(encode(assemble_u(word, code), code));
        result.push_back('\n');
    }
    write_output(out, result, force);
    return 0;
}

std::vector<double> parse_llr_line(const std::string& line, std::size_t line_no,
                                   std::size_t expected)
{
    std::vector<double> llr;
    std::istringstream in(line);
    std::string token;
    while (in >> token) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0')
            throw std::runtime_error("input line " + std::to_string(line_no) +
                                     ": not a number: " + token);
        llr.push_back(v);
    }
    if (llr.size() != expected)
        throw std::runtime_error("input line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(expected) + " LLR values, got " +
                                 std::to_string(llr.size()));
    return llr;
}

int cmd_decode(const CodeFlags& code_flags, const DecoderFlags& dec_flags,
               const std::string& in, const std::string& out, bool force)
{
    PolarCode code = code_from_flags(code_flags);
    const DecoderSpec spec = decoder_from_flags(dec_flags);
    ensure_crc(code, spec);

    StagePermutation perm = dec_flags.perm.empty() ? identity_permutation(code.stages)
                                                   : parse_permutation(dec_flags.perm);
    std::string result;
    const auto lines = split_lines(read_input(in));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const auto llr = parse_llr_line(lines[i], i + 1, code.block_length);
        BitVector u_hat, x_hat;
        bool valid = true;
        std::size_t perm_index = 0;
        switch (spec.kind) {
            case DecoderKind::sc: {
                auto res = sc_decode(llr, code, spec.clip);
                u_hat = std::move(res.u_hat);
                x_hat = std::move(res.x_hat);
                break;
            }
            case DecoderKind::scl:
            case DecoderKind::scl_crc: {
                auto res = scl_decode(llr, code, spec.list_size,
                                      spec.kind == DecoderKind::scl_crc, spec.clip);
                u_hat = std::move(res.u_hat);
                x_hat = std::move(res.x_hat);
                break;
            }
            case DecoderKind::bp: {
                BpOptions opt{spec.max_iterations, spec.clip, spec.check_node,
                              spec.min_sum_alpha, spec.stop};
                auto cand = bp_decode(llr, code, perm, opt);
                u_hat = std::move(cand.u_hat);
                x_hat = std::move(cand.x_hat);
                valid = cand.valid;
                break;
            }
            case DecoderKind::bpl: {
                BplConfig bcfg{spec.list_size, spec.max_iterations, spec.permutation_seed,
                               spec.clip, spec.check_node, spec.min_sum_alpha};
                // The channel output is only known up to the positive LLR
                // scale, which does not change the Euclidean argmin over
                // equal-energy codewords.
                auto res = bpl_decode(llr, llr, code, bcfg);
                u_hat = std::move(res.u_hat);
                x_hat = std::move(res.x_hat);
                valid = res.any_valid;
                perm_index = res.selected_index;
                break;
            }
        }
        result += bits_to_string(u_hat) + " " + bits_to_string(x_hat) + " " +
                  (valid ? "1" : "0") + " " + std::to_string(perm_index) + "\n";
    }
    write_output(out, result, force);
    return 0;
}

void parse_sweep(const std::string& text, SimConfig& cfg)
{
    double a = 0, b = 0, c = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &c) == 3) {
        cfg.ebn0_start_db = a;
        cfg.ebn0_step_db = b;
        cfg.ebn0_stop_db = c;
        return;
    }
    char* end = nullptr;
    a = std::strtod(text.c_str(), &end);
    if (end != text.c_str() && *end == '\0') {
        cfg.ebn0_start_db = cfg.ebn0_stop_db = a;
        cfg.ebn0_step_db = 1.0;
        return;
    }
    throw CLI::ValidationError("--ebn0 expects start:step:stop or a single value");
}

int cmd_simulate(const CodeFlags& code_flags, const DecoderFlags& dec_flags,
                 const std::string& sweep, std::uint64_t max_frames,
                 std::uint64_t min_block_errors, std::uint64_t seed, bool all_zero,
                 const std::string& out, bool force)
{
    SimConfig cfg;
    cfg.code = code_from_flags(code_flags);
    cfg.decoder = decoder_from_flags(dec_flags);
    ensure_crc(cfg.code, cfg.decoder);
    parse_sweep(sweep, cfg);
    cfg.max_frames = max_frames;
    cfg.min_block_errors = min_block_errors;
    cfg.master_seed = seed;
    cfg.all_zero = all_zero;
    cfg.threads = resolve_threads();

    // Fail on an existing output before spending minutes simulating.
    if (!out.empty() && out != "-" && std::filesystem::exists(out) && !force)
        throw std::runtime_error("refusing to overwrite existing file " + out +
                                 " (pass --force)");

    auto points = run_simulation(cfg, [&](const SimPoint& pt) {
        std::fprintf(stderr, "ebn0 %.2f dB: %llu frames, bler %.3e, ber %.3e\n", pt.ebn0_db,
                     static_cast<unsigned long long>(pt.frames), pt.bler, pt.ber);
    });
    write_output(out, csv_document(cfg, points), force);
    return 0;
}

int cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out,
             const std::string& title, bool force)
{
    std::vector<CsvTable> tables;
    for (const auto& path : csv_paths)
        tables.push_back(parse_csv(read_input(path)));
    write_output(out, render_error_rate_svg(tables, title), force);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polarium: polar-code construction, decoding and AWGN simulation"};
    app.require_subcommand(1);

    CodeFlags code_flags;
    DecoderFlags dec_flags;
    std::string in = "-", out, sweep = "1.0:0.5:3.0", title;
    std::vector<std::string> csv_paths;
    std::uint64_t max_frames = 1'000'000, min_block_errors = 100, seed = 1;
    bool force = false, print_z = false, print_info = false, all_zero = false;

    auto* construct = app.add_subcommand("construct", "Construct a code, write JSON");
    add_code_flags(construct, code_flags, false);
    construct->add_option("--out", out, "Output path (default stdout)");
    construct->add_flag("--force", force, "Overwrite existing output");
    construct->add_flag("--print-z", print_z, "Print Bhattacharyya parameters to stderr");
    construct->add_flag("--print-info", print_info, "Print the info set to stderr");

    auto* encode_cmd = app.add_subcommand("encode", "Encode payload bit strings, one per line");
    add_code_flags(encode_cmd, code_flags, true);
    encode_cmd->add_option("--in", in, "Input path (default stdin)");
    encode_cmd->add_option("--out", out, "Output path (default stdout)");
    encode_cmd->add_flag("--force", force, "Overwrite existing output");

    auto* decode_cmd =
        app.add_subcommand("decode", "Decode LLR vectors, one whitespace-separated line each");
    add_code_flags(decode_cmd, code_flags, true);
    add_decoder_flags(decode_cmd, dec_flags, true);
    decode_cmd->add_option("--in", in, "Input path (default stdin)");
    decode_cmd->add_option("--out", out, "Output path (default stdout)");
    decode_cmd->add_flag("--force", force, "Overwrite existing output");

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo BER/BLER sweep, write CSV");
    add_code_flags(simulate, code_flags, true);
    add_decoder_flags(simulate, dec_flags, false);
    simulate->add_option("--ebn0", sweep, "Eb/N0 sweep in dB: start:step:stop");
    simulate->add_option("--max-frames", max_frames, "Frame cap per point");
    simulate->add_option("--min-block-errors", min_block_errors, "Early stop per point");
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_flag("--all-zero", all_zero, "Send the all-zero codeword");
    simulate->add_option("--out", out, "Output CSV path (default stdout)");
    simulate->add_flag("--force", force, "Overwrite existing output");

    auto* plot = app.add_subcommand("plot", "Render simulation CSVs as an SVG");
    plot->add_option("csv", csv_paths, "Input CSV files")->required()->expected(-1);
    plot->add_option("--out", out, "Output SVG path (default stdout)");
    plot->add_option("--title", title, "Plot title");
    plot->add_flag("--force", force, "Overwrite existing output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(construct))
            return cmd_construct(code_flags, out, force, print_z, print_info);
        if (app.got_subcommand(encode_cmd))
            return cmd_encode(code_flags, in, out, force);
        if (app.got_subcommand(decode_cmd))
            return cmd_decode(code_flags, dec_flags, in, out, force);
        if (app.got_subcommand(simulate))
            return cmd_simulate(code_flags, dec_flags, sweep, max_frames, min_block_errors,
                                seed, all_zero, out, force);
        if (app.got_subcommand(plot))
            return cmd_plot(csv_paths, out, title, force);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
