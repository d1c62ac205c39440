#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polarium/bp.hpp"
#include "polarium/bpl.hpp"
#include "polarium/channel.hpp"
#include "polarium/code.hpp"
#include "polarium/scl.hpp"
#include "polarium/sim.hpp"

namespace py = pybind11;
using namespace polarium;

namespace {

std::vector<double> to_vector(const py::sequence& seq)
{
    std::vector<double> out;
    out.reserve(py::len(seq));
    for (auto item : seq)
        out.push_back(item.cast<double>());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Polar code toolkit: BP/BPL/SC/SCL decoding over an AWGN channel";

    py::class_<CrcConfig>(m, "CrcConfig")
        .def(py::init<>())
        .def(py::init([](unsigned width, std::uint32_t poly, std::uint32_t init,
                         std::uint32_t xorout) {
                 return CrcConfig{width, poly, init, xorout};
             }),
             py::arg("width") = 16, py::arg("poly") = 0x1021, py::arg("init") = 0xFFFF,
             py::arg("xorout") = 0)
        .def_readwrite("width", &CrcConfig::width)
        .def_readwrite("poly", &CrcConfig::poly)
        .def_readwrite("init", &CrcConfig::init)
        .def_readwrite("xorout", &CrcConfig::xorout);

    py::class_<PolarCode>(m, "PolarCode")
        .def_readonly("N", &PolarCode::block_length)
        .def_readonly("n", &PolarCode::stages)
        .def_readonly("k", &PolarCode::info_length)
        .def_readonly("info_set", &PolarCode::info_set)
        .def_readonly("design_eps", &PolarCode::design_eps)
        .def_readonly("d", &PolarCode::weight_threshold)
        .def_readonly("crc", &PolarCode::crc)
        .def_property_readonly("construction",
                               [](const PolarCode& c) { return construction_name(c.construction); })
        .def("payload_length", &PolarCode::payload_length)
        .def("rate", &PolarCode::rate)
        .def("to_json", [](const PolarCode& c) { return code_to_json(c); })
        .def("__repr__", [](const PolarCode& c) {
            return "PolarCode(N=" + std::to_string(c.block_length) +
                   ", k=" + std::to_string(c.info_length) + ", " +
                   construction_name(c.construction) + ")";
        });

    m.def("construct_bhattacharyya", &construct_bhattacharyya, py::arg("N"), py::arg("k"),
          py::arg("eps") = 0.5, py::arg("crc") = std::nullopt);
    m.def("construct_rm_polar", &construct_rm_polar, py::arg("N"), py::arg("k"), py::arg("d"),
          py::arg("eps") = 0.5, py::arg("crc") = std::nullopt);
    m.def("code_from_json", &code_from_json);
    m.def("bhattacharyya_parameters", &bhattacharyya_parameters, py::arg("n"), py::arg("eps"));
    m.def("row_weight", &row_weight, py::arg("i"), py::arg("n"));

    m.def("polar_transform", [](BitVector bits) { return polar_transform(std::move(bits)); });
    m.def("encode", &encode, py::arg("u"), py::arg("code"));
    m.def("assemble_u", &assemble_u, py::arg("payload"), py::arg("code"));
    m.def("extract_info", &extract_info, py::arg("u"), py::arg("code"));
    m.def("g_matrix_check", &g_matrix_check, py::arg("u_hat"), py::arg("x_hat"),
          py::arg("code"));
    m.def("crc_append", &crc_append, py::arg("payload"), py::arg("cfg"));
    m.def("crc_check", &crc_check, py::arg("word"), py::arg("cfg"));

    py::class_<StagePermutation>(m, "StagePermutation")
        .def(py::init([](std::vector<unsigned> pi) { return make_permutation(std::move(pi)); }))
        .def_readonly("pi", &StagePermutation::pi)
        .def_readonly("s", &StagePermutation::s)
        .def("__repr__",
             [](const StagePermutation& p) { return "StagePermutation(" + permutation_to_string(p) + ")"; });
    m.def("identity_permutation", &identity_permutation, py::arg("n"));
    m.def("separations_from_permutation", &separations_from_permutation, py::arg("pi"));
    m.def("select_permutations", &select_permutations, py::arg("n"), py::arg("list_size"),
          py::arg("seed") = 0);

    py::enum_<CheckNode>(m, "CheckNode")
        .value("exact", CheckNode::exact)
        .value("min_sum", CheckNode::min_sum);
    py::enum_<StopRule>(m, "StopRule")
        .value("g_matrix", StopRule::g_matrix)
        .value("crc", StopRule::crc)
        .value("none", StopRule::none);

    m.def("boxplus", &boxplus, py::arg("a"), py::arg("b"), py::arg("clip") = 40.0,
          py::arg("mode") = CheckNode::exact, py::arg("alpha") = 0.9375);

    py::class_<DecodeCandidate>(m, "DecodeCandidate")
        .def_readonly("u_hat", &DecodeCandidate::u_hat)
        .def_readonly("x_hat", &DecodeCandidate::x_hat)
        .def_readonly("valid", &DecodeCandidate::valid)
        .def_readonly("iterations", &DecodeCandidate::iterations)
        .def_readonly("pe_updates", &DecodeCandidate::pe_updates);

    m.def(
        "bp_decode",
        [](const py::sequence& llr, const PolarCode& code,
           const std::optional<StagePermutation>& perm, unsigned max_iterations, double clip,
           CheckNode mode, double alpha, StopRule stop) {
            BpOptions opt{max_iterations, clip, mode, alpha, stop};
            return bp_decode(to_vector(llr), code,
                             perm ? *perm : identity_permutation(code.stages), opt);
        },
        py::arg("llr"), py::arg("code"), py::arg("perm") = std::nullopt,
        py::arg("max_iterations") = 200, py::arg("clip") = 40.0,
        py::arg("mode") = CheckNode::exact, py::arg("alpha") = 0.9375,
        py::arg("stop") = StopRule::g_matrix);

    py::class_<BplResult>(m, "BplResult")
        .def_readonly("x_hat", &BplResult::x_hat)
        .def_readonly("u_hat", &BplResult::u_hat)
        .def_readonly("selected_index", &BplResult::selected_index)
        .def_readonly("any_valid", &BplResult::any_valid)
        .def_readonly("candidates", &BplResult::candidates)
        .def_readonly("distances", &BplResult::distances);

    m.def(
        "bpl_decode",
        [](const py::sequence& y, const py::sequence& llr, const PolarCode& code,
           unsigned list_size, unsigned max_iterations, std::uint64_t perm_seed, double clip,
           CheckNode mode, double alpha) {
            BplConfig cfg{list_size, max_iterations, perm_seed, clip, mode, alpha};
            return bpl_decode(to_vector(y), to_vector(llr), code, cfg);
        },
        py::arg("y"), py::arg("llr"), py::arg("code"), py::arg("list_size") = 8,
        py::arg("max_iterations") = 200, py::arg("perm_seed") = 0, py::arg("clip") = 40.0,
        py::arg("mode") = CheckNode::exact, py::arg("alpha") = 0.9375);

    py::class_<ScResult>(m, "ScResult")
        .def_readonly("u_hat", &ScResult::u_hat)
        .def_readonly("x_hat", &ScResult::x_hat)
        .def_readonly("node_ops", &ScResult::node_ops);
    m.def(
        "sc_decode",
        [](const py::sequence& llr, const PolarCode& code, double clip) {
            return sc_decode(to_vector(llr), code, clip);
        },
        py::arg("llr"), py::arg("code"), py::arg("clip") = 40.0);

    py::class_<SclResult>(m, "SclResult")
        .def_readonly("u_hat", &SclResult::u_hat)
        .def_readonly("x_hat", &SclResult::x_hat)
        .def_readonly("path_metric", &SclResult::path_metric)
        .def_readonly("node_ops", &SclResult::node_ops)
        .def_readonly("crc_ok", &SclResult::crc_ok);
    m.def(
        "scl_decode",
        [](const py::sequence& llr, const PolarCode& code, unsigned list_size, bool use_crc,
           double clip) { return scl_decode(to_vector(llr), code, list_size, use_crc, clip); },
        py::arg("llr"), py::arg("code"), py::arg("list_size"), py::arg("use_crc") = false,
        py::arg("clip") = 40.0);

    m.def(
        "ml_decode_bruteforce",
        [](const py::sequence& y, const PolarCode& code) {
            return ml_decode_bruteforce(to_vector(y), code);
        },
        py::arg("y"), py::arg("code"));

    m.def(
        "euclidean_select",
        [](const py::sequence& y, const std::vector<BitVector>& candidates) {
            return euclidean_select(to_vector(y), candidates);
        },
        py::arg("y"), py::arg("candidates"));

    m.def("sigma_from_ebn0", &sigma_from_ebn0, py::arg("ebn0_db"), py::arg("rate"));
    m.def("bpsk_modulate", &bpsk_modulate, py::arg("x"));
    m.def(
        "awgn",
        [](const py::sequence& s, double sigma, std::uint64_t seed) {
            FrameRng rng(seed);
            return awgn(to_vector(s), sigma, rng);
        },
        py::arg("s"), py::arg("sigma"), py::arg("seed"));
    m.def(
        "llr_from_channel",
        [](const py::sequence& y, double sigma, double clip) {
            return llr_from_channel(to_vector(y), sigma, clip);
        },
        py::arg("y"), py::arg("sigma"), py::arg("clip") = 40.0);
    m.def("derive_stream_seed", &derive_stream_seed, py::arg("master"), py::arg("a"),
          py::arg("b"));

    py::enum_<DecoderKind>(m, "DecoderKind")
        .value("sc", DecoderKind::sc)
        .value("scl", DecoderKind::scl)
        .value("scl_crc", DecoderKind::scl_crc)
        .value("bp", DecoderKind::bp)
        .value("bpl", DecoderKind::bpl);

    py::class_<SimPoint>(m, "SimPoint")
        .def_readonly("ebn0_db", &SimPoint::ebn0_db)
        .def_readonly("frames", &SimPoint::frames)
        .def_readonly("bit_errors", &SimPoint::bit_errors)
        .def_readonly("block_errors", &SimPoint::block_errors)
        .def_readonly("ber", &SimPoint::ber)
        .def_readonly("bler", &SimPoint::bler)
        .def_readonly("avg_iterations", &SimPoint::avg_iterations)
        .def_readonly("pe_updates", &SimPoint::pe_updates)
        .def_readonly("valid_fraction", &SimPoint::valid_fraction);

    m.def(
        "run_simulation",
        [](const PolarCode& code, DecoderKind decoder, double ebn0_start, double ebn0_step,
           double ebn0_stop, std::uint64_t max_frames, std::uint64_t min_block_errors,
           std::uint64_t seed, bool all_zero, unsigned list_size, unsigned max_iterations,
           double clip, CheckNode mode, std::uint64_t perm_seed, unsigned threads) {
            SimConfig cfg;
            cfg.code = code;
            cfg.decoder.kind = decoder;
            cfg.decoder.list_size = list_size;
            cfg.decoder.max_iterations = max_iterations;
            cfg.decoder.clip = clip;
            cfg.decoder.check_node = mode;
            cfg.decoder.permutation_seed = perm_seed;
            cfg.ebn0_start_db = ebn0_start;
            cfg.ebn0_step_db = ebn0_step;
            cfg.ebn0_stop_db = ebn0_stop;
            cfg.max_frames = max_frames;
            cfg.min_block_errors = min_block_errors;
            cfg.master_seed = seed;
            cfg.all_zero = all_zero;
            cfg.threads = threads;
            py::gil_scoped_release release;
            return run_simulation(cfg);
        },
        py::arg("code"), py::arg("decoder"), py::arg("ebn0_start"), py::arg("ebn0_step"),
        py::arg("ebn0_stop"), py::arg("max_frames") = 10000,
        py::arg("min_block_errors") = 100, py::arg("seed") = 1, py::arg("all_zero") = false,
        py::arg("list_size") = 8, py::arg("max_iterations") = 200, py::arg("clip") = 40.0,
        py::arg("mode") = CheckNode::exact, py::arg("perm_seed") = 0, py::arg("threads") = 0);
}
