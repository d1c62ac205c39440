#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polarium/bp.hpp"
#include "polarium/bpl.hpp"
#include "polarium/code.hpp"
#include "polarium/scl.hpp"

namespace polarium {

enum class DecoderKind { sc, scl, scl_crc, bp, bpl };

std::string decoder_name(DecoderKind kind);
DecoderKind decoder_from_name(std::string_view name);

struct DecoderSpec {
    DecoderKind kind = DecoderKind::bp;
    unsigned list_size = 8;          // scl / bpl
    unsigned max_iterations = 200;   // bp / bpl
    double clip = 40.0;
    CheckNode check_node = CheckNode::exact;
    double min_sum_alpha = 0.9375;
    std::uint64_t permutation_seed = 0;  // bpl
    StopRule stop = StopRule::g_matrix;  // bp
};

struct SimConfig {
    PolarCode code;
    DecoderSpec decoder;
    double ebn0_start_db = 1.0;
    double ebn0_step_db = 0.5;
    double ebn0_stop_db = 3.0;
    std::uint64_t max_frames = 1'000'000;
    std::uint64_t min_block_errors = 100;
    std::uint64_t master_seed = 1;
    bool all_zero = false;
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Monte-Carlo accumulators for one Eb/N0 point. Errors are counted over
// payload bits; a block error is any payload mismatch.
struct SimPoint {
    double ebn0_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t block_errors = 0;
    double ber = 0.0;
    double bler = 0.0;
    std::uint64_t total_iterations = 0;
    double avg_iterations = 0.0;
    std::uint64_t pe_updates = 0;
    double valid_fraction = 0.0;
};

// Outcome of decoding one frame; used by the paired acceptance comparisons
// as well as the aggregate loop below.
struct FrameOutcome {
    std::uint64_t bit_errors = 0;
    unsigned iterations = 0;
    std::uint64_t pe_updates = 0;
    bool valid = false;
};

// Transmit and decode frame `frame_index` of SNR point `snr_index` under the
// per-frame stream derived from (master_seed, snr_index, frame_index).
FrameOutcome run_frame(const SimConfig& cfg, double sigma,
                       std::size_t snr_index, std::uint64_t frame_index);

// Sweeps Eb/N0 from start to stop in `step` increments. Each point stops at
// min_block_errors or max_frames, whichever comes first, with sequential
// frame-order semantics: results are byte-identical for any thread count.
std::vector<SimPoint> run_simulation(const SimConfig& cfg,
                                     const std::function<void(const SimPoint&)>& on_point = {});

std::string csv_header();
std::string csv_row(const SimConfig& cfg, const SimPoint& point);
std::string csv_document(const SimConfig& cfg, const std::vector<SimPoint>& points);

}  // namespace polarium
