#include "polarium/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "polarium/channel.hpp"

namespace polarium {

std::string decoder_name(DecoderKind kind)
{
    switch (kind) {
        case DecoderKind::sc: return "sc";
        case DecoderKind::scl: return "scl";
        case DecoderKind::scl_crc: return "scl-crc";
        case DecoderKind::bp: return "bp";
        case DecoderKind::bpl: return "bpl";
    }
    throw std::logic_error("unreachable");
}

DecoderKind decoder_from_name(std::string_view name)
{
    if (name == "sc") return DecoderKind::sc;
    if (name == "scl") return DecoderKind::scl;
    if (name == "scl-crc") return DecoderKind::scl_crc;
    if (name == "bp") return DecoderKind::bp;
    if (name == "bpl") return DecoderKind::bpl;
    throw std::invalid_argument("unknown decoder: " + std::string(name));
}

namespace {

void validate(const SimConfig& cfg)
{
    if (cfg.code.block_length == 0)
        throw std::invalid_argument("simulation requires a constructed code");
    if (cfg.code.info_length == 0)
        throw std::invalid_argument("simulation requires k >= 1");
    if (!(cfg.ebn0_step_db > 0.0))
        throw std::invalid_argument("Eb/N0 step must be positive");
    if (cfg.ebn0_stop_db < cfg.ebn0_start_db - 1e-9)
        throw std::invalid_argument("Eb/N0 stop must not precede start");
    if (cfg.max_frames < 1)
        throw std::invalid_argument("max_frames must be at least 1");
    if (cfg.min_block_errors < 1)
        throw std::invalid_argument("min_block_errors must be at least 1");
    if (cfg.decoder.kind == DecoderKind::scl_crc && !cfg.code.crc)
        throw std::invalid_argument("scl-crc requires a CRC-configured code");
    if (cfg.code.crc && cfg.code.info_length < cfg.code.crc->width)
        throw std::invalid_argument("k must be at least the CRC width");
    if (cfg.decoder.kind == DecoderKind::bp && cfg.decoder.stop == StopRule::crc &&
        !cfg.code.crc)
        throw std::invalid_argument("CRC stopping requires a CRC-configured code");
}

BitVector strip_crc(const BitVector& info, const PolarCode& code)
{
    if (!code.crc)
        return info;
    return BitVector(info.begin(), info.end() - code.crc->width);
}

}  // namespace

FrameOutcome run_frame(const SimConfig& cfg, double sigma,
                       std::size_t snr_index, std::uint64_t frame_index)
{
    const PolarCode& code = cfg.code;
    const DecoderSpec& dec = cfg.decoder;
    FrameRng rng(derive_stream_seed(cfg.master_seed, snr_index, frame_index));

    BitVector payload(code.payload_length(), 0);
    if (!cfg.all_zero)
        for (auto& b : payload)
            b = rng.next_bit();
    const BitVector word = code.crc ? crc_append(payload, *code.crc) : payload;
    const BitVector x = polar_transform(assemble_u(word, code));
    const std::vector<double> s = bpsk_modulate(x);
    const std::vector<double> y = awgn(s, sigma, rng);
    const std::vector<double> llr = llr_from_channel(y, sigma, dec.clip);

    FrameOutcome out;
    BitVector u_hat;
    switch (dec.kind) {
        case DecoderKind::sc: {
            auto res = sc_decode(llr, code, dec.clip);
            u_hat = std::move(res.u_hat);
            out.iterations = 1;
            out.pe_updates = res.node_ops;
            out.valid = true;
            break;
        }
        case DecoderKind::scl:
        case DecoderKind::scl_crc: {
            auto res = scl_decode(llr, code, dec.list_size,
                                  dec.kind == DecoderKind::scl_crc, dec.clip);
            u_hat = std::move(res.u_hat);
            out.iterations = 1;
            out.pe_updates = res.node_ops;
            out.valid = true;
            break;
        }
        case DecoderKind::bp: {
            BpOptions opt{dec.max_iterations, dec.clip, dec.check_node, dec.min_sum_alpha,
                          dec.stop};
            auto cand = bp_decode(llr, code, identity_permutation(code.stages), opt);
            u_hat = std::move(cand.u_hat);
            out.iterations = cand.iterations;
            out.pe_updates = cand.pe_updates;
            out.valid = cand.valid;
            break;
        }
        case DecoderKind::bpl: {
            BplConfig bcfg{dec.list_size, dec.max_iterations, dec.permutation_seed,
                           dec.clip, dec.check_node, dec.min_sum_alpha};
            auto res = bpl_decode(y, llr, code, bcfg);
            u_hat = std::move(res.u_hat);
            for (const auto& cand : res.candidates) {
                out.iterations += cand.iterations;
                out.pe_updates += cand.pe_updates;
            }
            out.valid = res.any_valid;
            break;
        }
    }

    const BitVector payload_hat = strip_crc(extract_info(u_hat, code), code);
    out.bit_errors = hamming_distance(payload, payload_hat);
    return out;
}

std::vector<SimPoint> run_simulation(const SimConfig& cfg,
                                     const std::function<void(const SimPoint&)>& on_point)
{
    validate(cfg);
    unsigned threads = cfg.threads;
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());

    std::vector<SimPoint> points;
    for (std::size_t snr_index = 0;; ++snr_index) {
        const double ebn0 = cfg.ebn0_start_db + cfg.ebn0_step_db * snr_index;
        if (ebn0 > cfg.ebn0_stop_db + 1e-9)
            break;
        const double sigma = sigma_from_ebn0(ebn0, cfg.code.rate());

        SimPoint pt;
        pt.ebn0_db = ebn0;
        std::uint64_t valid_frames = 0;
        std::uint64_t next_frame = 0;
        std::uint64_t chunk_size = 128;
        bool done = false;

        std::vector<FrameOutcome> results;
        while (!done && next_frame < cfg.max_frames) {
            const std::uint64_t chunk =
                std::min<std::uint64_t>(chunk_size, cfg.max_frames - next_frame);
            chunk_size = std::min<std::uint64_t>(chunk_size * 2, 4096);
            results.assign(chunk, FrameOutcome{});

            if (threads <= 1 || chunk == 1) {
                for (std::uint64_t j = 0; j < chunk; ++j)
                    results[j] = run_frame(cfg, sigma, snr_index, next_frame + j);
            } else {
                std::vector<std::thread> pool;
                std::exception_ptr error;
                std::mutex error_mutex;
                for (unsigned w = 0; w < threads; ++w) {
                    pool.emplace_back([&, w] {
                        try {
                            for (std::uint64_t j = w; j < chunk; j += threads)
                                results[j] = run_frame(cfg, sigma, snr_index, next_frame + j);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(error_mutex);
                            if (!error)
                                error = std::current_exception();
                        }
                    });
                }
                for (auto& t : pool)
                    t.join();
                if (error)
                    std::rethrow_exception(error);
            }

            // Sequential fold: the stop frame is exactly the one a
            // single-threaded frame-by-frame loop would stop at.
            for (std::uint64_t j = 0; j < chunk; ++j) {
                const FrameOutcome& f = results[j];
                ++pt.frames;
                pt.bit_errors += f.bit_errors;
                pt.block_errors += (f.bit_errors > 0);
                pt.total_iterations += f.iterations;
                pt.pe_updates += f.pe_updates;
                valid_frames += f.valid;
                if (pt.block_errors >= cfg.min_block_errors) {
                    done = true;
                    break;
                }
            }
            next_frame += chunk;
        }

        const double payload_bits =
            static_cast<double>(pt.frames) * cfg.code.payload_length();
        pt.ber = payload_bits > 0 ? pt.bit_errors / payload_bits : 0.0;
        pt.bler = pt.frames > 0 ? static_cast<double>(pt.block_errors) / pt.frames : 0.0;
        pt.avg_iterations =
            pt.frames > 0 ? static_cast<double>(pt.total_iterations) / pt.frames : 0.0;
        pt.valid_fraction =
            pt.frames > 0 ? static_cast<double>(valid_frames) / pt.frames : 0.0;
        points.push_back(pt);
        if (on_point)
            on_point(pt);
    }
    return points;
}

std::string csv_header()
{
    return "decoder,N,k,construction,list,iters_max,ebn0_db,frames,bit_errors,"
           "block_errors,ber,bler,avg_iters,pe_updates,valid_fraction";
}

std::string csv_row(const SimConfig& cfg, const SimPoint& pt)
{
    const DecoderSpec& dec = cfg.decoder;
    const bool listy = dec.kind == DecoderKind::scl || dec.kind == DecoderKind::scl_crc ||
                       dec.kind == DecoderKind::bpl;
    const bool iterative = dec.kind == DecoderKind::bp || dec.kind == DecoderKind::bpl;
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%s,%u,%u,%s,%u,%u,%.4f,%llu,%llu,%llu,%.8e,%.8e,%.6f,%llu,%.6f",
                  decoder_name(dec.kind).c_str(), cfg.code.block_length,
                  cfg.code.info_length, construction_name(cfg.code.construction).c_str(),
                  listy ? dec.list_size : 1u, iterative ? dec.max_iterations : 0u,
                  pt.ebn0_db, static_cast<unsigned long long>(pt.frames),
                  static_cast<unsigned long long>(pt.bit_errors),
                  static_cast<unsigned long long>(pt.block_errors), pt.ber, pt.bler,
                  pt.avg_iterations, static_cast<unsigned long long>(pt.pe_updates),
                  pt.valid_fraction);
    return buf;
}

std::string csv_document(const SimConfig& cfg, const std::vector<SimPoint>& points)
{
    std::string out = csv_header();
    out.push_back('\n');
    for (const auto& pt : points) {
        out += csv_row(cfg, pt);
        out.push_back('\n');
    }
    return out;
}

}  // namespace polarium
