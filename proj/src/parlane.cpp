#include "mtgp/parlane.hpp"

#include <bit>
#include <stdexcept>

namespace mtgp {

namespace {

int resolve_lanes(const LaneConfig& cfg, const RecursionParams& rp) {
    const int lanes = cfg.n_lanes > 0 ? cfg.n_lanes
                                      : default_lane_count(rp.n);
    if (lanes < 1) {
        throw std::invalid_argument("lane count must be positive");
    }
    if (lanes > rp.n - rp.m) {
        throw std::invalid_argument("exceeds parallelism bound N-M");
    }
    return lanes;
}

std::uint32_t ring_size(const RecursionParams& rp) {
    return std::bit_ceil(static_cast<std::uint32_t>(2 * rp.n - rp.m));
}

/// One block advancing n_lanes recursion slots per batch.
class BlockSim {
 public:
    BlockSim(const RecursionParams& rp, const TemperingParams& tp, Word seed,
             int lanes, const BlockRunOptions& opts)
        : rp_(rp), tp_(tp),
          rectbl_(build_table(std::span<const Word, 4>(rp.rmat))),
          lanes_(lanes), opts_(opts), lsize_(ring_size(rp)),
          buf_(lsize_, 0),
          v0_(static_cast<std::size_t>(lanes)),
          v1_(static_cast<std::size_t>(lanes)),
          vm_(static_cast<std::size_t>(lanes)) {
        rp_.validate();
        seed_state(std::span<Word>(buf_.data(),
                                   static_cast<std::size_t>(rp_.n)),
                   seed, rp_);
        if (opts_.stale_read_batch >= 1) {
            snapshot_.resize(lsize_);
        }
    }

    int lanes() const { return lanes_; }

    /// Four barrier-separated memory steps; all lanes finish a step before
    /// any lane starts the next.
    void run_batch(std::vector<Word>& outputs, AccessTrace* trace) {
        const std::uint32_t lmask = lsize_ - 1;
        if (opts_.stale_read_batch == batch_ + 1) {
            snapshot_ = buf_;  // buffer contents before this batch's writes
        }
        const bool stale = opts_.stale_read_batch == batch_;
        // step 1: read X[i-1]
        for (int l = 0; l < lanes_; ++l) {
            const std::uint32_t idx =
                (base_ + static_cast<std::uint32_t>(l)) & lmask;
            v0_[static_cast<std::size_t>(l)] = buf_[idx];
            if (trace) {
                trace->indices.push_back(idx);
            }
        }
        // step 2: read X[i]
        for (int l = 0; l < lanes_; ++l) {
            const std::uint32_t idx =
                (base_ + static_cast<std::uint32_t>(l) + 1) & lmask;
            v1_[static_cast<std::size_t>(l)] = buf_[idx];
            if (trace) {
                trace->indices.push_back(idx);
            }
        }
        // step 3: read X[M+i-1]; with the hook active the previous batch's
        // writes are not yet visible here
        for (int l = 0; l < lanes_; ++l) {
            const std::uint32_t idx =
                (base_ + static_cast<std::uint32_t>(l + rp_.m)) & lmask;
            vm_[static_cast<std::size_t>(l)] = stale ? snapshot_[idx]
                                                     : buf_[idx];
            if (trace) {
                trace->indices.push_back(idx);
            }
        }
        // step 4: compute and write X[N+i]
        for (int l = 0; l < lanes_; ++l) {
            const std::uint32_t idx =
                (base_ + static_cast<std::uint32_t>(l + rp_.n)) & lmask;
            const Word xnew = recursion_step(v0_[static_cast<std::size_t>(l)],
                                             v1_[static_cast<std::size_t>(l)],
                                             vm_[static_cast<std::size_t>(l)],
                                             rp_, rectbl_);
            buf_[idx] = xnew;
            if (trace) {
                trace->indices.push_back(idx);
            }
            const Word xm1 =
                buf_[(base_ + static_cast<std::uint32_t>(l + rp_.m - 1)) &
                     lmask];
            outputs.push_back(make_output(xnew, xm1));
        }
        base_ = (base_ + static_cast<std::uint32_t>(lanes_)) & lmask;
        ++batch_;
    }

 private:
    Word make_output(Word xnew, Word xm1) const {
        switch (opts_.mode) {
            case OutputMode::Uint:
                return temper(xnew, xm1, tp_.tmptbl, rp_.wbits);
            case OutputMode::FloatClosedOpen12:
                return temper_float_bits(xnew, xm1, tp_.sngltbl);
            case OutputMode::FloatClosedOpen01: {
                const Word bits = temper_float_bits(xnew, xm1, tp_.sngltbl);
                return std::bit_cast<Word>(std::bit_cast<float>(bits) - 1.0f);
            }
        }
        return 0;
    }

    RecursionParams rp_;
    TemperingParams tp_;
    std::array<Word, 16> rectbl_;
    int lanes_;
    BlockRunOptions opts_;
    std::uint32_t lsize_;
    std::vector<Word> buf_;
    std::vector<Word> snapshot_;
    std::vector<Word> v0_, v1_, vm_;
    std::uint32_t base_ = 0;
    int batch_ = 0;
};

}  // namespace

BlockRunResult run_block(const RecursionParams& rp, const TemperingParams& tp,
                         Word seed, const LaneConfig& cfg, long long count,
                         const BlockRunOptions& opts) {
    const int lanes = resolve_lanes(cfg, rp);
    if (count <= 0 || count % lanes != 0) {
        throw std::invalid_argument(
            "count must be a positive multiple of the lane count");
    }
    if (rp.wbits != 32 && opts.mode != OutputMode::Uint) {
        throw std::domain_error("float mode requires 32-bit words");
    }
    BlockRunResult res;
    res.trace.n_lanes = lanes;
    res.outputs.reserve(static_cast<std::size_t>(count));
    BlockSim sim(rp, tp, seed, lanes, opts);
    AccessTrace* trace = opts.collect_trace ? &res.trace : nullptr;
    for (long long done = 0; done < count; done += lanes) {
        sim.run_batch(res.outputs, trace);
    }
    return res;
}

BankReport count_bank_conflicts(const AccessTrace& trace,
                                const LaneConfig& cfg) {
    BankReport rep;
    rep.total_accesses = trace.indices.size();
    if (trace.n_lanes <= 0 || cfg.banks <= 0 || cfg.warp_size <= 1) {
        return rep;
    }
    const int half_warp = cfg.warp_size / 2;
    std::vector<int> bank_count(static_cast<std::size_t>(cfg.banks));
    for (std::size_t phase = 0; phase < trace.phase_count(); ++phase) {
        const std::uint32_t* idx =
            trace.indices.data() +
            phase * static_cast<std::size_t>(trace.n_lanes);
        for (int g = 0; g < trace.n_lanes; g += half_warp) {
            const int end = std::min(g + half_warp, trace.n_lanes);
            std::fill(bank_count.begin(), bank_count.end(), 0);
            int worst = 0;
            for (int l = g; l < end; ++l) {
                const int bank = static_cast<int>(
                    idx[l] % static_cast<std::uint32_t>(cfg.banks));
                worst = std::max(worst,
                                 ++bank_count[static_cast<std::size_t>(bank)]);
            }
            if (worst >= 2) {
                ++rep.conflict_events;
            }
            rep.max_conflict_degree = std::max(rep.max_conflict_degree, worst);
        }
    }
    return rep;
}

bool verify_equivalence(const RecursionParams& rp, const TemperingParams& tp,
                        Word seed, const LaneConfig& cfg, long long count,
                        const BlockRunOptions& opts) {
    BlockRunOptions run_opts = opts;
    run_opts.collect_trace = false;
    const BlockRunResult par = run_block(rp, tp, seed, cfg, count, run_opts);
    Generator gen(rp, tp, seed);
    for (long long i = 0; i < count; ++i) {
        if (par.outputs[static_cast<std::size_t>(i)] != gen.next(opts.mode)) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<Word>> run_blocks_interleaved(
    const std::vector<BlockSpec>& blocks, const LaneConfig& cfg,
    long long count_per_block, OutputMode mode) {
    std::vector<std::vector<Word>> outputs(blocks.size());
    std::vector<BlockSim> sims;
    std::vector<int> lanes;
    sims.reserve(blocks.size());
    BlockRunOptions opts;
    opts.mode = mode;
    opts.collect_trace = false;
    for (const auto& b : blocks) {
        const int l = resolve_lanes(cfg, b.rp);
        if (count_per_block <= 0 || count_per_block % l != 0) {
            throw std::invalid_argument(
                "count must be a positive multiple of the lane count");
        }
        lanes.push_back(l);
        sims.emplace_back(b.rp, b.tp, b.seed, l, opts);
    }
    bool pending = !blocks.empty();
    while (pending) {
        pending = false;
        for (std::size_t i = 0; i < sims.size(); ++i) {
            if (static_cast<long long>(outputs[i].size()) <
                count_per_block) {
                sims[i].run_batch(outputs[i], nullptr);
                pending = true;
            }
        }
    }
    return outputs;
}

}  // namespace mtgp
