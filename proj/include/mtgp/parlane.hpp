#pragma once

#include <cstdint>
#include <vector>

#include "mtgp/generator.hpp"
#include "mtgp/params.hpp"

namespace mtgp {

struct LaneConfig {
    int n_lanes = 0;  // 0 picks the paper default: largest power of 2 <= N-2
    int block_count = 1;
    int warp_size = 32;
    int banks = 16;
};

/// Buffer indices touched per barrier-separated memory step: four steps per
/// batch (three reads, one write), n_lanes entries per step.
struct AccessTrace {
    int n_lanes = 0;
    std::vector<std::uint32_t> indices;

    std::size_t phase_count() const {
        return n_lanes > 0 ? indices.size() / static_cast<std::size_t>(n_lanes)
                           : 0;
    }
};

struct BankReport {
    unsigned long long total_accesses = 0;
    unsigned long long conflict_events = 0;  // half-warp steps with a repeat
    int max_conflict_degree = 0;             // max lanes on one bank
};

struct BlockRunOptions {
    OutputMode mode = OutputMode::Uint;
    /// Test hook modeling a skipped barrier: step-3 reads of this batch see
    /// the buffer as it was before the previous batch's writes. -1 = off.
    int stale_read_batch = -1;
    bool collect_trace = true;
};

struct BlockRunResult {
    std::vector<Word> outputs;
    AccessTrace trace;
};

/// Lockstep simulation of one block: lane l computes x_{N+base+l} each batch
/// through the four barrier-separated steps, over a ring buffer of
/// 2N-M (rounded up to a power of two) words. Outputs come in global
/// sequence order and are bit-identical to the sequential generator.
/// Throws "exceeds parallelism bound N-M" past the dependence bound.
BlockRunResult run_block(const RecursionParams& rp, const TemperingParams& tp,
                         Word seed, const LaneConfig& cfg, long long count,
                         const BlockRunOptions& opts = {});

/// Half-warp bank accounting per the shared-memory model: bank = index mod
/// banks; an event is any half-warp memory step hitting one bank twice.
BankReport count_bank_conflicts(const AccessTrace& trace,
                                const LaneConfig& cfg);

/// True iff the block simulation reproduces the sequential generator
/// bit-exactly for `count` outputs.
bool verify_equivalence(const RecursionParams& rp, const TemperingParams& tp,
                        Word seed, const LaneConfig& cfg, long long count,
                        const BlockRunOptions& opts = {});

struct BlockSpec {
    RecursionParams rp;
    TemperingParams tp;
    Word seed = 1;
};

/// Drives independent blocks batch-by-batch round robin (one batch per block
/// per round, as a grid scheduler would); each block's output stream is its
/// own generator's sequence.
std::vector<std::vector<Word>> run_blocks_interleaved(
    const std::vector<BlockSpec>& blocks, const LaneConfig& cfg,
    long long count_per_block, OutputMode mode = OutputMode::Uint);

}  // namespace mtgp
