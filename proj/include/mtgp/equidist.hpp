#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtgp/f2matrix.hpp"
#include "mtgp/generator.hpp"
#include "mtgp/params.hpp"

namespace mtgp {

/// Which v bits of each output enter the equidistribution map: the v MSBs
/// (the k(v) of the tables) or the v LSBs (the k'(v) of the low-bit search).
enum class BitSide { Msb, Lsb };

/// Runs the generator symbolically on all p basis states at once: each state
/// bit is replaced by a p-bit vector, so after every step the plane of an
/// output bit is exactly the row of the state-to-output linear map.
class BitslicedGenerator {
 public:
    explicit BitslicedGenerator(const RecursionParams& rp);

    int words() const { return words_; }
    int dim() const { return rp_.mexp; }

    /// Advances one step; afterwards raw_plane/nib_plane describe output
    /// index i (the i-th call), i.e. the tempered output o_{N+i}'s parts.
    void step();
    /// Plane of bit `bit` of the untempered new word x_{N+i}.
    const std::uint64_t* raw_plane(int bit) const;
    /// Plane of bit `bit` (0..3) of the tempering nibble derived from
    /// x_{M-1+i}.
    const std::uint64_t* nib_plane(int bit) const;

    /// Writes the plane of bit `bit` of the tempered output into `out`.
    void tempered_row(const TemperingParams& tp, int bit,
                      std::uint64_t* out) const;

 private:
    RecursionParams rp_;
    int words_;
    std::vector<std::uint64_t> planes_;   // ring: n words x wbits planes
    std::vector<std::uint64_t> scratch_;  // wbits planes
    std::vector<std::uint64_t> nib_;      // 4 planes
    int cur_ = 0;
    int last_slot_ = 0;

    std::uint64_t* plane(int slot, int bit) {
        return planes_.data() +
               (static_cast<std::size_t>(slot) * rp_.wbits + bit) * words_;
    }
    const std::uint64_t* plane(int slot, int bit) const {
        return planes_.data() +
               (static_cast<std::size_t>(slot) * rp_.wbits + bit) * words_;
    }
};

/// Word bit index of side-position q (q = 0 is the most significant bit for
/// Msb, the least significant for Lsb).
inline int side_bit(BitSide side, int wbits, int q) {
    return side == BitSide::Msb ? wbits - 1 - q : q;
}

/// The linear map from the p-bit state to the chosen v bits of the first k
/// outputs: row j*v + q is the functional for side-position q of output j.
f2::Matrix output_map(const RecursionParams& rp, const TemperingParams& tp,
                      int k, int v, BitSide side);

/// Dimension of equidistribution to v-bit accuracy: the largest k such that
/// the first k output groups keep the map of full rank k*v, capped at
/// floor(p/v). Requires a maximal-period parameter set for the counting
/// interpretation.
int k_of_v(const RecursionParams& rp, const TemperingParams& tp, int v,
           BitSide side = BitSide::Msb);

/// Full-period counting oracle: enumerates all 2^p - 1 outputs and returns
/// the max k where every nonzero kv-bit pattern occurs exactly 2^(p-kv)
/// times and the zero pattern once less. Throws for p > 21.
int brute_force_kv(const RecursionParams& rp, const TemperingParams& tp,
                   int v, BitSide side = BitSide::Msb);

struct DefectResult {
    std::vector<int> dv;
    long long delta;
};

/// d(v) = floor(p/v) - k(v) and their sum. kv[i] holds k(i+1). Throws
/// "k(v) exceeds theoretical bound" when any defect would be negative.
DefectResult defects(std::span<const int> kv, int mexp);

struct EquidistReport {
    int mexp = 0;
    int wbits = 0;
    std::vector<int> kv;
    std::vector<int> dv;
    long long delta = 0;
    int max_defect = 0;
};

/// k(v), d(v) for v = 1..w plus the total defect. n_threads = 0 uses the
/// OpenMP default; 1 gives the serial reference path. The result does not
/// depend on the thread count.
EquidistReport kv_table(const RecursionParams& rp, const TemperingParams& tp,
                        int n_threads = 0);

/// Defect ratio 100*d/(k+d) in percent, two decimals, bare "0" when d = 0.
std::string format_defect_ratio(int k, int d);
/// Table-1-shaped report: aligned text or CSV, trailing total-defect line.
std::string format_kv_table(const EquidistReport& rep, bool csv);

/// Precomputed per-chunk planes for the greedy tempering search. The chunk
/// is the side-positions [pos_lo, pos_hi) of tempering-matrix row `row`;
/// those bits must still be zero in `base`. Candidate patterns then only
/// toggle the stored nib plane into the stored output rows, so one
/// instance serves every pattern of the chunk.
class ChunkEvaluator {
 public:
    ChunkEvaluator(const RecursionParams& rp, const TemperingParams& base,
                   int row, BitSide side, int pos_lo, int pos_hi);

    int pos_lo() const { return pos_lo_; }
    int pos_hi() const { return pos_hi_; }
    int width() const { return pos_hi_ - pos_lo_; }

    /// Sum over v in (pos_lo, pos_hi] of the defect d(v) for the candidate
    /// `pattern` (bit t of pattern toggles side-position pos_lo + t).
    /// Returns early with a value > abort_above once the running sum
    /// exceeds it.
    long long defect_sum(unsigned pattern, long long abort_above,
                         f2::RankAccumulator& acc) const;

 private:
    const RecursionParams& rp_;
    int row_;
    BitSide side_;
    int pos_lo_;
    int pos_hi_;
    int words_;
    int k_max_;
    // per output: pos_hi planes of tempered-output rows, then the nib plane
    std::vector<std::uint64_t> planes_;

    const std::uint64_t* out_row(int output, int pos) const {
        return planes_.data() +
               (static_cast<std::size_t>(output) * (pos_hi_ + 1) + pos) *
                   words_;
    }
    const std::uint64_t* nib_row(int output) const {
        return out_row(output, pos_hi_);
    }
};

}  // namespace mtgp
