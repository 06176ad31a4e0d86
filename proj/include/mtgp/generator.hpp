#pragma once

#include <span>
#include <vector>

#include "mtgp/params.hpp"

namespace mtgp {

enum class OutputMode { Uint, FloatClosedOpen12, FloatClosedOpen01 };

/// One step of the recursion: computes x_{N+i} from x_i, x_{1+i}, x_{M+i}.
/// rectbl must be build_table(rp.rmat). Shifts are logical within wbits.
inline Word recursion_step(Word x0, Word x1, Word xm,
                           const RecursionParams& rp,
                           std::span<const Word, 16> rectbl) {
    Word t = x1 ^ (x0 & rp.mask());
    t = (t ^ (t << rp.sh1)) & rp.word_mask();
    const Word u = t ^ (xm >> rp.sh2);
    return u ^ rectbl[u & 0xF];
}

/// Tempered output: x_{N+i} combined with the lookup keyed on x_{M-1+i}.
/// The shifts are wbits/2 and wbits/4 (16 and 8 at full word size).
inline Word temper(Word xn, Word xm1, std::span<const Word, 16> tmptbl,
                   int wbits) {
    Word t = xm1 ^ (xm1 >> (wbits / 2));
    t ^= t >> (wbits / 4);
    return xn ^ tmptbl[t & 0xF];
}

/// IEEE-754 single bit pattern in [1,2): (x >> 9) combined with the
/// float-formatted table. 32-bit words only.
Word temper_float_bits(Word xn, Word xm1, std::span<const Word, 16> sngltbl);

/// Sequential MTGP generator over a ring buffer of N words. Single-owner:
/// callers serialize access externally.
class Generator {
 public:
    /// Seeds the state: buf[0] = seed, then the multiplier-1812433253
    /// integer recurrence; forces a nonzero significant state.
    Generator(const RecursionParams& rp, const TemperingParams& tp, Word seed);

    Word next_uint();
    /// Untempered x_{N+i}; advances the state like next_uint.
    Word next_raw();
    Word next_float12_bits();
    float next_float12();
    float next_float01();
    Word next(OutputMode mode);

    const RecursionParams& params() const { return rp_; }
    const TemperingParams& tempering() const { return tp_; }

    /// Logical state window x_i .. x_{i+N-1} (oldest first, unmasked).
    Word word_at(int j) const {
        return buf_[static_cast<std::size_t>((cur_ + j) % rp_.n)];
    }
    /// The p significant bits as N words with the oldest word masked.
    std::vector<Word> significant_state() const;
    /// Overwrites the logical window with the given N words (oldest first).
    void load_window(std::span<const Word> window);

 private:
    RecursionParams rp_;
    TemperingParams tp_;
    std::array<Word, 16> rectbl_;
    std::vector<Word> buf_;
    int cur_ = 0;

    struct Step {
        Word xnew;
        Word xm1;
    };
    Step advance();
};

/// Fills state[0..n) from a 32-bit seed: the MT-style initializer truncated
/// to wbits, then the all-zero-significant-state fixup.
void seed_state(std::span<Word> state, Word seed, const RecursionParams& rp);

}  // namespace mtgp
