#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "mtgp/f2matrix.hpp"

namespace mtgp {

using Word = std::uint32_t;

struct SizeInfo {
    int n;  // state length in words, ceil(mexp / wbits)
    int r;  // discarded LSBs of the oldest word, wbits*n - mexp
};

/// Throws "degenerate layout: no valid middle position" when mexp <= 2*wbits.
SizeInfo derive_sizes(int mexp, int wbits);

/// Word with the (wbits - r) MSBs set and the r LSBs clear.
Word bitmask(int wbits, int r);

/// (mexp, wbits) pairs this build accepts: the paper-scale 32-bit exponents
/// plus small desk-scale test sizes.
std::span<const std::pair<int, int>> supported_configs();
bool is_supported_config(int mexp, int wbits);

/// Largest power of two no more than n-2: the paper's default thread count
/// for a degree-n generator.
int default_lane_count(int n);

/// Nibble lookup table for a 4-row bit-matrix: entry i is the XOR of the
/// rows selected by i's bits, with bit 3 of the nibble selecting row 0.
std::array<Word, 16> build_table(std::span<const Word, 4> rows);

/// The invertibility condition on R's four low nibbles: u -> u ^ (u&0xF)R
/// restricted to the low nibble must be a bijection, i.e. S + I invertible
/// where S is the 4x4 matrix of the rows' 4 LSBs.
bool check_r_condition(std::span<const Word, 4> rows);

struct RecursionParams {
    int mexp = 0;
    int wbits = 0;
    int n = 0;
    int m = 0;
    int r = 0;
    int sh1 = 0;
    int sh2 = 0;
    std::array<Word, 4> rmat{};  // rows of R, MSB of the word = leftmost column

    Word mask() const { return bitmask(wbits, r); }
    Word word_mask() const {
        return wbits >= 32 ? ~Word{0} : ((Word{1} << wbits) - 1);
    }
    /// Checks the structural invariants; throws std::invalid_argument.
    void validate() const;

    bool operator==(const RecursionParams&) const = default;
};

struct TemperingParams {
    std::array<Word, 4> tmat{};
    std::array<Word, 16> tmptbl{};
    std::array<Word, 16> sngltbl{};  // meaningful only at wbits == 32

    /// Derives both lookup tables from the matrix rows. sngltbl entries get
    /// the nine MSBs 001111111 and the 23 MSBs of tmptbl as their fraction.
    static TemperingParams from_matrix(std::span<const Word, 4> rows,
                                       int wbits);
    static TemperingParams identity(int wbits);

    bool operator==(const TemperingParams&) const = default;
};

/// Fixed shift parameters: 13 and 4 at full word size, scaled proportionally
/// at the desk-scale word sizes.
int scaled_sh1(int wbits);
int scaled_sh2(int wbits);

}  // namespace mtgp
