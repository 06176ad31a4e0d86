#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mtgp::f2 {

/// Dense bit matrix over GF(2), row-major, each row padded to whole 64-bit
/// words.
class Matrix {
 public:
    Matrix() = default;
    Matrix(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int row_words() const { return row_words_; }

    bool get(int r, int c) const;
    void set(int r, int c, bool v);

    std::span<std::uint64_t> row(int r);
    std::span<const std::uint64_t> row(int r) const;

    /// Builds a matrix whose row i is the low `cols` bits of words[i]
    /// (bit b of the word = column cols-1-b, i.e. word MSB first).
    static Matrix from_words_msb_first(std::span<const std::uint32_t> words,
                                       int cols);

    bool operator==(const Matrix&) const = default;

 private:
    int rows_ = 0;
    int cols_ = 0;
    int row_words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Rank over GF(2) by Gaussian elimination.
int rank(const Matrix& m);

/// Incremental GF(2) row elimination: rows stream in and the reduced basis
/// is kept, so rank queries after each row are O(1). Pivot rows are indexed
/// directly by pivot bit position.
class RankAccumulator {
 public:
    explicit RankAccumulator(int cols);

    int cols() const { return cols_; }
    int words() const { return words_; }
    int rank() const { return rank_; }

    /// Reduces `row` (destroyed) against the basis; inserts it as a new
    /// pivot if independent. Returns true when the rank grew.
    bool add_row(std::uint64_t* row);

    void reset();

 private:
    int cols_;
    int words_;
    int rank_ = 0;
    std::vector<std::int32_t> pivot_top_word_;  // -1 when absent
    std::vector<std::uint64_t> arena_;          // row for pivot bit b at b*words_
    std::vector<int> used_;                     // pivot positions, for reset
};

}  // namespace mtgp::f2
