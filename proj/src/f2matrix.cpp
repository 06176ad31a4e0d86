#include "mtgp/f2matrix.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace mtgp::f2 {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
        throw std::invalid_argument("negative matrix dimension");
    }
    row_words_ = (cols + 63) / 64;
    bits_.assign(static_cast<std::size_t>(rows) * row_words_, 0);
}

bool Matrix::get(int r, int c) const {
    return (bits_[static_cast<std::size_t>(r) * row_words_ + (c >> 6)] >>
            (c & 63)) & 1u;
}

void Matrix::set(int r, int c, bool v) {
    auto& w = bits_[static_cast<std::size_t>(r) * row_words_ + (c >> 6)];
    const std::uint64_t bit = std::uint64_t{1} << (c & 63);
    w = v ? (w | bit) : (w & ~bit);
}

std::span<std::uint64_t> Matrix::row(int r) {
    return {bits_.data() + static_cast<std::size_t>(r) * row_words_,
            static_cast<std::size_t>(row_words_)};
}

std::span<const std::uint64_t> Matrix::row(int r) const {
    return {bits_.data() + static_cast<std::size_t>(r) * row_words_,
            static_cast<std::size_t>(row_words_)};
}

Matrix Matrix::from_words_msb_first(std::span<const std::uint32_t> words,
                                    int cols) {
    Matrix m(static_cast<int>(words.size()), cols);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < cols; ++c) {
            m.set(r, c, (words[static_cast<std::size_t>(r)] >>
                         (cols - 1 - c)) & 1u);
        }
    }
    return m;
}

int rank(const Matrix& m) {
    RankAccumulator acc(m.cols());
    std::vector<std::uint64_t> row(static_cast<std::size_t>(m.row_words()));
    for (int r = 0; r < m.rows(); ++r) {
        auto src = m.row(r);
        std::memcpy(row.data(), src.data(), src.size_bytes());
        acc.add_row(row.data());
    }
    return acc.rank();
}

RankAccumulator::RankAccumulator(int cols) : cols_(cols) {
    if (cols < 0) {
        throw std::invalid_argument("negative column count");
    }
    words_ = (cols + 63) / 64;
    pivot_top_word_.assign(static_cast<std::size_t>(cols), -1);
    arena_.assign(static_cast<std::size_t>(cols) * words_, 0);
}

bool RankAccumulator::add_row(std::uint64_t* row) {
    int wi = words_ - 1;
    while (wi >= 0) {
        if (row[wi] == 0) {
            --wi;
            continue;
        }
        const int bit = wi * 64 + 63 - std::countl_zero(row[wi]);
        const std::int32_t ptw = pivot_top_word_[static_cast<std::size_t>(bit)];
        if (ptw < 0) {
            std::uint64_t* dst =
                arena_.data() + static_cast<std::size_t>(bit) * words_;
            std::memcpy(dst, row, static_cast<std::size_t>(wi + 1) * 8);
            if (wi + 1 < words_) {
                std::memset(dst + wi + 1, 0,
                            static_cast<std::size_t>(words_ - wi - 1) * 8);
            }
            pivot_top_word_[static_cast<std::size_t>(bit)] =
                static_cast<std::int32_t>(wi);
            used_.push_back(bit);
            ++rank_;
            return true;
        }
        const std::uint64_t* piv =
            arena_.data() + static_cast<std::size_t>(bit) * words_;
        for (int i = 0; i <= wi; ++i) {
            row[i] ^= piv[i];
        }
    }
    return false;
}

void RankAccumulator::reset() {
    for (int bit : used_) {
        pivot_top_word_[static_cast<std::size_t>(bit)] = -1;
        std::memset(arena_.data() + static_cast<std::size_t>(bit) * words_, 0,
                    static_cast<std::size_t>(words_) * 8);
    }
    used_.clear();
    rank_ = 0;
}

}  // namespace mtgp::f2
