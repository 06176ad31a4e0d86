#include "mtgp/params.hpp"

#include <cmath>
#include <stdexcept>

namespace mtgp {

SizeInfo derive_sizes(int mexp, int wbits) {
    if (mexp <= 2 * wbits) {
        throw std::invalid_argument(
            "degenerate layout: no valid middle position");
    }
    const int n = (mexp + wbits - 1) / wbits;
    return {n, wbits * n - mexp};
}

Word bitmask(int wbits, int r) {
    const Word full = wbits >= 32 ? ~Word{0} : ((Word{1} << wbits) - 1);
    const Word low = r >= 32 ? ~Word{0} : ((Word{1} << r) - 1);
    return full & ~low;
}

namespace {
constexpr std::pair<int, int> kSupported[] = {
    {13, 4},  {17, 8},  {19, 8},     {89, 8},     {89, 16},
    {3217, 32}, {4423, 32}, {11213, 32}, {23209, 32}, {44497, 32},
};
}  // namespace

std::span<const std::pair<int, int>> supported_configs() {
    return kSupported;
}

bool is_supported_config(int mexp, int wbits) {
    for (auto [p, w] : kSupported) {
        if (p == mexp && w == wbits) {
            return true;
        }
    }
    return false;
}

int default_lane_count(int n) {
    int lanes = 1;
    while (2 * lanes <= n - 2) {
        lanes *= 2;
    }
    return lanes;
}

std::array<Word, 16> build_table(std::span<const Word, 4> rows) {
    std::array<Word, 16> tbl{};
    tbl[0] = 0;
    for (int i = 1; i < 16; ++i) {
        Word v = 0;
        for (int l = 0; l < 4; ++l) {
            if (i & (8 >> l)) {
                v ^= rows[static_cast<std::size_t>(l)];
            }
        }
        tbl[static_cast<std::size_t>(i)] = v;
    }
    return tbl;
}

bool check_r_condition(std::span<const Word, 4> rows) {
    const auto tbl = build_table(rows);
    // images of the nibble basis under u -> u ^ (u R), low nibble only
    std::array<Word, 4> img;
    for (int b = 0; b < 4; ++b) {
        const Word u = Word{1} << b;
        img[static_cast<std::size_t>(b)] = u ^ (tbl[u] & 0xF);
    }
    // rank of the four 4-bit images
    int rank = 0;
    for (int bit = 3; bit >= 0; --bit) {
        int piv = -1;
        for (int i = rank; i < 4; ++i) {
            if (img[static_cast<std::size_t>(i)] & (Word{1} << bit)) {
                piv = i;
                break;
            }
        }
        if (piv < 0) {
            continue;
        }
        std::swap(img[static_cast<std::size_t>(piv)],
                  img[static_cast<std::size_t>(rank)]);
        for (int i = 0; i < 4; ++i) {
            if (i != rank && (img[static_cast<std::size_t>(i)] &
                              (Word{1} << bit))) {
                img[static_cast<std::size_t>(i)] ^=
                    img[static_cast<std::size_t>(rank)];
            }
        }
        ++rank;
    }
    return rank == 4;
}

void RecursionParams::validate() const {
    const auto sz = derive_sizes(mexp, wbits);
    if (wbits != 4 && wbits != 8 && wbits != 16 && wbits != 32) {
        throw std::invalid_argument("unsupported word size");
    }
    if (n != sz.n || r != sz.r) {
        throw std::invalid_argument("N or r inconsistent with mexp/wordsize");
    }
    if (!(1 < m && m < n)) {
        throw std::invalid_argument("middle position out of range");
    }
    if (!(0 < sh1 && sh1 < wbits) || !(0 <= sh2 && sh2 < wbits)) {
        throw std::invalid_argument("shift amount out of range");
    }
    const Word wmask = word_mask();
    for (Word row : rmat) {
        if (row & ~wmask) {
            throw std::invalid_argument("R row wider than the word size");
        }
    }
    if (!check_r_condition(std::span<const Word, 4>(rmat))) {
        throw std::invalid_argument("R low-nibble matrix has eigenvalue 1");
    }
}

TemperingParams TemperingParams::from_matrix(std::span<const Word, 4> rows,
                                             int wbits) {
    TemperingParams tp;
    for (int i = 0; i < 4; ++i) {
        tp.tmat[static_cast<std::size_t>(i)] =
            rows[static_cast<std::size_t>(i)];
    }
    tp.tmptbl = build_table(rows);
    if (wbits == 32) {
        for (int i = 0; i < 16; ++i) {
            tp.sngltbl[static_cast<std::size_t>(i)] =
                0x3F800000u | (tp.tmptbl[static_cast<std::size_t>(i)] >> 9);
        }
    }
    return tp;
}

TemperingParams TemperingParams::identity(int wbits) {
    const std::array<Word, 4> zero{};
    return from_matrix(std::span<const Word, 4>(zero), wbits);
}

int scaled_sh1(int wbits) {
    const int v = static_cast<int>(std::lround(13.0 * wbits / 32.0));
    return v < 1 ? 1 : v;
}

int scaled_sh2(int wbits) {
    const int v = static_cast<int>(std::lround(4.0 * wbits / 32.0));
    return v < 1 ? 1 : v;
}

}  // namespace mtgp
