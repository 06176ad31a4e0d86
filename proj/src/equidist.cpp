#include "mtgp/equidist.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <memory>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mtgp {

namespace {

void xor_into(std::uint64_t* dst, const std::uint64_t* src, int words) {
    for (int i = 0; i < words; ++i) {
        dst[i] ^= src[i];
    }
}

}  // namespace

BitslicedGenerator::BitslicedGenerator(const RecursionParams& rp) : rp_(rp) {
    rp_.validate();
    words_ = (rp_.mexp + 63) / 64;
    planes_.assign(static_cast<std::size_t>(rp_.n) * rp_.wbits * words_, 0);
    scratch_.assign(static_cast<std::size_t>(rp_.wbits) * words_, 0);
    nib_.assign(static_cast<std::size_t>(4) * words_, 0);
    // Basis layout: the significant bits of x_0 (bits r..w-1) come first,
    // then all bits of x_1 .. x_{n-1}. The r masked-off LSBs of x_0 are the
    // zero functional.
    int basis = 0;
    for (int b = rp_.r; b < rp_.wbits; ++b) {
        plane(0, b)[basis >> 6] = std::uint64_t{1} << (basis & 63);
        ++basis;
    }
    for (int s = 1; s < rp_.n; ++s) {
        for (int b = 0; b < rp_.wbits; ++b) {
            plane(s, b)[basis >> 6] = std::uint64_t{1} << (basis & 63);
            ++basis;
        }
    }
}

void BitslicedGenerator::step() {
    const int w = rp_.wbits;
    const int n = rp_.n;
    const int x0s = cur_;
    const int x1s = (cur_ + 1) % n;
    const int xms = (cur_ + rp_.m) % n;
    const int xm1s = (cur_ + rp_.m - 1) % n;

    // nibble planes from x_{M-1+i}: bit c of the tempering key is
    // x[c] ^ x[c+w/4] ^ x[c+w/2] ^ x[c+3w/4] (terms beyond w drop out)
    for (int c = 0; c < 4; ++c) {
        std::uint64_t* dst = nib_.data() + static_cast<std::size_t>(c) * words_;
        std::memcpy(dst, plane(xm1s, c), static_cast<std::size_t>(words_) * 8);
        for (int t = 1; t < 4; ++t) {
            const int b = c + t * (w / 4);
            if (b < w) {
                xor_into(dst, plane(xm1s, b), words_);
            }
        }
    }

    // t = x1 ^ (x0 & mask); t ^= t << sh1  (descending keeps it in place)
    for (int b = 0; b < w; ++b) {
        std::uint64_t* dst =
            scratch_.data() + static_cast<std::size_t>(b) * words_;
        std::memcpy(dst, plane(x1s, b), static_cast<std::size_t>(words_) * 8);
        if (b >= rp_.r) {
            xor_into(dst, plane(x0s, b), words_);
        }
    }
    for (int b = w - 1; b >= rp_.sh1; --b) {
        xor_into(scratch_.data() + static_cast<std::size_t>(b) * words_,
                 scratch_.data() +
                     static_cast<std::size_t>(b - rp_.sh1) * words_,
                 words_);
    }
    // u = t ^ (xm >> sh2)
    for (int b = 0; b + rp_.sh2 < w; ++b) {
        xor_into(scratch_.data() + static_cast<std::size_t>(b) * words_,
                 plane(xms, b + rp_.sh2), words_);
    }
    // new = u ^ rectbl[u & 0xF]; R row l pairs with nibble bit 3-l
    for (int b = 0; b < w; ++b) {
        std::uint64_t* dst = plane(x0s, b);  // slot of x_{N+i} with L = n
        std::memcpy(dst,
                    scratch_.data() + static_cast<std::size_t>(b) * words_,
                    static_cast<std::size_t>(words_) * 8);
        for (int l = 0; l < 4; ++l) {
            if ((rp_.rmat[static_cast<std::size_t>(l)] >> b) & 1u) {
                xor_into(dst,
                         scratch_.data() +
                             static_cast<std::size_t>(3 - l) * words_,
                         words_);
            }
        }
    }
    last_slot_ = x0s;
    cur_ = x1s;
}

const std::uint64_t* BitslicedGenerator::raw_plane(int bit) const {
    return plane(last_slot_, bit);
}

const std::uint64_t* BitslicedGenerator::nib_plane(int bit) const {
    return nib_.data() + static_cast<std::size_t>(bit) * words_;
}

void BitslicedGenerator::tempered_row(const TemperingParams& tp, int bit,
                                      std::uint64_t* out) const {
    std::memcpy(out, raw_plane(bit), static_cast<std::size_t>(words_) * 8);
    for (int l = 0; l < 4; ++l) {
        if ((tp.tmat[static_cast<std::size_t>(l)] >> bit) & 1u) {
            xor_into(out, nib_plane(3 - l), words_);
        }
    }
}

f2::Matrix output_map(const RecursionParams& rp, const TemperingParams& tp,
                      int k, int v, BitSide side) {
    BitslicedGenerator gen(rp);
    f2::Matrix m(k * v, rp.mexp);
    std::vector<std::uint64_t> row(static_cast<std::size_t>(gen.words()));
    for (int j = 0; j < k; ++j) {
        gen.step();
        for (int q = 0; q < v; ++q) {
            gen.tempered_row(tp, side_bit(side, rp.wbits, q), row.data());
            auto dst = m.row(j * v + q);
            std::memcpy(dst.data(), row.data(),
                        std::min(dst.size_bytes(), row.size() * 8));
        }
    }
    return m;
}

namespace {

f2::RankAccumulator& thread_scratch(int cols) {
    thread_local std::unique_ptr<f2::RankAccumulator> acc;
    if (!acc || acc->cols() != cols) {
        acc = std::make_unique<f2::RankAccumulator>(cols);
    }
    acc->reset();
    return *acc;
}

}  // namespace

int k_of_v(const RecursionParams& rp, const TemperingParams& tp, int v,
           BitSide side) {
    if (v < 1 || v > rp.wbits) {
        throw std::invalid_argument("v out of range");
    }
    const int bound = rp.mexp / v;
    BitslicedGenerator gen(rp);
    f2::RankAccumulator& acc = thread_scratch(rp.mexp);
    std::vector<std::uint64_t> row(static_cast<std::size_t>(gen.words()));
    for (int k = 0; k < bound; ++k) {
        gen.step();
        for (int q = 0; q < v; ++q) {
            gen.tempered_row(tp, side_bit(side, rp.wbits, q), row.data());
            if (!acc.add_row(row.data())) {
                return k;
            }
        }
    }
    return bound;
}

int brute_force_kv(const RecursionParams& rp, const TemperingParams& tp,
                   int v, BitSide side) {
    if (rp.mexp > 21) {
        throw std::invalid_argument("brute force limited to p <= 21");
    }
    if (v < 1 || v > rp.wbits) {
        throw std::invalid_argument("v out of range");
    }
    const std::uint32_t period = (std::uint32_t{1} << rp.mexp) - 1;
    Generator gen(rp, tp, 1);
    std::vector<std::uint16_t> vals(period);
    const Word lmask = (Word{1} << v) - 1;
    for (std::uint32_t i = 0; i < period; ++i) {
        const Word o = gen.next_uint();
        vals[i] = static_cast<std::uint16_t>(
            side == BitSide::Msb ? o >> (rp.wbits - v) : o & lmask);
    }
    int best = 0;
    for (int k = 1; k * v <= rp.mexp; ++k) {
        const std::uint32_t buckets = std::uint32_t{1} << (k * v);
        const std::uint32_t expected = std::uint32_t{1}
                                       << (rp.mexp - k * v);
        std::vector<std::uint32_t> counts(buckets, 0);
        for (std::uint32_t i = 0; i < period; ++i) {
            std::uint32_t pat = 0;
            for (int j = 0; j < k; ++j) {
                std::uint32_t idx = i + static_cast<std::uint32_t>(j);
                if (idx >= period) {
                    idx -= period;
                }
                pat = (pat << v) | vals[idx];
            }
            ++counts[pat];
        }
        bool uniform = counts[0] == expected - 1;
        for (std::uint32_t b = 1; uniform && b < buckets; ++b) {
            uniform = counts[b] == expected;
        }
        if (!uniform) {
            break;
        }
        best = k;
    }
    return best;
}

DefectResult defects(std::span<const int> kv, int mexp) {
    DefectResult res;
    res.dv.resize(kv.size());
    res.delta = 0;
    for (std::size_t i = 0; i < kv.size(); ++i) {
        const int bound = mexp / static_cast<int>(i + 1);
        const int d = bound - kv[i];
        if (d < 0) {
            throw std::runtime_error("k(v) exceeds theoretical bound");
        }
        res.dv[i] = d;
        res.delta += d;
    }
    return res;
}

EquidistReport kv_table(const RecursionParams& rp, const TemperingParams& tp,
                        int n_threads) {
    EquidistReport rep;
    rep.mexp = rp.mexp;
    rep.wbits = rp.wbits;
    rep.kv.assign(static_cast<std::size_t>(rp.wbits), 0);
#ifdef _OPENMP
    if (n_threads == 1) {
        for (int v = 1; v <= rp.wbits; ++v) {
            rep.kv[static_cast<std::size_t>(v - 1)] = k_of_v(rp, tp, v);
        }
    } else {
#pragma omp parallel for schedule(dynamic) \
    num_threads(n_threads > 0 ? n_threads : omp_get_max_threads())
        for (int v = 1; v <= rp.wbits; ++v) {
            rep.kv[static_cast<std::size_t>(v - 1)] = k_of_v(rp, tp, v);
        }
    }
#else
    (void)n_threads;
    for (int v = 1; v <= rp.wbits; ++v) {
        rep.kv[static_cast<std::size_t>(v - 1)] = k_of_v(rp, tp, v);
    }
#endif
    auto d = defects(rep.kv, rp.mexp);
    rep.dv = std::move(d.dv);
    rep.delta = d.delta;
    rep.max_defect = rep.dv.empty()
                         ? 0
                         : *std::max_element(rep.dv.begin(), rep.dv.end());
    return rep;
}

std::string format_defect_ratio(int k, int d) {
    if (d == 0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f",
                  100.0 * d / (static_cast<double>(k) + d));
    return buf;
}

std::string format_kv_table(const EquidistReport& rep, bool csv) {
    std::ostringstream os;
    if (csv) {
        os << "v,k,d,r_percent\n";
        for (int v = 1; v <= rep.wbits; ++v) {
            const int k = rep.kv[static_cast<std::size_t>(v - 1)];
            const int d = rep.dv[static_cast<std::size_t>(v - 1)];
            os << v << ',' << k << ',' << d << ','
               << format_defect_ratio(k, d) << '\n';
        }
        os << "delta," << rep.delta << "\nmax_defect," << rep.max_defect
           << '\n';
        return os.str();
    }
    char line[128];
    std::snprintf(line, sizeof(line), "%4s %8s %6s %8s\n", "v", "k(v)", "d(v)",
                  "r(v)%");
    os << line;
    for (int v = 1; v <= rep.wbits; ++v) {
        const int k = rep.kv[static_cast<std::size_t>(v - 1)];
        const int d = rep.dv[static_cast<std::size_t>(v - 1)];
        std::snprintf(line, sizeof(line), "%4d %8d %6d %8s\n", v, k, d,
                      format_defect_ratio(k, d).c_str());
        os << line;
    }
    os << "Total dimension defect Delta = " << rep.delta
       << " (max d(v) = " << rep.max_defect << ")\n";
    return os.str();
}

ChunkEvaluator::ChunkEvaluator(const RecursionParams& rp,
                               const TemperingParams& base, int row,
                               BitSide side, int pos_lo, int pos_hi)
    : rp_(rp), row_(row), side_(side), pos_lo_(pos_lo), pos_hi_(pos_hi) {
    for (int q = pos_lo; q < pos_hi; ++q) {
        const int bit = side_bit(side, rp.wbits, q);
        if ((base.tmat[static_cast<std::size_t>(row)] >> bit) & 1u) {
            throw std::logic_error("chunk bits must start zero");
        }
    }
    BitslicedGenerator gen(rp);
    words_ = gen.words();
    k_max_ = rp.mexp / (pos_lo + 1);
    planes_.assign(static_cast<std::size_t>(k_max_) * (pos_hi_ + 1) * words_,
                   0);
    for (int j = 0; j < k_max_; ++j) {
        gen.step();
        for (int q = 0; q < pos_hi_; ++q) {
            gen.tempered_row(
                base, side_bit(side, rp.wbits, q),
                planes_.data() +
                    (static_cast<std::size_t>(j) * (pos_hi_ + 1) + q) *
                        words_);
        }
        std::memcpy(planes_.data() +
                        (static_cast<std::size_t>(j) * (pos_hi_ + 1) +
                         pos_hi_) *
                            words_,
                    gen.nib_plane(3 - row),
                    static_cast<std::size_t>(words_) * 8);
    }
}

long long ChunkEvaluator::defect_sum(unsigned pattern, long long abort_above,
                                     f2::RankAccumulator& acc) const {
    std::vector<std::uint64_t> buf(static_cast<std::size_t>(words_));
    long long sum = 0;
    for (int v = pos_lo_ + 1; v <= pos_hi_; ++v) {
        const int bound = rp_.mexp / v;
        acc.reset();
        int k = bound;
        for (int j = 0; j < bound && k == bound; ++j) {
            for (int q = 0; q < v; ++q) {
                std::memcpy(buf.data(), out_row(j, q),
                            static_cast<std::size_t>(words_) * 8);
                if (q >= pos_lo_ && ((pattern >> (q - pos_lo_)) & 1u)) {
                    xor_into(buf.data(), nib_row(j), words_);
                }
                if (!acc.add_row(buf.data())) {
                    k = j;
                    break;
                }
            }
        }
        sum += bound - k;
        if (sum > abort_above) {
            return sum;
        }
    }
    return sum;
}

}  // namespace mtgp
