#include "mtgp/generator.hpp"

#include <bit>
#include <stdexcept>

namespace mtgp {

Word temper_float_bits(Word xn, Word xm1, std::span<const Word, 16> sngltbl) {
    Word t = xm1 ^ (xm1 >> 16);
    t ^= t >> 8;
    return (xn >> 9) ^ sngltbl[t & 0xF];
}

void seed_state(std::span<Word> state, Word seed, const RecursionParams& rp) {
    const Word wmask = rp.word_mask();
    state[0] = seed & wmask;
    for (std::size_t i = 1; i < state.size(); ++i) {
        state[i] = (1812433253u *
                        (state[i - 1] ^ (state[i - 1] >> (rp.wbits - 2))) +
                    static_cast<Word>(i)) &
                   wmask;
    }
    Word sig = state[0] & rp.mask();
    for (std::size_t i = 1; i < state.size(); ++i) {
        sig |= state[i];
    }
    if (sig == 0) {
        state[0] |= Word{1} << (rp.wbits - 1);
    }
}

Generator::Generator(const RecursionParams& rp, const TemperingParams& tp,
                     Word seed)
    : rp_(rp), tp_(tp), rectbl_(build_table(std::span<const Word, 4>(rp.rmat))),
      buf_(static_cast<std::size_t>(rp.n)) {
    rp_.validate();
    seed_state(buf_, seed, rp_);
}

Generator::Step Generator::advance() {
    const int n = rp_.n;
    const Word x0 = buf_[static_cast<std::size_t>(cur_)];
    const Word x1 = buf_[static_cast<std::size_t>((cur_ + 1) % n)];
    const Word xm = buf_[static_cast<std::size_t>((cur_ + rp_.m) % n)];
    const Word xm1 = buf_[static_cast<std::size_t>((cur_ + rp_.m - 1) % n)];
    const Word xnew = recursion_step(x0, x1, xm, rp_, rectbl_);
    buf_[static_cast<std::size_t>(cur_)] = xnew;  // slot of x_{N+i} mod N
    cur_ = (cur_ + 1) % n;
    return {xnew, xm1};
}

Word Generator::next_uint() {
    const Step s = advance();
    return temper(s.xnew, s.xm1, tp_.tmptbl, rp_.wbits);
}

Word Generator::next_raw() { return advance().xnew; }

Word Generator::next_float12_bits() {
    if (rp_.wbits != 32) {
        throw std::domain_error("float mode requires 32-bit words");
    }
    const Step s = advance();
    return temper_float_bits(s.xnew, s.xm1, tp_.sngltbl);
}

float Generator::next_float12() {
    return std::bit_cast<float>(next_float12_bits());
}

float Generator::next_float01() { return next_float12() - 1.0f; }

Word Generator::next(OutputMode mode) {
    switch (mode) {
        case OutputMode::Uint:
            return next_uint();
        case OutputMode::FloatClosedOpen12:
            return next_float12_bits();
        case OutputMode::FloatClosedOpen01:
            return std::bit_cast<Word>(next_float01());
    }
    return 0;
}

std::vector<Word> Generator::significant_state() const {
    std::vector<Word> out(static_cast<std::size_t>(rp_.n));
    out[0] = word_at(0) & rp_.mask();
    for (int j = 1; j < rp_.n; ++j) {
        out[static_cast<std::size_t>(j)] = word_at(j);
    }
    return out;
}

void Generator::load_window(std::span<const Word> window) {
    if (window.size() != buf_.size()) {
        throw std::invalid_argument("window size must equal N");
    }
    for (int j = 0; j < rp_.n; ++j) {
        buf_[static_cast<std::size_t>((cur_ + j) % rp_.n)] =
            window[static_cast<std::size_t>(j)] & rp_.word_mask();
    }
}

}  // namespace mtgp
