#include "mtgp/f2poly.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace mtgp::f2 {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for_bits(std::size_t bits) {
    return (bits + kWordBits - 1) / kWordBits;
}

// dst ^= src << shift, dst sized to hold the result.
void xor_shifted(std::vector<std::uint64_t>& dst,
                 std::span<const std::uint64_t> src, int shift) {
    const std::size_t word_off = static_cast<std::size_t>(shift) / kWordBits;
    const unsigned bit_off = static_cast<unsigned>(shift) % kWordBits;
    if (bit_off == 0) {
        for (std::size_t i = 0; i < src.size(); ++i) {
            dst[i + word_off] ^= src[i];
        }
        return;
    }
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i + word_off] ^= (src[i] << bit_off) | carry;
        carry = src[i] >> (kWordBits - bit_off);
    }
    if (carry != 0) {
        dst[src.size() + word_off] ^= carry;
    }
}

// 8-bit -> 16-bit zero-interleave, for squaring.
const std::uint16_t* bit_spread_table() {
    static const auto table = [] {
        static std::uint16_t t[256];
        for (unsigned b = 0; b < 256; ++b) {
            std::uint16_t v = 0;
            for (int k = 0; k < 8; ++k) {
                if (b & (1u << k)) {
                    v |= static_cast<std::uint16_t>(1u << (2 * k));
                }
            }
            t[b] = v;
        }
        return t;
    }();
    return table;
}

int top_bit(std::span<const std::uint64_t> w) {
    for (std::size_t i = w.size(); i-- > 0;) {
        if (w[i] != 0) {
            return static_cast<int>(i * kWordBits) + 63 -
                   std::countl_zero(w[i]);
        }
    }
    return -1;
}

std::uint64_t extract_word(std::span<const std::uint64_t> w,
                           std::size_t bit_off) {
    const std::size_t wi = bit_off / kWordBits;
    const unsigned sh = bit_off % kWordBits;
    if (wi >= w.size()) {
        return 0;
    }
    std::uint64_t v = w[wi] >> sh;
    if (sh != 0 && wi + 1 < w.size()) {
        v |= w[wi + 1] << (kWordBits - sh);
    }
    return v;
}

}  // namespace

BitSeq::BitSeq(std::span<const int> bits) {
    for (int b : bits) {
        push_back(b != 0);
    }
}

void BitSeq::push_back(bool bit) {
    if (size_ % kWordBits == 0) {
        words_.push_back(0);
    }
    if (bit) {
        words_[size_ >> 6] |= std::uint64_t{1} << (size_ & 63);
    }
    ++size_;
}

void Poly::normalize() {
    while (!limbs_.empty() && limbs_.back() == 0) {
        limbs_.pop_back();
    }
}

Poly Poly::monomial(int degree) {
    Poly p;
    p.set_coeff(degree, true);
    return p;
}

Poly Poly::from_limbs(std::vector<std::uint64_t> limbs) {
    Poly p;
    p.limbs_ = std::move(limbs);
    p.normalize();
    return p;
}

Poly Poly::from_hex(std::string_view s) {
    if (s.empty()) {
        throw std::invalid_argument("empty hex polynomial");
    }
    Poly p;
    p.limbs_.assign(words_for_bits(s.size() * 4), 0);
    int nibble = 0;
    for (std::size_t i = s.size(); i-- > 0; ++nibble) {
        char c = s[i];
        int v;
        if (c >= '0' && c <= '9') {
            v = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            v = c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
            v = c - 'A' + 10;
        } else {
            throw std::invalid_argument("bad hex digit in polynomial");
        }
        p.limbs_[static_cast<std::size_t>(nibble) / 16] ^=
            static_cast<std::uint64_t>(v) << (4 * (nibble % 16));
    }
    p.normalize();
    return p;
}

int Poly::degree() const { return top_bit(limbs_); }

bool Poly::coeff(int d) const {
    if (d < 0 || static_cast<std::size_t>(d) >= limbs_.size() * kWordBits) {
        return false;
    }
    return (limbs_[static_cast<std::size_t>(d) >> 6] >> (d & 63)) & 1u;
}

void Poly::set_coeff(int d, bool value) {
    if (d < 0) {
        throw std::invalid_argument("negative degree");
    }
    const std::size_t wi = static_cast<std::size_t>(d) >> 6;
    if (value) {
        if (wi >= limbs_.size()) {
            limbs_.resize(wi + 1, 0);
        }
        limbs_[wi] |= std::uint64_t{1} << (d & 63);
    } else if (wi < limbs_.size()) {
        limbs_[wi] &= ~(std::uint64_t{1} << (d & 63));
        normalize();
    }
}

int Poly::nonzero_terms() const {
    int n = 0;
    for (auto w : limbs_) {
        n += std::popcount(w);
    }
    return n;
}

Poly Poly::shifted_left(int bits) const {
    if (is_zero() || bits == 0) {
        Poly p = *this;
        return p;
    }
    Poly p;
    p.limbs_.assign(words_for_bits(static_cast<std::size_t>(degree()) + 1 +
                                   static_cast<std::size_t>(bits)),
                    0);
    xor_shifted(p.limbs_, limbs_, bits);
    return p;
}

std::string Poly::to_hex() const {
    const int deg = degree();
    const int digits = deg < 0 ? 1 : (deg / 4) + 1;
    std::string s(static_cast<std::size_t>(digits), '0');
    for (int i = 0; i < digits; ++i) {
        const std::uint64_t w =
            static_cast<std::size_t>(i) / 16 < limbs_.size()
                ? limbs_[static_cast<std::size_t>(i) / 16]
                : 0;
        const int v = static_cast<int>((w >> (4 * (i % 16))) & 0xF);
        s[static_cast<std::size_t>(digits - 1 - i)] = "0123456789abcdef"[v];
    }
    return s;
}

std::vector<std::uint8_t> Poly::packed_bytes() const {
    const int deg = degree();
    const std::size_t n = deg < 0 ? 1 : static_cast<std::size_t>(deg) / 8 + 1;
    std::vector<std::uint8_t> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t wi = i / 8;
        if (wi < limbs_.size()) {
            out[i] = static_cast<std::uint8_t>(limbs_[wi] >> (8 * (i % 8)));
        }
    }
    return out;
}

Poly operator^(Poly a, const Poly& b) {
    a ^= b;
    return a;
}

Poly& Poly::operator^=(const Poly& b) {
    if (limbs_.size() < b.limbs_.size()) {
        limbs_.resize(b.limbs_.size(), 0);
    }
    for (std::size_t i = 0; i < b.limbs_.size(); ++i) {
        limbs_[i] ^= b.limbs_[i];
    }
    normalize();
    return *this;
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) {
        return Poly::zero();
    }
    std::vector<std::uint64_t> res(
        words_for_bits(static_cast<std::size_t>(a.degree()) +
                       static_cast<std::size_t>(b.degree()) + 2),
        0);
    auto bl = b.limbs();
    auto al = a.limbs();
    for (std::size_t i = 0; i < al.size(); ++i) {
        std::uint64_t w = al[i];
        while (w != 0) {
            const int j = std::countr_zero(w);
            w &= w - 1;
            xor_shifted(res, bl, static_cast<int>(i * kWordBits) + j);
        }
    }
    return Poly::from_limbs(std::move(res));
}

Poly mod(Poly a, const Poly& f) {
    if (f.is_zero()) {
        throw std::invalid_argument("zero modulus");
    }
    const int df = f.degree();
    if (df == 0) {
        return Poly::zero();
    }
    std::vector<std::uint64_t> buf(a.limbs().begin(), a.limbs().end());
    int da = top_bit(buf);
    while (da >= df) {
        xor_shifted(buf, f.limbs(), da - df);
        da = top_bit(buf);
    }
    return Poly::from_limbs(std::move(buf));
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f) {
    if (f.is_zero()) {
        throw std::invalid_argument("zero modulus");
    }
    return mod(mul(a, b), f);
}

Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = mod(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

ReductionPlan::ReductionPlan(const Poly& modulus)
    : modulus_(modulus), degree_(modulus.degree()) {
    if (degree_ < 1) {
        throw std::invalid_argument("reduction modulus must have degree >= 1");
    }
    words_ = static_cast<int>(words_for_bits(static_cast<std::size_t>(degree_)));
    // bit_tbl[k] = x^(degree+k) mod f, fully reduced, k = 0..7
    std::array<std::vector<std::uint64_t>, 8> bit_tbl;
    std::vector<std::uint64_t> cur(static_cast<std::size_t>(words_) + 1, 0);
    for (std::size_t i = 0; i < modulus.limbs().size(); ++i) {
        cur[i] = modulus.limbs()[i];
    }
    cur[static_cast<std::size_t>(degree_) >> 6] &=
        ~(std::uint64_t{1} << (degree_ & 63));  // f_low = f - x^degree
    const std::size_t wd = static_cast<std::size_t>(degree_) >> 6;
    const std::uint64_t bd = std::uint64_t{1} << (degree_ & 63);
    for (int k = 0; k < 8; ++k) {
        bit_tbl[static_cast<std::size_t>(k)] = cur;
        // cur = (cur << 1) mod f; XOR with f cancels the leading term.
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const std::uint64_t nc = cur[i] >> 63;
            cur[i] = (cur[i] << 1) | carry;
            carry = nc;
        }
        if (cur[wd] & bd) {
            for (std::size_t i = 0; i < modulus.limbs().size(); ++i) {
                cur[i] ^= modulus.limbs()[i];
            }
        }
    }
    byte_tbl_.assign(256 * static_cast<std::size_t>(words_), 0);
    for (unsigned b = 1; b < 256; ++b) {
        const unsigned low = b & (b - 1);
        const int k = std::countr_zero(b);
        std::uint64_t* row = &byte_tbl_[b * static_cast<std::size_t>(words_)];
        const std::uint64_t* prev =
            &byte_tbl_[low * static_cast<std::size_t>(words_)];
        for (int i = 0; i < words_; ++i) {
            row[i] = prev[i] ^ bit_tbl[static_cast<std::size_t>(k)]
                                      [static_cast<std::size_t>(i)];
        }
    }
    scratch_.assign(2 * static_cast<std::size_t>(words_) + 2, 0);
}

void ReductionPlan::reduce_scratch() {
    const int d = degree_;
    const int tmax = d >= 2 ? (d - 2) / 8 : -1;
    for (int t = tmax; t >= 0; --t) {
        const std::size_t q = static_cast<std::size_t>(d) + 8u * t;
        const std::size_t wi = q / kWordBits;
        const unsigned sh = q % kWordBits;
        std::uint64_t byte = scratch_[wi] >> sh;
        if (sh > kWordBits - 8 && wi + 1 < scratch_.size()) {
            byte |= scratch_[wi + 1] << (kWordBits - sh);
        }
        byte &= 0xFF;
        if (byte == 0) {
            continue;
        }
        // clear the byte
        scratch_[wi] ^= (byte << sh);
        if (sh > kWordBits - 8 && wi + 1 < scratch_.size()) {
            scratch_[wi + 1] ^= byte >> (kWordBits - sh);
        }
        const std::uint64_t* row =
            &byte_tbl_[byte * static_cast<std::size_t>(words_)];
        const std::size_t off = 8u * t;
        const std::size_t woff = off / kWordBits;
        const unsigned boff = off % kWordBits;
        if (boff == 0) {
            for (int i = 0; i < words_; ++i) {
                scratch_[woff + static_cast<std::size_t>(i)] ^= row[i];
            }
        } else {
            std::uint64_t carry = 0;
            for (int i = 0; i < words_; ++i) {
                scratch_[woff + static_cast<std::size_t>(i)] ^=
                    (row[i] << boff) | carry;
                carry = row[i] >> (kWordBits - boff);
            }
            scratch_[woff + static_cast<std::size_t>(words_)] ^= carry;
        }
    }
}

Poly ReductionPlan::square_mod(const Poly& a) {
    std::fill(scratch_.begin(), scratch_.end(), 0);
    const std::uint16_t* spread = bit_spread_table();
    auto limbs = a.limbs();
    for (std::size_t i = 0; i < limbs.size(); ++i) {
        const std::uint64_t w = limbs[i];
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;
        for (int b = 0; b < 4; ++b) {
            lo |= static_cast<std::uint64_t>(spread[(w >> (8 * b)) & 0xFF])
                  << (16 * b);
            hi |= static_cast<std::uint64_t>(spread[(w >> (8 * b + 32)) & 0xFF])
                  << (16 * b);
        }
        scratch_[2 * i] = lo;
        scratch_[2 * i + 1] = hi;
    }
    reduce_scratch();
    return Poly::from_limbs(std::vector<std::uint64_t>(
        scratch_.begin(), scratch_.begin() + words_));
}

namespace {

std::vector<int> distinct_prime_factors(int n) {
    std::vector<int> out;
    for (int q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) {
                n /= q;
            }
        }
    }
    if (n > 1) {
        out.push_back(n);
    }
    return out;
}

}  // namespace

bool is_irreducible(const Poly& f) {
    const int d = f.degree();
    if (d < 1) {
        throw std::invalid_argument("degree must be >= 1");
    }
    if (d == 1) {
        return true;
    }
    if (!f.coeff(0)) {
        return false;  // divisible by x
    }
    ReductionPlan plan(f);
    std::vector<int> checkpoints;
    for (int q : distinct_prime_factors(d)) {
        checkpoints.push_back(d / q);
    }
    const Poly x = Poly::x();
    Poly h = x;
    for (int k = 1; k <= d; ++k) {
        h = plan.square_mod(h);
        for (int c : checkpoints) {
            if (c == k && gcd(h ^ x, f).degree() != 0) {
                return false;
            }
        }
    }
    return h == x;
}

bool small_factor_screen(const Poly& f, int max_factor_degree) {
    const int d = f.degree();
    if (d < 2) {
        return true;
    }
    if (!f.coeff(0)) {
        return false;  // x divides f
    }
    if (f.nonzero_terms() % 2 == 0) {
        return false;  // f(1) = 0, so x+1 divides f
    }
    const int kmax = std::min(max_factor_degree, d - 1);
    if (kmax < 2) {
        return true;
    }
    ReductionPlan plan(f);
    const Poly x = Poly::x();
    Poly h = x;
    for (int k = 1; k <= kmax; ++k) {
        h = plan.square_mod(h);
        // gcd checks at k > kmax/2 cover factor degrees <= kmax/2 through
        // their multiples; smaller k need no separate test.
        if (2 * k > kmax && gcd(h ^ x, f).degree() != 0) {
            return false;
        }
    }
    return true;
}

Poly minimal_polynomial(const BitSeq& s) {
    const std::size_t n = s.size();
    if (n == 0) {
        return Poly::one();
    }
    // srev holds the sequence reversed so a discrepancy is a dot product of C
    // against a contiguous window.
    std::vector<std::uint64_t> srev(words_for_bits(n) + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (s[i]) {
            const std::size_t j = n - 1 - i;
            srev[j >> 6] |= std::uint64_t{1} << (j & 63);
        }
    }
    std::vector<std::uint64_t> c(words_for_bits(2 * n + 2) + 2, 0);
    std::vector<std::uint64_t> b(words_for_bits(2 * n + 2) + 2, 0);
    std::vector<std::uint64_t> tmp;
    c[0] = 1;
    b[0] = 1;
    std::size_t len = 0;  // linear complexity so far
    int m = 1;
    for (std::size_t t = 0; t < n; ++t) {
        // d = XOR_{j=0..len} C_j * s_{t-j}
        const std::size_t off = n - 1 - t;
        std::uint64_t acc = 0;
        const std::size_t cw = (len >> 6) + 1;
        for (std::size_t wi = 0; wi < cw; ++wi) {
            acc ^= c[wi] & extract_word(srev, off + wi * kWordBits);
        }
        const bool d = std::popcount(acc) & 1;
        if (!d) {
            ++m;
            continue;
        }
        if (2 * len <= t) {
            tmp.assign(c.begin(), c.end());
            xor_shifted(c, std::span<const std::uint64_t>(b.data(),
                                                          (len >> 6) + 1),
                        m);
            len = t + 1 - len;
            b = std::move(tmp);
            m = 1;
        } else {
            xor_shifted(c, std::span<const std::uint64_t>(b.data(),
                                                          (len >> 6) + 1),
                        m);
            ++m;
        }
    }
    // minimal polynomial = x^len * C(1/x)
    Poly out;
    for (std::size_t j = 0; j <= len; ++j) {
        if ((c[j >> 6] >> (j & 63)) & 1u) {
            out.set_coeff(static_cast<int>(len - j), true);
        }
    }
    return out;
}

}  // namespace mtgp::f2
