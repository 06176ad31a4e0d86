#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtgp::f2 {

/// Packed bit sequence; input to minimal_polynomial.
class BitSeq {
 public:
    BitSeq() = default;
    explicit BitSeq(std::span<const int> bits);

    void push_back(bool bit);
    bool operator[](std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    std::size_t size() const { return size_; }
    std::span<const std::uint64_t> words() const { return words_; }

 private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

/// Polynomial over GF(2). Coefficients are stored little-endian by degree:
/// bit d of the limb vector is the coefficient of x^d. The zero polynomial
/// is canonical (no limbs) and reports degree() == -1.
class Poly {
 public:
    Poly() = default;

    static Poly zero() { return Poly{}; }
    static Poly one() { return monomial(0); }
    static Poly x() { return monomial(1); }
    static Poly monomial(int degree);
    static Poly from_limbs(std::vector<std::uint64_t> limbs);
    /// Parses the hex coefficient format (least-significant digit first in
    /// value, i.e. plain hex of the coefficient integer). Throws on bad input.
    static Poly from_hex(std::string_view s);

    int degree() const;
    bool is_zero() const { return limbs_.empty(); }
    bool coeff(int d) const;
    void set_coeff(int d, bool value);
    int nonzero_terms() const;

    Poly shifted_left(int bits) const;
    /// Lowercase hex of the coefficient bit-vector, zero-padded to
    /// ceil((degree+1)/4) digits; "0" for the zero polynomial.
    std::string to_hex() const;
    /// Coefficient bits packed little-endian into bytes (bit 0 of byte 0 is
    /// the coefficient of x^0), ceil((degree+1)/8) bytes, at least one.
    std::vector<std::uint8_t> packed_bytes() const;

    std::span<const std::uint64_t> limbs() const { return limbs_; }
    bool operator==(const Poly&) const = default;

    friend Poly operator^(Poly a, const Poly& b);
    Poly& operator^=(const Poly& b);

 private:
    std::vector<std::uint64_t> limbs_;
    void normalize();
};

Poly mul(const Poly& a, const Poly& b);
/// Remainder of a modulo f. Throws "zero modulus" when f is zero.
Poly mod(Poly a, const Poly& f);
/// a*b mod f; degree(result) < degree(f). Throws "zero modulus".
Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f);
Poly gcd(Poly a, Poly b);

/// Byte-at-a-time reduction tables for one fixed modulus. Holds scratch
/// buffers, so an instance is not safe to share between threads.
class ReductionPlan {
 public:
    explicit ReductionPlan(const Poly& modulus);

    const Poly& modulus() const { return modulus_; }
    int degree() const { return degree_; }

    /// a^2 mod modulus, for deg(a) < deg(modulus).
    Poly square_mod(const Poly& a);

 private:
    Poly modulus_;
    int degree_;
    int words_;
    std::vector<std::uint64_t> byte_tbl_;  // 256 rows of `words_` limbs
    std::vector<std::uint64_t> scratch_;
    void reduce_scratch();
};

/// Irreducibility over GF(2) by the Rabin test: x^(2^deg) == x (mod f) and
/// gcd(x^(2^(deg/q)) - x, f) = 1 for every prime q dividing deg.
/// Throws "degree must be >= 1" on constant input.
bool is_irreducible(const Poly& f);

/// One-sided screen used by the parameter search: returns false when f has
/// a certain irreducible factor of degree <= max_factor_degree (or fails the
/// trivial x / x+1 divisibility checks). A true result decides nothing.
bool small_factor_screen(const Poly& f, int max_factor_degree);

/// Berlekamp-Massey over GF(2): the minimal-degree monic polynomial whose
/// linear recurrence annihilates s. Degree equals the linear complexity of
/// s; the empty sequence yields the constant polynomial 1.
Poly minimal_polynomial(const BitSeq& s);

}  // namespace mtgp::f2
