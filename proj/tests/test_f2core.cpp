#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "mtgp/f2matrix.hpp"
#include "mtgp/f2poly.hpp"

using mtgp::f2::BitSeq;
using mtgp::f2::Matrix;
using mtgp::f2::Poly;

namespace {

// Independent reference arithmetic on plain coefficient vectors, for
// cross-checking the packed implementation.
using CoeffVec = std::vector<int>;

CoeffVec to_coeffs(const Poly& p) {
    CoeffVec c(static_cast<std::size_t>(p.degree() + 1));
    for (int d = 0; d <= p.degree(); ++d) {
        c[static_cast<std::size_t>(d)] = p.coeff(d) ? 1 : 0;
    }
    return c;
}

Poly from_coeffs(const CoeffVec& c) {
    Poly p;
    for (std::size_t d = 0; d < c.size(); ++d) {
        if (c[d]) {
            p.set_coeff(static_cast<int>(d), true);
        }
    }
    return p;
}

int naive_degree(const CoeffVec& c) {
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i]) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

CoeffVec naive_mul(const CoeffVec& a, const CoeffVec& b) {
    if (a.empty() || b.empty()) {
        return {};
    }
    CoeffVec r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] ^= a[i] & b[j];
        }
    }
    return r;
}

CoeffVec naive_mod(CoeffVec a, const CoeffVec& f) {
    const int df = naive_degree(f);
    REQUIRE(df >= 0);
    int da = naive_degree(a);
    while (da >= df) {
        for (int i = 0; i <= df; ++i) {
            a[static_cast<std::size_t>(da - df + i)] ^=
                f[static_cast<std::size_t>(i)];
        }
        da = naive_degree(a);
    }
    a.resize(static_cast<std::size_t>(df > 0 ? df : 1), 0);
    return a;
}

// Exhaustive trial division for small degrees: the oracle for the Rabin
// test. Polynomials are bit patterns, bit d = coefficient of x^d.
bool trial_division_irreducible(std::uint64_t f, int deg) {
    for (int d = 1; 2 * d <= deg; ++d) {
        for (std::uint64_t g = (1ull << d); g < (2ull << d); ++g) {
            // divide f by g over GF(2)
            std::uint64_t rem = f;
            while (true) {
                int rd = 63 - std::countl_zero(rem | 1ull);
                if (rem == 0 || rd < d) {
                    break;
                }
                rem ^= g << (rd - d);
            }
            if (rem == 0) {
                return false;
            }
        }
    }
    return true;
}

Poly poly_from_bits(std::uint64_t bits) {
    return Poly::from_limbs({bits});
}

bool annihilates(const Poly& f, const BitSeq& s) {
    const int deg = f.degree();
    if (deg < 0) {
        return false;
    }
    for (std::size_t t = 0; t + static_cast<std::size_t>(deg) < s.size();
         ++t) {
        int acc = 0;
        for (int d = 0; d <= deg; ++d) {
            acc ^= f.coeff(d) & s[t + static_cast<std::size_t>(d)];
        }
        if (acc) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("poly basics and hex format") {
    CHECK(Poly::zero().degree() == -1);
    CHECK(Poly::one().degree() == 0);
    CHECK(Poly::x().degree() == 1);
    Poly p = poly_from_bits(0x201Bu);  // x^13+x^4+x^3+x+1
    CHECK(p.degree() == 13);
    CHECK(p.nonzero_terms() == 5);
    CHECK(p.to_hex() == "201b");
    CHECK(Poly::from_hex("201b") == p);
    CHECK(Poly::from_hex(p.to_hex()) == p);
    CHECK(p.packed_bytes() == std::vector<std::uint8_t>{0x1B, 0x20});
    CHECK(Poly::one().packed_bytes() == std::vector<std::uint8_t>{0x01});
    CHECK(Poly::zero().to_hex() == "0");
    CHECK_THROWS(Poly::from_hex("12g4"));

    // degree invariant under set/clear round trips
    Poly q;
    q.set_coeff(70, true);
    CHECK(q.degree() == 70);
    q.set_coeff(70, false);
    CHECK(q.degree() == -1);
    CHECK(q.is_zero());
}

TEST_CASE("poly_mulmod worked examples") {
    const Poly x = Poly::x();
    const Poly f1 = poly_from_bits(0b111);  // x^2+x+1
    CHECK(mtgp::f2::poly_mulmod(x, x, f1) == poly_from_bits(0b11));

    const Poly g = poly_from_bits(0b101101);
    const Poly f2 = poly_from_bits(0b1100101);
    CHECK(mtgp::f2::poly_mulmod(Poly::one(), g, f2) == mtgp::f2::mod(g, f2));

    // x^3 * x^4 mod x^7+x+1 = x+1, checked against the naive route too
    const Poly f3 = poly_from_bits(0b10000011);
    const Poly a = poly_from_bits(0b1000);
    const Poly b = poly_from_bits(0b10000);
    const Poly r = mtgp::f2::poly_mulmod(a, b, f3);
    CHECK(r == poly_from_bits(0b11));
    CHECK(to_coeffs(r) ==
          naive_mod(naive_mul(to_coeffs(a), to_coeffs(b)), to_coeffs(f3)));

    CHECK_THROWS_WITH(mtgp::f2::poly_mulmod(a, b, Poly::zero()),
                      "zero modulus");
    CHECK_THROWS_WITH(mtgp::f2::mod(a, Poly::zero()), "zero modulus");
}

TEST_CASE("poly_mulmod agrees with naive arithmetic on random inputs") {
    std::mt19937_64 rng(12345);
    for (int it = 0; it < 200; ++it) {
        const Poly a = poly_from_bits(rng() & ((1ull << 45) - 1));
        const Poly b = poly_from_bits(rng() & ((1ull << 45) - 1));
        Poly f = poly_from_bits(rng() & ((1ull << 30) - 1));
        if (f.degree() < 1) {
            f = poly_from_bits(0b111);
        }
        if (a.is_zero() || b.is_zero()) {
            continue;
        }
        const Poly r = mtgp::f2::poly_mulmod(a, b, f);
        CHECK(r.degree() < f.degree());
        const CoeffVec want =
            naive_mod(naive_mul(to_coeffs(a), to_coeffs(b)), to_coeffs(f));
        CHECK(r == from_coeffs(want));
    }
}

TEST_CASE("squaring via reduction plan matches mulmod") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 100; ++it) {
        Poly f;
        for (int limb = 0; limb < 3; ++limb) {
            for (int d = 0; d < 64; ++d) {
                if (rng() & 1) {
                    f.set_coeff(64 * limb + d, true);
                }
            }
        }
        f.set_coeff(150, true);
        mtgp::f2::ReductionPlan plan(f);
        Poly a;
        for (int d = 0; d < 150; ++d) {
            if (rng() & 1) {
                a.set_coeff(d, true);
            }
        }
        CHECK(plan.square_mod(a) == mtgp::f2::poly_mulmod(a, a, f));
    }
}

TEST_CASE("minimal_polynomial worked examples") {
    const int zeros[] = {0, 0, 0, 0};
    CHECK(mtgp::f2::minimal_polynomial(BitSeq(zeros)) == Poly::one());

    const int ones[] = {1, 1, 1, 1, 1, 1};
    CHECK(mtgp::f2::minimal_polynomial(BitSeq(ones)) == poly_from_bits(0b11));

    const int per3[] = {0, 1, 1, 0, 1, 1};
    CHECK(mtgp::f2::minimal_polynomial(BitSeq(per3)) ==
          poly_from_bits(0b111));

    CHECK(mtgp::f2::minimal_polynomial(BitSeq{}) == Poly::one());
}

TEST_CASE("minimal_polynomial annihilates and divides the recurrence") {
    std::mt19937_64 rng(4242);
    for (int it = 0; it < 100; ++it) {
        const int deg = 1 + static_cast<int>(rng() % 32);
        // random monic recurrence polynomial of the given degree
        Poly f = Poly::monomial(deg);
        for (int d = 0; d < deg; ++d) {
            if (rng() & 1) {
                f.set_coeff(d, true);
            }
        }
        // run the recurrence s_{t+deg} = sum_{d<deg} f_d s_{t+d}
        std::vector<int> s(static_cast<std::size_t>(2 * deg + 16));
        for (int i = 0; i < deg; ++i) {
            s[static_cast<std::size_t>(i)] = static_cast<int>(rng() & 1);
        }
        for (std::size_t t = static_cast<std::size_t>(deg); t < s.size();
             ++t) {
            int acc = 0;
            for (int d = 0; d < deg; ++d) {
                acc ^= f.coeff(d) &
                       s[t - static_cast<std::size_t>(deg) +
                         static_cast<std::size_t>(d)];
            }
            s[t] = acc;
        }
        const BitSeq seq{std::span<const int>(s)};
        const Poly minpoly = mtgp::f2::minimal_polynomial(seq);
        CHECK(annihilates(minpoly, seq));
        CHECK(minpoly.degree() <= deg);
        CHECK(mtgp::f2::mod(f, minpoly).is_zero());  // minpoly divides f
    }
}

TEST_CASE("minimal_polynomial recovers an irreducible recurrence exactly") {
    const Poly f = poly_from_bits(0x201Bu);  // irreducible degree 13
    std::vector<int> s(64, 0);
    s[5] = 1;  // any nonzero start
    for (std::size_t t = 13; t < s.size(); ++t) {
        int acc = 0;
        for (int d = 0; d < 13; ++d) {
            acc ^= f.coeff(d) & s[t - 13 + static_cast<std::size_t>(d)];
        }
        s[t] = acc;
    }
    CHECK(mtgp::f2::minimal_polynomial(BitSeq{std::span<const int>(s)}) == f);
}

TEST_CASE("is_irreducible worked examples") {
    CHECK(mtgp::f2::is_irreducible(poly_from_bits(0b111)));    // x^2+x+1
    CHECK_FALSE(mtgp::f2::is_irreducible(poly_from_bits(0b101)));  // (x+1)^2
    CHECK(mtgp::f2::is_irreducible(poly_from_bits(0x201Bu)));
    CHECK(trial_division_irreducible(0x201Bu, 13));
    CHECK(mtgp::f2::is_irreducible(Poly::x()));
    CHECK_THROWS_WITH(mtgp::f2::is_irreducible(Poly::one()),
                      "degree must be >= 1");
}

TEST_CASE("is_irreducible equals trial division on random prime degrees") {
    std::mt19937_64 rng(777);
    for (int deg : {2, 3, 5, 7, 11, 13, 17}) {
        for (int it = 0; it < 60; ++it) {
            const std::uint64_t bits =
                (1ull << deg) | (rng() & ((1ull << deg) - 1));
            const bool got = mtgp::f2::is_irreducible(poly_from_bits(bits));
            CHECK(got == trial_division_irreducible(bits, deg));
        }
    }
}

TEST_CASE("small_factor_screen only rejects reducibles") {
    std::mt19937_64 rng(31337);
    for (int it = 0; it < 200; ++it) {
        const int deg = 8 + static_cast<int>(rng() % 24);
        const std::uint64_t bits =
            (1ull << deg) | (rng() & ((1ull << deg) - 1));
        const Poly f = poly_from_bits(bits);
        if (!mtgp::f2::small_factor_screen(f, 12)) {
            CHECK_FALSE(mtgp::f2::is_irreducible(f));
        }
        if (mtgp::f2::is_irreducible(f)) {
            CHECK(mtgp::f2::small_factor_screen(f, 12));
        }
    }
}

TEST_CASE("rank worked examples") {
    Matrix ident(4, 4);
    for (int i = 0; i < 4; ++i) {
        ident.set(i, i, true);
    }
    CHECK(mtgp::f2::rank(ident) == 4);

    CHECK(mtgp::f2::rank(Matrix(3, 5)) == 0);

    const std::uint32_t rows[] = {0b1100, 0b0110, 0b1010};
    CHECK(mtgp::f2::rank(Matrix::from_words_msb_first(rows, 4)) == 2);
}

TEST_CASE("rank is invariant under row permutations and additions") {
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 50; ++it) {
        const int rows = 2 + static_cast<int>(rng() % 12);
        const int cols = 2 + static_cast<int>(rng() % 20);
        Matrix m(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                m.set(r, c, rng() & 1);
            }
        }
        const int base = mtgp::f2::rank(m);
        Matrix t = m;
        for (int op = 0; op < 20; ++op) {
            const int a = static_cast<int>(rng() % rows);
            const int b = static_cast<int>(rng() % rows);
            if (a == b) {
                continue;
            }
            if (rng() & 1) {
                for (int c = 0; c < cols; ++c) {  // swap rows a and b
                    const bool va = t.get(a, c);
                    t.set(a, c, t.get(b, c));
                    t.set(b, c, va);
                }
            } else {
                for (int c = 0; c < cols; ++c) {  // row a += row b
                    t.set(a, c, t.get(a, c) ^ t.get(b, c));
                }
            }
        }
        CHECK(mtgp::f2::rank(t) == base);
    }
}

TEST_CASE("rank accumulator matches batch rank") {
    std::mt19937_64 rng(555);
    for (int it = 0; it < 30; ++it) {
        const int cols = 5 + static_cast<int>(rng() % 120);
        const int rows = 1 + static_cast<int>(rng() % 40);
        Matrix m(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                m.set(r, c, rng() & 1);
            }
        }
        mtgp::f2::RankAccumulator acc(cols);
        std::vector<std::uint64_t> buf(
            static_cast<std::size_t>(m.row_words()));
        int grew = 0;
        for (int r = 0; r < rows; ++r) {
            auto row = m.row(r);
            std::copy(row.begin(), row.end(), buf.begin());
            grew += acc.add_row(buf.data()) ? 1 : 0;
        }
        CHECK(acc.rank() == mtgp::f2::rank(m));
        CHECK(grew == acc.rank());
        acc.reset();
        CHECK(acc.rank() == 0);
    }
}
