#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mtgp/equidist.hpp"
#include "mtgp/f2poly.hpp"
#include "mtgp/params.hpp"

namespace mtgp::dc {

/// Candidate-draw source for the parameter search: splitmix64, fixed here so
/// a (seed, id) pair always replays the same candidate sequence. Independent
/// of the MTGP recursion itself.
class SearchRng {
 public:
    explicit SearchRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint32_t next_u32() {
        return static_cast<std::uint32_t>(next_u64() >> 32);
    }
    /// Uniform in [0, n) via 64x32 multiply-high; n >= 1.
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

 private:
    std::uint64_t state_;
};

/// Candidate R with the 32-bit ID embedded: the 16 MSBs of the ID fill the
/// 16 MSBs of row 0, the 16 LSBs fill row 1 at positions 12..27 counted from
/// the MSB, the four low nibbles are redrawn until the S+I condition holds,
/// and every remaining bit is random. At the small test word sizes there is
/// no room for the layout, so R is fully random (still condition-checked).
std::array<Word, 4> embed_id(std::uint32_t id, SearchRng& rng, int wbits);

/// Reads the two embedded ID fields back out of a 32-bit-word R.
std::uint32_t extract_id(const std::array<Word, 4>& rmat);

/// Characteristic-polynomial probe: runs the untempered recursion from the
/// fixed seed-1 state, collects 2p bits of the new words' LSBs, and returns
/// their Berlekamp-Massey minimal polynomial. Degree p certifies the
/// candidate only together with irreducibility; smaller degrees mean reject.
f2::Poly char_poly(const RecursionParams& rp);

struct RecursionSearchOptions {
    std::uint64_t seed = 0x4D544750'44432D31ull;
    long long max_candidates = 1'000'000;
    int n_threads = 0;  // 0 = OpenMP default, 1 = serial reference
};

struct RecursionSearchResult {
    RecursionParams rp;
    f2::Poly charpoly;
    long long candidates_tried = 0;
};

/// Draws candidates (M and R) until the characteristic polynomial has degree
/// exactly p and is irreducible; a Mersenne-exponent degree then makes it
/// primitive, so the period 2^p - 1 is certified. Throws "search exhausted"
/// past max_candidates. Deterministic in (id, seed) for any thread count.
RecursionSearchResult search_recursion_params(
    int mexp, int wbits, std::uint32_t id,
    const RecursionSearchOptions& opts = {});

/// One greedy decision of the tempering search. Sums are over the accuracy
/// range v in (pos_lo, pos_hi]; smaller v share no bits with the chunk, so
/// their defects are common to every candidate and drop out of the
/// comparison.
struct ChunkDecision {
    int row;
    BitSide side;
    int pos_lo;
    int pos_hi;
    unsigned chosen_pattern;
    long long chosen_sum;
    long long zero_sum;
};

struct TemperingSearchResult {
    TemperingParams tp;
    std::vector<ChunkDecision> decisions;
};

/// Two-phase greedy search: fills the w-l MSBs of each tempering row in
/// 5-bit chunks minimizing the k(v) defect sum, then the l LSBs against the
/// LSB-side k'(v), never touching the MSBs again (l = 9 at w = 32, scaled
/// down with w). Requires a certified maximal-period rp.
TemperingSearchResult search_tempering(const RecursionParams& rp,
                                       int n_threads = 0);

/// SHA1 of the polynomial's canonical little-endian byte packing, lowercase
/// hex.
std::string sha1_digest(const f2::Poly& f);

/// One searched generator configuration plus its certification metadata.
struct ParamRecord {
    std::uint32_t id = 0;
    RecursionParams rp;
    TemperingParams tp;
    std::string charpoly_sha1;
    int nonzero_terms = 0;
    long long delta = 0;

    bool operator==(const ParamRecord&) const = default;
};

std::string csv_header();
std::string emit_record(const ParamRecord& rec);
/// Parses one CSV line; `line_no` is used in error messages.
ParamRecord parse_record(const std::string& line, int line_no);
/// Reads header + records; throws std::runtime_error with line numbers.
std::vector<ParamRecord> read_param_file(std::istream& in);
std::vector<ParamRecord> load_param_file(const std::string& path);
void write_param_file(std::ostream& out,
                      const std::vector<ParamRecord>& records);

}  // namespace mtgp::dc
