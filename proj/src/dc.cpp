#include "mtgp/dc.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cassert>
#include <charconv>
#include <climits>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "mtgp/generator.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mtgp::dc {

namespace {

int resolve_threads(int n_threads) {
#ifdef _OPENMP
    return n_threads > 0 ? n_threads : omp_get_max_threads();
#else
    (void)n_threads;
    return 1;
#endif
}

}  // namespace

std::array<Word, 4> embed_id(std::uint32_t id, SearchRng& rng, int wbits) {
    std::array<Word, 4> rows{};
    const Word wmask = wbits >= 32 ? ~Word{0} : ((Word{1} << wbits) - 1);
    if (wbits == 32) {
        rows[0] = (id & 0xFFFF0000u) | ((rng.next_u32() & 0xFFFu) << 4);
        rows[1] = ((rng.next_u32() & 0xFFFu) << 20) | ((id & 0xFFFFu) << 4);
        rows[2] = (rng.next_u32() << 4) & wmask;
        rows[3] = (rng.next_u32() << 4) & wmask;
    } else {
        for (auto& row : rows) {
            row = (rng.next_u32() & wmask) & ~Word{0xF};
        }
    }
    do {
        for (auto& row : rows) {
            row = (row & ~Word{0xF}) | (rng.next_u32() & 0xF);
        }
    } while (!check_r_condition(std::span<const Word, 4>(rows)));
    return rows;
}

std::uint32_t extract_id(const std::array<Word, 4>& rmat) {
    return (rmat[0] & 0xFFFF0000u) | ((rmat[1] >> 4) & 0xFFFFu);
}

f2::Poly char_poly(const RecursionParams& rp) {
    Generator gen(rp, TemperingParams::identity(rp.wbits), 1);
    f2::BitSeq seq;
    for (int i = 0; i < 2 * rp.mexp; ++i) {
        seq.push_back(gen.next_raw() & 1u);
    }
    return f2::minimal_polynomial(seq);
}

namespace {

struct Candidate {
    int m = 0;
    std::array<Word, 4> rmat{};
};

RecursionParams make_params(int mexp, int wbits, const Candidate& c) {
    const auto sz = derive_sizes(mexp, wbits);
    RecursionParams rp;
    rp.mexp = mexp;
    rp.wbits = wbits;
    rp.n = sz.n;
    rp.r = sz.r;
    rp.m = c.m;
    rp.sh1 = scaled_sh1(wbits);
    rp.sh2 = scaled_sh2(wbits);
    rp.rmat = c.rmat;
    return rp;
}

// M range per the paper: 2 < M < N - floor2(N-2); desk-scale sizes where
// that window is empty fall back to 2 <= M <= N - lanes so the parallel
// bound still admits the default lane count.
std::pair<int, int> middle_range(int n) {
    const int lanes = default_lane_count(n);
    int lo = 3;
    int hi = n - lanes - 1;
    if (lo > hi) {
        lo = 2;
        hi = n - lanes;
    }
    if (lo > hi) {
        throw std::invalid_argument("no admissible middle position");
    }
    return {lo, hi};
}

}  // namespace

RecursionSearchResult search_recursion_params(
    int mexp, int wbits, std::uint32_t id,
    const RecursionSearchOptions& opts) {
    if (!is_supported_config(mexp, wbits)) {
        throw std::invalid_argument("unsupported mexp/wordsize pair");
    }
    const auto [mlo, mhi] = middle_range(derive_sizes(mexp, wbits).n);
    SearchRng rng(opts.seed ^ (0x9E3779B97F4A7C15ull * (id + 1ull)));
    const int screen_depth = std::min(64, mexp - 1);
    const int batch = 8;

    long long tried = 0;
    while (tried < opts.max_candidates) {
        // Candidates are drawn serially from the one RNG stream and judged
        // in parallel; taking the first success in draw order keeps the
        // result independent of the thread count.
        std::vector<Candidate> cands;
        cands.reserve(batch);
        for (int i = 0; i < batch && tried + i < opts.max_candidates; ++i) {
            Candidate c;
            c.m = mlo + static_cast<int>(
                            rng.below(static_cast<std::uint32_t>(mhi - mlo + 1)));
            c.rmat = embed_id(id, rng, wbits);
            cands.push_back(c);
        }
        std::vector<char> good(cands.size(), 0);
        std::vector<f2::Poly> polys(cands.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(resolve_threads(opts.n_threads))
#endif
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const RecursionParams rp = make_params(mexp, wbits, cands[i]);
            f2::Poly f = char_poly(rp);
            if (f.degree() != mexp) {
                continue;
            }
            if (!f2::small_factor_screen(f, screen_depth)) {
                continue;
            }
            if (!f2::is_irreducible(f)) {
                continue;
            }
            good[i] = 1;
            polys[i] = std::move(f);
        }
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (good[i]) {
                RecursionSearchResult res;
                res.rp = make_params(mexp, wbits, cands[i]);
                res.charpoly = std::move(polys[i]);
                res.candidates_tried = tried + static_cast<long long>(i) + 1;
                return res;
            }
        }
        tried += static_cast<long long>(cands.size());
    }
    throw std::runtime_error("search exhausted");
}

namespace {

struct ChunkSpec {
    int row;
    BitSide side;
    int pos_lo;
    int pos_hi;
};

std::vector<ChunkSpec> tempering_schedule(int wbits) {
    const int low_bits = std::max<long>(1, std::lround(9.0 * wbits / 32.0));
    const int high_bits = wbits - low_bits;
    std::vector<ChunkSpec> chunks;
    for (int row = 0; row < 4; ++row) {
        for (int j = 0; j < high_bits; j += 5) {
            chunks.push_back(
                {row, BitSide::Msb, j, std::min(j + 5, high_bits)});
        }
    }
    for (int row = 0; row < 4; ++row) {
        for (int j = 0; j < low_bits; j += 5) {
            chunks.push_back(
                {row, BitSide::Lsb, j, std::min(j + 5, low_bits)});
        }
    }
    return chunks;
}

}  // namespace

TemperingSearchResult search_tempering(const RecursionParams& rp,
                                       int n_threads) {
    TemperingSearchResult result;
    std::array<Word, 4> tmp{};
    const int nt = resolve_threads(n_threads);

    for (const ChunkSpec& spec : tempering_schedule(rp.wbits)) {
        const TemperingParams base =
            TemperingParams::from_matrix(std::span<const Word, 4>(tmp),
                                         rp.wbits);
        const ChunkEvaluator eval(rp, base, spec.row, spec.side, spec.pos_lo,
                                  spec.pos_hi);
        const unsigned n_patterns = 1u << eval.width();
        std::vector<long long> sums(n_patterns, LLONG_MAX);

        // the all-zero pattern first, exactly: it seeds the prune bound and
        // the greedy-dominance record
        {
            f2::RankAccumulator acc(rp.mexp);
            sums[0] = eval.defect_sum(0, LLONG_MAX, acc);
        }
        std::atomic<long long> bound{sums[0]};
#ifdef _OPENMP
#pragma omp parallel num_threads(nt)
#endif
        {
            f2::RankAccumulator acc(rp.mexp);
#ifdef _OPENMP
#pragma omp for schedule(dynamic)
#endif
            for (unsigned c = 1; c < n_patterns; ++c) {
                const long long s = eval.defect_sum(
                    c, bound.load(std::memory_order_relaxed), acc);
                sums[c] = s;
                long long cur = bound.load(std::memory_order_relaxed);
                while (s < cur && !bound.compare_exchange_weak(
                                      cur, s, std::memory_order_relaxed)) {
                }
            }
        }
        unsigned best = 0;
        for (unsigned c = 1; c < n_patterns; ++c) {
            if (sums[c] < sums[best]) {
                best = c;
            }
        }
        // pruned values are lower bounds that already exceed the winner, so
        // the argmin (smallest pattern on ties) is exact
        assert(sums[best] <= sums[0]);
        for (int t = 0; t < eval.width(); ++t) {
            if ((best >> t) & 1u) {
                tmp[static_cast<std::size_t>(spec.row)] |=
                    Word{1} << side_bit(spec.side, rp.wbits, spec.pos_lo + t);
            }
        }
        result.decisions.push_back({spec.row, spec.side, spec.pos_lo,
                                    spec.pos_hi, best, sums[best], sums[0]});
    }
    result.tp = TemperingParams::from_matrix(std::span<const Word, 4>(tmp),
                                             rp.wbits);
    return result;
}

std::string sha1_digest(const f2::Poly& f) {
    const auto bytes = f.packed_bytes();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &md_len, EVP_sha1(),
                   nullptr) != 1) {
        throw std::runtime_error("SHA1 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out(2 * md_len, '0');
    for (unsigned i = 0; i < md_len; ++i) {
        out[2 * i] = hex[md[i] >> 4];
        out[2 * i + 1] = hex[md[i] & 0xF];
    }
    return out;
}

namespace {

constexpr const char* kHeader =
    "id,mexp,wordsize,N,M,r,sh1,sh2,R0,R1,R2,R3,T0,T1,T2,T3,charpoly_sha1,"
    "nonzero_terms,delta";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

long long parse_int(const std::string& s, int line_no, const char* field) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": field " + field + " is not a number");
    }
    return v;
}

Word parse_hex_word(const std::string& s, int line_no, const char* field) {
    if (s.size() != 8) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": field " + field +
                                 " must be 8 hex digits");
    }
    Word v = 0;
    const auto res =
        std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": field " + field + " is not hex");
    }
    return v;
}

}  // namespace

std::string csv_header() { return kHeader; }

std::string emit_record(const ParamRecord& rec) {
    char buf[512];
    std::snprintf(
        buf, sizeof(buf),
        "%u,%d,%d,%d,%d,%d,%d,%d,%08x,%08x,%08x,%08x,%08x,%08x,%08x,%08x,"
        "%s,%d,%lld",
        rec.id, rec.rp.mexp, rec.rp.wbits, rec.rp.n, rec.rp.m, rec.rp.r,
        rec.rp.sh1, rec.rp.sh2, rec.rp.rmat[0], rec.rp.rmat[1],
        rec.rp.rmat[2], rec.rp.rmat[3], rec.tp.tmat[0], rec.tp.tmat[1],
        rec.tp.tmat[2], rec.tp.tmat[3], rec.charpoly_sha1.c_str(),
        rec.nonzero_terms, rec.delta);
    return buf;
}

ParamRecord parse_record(const std::string& line, int line_no) {
    const auto fields = split_fields(line);
    if (fields.size() != 19) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": expected 19 fields, got " +
                                 std::to_string(fields.size()));
    }
    ParamRecord rec;
    rec.id = static_cast<std::uint32_t>(parse_int(fields[0], line_no, "id"));
    rec.rp.mexp = static_cast<int>(parse_int(fields[1], line_no, "mexp"));
    rec.rp.wbits = static_cast<int>(parse_int(fields[2], line_no, "wordsize"));
    rec.rp.n = static_cast<int>(parse_int(fields[3], line_no, "N"));
    rec.rp.m = static_cast<int>(parse_int(fields[4], line_no, "M"));
    rec.rp.r = static_cast<int>(parse_int(fields[5], line_no, "r"));
    rec.rp.sh1 = static_cast<int>(parse_int(fields[6], line_no, "sh1"));
    rec.rp.sh2 = static_cast<int>(parse_int(fields[7], line_no, "sh2"));
    for (int i = 0; i < 4; ++i) {
        static const char* names[] = {"R0", "R1", "R2", "R3"};
        rec.rp.rmat[static_cast<std::size_t>(i)] = parse_hex_word(
            fields[static_cast<std::size_t>(8 + i)], line_no, names[i]);
    }
    std::array<Word, 4> tmat{};
    for (int i = 0; i < 4; ++i) {
        static const char* names[] = {"T0", "T1", "T2", "T3"};
        tmat[static_cast<std::size_t>(i)] = parse_hex_word(
            fields[static_cast<std::size_t>(12 + i)], line_no, names[i]);
    }
    rec.tp = TemperingParams::from_matrix(std::span<const Word, 4>(tmat),
                                          rec.rp.wbits);
    rec.charpoly_sha1 = fields[16];
    if (rec.charpoly_sha1.size() != 40 ||
        rec.charpoly_sha1.find_first_not_of("0123456789abcdef") !=
            std::string::npos) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": field charpoly_sha1 must be 40 lowercase "
                                 "hex digits");
    }
    rec.nonzero_terms =
        static_cast<int>(parse_int(fields[17], line_no, "nonzero_terms"));
    rec.delta = parse_int(fields[18], line_no, "delta");
    try {
        rec.rp.validate();
    } catch (const std::exception& e) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": " +
                                 e.what());
    }
    return rec;
}

std::vector<ParamRecord> read_param_file(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("line 1: missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kHeader) {
        throw std::runtime_error("line 1: bad header");
    }
    std::vector<ParamRecord> records;
    int line_no = 2;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            records.push_back(parse_record(line, line_no));
        }
        ++line_no;
    }
    if (records.empty()) {
        throw std::runtime_error("no records in parameter file");
    }
    return records;
}

std::vector<ParamRecord> load_param_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open parameter file: " + path);
    }
    return read_param_file(in);
}

void write_param_file(std::ostream& out,
                      const std::vector<ParamRecord>& records) {
    out << kHeader << '\n';
    for (const auto& rec : records) {
        out << emit_record(rec) << '\n';
    }
}

}  // namespace mtgp::dc
