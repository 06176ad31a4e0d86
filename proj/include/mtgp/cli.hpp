#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mtgp/params.hpp"

namespace mtgp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;   // verification/IO/search failure
inline constexpr int kExitUsage = 2;  // bad flag combination or bounds

struct DcArgs {
    int mexp = 11213;
    int wordsize = 32;
    std::vector<std::uint32_t> ids{0};
    std::uint64_t seed = 1;
    std::string out_path;
    long long max_candidates = 1'000'000;
    int threads = 0;
};
int run_dc(const DcArgs& args, std::ostream& out, std::ostream& err);

struct GenArgs {
    std::string param_file;
    long long select_id = -1;  // -1 = first record in the file
    long long count = 0;
    std::string mode = "uint";    // uint | float12 | float01
    std::string format = "hex";   // hex | binary
    Word seed = 1;
    std::string out_path;  // empty = stdout
};
int run_gen(const GenArgs& args, std::ostream& out, std::ostream& err);

struct KvArgs {
    std::string param_file;
    long long select_id = -1;
    bool csv = false;
    bool force = false;  // override the rank-method exponent budget
    int budget = 4423;
    int threads = 0;
    std::string out_path;
};
int run_kv(const KvArgs& args, std::ostream& out, std::ostream& err);

struct SimArgs {
    std::string param_file;
    int mexp = 0;      // 0 = no filter
    int wordsize = 0;  // 0 = no filter
    int lanes = 0;     // 0 = paper default
    int blocks = 1;
    long long count = 0;  // 0 = lanes * 1024 per block
    bool report_conflicts = false;
    Word seed = 1;
    std::string mode = "uint";
};
int run_sim(const SimArgs& args, std::ostream& out, std::ostream& err);

struct CheckArgs {
    std::string param_file;
    bool skip_smoke = false;
    Word seed = 1;
    long long smoke_count = 1'000'000;
    int budget = 4423;  // recompute delta only up to this exponent
    int threads = 0;
};
int run_check(const CheckArgs& args, std::ostream& out, std::ostream& err);

/// Parses "7" or "3..12" into an inclusive ID list.
std::vector<std::uint32_t> parse_id_range(const std::string& text);

}  // namespace mtgp::cli
