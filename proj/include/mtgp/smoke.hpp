#pragma once

#include "mtgp/generator.hpp"
#include "mtgp/params.hpp"

namespace mtgp {

/// Small statistical smoke battery: chi-square on the top min(8,w)-bit
/// tuples plus a monobit balance z-test, both over `count` outputs.
/// Passing means every p-value stays inside [threshold, 1 - threshold].
struct SmokeResult {
    int bins = 0;
    double chi2_stat = 0.0;
    double chi2_p = 0.0;
    double monobit_p = 0.0;
    bool pass = false;
};

SmokeResult smoke_battery(const RecursionParams& rp,
                          const TemperingParams& tp, Word seed,
                          long long count = 1'000'000,
                          double threshold = 1e-6);

}  // namespace mtgp
