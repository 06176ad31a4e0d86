#include "mtgp/smoke.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <vector>

namespace mtgp {

SmokeResult smoke_battery(const RecursionParams& rp,
                          const TemperingParams& tp, Word seed,
                          long long count, double threshold) {
    SmokeResult res;
    const int tuple_bits = rp.wbits < 8 ? rp.wbits : 8;
    res.bins = 1 << tuple_bits;
    std::vector<long long> hist(static_cast<std::size_t>(res.bins), 0);
    long long ones = 0;
    Generator gen(rp, tp, seed);
    for (long long i = 0; i < count; ++i) {
        const Word o = gen.next_uint();
        ++hist[o >> (rp.wbits - tuple_bits)];
        ones += std::popcount(o);
    }
    const double expected = static_cast<double>(count) / res.bins;
    double chi2 = 0.0;
    for (long long h : hist) {
        const double d = static_cast<double>(h) - expected;
        chi2 += d * d / expected;
    }
    res.chi2_stat = chi2;
    const boost::math::chi_squared dist(res.bins - 1);
    res.chi2_p = boost::math::cdf(boost::math::complement(dist, chi2));

    const double nbits = static_cast<double>(count) * rp.wbits;
    const double z = (2.0 * static_cast<double>(ones) - nbits) /
                     std::sqrt(nbits);
    res.monobit_p = std::erfc(std::fabs(z) / std::sqrt(2.0));

    res.pass = res.chi2_p >= threshold && res.chi2_p <= 1.0 - threshold &&
               res.monobit_p >= threshold;
    return res;
}

}  // namespace mtgp
