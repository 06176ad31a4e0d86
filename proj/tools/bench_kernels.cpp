// Benchmark comparing the serial reference paths against the OpenMP
// kernels: the k(v)/defect table, the tempering-chunk evaluation, and the
// raw generator throughput.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "mtgp/dc.hpp"
#include "mtgp/equidist.hpp"
#include "mtgp/generator.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    const int mexp = argc > 1 ? std::atoi(argv[1]) : 3217;
    const int wbits = argc > 2 ? std::atoi(argv[2]) : 32;
    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    std::printf("mexp=%d wordsize=%d, %d thread(s) available\n", mexp, wbits,
                max_threads);

    auto t0 = Clock::now();
    const auto found = mtgp::dc::search_recursion_params(mexp, wbits, 0, {});
    std::printf("recursion search: %.2f s (%lld candidates)\n",
                seconds_since(t0), found.candidates_tried);
    const mtgp::RecursionParams rp = found.rp;
    const mtgp::TemperingParams ident = mtgp::TemperingParams::identity(wbits);

    t0 = Clock::now();
    const auto serial = mtgp::kv_table(rp, ident, 1);
    const double t_serial = seconds_since(t0);
    t0 = Clock::now();
    const auto parallel = mtgp::kv_table(rp, ident, 0);
    const double t_parallel = seconds_since(t0);
    const bool same = serial.kv == parallel.kv && serial.delta == parallel.delta;
    std::printf("k(v) table        serial %.3f s | openmp %.3f s | x%.2f | %s\n",
                t_serial, t_parallel,
                t_parallel > 0 ? t_serial / t_parallel : 0.0,
                same ? "identical" : "MISMATCH");

    t0 = Clock::now();
    const auto temper_serial = mtgp::dc::search_tempering(rp, 1);
    const double ts_serial = seconds_since(t0);
    t0 = Clock::now();
    const auto temper_parallel = mtgp::dc::search_tempering(rp, 0);
    const double ts_parallel = seconds_since(t0);
    const bool tsame = temper_serial.tp.tmat == temper_parallel.tp.tmat;
    std::printf("tempering search  serial %.3f s | openmp %.3f s | x%.2f | %s\n",
                ts_serial, ts_parallel,
                ts_parallel > 0 ? ts_serial / ts_parallel : 0.0,
                tsame ? "identical" : "MISMATCH");

    const long long n_out = 50'000'000;
    mtgp::Generator gen(rp, temper_parallel.tp, 1);
    mtgp::Word sink = 0;
    t0 = Clock::now();
    for (long long i = 0; i < n_out; ++i) {
        sink ^= gen.next_uint();
    }
    const double t_gen = seconds_since(t0);
    std::printf("sequential gen    %lld outputs in %.3f s (%.1f M/s) [%08x]\n",
                n_out, t_gen, static_cast<double>(n_out) / t_gen / 1e6, sink);

    return same && tsame ? 0 : 1;
}
