#include <CLI11.hpp>

#include <iostream>

#include "mtgp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"MTGP F2-linear PRNG toolkit: parameter creation, "
                 "generation, equidistribution analysis, lane simulation"};
    app.require_subcommand(1);

    mtgp::cli::DcArgs dc;
    std::string dc_ids = "0";
    auto* dc_cmd =
        app.add_subcommand("dc", "search parameter sets for given IDs");
    dc_cmd->add_option("--mexp", dc.mexp, "Mersenne exponent");
    dc_cmd->add_option("--wordsize", dc.wordsize, "word size in bits");
    dc_cmd->add_option("--id", dc_ids, "32-bit ID or inclusive range a..b");
    dc_cmd->add_option("--seed", dc.seed, "search RNG seed");
    dc_cmd->add_option("--out", dc.out_path, "output CSV file")->required();
    dc_cmd->add_option("--max-candidates", dc.max_candidates,
                       "candidate cap before giving up");
    dc_cmd->add_option("--threads", dc.threads, "worker threads (0 = auto)");

    mtgp::cli::GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate outputs");
    gen_cmd->add_option("--param-file", gen.param_file, "parameter CSV")
        ->required();
    gen_cmd->add_option("--id", gen.select_id, "record ID (default: first)");
    gen_cmd->add_option("--count", gen.count, "number of outputs")->required();
    gen_cmd->add_option("--mode", gen.mode, "uint | float12 | float01");
    gen_cmd->add_option("--format", gen.format, "hex | binary");
    gen_cmd->add_option("--seed", gen.seed, "generator seed");
    gen_cmd->add_option("--out", gen.out_path, "output file (default stdout)");

    mtgp::cli::KvArgs kv;
    auto* kv_cmd =
        app.add_subcommand("kv", "equidistribution table k(v)/d(v)/delta");
    kv_cmd->add_option("--param-file", kv.param_file, "parameter CSV")
        ->required();
    kv_cmd->add_option("--id", kv.select_id, "record ID (default: first)");
    kv_cmd->add_flag("--csv", kv.csv, "CSV output instead of aligned text");
    kv_cmd->add_flag("--force", kv.force, "ignore the exponent budget");
    kv_cmd->add_option("--threads", kv.threads, "worker threads (0 = auto)");
    kv_cmd->add_option("--out", kv.out_path, "output file (default stdout)");

    mtgp::cli::SimArgs sim;
    auto* sim_cmd = app.add_subcommand(
        "sim", "verify the block/thread scheme against the sequential core");
    sim_cmd->add_option("--param-file", sim.param_file, "parameter CSV")
        ->required();
    sim_cmd->add_option("--mexp", sim.mexp, "filter records by exponent");
    sim_cmd->add_option("--wordsize", sim.wordsize,
                        "filter records by word size");
    sim_cmd->add_option("--lanes", sim.lanes, "lane count (0 = paper default)");
    sim_cmd->add_option("--blocks", sim.blocks, "independent blocks");
    sim_cmd->add_option("--count", sim.count, "outputs per block");
    sim_cmd->add_flag("--report-conflicts", sim.report_conflicts,
                      "print the bank-conflict record");
    sim_cmd->add_option("--seed", sim.seed, "generator seed");
    sim_cmd->add_option("--mode", sim.mode, "uint | float12 | float01");

    mtgp::cli::CheckArgs check;
    auto* check_cmd = app.add_subcommand(
        "check", "re-certify a parameter file and run the smoke battery");
    check_cmd->add_option("--param-file", check.param_file, "parameter CSV")
        ->required();
    check_cmd->add_flag("--skip-smoke", check.skip_smoke,
                        "skip the statistical smoke tests");
    check_cmd->add_option("--seed", check.seed, "smoke battery seed");
    check_cmd->add_option("--smoke-count", check.smoke_count,
                          "outputs per smoke test");
    check_cmd->add_option("--threads", check.threads,
                          "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mtgp::cli::kExitUsage;
    }

    try {
        if (*dc_cmd) {
            dc.ids = mtgp::cli::parse_id_range(dc_ids);
            return mtgp::cli::run_dc(dc, std::cout, std::cerr);
        }
        if (*gen_cmd) {
            return mtgp::cli::run_gen(gen, std::cout, std::cerr);
        }
        if (*kv_cmd) {
            return mtgp::cli::run_kv(kv, std::cout, std::cerr);
        }
        if (*sim_cmd) {
            return mtgp::cli::run_sim(sim, std::cout, std::cerr);
        }
        if (*check_cmd) {
            return mtgp::cli::run_check(check, std::cout, std::cerr);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return mtgp::cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return mtgp::cli::kExitFail;
    }
    return mtgp::cli::kExitUsage;
}
