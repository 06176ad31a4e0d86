#include "mtgp/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "mtgp/dc.hpp"
#include "mtgp/equidist.hpp"
#include "mtgp/generator.hpp"
#include "mtgp/parlane.hpp"
#include "mtgp/smoke.hpp"

namespace mtgp::cli {

namespace {

OutputMode parse_mode(const std::string& s) {
    if (s == "uint") {
        return OutputMode::Uint;
    }
    if (s == "float12") {
        return OutputMode::FloatClosedOpen12;
    }
    if (s == "float01") {
        return OutputMode::FloatClosedOpen01;
    }
    throw std::invalid_argument("mode must be uint, float12 or float01");
}

const dc::ParamRecord* select_record(
    const std::vector<dc::ParamRecord>& records, long long id) {
    if (id < 0) {
        return &records.front();
    }
    for (const auto& rec : records) {
        if (rec.id == static_cast<std::uint32_t>(id)) {
            return &rec;
        }
    }
    return nullptr;
}

class OutputTarget {
 public:
    OutputTarget(const std::string& path, std::ostream& fallback)
        : fallback_(fallback) {
        if (!path.empty()) {
            file_.emplace(path, std::ios::binary);
            if (!*file_) {
                throw std::runtime_error("cannot open output file: " + path);
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : fallback_; }

 private:
    std::optional<std::ofstream> file_;
    std::ostream& fallback_;
};

}  // namespace

std::vector<std::uint32_t> parse_id_range(const std::string& text) {
    const auto dots = text.find("..");
    std::vector<std::uint32_t> ids;
    if (dots == std::string::npos) {
        ids.push_back(static_cast<std::uint32_t>(std::stoull(text)));
        return ids;
    }
    const unsigned long long lo = std::stoull(text.substr(0, dots));
    const unsigned long long hi = std::stoull(text.substr(dots + 2));
    if (hi < lo || hi - lo > 100000) {
        throw std::invalid_argument("bad id range");
    }
    for (unsigned long long id = lo; id <= hi; ++id) {
        ids.push_back(static_cast<std::uint32_t>(id));
    }
    return ids;
}

int run_dc(const DcArgs& args, std::ostream& out, std::ostream& err) {
    (void)out;
    if (!is_supported_config(args.mexp, args.wordsize)) {
        err << "unsupported mexp/wordsize pair: " << args.mexp << "/"
            << args.wordsize << "\n";
        return kExitUsage;
    }
    if (args.ids.empty() || args.out_path.empty()) {
        err << "dc needs at least one --id and an --out file\n";
        return kExitUsage;
    }
    std::ofstream file(args.out_path);
    if (!file) {
        err << "cannot open output file: " << args.out_path << "\n";
        return kExitFail;
    }
    file << dc::csv_header() << '\n';
    for (const std::uint32_t id : args.ids) {
        const auto t0 = std::chrono::steady_clock::now();
        dc::RecursionSearchOptions opts;
        opts.seed = args.seed;
        opts.max_candidates = args.max_candidates;
        opts.n_threads = args.threads;
        dc::RecursionSearchResult rec_search;
        try {
            rec_search =
                dc::search_recursion_params(args.mexp, args.wordsize, id, opts);
        } catch (const std::runtime_error& e) {
            err << "id " << id << ": " << e.what() << "\n";
            return kExitFail;
        }
        const auto t1 = std::chrono::steady_clock::now();
        err << "id " << id << ": recursion parameters after "
            << rec_search.candidates_tried << " candidates ("
            << std::chrono::duration<double>(t1 - t0).count() << " s)\n";

        const auto temper_search =
            dc::search_tempering(rec_search.rp, args.threads);
        const auto t2 = std::chrono::steady_clock::now();
        err << "id " << id << ": tempering search done ("
            << std::chrono::duration<double>(t2 - t1).count() << " s)\n";

        const auto table =
            kv_table(rec_search.rp, temper_search.tp, args.threads);
        const auto t3 = std::chrono::steady_clock::now();
        err << "id " << id << ": delta = " << table.delta << " ("
            << std::chrono::duration<double>(t3 - t2).count() << " s)\n";

        dc::ParamRecord rec;
        rec.id = id;
        rec.rp = rec_search.rp;
        rec.tp = temper_search.tp;
        rec.charpoly_sha1 = dc::sha1_digest(rec_search.charpoly);
        rec.nonzero_terms = rec_search.charpoly.nonzero_terms();
        rec.delta = table.delta;
        file << dc::emit_record(rec) << '\n';
        file.flush();
    }
    return file ? kExitOk : kExitFail;
}

int run_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
    if (args.count <= 0) {
        err << "count must be positive\n";
        return kExitUsage;
    }
    OutputMode mode;
    bool hex;
    try {
        mode = parse_mode(args.mode);
        if (args.format == "hex") {
            hex = true;
        } else if (args.format == "binary") {
            hex = false;
        } else {
            throw std::invalid_argument("format must be hex or binary");
        }
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    std::vector<dc::ParamRecord> records;
    try {
        records = dc::load_param_file(args.param_file);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitFail;
    }
    const dc::ParamRecord* rec = select_record(records, args.select_id);
    if (rec == nullptr) {
        err << "id " << args.select_id << " not in " << args.param_file
            << "\n";
        return kExitFail;
    }
    if (mode != OutputMode::Uint && rec->rp.wbits != 32) {
        err << "float mode requires 32-bit words\n";
        return kExitUsage;
    }
    try {
        OutputTarget target(args.out_path, out);
        std::ostream& os = target.stream();
        Generator gen(rec->rp, rec->tp, args.seed);
        const auto t0 = std::chrono::steady_clock::now();
        if (hex) {
            char line[16];
            for (long long i = 0; i < args.count; ++i) {
                std::snprintf(line, sizeof(line), "%08x\n", gen.next(mode));
                os << line;
            }
        } else {
            std::vector<unsigned char> buf;
            buf.reserve(1 << 16);
            for (long long i = 0; i < args.count; ++i) {
                const Word w = gen.next(mode);
                buf.push_back(static_cast<unsigned char>(w));
                buf.push_back(static_cast<unsigned char>(w >> 8));
                buf.push_back(static_cast<unsigned char>(w >> 16));
                buf.push_back(static_cast<unsigned char>(w >> 24));
                if (buf.size() == (1 << 16)) {
                    os.write(reinterpret_cast<const char*>(buf.data()),
                             static_cast<std::streamsize>(buf.size()));
                    buf.clear();
                }
            }
            if (!buf.empty()) {
                os.write(reinterpret_cast<const char*>(buf.data()),
                         static_cast<std::streamsize>(buf.size()));
            }
        }
        os.flush();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        err << args.count << " outputs in " << secs << " s ("
            << (secs > 0 ? static_cast<double>(args.count) / secs / 1e6 : 0.0)
            << " M outputs/s)\n";
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitFail;
    }
    return kExitOk;
}

int run_kv(const KvArgs& args, std::ostream& out, std::ostream& err) {
    std::vector<dc::ParamRecord> records;
    try {
        records = dc::load_param_file(args.param_file);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitFail;
    }
    const dc::ParamRecord* rec = select_record(records, args.select_id);
    if (rec == nullptr) {
        err << "id " << args.select_id << " not in " << args.param_file
            << "\n";
        return kExitFail;
    }
    if (rec->rp.mexp > args.budget && !args.force) {
        err << "mexp " << rec->rp.mexp << " exceeds the rank-method budget "
            << args.budget << "; pass --force to run anyway\n";
        return kExitUsage;
    }
    try {
        OutputTarget target(args.out_path, out);
        const auto table = kv_table(rec->rp, rec->tp, args.threads);
        target.stream() << format_kv_table(table, args.csv);
        target.stream().flush();
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitFail;
    }
    return kExitOk;
}

int run_sim(const SimArgs& args, std::ostream& out, std::ostream& err) {
    std::vector<dc::ParamRecord> records;
    try {
        records = dc::load_param_file(args.param_file);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitFail;
    }
    std::vector<const dc::ParamRecord*> picked;
    for (const auto& rec : records) {
        if ((args.mexp == 0 || rec.rp.mexp == args.mexp) &&
            (args.wordsize == 0 || rec.rp.wbits == args.wordsize)) {
            picked.push_back(&rec);
        }
    }
    if (static_cast<long long>(picked.size()) < args.blocks ||
        args.blocks < 1) {
        err << "need " << args.blocks << " matching records, found "
            << picked.size() << "\n";
        return kExitUsage;
    }
    OutputMode mode;
    try {
        mode = parse_mode(args.mode);
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    LaneConfig cfg;
    cfg.n_lanes = args.lanes;
    cfg.block_count = args.blocks;
    const RecursionParams& rp0 = picked.front()->rp;
    const int lanes0 =
        args.lanes > 0 ? args.lanes : default_lane_count(rp0.n);
    long long count = args.count > 0 ? args.count : 1024LL * lanes0;

    bool pass = true;
    try {
        if (args.blocks == 1) {
            pass = verify_equivalence(rp0, picked.front()->tp, args.seed, cfg,
                                      count, {.mode = mode});
        } else {
            std::vector<BlockSpec> specs;
            for (int b = 0; b < args.blocks; ++b) {
                specs.push_back({picked[static_cast<std::size_t>(b)]->rp,
                                 picked[static_cast<std::size_t>(b)]->tp,
                                 args.seed + static_cast<Word>(b)});
            }
            const auto streams =
                run_blocks_interleaved(specs, cfg, count, mode);
            for (int b = 0; pass && b < args.blocks; ++b) {
                Generator gen(specs[static_cast<std::size_t>(b)].rp,
                              specs[static_cast<std::size_t>(b)].tp,
                              specs[static_cast<std::size_t>(b)].seed);
                for (long long i = 0;
                     pass && i < count; ++i) {
                    pass = streams[static_cast<std::size_t>(b)]
                                  [static_cast<std::size_t>(i)] ==
                           gen.next(mode);
                }
            }
        }
    } catch (const std::invalid_argument& e) {
        err << e.what() << " (N-M = " << rp0.n - rp0.m << ")\n";
        return kExitUsage;
    }
    out << "lanes " << lanes0 << ", blocks " << args.blocks << ", " << count
        << " outputs per block: " << (pass ? "PASS" : "FAIL") << "\n";
    if (args.report_conflicts) {
        const auto run = run_block(rp0, picked.front()->tp, args.seed, cfg,
                                   count, {.mode = mode});
        const BankReport rep = count_bank_conflicts(run.trace, cfg);
        out << "{\"accesses\": " << rep.total_accesses
            << ", \"conflict_events\": " << rep.conflict_events
            << ", \"max_degree\": " << rep.max_conflict_degree << "}\n";
    }
    return pass ? kExitOk : kExitFail;
}

int run_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
    std::vector<dc::ParamRecord> records;
    try {
        records = dc::load_param_file(args.param_file);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitFail;
    }
    bool all_ok = true;
    for (const auto& rec : records) {
        std::string fail;
        const f2::Poly poly = dc::char_poly(rec.rp);
        if (poly.degree() != rec.rp.mexp) {
            fail = "charpoly degree";
        } else if (!f2::is_irreducible(poly)) {
            fail = "charpoly irreducibility";
        } else if (dc::sha1_digest(poly) != rec.charpoly_sha1) {
            fail = "charpoly_sha1";
        } else if (poly.nonzero_terms() != rec.nonzero_terms) {
            fail = "nonzero_terms";
        }
        if (fail.empty() && rec.rp.mexp <= args.budget) {
            const auto table = kv_table(rec.rp, rec.tp, args.threads);
            if (table.delta != rec.delta) {
                fail = "delta";
            }
        }
        if (fail.empty() && !args.skip_smoke) {
            const SmokeResult smoke = smoke_battery(
                rec.rp, rec.tp, args.seed, args.smoke_count);
            if (!smoke.pass) {
                std::ostringstream os;
                os << "smoke battery (chi2 p=" << smoke.chi2_p
                   << ", monobit p=" << smoke.monobit_p << ")";
                fail = os.str();
            }
        }
        if (fail.empty()) {
            out << "record id=" << rec.id << " mexp=" << rec.rp.mexp
                << ": PASS\n";
        } else {
            out << "record id=" << rec.id << " mexp=" << rec.rp.mexp
                << ": FAIL (" << fail << ")\n";
            all_ok = false;
        }
    }
    return all_ok ? kExitOk : kExitFail;
}

}  // namespace mtgp::cli
