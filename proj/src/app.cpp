#include "primec/app.hpp"

#include "primec/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace primec {

namespace {

std::optional<std::chrono::steady_clock::time_point> deadline_after(std::optional<double> seconds) {
    if (!seconds)
        return std::nullopt;
    return std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(*seconds));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

std::string stats_to_json(const RunStats& s) {
    nlohmann::ordered_json j;
    j["mode"] = s.mode;
    j["input"] = s.input;
    j["vars"] = s.vars;
    j["cover_clauses"] = s.cover_clauses;
    j["cover_literals"] = s.cover_literals;
    j["primes"] = s.primes;
    j["solver_calls"] = s.solver_calls;
    j["shrink_passes"] = s.shrink_passes;
    j["ordered_solves"] = s.ordered_solves;
    j["fixpoints"] = s.fixpoints;
    j["phase1_ms"] = s.phase1_ms;
    j["phase2_ms"] = s.phase2_ms;
    j["cost"] = s.cost ? nlohmann::ordered_json(*s.cost) : nlohmann::ordered_json(nullptr);
    j["seed"] = s.seed;
    j["strategy"] = s.strategy;
    j["iterations"] = s.iterations;
    j["random_iters"] = s.random_iters;
    j["interval"] = s.interval;
    j["status"] = s.status;
    return j.dump(2);
}

ParsedFormula read_formula_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw InputError("cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

RunOutput run_pipeline(const ParsedFormula& parsed, const RunConfig& config, const std::string& input_name) {
    const std::size_t n = parsed.vars.size();
    CompileOptions opts;
    opts.mode = config.mode;
    opts.shrink = config.shrink;
    opts.deadline = deadline_after(config.timeout_seconds);
    opts.trace = config.trace;
    CompileResult r = compile(parsed.formula, n, opts);

    RunOutput out;
    RunStats& s = out.stats;
    s.mode = std::string(to_string(config.mode));
    s.input = input_name;
    s.vars = n;
    s.cover_clauses = r.cover.clauses.size();
    s.cover_literals = r.cover.literal_count();
    s.primes = r.primes.size();
    s.solver_calls = r.stats.solver_calls();
    s.shrink_passes = r.stats.cover.shrink.iterative_passes;
    s.ordered_solves = r.stats.cover.shrink.ordered_solves;
    s.fixpoints = r.stats.cover.shrink.fixpoints;
    s.phase1_ms = r.stats.phase1_ms;
    s.phase2_ms = r.stats.phase2_ms;
    s.seed = config.shrink.seed;
    s.strategy = std::string(to_string(config.shrink.strategy));
    s.iterations = config.shrink.iterations;
    s.random_iters = config.shrink.random_iterations;
    s.interval = config.shrink.use_interval;

    Formula target = config.mode == Mode::Implicants ? parsed.formula : negate(parsed.formula);
    if (config.check) {
        PrimeSet expected = config.mode == Mode::Implicants ? oracle::brute_prime_implicants(parsed.formula, n)
                                                            : oracle::brute_prime_implicates(parsed.formula, n);
        if (expected.primes != r.primes.primes)
            throw ContractError("oracle mismatch: " + std::to_string(r.primes.size()) + " primes emitted, " +
                                std::to_string(expected.size()) + " expected");
        if (!oracle::equivalent(target, r.cover.clauses, n))
            throw ContractError("oracle mismatch: cover is not equivalent to the compiled formula");
    }
    if (config.check || config.cost) {
        try {
            std::size_t prime_lits = config.prime_cover_literals ? *config.prime_cover_literals
                                                                 : oracle::min_prime_cover_literals(target, n);
            if (prime_lits > 0)
                s.cost = cover_cost(r.cover, prime_lits);
            // the cover is itself a set of implicates equivalent to the
            // target, so it can never beat the minimum prime cover
            if (s.cost && *s.cost < 1.0)
                throw ContractError("cover cost below 1.0");
        } catch (const BudgetError&) {
            if (config.check)
                throw;
        }
    }
    out.primes = std::move(r.primes);
    out.cover = std::move(r.cover);
    return out;
}

BenchConfig parse_bench_config(const std::string& label, const ShrinkConfig& defaults) {
    BenchConfig c{label, defaults};
    if (label == "none") {
        c.shrink.strategy = Strategy::None;
        c.shrink.iterations = 0;
    } else if (label == "random") {
        c.shrink.strategy = Strategy::Random;
    } else if (label.size() > 2 && label.ends_with("it") &&
               std::all_of(label.begin(), label.end() - 2, [](char ch) { return ch >= '0' && ch <= '9'; })) {
        c.shrink.strategy = Strategy::MultiOrder;
        c.shrink.iterations = static_cast<unsigned>(std::stoul(label.substr(0, label.size() - 2)));
    } else {
        throw InputError("unknown bench configuration '" + label + "' (expected <N>it, random or none)");
    }
    return c;
}

std::vector<BenchRow> run_bench(const std::filesystem::path& corpus_dir, const BenchOptions& options) {
    if (!std::filesystem::is_directory(corpus_dir))
        throw InputError("corpus directory " + corpus_dir.string() + " does not exist");
    std::vector<std::filesystem::path> cases;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".bf")
            cases.push_back(entry.path());
    if (cases.empty())
        throw InputError("corpus " + corpus_dir.string() + " contains no .bf files");
    if (options.configs.empty())
        throw InputError("no bench configurations requested");
    std::sort(cases.begin(), cases.end());

    const std::size_t per_case = options.modes.size() * options.configs.size();
    std::vector<BenchRow> rows(cases.size() * per_case);
    std::atomic<std::size_t> next_case{0};

    auto worker = [&]() {
        for (std::size_t ci = next_case++; ci < cases.size(); ci = next_case++) {
            const std::string name = cases[ci].filename().string();
            std::optional<ParsedFormula> parsed;
            std::string parse_error;
            try {
                parsed = read_formula_file(cases[ci]);
            } catch (const InputError& e) {
                parse_error = e.what();
            }
            for (std::size_t mi = 0; mi < options.modes.size(); ++mi) {
                Mode mode = options.modes[mi];
                std::optional<std::size_t> prime_lits;
                if (parsed && options.cost && parsed->vars.size() <= oracle::kPrimeLimit) {
                    Formula target = mode == Mode::Implicants ? parsed->formula : negate(parsed->formula);
                    try {
                        prime_lits = oracle::min_prime_cover_literals(target, parsed->vars.size());
                    } catch (const BudgetError&) {
                    }
                }
                for (std::size_t ki = 0; ki < options.configs.size(); ++ki) {
                    const BenchConfig& cfg = options.configs[ki];
                    BenchRow& row = rows[ci * per_case + mi * options.configs.size() + ki];
                    row.case_name = name;
                    row.config = cfg.label;
                    RunStats& s = row.stats;
                    s.mode = std::string(to_string(mode));
                    s.input = cases[ci].string();
                    s.strategy = std::string(to_string(cfg.shrink.strategy));
                    s.iterations = cfg.shrink.iterations;
                    s.random_iters = cfg.shrink.random_iterations;
                    s.seed = cfg.shrink.seed;
                    s.interval = cfg.shrink.use_interval;
                    if (!parsed) {
                        s.status = "error";
                        continue;
                    }
                    s.vars = parsed->vars.size();
                    RunConfig rc;
                    rc.mode = mode;
                    rc.shrink = cfg.shrink;
                    rc.cost = prime_lits.has_value();
                    rc.prime_cover_literals = prime_lits;
                    rc.timeout_seconds = options.timeout_seconds;
                    try {
                        s = run_pipeline(*parsed, rc, cases[ci].string()).stats;
                    } catch (const TimeoutError&) {
                        s.status = "timeout";
                    } catch (const std::exception&) {
                        s.status = "error";
                    }
                }
            }
        }
    };

    unsigned jobs = std::max(1u, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < jobs; ++i)
            pool.emplace_back(worker);
    }
    return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << "case,mode,strategy,iterations,vars,cover_clauses,cover_literals,primes,solver_calls,shrink_passes,"
          "phase1_ms,phase2_ms,cost,status\n";
    for (const BenchRow& row : rows) {
        const RunStats& s = row.stats;
        unsigned iterations = s.strategy == "random" ? s.random_iters : s.iterations;
        os << row.case_name << ',' << s.mode << ',' << s.strategy << ',' << iterations << ',' << s.vars << ',';
        if (s.status == "ok") {
            os << s.cover_clauses << ',' << s.cover_literals << ',' << s.primes << ',' << s.solver_calls << ','
               << s.shrink_passes << ',' << fixed(s.phase1_ms, 3) << ',' << fixed(s.phase2_ms, 3) << ','
               << (s.cost ? fixed(*s.cost, 4) : "");
        } else {
            os << ",,,,,,,";
        }
        os << ',' << s.status << '\n';
    }
}

void write_bench_summary(std::ostream& os, const std::vector<BenchRow>& rows) {
    struct Acc {
        std::string mode, config, strategy;
        unsigned iterations = 0;
        std::size_t cases = 0;
        double sum = 0;
    };
    std::vector<Acc> accs;
    for (const BenchRow& row : rows) {
        auto it = std::find_if(accs.begin(), accs.end(),
                               [&](const Acc& a) { return a.mode == row.stats.mode && a.config == row.config; });
        if (it == accs.end()) {
            const RunStats& s = row.stats;
            accs.push_back(Acc{s.mode, row.config, s.strategy, s.strategy == "random" ? s.random_iters : s.iterations});
            it = accs.end() - 1;
        }
        if (row.stats.status == "ok" && row.stats.cost) {
            ++it->cases;
            it->sum += *row.stats.cost;
        }
    }
    os << "mode,config,strategy,iterations,cases,mean_cost\n";
    for (const Acc& a : accs)
        os << a.mode << ',' << a.config << ',' << a.strategy << ',' << a.iterations << ',' << a.cases << ','
           << (a.cases ? fixed(a.sum / static_cast<double>(a.cases), 4) : "") << '\n';
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"primec: prime implicant/implicate compiler for non-clausal formulas"};
    app.set_version_flag("--version", "primec 0.1.0");

    std::string mode_text = "implicants";
    std::string strategy_text = "multi-order";
    ShrinkConfig shrink;
    bool no_interval = false;
    bool check = false;
    bool cost = false;
    bool trace = false;
    std::string stats_path, out_path, dimacs_path, input_path;
    std::optional<double> timeout;

    auto add_shrink_flags = [&](CLI::App* cmd) {
        cmd->add_option("--iterations", shrink.iterations, "iterative shrink passes (multi-order)")
            ->capture_default_str();
        cmd->add_option("--random-iters", shrink.random_iterations, "shuffled solves for --strategy random")
            ->capture_default_str();
        cmd->add_option("--seed", shrink.seed, "seed for the random baseline")->capture_default_str();
        cmd->add_flag("--no-interval", no_interval, "skip the interval split in the basic phase");
        cmd->add_option("--timeout", timeout, "wall-clock limit in seconds");
    };

    app.add_option("--mode", mode_text, "implicants or implicates")->capture_default_str();
    app.add_option("--strategy", strategy_text, "multi-order, random or none")->capture_default_str();
    add_shrink_flags(&app);
    app.add_flag("--check", check, "verify the result against the brute-force oracle");
    app.add_flag("--cost", cost, "report cover cost against a minimum prime cover");
    app.add_option("--stats", stats_path, "write run statistics as JSON");
    app.add_option("--out", out_path, "write primes here instead of stdout");
    app.add_option("--dimacs", dimacs_path, "export the Tseitin CNF of the compiled formula");
    app.add_flag("--trace", trace, "emit per-solve solver counters on stderr");
    app.add_option("file", input_path, "formula file");

    auto* bench = app.add_subcommand("bench", "run a corpus under several shrink configurations");
    std::string corpus_dir, configs_text = "0it,1it,2it,random,none", modes_text = "implicants";
    std::string csv_path, summary_path;
    unsigned jobs = 1;
    bool no_cost = false;
    bench->add_option("corpus", corpus_dir, "directory of .bf files")->required();
    bench->add_option("--configs", configs_text, "comma list of <N>it, random, none")->capture_default_str();
    bench->add_option("--modes", modes_text, "comma list of implicants, implicates")->capture_default_str();
    bench->add_option("--csv", csv_path, "CSV output (default stdout)");
    bench->add_option("--summary", summary_path, "mean-cost summary (default <csv>.summary.csv or stderr)");
    bench->add_option("--jobs", jobs, "worker threads")->capture_default_str();
    bench->add_flag("--no-cost", no_cost, "skip the prime-cover oracle");
    add_shrink_flags(bench);

    auto* gen = app.add_subcommand("gen", "generate a seeded random formula corpus");
    std::string gen_dir;
    std::size_t cases = 200, max_vars = 10, max_depth = 6;
    std::uint64_t gen_seed = 7;
    gen->add_option("dir", gen_dir, "output directory")->required();
    gen->add_option("--cases", cases)->capture_default_str();
    gen->add_option("--max-vars", max_vars)->capture_default_str();
    gen->add_option("--max-depth", max_depth)->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }
    shrink.use_interval = !no_interval;

    try {
        if (*gen) {
            if (max_vars > oracle::kPrimeLimit)
                err << "warning: corpora above " << oracle::kPrimeLimit << " variables are not oracle-checkable\n";
            gen_corpus(gen_dir, cases, max_vars, max_depth, gen_seed);
            return kExitOk;
        }
        if (*bench) {
            BenchOptions opts;
            for (const auto& label : split_list(configs_text))
                opts.configs.push_back(parse_bench_config(label, shrink));
            opts.modes.clear();
            for (const auto& m : split_list(modes_text))
                opts.modes.push_back(parse_mode(m));
            opts.timeout_seconds = timeout;
            opts.cost = !no_cost;
            opts.jobs = jobs;
            auto rows = run_bench(corpus_dir, opts);
            if (csv_path.empty()) {
                write_bench_csv(out, rows);
            } else {
                std::ofstream os(csv_path, std::ios::binary);
                if (!os)
                    throw InputError("cannot write " + csv_path);
                write_bench_csv(os, rows);
            }
            if (summary_path.empty() && !csv_path.empty())
                summary_path = std::filesystem::path(csv_path).replace_extension(".summary.csv").string();
            if (summary_path.empty()) {
                write_bench_summary(err, rows);
            } else {
                std::ofstream os(summary_path, std::ios::binary);
                if (!os)
                    throw InputError("cannot write " + summary_path);
                write_bench_summary(os, rows);
            }
            return kExitOk;
        }

        if (input_path.empty())
            throw InputError("no input file given (see --help)");
        RunConfig config;
        config.mode = parse_mode(mode_text);
        config.shrink = shrink;
        config.shrink.strategy = parse_strategy(strategy_text);
        config.check = check;
        config.cost = cost;
        config.timeout_seconds = timeout;
        config.trace = trace ? &err : nullptr;

        ParsedFormula parsed = read_formula_file(input_path);
        if (!dimacs_path.empty()) {
            Formula target = config.mode == Mode::Implicants ? parsed.formula : negate(parsed.formula);
            std::ofstream os(dimacs_path, std::ios::binary);
            if (!os)
                throw InputError("cannot write " + dimacs_path);
            write_dimacs(os, tseitin(target, parsed.vars.size(), parsed.vars.size()));
        }

        RunOutput result = run_pipeline(parsed, config, input_path);
        if (out_path.empty()) {
            write_primes(out, result.primes, parsed.vars);
        } else {
            std::ofstream os(out_path, std::ios::binary);
            if (!os)
                throw InputError("cannot write " + out_path);
            write_primes(os, result.primes, parsed.vars);
        }
        if (!stats_path.empty()) {
            std::ofstream os(stats_path, std::ios::binary);
            if (!os)
                throw InputError("cannot write " + stats_path);
            os << stats_to_json(result.stats) << '\n';
        }
        return kExitOk;
    } catch (const TimeoutError& e) {
        err << "primec: timeout: " << e.what() << '\n';
        return kExitTimeout;
    } catch (const InputError& e) {
        err << "primec: " << e.what() << '\n';
        return kExitInputError;
    } catch (const BudgetError& e) {
        err << "primec: " << e.what() << '\n';
        return kExitInputError;
    } catch (const ContractError& e) {
        err << "primec: internal error: " << e.what() << '\n';
        return kExitContractViolation;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "primec: " << e.what() << '\n';
        return kExitInputError;
    }
}

} // namespace primec
