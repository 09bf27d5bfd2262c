// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Built against the unchecked library so timings are realistic.

#include "primec/app.hpp"
#include "primec/oracle.hpp"
#include "primec/shrink.hpp"
#include "primec/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

using namespace primec;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Case {
    std::string name;
    ParsedFormula parsed;
};

const fs::path kRoot = PRIMEC_TEST_TMP;
constexpr std::size_t kCases = 200;
constexpr std::uint64_t kCorpusSeed = 7;

std::vector<Case> load_corpus(const fs::path& dir) {
    std::vector<Case> out;
    for (const fs::path& p : gen_corpus(dir, kCases, 10, 6, kCorpusSeed))
        out.push_back(Case{p.filename().string(), read_formula_file(p)});
    return out;
}

Lit pos(std::uint32_t v) { return Lit::pos(Var(v)); }
Lit neg(std::uint32_t v) { return Lit::neg(Var(v)); }

std::vector<Prime> negated(std::vector<Prime> primes) {
    for (Prime& p : primes) {
        for (Lit& l : p)
            l = ~l;
        std::sort(p.begin(), p.end());
    }
    std::sort(primes.begin(), primes.end());
    return primes;
}

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << detail << std::endl;
    if (!ok)
        ++failures;
}

void run(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        auto [ok, detail] = body();
        report(id, title, ok, detail);
    } catch (const std::exception& e) {
        report(id, title, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace

int main() {
    fs::remove_all(kRoot);
    std::vector<Case> corpus = load_corpus(kRoot / "corpus");

    run(1, "oracle equivalence on the 200-case corpus", [&]() -> std::pair<bool, std::string> {
        auto start = Clock::now();
        std::size_t ok_implicants = 0, ok_implicates = 0;
        for (const Case& c : corpus) {
            std::size_t n = c.parsed.vars.size();
            for (Mode mode : {Mode::Implicants, Mode::Implicates}) {
                CompileOptions opts;
                opts.mode = mode;
                PrimeSet got = compile(c.parsed.formula, n, opts).primes;
                PrimeSet want = mode == Mode::Implicants ? oracle::brute_prime_implicants(c.parsed.formula, n)
                                                         : oracle::brute_prime_implicates(c.parsed.formula, n);
                if (got.primes == want.primes)
                    ++(mode == Mode::Implicants ? ok_implicants : ok_implicates);
            }
        }
        double secs = seconds_since(start);
        bool ok = ok_implicants == kCases && ok_implicates == kCases && secs < 300;
        return {ok, std::to_string(ok_implicants) + "/200 implicants, " + std::to_string(ok_implicates) +
                        "/200 implicates in " + fmt("%.2fs", secs) + " (limit 300s)"};
    });

    run(2, "mux formula cover and primes", [&]() -> std::pair<bool, std::string> {
        ParsedFormula p = parse("(a & b) | (!a & c)");
        const std::uint32_t a = 0, b = 1, c = 2;
        CompileResult imp = compile(p.formula, 3, {});
        CompileOptions opts;
        opts.mode = Mode::Implicates;
        CompileResult cls = compile(p.formula, 3, opts);
        bool cover_ok = oracle::TruthTable::of(imp.cover.clauses, 3) == oracle::TruthTable::of(p.formula, 3);
        std::vector<Prime> terms{{pos(a), pos(b)}, {neg(a), pos(c)}, {pos(b), pos(c)}};
        std::vector<Prime> clauses{{pos(a), pos(c)}, {neg(a), pos(b)}, {pos(b), pos(c)}};
        bool oracle_ok = oracle::brute_prime_implicants(p.formula, 3).primes == terms &&
                         oracle::brute_prime_implicates(p.formula, 3).primes == clauses;
        bool ok = cover_ok && oracle_ok && imp.primes.primes == terms && cls.primes.primes == clauses;
        std::ostringstream out;
        write_primes(out, imp.primes, p.vars);
        write_primes(out, cls.primes, p.vars);
        std::string text = out.str();
        std::replace(text.begin(), text.end(), '\n', ';');
        return {ok, "cover " + std::string(cover_ok ? "equivalent" : "NOT equivalent") + ", primes " + text};
    });

    run(3, "order-sensitive CNF cores", [&]() -> std::pair<bool, std::string> {
        const std::uint32_t a = 0, b = 1, c = 2, d = 3, e = 4;
        CnfFormula sigma(5);
        sigma.add_clause({neg(a), pos(d)});
        sigma.add_clause({neg(b), pos(d)});
        sigma.add_clause({neg(b), pos(e)});
        sigma.add_clause({neg(c), neg(d), neg(e)});
        std::vector<Lit> seed{pos(a), pos(b), pos(c)};

        Solver s;
        s.add_cnf(sigma);
        SolveResult r = s.solve(seed);
        bool failed_ok = !r.is_sat() && r.failed() == seed;

        Solver s1;
        s1.add_cnf(sigma);
        ShrinkConfig cfg;
        cfg.iterations = 1;
        Shrinker shrinker(s1, cfg);
        Core core = shrinker.over_approximate(seed);
        Core minimum = oracle::brute_min_core(sigma, seed);
        bool core_ok = core.size() == 2 && core == minimum && minimum == Core{pos(b), pos(c)};
        return {failed_ok && core_ok, std::string("failed set ") + (failed_ok ? "{a,b,c}" : "wrong") +
                                          ", bound-1 core size " + std::to_string(core.size()) +
                                          (core == minimum ? " equals" : " differs from") + " the minimum core"};
    });

    run(4, "shrink invariants over the corpus", [&]() -> std::pair<bool, std::string> {
        std::size_t solves = 0, cores = 0, not_subset = 0, increased = 0, satisfiable = 0;
        for (const Case& c : corpus) {
            std::size_t n = c.parsed.vars.size();
            TseitinPair enc = tseitin_pair(c.parsed.formula, n);
            std::vector<std::size_t> sizes;
            Core last;
            ShrinkHooks hooks;
            hooks.on_solve = [&](std::span<const Lit> assumptions, const std::vector<Lit>* core) {
                ++solves;
                if (!core)
                    return;
                std::set<Lit> in(assumptions.begin(), assumptions.end());
                for (Lit l : *core)
                    if (!in.count(l)) {
                        ++not_subset;
                        break;
                    }
            };
            hooks.on_core = [&](std::span<const Lit> core) {
                sizes.push_back(core.size());
                last.assign(core.begin(), core.end());
            };
            hooks.on_pass = [&](std::size_t before, std::size_t after) { increased += after > before; };
            auto verify = [&](const CoverRecord&) {
                ++cores;
                for (std::size_t i = 1; i < sizes.size(); ++i)
                    increased += sizes[i] > sizes[i - 1];
                satisfiable += oracle::dpll_satisfiable(enc.positive, last);
                sizes.clear();
            };
            CoverOptions cover_opts;
            cover_opts.shrink_hooks = hooks;
            cover_opts.on_iteration = verify;
            compile_cover(enc.positive, enc.negative, n, cover_opts);
        }
        bool ok = not_subset == 0 && increased == 0 && satisfiable == 0 && cores > 0;
        return {ok, std::to_string(solves) + " ordered solves, " + std::to_string(cores) + " cores; violations: " +
                        std::to_string(not_subset) + " not-subset, " + std::to_string(increased) + " size increases, " +
                        std::to_string(satisfiable) + " satisfiable"};
    });

    run(5, "cost trend 1it <= 0it <= none", [&]() -> std::pair<bool, std::string> {
        BenchOptions opts;
        opts.configs = {parse_bench_config("1it", {}), parse_bench_config("0it", {}), parse_bench_config("none", {})};
        opts.jobs = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
        std::vector<BenchRow> rows = run_bench(kRoot / "corpus", opts);
        std::ofstream csv(kRoot / "bench.csv");
        write_bench_csv(csv, rows);
        double sum[3] = {0, 0, 0};
        std::size_t count[3] = {0, 0, 0};
        std::size_t incomplete = 0;
        for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
            bool all = true;
            for (std::size_t k = 0; k < 3; ++k)
                all &= rows[i + k].stats.status == "ok" && rows[i + k].stats.cost.has_value();
            if (!all) {
                ++incomplete;
                continue;
            }
            for (std::size_t k = 0; k < 3; ++k) {
                sum[k] += *rows[i + k].stats.cost;
                ++count[k];
            }
        }
        double mean[3];
        for (std::size_t k = 0; k < 3; ++k)
            mean[k] = count[k] ? sum[k] / static_cast<double>(count[k]) : 0;
        bool ok = count[0] > 0 && mean[0] <= mean[1] && mean[1] <= mean[2];
        return {ok, "mean cost 1it " + fmt("%.4f", mean[0]) + ", 0it " + fmt("%.4f", mean[1]) + ", none " +
                        fmt("%.4f", mean[2]) + " over " + std::to_string(count[0]) + " cases (" +
                        std::to_string(incomplete) + " without a cost)"};
    });

    run(6, "scalability smoke (x1|y1) & ... & (x12|y12)", [&]() -> std::pair<bool, std::string> {
        std::string text;
        for (int i = 1; i <= 12; ++i)
            text += (i > 1 ? " & " : "") + std::string("(x") + std::to_string(i) + " | y" + std::to_string(i) + ")";
        ParsedFormula p = parse(text);
        auto start = Clock::now();
        PrimeSet primes = compile(p.formula, p.vars.size(), {}).primes;
        double secs = seconds_since(start);
        // each prime picks one positive literal from each pair
        bool shape = std::all_of(primes.primes.begin(), primes.primes.end(), [](const Prime& t) {
            std::set<std::uint32_t> pairs;
            for (Lit l : t)
                if (l.negated())
                    return false;
                else
                    pairs.insert(l.var().index / 2);
            return t.size() == 12 && pairs.size() == 12;
        });
        bool ok = primes.size() == 4096 && shape && secs < 60;
        return {ok, std::to_string(primes.size()) + " primes (expected 4096) in " + fmt("%.2fs", secs) +
                        " (limit 60s)"};
    });

    run(7, "duality implicates(f) = negated implicants(!f)", [&]() -> std::pair<bool, std::string> {
        std::size_t agree = 0;
        for (const Case& c : corpus) {
            std::size_t n = c.parsed.vars.size();
            CompileOptions opts;
            opts.mode = Mode::Implicates;
            PrimeSet clauses = compile(c.parsed.formula, n, opts).primes;
            PrimeSet terms = compile(negate(c.parsed.formula), n, {}).primes;
            agree += clauses.primes == negated(terms.primes);
        }
        return {agree == corpus.size(), std::to_string(agree) + "/" + std::to_string(corpus.size()) + " cases agree"};
    });

    run(8, "determinism of output and stats", [&]() -> std::pair<bool, std::string> {
        const std::vector<std::vector<std::string>> flag_sets{
            {},
            {"--mode", "implicates"},
            {"--strategy", "random", "--seed", "17"},
            {"--iterations", "3", "--cost"},
        };
        std::size_t runs = 0, mismatches = 0;
        auto once = [&](std::vector<std::string> args, const fs::path& input, const fs::path& stats) {
            args.insert(args.begin(), "primec");
            args.push_back("--stats");
            args.push_back(stats.string());
            args.push_back(input.string());
            std::vector<const char*> argv;
            for (const auto& a : args)
                argv.push_back(a.c_str());
            std::ostringstream out, err;
            if (run_cli(static_cast<int>(argv.size()), argv.data(), out, err) != kExitOk)
                throw std::runtime_error("CLI failed: " + err.str());
            std::ifstream is(stats);
            nlohmann::json j = nlohmann::json::parse(is);
            j.erase("phase1_ms");
            j.erase("phase2_ms");
            return std::make_pair(out.str(), j.dump());
        };
        for (std::size_t i = 0; i < corpus.size(); i += 10) {
            fs::path input = kRoot / "corpus" / corpus[i].name;
            for (const auto& flags : flag_sets) {
                auto first = once(flags, input, kRoot / "stats_1.json");
                auto second = once(flags, input, kRoot / "stats_2.json");
                ++runs;
                mismatches += first != second;
            }
        }
        return {mismatches == 0, std::to_string(runs) + " paired runs, " + std::to_string(mismatches) + " mismatches"};
    });

    run(9, "degenerate inputs", [&]() -> std::pair<bool, std::string> {
        auto both = [](const char* text) {
            ParsedFormula p = parse(text);
            std::size_t n = p.vars.size();
            CompileOptions opts;
            opts.mode = Mode::Implicates;
            std::ostringstream out;
            write_primes(out, compile(p.formula, n, {}).primes, p.vars);
            out << "/";
            write_primes(out, compile(p.formula, n, opts).primes, p.vars);
            return out.str();
        };
        std::string taut = both("a | !a"), contra = both("a & !a"), single = both("a");
        bool ok = taut == "TRUE\n/" && contra == "/FALSE\n" && single == "a\n/a\n";
        std::string detail = "tautology [" + taut + "] contradiction [" + contra + "] single [" + single + "]";
        std::replace(detail.begin(), detail.end(), '\n', ';');
        return {ok, detail};
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
