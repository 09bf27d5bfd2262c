#pragma once

#include "primec/enumerate.hpp"
#include "primec/formula.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace primec {

enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 1,
    kExitContractViolation = 2,
    kExitTimeout = 3,
};

struct RunConfig {
    Mode mode = Mode::Implicants;
    ShrinkConfig shrink;
    /// Compare the result with the brute-force oracle; implies cost.
    bool check = false;
    /// Compute the cover cost against a minimum prime cover.
    bool cost = false;
    /// Precomputed minimum prime cover size; skips the oracle when set.
    std::optional<std::size_t> prime_cover_literals;
    std::optional<double> timeout_seconds;
    std::ostream* trace = nullptr;
};

struct RunStats {
    std::string mode;
    std::string input;
    std::size_t vars = 0;
    std::size_t cover_clauses = 0;
    std::size_t cover_literals = 0;
    std::size_t primes = 0;
    std::uint64_t solver_calls = 0;
    std::uint64_t shrink_passes = 0;
    std::uint64_t ordered_solves = 0;
    std::uint64_t fixpoints = 0;
    double phase1_ms = 0;
    double phase2_ms = 0;
    std::optional<double> cost;
    std::uint64_t seed = 0;
    std::string strategy;
    unsigned iterations = 0;
    unsigned random_iters = 0;
    bool interval = true;
    std::string status = "ok";
};

/// Single stable-keyed JSON object.
std::string stats_to_json(const RunStats& stats);

struct RunOutput {
    PrimeSet primes;
    Cover cover;
    RunStats stats;
};

/// Full pipeline on a parsed formula. Throws TimeoutError, BudgetError (oracle
/// too small for --check/--cost is reported as an absent cost instead unless
/// `check` is set) and ContractError (including an oracle mismatch).
RunOutput run_pipeline(const ParsedFormula& parsed, const RunConfig& config, const std::string& input_name);

ParsedFormula read_formula_file(const std::filesystem::path& path);

/// One bench configuration, e.g. "1it", "random", "none".
struct BenchConfig {
    std::string label;
    ShrinkConfig shrink;
};

/// Parses "<N>it", "random" and "none" labels.
BenchConfig parse_bench_config(const std::string& label, const ShrinkConfig& defaults);

struct BenchOptions {
    std::vector<BenchConfig> configs;
    std::vector<Mode> modes{Mode::Implicants};
    std::optional<double> timeout_seconds;
    bool cost = true;
    unsigned jobs = 1;
};

struct BenchRow {
    std::string case_name;
    std::string config;
    RunStats stats;
};

/// Runs every (case, mode, config) combination; rows come back in corpus
/// order, then mode, then config. Throws InputError on an empty corpus.
std::vector<BenchRow> run_bench(const std::filesystem::path& corpus_dir, const BenchOptions& options);

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);
/// One line per (mode, config): cases with a cost and their mean cost.
void write_bench_summary(std::ostream& os, const std::vector<BenchRow>& rows);

/// Seeded random formula text over at most `max_vars` variables named
/// x1..xN with nesting depth at most `max_depth`.
std::string random_formula_text(std::uint64_t seed, std::size_t max_vars, std::size_t max_depth);

/// Writes case_000.bf ... into `dir`; byte-identical for equal arguments.
std::vector<std::filesystem::path> gen_corpus(const std::filesystem::path& dir, std::size_t n_cases,
                                              std::size_t max_vars, std::size_t max_depth, std::uint64_t seed);

/// Command-line entry point; see README for the flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace primec
