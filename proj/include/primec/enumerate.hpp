#pragma once

#include "primec/cover.hpp"
#include "primec/formula.hpp"

#include <chrono>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace primec {

enum class Mode { Implicants, Implicates };

std::string_view to_string(Mode m);
/// Accepts "implicants" and "implicates"; throws InputError otherwise.
Mode parse_mode(std::string_view text);

/// A term (implicants) or clause (implicates) as a literal set sorted by
/// literal code.
using Prime = std::vector<Lit>;

struct EnumerationStats {
    std::uint64_t solver_calls = 0;
};

/// Canonical order: literals sorted within each prime, primes sorted
/// lexicographically.
struct PrimeSet {
    Mode kind = Mode::Implicants;
    std::vector<Prime> primes;
    EnumerationStats stats;

    std::size_t size() const { return primes.size(); }
};

/// Dual-rail encodes the cover, then repeatedly takes a model of H, shrinks
/// its true rails to a subset-minimal hitting set of the cover images,
/// decodes it as a term and blocks it. The result is exactly the set of
/// prime implicants of the cover.
PrimeSet compile_all_implicants(const Cover& cover, std::size_t num_inputs,
                                std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt,
                                std::ostream* trace = nullptr);

/// Greedy minimization of a rail set against all-positive rail clauses:
/// walks `rails` from the back and drops an element whenever every clause
/// stays hit. `rails` must hit every clause and hold no p_x/n_x pair.
std::vector<Var> minimize_model(std::span<const Var> rails, std::span<const Clause> cover_images,
                                const DualRailMap& map);

struct CompileStats {
    CoverStats cover;
    EnumerationStats enumeration;
    double phase1_ms = 0;
    double phase2_ms = 0;

    std::uint64_t solver_calls() const { return cover.solver_calls + enumeration.solver_calls; }
};

struct CompileOptions {
    Mode mode = Mode::Implicants;
    ShrinkConfig shrink;
    ShrinkHooks shrink_hooks;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::ostream* trace = nullptr;
};

struct CompileResult {
    /// Cover of the compiled formula: f for implicants, !f for implicates.
    Cover cover;
    PrimeSet primes;
    CompileStats stats;
};

/// Both phases. Implicates are the negated prime implicants of !f.
/// Inputs are the ids [0, num_inputs), which must cover every variable of f.
CompileResult compile(const Formula& f, std::size_t num_inputs, const CompileOptions& options = {});

PrimeSet compile_all_implicates(const Formula& f, std::size_t num_inputs, const ShrinkConfig& config = {});

/// `a & !b` for terms, `a | !b` for clauses; TRUE / FALSE when empty.
std::string format_prime(const Prime& prime, Mode kind, const VarTable& vars);
void write_primes(std::ostream& os, const PrimeSet& set, const VarTable& vars);

} // namespace primec
