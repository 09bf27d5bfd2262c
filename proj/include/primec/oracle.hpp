#pragma once

#include "primec/cnf.hpp"
#include "primec/enumerate.hpp"
#include "primec/formula.hpp"

#include <cstdint>
#include <span>
#include <vector>

// Exhaustive reference implementations used to check the SAT-based
// pipeline on small instances. Nothing here calls the CDCL solver.
namespace primec::oracle {

inline constexpr std::size_t kTruthTableLimit = 24;
inline constexpr std::size_t kPrimeLimit = 12;
inline constexpr std::size_t kEquivalenceLimit = 20;
inline constexpr std::size_t kCoreLimit = 16;

/// Satisfaction bits of a formula over inputs [0, n); bit r is the value
/// under the assignment where input i takes bit i of r.
class TruthTable {
public:
    /// Throws BudgetError when n exceeds kTruthTableLimit.
    static TruthTable of(const Formula& f, std::size_t num_inputs);
    static TruthTable of(std::span<const Clause> cnf, std::size_t num_inputs);

    std::size_t num_inputs() const { return n_; }
    std::uint64_t rows() const { return std::uint64_t{1} << n_; }
    bool at(std::uint64_t row) const { return (words_[row >> 6] >> (row & 63)) & 1u; }
    std::uint64_t count() const;

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// All 3^n terms, filtered to the subset-minimal implicants.
PrimeSet brute_prime_implicants(const Formula& f, std::size_t num_inputs);
/// All 3^n clauses, filtered to the subset-minimal implicates.
PrimeSet brute_prime_implicates(const Formula& f, std::size_t num_inputs);

bool equivalent(const Formula& f, std::span<const Clause> cnf, std::size_t num_inputs);

bool is_implicant(const TruthTable& t, std::span<const Lit> term);
bool is_implicate(const TruthTable& t, std::span<const Lit> clause);

/// Smallest literal count of a prime cover of f (a set of prime implicates
/// equivalent to f), by exact weighted set cover over the non-models.
/// Returns 0 when f is valid or unsatisfiable.
std::size_t min_prime_cover_literals(const Formula& f, std::size_t num_inputs);

/// Plain DPLL: unit propagation and chronological branching, no learning.
bool dpll_satisfiable(const CnfFormula& cnf, std::span<const Lit> assumptions = {});

/// Smallest subset of `assumptions` inconsistent with `cnf`, searched by
/// increasing size; returned in assumption order.
std::vector<Lit> brute_min_core(const CnfFormula& cnf, std::span<const Lit> assumptions);

} // namespace primec::oracle
