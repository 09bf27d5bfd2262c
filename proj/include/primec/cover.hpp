#pragma once

#include "primec/cnf.hpp"
#include "primec/shrink.hpp"

#include <chrono>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace primec {

/// Conjunction of over-approximate implicates (clauses over input
/// variables, each implied by the formula).
struct Cover {
    std::vector<Clause> clauses;

    std::size_t literal_count() const;
    /// True for the single-empty-clause cover of an unsatisfiable formula.
    bool is_contradiction() const { return clauses.size() == 1 && clauses.front().empty(); }
};

/// One harvested model of the negation and what it shrank to.
struct CoverRecord {
    std::size_t model_size = 0;
    std::size_t core_size = 0;
    std::size_t cover_literals = 0;
};

struct CoverStats {
    std::uint64_t iterations = 0;
    std::uint64_t solver_calls = 0;
    ShrinkStats shrink;
};

struct CoverOptions {
    ShrinkConfig shrink;
    ShrinkHooks shrink_hooks;
    std::function<void(const CoverRecord&)> on_iteration;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    /// Solver trace sink (one JSON line per solve), if any.
    std::ostream* trace = nullptr;
};

struct CoverResult {
    Cover cover;
    CoverStats stats;
};

/// Harvests models of the negation from one incremental solver R (which
/// starts as `sigma_not_phi` and accumulates the cover), shrinks each
/// projected model against `sigma_phi`, and adds the negated core to both
/// the cover and R until R is unsatisfiable. Both encodings must share the
/// input prefix [0, num_inputs). An unsatisfiable formula yields {FALSE}.
CoverResult compile_cover(const CnfFormula& sigma_phi, const CnfFormula& sigma_not_phi, std::size_t num_inputs,
                          const CoverOptions& options = {});

/// Cover literal count over the literal count of a prime cover. Throws
/// ContractError on a zero denominator.
double cover_cost(const Cover& cover, std::size_t prime_cover_literals);

} // namespace primec
