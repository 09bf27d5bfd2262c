#pragma once

#include "primec/cnf.hpp"
#include "primec/types.hpp"

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace primec {

enum class Status { Sat, Unsat };

class SolveResult {
public:
    static SolveResult sat(std::vector<bool> model);
    static SolveResult unsat(std::vector<Lit> failed);

    Status status() const { return status_; }
    bool is_sat() const { return status_ == Status::Sat; }

    /// Value of v in the (total) model. Throws ContractError on UNSAT.
    bool value(Var v) const;
    const std::vector<bool>& model() const;

    /// Failed assumptions: a subset of the assumptions, in assumption order,
    /// that is already inconsistent with the clause database. Empty when the
    /// database alone is unsatisfiable.
    const std::vector<Lit>& failed() const { return failed_; }

private:
    Status status_ = Status::Unsat;
    std::vector<bool> model_;
    std::vector<Lit> failed_;
};

struct SolverStats {
    std::uint64_t solves = 0;
    /// Heuristic (non-assumption) decisions only.
    std::uint64_t decisions = 0;
    std::uint64_t assumption_decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t restarts = 0;
    std::uint64_t learnts = 0;
};

struct SolverOptions {
    double var_decay = 0.95;
    double clause_decay = 0.999;
    int restart_first = 100;
    /// When set, emit one JSON line per solve call with the running counters.
    std::ostream* trace = nullptr;
    std::string trace_name = "solver";
};

/// Incremental CDCL solver: two watched literals, first-UIP learning, VSIDS
/// with phase saving, Luby restarts.
///
/// Assumptions are decided first, one decision level each and strictly in
/// the given order; an assumption that is already true gets an empty level.
/// Heuristic decisions happen only once every assumption is on the trail,
/// and restarts never undo assumption levels. When an assumption is found
/// false, its reason chain is resolved back to assumption literals
/// (analyze-final) to produce the failed set.
class Solver {
public:
    explicit Solver(std::size_t num_vars = 0, SolverOptions options = {});

    Var new_var();
    void reserve_vars(std::size_t n);
    std::size_t num_vars() const { return assigns_.size(); }

    /// Must reference reserved variables. An empty (or level-0 falsified)
    /// clause makes the solver permanently UNSAT.
    void add_clause(std::span<const Lit> lits);
    void add_clause(const Clause& c) { add_clause(c.lits()); }
    void add_cnf(const CnfFormula& cnf);

    /// Throws ContractError for unreserved or repeated assumption variables
    /// and TimeoutError once the deadline has passed.
    SolveResult solve(std::span<const Lit> assumptions = {});
    SolveResult solve(std::initializer_list<Lit> assumptions) {
        return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
    }

    /// False once the clause database is known to be unsatisfiable.
    bool okay() const { return ok_; }

    const SolverStats& stats() const { return stats_; }

    /// Every assumption decision of the last solve in the order it was made,
    /// including re-decisions after a backjump. Implied assumptions are not
    /// decisions and do not appear.
    const std::vector<Lit>& last_assumption_decisions() const { return last_assumption_decisions_; }

    void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) { deadline_ = deadline; }

    /// Seedable random polarity for heuristic decisions; nullopt restores
    /// saved phases.
    void set_random_polarity(std::optional<std::uint64_t> seed);

private:
    using CRef = std::uint32_t;
    static constexpr CRef kNoReason = UINT32_MAX;

    enum class LBool : std::uint8_t { True, False, Undef };

    struct ClauseRec {
        std::vector<Lit> lits;
        double activity = 0;
        bool learnt = false;
        bool deleted = false;
    };

    struct Watcher {
        CRef cref;
        Lit blocker;
    };

    LBool value(Lit l) const {
        LBool v = assigns_[l.var().index];
        if (v == LBool::Undef)
            return v;
        return (v == LBool::True) != l.negated() ? LBool::True : LBool::False;
    }
    int level(Var v) const { return level_[v.index]; }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    CRef alloc_clause(std::vector<Lit> lits, bool learnt);
    void attach(CRef cr);
    bool locked(CRef cr) const;

    void enqueue(Lit l, CRef reason);
    CRef propagate();
    void analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel);
    void analyze_final(Lit p, std::vector<Lit>& out_conflict);
    void cancel_until(int level);
    std::optional<Lit> pick_branch_lit();
    LBool search(int conflict_budget, std::span<const Lit> assumptions, std::vector<Lit>& final_conflict);
    void reduce_db();
    void check_deadline();

    void bump_var(Var v);
    void bump_clause(ClauseRec& c);
    void rescale_var_activity();

    // Binary max-heap over variable activity.
    bool heap_contains(Var v) const { return heap_pos_[v.index] >= 0; }
    void heap_insert(Var v);
    Var heap_pop();
    void heap_up(int i);
    void heap_down(int i);

    SolverOptions options_;
    bool ok_ = true;

    std::vector<ClauseRec> clauses_;
    std::vector<CRef> free_slots_;
    std::vector<CRef> learnts_;
    std::vector<std::vector<Watcher>> watches_;
#ifdef PRIMEC_CHECKED
    std::vector<std::vector<Lit>> originals_;
#endif

    std::vector<LBool> assigns_;
    std::vector<int> level_;
    std::vector<CRef> reason_;
    std::vector<bool> polarity_;
    std::vector<char> seen_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<double> activity_;
    std::vector<Var> heap_;
    std::vector<int> heap_pos_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    double max_learnts_ = 0;

    std::optional<std::mt19937_64> polarity_rng_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::uint64_t deadline_ticks_ = 0;

    std::vector<Lit> last_assumption_decisions_;
    SolverStats stats_;
};

} // namespace primec
