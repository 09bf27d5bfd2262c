#pragma once

#include "primec/formula.hpp"
#include "primec/types.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace primec {

/// A normalized clause: literals sorted by code, no duplicates, never
/// tautological. The empty clause is allowed and is unsatisfiable.
class Clause {
public:
    Clause() = default;

    /// Returns nullopt when `lits` contains a complementary pair.
    static std::optional<Clause> make(std::vector<Lit> lits);

    std::span<const Lit> lits() const { return lits_; }
    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    bool contains(Lit l) const;

    friend auto operator<=>(const Clause&, const Clause&) = default;
    friend bool operator==(const Clause&, const Clause&) = default;

private:
    std::vector<Lit> lits_;
};

class CnfFormula {
public:
    explicit CnfFormula(std::size_t num_inputs = 0) : num_vars_(num_inputs), num_inputs_(num_inputs) {}

    Var new_var() { return Var(static_cast<std::uint32_t>(num_vars_++)); }
    void reserve_vars(std::size_t n) { num_vars_ = std::max(num_vars_, n); }

    /// Normalizes and appends; returns false if the clause was a tautology
    /// and therefore dropped. Grows the variable count to cover `lits`.
    bool add_clause(std::vector<Lit> lits);
    void add_clause(const Clause& c);

    std::span<const Clause> clauses() const { return clauses_; }
    std::size_t num_clauses() const { return clauses_.size(); }
    std::size_t num_vars() const { return num_vars_; }
    std::size_t num_inputs() const { return num_inputs_; }
    /// Sum of clause sizes.
    std::size_t literal_count() const { return literal_count_; }

private:
    std::vector<Clause> clauses_;
    std::size_t num_vars_;
    std::size_t num_inputs_;
    std::size_t literal_count_ = 0;
};

/// Full biconditional Tseitin encoding. Input variables keep their ids
/// [0, num_inputs); one auxiliary per conjunction/disjunction node is
/// allocated from `first_aux` upward. Negations only flip literal polarity.
/// The root literal is asserted by a unit clause.
CnfFormula tseitin(const Formula& f, std::size_t num_inputs, std::size_t first_aux);

/// Encodings of f and of its complement over the same inputs with disjoint
/// auxiliary ranges, so clauses over inputs fit either side verbatim.
struct TseitinPair {
    CnfFormula positive;
    CnfFormula negative;
};
TseitinPair tseitin_pair(const Formula& f, std::size_t num_inputs);

/// Rails for input x: p_x = n + 2x and n_x = n + 2x + 1 where n is the
/// number of inputs.
class DualRailMap {
public:
    explicit DualRailMap(std::size_t num_inputs) : num_inputs_(num_inputs) {}

    std::size_t num_inputs() const { return num_inputs_; }
    std::size_t num_vars() const { return 3 * num_inputs_; }
    Var positive(Var x) const { return Var(static_cast<std::uint32_t>(num_inputs_ + 2 * x.index)); }
    Var negative(Var x) const { return Var(static_cast<std::uint32_t>(num_inputs_ + 2 * x.index + 1)); }
    Var rail(Lit l) const { return l.negated() ? negative(l.var()) : positive(l.var()); }
    bool is_rail(Var d) const { return d.index >= num_inputs_ && d.index < num_vars(); }
    /// Input literal a rail variable stands for.
    Lit decode(Var d) const;

private:
    std::size_t num_inputs_;
};

/// Each clause over inputs becomes an all-positive clause over rails, and
/// every input that occurs gets one exclusivity clause (!p_x | !n_x).
/// Image clauses come first, in cover order, followed by the exclusivity
/// clauses in input-id order.
CnfFormula dual_rail(std::span<const Clause> cover, const DualRailMap& map);

/// DIMACS with a `p cnf V C` header; variable k is written as k+1, so
/// inputs come first.
void write_dimacs(std::ostream& os, const CnfFormula& cnf);

} // namespace primec
