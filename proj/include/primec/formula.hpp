#pragma once

#include "primec/types.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace primec {

/// Bidirectional name <-> Var table. Ids are handed out densely in
/// interning order, so the parser's first-occurrence order is the id order.
class VarTable {
public:
    Var intern(std::string_view name);
    std::optional<Var> find(std::string_view name) const;
    const std::string& name(Var v) const;
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Var> ids_;
};

/// Immutable non-clausal formula over {var, !, &, |}. Nodes are shared, so
/// copies are cheap and a Formula may be read from several threads.
class Formula {
public:
    enum class Kind { Variable, Negation, Conjunction, Disjunction };

    static Formula variable(Var v);
    static Formula negation(Formula operand);
    /// Both n-ary constructors require at least two operands.
    static Formula conjunction(std::vector<Formula> operands);
    static Formula disjunction(std::vector<Formula> operands);

    Kind kind() const { return node_->kind; }
    /// Only meaningful for Kind::Variable.
    Var var() const { return node_->var; }
    std::span<const Formula> children() const { return node_->children; }

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node {
        Kind kind;
        Var var;
        std::vector<Formula> children;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct ParsedFormula {
    Formula formula;
    VarTable vars;
};

/// Grammar (precedence ! > & > |, '#' starts a line comment):
///   or    := and ('|' and)*
///   and   := unary ('&' unary)*
///   unary := '!' unary | ident | '(' or ')'
/// Throws ParseError with a 1-based line/column.
ParsedFormula parse(std::string_view text);

/// Complement; strips one negation instead of stacking two.
Formula negate(const Formula& f);

/// `assignment[v.index]` is the value of v. Throws InputError when the
/// assignment does not cover some variable of f.
bool evaluate(const Formula& f, const std::vector<bool>& assignment);

/// Variables of f, deduplicated, in first-occurrence order.
std::vector<Var> variables(const Formula& f);

/// Number of variable ids f needs, i.e. 1 + the largest id (0 if none).
std::size_t var_span(const Formula& f);

/// Prints with the minimum parentheses needed for parse() to rebuild the
/// same tree.
std::string to_string(const Formula& f, const VarTable& vars);

} // namespace primec
