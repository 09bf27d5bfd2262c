#pragma once

#include "primec/cnf.hpp"
#include "primec/formula.hpp"

#include <string>
#include <vector>

namespace primec::test {

// a, b, c, ... are inputs 0, 1, 2, ...
inline Lit pos(char name) { return Lit::pos(Var(static_cast<std::uint32_t>(name - 'a'))); }
inline Lit neg(char name) { return Lit::neg(Var(static_cast<std::uint32_t>(name - 'a'))); }
inline Var var(char name) { return Var(static_cast<std::uint32_t>(name - 'a')); }

inline Clause clause(std::vector<Lit> lits) { return *Clause::make(std::move(lits)); }

// Parses with the variables a..(a+n-1) interned up front so ids follow
// the alphabet regardless of occurrence order.
inline ParsedFormula parse_over(std::string_view text, std::size_t n) {
    ParsedFormula out = parse(text);
    VarTable vars;
    for (std::size_t i = 0; i < n; ++i)
        vars.intern(std::string(1, char('a' + i)));
    std::vector<Var> remap(out.vars.size());
    for (std::size_t i = 0; i < out.vars.size(); ++i)
        remap[i] = *vars.find(out.vars.name(Var(static_cast<std::uint32_t>(i))));
    struct Rename {
        const std::vector<Var>& map;
        Formula operator()(const Formula& f) const {
            switch (f.kind()) {
            case Formula::Kind::Variable:
                return Formula::variable(map[f.var().index]);
            case Formula::Kind::Negation:
                return Formula::negation((*this)(f.children()[0]));
            default: {
                std::vector<Formula> ops;
                for (const Formula& c : f.children())
                    ops.push_back((*this)(c));
                return f.kind() == Formula::Kind::Conjunction ? Formula::conjunction(std::move(ops))
                                                              : Formula::disjunction(std::move(ops));
            }
            }
        }
    };
    return ParsedFormula{Rename{remap}(out.formula), std::move(vars)};
}

// if a then b else c
inline const char* kMux = "(a & b) | (!a & c)";

// (!a | d)(!b | d)(!b | e)(!c | !d | !e)
inline CnfFormula order_sensitive_cnf() {
    CnfFormula cnf(5);
    cnf.add_clause({neg('a'), pos('d')});
    cnf.add_clause({neg('b'), pos('d')});
    cnf.add_clause({neg('b'), pos('e')});
    cnf.add_clause({neg('c'), neg('d'), neg('e')});
    return cnf;
}

} // namespace primec::test
