#include "primec/formula.hpp"

#include <cctype>
#include <unordered_set>

namespace primec {

Var VarTable::intern(std::string_view name) {
    if (auto it = ids_.find(std::string(name)); it != ids_.end())
        return it->second;
    Var v(static_cast<std::uint32_t>(names_.size()));
    names_.emplace_back(name);
    ids_.emplace(names_.back(), v);
    return v;
}

std::optional<Var> VarTable::find(std::string_view name) const {
    if (auto it = ids_.find(std::string(name)); it != ids_.end())
        return it->second;
    return std::nullopt;
}

const std::string& VarTable::name(Var v) const {
    if (v.index >= names_.size())
        throw std::out_of_range("unknown variable id " + std::to_string(v.index));
    return names_[v.index];
}

Formula Formula::variable(Var v) {
    return Formula(std::make_shared<const Node>(Node{Kind::Variable, v, {}}));
}

Formula Formula::negation(Formula operand) {
    std::vector<Formula> ch;
    ch.push_back(std::move(operand));
    return Formula(std::make_shared<const Node>(Node{Kind::Negation, Var{}, std::move(ch)}));
}

Formula Formula::conjunction(std::vector<Formula> operands) {
    if (operands.size() < 2)
        throw ContractError("conjunction needs at least two operands");
    return Formula(std::make_shared<const Node>(Node{Kind::Conjunction, Var{}, std::move(operands)}));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
    if (operands.size() < 2)
        throw ContractError("disjunction needs at least two operands");
    return Formula(std::make_shared<const Node>(Node{Kind::Disjunction, Var{}, std::move(operands)}));
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_)
        return true;
    if (a.kind() != b.kind())
        return false;
    if (a.kind() == Formula::Kind::Variable)
        return a.var() == b.var();
    auto ca = a.children();
    auto cb = b.children();
    if (ca.size() != cb.size())
        return false;
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (!(ca[i] == cb[i]))
            return false;
    return true;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ParsedFormula run() {
        skip_space();
        if (at_end())
            throw ParseError("empty input", line_, column_);
        Formula f = parse_or();
        skip_space();
        if (!at_end())
            fail_here("unexpected '" + std::string(1, peek()) + "'");
        return ParsedFormula{std::move(f), std::move(vars_)};
    }

private:
    Formula parse_or() {
        std::vector<Formula> ops;
        ops.push_back(parse_and());
        while (accept('|'))
            ops.push_back(parse_and());
        return ops.size() == 1 ? std::move(ops.front()) : Formula::disjunction(std::move(ops));
    }

    Formula parse_and() {
        std::vector<Formula> ops;
        ops.push_back(parse_unary());
        while (accept('&'))
            ops.push_back(parse_unary());
        return ops.size() == 1 ? std::move(ops.front()) : Formula::conjunction(std::move(ops));
    }

    Formula parse_unary() {
        skip_space();
        if (accept('!'))
            return Formula::negation(parse_unary());
        if (at_end())
            fail_here("unexpected end of input");
        char c = peek();
        if (c == '(') {
            int line = line_, col = column_;
            advance();
            Formula inner = parse_or();
            skip_space();
            if (!accept(')'))
                throw ParseError("unbalanced '(' opened at line " + std::to_string(line) + ", column " +
                                     std::to_string(col),
                                 line_, column_);
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                advance();
            return Formula::variable(vars_.intern(text_.substr(start, pos_ - start)));
        }
        switch (c) {
        case '^':
        case '-':
        case '=':
        case '<':
        case '>':
            fail_here(std::string("unsupported connective '") + c + "'; only !, & and | are accepted");
        default:
            fail_here("unexpected '" + std::string(1, c) + "'");
        }
    }

    bool accept(char c) {
        skip_space();
        if (!at_end() && peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    void skip_space() {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    [[noreturn]] void fail_here(const std::string& msg) const { throw ParseError(msg, line_, column_); }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    VarTable vars_;
};

void collect_vars(const Formula& f, std::vector<Var>& out, std::unordered_set<Var>& seen) {
    if (f.kind() == Formula::Kind::Variable) {
        if (seen.insert(f.var()).second)
            out.push_back(f.var());
        return;
    }
    for (const Formula& c : f.children())
        collect_vars(c, out, seen);
}

void print(const Formula& f, const VarTable& vars, std::string& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::Variable:
        out += vars.name(f.var());
        return;
    case K::Negation: {
        const Formula& op = f.children()[0];
        out += '!';
        bool wrap = op.kind() == K::Conjunction || op.kind() == K::Disjunction;
        if (wrap)
            out += '(';
        print(op, vars, out);
        if (wrap)
            out += ')';
        return;
    }
    case K::Conjunction:
    case K::Disjunction: {
        const char* sep = f.kind() == K::Conjunction ? " & " : " | ";
        bool first = true;
        for (const Formula& c : f.children()) {
            if (!first)
                out += sep;
            first = false;
            // A same-kind child needs parentheses or it would be flattened on
            // re-parse; a disjunction under a conjunction needs them for
            // precedence.
            bool wrap = c.kind() == f.kind() || (f.kind() == K::Conjunction && c.kind() == K::Disjunction);
            if (wrap)
                out += '(';
            print(c, vars, out);
            if (wrap)
                out += ')';
        }
        return;
    }
    }
}

} // namespace

ParsedFormula parse(std::string_view text) { return Parser(text).run(); }

Formula negate(const Formula& f) {
    if (f.kind() == Formula::Kind::Negation)
        return f.children()[0];
    return Formula::negation(f);
}

bool evaluate(const Formula& f, const std::vector<bool>& assignment) {
    switch (f.kind()) {
    case Formula::Kind::Variable:
        if (f.var().index >= assignment.size())
            throw InputError("assignment has no value for variable id " + std::to_string(f.var().index));
        return assignment[f.var().index];
    case Formula::Kind::Negation:
        return !evaluate(f.children()[0], assignment);
    case Formula::Kind::Conjunction: {
        // Evaluate every child so a missing variable is always reported.
        bool value = true;
        for (const Formula& c : f.children())
            value = evaluate(c, assignment) && value;
        return value;
    }
    case Formula::Kind::Disjunction: {
        bool value = false;
        for (const Formula& c : f.children())
            value = evaluate(c, assignment) || value;
        return value;
    }
    }
    return false;
}

std::vector<Var> variables(const Formula& f) {
    std::vector<Var> out;
    std::unordered_set<Var> seen;
    collect_vars(f, out, seen);
    return out;
}

std::size_t var_span(const Formula& f) {
    std::size_t n = 0;
    for (Var v : variables(f))
        n = std::max<std::size_t>(n, v.index + 1);
    return n;
}

std::string to_string(const Formula& f, const VarTable& vars) {
    std::string out;
    print(f, vars, out);
    return out;
}

} // namespace primec
