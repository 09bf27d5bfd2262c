#include "primec/cnf.hpp"

#include <algorithm>
#include <ostream>

namespace primec {

std::optional<Clause> Clause::make(std::vector<Lit> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    // After sorting, x and !x are adjacent.
    for (std::size_t i = 1; i < lits.size(); ++i)
        if (lits[i] == ~lits[i - 1])
            return std::nullopt;
    Clause c;
    c.lits_ = std::move(lits);
    return c;
}

bool Clause::contains(Lit l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

bool CnfFormula::add_clause(std::vector<Lit> lits) {
    auto c = Clause::make(std::move(lits));
    if (!c)
        return false;
    add_clause(*c);
    return true;
}

void CnfFormula::add_clause(const Clause& c) {
    for (Lit l : c.lits())
        num_vars_ = std::max<std::size_t>(num_vars_, l.var().index + 1);
    literal_count_ += c.size();
    clauses_.push_back(c);
}

namespace {

class TseitinEncoder {
public:
    TseitinEncoder(CnfFormula& out, std::size_t first_aux) : out_(out), next_aux_(first_aux) {}

    Lit encode(const Formula& f) {
        switch (f.kind()) {
        case Formula::Kind::Variable:
            return Lit::pos(f.var());
        case Formula::Kind::Negation:
            return ~encode(f.children()[0]);
        case Formula::Kind::Conjunction:
        case Formula::Kind::Disjunction:
            break;
        }
        std::vector<Lit> ops;
        for (const Formula& c : f.children())
            ops.push_back(encode(c));
        Lit t = Lit::pos(Var(static_cast<std::uint32_t>(next_aux_++)));
        out_.reserve_vars(next_aux_);
        if (f.kind() == Formula::Kind::Conjunction) {
            // t -> each op; all ops -> t
            for (Lit l : ops)
                out_.add_clause({~t, l});
            std::vector<Lit> back{t};
            for (Lit l : ops)
                back.push_back(~l);
            out_.add_clause(std::move(back));
        } else {
            std::vector<Lit> fwd{~t};
            fwd.insert(fwd.end(), ops.begin(), ops.end());
            out_.add_clause(std::move(fwd));
            for (Lit l : ops)
                out_.add_clause({t, ~l});
        }
        return t;
    }

    std::size_t next_aux() const { return next_aux_; }

private:
    CnfFormula& out_;
    std::size_t next_aux_;
};

} // namespace

CnfFormula tseitin(const Formula& f, std::size_t num_inputs, std::size_t first_aux) {
    if (first_aux < num_inputs)
        throw ContractError("auxiliary range overlaps the inputs");
    if (var_span(f) > num_inputs)
        throw ContractError("formula mentions a variable outside the input prefix");
    CnfFormula out(num_inputs);
    TseitinEncoder enc(out, first_aux);
    Lit root = enc.encode(f);
    out.add_clause({root});
    return out;
}

TseitinPair tseitin_pair(const Formula& f, std::size_t num_inputs) {
    CnfFormula pos = tseitin(f, num_inputs, num_inputs);
    CnfFormula neg = tseitin(negate(f), num_inputs, pos.num_vars());
    return TseitinPair{std::move(pos), std::move(neg)};
}

Lit DualRailMap::decode(Var d) const {
    if (!is_rail(d))
        throw ContractError("variable " + std::to_string(d.index) + " is not a rail");
    std::uint32_t off = d.index - static_cast<std::uint32_t>(num_inputs_);
    return Lit(Var(off / 2), (off & 1u) != 0);
}

CnfFormula dual_rail(std::span<const Clause> cover, const DualRailMap& map) {
    CnfFormula out(map.num_inputs());
    out.reserve_vars(map.num_vars());
    std::vector<bool> occurs(map.num_inputs(), false);
    for (const Clause& c : cover) {
        std::vector<Lit> image;
        image.reserve(c.size());
        for (Lit l : c.lits()) {
            if (l.var().index >= map.num_inputs())
                throw ContractError("cover clause mentions a non-input variable");
            occurs[l.var().index] = true;
            image.push_back(Lit::pos(map.rail(l)));
        }
        out.add_clause(std::move(image));
    }
    for (std::size_t x = 0; x < occurs.size(); ++x) {
        if (!occurs[x])
            continue;
        Var v(static_cast<std::uint32_t>(x));
        out.add_clause({Lit::neg(map.positive(v)), Lit::neg(map.negative(v))});
    }
    return out;
}

void write_dimacs(std::ostream& os, const CnfFormula& cnf) {
    os << "c inputs " << cnf.num_inputs() << '\n';
    os << "p cnf " << cnf.num_vars() << ' ' << cnf.num_clauses() << '\n';
    for (const Clause& c : cnf.clauses()) {
        for (Lit l : c.lits())
            os << (l.negated() ? "-" : "") << (l.var().index + 1) << ' ';
        os << "0\n";
    }
}

} // namespace primec
