#include "primec/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

namespace primec::oracle {

namespace {

constexpr std::uint64_t kVarMask[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

using Words = std::vector<std::uint64_t>;

std::size_t word_count(std::size_t n) { return n < 6 ? 1 : (std::size_t{1} << (n - 6)); }

Words var_words(std::uint32_t i, std::size_t n) {
    Words w(word_count(n));
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] = i < 6 ? kVarMask[i] : (((k >> (i - 6)) & 1u) ? ~std::uint64_t{0} : 0);
    return w;
}

Words eval_words(const Formula& f, std::size_t n) {
    switch (f.kind()) {
    case Formula::Kind::Variable:
        if (f.var().index >= n)
            throw ContractError("truth table: variable outside the inputs");
        return var_words(f.var().index, n);
    case Formula::Kind::Negation: {
        Words w = eval_words(f.children()[0], n);
        for (auto& x : w)
            x = ~x;
        return w;
    }
    case Formula::Kind::Conjunction:
    case Formula::Kind::Disjunction: {
        bool conj = f.kind() == Formula::Kind::Conjunction;
        Words acc = eval_words(f.children()[0], n);
        for (std::size_t c = 1; c < f.children().size(); ++c) {
            Words w = eval_words(f.children()[c], n);
            for (std::size_t k = 0; k < acc.size(); ++k)
                acc[k] = conj ? (acc[k] & w[k]) : (acc[k] | w[k]);
        }
        return acc;
    }
    }
    return {};
}

void mask_tail(Words& w, std::size_t n) {
    if (n < 6)
        w[0] &= (std::uint64_t{1} << (std::size_t{1} << n)) - 1;
}

std::vector<std::uint64_t> powers_of_three(std::size_t n) {
    std::vector<std::uint64_t> p(n + 1, 1);
    for (std::size_t i = 1; i <= n; ++i)
        p[i] = p[i - 1] * 3;
    return p;
}

// Digit per variable: 0 absent, 1 positive literal, 2 negative literal.
// `base(row_of_digits)` decides fully specified index t; an index with an
// absent digit holds iff both of its one-literal extensions hold. Returns
// the subset-minimal indices that hold, as literal sets.
std::vector<Prime> minimal_sets(std::size_t n, const std::function<bool(const std::vector<int>&)>& base) {
    auto pow3 = powers_of_three(n);
    const std::uint64_t total = pow3[n];
    std::vector<char> holds(total, 0);
    std::vector<int> digits(n);
    for (std::uint64_t t = total; t-- > 0;) {
        std::uint64_t rest = t;
        int absent = -1;
        for (std::size_t i = 0; i < n; ++i) {
            digits[i] = static_cast<int>(rest % 3);
            rest /= 3;
            if (digits[i] == 0 && absent < 0)
                absent = static_cast<int>(i);
        }
        if (absent < 0)
            holds[t] = base(digits) ? 1 : 0;
        else
            holds[t] = holds[t + pow3[absent]] && holds[t + 2 * pow3[absent]];
    }

    std::vector<Prime> out;
    for (std::uint64_t t = 0; t < total; ++t) {
        if (!holds[t])
            continue;
        std::uint64_t rest = t;
        bool minimal = true;
        Prime lits;
        for (std::size_t i = 0; i < n; ++i) {
            int d = static_cast<int>(rest % 3);
            rest /= 3;
            if (d == 0)
                continue;
            if (holds[t - static_cast<std::uint64_t>(d) * pow3[i]]) {
                minimal = false;
                break;
            }
            lits.emplace_back(Var(static_cast<std::uint32_t>(i)), d == 2);
        }
        if (minimal) {
            std::sort(lits.begin(), lits.end());
            out.push_back(std::move(lits));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void check_prime_budget(std::size_t n) {
    if (n > kPrimeLimit)
        throw BudgetError("prime oracle limited to " + std::to_string(kPrimeLimit) + " variables, got " +
                          std::to_string(n));
}

// Exact minimum-weight set cover by depth-first branch and bound.
class SetCover {
public:
    SetCover(std::vector<Words> sets, std::vector<std::size_t> weights, std::size_t universe)
        : sets_(std::move(sets)), weights_(std::move(weights)), universe_(universe) {}

    std::size_t solve() {
        std::size_t forced = reduce();
        build_sparse();
        Words uncovered((universe_ + 63) / 64, 0);
        for (std::size_t e = 0; e < universe_; ++e)
            uncovered[e >> 6] |= std::uint64_t{1} << (e & 63);
        best_ = greedy(uncovered);
        std::vector<std::uint32_t> cover_count(universe_, 0);
        std::vector<char> excluded(sets_.size(), 0);
        std::vector<double> mult(universe_);
        for (std::size_t e = 0; e < universe_; ++e) {
            double price = std::numeric_limits<double>::infinity();
            for (std::uint32_t j : cols_of_[e])
                price = std::min(price, static_cast<double>(weights_[j]) / static_cast<double>(elems_of_[j].size()));
            mult[e] = price;
        }
        search(cover_count, excluded, 0, universe_, mult);
        return forced + best_;
    }

private:
    static constexpr std::uint64_t kNodeBudget = 25'000;

    bool has(const Words& w, std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }

    static bool subset(const Words& a, const Words& b) {
        for (std::size_t k = 0; k < a.size(); ++k)
            if (a[k] & ~b[k])
                return false;
        return true;
    }

    // Root reductions, repeated to a fixpoint: an element whose columns
    // include another element's columns is covered whenever that one is; a
    // column contained in a no more expensive column is never needed; an
    // element with a single column forces it. Returns the forced weight and
    // rewrites sets_/weights_/universe_ to the residual instance.
    std::size_t reduce() {
        std::size_t forced = 0;
        std::vector<std::size_t> elems(universe_);
        for (std::size_t e = 0; e < universe_; ++e)
            elems[e] = e;
        std::vector<std::size_t> cols(sets_.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            cols[j] = j;

        for (bool changed = true; changed;) {
            changed = false;
            // element -> columns containing it
            std::vector<Words> by_elem(elems.size(), Words((cols.size() + 63) / 64, 0));
            for (std::size_t i = 0; i < elems.size(); ++i)
                for (std::size_t c = 0; c < cols.size(); ++c)
                    if (has(sets_[cols[c]], elems[i]))
                        by_elem[i][c >> 6] |= std::uint64_t{1} << (c & 63);

            for (std::size_t i = 0; i < elems.size(); ++i) {
                std::size_t count = 0, only = 0;
                for (std::size_t c = 0; c < cols.size(); ++c)
                    if (has(by_elem[i], c)) {
                        ++count;
                        only = c;
                    }
                if (count == 1) {
                    std::size_t j = cols[only];
                    forced += weights_[j];
                    std::vector<std::size_t> rest;
                    for (std::size_t e : elems)
                        if (!has(sets_[j], e))
                            rest.push_back(e);
                    elems = std::move(rest);
                    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(only));
                    changed = true;
                    break;
                }
            }
            if (changed)
                continue;

            std::vector<bool> drop_elem(elems.size(), false);
            for (std::size_t i = 0; i < elems.size(); ++i)
                for (std::size_t k = 0; k < elems.size() && !drop_elem[i]; ++k)
                    if (k != i && !drop_elem[k] && subset(by_elem[k], by_elem[i]) &&
                        (!subset(by_elem[i], by_elem[k]) || k < i))
                        drop_elem[i] = true;
            std::vector<std::size_t> kept_elems;
            for (std::size_t i = 0; i < elems.size(); ++i)
                if (!drop_elem[i])
                    kept_elems.push_back(elems[i]);
            changed |= kept_elems.size() != elems.size();
            elems = std::move(kept_elems);

            Words live((universe_ + 63) / 64, 0);
            for (std::size_t e : elems)
                live[e >> 6] |= std::uint64_t{1} << (e & 63);
            std::vector<Words> restricted(cols.size());
            for (std::size_t c = 0; c < cols.size(); ++c) {
                restricted[c] = sets_[cols[c]];
                for (std::size_t k = 0; k < live.size(); ++k)
                    restricted[c][k] &= live[k];
            }
            std::vector<bool> drop_col(cols.size(), false);
            for (std::size_t c = 0; c < cols.size(); ++c) {
                bool empty = std::all_of(restricted[c].begin(), restricted[c].end(), [](std::uint64_t w) { return w == 0; });
                if (empty) {
                    drop_col[c] = true;
                    continue;
                }
                for (std::size_t d = 0; d < cols.size() && !drop_col[c]; ++d) {
                    if (d == c || drop_col[d] || weights_[cols[d]] > weights_[cols[c]])
                        continue;
                    if (!subset(restricted[c], restricted[d]))
                        continue;
                    bool tie = weights_[cols[d]] == weights_[cols[c]] && subset(restricted[d], restricted[c]);
                    if (!tie || d < c)
                        drop_col[c] = true;
                }
            }
            std::vector<std::size_t> kept_cols;
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (!drop_col[c])
                    kept_cols.push_back(cols[c]);
            changed |= kept_cols.size() != cols.size();
            cols = std::move(kept_cols);
        }

        std::vector<Words> sets(cols.size(), Words((elems.size() + 63) / 64, 0));
        std::vector<std::size_t> weights(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            weights[c] = weights_[cols[c]];
            for (std::size_t i = 0; i < elems.size(); ++i)
                if (has(sets_[cols[c]], elems[i]))
                    sets[c][i >> 6] |= std::uint64_t{1} << (i & 63);
        }
        sets_ = std::move(sets);
        weights_ = std::move(weights);
        universe_ = elems.size();
        return forced;
    }


    std::size_t overlap(const Words& a, const Words& b) const {
        std::size_t n = 0;
        for (std::size_t k = 0; k < a.size(); ++k)
            n += static_cast<std::size_t>(std::popcount(a[k] & b[k]));
        return n;
    }

    std::size_t greedy(Words uncovered) const {
        std::size_t cost = 0;
        for (;;) {
            double best_ratio = std::numeric_limits<double>::infinity();
            std::size_t pick = sets_.size();
            for (std::size_t j = 0; j < sets_.size(); ++j) {
                std::size_t gain = overlap(sets_[j], uncovered);
                if (gain == 0)
                    continue;
                double ratio = static_cast<double>(weights_[j]) / static_cast<double>(gain);
                if (ratio < best_ratio) {
                    best_ratio = ratio;
                    pick = j;
                }
            }
            if (pick == sets_.size())
                return cost;
            cost += weights_[pick];
            for (std::size_t k = 0; k < uncovered.size(); ++k)
                uncovered[k] &= ~sets_[pick][k];
        }
    }

    void build_sparse() {
        elems_of_.assign(sets_.size(), {});
        cols_of_.assign(universe_, {});
        for (std::size_t j = 0; j < sets_.size(); ++j)
            for (std::size_t e = 0; e < universe_; ++e)
                if (has(sets_[j], e)) {
                    elems_of_[j].push_back(static_cast<std::uint32_t>(e));
                    cols_of_[e].push_back(static_cast<std::uint32_t>(j));
                }
    }

    // Lagrangian bound for covering the elements with cover_count 0 by
    // columns not excluded: sum(u) + sum over columns of min(0, reduced
    // cost), improved by a few subgradient steps from `mult`.
    double lagrangian(const std::vector<std::uint32_t>& cover_count, const std::vector<char>& excluded,
                      std::vector<double>& mult, std::size_t steps) const {
        double best = 0;
        double lambda = 2.0;
        std::vector<double> reduced(sets_.size());
        std::vector<int> subgrad(universe_);
        for (std::size_t it = 0; it < steps; ++it) {
            double value = 0;
            for (std::size_t e = 0; e < universe_; ++e)
                if (cover_count[e] == 0)
                    value += mult[e];
            for (std::size_t j = 0; j < sets_.size(); ++j) {
                if (excluded[j])
                    continue;
                double r = static_cast<double>(weights_[j]);
                for (std::uint32_t e : elems_of_[j])
                    if (cover_count[e] == 0)
                        r -= mult[e];
                reduced[j] = r;
                if (r < 0)
                    value += r;
            }
            best = std::max(best, value);
            double gap = static_cast<double>(best_) - value;
            if (gap <= 1e-9)
                break;
            double norm = 0;
            for (std::size_t e = 0; e < universe_; ++e) {
                if (cover_count[e] != 0)
                    continue;
                int g = 1;
                for (std::uint32_t j : cols_of_[e])
                    if (!excluded[j] && reduced[j] < 0)
                        --g;
                subgrad[e] = g;
                norm += static_cast<double>(g * g);
            }
            if (norm == 0)
                break;
            double step = lambda * gap / norm;
            for (std::size_t e = 0; e < universe_; ++e)
                if (cover_count[e] == 0)
                    mult[e] = std::max(0.0, mult[e] + step * subgrad[e]);
            lambda *= 0.9;
        }
        return best;
    }

    void search(std::vector<std::uint32_t>& cover_count, std::vector<char>& excluded, std::size_t cost,
                std::size_t remaining, const std::vector<double>& parent_mult) {
        if (++nodes_ > kNodeBudget)
            throw BudgetError("minimum prime cover search exceeded its node budget");
        if (remaining == 0) {
            best_ = std::min(best_, cost);
            return;
        }
        if (cost >= best_)
            return;

        std::size_t branch = universe_, fewest = std::numeric_limits<std::size_t>::max();
        for (std::size_t e = 0; e < universe_; ++e) {
            if (cover_count[e] != 0)
                continue;
            std::size_t live = 0;
            for (std::uint32_t j : cols_of_[e])
                live += !excluded[j];
            if (live == 0)
                return;
            if (live < fewest) {
                fewest = live;
                branch = e;
            }
        }

        std::vector<double> mult = parent_mult;
        double bound = lagrangian(cover_count, excluded, mult, nodes_ == 1 ? 200 : 15);
        if (static_cast<double>(cost) + bound > static_cast<double>(best_) - 1.0 + 1e-6)
            return;

        std::vector<std::uint32_t> cands;
        for (std::uint32_t j : cols_of_[branch])
            if (!excluded[j])
                cands.push_back(j);
        // cheapest reduced cost first
        auto reduced = [&](std::uint32_t j) {
            double r = static_cast<double>(weights_[j]);
            for (std::uint32_t e : elems_of_[j])
                if (cover_count[e] == 0)
                    r -= mult[e];
            return r;
        };
        std::vector<std::pair<double, std::uint32_t>> order;
        for (std::uint32_t j : cands)
            order.emplace_back(reduced(j), j);
        std::sort(order.begin(), order.end());

        std::vector<std::uint32_t> tried;
        for (auto [r, j] : order) {
            std::size_t newly = 0;
            for (std::uint32_t e : elems_of_[j])
                newly += cover_count[e]++ == 0;
            excluded[j] = 1;
            search(cover_count, excluded, cost + weights_[j], remaining - newly, mult);
            for (std::uint32_t e : elems_of_[j])
                --cover_count[e];
            // later branches must not use j: they would repeat this subtree
            tried.push_back(j);
        }
        for (std::uint32_t j : tried)
            excluded[j] = 0;
    }

    std::vector<std::vector<std::uint32_t>> elems_of_;
    std::vector<std::vector<std::uint32_t>> cols_of_;
    std::vector<Words> sets_;
    std::vector<std::size_t> weights_;
    std::size_t universe_;
    std::size_t best_ = 0;
    std::uint64_t nodes_ = 0;
};

} // namespace

TruthTable TruthTable::of(const Formula& f, std::size_t num_inputs) {
    if (num_inputs > kTruthTableLimit)
        throw BudgetError("truth table limited to " + std::to_string(kTruthTableLimit) + " variables");
    TruthTable t;
    t.n_ = num_inputs;
    t.words_ = eval_words(f, num_inputs);
    mask_tail(t.words_, num_inputs);
    return t;
}

TruthTable TruthTable::of(std::span<const Clause> cnf, std::size_t num_inputs) {
    if (num_inputs > kTruthTableLimit)
        throw BudgetError("truth table limited to " + std::to_string(kTruthTableLimit) + " variables");
    TruthTable t;
    t.n_ = num_inputs;
    t.words_.assign(word_count(num_inputs), ~std::uint64_t{0});
    for (const Clause& c : cnf) {
        Words clause(t.words_.size(), 0);
        for (Lit l : c.lits()) {
            if (l.var().index >= num_inputs)
                throw ContractError("truth table: clause variable outside the inputs");
            Words v = var_words(l.var().index, num_inputs);
            for (std::size_t k = 0; k < clause.size(); ++k)
                clause[k] |= l.negated() ? ~v[k] : v[k];
        }
        for (std::size_t k = 0; k < clause.size(); ++k)
            t.words_[k] &= clause[k];
    }
    mask_tail(t.words_, num_inputs);
    return t;
}

std::uint64_t TruthTable::count() const {
    std::uint64_t n = 0;
    for (auto w : words_)
        n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
}

PrimeSet brute_prime_implicants(const Formula& f, std::size_t num_inputs) {
    check_prime_budget(num_inputs);
    TruthTable table = TruthTable::of(f, num_inputs);
    PrimeSet out;
    out.kind = Mode::Implicants;
    out.primes = minimal_sets(num_inputs, [&](const std::vector<int>& digits) {
        std::uint64_t row = 0;
        for (std::size_t i = 0; i < digits.size(); ++i)
            if (digits[i] == 1)
                row |= std::uint64_t{1} << i;
        return table.at(row);
    });
    return out;
}

PrimeSet brute_prime_implicates(const Formula& f, std::size_t num_inputs) {
    check_prime_budget(num_inputs);
    TruthTable table = TruthTable::of(f, num_inputs);
    PrimeSet out;
    out.kind = Mode::Implicates;
    // A full clause is implied iff its single falsifying row is a non-model.
    out.primes = minimal_sets(num_inputs, [&](const std::vector<int>& digits) {
        std::uint64_t row = 0;
        for (std::size_t i = 0; i < digits.size(); ++i)
            if (digits[i] == 2)
                row |= std::uint64_t{1} << i;
        return !table.at(row);
    });
    return out;
}

bool equivalent(const Formula& f, std::span<const Clause> cnf, std::size_t num_inputs) {
    if (num_inputs > kEquivalenceLimit)
        throw BudgetError("equivalence oracle limited to " + std::to_string(kEquivalenceLimit) + " variables");
    return TruthTable::of(f, num_inputs) == TruthTable::of(cnf, num_inputs);
}

bool is_implicant(const TruthTable& t, std::span<const Lit> term) {
    for (std::uint64_t row = 0; row < t.rows(); ++row) {
        bool in_cube = std::all_of(term.begin(), term.end(),
                                   [&](Lit l) { return (((row >> l.var().index) & 1u) != 0) != l.negated(); });
        if (in_cube && !t.at(row))
            return false;
    }
    return true;
}

bool is_implicate(const TruthTable& t, std::span<const Lit> clause) {
    for (std::uint64_t row = 0; row < t.rows(); ++row) {
        bool falsified = std::none_of(clause.begin(), clause.end(),
                                      [&](Lit l) { return (((row >> l.var().index) & 1u) != 0) != l.negated(); });
        if (falsified && t.at(row))
            return false;
    }
    return true;
}

std::size_t min_prime_cover_literals(const Formula& f, std::size_t num_inputs) {
    TruthTable table = TruthTable::of(f, num_inputs);
    if (table.count() == 0 || table.count() == table.rows())
        return 0;
    PrimeSet implicates = brute_prime_implicates(f, num_inputs);

    std::vector<std::uint64_t> nonmodels;
    for (std::uint64_t row = 0; row < table.rows(); ++row)
        if (!table.at(row))
            nonmodels.push_back(row);

    std::vector<Words> sets;
    std::vector<std::size_t> weights;
    for (const Prime& c : implicates.primes) {
        Words w((nonmodels.size() + 63) / 64, 0);
        for (std::size_t e = 0; e < nonmodels.size(); ++e) {
            std::uint64_t row = nonmodels[e];
            bool falsified = std::none_of(c.begin(), c.end(), [&](Lit l) {
                return (((row >> l.var().index) & 1u) != 0) != l.negated();
            });
            if (falsified)
                w[e >> 6] |= std::uint64_t{1} << (e & 63);
        }
        sets.push_back(std::move(w));
        weights.push_back(c.size());
    }
    return SetCover(std::move(sets), std::move(weights), nonmodels.size()).solve();
}

namespace {

class Dpll {
public:
    explicit Dpll(const CnfFormula& cnf) : cnf_(cnf), value_(cnf.num_vars(), 0) {}

    bool run(std::span<const Lit> assumptions) {
        for (Lit a : assumptions) {
            if (a.var().index >= value_.size())
                value_.resize(a.var().index + 1, 0);
            int want = a.negated() ? -1 : 1;
            if (value_[a.var().index] == -want)
                return false;
            value_[a.var().index] = want;
        }
        return search();
    }

private:
    int lit_value(Lit l) const {
        int v = value_[l.var().index];
        return l.negated() ? -v : v;
    }

    // Returns false on conflict; records assigned variables in `trail`.
    bool propagate(std::vector<std::uint32_t>& trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Clause& c : cnf_.clauses()) {
                int unassigned = 0;
                Lit last;
                bool satisfied = false;
                for (Lit l : c.lits()) {
                    int v = lit_value(l);
                    if (v > 0) {
                        satisfied = true;
                        break;
                    }
                    if (v == 0) {
                        ++unassigned;
                        last = l;
                    }
                }
                if (satisfied)
                    continue;
                if (unassigned == 0)
                    return false;
                if (unassigned == 1) {
                    value_[last.var().index] = last.negated() ? -1 : 1;
                    trail.push_back(last.var().index);
                    changed = true;
                }
            }
        }
        return true;
    }

    bool search() {
        std::vector<std::uint32_t> trail;
        if (!propagate(trail)) {
            undo(trail);
            return false;
        }
        std::size_t pick = value_.size();
        for (std::size_t v = 0; v < value_.size(); ++v)
            if (value_[v] == 0) {
                pick = v;
                break;
            }
        if (pick == value_.size())
            return true;
        for (int phase : {1, -1}) {
            value_[pick] = phase;
            if (search())
                return true;
        }
        value_[pick] = 0;
        undo(trail);
        return false;
    }

    void undo(const std::vector<std::uint32_t>& trail) {
        for (auto v : trail)
            value_[v] = 0;
    }

    const CnfFormula& cnf_;
    std::vector<int> value_;
};

} // namespace

bool dpll_satisfiable(const CnfFormula& cnf, std::span<const Lit> assumptions) {
    return Dpll(cnf).run(assumptions);
}

std::vector<Lit> brute_min_core(const CnfFormula& cnf, std::span<const Lit> assumptions) {
    if (assumptions.size() > kCoreLimit)
        throw BudgetError("core oracle limited to " + std::to_string(kCoreLimit) + " assumptions");
    const std::size_t n = assumptions.size();
    for (std::size_t k = 0; k <= n; ++k) {
        // Enumerate k-subsets in lexicographic index order.
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i)
            idx[i] = i;
        for (;;) {
            std::vector<Lit> subset;
            for (std::size_t i : idx)
                subset.push_back(assumptions[i]);
            if (!dpll_satisfiable(cnf, subset))
                return subset;
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + i - 1)
                --i;
            if (i == 0)
                break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
    throw ContractError("brute_min_core: the assumptions are consistent with the formula");
}

} // namespace primec::oracle
