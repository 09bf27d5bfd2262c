#include "primec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace primec {

SolveResult SolveResult::sat(std::vector<bool> model) {
    SolveResult r;
    r.status_ = Status::Sat;
    r.model_ = std::move(model);
    return r;
}

SolveResult SolveResult::unsat(std::vector<Lit> failed) {
    SolveResult r;
    r.status_ = Status::Unsat;
    r.failed_ = std::move(failed);
    return r;
}

bool SolveResult::value(Var v) const {
    if (!is_sat())
        throw ContractError("model queried on an UNSAT result");
    if (v.index >= model_.size())
        throw ContractError("model has no variable " + std::to_string(v.index));
    return model_[v.index];
}

const std::vector<bool>& SolveResult::model() const {
    if (!is_sat())
        throw ContractError("model queried on an UNSAT result");
    return model_;
}

namespace {

// Finite subsequence of the Luby series scaled by powers of y.
double luby(double y, int x) {
    int size = 1, seq = 0;
    for (; size < x + 1; seq++, size = 2 * size + 1) {
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        seq--;
        x = x % size;
    }
    return std::pow(y, seq);
}

} // namespace

Solver::Solver(std::size_t num_vars, SolverOptions options) : options_(std::move(options)) {
    reserve_vars(num_vars);
}

Var Solver::new_var() {
    Var v(static_cast<std::uint32_t>(assigns_.size()));
    assigns_.push_back(LBool::Undef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    polarity_.push_back(true);
    seen_.push_back(0);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v;
}

void Solver::reserve_vars(std::size_t n) {
    while (num_vars() < n)
        new_var();
}

void Solver::set_random_polarity(std::optional<std::uint64_t> seed) {
    if (seed)
        polarity_rng_.emplace(*seed);
    else
        polarity_rng_.reset();
}

void Solver::add_clause(std::span<const Lit> lits) {
    if (decision_level() != 0)
        throw ContractError("clauses can only be added between solves");
    for (Lit l : lits)
        if (l.var().index >= num_vars())
            throw ContractError("clause references unreserved variable " + std::to_string(l.var().index));
#ifdef PRIMEC_CHECKED
    originals_.emplace_back(lits.begin(), lits.end());
#endif
    if (!ok_)
        return;

    std::vector<Lit> ps(lits.begin(), lits.end());
    std::sort(ps.begin(), ps.end());
    std::size_t j = 0;
    Lit prev;
    bool have_prev = false;
    for (Lit l : ps) {
        if (value(l) == LBool::True || (have_prev && l == ~prev))
            return;  // satisfied at level 0 or tautological
        if (value(l) != LBool::False && !(have_prev && l == prev)) {
            ps[j++] = l;
            prev = l;
            have_prev = true;
        }
    }
    ps.resize(j);

    if (ps.empty()) {
        ok_ = false;
    } else if (ps.size() == 1) {
        enqueue(ps[0], kNoReason);
        ok_ = propagate() == kNoReason;
    } else {
        attach(alloc_clause(std::move(ps), false));
    }
}

void Solver::add_cnf(const CnfFormula& cnf) {
    reserve_vars(cnf.num_vars());
    for (const Clause& c : cnf.clauses())
        add_clause(c);
}

Solver::CRef Solver::alloc_clause(std::vector<Lit> lits, bool learnt) {
    CRef cr;
    if (!free_slots_.empty()) {
        cr = free_slots_.back();
        free_slots_.pop_back();
        clauses_[cr] = ClauseRec{std::move(lits), 0.0, learnt, false};
    } else {
        cr = static_cast<CRef>(clauses_.size());
        clauses_.push_back(ClauseRec{std::move(lits), 0.0, learnt, false});
    }
    if (learnt)
        learnts_.push_back(cr);
    return cr;
}

void Solver::attach(CRef cr) {
    const auto& c = clauses_[cr].lits;
    watches_[(~c[0]).code()].push_back(Watcher{cr, c[1]});
    watches_[(~c[1]).code()].push_back(Watcher{cr, c[0]});
}

bool Solver::locked(CRef cr) const {
    const auto& c = clauses_[cr].lits;
    return value(c[0]) == LBool::True && reason_[c[0].var().index] == cr;
}

void Solver::enqueue(Lit l, CRef reason) {
    Var v = l.var();
    assigns_[v.index] = l.negated() ? LBool::False : LBool::True;
    level_[v.index] = decision_level();
    reason_[v.index] = reason;
    trail_.push_back(l);
}

// watches_[p] holds the clauses watching ~p, visited once p becomes true.
Solver::CRef Solver::propagate() {
    CRef confl = kNoReason;
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        Lit false_lit = ~p;
        auto& ws = watches_[p.code()];
        std::size_t i = 0, j = 0;
        const std::size_t n = ws.size();
        ++stats_.propagations;
        while (i < n) {
            Watcher w = ws[i++];
            if (value(w.blocker) == LBool::True) {
                ws[j++] = w;
                continue;
            }
            auto& c = clauses_[w.cref].lits;
            if (c[0] == false_lit)
                std::swap(c[0], c[1]);
            Lit first = c[0];
            Watcher nw{w.cref, first};
            if (first != w.blocker && value(first) == LBool::True) {
                ws[j++] = nw;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) != LBool::False) {
                    c[1] = c[k];
                    c[k] = false_lit;
                    watches_[(~c[1]).code()].push_back(nw);
                    moved = true;
                    break;
                }
            }
            if (moved)
                continue;
            ws[j++] = nw;
            if (value(first) == LBool::False) {
                confl = w.cref;
                qhead_ = trail_.size();
                while (i < n)
                    ws[j++] = ws[i++];
            } else {
                enqueue(first, w.cref);
            }
        }
        ws.resize(j);
    }
    return confl;
}

void Solver::analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel) {
    int path_count = 0;
    std::optional<Lit> p;
    out_learnt.clear();
    out_learnt.emplace_back();  // slot for the asserting literal
    std::size_t index = trail_.size();

    do {
        ClauseRec& c = clauses_[confl];
        if (c.learnt)
            bump_clause(c);
        for (std::size_t j = p ? 1 : 0; j < c.lits.size(); ++j) {
            Lit q = c.lits[j];
            Var v = q.var();
            if (!seen_[v.index] && level(v) > 0) {
                bump_var(v);
                seen_[v.index] = 1;
                if (level(v) >= decision_level())
                    ++path_count;
                else
                    out_learnt.push_back(q);
            }
        }
        do {
            --index;
        } while (!seen_[trail_[index].var().index]);
        p = trail_[index];
        confl = reason_[p->var().index];
        seen_[p->var().index] = 0;
        --path_count;
    } while (path_count > 0);
    out_learnt[0] = ~*p;

    // Drop literals whose reason is already covered by the clause.
    std::vector<Lit> to_clear(out_learnt.begin(), out_learnt.end());
    std::size_t j = 1;
    for (std::size_t i = 1; i < out_learnt.size(); ++i) {
        Var v = out_learnt[i].var();
        CRef r = reason_[v.index];
        bool keep = r == kNoReason;
        if (!keep) {
            const auto& rc = clauses_[r].lits;
            for (std::size_t k = 1; k < rc.size(); ++k) {
                Var u = rc[k].var();
                if (!seen_[u.index] && level(u) > 0) {
                    keep = true;
                    break;
                }
            }
        }
        if (keep)
            out_learnt[j++] = out_learnt[i];
    }
    out_learnt.resize(j);

    if (out_learnt.size() == 1) {
        out_btlevel = 0;
    } else {
        std::size_t max_i = 1;
        for (std::size_t i = 2; i < out_learnt.size(); ++i)
            if (level(out_learnt[i].var()) > level(out_learnt[max_i].var()))
                max_i = i;
        std::swap(out_learnt[1], out_learnt[max_i]);
        out_btlevel = level(out_learnt[1].var());
    }
    for (Lit l : to_clear)
        seen_[l.var().index] = 0;
}

// p is the negation of a falsified assumption. Collects the negations of the
// assumption decisions that imply ~p, plus p itself.
void Solver::analyze_final(Lit p, std::vector<Lit>& out_conflict) {
    out_conflict.clear();
    out_conflict.push_back(p);
    if (decision_level() == 0)
        return;
    seen_[p.var().index] = 1;
    for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[0]);) {
        Var x = trail_[i].var();
        if (!seen_[x.index])
            continue;
        CRef r = reason_[x.index];
        if (r == kNoReason) {
            out_conflict.push_back(~trail_[i]);
        } else {
            const auto& c = clauses_[r].lits;
            for (std::size_t j = 1; j < c.size(); ++j)
                if (level(c[j].var()) > 0)
                    seen_[c[j].var().index] = 1;
        }
        seen_[x.index] = 0;
    }
    seen_[p.var().index] = 0;
}

void Solver::cancel_until(int lvl) {
    if (decision_level() <= lvl)
        return;
    for (std::size_t c = trail_.size(); c-- > static_cast<std::size_t>(trail_lim_[lvl]);) {
        Var x = trail_[c].var();
        assigns_[x.index] = LBool::Undef;
        polarity_[x.index] = trail_[c].negated();
        if (!heap_contains(x))
            heap_insert(x);
    }
    qhead_ = static_cast<std::size_t>(trail_lim_[lvl]);
    trail_.resize(qhead_);
    trail_lim_.resize(lvl);
}

std::optional<Lit> Solver::pick_branch_lit() {
    while (!heap_.empty()) {
        Var v = heap_pop();
        if (assigns_[v.index] != LBool::Undef)
            continue;
        bool neg = polarity_rng_ ? ((*polarity_rng_)() & 1u) != 0 : static_cast<bool>(polarity_[v.index]);
        return Lit(v, neg);
    }
    return std::nullopt;
}

void Solver::bump_var(Var v) {
    if ((activity_[v.index] += var_inc_) > 1e100)
        rescale_var_activity();
    if (heap_contains(v))
        heap_up(heap_pos_[v.index]);
}

void Solver::rescale_var_activity() {
    for (double& a : activity_)
        a *= 1e-100;
    var_inc_ *= 1e-100;
}

void Solver::bump_clause(ClauseRec& c) {
    if ((c.activity += cla_inc_) > 1e20) {
        for (CRef cr : learnts_)
            clauses_[cr].activity *= 1e-20;
        cla_inc_ *= 1e-20;
    }
}

void Solver::reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
        const auto& ca = clauses_[a];
        const auto& cb = clauses_[b];
        if ((ca.lits.size() > 2) != (cb.lits.size() > 2))
            return ca.lits.size() > 2;
        return ca.activity < cb.activity;
    });
    double extra_lim = cla_inc_ / static_cast<double>(std::max<std::size_t>(learnts_.size(), 1));
    std::vector<CRef> kept;
    bool removed_any = false;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
        CRef cr = learnts_[i];
        ClauseRec& c = clauses_[cr];
        if (c.lits.size() > 2 && !locked(cr) && (i < learnts_.size() / 2 || c.activity < extra_lim)) {
            c.deleted = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
            free_slots_.push_back(cr);
            removed_any = true;
        } else {
            kept.push_back(cr);
        }
    }
    learnts_ = std::move(kept);
    if (!removed_any)
        return;
    for (auto& ws : watches_)
        std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
    // Deleted slots are reused, so their flag only has to hold until the
    // watch lists are purged.
    for (CRef cr : free_slots_)
        clauses_[cr].deleted = false;
}

void Solver::check_deadline() {
    if (!deadline_ || (++deadline_ticks_ & 63u) != 0)
        return;
    if (std::chrono::steady_clock::now() > *deadline_) {
        cancel_until(0);
        throw TimeoutError("solver deadline exceeded");
    }
}

Solver::LBool Solver::search(int conflict_budget, std::span<const Lit> assumptions,
                             std::vector<Lit>& final_conflict) {
    int conflicts_here = 0;
    std::vector<Lit> learnt;
    const int assumption_levels = static_cast<int>(assumptions.size());

    for (;;) {
        CRef confl = propagate();
        if (confl != kNoReason) {
            ++stats_.conflicts;
            ++conflicts_here;
            check_deadline();
            if (decision_level() == 0)
                return LBool::False;
            int bt_level = 0;
            analyze(confl, learnt, bt_level);
            cancel_until(bt_level);
            if (learnt.size() == 1) {
                enqueue(learnt[0], kNoReason);
            } else {
                CRef cr = alloc_clause(learnt, true);
                attach(cr);
                bump_clause(clauses_[cr]);
                enqueue(learnt[0], cr);
            }
            ++stats_.learnts;
            var_inc_ /= options_.var_decay;
            cla_inc_ /= options_.clause_decay;
            continue;
        }

        if (conflict_budget >= 0 && conflicts_here >= conflict_budget) {
            // Restarts keep the assumption prefix so its order is preserved.
            cancel_until(std::min(decision_level(), assumption_levels));
            return LBool::Undef;
        }
        if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_)
            reduce_db();

        std::optional<Lit> next;
        while (decision_level() < assumption_levels) {
            Lit p = assumptions[decision_level()];
            LBool v = value(p);
            if (v == LBool::True) {
                trail_lim_.push_back(static_cast<int>(trail_.size()));
            } else if (v == LBool::False) {
                analyze_final(~p, final_conflict);
                return LBool::False;
            } else {
                next = p;
                ++stats_.assumption_decisions;
                last_assumption_decisions_.push_back(p);
                break;
            }
        }
        if (!next) {
            check_deadline();
            next = pick_branch_lit();
            if (!next)
                return LBool::True;
            ++stats_.decisions;
        }
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        enqueue(*next, kNoReason);
    }
}

SolveResult Solver::solve(std::span<const Lit> assumptions) {
    {
        std::vector<char> used(num_vars(), 0);
        for (Lit a : assumptions) {
            if (a.var().index >= num_vars())
                throw ContractError("assumption references unreserved variable " + std::to_string(a.var().index));
            if (used[a.var().index]++)
                throw ContractError("assumption variable " + std::to_string(a.var().index) + " repeated");
        }
    }
    ++stats_.solves;
    last_assumption_decisions_.clear();

    std::vector<Lit> final_conflict;
    LBool status = LBool::Undef;
    if (!ok_) {
        status = LBool::False;
    } else {
        max_learnts_ = std::max(1000.0, static_cast<double>(clauses_.size() - learnts_.size()) / 3.0);
        for (int restarts = 0; status == LBool::Undef; ++restarts) {
            int budget = static_cast<int>(luby(2.0, restarts) * options_.restart_first);
            status = search(budget, assumptions, final_conflict);
            if (status == LBool::Undef) {
                ++stats_.restarts;
                max_learnts_ *= 1.1;
            }
        }
    }

    SolveResult result;
    if (status == LBool::True) {
        std::vector<bool> model(num_vars());
        for (std::size_t i = 0; i < num_vars(); ++i)
            model[i] = assigns_[i] == LBool::True;
#ifdef PRIMEC_CHECKED
        for (const auto& c : originals_) {
            bool sat = std::any_of(c.begin(), c.end(), [&](Lit l) { return model[l.var().index] != l.negated(); });
            if (!sat)
                throw ContractError("solver model violates an input clause");
        }
        for (Lit a : assumptions)
            if (model[a.var().index] == a.negated())
                throw ContractError("solver model violates an assumption");
#endif
        result = SolveResult::sat(std::move(model));
    } else {
        // No final conflict means a level-0 conflict: the database itself is UNSAT.
        if (final_conflict.empty())
            ok_ = false;
        std::vector<char> in_core(num_vars(), 0);
        for (Lit l : final_conflict)
            in_core[l.var().index] = 1;
        std::vector<Lit> failed;
        for (Lit a : assumptions)
            if (in_core[a.var().index])
                failed.push_back(a);
        result = SolveResult::unsat(std::move(failed));
    }
    cancel_until(0);

    if (options_.trace) {
        *options_.trace << "{\"solver\":\"" << options_.trace_name << "\",\"solves\":" << stats_.solves
                        << ",\"status\":\"" << (result.is_sat() ? "SAT" : "UNSAT") << "\",\"decisions\":"
                        << stats_.decisions << ",\"assumption_decisions\":" << stats_.assumption_decisions
                        << ",\"propagations\":" << stats_.propagations << ",\"conflicts\":" << stats_.conflicts
                        << "}\n";
    }
    return result;
}

void Solver::heap_insert(Var v) {
    heap_pos_[v.index] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v.index]);
}

Var Solver::heap_pop() {
    Var top = heap_.front();
    heap_.front() = heap_.back();
    heap_pos_[heap_.front().index] = 0;
    heap_pos_[top.index] = -1;
    heap_.pop_back();
    if (!heap_.empty())
        heap_down(0);
    return top;
}

// Ties break toward the smaller variable id, keeping decisions deterministic.
void Solver::heap_up(int i) {
    Var v = heap_[i];
    auto before = [&](Var a, Var b) {
        return activity_[a.index] > activity_[b.index] ||
               (activity_[a.index] == activity_[b.index] && a.index < b.index);
    };
    while (i > 0) {
        int parent = (i - 1) >> 1;
        if (!before(v, heap_[parent]))
            break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i].index] = i;
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v.index] = i;
}

void Solver::heap_down(int i) {
    Var v = heap_[i];
    auto before = [&](Var a, Var b) {
        return activity_[a.index] > activity_[b.index] ||
               (activity_[a.index] == activity_[b.index] && a.index < b.index);
    };
    const int n = static_cast<int>(heap_.size());
    for (;;) {
        int child = 2 * i + 1;
        if (child >= n)
            break;
        if (child + 1 < n && before(heap_[child + 1], heap_[child]))
            ++child;
        if (!before(heap_[child], v))
            break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i].index] = i;
        i = child;
    }
    heap_[i] = v;
    heap_pos_[v.index] = i;
}

} // namespace primec
