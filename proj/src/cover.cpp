#include "primec/cover.hpp"

namespace primec {

std::size_t Cover::literal_count() const {
    std::size_t n = 0;
    for (const Clause& c : clauses)
        n += c.size();
    return n;
}

CoverResult compile_cover(const CnfFormula& sigma_phi, const CnfFormula& sigma_not_phi, std::size_t num_inputs,
                          const CoverOptions& options) {
    if (sigma_phi.num_inputs() != num_inputs || sigma_not_phi.num_inputs() != num_inputs)
        throw ContractError("compile_cover: encodings disagree on the input prefix");

    CoverResult result;
    Solver sigma(0, SolverOptions{.trace = options.trace, .trace_name = "sigma_phi"});
    sigma.add_cnf(sigma_phi);
    sigma.reserve_vars(num_inputs);
    sigma.set_deadline(options.deadline);

    ++result.stats.solver_calls;
    if (!sigma.solve().is_sat()) {
        result.cover.clauses.emplace_back();
        return result;
    }

    Solver r(0, SolverOptions{.trace = options.trace, .trace_name = "R"});
    r.add_cnf(sigma_not_phi);
    r.reserve_vars(num_inputs);
    r.set_deadline(options.deadline);

    Shrinker shrinker(sigma, options.shrink);
    shrinker.set_hooks(options.shrink_hooks);

    std::vector<Lit> pi;
    for (;;) {
        if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
            throw TimeoutError("cover compilation deadline exceeded");
        ++result.stats.solver_calls;
        SolveResult model = r.solve();
        if (!model.is_sat())
            break;
        ++result.stats.iterations;

        // Project onto the inputs: pi is a model of the negation.
        pi.clear();
        for (std::uint32_t x = 0; x < num_inputs; ++x)
            pi.emplace_back(Var(x), !model.value(Var(x)));

        Core core = shrinker.shrink(pi);

        std::vector<Lit> negated;
        negated.reserve(core.size());
        for (Lit l : core)
            negated.push_back(~l);
        auto clause = Clause::make(std::move(negated));
        if (!clause)
            throw ContractError("compile_cover: core repeats a variable");
#ifdef PRIMEC_CHECKED
        for (Lit l : clause->lits())
            if (model.value(l.var()) != l.negated())
                throw ContractError("compile_cover: new clause is not falsified by its model");
        if (sigma.solve(core).is_sat())
            throw ContractError("compile_cover: new clause is not implied by the formula");
#endif
        r.add_clause(*clause);
        result.cover.clauses.push_back(std::move(*clause));

        if (options.on_iteration)
            options.on_iteration(CoverRecord{pi.size(), core.size(), result.cover.literal_count()});
    }

    result.stats.shrink = shrinker.stats();
    result.stats.solver_calls += shrinker.stats().ordered_solves;
    return result;
}

double cover_cost(const Cover& cover, std::size_t prime_cover_literals) {
    if (prime_cover_literals == 0)
        throw ContractError("cover_cost: prime cover has no literals");
    return static_cast<double>(cover.literal_count()) / static_cast<double>(prime_cover_literals);
}

} // namespace primec
