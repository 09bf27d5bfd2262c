#include "primec/enumerate.hpp"

#include <algorithm>
#include <ostream>

namespace primec {

std::string_view to_string(Mode m) { return m == Mode::Implicants ? "implicants" : "implicates"; }

Mode parse_mode(std::string_view text) {
    if (text == "implicants")
        return Mode::Implicants;
    if (text == "implicates")
        return Mode::Implicates;
    throw InputError("unknown mode '" + std::string(text) + "'");
}

std::vector<Var> minimize_model(std::span<const Var> rails, std::span<const Clause> cover_images,
                                const DualRailMap& map) {
    std::vector<std::uint32_t> slot(map.num_vars(), UINT32_MAX);
    for (std::size_t i = 0; i < rails.size(); ++i) {
        Var d = rails[i];
        if (!map.is_rail(d))
            throw ContractError("minimize_model: not a rail variable");
        slot[d.index] = static_cast<std::uint32_t>(i);
    }
    for (Var d : rails) {
        Lit l = map.decode(d);
        if (slot[map.rail(~l).index] != UINT32_MAX)
            throw ContractError("minimize_model: both rails of one input are set");
    }

    // hits[c] = members of `rails` in clause c; occurs[i] = clauses of rails[i]
    std::vector<std::uint32_t> hits(cover_images.size(), 0);
    std::vector<std::vector<std::uint32_t>> occurs(rails.size());
    for (std::size_t c = 0; c < cover_images.size(); ++c) {
        for (Lit l : cover_images[c].lits()) {
            if (l.negated() || l.var().index >= slot.size())
                throw ContractError("minimize_model: cover image is not an all-positive rail clause");
            if (std::uint32_t i = slot[l.var().index]; i != UINT32_MAX) {
                ++hits[c];
                occurs[i].push_back(static_cast<std::uint32_t>(c));
            }
        }
        if (hits[c] == 0)
            throw ContractError("minimize_model: the rail set misses a cover clause");
    }

    std::vector<bool> keep(rails.size(), true);
    for (std::size_t i = rails.size(); i-- > 0;) {
        bool needed = std::any_of(occurs[i].begin(), occurs[i].end(), [&](std::uint32_t c) { return hits[c] == 1; });
        if (needed)
            continue;
        keep[i] = false;
        for (std::uint32_t c : occurs[i])
            --hits[c];
    }
    std::vector<Var> out;
    for (std::size_t i = 0; i < rails.size(); ++i)
        if (keep[i])
            out.push_back(rails[i]);
    return out;
}

PrimeSet compile_all_implicants(const Cover& cover, std::size_t num_inputs,
                                std::optional<std::chrono::steady_clock::time_point> deadline, std::ostream* trace) {
    PrimeSet out;
    out.kind = Mode::Implicants;

    DualRailMap map(num_inputs);
    CnfFormula h = dual_rail(cover.clauses, map);
    std::span<const Clause> images = h.clauses().first(cover.clauses.size());

    Solver solver(0, SolverOptions{.trace = trace, .trace_name = "H"});
    solver.add_cnf(h);
    solver.reserve_vars(map.num_vars());
    solver.set_deadline(deadline);

    std::vector<Var> rails;
    for (;;) {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw TimeoutError("enumeration deadline exceeded");
        ++out.stats.solver_calls;
        SolveResult r = solver.solve();
        if (!r.is_sat())
            break;
        rails.clear();
        for (std::size_t d = num_inputs; d < map.num_vars(); ++d)
            if (r.model()[d])
                rails.emplace_back(static_cast<std::uint32_t>(d));

        std::vector<Var> minimal = minimize_model(rails, images, map);

        Prime term;
        std::vector<Lit> block;
        for (Var d : minimal) {
            term.push_back(map.decode(d));
            block.push_back(Lit::neg(d));
        }
        std::sort(term.begin(), term.end());
        out.primes.push_back(std::move(term));
        solver.add_clause(block);
    }
    std::sort(out.primes.begin(), out.primes.end());
    return out;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

#ifdef PRIMEC_CHECKED
// Every term must contradict the negation, and lose that property when any
// single literal is dropped.
void check_primes(const PrimeSet& set, const CnfFormula& sigma_not) {
    Solver s;
    s.add_cnf(sigma_not);
    for (const Prime& t : set.primes) {
        s.reserve_vars(t.empty() ? 0 : t.back().var().index + 1);
        if (s.solve(t).is_sat())
            throw ContractError("emitted term is not an implicant");
        for (std::size_t i = 0; i < t.size(); ++i) {
            Prime smaller = t;
            smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
            if (!s.solve(smaller).is_sat())
                throw ContractError("emitted term is not prime");
        }
    }
}
#endif

} // namespace

CompileResult compile(const Formula& f, std::size_t num_inputs, const CompileOptions& options) {
    if (var_span(f) > num_inputs)
        throw ContractError("compile: formula mentions a variable outside the inputs");
    Formula target = options.mode == Mode::Implicants ? f : negate(f);
    TseitinPair enc = tseitin_pair(target, num_inputs);

    CompileResult result;
    auto start = std::chrono::steady_clock::now();
    CoverOptions cover_opts;
    cover_opts.shrink = options.shrink;
    cover_opts.shrink_hooks = options.shrink_hooks;
    cover_opts.deadline = options.deadline;
    cover_opts.trace = options.trace;
    CoverResult cr = compile_cover(enc.positive, enc.negative, num_inputs, cover_opts);
    result.cover = std::move(cr.cover);
    result.stats.cover = cr.stats;
    result.stats.phase1_ms = elapsed_ms(start);

    start = std::chrono::steady_clock::now();
    PrimeSet implicants = compile_all_implicants(result.cover, num_inputs, options.deadline, options.trace);
    result.stats.enumeration = implicants.stats;
    result.stats.phase2_ms = elapsed_ms(start);
#ifdef PRIMEC_CHECKED
    check_primes(implicants, enc.negative);
#endif

    if (options.mode == Mode::Implicants) {
        result.primes = std::move(implicants);
    } else {
        PrimeSet clauses;
        clauses.kind = Mode::Implicates;
        clauses.stats = implicants.stats;
        for (Prime& t : implicants.primes) {
            for (Lit& l : t)
                l = ~l;
            std::sort(t.begin(), t.end());
            clauses.primes.push_back(std::move(t));
        }
        std::sort(clauses.primes.begin(), clauses.primes.end());
        result.primes = std::move(clauses);
    }
    return result;
}

PrimeSet compile_all_implicates(const Formula& f, std::size_t num_inputs, const ShrinkConfig& config) {
    CompileOptions opts;
    opts.mode = Mode::Implicates;
    opts.shrink = config;
    return compile(f, num_inputs, opts).primes;
}

std::string format_prime(const Prime& prime, Mode kind, const VarTable& vars) {
    if (prime.empty())
        return kind == Mode::Implicants ? "TRUE" : "FALSE";
    const char* sep = kind == Mode::Implicants ? " & " : " | ";
    std::string out;
    for (std::size_t i = 0; i < prime.size(); ++i) {
        if (i)
            out += sep;
        if (prime[i].negated())
            out += '!';
        out += vars.name(prime[i].var());
    }
    return out;
}

void write_primes(std::ostream& os, const PrimeSet& set, const VarTable& vars) {
    for (const Prime& p : set.primes)
        os << format_prime(p, set.kind, vars) << '\n';
}

} // namespace primec
