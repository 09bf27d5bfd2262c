#include "helpers.hpp"

#include "primec/app.hpp"
#include "primec/enumerate.hpp"
#include "primec/oracle.hpp"

#include <doctest.h>

#include <sstream>

using namespace primec;
using namespace primec::test;

TEST_CASE("minimize_model examples") {
    DualRailMap map(3);
    Var pa = map.positive(var('a')), pb = map.positive(var('b')), pc = map.positive(var('c'));
    Var na = map.negative(var('a'));
    std::vector<Clause> cover{clause({pos('a'), pos('c')}), clause({neg('a'), pos('b')})};
    CnfFormula h = dual_rail(cover, map);
    auto images = h.clauses().first(2);

    CHECK(minimize_model(std::vector<Var>{pa, pb, pc}, images, map) == std::vector<Var>{pa, pb});
    CHECK(minimize_model(std::vector<Var>{pa, pb}, images, map) == std::vector<Var>{pa, pb});

    std::vector<Clause> unit_cover{clause({pos('a')})};
    CnfFormula hu = dual_rail(unit_cover, map);
    CHECK(minimize_model(std::vector<Var>{pa}, hu.clauses().first(1), map) == std::vector<Var>{pa});

    CHECK_THROWS_AS(minimize_model(std::vector<Var>{pa, na}, images, map), ContractError);
    CHECK_THROWS_AS(minimize_model(std::vector<Var>{pb}, images, map), ContractError);
    CHECK_THROWS_AS(minimize_model(std::vector<Var>{var('a')}, images, map), ContractError);
}

TEST_CASE("primes of the mux formula") {
    ParsedFormula p = parse_over(kMux, 3);
    Cover cover{{clause({pos('a'), pos('c')}), clause({neg('a'), pos('b')})}};
    PrimeSet implicants = compile_all_implicants(cover, 3);
    CHECK(implicants.primes == std::vector<Prime>{{pos('a'), pos('b')}, {neg('a'), pos('c')}, {pos('b'), pos('c')}});
    CHECK(implicants.primes == oracle::brute_prime_implicants(p.formula, 3).primes);

    PrimeSet implicates = compile_all_implicates(p.formula, 3);
    CHECK(implicates.kind == Mode::Implicates);
    CHECK(implicates.primes == std::vector<Prime>{{pos('a'), pos('c')}, {neg('a'), pos('b')}, {pos('b'), pos('c')}});
}

TEST_CASE("degenerate prime sets") {
    PrimeSet taut = compile_all_implicants(Cover{}, 2);
    CHECK(taut.primes == std::vector<Prime>{Prime{}});
    Cover contradiction{{Clause{}}};
    CHECK(compile_all_implicants(contradiction, 2).primes.empty());

    ParsedFormula a = parse("a");
    CHECK(compile_all_implicates(a.formula, 1).primes == std::vector<Prime>{{pos('a')}});
    ParsedFormula unsat = parse("a & !a");
    CHECK(compile_all_implicates(unsat.formula, 1).primes == std::vector<Prime>{Prime{}});
    ParsedFormula taut_f = parse("a | !a");
    CHECK(compile_all_implicates(taut_f.formula, 1).primes.empty());
}

TEST_CASE("formatting") {
    VarTable vars;
    vars.intern("a");
    vars.intern("b");
    CHECK(format_prime({pos('a'), neg('b')}, Mode::Implicants, vars) == "a & !b");
    CHECK(format_prime({pos('a'), neg('b')}, Mode::Implicates, vars) == "a | !b");
    CHECK(format_prime({}, Mode::Implicants, vars) == "TRUE");
    CHECK(format_prime({}, Mode::Implicates, vars) == "FALSE");
    CHECK(parse_mode("implicates") == Mode::Implicates);
    CHECK_THROWS_AS(parse_mode("primes"), InputError);
}

TEST_CASE("enumeration matches the oracle on random formulas in both modes") {
    for (std::uint64_t seed = 500; seed < 600; ++seed) {
        ParsedFormula p = parse(random_formula_text(seed, 8, 5));
        std::size_t n = p.vars.size();
        for (Mode mode : {Mode::Implicants, Mode::Implicates}) {
            CompileOptions opts;
            opts.mode = mode;
            CompileResult r = compile(p.formula, n, opts);
            PrimeSet expected = mode == Mode::Implicants ? oracle::brute_prime_implicants(p.formula, n)
                                                         : oracle::brute_prime_implicates(p.formula, n);
            CHECK_MESSAGE(r.primes.primes == expected.primes, to_string(p.formula, p.vars));
            CHECK(r.stats.solver_calls() == r.stats.cover.solver_calls + r.primes.size() + 1);
        }
    }
}

TEST_CASE("compile rejects formulas wider than the inputs") {
    ParsedFormula p = parse("a & b");
    CHECK_THROWS_AS(compile(p.formula, 1), ContractError);
}
