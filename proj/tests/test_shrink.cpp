#include "helpers.hpp"

#include "primec/app.hpp"
#include "primec/oracle.hpp"
#include "primec/shrink.hpp"

#include <doctest.h>

#include <algorithm>

using namespace primec;
using namespace primec::test;

namespace {

ShrinkConfig multi_order(unsigned iterations) {
    ShrinkConfig c;
    c.iterations = iterations;
    return c;
}

bool subset_of(std::span<const Lit> small, std::span<const Lit> big) {
    return std::all_of(small.begin(), small.end(),
                       [&](Lit l) { return std::find(big.begin(), big.end(), l) != big.end(); });
}

} // namespace

TEST_CASE("make_orders splits alternately") {
    OrderFamily f = make_orders(std::vector<Lit>{pos('a'), pos('b'), pos('c')});
    CHECK(f.forward == std::vector<Lit>{pos('a'), pos('b'), pos('c')});
    CHECK(f.backward == std::vector<Lit>{pos('c'), pos('b'), pos('a')});
    CHECK(f.left == std::vector<Lit>{pos('a'), pos('c')});
    CHECK(f.right == std::vector<Lit>{pos('b')});

    OrderFamily one = make_orders(std::vector<Lit>{pos('a')});
    CHECK(one.forward == one.backward);
    CHECK(one.left == std::vector<Lit>{pos('a')});
    CHECK(one.right.empty());

    OrderFamily two = make_orders(std::vector<Lit>{pos('a'), neg('b')});
    CHECK(two.left == std::vector<Lit>{pos('a')});
    CHECK(two.right == std::vector<Lit>{neg('b')});

    CHECK_THROWS_AS(make_orders(std::vector<Lit>{}), ContractError);
    CHECK_THROWS_AS(make_orders(std::vector<Lit>{pos('a'), neg('a')}), ContractError);
}

TEST_CASE("strategy names") {
    CHECK(parse_strategy("multi-order") == Strategy::MultiOrder);
    CHECK(parse_strategy("random") == Strategy::Random);
    CHECK(parse_strategy("none") == Strategy::None);
    CHECK(to_string(Strategy::Random) == "random");
    CHECK_THROWS_AS(parse_strategy("greedy"), InputError);
}

TEST_CASE("a mux counter-model shrinks to !a & !c") {
    ParsedFormula p = parse_over(kMux, 3);
    TseitinPair enc = tseitin_pair(p.formula, 3);
    Solver s;
    s.add_cnf(enc.positive);
    Shrinker shrinker(s, multi_order(1));
    Core core = shrinker.over_approximate(std::vector<Lit>{neg('a'), pos('b'), neg('c')});
    CHECK(core == Core{neg('a'), neg('c')});
}

TEST_CASE("the order-sensitive CNF needs the iterative phase to reach the minimum core") {
    CnfFormula sigma = order_sensitive_cnf();
    std::vector<Lit> seed{pos('a'), pos('b'), pos('c')};
    Core minimum = oracle::brute_min_core(sigma, seed);
    CHECK(minimum == Core{pos('b'), pos('c')});

    Solver s;
    s.add_cnf(sigma);
    Shrinker zero(s, multi_order(0));
    CHECK(zero.over_approximate(seed) == Core{pos('a'), pos('b'), pos('c')});

    Shrinker one(s, multi_order(1));
    Core core = one.over_approximate(seed);
    CHECK(core == minimum);
    CHECK(one.stats().iterative_passes >= 1);

    CHECK_THROWS_AS(one.over_approximate(std::vector<Lit>{pos('a'), pos('b')}), ContractError);
}

TEST_CASE("interval examples") {
    CnfFormula sigma = order_sensitive_cnf();
    Solver s;
    s.add_cnf(sigma);
    Shrinker shrinker(s, {});
    Core all{pos('a'), pos('b'), pos('c')};
    CHECK(shrinker.interval(all, std::vector<Lit>{pos('a'), pos('c')}, std::vector<Lit>{pos('b')}) == all);
    CHECK_THROWS_AS(shrinker.interval(all, std::vector<Lit>{pos('a')}, std::vector<Lit>{pos('b')}), ContractError);

    CnfFormula unit(2);
    unit.add_clause({neg('a')});
    Solver u;
    u.add_cnf(unit);
    Shrinker us(u, {});
    CHECK(us.interval(Core{pos('a'), pos('b')}, std::vector<Lit>{pos('a')}, std::vector<Lit>{pos('b')}) ==
          Core{pos('a')});
    CHECK(us.interval(Core{pos('a')}, std::vector<Lit>{pos('a')}, std::vector<Lit>{}) == Core{pos('a')});
}

TEST_CASE("random shrink") {
    CnfFormula sigma = order_sensitive_cnf();
    Solver s;
    s.add_cnf(sigma);
    Shrinker shrinker(s, {});
    std::vector<Lit> seed{pos('a'), pos('b'), pos('c')};
    CHECK(shrinker.random_shrink(seed, 0, 1) == Core(seed));
    Core core = shrinker.random_shrink(seed, 11, 42);
    CHECK(core.size() <= 3);
    CHECK(subset_of(core, seed));
    CHECK_FALSE(oracle::dpll_satisfiable(sigma, core));

    Solver s2;
    s2.add_cnf(sigma);
    Shrinker again(s2, {});
    CHECK(again.random_shrink(seed, 11, 42) == core);
}

TEST_CASE("strategy none returns the seed") {
    Solver s;
    s.add_cnf(order_sensitive_cnf());
    ShrinkConfig c;
    c.strategy = Strategy::None;
    Shrinker shrinker(s, c);
    std::vector<Lit> seed{pos('a'), pos('b'), pos('c')};
    CHECK(shrinker.shrink(seed) == Core(seed));
}

TEST_CASE("shrink invariants on random formulas") {
    std::size_t checked = 0;
    for (std::uint64_t fs = 1; fs <= 40; ++fs) {
        ParsedFormula p = parse(random_formula_text(fs, 6, 4));
        std::size_t n = p.vars.size();
        TseitinPair enc = tseitin_pair(p.formula, n);
        for (Strategy strategy : {Strategy::MultiOrder, Strategy::Random}) {
            for (unsigned iterations : {0u, 1u, 3u}) {
                Solver s;
                s.add_cnf(enc.positive);
                ShrinkConfig cfg;
                cfg.strategy = strategy;
                cfg.iterations = iterations;
                Shrinker shrinker(s, cfg);
                std::size_t violations = 0;
                ShrinkHooks hooks;
                hooks.on_solve = [&](std::span<const Lit> assumptions, const std::vector<Lit>* core) {
                    if (core && !subset_of(*core, assumptions))
                        ++violations;
                };
                hooks.on_pass = [&](std::size_t before, std::size_t after) {
                    if (after > before)
                        ++violations;
                };
                shrinker.set_hooks(hooks);
                for (std::uint64_t row = 0; row < (std::uint64_t{1} << n); ++row) {
                    std::vector<bool> a(n);
                    for (std::size_t i = 0; i < n; ++i)
                        a[i] = (row >> i) & 1u;
                    if (evaluate(p.formula, a))
                        continue;
                    std::vector<Lit> seed;
                    for (std::size_t i = 0; i < n; ++i)
                        seed.push_back(a[i] ? Lit::pos(Var(static_cast<std::uint32_t>(i)))
                                            : Lit::neg(Var(static_cast<std::uint32_t>(i))));
                    Core core = shrinker.shrink(seed);
                    CHECK(subset_of(core, seed));
                    CHECK_FALSE(oracle::dpll_satisfiable(enc.positive, core));
                    ++checked;
                }
                CHECK(violations == 0);
            }
        }
    }
    CHECK(checked > 100);
}
