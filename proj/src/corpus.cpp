#include "primec/app.hpp"

#include <fstream>
#include <random>

namespace primec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Draws with plain modulo so a seed produces the same corpus on every
// standard library.
class FormulaGenerator {
public:
    FormulaGenerator(std::uint64_t seed, std::size_t max_vars) : rng_(seed), max_vars_(max_vars) {}

    // Balanced: every leaf sits at the same depth. Connectives alternate by
    // level; random ones at every node collapse deep trees to constants.
    Formula node(std::size_t depth, bool conjunction) {
        if (depth == 0) {
            Formula leaf = Formula::variable(Var(static_cast<std::uint32_t>(below(max_vars_))));
            return chance(1, 2) ? Formula::negation(leaf) : leaf;
        }
        std::size_t arity = chance(1, 5) ? 3 : 2;
        std::vector<Formula> ops;
        for (std::size_t i = 0; i < arity; ++i)
            ops.push_back(node(depth - 1, !conjunction));
        Formula f = conjunction ? Formula::conjunction(std::move(ops)) : Formula::disjunction(std::move(ops));
        return chance(1, 5) ? Formula::negation(f) : f;
    }

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

    std::mt19937_64 rng_;
    std::size_t max_vars_;
};

} // namespace

std::string random_formula_text(std::uint64_t seed, std::size_t max_vars, std::size_t max_depth) {
    if (max_vars == 0)
        throw InputError("random formulas need at least one variable");
    VarTable names;
    for (std::size_t i = 0; i < max_vars; ++i)
        names.intern("x" + std::to_string(i + 1));
    FormulaGenerator gen(seed, max_vars);
    // the depth varies per formula so a corpus mixes sizes instead of
    // collapsing into mostly valid or unsatisfiable deep trees
    std::size_t depth = max_depth == 0 ? 0 : 1 + gen.below(max_depth);
    bool conjunction = gen.chance(1, 2);
    return to_string(gen.node(depth, conjunction), names);
}

std::vector<std::filesystem::path> gen_corpus(const std::filesystem::path& dir, std::size_t n_cases,
                                              std::size_t max_vars, std::size_t max_depth, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> files;
    for (std::size_t i = 0; i < n_cases; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "case_%03zu.bf", i);
        std::filesystem::path path = dir / name;
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw InputError("cannot write " + path.string());
        os << "# generated: seed " << seed << ", case " << i << ", max-vars " << max_vars << ", max-depth "
           << max_depth << '\n';
        os << random_formula_text(splitmix64(splitmix64(seed) + i), max_vars, max_depth) << '\n';
        files.push_back(std::move(path));
    }
    return files;
}

} // namespace primec
