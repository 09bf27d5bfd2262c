#include "primec/shrink.hpp"

#include <algorithm>
#include <random>

namespace primec {

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::MultiOrder:
        return "multi-order";
    case Strategy::Random:
        return "random";
    case Strategy::None:
        return "none";
    }
    return "?";
}

Strategy parse_strategy(std::string_view text) {
    if (text == "multi-order")
        return Strategy::MultiOrder;
    if (text == "random")
        return Strategy::Random;
    if (text == "none")
        return Strategy::None;
    throw InputError("unknown strategy '" + std::string(text) + "'");
}

OrderFamily make_orders(std::span<const Lit> seed) {
    if (seed.empty())
        throw ContractError("decision orders need a non-empty seed");
    std::vector<Var> vars;
    for (Lit l : seed)
        vars.push_back(l.var());
    std::sort(vars.begin(), vars.end());
    if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
        throw ContractError("decision order repeats a variable");

    OrderFamily f;
    f.forward.assign(seed.begin(), seed.end());
    f.backward.assign(seed.rbegin(), seed.rend());
    for (std::size_t i = 0; i < seed.size(); ++i)
        (i % 2 == 0 ? f.left : f.right).push_back(seed[i]);
    return f;
}

namespace {

class RandomPolarityScope {
public:
    RandomPolarityScope(Solver& s, std::uint64_t seed) : solver_(s) { solver_.set_random_polarity(seed); }
    ~RandomPolarityScope() { solver_.set_random_polarity(std::nullopt); }
    RandomPolarityScope(const RandomPolarityScope&) = delete;
    RandomPolarityScope& operator=(const RandomPolarityScope&) = delete;

private:
    Solver& solver_;
};

} // namespace

Shrinker::Shrinker(Solver& sigma_phi, ShrinkConfig config)
    : solver_(sigma_phi), config_(config), seed_stream_(config.seed) {}

Core Shrinker::shrink(std::span<const Lit> pi) {
    switch (config_.strategy) {
    case Strategy::MultiOrder:
        return over_approximate(pi);
    case Strategy::Random:
        return random_shrink(pi, config_.random_iterations, seed_stream_());
    case Strategy::None:
        ++stats_.calls;
        stats_.literals_in += pi.size();
        stats_.literals_out += pi.size();
        return Core(pi.begin(), pi.end());
    }
    return Core(pi.begin(), pi.end());
}

std::optional<Core> Shrinker::ordered_solve(std::span<const Lit> order) {
    ++stats_.ordered_solves;
    SolveResult r = solver_.solve(order);
    if (r.is_sat()) {
        if (hooks_.on_solve)
            hooks_.on_solve(order, nullptr);
        return std::nullopt;
    }
    if (hooks_.on_solve)
        hooks_.on_solve(order, &r.failed());
    return r.failed();
}

void Shrinker::set_seed(std::span<const Lit> seed) {
    std::uint32_t max_var = 0;
    for (Lit l : seed)
        max_var = std::max(max_var, l.var().index + 1);
    rank_.assign(std::max<std::size_t>(rank_.size(), max_var), UINT32_MAX);
    std::fill(rank_.begin(), rank_.end(), UINT32_MAX);
    for (std::size_t i = 0; i < seed.size(); ++i)
        rank_[seed[i].var().index] = static_cast<std::uint32_t>(i);
}

Core Shrinker::in_seed_order(std::span<const Lit> lits) const {
    Core out(lits.begin(), lits.end());
    std::sort(out.begin(), out.end(),
              [&](Lit a, Lit b) { return rank_[a.var().index] < rank_[b.var().index]; });
    return out;
}

void Shrinker::notify_core(std::span<const Lit> core) const {
    if (hooks_.on_core)
        hooks_.on_core(core);
}

Core Shrinker::over_approximate(std::span<const Lit> pi) {
    ++stats_.calls;
    stats_.literals_in += pi.size();
    set_seed(pi);
    notify_core(pi);

    auto first = ordered_solve(pi);
    if (!first)
        throw ContractError("over_approximate: the seed is consistent with the formula");
    Core core = in_seed_order(*first);
    notify_core(core);

    if (config_.use_interval && core.size() > 1) {
        core = interval_rec(std::move(core));
        notify_core(core);
    }

    bool last_backward = false;
    for (unsigned pass = 0; pass < config_.iterations && !core.empty(); ++pass) {
        const std::size_t before = core.size();
        Core order = core;
        if (!last_backward)
            std::reverse(order.begin(), order.end());
        auto next = ordered_solve(order);
        if (!next)
            throw ContractError("over_approximate: a core became satisfiable");
        core = in_seed_order(*next);
        last_backward = !last_backward;
        ++stats_.iterative_passes;
        notify_core(core);
        if (hooks_.on_pass)
            hooks_.on_pass(before, core.size());
        if (core.size() == before) {
            ++stats_.fixpoints;
            break;
        }
    }
    stats_.literals_out += core.size();
    return core;
}

Core Shrinker::interval(std::span<const Lit> core, std::span<const Lit> left, std::span<const Lit> right) {
    if (left.size() + right.size() != core.size())
        throw ContractError("interval: orders do not partition the core");
    Core seed;
    for (std::size_t i = 0; i < core.size(); ++i)
        seed.push_back(i % 2 == 0 ? left[i / 2] : right[i / 2]);
    {
        Core a(core.begin(), core.end()), b = seed;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            throw ContractError("interval: orders do not partition the core");
    }
    set_seed(seed);
    if (core.size() > 1 && solver_.solve(core).is_sat())
        throw ContractError("interval: the core is consistent with the formula");
    return interval_rec(seed);
}

// `core` is in seed order; the alternating split is recomputed from it.
Core Shrinker::interval_rec(Core core) {
    if (core.size() <= 1)
        return core;
    OrderFamily orders = make_orders(core);
    if (auto c = ordered_solve(orders.left)) {
        Core next = in_seed_order(*c);
        notify_core(next);
        return interval_rec(std::move(next));
    }
    if (auto c = ordered_solve(orders.right)) {
        Core next = in_seed_order(*c);
        notify_core(next);
        return interval_rec(std::move(next));
    }
    return core;
}

Core Shrinker::random_shrink(std::span<const Lit> pi, unsigned iterations, std::uint64_t seed) {
    ++stats_.calls;
    stats_.literals_in += pi.size();
    set_seed(pi);
    notify_core(pi);
    Core core(pi.begin(), pi.end());
    std::mt19937_64 rng(seed);
    RandomPolarityScope polarity(solver_, seed);
    for (unsigned i = 0; i < iterations; ++i) {
        Core order = core;
        std::shuffle(order.begin(), order.end(), rng);
        auto next = ordered_solve(order);
        if (!next)
            throw ContractError("random_shrink: the seed is consistent with the formula");
        core = in_seed_order(*next);
        notify_core(core);
        if (core.empty())
            break;
    }
    stats_.literals_out += core.size();
    return core;
}

} // namespace primec
