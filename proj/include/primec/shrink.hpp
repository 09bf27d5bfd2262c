#pragma once

#include "primec/solver.hpp"
#include "primec/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace primec {

/// An ordered list of input literals that is inconsistent with the clause
/// database it was extracted against.
using Core = std::vector<Lit>;

enum class Strategy { MultiOrder, Random, None };

std::string_view to_string(Strategy s);
/// Accepts "multi-order", "random" and "none"; throws InputError otherwise.
Strategy parse_strategy(std::string_view text);

struct ShrinkConfig {
    Strategy strategy = Strategy::MultiOrder;
    /// Bound on iterative passes after the basic phase (0it, 1it, 2it, ...).
    unsigned iterations = 1;
    /// Shuffled solves performed by the random baseline.
    unsigned random_iterations = 11;
    std::uint64_t seed = 0;
    /// Run the interval split in the basic phase.
    bool use_interval = true;
};

/// Decision orders derived from a seed order. `left` takes seed elements
/// 1, 3, 5, ... and `right` takes 2, 4, ...; both keep seed order.
struct OrderFamily {
    std::vector<Lit> forward;
    std::vector<Lit> left;
    std::vector<Lit> right;
    std::vector<Lit> backward;
};

/// Throws ContractError on an empty or variable-repeating seed.
OrderFamily make_orders(std::span<const Lit> seed);

struct ShrinkStats {
    std::uint64_t calls = 0;
    std::uint64_t ordered_solves = 0;
    std::uint64_t iterative_passes = 0;
    /// over_approximate calls that stopped because a pass left the size unchanged.
    std::uint64_t fixpoints = 0;
    std::uint64_t literals_in = 0;
    std::uint64_t literals_out = 0;
};

/// Observation points for tests and tracing.
struct ShrinkHooks {
    /// Every ordered solve: the assumptions in solve order, and the failed
    /// set in that order (nullptr when the solve was SAT).
    std::function<void(std::span<const Lit> assumptions, const std::vector<Lit>* core)> on_solve;
    /// The current core after each step of one shrink call, starting with
    /// its input.
    std::function<void(std::span<const Lit> core)> on_core;
    /// Size before and after each iterative pass.
    std::function<void(std::size_t before, std::size_t after)> on_pass;
};

/// Drives ordered solves against one solver holding Sigma_phi. Cores are
/// always reported in the seed order of the current call.
class Shrinker {
public:
    Shrinker(Solver& sigma_phi, ShrinkConfig config);

    const ShrinkConfig& config() const { return config_; }
    const ShrinkStats& stats() const { return stats_; }
    void set_hooks(ShrinkHooks hooks) { hooks_ = std::move(hooks); }

    /// Shrinks according to the configured strategy.
    Core shrink(std::span<const Lit> pi);

    /// Basic phase: one forward solve, then interval on the surviving core.
    /// Iterative phase: alternate backward/forward solves (backward first)
    /// until the iteration bound, or until a pass leaves the core size
    /// unchanged. Throws ContractError if Sigma_phi with pi is satisfiable.
    Core over_approximate(std::span<const Lit> pi);

    /// Splits the core per `left`/`right`, keeps the first half that is
    /// still inconsistent and recurses on the core it yields; returns the
    /// input when neither half is. `left` and `right` must partition `core`
    /// and their interleaving is taken as the seed order.
    Core interval(std::span<const Lit> core, std::span<const Lit> left, std::span<const Lit> right);

    /// Shuffles the current core with a generator seeded by `seed`, solves in
    /// that order with random polarity, keeps the failed set; repeated
    /// `iterations` times.
    Core random_shrink(std::span<const Lit> pi, unsigned iterations, std::uint64_t seed);

private:
    /// Returns the failed set in solve order, or nullopt on SAT.
    std::optional<Core> ordered_solve(std::span<const Lit> order);
    void set_seed(std::span<const Lit> seed);
    Core in_seed_order(std::span<const Lit> lits) const;
    Core interval_rec(Core core);
    void notify_core(std::span<const Lit> core) const;

    Solver& solver_;
    ShrinkConfig config_;
    ShrinkHooks hooks_;
    ShrinkStats stats_;
    std::vector<std::uint32_t> rank_;  // seed position per variable
    std::mt19937_64 seed_stream_;      // per-call seeds for the random baseline
};

} // namespace primec
