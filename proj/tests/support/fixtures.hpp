#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "nashforge/bench.hpp"
#include "nashforge/game.hpp"

namespace fixtures {

inline nashforge::Game prisoners_dilemma() {
    return nashforge::Game::create({{"P1", {"C", "D"}}, {"P2", {"C", "D"}}},
                                   {-1, -1, -4, 0, 0, -4, -3, -3});
}

inline nashforge::Game snowdrift() {
    return nashforge::Game::create({{"P1", {"C", "D"}}, {"P2", {"C", "D"}}},
                                   {3, 3, 1, 5, 5, 1, 0, 0});
}

// K-player tensor with i.i.d. uniform payoffs; used by property suites.
inline nashforge::Game random_tensor_game(int players, int strategies, std::uint64_t seed,
                                          double lo = -10.0, double hi = 10.0) {
    nashforge::detail::Rng rng(seed);
    std::vector<nashforge::PlayerDef> defs;
    for (int k = 0; k < players; ++k) {
        std::vector<std::string> labels;
        for (int i = 1; i <= strategies; ++i) labels.push_back("S" + std::to_string(i));
        defs.push_back({"P" + std::to_string(k + 1), labels});
    }
    long long cells = 1;
    for (int k = 0; k < players; ++k) cells *= strategies;
    std::vector<double> payoffs(cells * players);
    for (auto& v : payoffs) v = rng.uniform(lo, hi);
    return nashforge::Game::create(std::move(defs), std::move(payoffs));
}

inline std::set<std::vector<int>> profile_set(const std::vector<nashforge::Profile>& ps) {
    return {ps.begin(), ps.end()};
}

// Strict-margin checks used by test oracles; straight payoff arithmetic,
// independent of the model and solver code paths.
inline bool strict_ne_with_margin(const nashforge::Game& g, const nashforge::Profile& s,
                                  double eps) {
    for (int k = 0; k < g.num_players(); ++k)
        for (const auto& d : nashforge::unilateral_deviations(g, s, k))
            if (!(g.payoff(s, k) >= g.payoff(d, k) + eps - 1e-9)) return false;
    return true;
}

inline bool has_strictly_better_deviation(const nashforge::Game& g, const nashforge::Profile& s,
                                          double eps) {
    for (int k = 0; k < g.num_players(); ++k)
        for (const auto& d : nashforge::unilateral_deviations(g, s, k))
            if (g.payoff(d, k) >= g.payoff(s, k) + eps - 1e-9) return true;
    return false;
}

}  // namespace fixtures
