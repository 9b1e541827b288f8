#include <catch2/catch_amalgamated.hpp>

#include "nashforge/branch_and_bound.hpp"
#include "nashforge/model_builder.hpp"
#include "support/fixtures.hpp"

using namespace nashforge;

namespace {

EngineeringSpec spec_for(std::vector<Profile> desired, std::vector<Profile> undesired) {
    EngineeringSpec spec;
    spec.desired = std::move(desired);
    spec.undesired = std::move(undesired);
    return spec;
}

}  // namespace

TEST_CASE("PD engineering MILP solves to 3.03") {
    const Game pd = fixtures::prisoners_dilemma();
    const MilpModel model = build_engineering_model(pd, spec_for({{0, 0}}, {{1, 1}}));
    const MilpResult res = solve_milp(model);
    REQUIRE(res.status == MilpStatus::optimal);
    CHECK(res.objective == Catch::Approx(3.03).margin(1e-6));
    CHECK(res.nodes_explored >= 1);

    const PerturbationSet pert = extract_perturbations(model, res);
    REQUIRE(pert.size() == 3);
    for (const auto& e : pert.entries()) CHECK(std::abs(e.delta) == Catch::Approx(1.01));
}

TEST_CASE("snowdrift MILP finds the two symmetric raises") {
    const Game sd = fixtures::snowdrift();
    const MilpModel model = build_engineering_model(sd, spec_for({{0, 0}}, {{0, 1}, {1, 0}}));
    const MilpResult res = solve_milp(model);
    REQUIRE(res.status == MilpStatus::optimal);
    CHECK(res.objective == Catch::Approx(4.02).margin(1e-6));
    const PerturbationSet pert = extract_perturbations(model, res);
    REQUIRE(pert.size() == 2);
    for (const auto& e : pert.entries()) {
        CHECK(e.profile == Profile{0, 0});
        CHECK(e.delta == Catch::Approx(2.01));
    }
}

TEST_CASE("a profile forced to be both desired and undesired is infeasible") {
    const Game pd = fixtures::prisoners_dilemma();
    BuildOptions bypass;
    bypass.skip_overlap_check = true;
    const MilpModel model =
        build_engineering_model(pd, spec_for({{0, 0}}, {{0, 0}}), bypass);
    const MilpResult res = solve_milp(model);
    CHECK(res.status == MilpStatus::infeasible);
    CHECK_FALSE(res.incumbent.has_value());
}

TEST_CASE("node and time limits stop the search with the right status") {
    const Game pd = fixtures::prisoners_dilemma();
    const MilpModel model = build_engineering_model(pd, spec_for({{0, 0}}, {{1, 1}}));
    MilpLimits nodes;
    nodes.max_nodes = 1;
    CHECK(solve_milp(model, nodes).status == MilpStatus::node_limit);
    MilpLimits time;
    time.max_seconds = 0.0;
    CHECK(solve_milp(model, time).status == MilpStatus::time_limit);
}

TEST_CASE("solver is deterministic across repeated runs") {
    const Game g = fixtures::random_tensor_game(2, 5, 77);
    const MilpModel model = build_engineering_model(g, spec_for({{0, 1}}, {{3, 3}}));
    const MilpResult a = solve_milp(model);
    const MilpResult b = solve_milp(model);
    REQUIRE(a.status == b.status);
    CHECK(a.nodes_explored == b.nodes_explored);
    CHECK(a.objective == b.objective);
    if (a.incumbent) CHECK(a.incumbent->values == b.incumbent->values);
}

TEST_CASE("LP relaxation never exceeds the integer optimum") {
    std::vector<std::pair<Game, EngineeringSpec>> instances;
    instances.push_back({fixtures::prisoners_dilemma(), spec_for({{0, 0}}, {{1, 1}})});
    instances.push_back({fixtures::snowdrift(), spec_for({{0, 0}}, {{0, 1}, {1, 0}})});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = generate_random_game(4, seed);
        instances.push_back({inst.game, spec_for({inst.desired}, {inst.undesired})});
    }
    for (const auto& [game, spec] : instances) {
        const MilpModel model = build_engineering_model(game, spec);
        const LpSolution lp = solve_lp(model);
        const MilpResult milp = solve_milp(model);
        if (lp.status != LpStatus::optimal || milp.status != MilpStatus::optimal) continue;
        CHECK(lp.objective <= milp.objective + 1e-9);
    }
}

TEST_CASE("extraction rejects non-optimal results and two-sided alphas") {
    const Game pd = fixtures::prisoners_dilemma();
    const MilpModel model = build_engineering_model(pd, spec_for({{0, 0}}, {{1, 1}}));

    MilpResult not_solved;
    CHECK_THROWS_AS(extract_perturbations(model, not_solved), std::invalid_argument);

    // An alpha pair active in both directions can never survive at an optimum;
    // extraction treats it as a solver bug.
    MilpResult forged;
    forged.status = MilpStatus::optimal;
    LpSolution sol;
    sol.status = LpStatus::optimal;
    sol.values.assign(model.variables.size(), 0.0);
    const auto pair = model.alpha_ids.begin()->second;
    sol.values[pair.first] = 0.5;
    sol.values[pair.second] = 0.5;
    forged.incumbent = sol;
    CHECK_THROWS_AS(extract_perturbations(model, forged), std::logic_error);
}

TEST_CASE("an already-satisfied spec solves to zero with no perturbations") {
    const Game g = Game::create({{"P1", {"C", "D"}}, {"P2", {"C", "D"}}},
                                {5, 5, 3, 4, 4, 0, 1, 1});
    REQUIRE(fixtures::strict_ne_with_margin(g, {0, 0}, 0.01));
    REQUIRE(fixtures::has_strictly_better_deviation(g, {1, 1}, 0.01));
    const MilpModel model = build_engineering_model(g, spec_for({{0, 0}}, {{1, 1}}));
    const MilpResult res = solve_milp(model);
    REQUIRE(res.status == MilpStatus::optimal);
    CHECK(res.objective == Catch::Approx(0.0).margin(1e-9));
    CHECK(extract_perturbations(model, res).empty());
}
