#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>

#include "nashforge/io/game_json.hpp"
#include "nashforge/io/solution_json.hpp"
#include "nashforge/io/spec_json.hpp"
#include "nashforge/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace nashforge;
using nlohmann::json;

TEST_CASE("game json round trip") {
    const Game pd = fixtures::prisoners_dilemma();
    const Game back = game_from_json(game_to_json(pd));
    CHECK(back.raw_payoffs() == pd.raw_payoffs());
    CHECK(back.players()[0].strategies == pd.players()[0].strategies);
    CHECK(back.player_name(1) == "P2");

    const Game three = fixtures::random_tensor_game(3, 2, 5);
    CHECK(game_from_json(game_to_json(three)).raw_payoffs() == three.raw_payoffs());
}

TEST_CASE("game json rejects malformed documents") {
    CHECK_THROWS_AS(game_from_json(json::parse(R"({"players": []})")), std::invalid_argument);
    CHECK_THROWS_AS(game_from_json(json::parse(
                        R"({"players": [{"name":"P1","strategies":["C","D"]}],
                            "payoffs": [[1],[2],[3]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(game_from_json(json::parse(
                        R"({"players": [{"name":"P1","strategies":["C"]}],
                            "payoffs": [["x"]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_game("/nonexistent/game.json"), std::invalid_argument);
}

TEST_CASE("sample data files load and analyze as expected") {
    const char* data = std::getenv("NASHFORGE_DATA");
    REQUIRE(data != nullptr);
    const Game pd = load_game(std::string(data) + "/prisoners_dilemma.json");
    CHECK(fixtures::profile_set(enumerate_pure_nash(pd)) == fixtures::profile_set({{1, 1}}));
    const Game sd = load_game(std::string(data) + "/snowdrift.json");
    CHECK(fixtures::profile_set(enumerate_pure_nash(sd)) ==
          fixtures::profile_set({{0, 1}, {1, 0}}));
}

TEST_CASE("spec json defaults and overrides") {
    const Game pd = fixtures::prisoners_dilemma();
    const EngineeringSpec defaults = spec_from_json(json::object(), pd);
    CHECK(defaults.epsilon == 0.01);
    CHECK(defaults.freeze_undesired);
    CHECK(defaults.max_solutions == 64);
    CHECK(defaults.bmax_indexing == BmaxIndexing::per_profile);
    CHECK_FALSE(defaults.big_m.has_value());

    const auto spec = spec_from_json(json::parse(R"({
        "desired": ["C,C"], "undesired": ["D,D"],
        "epsilon": 0.05, "big_m": 500, "freeze_undesired": false,
        "max_perturbation": 9, "max_solutions": 0, "bmax_indexing": "paper_shared"
    })"),
                                     pd);
    CHECK(spec.desired == std::vector<Profile>{{0, 0}});
    CHECK(spec.undesired == std::vector<Profile>{{1, 1}});
    CHECK(spec.epsilon == 0.05);
    CHECK(spec.big_m == 500.0);
    CHECK_FALSE(spec.freeze_undesired);
    CHECK(spec.max_perturbation == 9.0);
    CHECK_FALSE(spec.max_solutions.has_value());  // 0 means unbounded
    CHECK(spec.bmax_indexing == BmaxIndexing::paper_shared);

    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"unknown_field": 1})"), pd),
                    std::invalid_argument);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"desired": ["X,Y"]})"), pd),
                    std::invalid_argument);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"bmax_indexing": "bogus"})"), pd),
                    std::invalid_argument);
}

TEST_CASE("spec json profile parsing honors by_index") {
    const Game pd = fixtures::prisoners_dilemma();
    const auto spec = spec_from_json(json::parse(R"({"desired": ["0,0"]})"), pd, true);
    CHECK(spec.desired == std::vector<Profile>{{0, 0}});
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"desired": ["2,0"]})"), pd, true),
                    std::out_of_range);
}

TEST_CASE("solution files round trip and stay byte-stable") {
    const Game pd = fixtures::prisoners_dilemma();
    EngineeringSpec spec;
    spec.desired = {{0, 0}};
    spec.undesired = {{1, 1}};
    spec.max_solutions = 2;
    const EnumerationResult result = enumerate_solutions(pd, spec);
    REQUIRE(result.solutions.size() == 2);

    const std::string dumped = enumeration_to_json(result, pd).dump(2);
    const EnumerationResult rerun = enumerate_solutions(pd, spec);
    CHECK(enumeration_to_json(rerun, pd).dump(2) == dumped);

    const auto parsed = perturbations_from_solution_json(json::parse(dumped), pd);
    REQUIRE(parsed.size() == 2);
    for (size_t i = 0; i < parsed.size(); ++i) {
        REQUIRE(parsed[i].size() == result.solutions[i].perturbations.size());
        for (size_t e = 0; e < parsed[i].size(); ++e) {
            CHECK(parsed[i].entries()[e].player ==
                  result.solutions[i].perturbations.entries()[e].player);
            CHECK(parsed[i].entries()[e].delta ==
                  result.solutions[i].perturbations.entries()[e].delta);
        }
    }
}

TEST_CASE("solution reader skips zeroed deltas but rejects garbage") {
    const Game pd = fixtures::prisoners_dilemma();
    const auto sets = perturbations_from_solution_json(json::parse(R"({
        "solutions": [{"perturbations": [
            {"player": 0, "profile": "C,C", "delta": 0.0},
            {"player": 1, "profile": "D,C", "delta": 1.5}
        ]}]})"),
                                                       pd);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].size() == 1);

    CHECK_THROWS_AS(perturbations_from_solution_json(json::parse(R"({"solutions": [
            {"perturbations": [{"player": 5, "profile": "C,C", "delta": 1}]}]})"),
                                                     pd),
                    std::invalid_argument);
    CHECK_THROWS_AS(perturbations_from_solution_json(json::parse(R"({})"), pd),
                    std::invalid_argument);
}
