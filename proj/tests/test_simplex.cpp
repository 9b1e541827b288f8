#include <catch2/catch_amalgamated.hpp>

#include "nashforge/model_builder.hpp"
#include "nashforge/simplex.hpp"
#include "support/fixtures.hpp"

using namespace nashforge;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int add_cont(MilpModel& m, double lo, double up, double cost) {
    const int id = m.add_variable(lo == -kInf && up == kInf ? VarKind::continuous_free
                                                             : VarKind::continuous_nonneg,
                                  lo, up, VarRole{RoleType::alpha_plus, 0, 0});
    m.objective[id] = cost;
    return id;
}

}  // namespace

TEST_CASE("minimize x subject to x >= 3") {
    MilpModel m;
    const int x = add_cont(m, 0, kInf, 1.0);
    m.add_constraint({{{x, 1.0}}, Sense::ge, 3.0});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == Catch::Approx(3.0));
    CHECK(sol.values[x] == Catch::Approx(3.0));
}

TEST_CASE("contradictory rows are infeasible") {
    MilpModel m;
    const int x = add_cont(m, 0, kInf, 1.0);
    m.add_constraint({{{x, 1.0}}, Sense::ge, 1.0});
    m.add_constraint({{{x, 1.0}}, Sense::le, 0.0});
    CHECK(solve_lp(m).status == LpStatus::infeasible);
}

TEST_CASE("an improving ray is reported unbounded") {
    MilpModel m;
    const int x = add_cont(m, 0, kInf, -1.0);
    m.add_constraint({{{x, -1.0}}, Sense::le, 5.0});  // no upper limit on x
    CHECK(solve_lp(m).status == LpStatus::unbounded);
}

TEST_CASE("classic degenerate cycling instance terminates at its optimum") {
    // Beale's example; Dantzig pricing cycles under a naive tie-break.
    MilpModel m;
    const int x1 = add_cont(m, 0, kInf, -0.75);
    const int x2 = add_cont(m, 0, kInf, 150.0);
    const int x3 = add_cont(m, 0, kInf, -0.02);
    const int x4 = add_cont(m, 0, kInf, 6.0);
    m.add_constraint({{{x1, 0.25}, {x2, -60.0}, {x3, -1.0 / 25.0}, {x4, 9.0}}, Sense::le, 0.0});
    m.add_constraint({{{x1, 0.5}, {x2, -90.0}, {x3, -1.0 / 50.0}, {x4, 3.0}}, Sense::le, 0.0});
    m.add_constraint({{{x3, 1.0}}, Sense::le, 1.0});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == Catch::Approx(-0.05));
    CHECK(sol.values[x1] == Catch::Approx(1.0 / 25.0));
    CHECK(sol.values[x3] == Catch::Approx(1.0));
}

TEST_CASE("upper-bounded variables flip to their bounds") {
    MilpModel m;
    const int x1 = add_cont(m, 0, 1, -1.0);
    const int x2 = add_cont(m, 0, 1, -1.0);
    m.add_constraint({{{x1, 1.0}, {x2, 1.0}}, Sense::le, 1.5});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == Catch::Approx(-1.5));
    CHECK(sol.values[x1] + sol.values[x2] == Catch::Approx(1.5));
}

TEST_CASE("free variables and equality rows") {
    MilpModel m;
    const int f = add_cont(m, -kInf, kInf, 0.0);
    const int x = add_cont(m, 0, kInf, 1.0);
    m.add_constraint({{{f, 1.0}}, Sense::eq, -2.0});
    m.add_constraint({{{x, 1.0}, {f, -1.0}}, Sense::ge, 0.0});  // x >= f
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.values[f] == Catch::Approx(-2.0));
    CHECK(sol.objective == Catch::Approx(0.0));
}

TEST_CASE("empty constraint rows decide feasibility by their constant") {
    MilpModel m;
    add_cont(m, 0, kInf, 1.0);
    m.add_constraint({{}, Sense::ge, 5.0});  // 0 >= 5
    CHECK(solve_lp(m).status == LpStatus::infeasible);

    MilpModel ok;
    add_cont(ok, 0, kInf, 1.0);
    ok.add_constraint({{}, Sense::le, 5.0});  // 0 <= 5
    CHECK(solve_lp(ok).status == LpStatus::optimal);
}

TEST_CASE("fixed binaries narrow the relaxation") {
    MilpModel m;
    const int x = add_cont(m, 0, kInf, 1.0);
    const int b = m.add_variable(VarKind::binary, 0, 1, VarRole{RoleType::w, 0, -1, 0, 0});
    m.add_constraint({{{x, 1.0}, {b, -2.0}}, Sense::ge, 0.0});  // x >= 2b
    CHECK(solve_lp(m).objective == Catch::Approx(0.0));
    CHECK(solve_lp(m, {{b, 1}}).objective == Catch::Approx(2.0));
    CHECK_THROWS_AS(solve_lp(m, {{x, 1}}), std::invalid_argument);
}

TEST_CASE("PD relaxation lower-bounds the integer optimum") {
    const Game pd = fixtures::prisoners_dilemma();
    EngineeringSpec spec;
    spec.desired = {{0, 0}};
    spec.undesired = {{1, 1}};
    const MilpModel model = build_engineering_model(pd, spec);
    const LpSolution lp = solve_lp(model);
    REQUIRE(lp.status == LpStatus::optimal);
    CHECK(lp.objective <= 3.03 + 1e-9);
    CHECK(lp.objective == Catch::Approx(2.02));  // undesired block is free with fractional w
}

TEST_CASE("warm starts from a previous basis reach the same optimum") {
    const Game g = fixtures::random_tensor_game(2, 6, 44);
    EngineeringSpec spec;
    spec.desired = {{0, 0}};
    spec.undesired = {{5, 5}};
    const MilpModel model = build_engineering_model(g, spec);
    SimplexSolver cold(model);
    const LpSolution first = cold.solve();
    REQUIRE(first.status == LpStatus::optimal);

    SimplexSolver warm(model);
    warm.set_basis(first.basis);
    const LpSolution second = warm.solve();
    REQUIRE(second.status == LpStatus::optimal);
    CHECK(second.objective == Catch::Approx(first.objective));
    CHECK(second.iterations <= 2);  // nothing to do from the optimal basis
}

TEST_CASE("bound changes re-solve correctly from the stale basis") {
    MilpModel m;
    const int x = add_cont(m, 0, 10, 1.0);
    const int b = m.add_variable(VarKind::binary, 0, 1, VarRole{RoleType::w, 0, -1, 0, 0});
    m.add_constraint({{{x, 1.0}, {b, -3.0}}, Sense::ge, 1.0});  // x >= 1 + 3b
    SimplexSolver solver(m);
    CHECK(solver.solve().objective == Catch::Approx(1.0));
    solver.set_var_bounds(b, 1.0, 1.0);
    CHECK(solver.solve().objective == Catch::Approx(4.0));
    solver.set_var_bounds(b, 0.0, 0.0);
    CHECK(solver.solve().objective == Catch::Approx(1.0));
    solver.set_var_bounds(b, 0.0, 1.0);
    CHECK(solver.solve().objective == Catch::Approx(1.0));
}

TEST_CASE("random bounded LPs satisfy their own constraints at the optimum") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        detail::Rng rng(seed);
        MilpModel m;
        const int n = 3 + static_cast<int>(rng.uniform() * 4);
        const int rows = 2 + static_cast<int>(rng.uniform() * 4);
        for (int j = 0; j < n; ++j) add_cont(m, 0.0, rng.uniform(0.5, 4.0), rng.uniform(-2, 2));
        for (int i = 0; i < rows; ++i) {
            LinearConstraint c;
            for (int j = 0; j < n; ++j)
                if (rng.uniform() < 0.7) c.terms.push_back({j, rng.uniform(-3, 3)});
            c.sense = rng.uniform() < 0.5 ? Sense::le : Sense::ge;
            c.rhs = rng.uniform(-2, 2);
            m.add_constraint(std::move(c));
        }
        LpSolution sol;
        try {
            sol = solve_lp(m);
        } catch (const std::runtime_error&) {
            continue;  // instability report is an acceptable outcome, not a wrong answer
        }
        if (sol.status != LpStatus::optimal) continue;
        for (const auto& c : m.constraints) {
            double lhs = 0;
            for (const auto& [id, coef] : c.terms) lhs += coef * sol.values[id];
            if (c.sense == Sense::le) CHECK(lhs <= c.rhs + 1e-6);
            if (c.sense == Sense::ge) CHECK(lhs >= c.rhs - 1e-6);
        }
        for (size_t j = 0; j < sol.values.size(); ++j) {
            CHECK(sol.values[j] >= -1e-7);
            CHECK(sol.values[j] <= m.variables[j].upper + 1e-7);
        }
    }
}
