#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nashforge/branch_and_bound.hpp"
#include "nashforge/engineering_spec.hpp"
#include "nashforge/game.hpp"
#include "nashforge/lp_export.hpp"
#include "nashforge/model_builder.hpp"

namespace nashforge {

/// The requested strict equilibria cannot coexist with the exclusions.
class InfeasibleSpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverStats {
    MilpStatus status = MilpStatus::infeasible;
    long long nodes_explored = 0;
    long long lp_iterations = 0;
    double wall_seconds = 0.0;
};

struct VerificationReport {
    bool desired_are_ne = false;
    bool undesired_not_ne = false;
    std::vector<Profile> full_ne_set;
    std::vector<Profile> failed_desired;
    std::vector<Profile> failed_undesired;
    bool passed() const { return desired_are_ne && undesired_not_ne; }
};

/// One intervention: the payoff edits, their cost, and the oracle's verdict
/// on the game they produce.
struct Solution {
    PerturbationSet perturbations;
    double objective = 0.0;
    std::vector<std::string> support;  // alpha role tags, ascending by variable id
    VerificationReport verification;
    SolverStats stats;
    std::vector<std::string> warnings;
};

enum class EnumerationStop { infeasible, max_solutions, objective_ceiling, empty_support };

struct EnumerationResult {
    std::vector<Solution> solutions;
    EnumerationStop stopped_because = EnumerationStop::infeasible;
    std::string infeasibility_note;  // set when even the first solve is infeasible
};

/// Recomputes the engineered game from scratch and checks it with the
/// brute-force oracle; deliberately independent of the solver path.
inline VerificationReport verify_perturbations(const Game& game, const PerturbationSet& pert,
                                               const EngineeringSpec& spec) {
    VerificationReport report;
    const Game engineered = apply_perturbations(game, pert);
    report.full_ne_set = enumerate_pure_nash(engineered);
    auto in_ne = [&](const Profile& p) {
        return std::find(report.full_ne_set.begin(), report.full_ne_set.end(), p) !=
               report.full_ne_set.end();
    };
    report.desired_are_ne = true;
    for (const auto& d : spec.desired)
        if (!in_ne(d)) {
            report.desired_are_ne = false;
            report.failed_desired.push_back(d);
        }
    report.undesired_not_ne = true;
    for (const auto& u : spec.undesired)
        if (in_ne(u)) {
            report.undesired_not_ne = false;
            report.failed_undesired.push_back(u);
        }
    return report;
}

inline VerificationReport verify(const Game& game, const Solution& solution,
                                 const EngineeringSpec& spec) {
    return verify_perturbations(game, solution.perturbations, spec);
}

namespace detail {

inline std::string profiles_text(const Game& game, const std::vector<Profile>& ps) {
    std::string out;
    for (const auto& p : ps) {
        if (!out.empty()) out += ", ";
        out += game.profile_label(p);
    }
    return out.empty() ? "(none)" : out;
}

inline std::string infeasibility_message(const Game& game, const EngineeringSpec& spec,
                                         bool after_cuts) {
    std::ostringstream os;
    if (after_cuts)
        os << "no further solutions: the remaining feasible set is empty after excluding "
              "all previously found supports. ";
    else
        os << "engineering spec is infeasible. ";
    os << "Conflicting constraint families: strict best-response rows for desired {"
       << profiles_text(game, spec.desired) << "}, exclusion rows for undesired {"
       << profiles_text(game, spec.undesired) << "}";
    if (spec.freeze_undesired) os << ", frozen perturbations on undesired cells";
    os << ", and per-variable perturbation caps.";
    return os.str();
}

inline Solution make_solution(const Game& game, const EngineeringSpec& spec,
                              const MilpModel& model, const MilpResult& res) {
    Solution sol;
    sol.perturbations = extract_perturbations(model, res);
    sol.objective = round_solver_value(res.objective);
    for (int id : support_alpha_ids(model, res)) {
        sol.support.push_back(model.var_name(id));
        const double v = res.incumbent->values[id];
        if (v >= model.max_perturbation - 1e-6)
            sol.warnings.push_back("perturbation " + model.var_name(id) +
                                   " sits at its bound; consider a larger max_perturbation");
    }
    sol.stats = {res.status, res.nodes_explored, res.lp_iterations, res.wall_time};
    sol.verification = verify_perturbations(game, sol.perturbations, spec);
    if (!sol.verification.passed()) {
        // A failed re-check means the model or solver is wrong, never the user.
        std::ostringstream os;
        os << "internal error: solver output failed oracle verification\n";
        os << "failed desired: " << profiles_text(game, sol.verification.failed_desired) << "\n";
        os << "failed undesired: " << profiles_text(game, sol.verification.failed_undesired)
           << "\nvariable values:\n";
        for (size_t j = 0; j < res.incumbent->values.size(); ++j)
            if (res.incumbent->values[j] != 0.0)
                os << "  " << model.var_name(static_cast<int>(j)) << " = "
                   << res.incumbent->values[j] << "\n";
        os << "model:\n" << export_lp(model);
        throw std::logic_error(os.str());
    }
    return sol;
}

}  // namespace detail

/// Solve + enumerate alternatives by adding an integer cut per found support,
/// until the cut model goes infeasible or a configured limit fires.
inline EnumerationResult enumerate_solutions(const Game& game, const EngineeringSpec& spec) {
    validate_spec(game, spec);
    EnumerationResult out;
    MilpModel model = build_engineering_model(game, spec);
    Basis warm;
    bool have_warm = false;
    for (;;) {
        if (spec.max_solutions &&
            static_cast<int>(out.solutions.size()) >= *spec.max_solutions) {
            out.stopped_because = EnumerationStop::max_solutions;
            return out;
        }
        MilpResult res = solve_milp(model, {}, have_warm ? &warm : nullptr);
        if (res.status == MilpStatus::infeasible) {
            out.stopped_because = EnumerationStop::infeasible;
            if (out.solutions.empty())
                out.infeasibility_note = detail::infeasibility_message(game, spec, false);
            return out;
        }
        if (spec.objective_ceiling && res.objective > *spec.objective_ceiling + 1e-9) {
            out.stopped_because = EnumerationStop::objective_ceiling;
            return out;
        }
        const std::vector<int> support = support_alpha_ids(model, res);
        out.solutions.push_back(detail::make_solution(game, spec, model, res));
        if (support.empty()) {
            // Nothing was perturbed; no cut can exclude an empty support.
            out.stopped_because = EnumerationStop::empty_support;
            return out;
        }
        model = add_integer_cut(std::move(model), support);
        warm = res.incumbent->basis;
        have_warm = true;
    }
}

/// Single minimal intervention; throws InfeasibleSpecError when none exists.
inline Solution engineer(const Game& game, const EngineeringSpec& spec) {
    validate_spec(game, spec);
    const MilpModel model = build_engineering_model(game, spec);
    const MilpResult res = solve_milp(model);
    if (res.status == MilpStatus::infeasible)
        throw InfeasibleSpecError(detail::infeasibility_message(game, spec, false));
    return detail::make_solution(game, spec, model, res);
}

}  // namespace nashforge
