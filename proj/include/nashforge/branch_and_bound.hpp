#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nashforge/game.hpp"
#include "nashforge/milp_model.hpp"
#include "nashforge/simplex.hpp"

namespace nashforge {

inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kObjectiveCompareTol = 1e-9;

enum class MilpStatus { optimal, infeasible, node_limit, time_limit };

struct MilpLimits {
    std::optional<long long> max_nodes;
    std::optional<double> max_seconds;
};

struct MilpResult {
    MilpStatus status = MilpStatus::infeasible;
    std::optional<LpSolution> incumbent;
    double objective = std::numeric_limits<double>::infinity();
    long long nodes_explored = 0;
    long long lp_iterations = 0;
    double wall_time = 0.0;
};

/// Depth-first branch and bound over the model's binaries.
///
/// One solver instance persists across the tree; nodes differ only in binary
/// bounds, so every child re-optimizes from the sibling's end basis. Branches
/// on the most fractional binary (ties to the lowest id) and explores the
/// 1-branch first, which pins a blocking deviation and reaches incumbents fast.
class BranchAndBound {
public:
    explicit BranchAndBound(const MilpModel& model) : model_(model), solver_(model) {
        for (int j = 0; j < static_cast<int>(model.variables.size()); ++j)
            if (model.variables[j].kind == VarKind::binary) binaries_.push_back(j);
    }

    MilpResult solve(const MilpLimits& limits = {}, const Basis* warm_hint = nullptr) {
        limits_ = limits;
        result_ = MilpResult{};
        incumbent_obj_ = std::numeric_limits<double>::infinity();
        stop_status_.reset();
        start_ = std::chrono::steady_clock::now();
        if (warm_hint) solver_.set_basis(*warm_hint);
        dfs();
        result_.wall_time = elapsed();
        result_.lp_iterations = solver_.total_iterations();
        if (stop_status_)
            result_.status = *stop_status_;
        else
            result_.status = result_.incumbent ? MilpStatus::optimal : MilpStatus::infeasible;
        return result_;
    }

private:
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    void dfs() {
        if (stop_status_) return;
        if (limits_.max_nodes && result_.nodes_explored >= *limits_.max_nodes) {
            stop_status_ = MilpStatus::node_limit;
            return;
        }
        if (limits_.max_seconds && elapsed() > *limits_.max_seconds) {
            stop_status_ = MilpStatus::time_limit;
            return;
        }
        ++result_.nodes_explored;
        LpSolution lp = solver_.solve();
        if (lp.status == LpStatus::infeasible) return;
        if (lp.status == LpStatus::unbounded)
            throw std::runtime_error("LP relaxation unbounded; model is malformed");
        if (lp.objective >= incumbent_obj_ - kObjectiveCompareTol) return;  // prune

        int branch = -1;
        double most = kIntegralityTol;
        for (int j : binaries_) {
            const double frac = std::min(lp.values[j], 1.0 - lp.values[j]);
            if (frac > most) {
                most = frac;
                branch = j;
            }
        }
        if (branch < 0) {
            result_.incumbent = std::move(lp);
            incumbent_obj_ = result_.incumbent->objective;
            result_.objective = incumbent_obj_;
            return;
        }
        for (const double v : {1.0, 0.0}) {
            solver_.set_var_bounds(branch, v, v);
            dfs();
            if (stop_status_) break;
        }
        solver_.set_var_bounds(branch, 0.0, 1.0);
    }

    const MilpModel& model_;
    SimplexSolver solver_;
    std::vector<int> binaries_;
    MilpLimits limits_;
    MilpResult result_;
    double incumbent_obj_ = std::numeric_limits<double>::infinity();
    std::optional<MilpStatus> stop_status_;
    std::chrono::steady_clock::time_point start_;
};

inline MilpResult solve_milp(const MilpModel& model, const MilpLimits& limits = {},
                             const Basis* warm_hint = nullptr) {
    return BranchAndBound(model).solve(limits, warm_hint);
}

inline Profile decode_profile(const std::vector<int>& dims, long long flat) {
    Profile s(dims.size());
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        s[k] = static_cast<int>(flat % dims[k]);
        flat /= dims[k];
    }
    return s;
}

/// Alpha variables carrying weight in the incumbent, in creation order.
inline std::vector<int> support_alpha_ids(const MilpModel& model, const MilpResult& result) {
    if (result.status != MilpStatus::optimal || !result.incumbent)
        throw std::invalid_argument("support requires an optimal result");
    const double tol = model.epsilon / 2.0;
    std::vector<int> ids;
    for (const auto& [key, pair] : model.alpha_ids) {
        const double vp = result.incumbent->values[pair.first];
        const double vm = result.incumbent->values[pair.second];
        if (std::min(vp, vm) >= tol)
            throw std::logic_error("alpha pair active in both directions at claimed optimum");
        if (vp >= tol) ids.push_back(pair.first);
        if (vm >= tol) ids.push_back(pair.second);
    }
    return ids;
}

// Basic-solution values carry representation noise well below the solver's
// own objective tolerance; reporting rounds it away so equal runs and equal
// formulations print equal numbers.
inline double round_solver_value(double v) { return std::round(v * 1e9) / 1e9; }

/// Nets plus/minus alphas per (player, profile) and drops magnitudes below
/// epsilon/2, which the cut constraints guarantee true nonzeros always clear.
inline PerturbationSet extract_perturbations(const MilpModel& model, const MilpResult& result) {
    if (result.status != MilpStatus::optimal || !result.incumbent)
        throw std::invalid_argument("perturbation extraction requires an optimal result");
    const double tol = model.epsilon / 2.0;
    std::vector<PerturbationEntry> entries;
    for (const auto& [key, pair] : model.alpha_ids) {
        const double vp = result.incumbent->values[pair.first];
        const double vm = result.incumbent->values[pair.second];
        if (std::min(vp, vm) >= tol)
            throw std::logic_error("alpha pair active in both directions at claimed optimum");
        const double delta = round_solver_value(vp - vm);
        if (std::abs(delta) < tol) continue;
        entries.push_back({key.first, decode_profile(model.dims, key.second), delta});
    }
    return PerturbationSet::from_entries(std::move(entries));
}

}  // namespace nashforge
