#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nashforge {

enum class VarKind { continuous_nonneg, continuous_free, binary };

enum class RoleType { alpha_plus, alpha_minus, bmax, w, y };

/// Semantic tag tying a variable back to its place in the formulation.
struct VarRole {
    RoleType type;
    int player = -1;         // alpha_*, bmax, w
    long long profile = -1;  // alpha_*: the perturbed cell (flat index)
    int context = -1;        // bmax, w: undesired-context index
    int strategy = -1;       // w: strategy proposed as the payoff maximum
    int alpha_var = -1;      // y: id of the alpha variable it gates
};

struct Variable {
    VarKind kind = VarKind::continuous_nonneg;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    VarRole role;
};

enum class Sense { le, ge, eq };

struct LinearConstraint {
    std::vector<std::pair<int, double>> terms;  // (var id, coefficient), ids strictly increasing
    Sense sense = Sense::le;
    double rhs = 0.0;
};

struct ModelStats {
    int num_continuous = 0;
    int num_binary = 0;
    int num_constraints = 0;
    long long num_nonzeros = 0;
};

/// Solver-agnostic MILP: minimize objective · x subject to the constraint rows
/// and per-variable bounds. Perturbed payoffs are affine expressions over the
/// alpha variables, never variables themselves.
struct MilpModel {
    std::vector<Variable> variables;
    std::vector<LinearConstraint> constraints;
    std::vector<double> objective;

    // Shape and solve parameters carried for naming, cuts and extraction.
    std::vector<int> dims;
    double epsilon = 0.01;
    double big_m = 0.0;
    double max_perturbation = 0.0;

    // (player, profile) -> (alpha_plus id, alpha_minus id); only created pairs appear.
    std::map<std::pair<int, long long>, std::pair<int, int>> alpha_ids;
    // alpha variable id -> gating binary id, filled by integer cuts.
    std::map<int, int> y_for_alpha;

    int add_variable(VarKind kind, double lower, double upper, VarRole role) {
        variables.push_back({kind, lower, upper, role});
        objective.push_back(0.0);
        return static_cast<int>(variables.size()) - 1;
    }

    void add_constraint(LinearConstraint c) {
        for (auto& [id, coef] : c.terms)
            if (id < 0 || id >= static_cast<int>(variables.size()))
                throw std::out_of_range("constraint references unknown variable");
        constraints.push_back(std::move(c));
    }

    bool is_fixed(int id) const { return variables[id].lower == variables[id].upper; }

    /// Deterministic LP-safe name derived from the role tag.
    std::string var_name(int id) const {
        const VarRole& r = variables.at(id).role;
        switch (r.type) {
            case RoleType::alpha_plus:
                return "ap_k" + std::to_string(r.player) + "_s" + profile_suffix(r.profile);
            case RoleType::alpha_minus:
                return "am_k" + std::to_string(r.player) + "_s" + profile_suffix(r.profile);
            case RoleType::bmax:
                return "bmax_u" + std::to_string(r.context) + "_k" + std::to_string(r.player);
            case RoleType::w:
                return "w_u" + std::to_string(r.context) + "_k" + std::to_string(r.player) +
                       "_d" + std::to_string(r.strategy);
            case RoleType::y:
                return "y_" + var_name(r.alpha_var);
        }
        return "v" + std::to_string(id);
    }

    std::string profile_suffix(long long flat) const {
        std::vector<int> s(dims.size());
        for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
            s[k] = static_cast<int>(flat % dims[k]);
            flat /= dims[k];
        }
        std::string out;
        for (size_t k = 0; k < s.size(); ++k) {
            if (k) out += '_';
            out += std::to_string(s[k]);
        }
        return out;
    }
};

inline ModelStats model_stats(const MilpModel& m) {
    ModelStats s;
    for (const auto& v : m.variables)
        (v.kind == VarKind::binary ? s.num_binary : s.num_continuous)++;
    s.num_constraints = static_cast<int>(m.constraints.size());
    for (const auto& c : m.constraints) s.num_nonzeros += static_cast<long long>(c.terms.size());
    return s;
}

}  // namespace nashforge
