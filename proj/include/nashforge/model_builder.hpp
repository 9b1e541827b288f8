#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nashforge/engineering_spec.hpp"
#include "nashforge/game.hpp"
#include "nashforge/milp_model.hpp"

namespace nashforge {

struct BuildOptions {
    // Create alpha variables only where a constraint references them. Omitted
    // alphas carry objective weight +1 and appear in no row, so they are zero
    // at any optimum; dropping them is exact.
    bool presolve = true;
    // Test hook: emit a model even when desired and undesired sets overlap.
    bool skip_overlap_check = false;
    long long max_model_payoffs = 10'000'000;
};

/// Big-M large enough that a deactivated max-selection row can never bind,
/// given that every payoff edit is capped by max_perturbation.
inline double auto_big_m(const Game& game, const EngineeringSpec& spec) {
    if (spec.big_m) return *spec.big_m;
    const double range = game.payoff_range();
    const double cap = spec.max_perturbation.value_or(range + 1.0);
    return 2.0 * (range + cap) + spec.epsilon;
}

namespace detail {

// Flat indices of the profiles reachable by varying player k's coordinate of s.
inline long long line_stride(const std::vector<int>& dims, int k) {
    long long stride = 1;
    for (size_t j = k + 1; j < dims.size(); ++j) stride *= dims[j];
    return stride;
}

struct UndesiredContext {
    int player = -1;
    long long representative = -1;     // first undesired profile using this context
    std::vector<int> w_strategies;     // strategies that may be selected as the max
    int bmax_id = -1;
    std::vector<int> w_ids;            // parallel to w_strategies
    bool rows_emitted = false;
};

}  // namespace detail

/// Translates (game, spec) into a MILP whose feasible points are exactly the
/// payoff edits making every desired profile a strict NE (margin epsilon) while
/// leaving every undesired profile with some strictly better unilateral deviation.
inline MilpModel build_engineering_model(const Game& game, const EngineeringSpec& spec,
                                         const BuildOptions& options = {}) {
    if (options.skip_overlap_check) {
        EngineeringSpec relaxed = spec;
        relaxed.desired.clear();
        relaxed.undesired.clear();
        validate_spec(game, relaxed);
        for (const auto& p : spec.desired) game.check_profile(p);
        for (const auto& p : spec.undesired) game.check_profile(p);
    } else {
        validate_spec(game, spec);
    }
    const int K = game.num_players();
    if (game.num_profiles() * K > options.max_model_payoffs)
        throw std::invalid_argument("payoff tensor exceeds the configured model-size limit");

    // Deterministic emission order: profiles ascending by flat index.
    auto sorted_unique = [&](const std::vector<Profile>& profiles) {
        std::vector<long long> idx;
        for (const auto& p : profiles) idx.push_back(game.profile_index(p));
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        return idx;
    };
    const std::vector<long long> desired = sorted_unique(spec.desired);
    const std::vector<long long> undesired = sorted_unique(spec.undesired);
    const std::set<long long> undesired_set(undesired.begin(), undesired.end());

    MilpModel model;
    model.dims = game.dims();
    model.epsilon = spec.epsilon;
    model.max_perturbation = spec.max_perturbation.value_or(game.payoff_range() + 1.0);
    model.big_m = auto_big_m(game, spec);

    const auto& dims = model.dims;
    auto coord_of = [&](long long flat, int k) {
        long long stride = detail::line_stride(dims, k);
        return static_cast<int>((flat / stride) % dims[k]);
    };
    auto with_coord = [&](long long flat, int k, int i) {
        long long stride = detail::line_stride(dims, k);
        return flat + (static_cast<long long>(i) - coord_of(flat, k)) * stride;
    };
    auto frozen = [&](int k, long long p) {
        (void)k;
        return spec.freeze_undesired && undesired_set.count(p) > 0;
    };

    // Affected (player, profile) pairs: every cell whose payoff appears in some row.
    std::set<std::pair<int, long long>> affected;
    if (options.presolve) {
        for (long long d : desired)
            for (int k = 0; k < K; ++k)
                for (int i = 0; i < dims[k]; ++i) affected.insert({k, with_coord(d, k, i)});
        for (long long u : undesired)
            for (int k = 0; k < K; ++k)
                for (int i = 0; i < dims[k]; ++i) affected.insert({k, with_coord(u, k, i)});
    } else {
        for (int k = 0; k < K; ++k)
            for (long long p = 0; p < game.num_profiles(); ++p) affected.insert({k, p});
    }

    for (const auto& [k, p] : affected) {
        if (options.presolve && frozen(k, p)) continue;  // implicitly zero
        const double upper = frozen(k, p) ? 0.0 : model.max_perturbation;
        VarRole plus{RoleType::alpha_plus, k, p};
        VarRole minus{RoleType::alpha_minus, k, p};
        const int ap = model.add_variable(VarKind::continuous_nonneg, 0.0, upper, plus);
        const int am = model.add_variable(VarKind::continuous_nonneg, 0.0, upper, minus);
        if (!frozen(k, p)) {
            model.objective[ap] = 1.0;
            model.objective[am] = 1.0;
        }
        model.alpha_ids[{k, p}] = {ap, am};
    }

    // Undesired contexts: per (profile, player) by default, or shared across
    // undesired profiles with an identical rest-of-profile in paper_shared mode.
    std::map<std::pair<int, long long>, int> context_of;  // key -> index into contexts
    std::vector<detail::UndesiredContext> contexts;
    auto context_key = [&](long long u, int k) -> std::pair<int, long long> {
        if (spec.bmax_indexing == BmaxIndexing::per_profile) return {k, u};
        return {k, with_coord(u, k, 0)};  // mask player k's coordinate
    };
    for (size_t ui = 0; ui < undesired.size(); ++ui) {
        const long long u = undesired[ui];
        for (int k = 0; k < K; ++k) {
            const auto key = context_key(u, k);
            if (context_of.count(key)) continue;
            detail::UndesiredContext ctx;
            ctx.player = k;
            ctx.representative = u;
            for (int i = 0; i < dims[k]; ++i) {
                const long long cell = with_coord(u, k, i);
                const bool excluded = (spec.bmax_indexing == BmaxIndexing::per_profile)
                                          ? i == coord_of(u, k)
                                          : undesired_set.count(cell) > 0;
                if (!excluded) ctx.w_strategies.push_back(i);
            }
            const int id = static_cast<int>(contexts.size());
            const int ci = static_cast<int>(ui);
            ctx.bmax_id = model.add_variable(
                VarKind::continuous_free, -std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity(), VarRole{RoleType::bmax, k, -1, ci});
            for (int i : ctx.w_strategies)
                ctx.w_ids.push_back(model.add_variable(VarKind::binary, 0.0, 1.0,
                                                       VarRole{RoleType::w, k, -1, ci, i}));
            context_of[key] = id;
            contexts.push_back(std::move(ctx));
        }
    }

    // Accumulates +/- alpha coefficients for the affine payoff b^k(p); frozen or
    // presolved-away alphas contribute nothing.
    auto add_payoff_terms = [&](std::map<int, double>& row, int k, long long p, double sign) {
        auto it = model.alpha_ids.find({k, p});
        if (it == model.alpha_ids.end()) return;
        row[it->second.first] += sign;
        row[it->second.second] -= sign;
    };
    auto emit = [&](const std::map<int, double>& row, Sense sense, double rhs) {
        LinearConstraint c;
        c.terms.assign(row.begin(), row.end());
        c.sense = sense;
        c.rhs = rhs;
        model.add_constraint(std::move(c));
    };

    // Desired strict best-response rows: b^k(d) >= b^k(d') + eps per deviation d'.
    for (long long d : desired) {
        for (int k = 0; k < K; ++k) {
            for (int i = 0; i < dims[k]; ++i) {
                if (i == coord_of(d, k)) continue;
                const long long dev = with_coord(d, k, i);
                std::map<int, double> row;
                add_payoff_terms(row, k, d, +1.0);
                add_payoff_terms(row, k, dev, -1.0);
                emit(row, Sense::ge, spec.epsilon + game.payoff_at(dev, k) - game.payoff_at(d, k));
            }
        }
    }

    // Undesired exclusion: the payoff maximum along player k's line must strictly
    // exceed the undesired cell for at least one player, selected by the w binaries.
    const double M = model.big_m;
    for (size_t ui = 0; ui < undesired.size(); ++ui) {
        const long long u = undesired[ui];
        for (int k = 0; k < K; ++k) {
            detail::UndesiredContext& ctx = contexts[context_of.at(context_key(u, k))];
            {
                std::map<int, double> row;  // bmax >= b^k(u) + eps
                row[ctx.bmax_id] += 1.0;
                add_payoff_terms(row, k, u, -1.0);
                emit(row, Sense::ge, spec.epsilon + game.payoff_at(u, k));
            }
            if (!ctx.rows_emitted) {
                ctx.rows_emitted = true;
                for (int i = 0; i < dims[k]; ++i) {  // bmax >= b^k over the whole line
                    const long long cell = with_coord(u, k, i);
                    std::map<int, double> row;
                    row[ctx.bmax_id] += 1.0;
                    add_payoff_terms(row, k, cell, -1.0);
                    emit(row, Sense::ge, game.payoff_at(cell, k));
                }
                for (size_t wi = 0; wi < ctx.w_strategies.size(); ++wi) {
                    // bmax <= b^k(cell) + (1 - w) M pins the max to the selected cell
                    const long long cell = with_coord(u, k, ctx.w_strategies[wi]);
                    std::map<int, double> row;
                    row[ctx.bmax_id] += 1.0;
                    add_payoff_terms(row, k, cell, -1.0);
                    row[ctx.w_ids[wi]] += M;
                    emit(row, Sense::le, game.payoff_at(cell, k) + M);
                }
                {
                    std::map<int, double> row;  // no ties: at most one selected max
                    for (int w : ctx.w_ids) row[w] += 1.0;
                    emit(row, Sense::le, 1.0);
                }
            }
        }
        {
            std::map<int, double> row;  // at least one player must have a better deviation
            for (int k = 0; k < K; ++k) {
                const detail::UndesiredContext& ctx = contexts[context_of.at(context_key(u, k))];
                for (int w : ctx.w_ids) row[w] += 1.0;
            }
            if (row.empty())
                throw std::invalid_argument(
                    "undesired profile '" + game.profile_label(game.profile_at(u)) +
                    "' has no admissible deviation to select");
            emit(row, Sense::ge, 1.0);
        }
    }

    return model;
}

/// Excludes every solution whose nonzero alphas form a superset of `support`.
/// Gating binaries are shared across cuts; a repeated support only appends the
/// (now redundant) cardinality row.
inline MilpModel add_integer_cut(MilpModel model, std::vector<int> support) {
    if (support.empty())
        throw std::invalid_argument("integer cut requires a nonempty support");
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    for (int id : support) {
        if (id < 0 || id >= static_cast<int>(model.variables.size()))
            throw std::out_of_range("support references unknown variable");
        const RoleType t = model.variables[id].role.type;
        if (t != RoleType::alpha_plus && t != RoleType::alpha_minus)
            throw std::invalid_argument("support must consist of alpha variables");
    }
    const double M = model.big_m;
    const double eps = model.epsilon;
    for (int alpha : support) {
        if (model.y_for_alpha.count(alpha)) continue;
        const int y =
            model.add_variable(VarKind::binary, 0.0, 1.0, VarRole{RoleType::y, -1, -1, -1, -1, alpha});
        model.y_for_alpha[alpha] = y;
        model.add_constraint({{{alpha, 1.0}, {y, -M}}, Sense::le, 0.0});          // alpha <= M y
        model.add_constraint({{{alpha, 1.0}, {y, -(eps + M)}}, Sense::ge, -M});   // alpha >= eps y - M (1 - y)
    }
    LinearConstraint cut;
    for (int alpha : support) cut.terms.push_back({model.y_for_alpha.at(alpha), 1.0});
    std::sort(cut.terms.begin(), cut.terms.end());
    cut.sense = Sense::le;
    cut.rhs = static_cast<double>(support.size()) - 1.0;
    model.add_constraint(std::move(cut));
    return model;
}

}  // namespace nashforge
