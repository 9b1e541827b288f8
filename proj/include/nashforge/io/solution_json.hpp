#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nashforge/io/game_json.hpp"
#include "nashforge/pipeline.hpp"

namespace nashforge {

inline std::string to_string(MilpStatus s) {
    switch (s) {
        case MilpStatus::optimal: return "optimal";
        case MilpStatus::infeasible: return "infeasible";
        case MilpStatus::node_limit: return "node_limit";
        case MilpStatus::time_limit: return "time_limit";
    }
    return "unknown";
}

inline std::string to_string(EnumerationStop s) {
    switch (s) {
        case EnumerationStop::infeasible: return "infeasible";
        case EnumerationStop::max_solutions: return "max_solutions";
        case EnumerationStop::objective_ceiling: return "objective_ceiling";
        case EnumerationStop::empty_support: return "empty_support";
    }
    return "unknown";
}

// Wall-clock time deliberately stays out of solution files so identical runs
// produce byte-identical output; it is reported on the console instead.
inline nlohmann::json solution_to_json(const Solution& sol, const Game& game) {
    nlohmann::json doc;
    doc["objective"] = sol.objective;
    doc["perturbations"] = nlohmann::json::array();
    for (const auto& e : sol.perturbations.entries())
        doc["perturbations"].push_back({{"player", e.player},
                                        {"player_name", game.player_name(e.player)},
                                        {"profile", game.profile_label(e.profile)},
                                        {"delta", e.delta}});
    doc["support"] = sol.support;
    doc["verification"] = {{"desired_are_ne", sol.verification.desired_are_ne},
                           {"undesired_not_ne", sol.verification.undesired_not_ne}};
    doc["verification"]["nash_equilibria"] = nlohmann::json::array();
    for (const auto& p : sol.verification.full_ne_set)
        doc["verification"]["nash_equilibria"].push_back(game.profile_label(p));
    doc["solver"] = {{"status", to_string(sol.stats.status)},
                     {"nodes", sol.stats.nodes_explored},
                     {"lp_iterations", sol.stats.lp_iterations}};
    if (!sol.warnings.empty()) doc["warnings"] = sol.warnings;
    return doc;
}

inline nlohmann::json enumeration_to_json(const EnumerationResult& result, const Game& game) {
    nlohmann::json doc;
    doc["solutions"] = nlohmann::json::array();
    for (const auto& s : result.solutions) doc["solutions"].push_back(solution_to_json(s, game));
    doc["stopped_because"] = to_string(result.stopped_because);
    if (!result.infeasibility_note.empty()) doc["infeasibility_note"] = result.infeasibility_note;
    return doc;
}

/// Reads back just the perturbation lists; enough to re-verify independently.
inline std::vector<PerturbationSet> perturbations_from_solution_json(const nlohmann::json& doc,
                                                                     const Game& game) {
    if (!doc.is_object() || !doc.contains("solutions"))
        throw std::invalid_argument("solution file needs a 'solutions' array");
    std::vector<PerturbationSet> out;
    for (const auto& sol : doc.at("solutions")) {
        std::vector<PerturbationEntry> entries;
        for (const auto& p : sol.at("perturbations")) {
            PerturbationEntry e;
            e.player = p.at("player").get<int>();
            if (e.player < 0 || e.player >= game.num_players())
                throw std::invalid_argument("perturbation references unknown player");
            e.profile = parse_profile_text(game, p.at("profile").get<std::string>(), false);
            e.delta = p.at("delta").get<double>();
            if (e.delta == 0.0) continue;  // hand-edited no-ops are tolerated
            entries.push_back(std::move(e));
        }
        out.push_back(PerturbationSet::from_entries(std::move(entries)));
    }
    return out;
}

inline nlohmann::json load_json(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(std::string("cannot open ") + what + " file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed ") + what + " file " + path + ": " +
                                    e.what());
    }
    return doc;
}

}  // namespace nashforge
