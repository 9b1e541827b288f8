#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nashforge/engineering_spec.hpp"
#include "nashforge/io/game_json.hpp"

namespace nashforge {

inline BmaxIndexing bmax_indexing_from_string(const std::string& s) {
    if (s == "per_profile") return BmaxIndexing::per_profile;
    if (s == "paper_shared") return BmaxIndexing::paper_shared;
    throw std::invalid_argument("bmax_indexing must be 'per_profile' or 'paper_shared'");
}

inline std::string to_string(BmaxIndexing b) {
    return b == BmaxIndexing::per_profile ? "per_profile" : "paper_shared";
}

/// Spec fields are all optional; profile strings resolve against the game.
/// max_solutions of 0 means unbounded enumeration.
inline EngineeringSpec spec_from_json(const nlohmann::json& doc, const Game& game,
                                      bool by_index = false) {
    if (!doc.is_object()) throw std::invalid_argument("spec file must be a JSON object");
    EngineeringSpec spec;
    for (const auto& [key, value] : doc.items()) {
        if (key == "desired") {
            for (const auto& s : value)
                spec.desired.push_back(parse_profile_text(game, s.get<std::string>(), by_index));
        } else if (key == "undesired") {
            for (const auto& s : value)
                spec.undesired.push_back(parse_profile_text(game, s.get<std::string>(), by_index));
        } else if (key == "epsilon") {
            spec.epsilon = value.get<double>();
        } else if (key == "big_m") {
            if (!value.is_null()) spec.big_m = value.get<double>();
        } else if (key == "freeze_undesired") {
            spec.freeze_undesired = value.get<bool>();
        } else if (key == "max_perturbation") {
            if (!value.is_null()) spec.max_perturbation = value.get<double>();
        } else if (key == "max_solutions") {
            const int v = value.get<int>();
            if (v == 0)
                spec.max_solutions.reset();
            else
                spec.max_solutions = v;
        } else if (key == "objective_ceiling") {
            if (!value.is_null()) spec.objective_ceiling = value.get<double>();
        } else if (key == "bmax_indexing") {
            spec.bmax_indexing = bmax_indexing_from_string(value.get<std::string>());
        } else {
            throw std::invalid_argument("unknown spec field '" + key + "'");
        }
    }
    return spec;
}

inline nlohmann::json spec_to_json(const EngineeringSpec& spec, const Game& game) {
    nlohmann::json doc;
    doc["desired"] = nlohmann::json::array();
    for (const auto& p : spec.desired) doc["desired"].push_back(game.profile_label(p));
    doc["undesired"] = nlohmann::json::array();
    for (const auto& p : spec.undesired) doc["undesired"].push_back(game.profile_label(p));
    doc["epsilon"] = spec.epsilon;
    if (spec.big_m) doc["big_m"] = *spec.big_m;
    doc["freeze_undesired"] = spec.freeze_undesired;
    if (spec.max_perturbation) doc["max_perturbation"] = *spec.max_perturbation;
    doc["max_solutions"] = spec.max_solutions ? *spec.max_solutions : 0;
    if (spec.objective_ceiling) doc["objective_ceiling"] = *spec.objective_ceiling;
    doc["bmax_indexing"] = to_string(spec.bmax_indexing);
    return doc;
}

inline EngineeringSpec load_spec(const std::string& path, const Game& game,
                                 bool by_index = false) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed spec file " + path + ": " + e.what());
    }
    return spec_from_json(doc, game, by_index);
}

}  // namespace nashforge
