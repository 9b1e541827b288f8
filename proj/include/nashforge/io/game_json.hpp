#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nashforge/game.hpp"

namespace nashforge {

namespace detail {

inline void read_payoff_level(const nlohmann::json& node, const std::vector<int>& dims,
                              size_t level, long long base, int num_players,
                              std::vector<double>& flat) {
    if (!node.is_array())
        throw std::invalid_argument("payoffs: expected an array at nesting level " +
                                    std::to_string(level));
    if (level == dims.size()) {
        if (static_cast<int>(node.size()) != num_players)
            throw std::invalid_argument("payoffs: innermost array must hold one entry per player");
        for (int k = 0; k < num_players; ++k) {
            if (!node[k].is_number())
                throw std::invalid_argument("payoffs: non-numeric entry");
            flat[base * num_players + k] = node[k].get<double>();
        }
        return;
    }
    if (static_cast<int>(node.size()) != dims[level])
        throw std::invalid_argument("payoffs: expected " + std::to_string(dims[level]) +
                                    " entries at nesting level " + std::to_string(level));
    for (int i = 0; i < dims[level]; ++i)
        read_payoff_level(node[i], dims, level + 1, base * dims[level] + i, num_players, flat);
}

inline nlohmann::json write_payoff_level(const Game& game, size_t level, long long base) {
    nlohmann::json node = nlohmann::json::array();
    if (level == game.dims().size()) {
        for (int k = 0; k < game.num_players(); ++k) node.push_back(game.payoff_at(base, k));
        return node;
    }
    for (int i = 0; i < game.dims()[level]; ++i)
        node.push_back(write_payoff_level(game, level + 1, base * game.dims()[level] + i));
    return node;
}

}  // namespace detail

inline Game game_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("players") || !doc.contains("payoffs"))
        throw std::invalid_argument("game file needs 'players' and 'payoffs' fields");
    std::vector<PlayerDef> players;
    for (const auto& p : doc.at("players")) {
        PlayerDef def;
        def.name = p.value("name", "P" + std::to_string(players.size() + 1));
        if (!p.contains("strategies") || !p.at("strategies").is_array())
            throw std::invalid_argument("each player needs a 'strategies' array");
        for (const auto& s : p.at("strategies")) def.strategies.push_back(s.get<std::string>());
        players.push_back(std::move(def));
    }
    if (players.empty()) throw std::invalid_argument("game file lists no players");
    std::vector<int> dims;
    long long profiles = 1;
    for (const auto& p : players) {
        dims.push_back(static_cast<int>(p.strategies.size()));
        if (dims.back() == 0) throw std::invalid_argument("player without strategies");
        profiles *= dims.back();
    }
    std::vector<double> flat(profiles * static_cast<long long>(players.size()));
    detail::read_payoff_level(doc.at("payoffs"), dims, 0, 0, static_cast<int>(players.size()),
                              flat);
    return Game::create(std::move(players), std::move(flat));
}

inline nlohmann::json game_to_json(const Game& game) {
    nlohmann::json doc;
    doc["players"] = nlohmann::json::array();
    for (const auto& p : game.players())
        doc["players"].push_back({{"name", p.name}, {"strategies", p.strategies}});
    doc["payoffs"] = detail::write_payoff_level(game, 0, 0);
    return doc;
}

inline Game load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open game file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed game file " + path + ": " + e.what());
    }
    return game_from_json(doc);
}

/// Profile from "C,D" labels, or "1,0" indices in by_index mode.
inline Profile parse_profile_text(const Game& game, const std::string& text, bool by_index) {
    if (by_index) {
        Profile p;
        size_t pos = 0;
        for (int k = 0; k < game.num_players(); ++k) {
            const size_t comma = text.find(',', pos);
            const std::string tok = comma == std::string::npos ? text.substr(pos)
                                                               : text.substr(pos, comma - pos);
            if ((comma == std::string::npos) != (k + 1 == game.num_players()))
                throw std::invalid_argument("profile '" + text + "' has the wrong arity");
            try {
                p.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw std::invalid_argument("profile '" + text + "': bad index '" + tok + "'");
            }
            pos = comma + 1;
        }
        game.check_profile(p);
        return p;
    }
    auto parsed = game.parse_profile(text);
    if (!parsed)
        throw std::invalid_argument("profile '" + text + "' does not match the game's labels");
    return *parsed;
}

}  // namespace nashforge
