#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nashforge {

// One strategy index per player; position k indexes into player k's strategy list.
using Profile = std::vector<int>;

struct PlayerDef {
    std::string name;
    std::vector<std::string> strategies;
};

// Weak-inequality NE comparisons; strictness comes from the engineering margin,
// never from the oracle.
inline constexpr double kNashComparisonTol = 1e-9;

// Brute-force NE enumeration refuses tensors above this many profiles.
inline constexpr long long kMaxOracleProfiles = 10'000'000;

/// Finite normal-form game: payoff tensor over strategy profiles.
///
/// Payoffs are stored flat, profile-major with player 0 outermost,
/// then one entry per player: payoffs_[p * K + k]. Immutable after
/// construction and safe to share across threads.
class Game {
public:
    static Game create(std::vector<PlayerDef> players, std::vector<double> payoffs) {
        if (players.empty())
            throw std::invalid_argument("game needs at least one player");
        std::vector<int> dims;
        dims.reserve(players.size());
        long long profiles = 1;
        for (const auto& p : players) {
            if (p.strategies.empty())
                throw std::invalid_argument("player '" + p.name + "' has no strategies");
            std::set<std::string_view> seen(p.strategies.begin(), p.strategies.end());
            if (seen.size() != p.strategies.size())
                throw std::invalid_argument("duplicate strategy label for player '" + p.name + "'");
            dims.push_back(static_cast<int>(p.strategies.size()));
            profiles *= static_cast<long long>(p.strategies.size());
        }
        const long long expected = profiles * static_cast<long long>(players.size());
        if (static_cast<long long>(payoffs.size()) != expected) {
            std::ostringstream os;
            os << "payoff count mismatch: got " << payoffs.size() << ", expected " << expected;
            throw std::invalid_argument(os.str());
        }
        for (double v : payoffs)
            if (!std::isfinite(v))
                throw std::invalid_argument("payoffs must be finite");
        return Game(std::move(players), std::move(dims), std::move(payoffs), profiles);
    }

    int num_players() const { return static_cast<int>(players_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    int num_strategies(int player) const { return dims_.at(player); }
    long long num_profiles() const { return num_profiles_; }
    const std::vector<PlayerDef>& players() const { return players_; }
    const std::string& player_name(int k) const { return players_.at(k).name; }

    long long profile_index(const Profile& s) const {
        check_profile(s);
        long long idx = 0;
        for (int k = 0; k < num_players(); ++k)
            idx = idx * dims_[k] + s[k];
        return idx;
    }

    Profile profile_at(long long index) const {
        if (index < 0 || index >= num_profiles_)
            throw std::out_of_range("profile index out of range");
        Profile s(players_.size());
        for (int k = num_players() - 1; k >= 0; --k) {
            s[k] = static_cast<int>(index % dims_[k]);
            index /= dims_[k];
        }
        return s;
    }

    double payoff(const Profile& s, int player) const {
        return payoff_at(profile_index(s), player);
    }

    double payoff_at(long long profile_idx, int player) const {
        if (player < 0 || player >= num_players())
            throw std::out_of_range("player index out of range");
        if (profile_idx < 0 || profile_idx >= num_profiles_)
            throw std::out_of_range("profile index out of range");
        return payoffs_[profile_idx * num_players() + player];
    }

    double min_payoff() const { return *std::min_element(payoffs_.begin(), payoffs_.end()); }
    double max_payoff() const { return *std::max_element(payoffs_.begin(), payoffs_.end()); }
    double payoff_range() const { return max_payoff() - min_payoff(); }

    /// "C,D" style label for a profile.
    std::string profile_label(const Profile& s) const {
        check_profile(s);
        std::string out;
        for (int k = 0; k < num_players(); ++k) {
            if (k) out += ',';
            out += players_[k].strategies[s[k]];
        }
        return out;
    }

    /// Parses a comma-joined label profile ("C,D"); nullopt if any label is unknown.
    std::optional<Profile> parse_profile(std::string_view text) const {
        Profile s;
        size_t pos = 0;
        for (int k = 0; k < num_players(); ++k) {
            size_t comma = text.find(',', pos);
            std::string_view tok = (comma == std::string_view::npos)
                                       ? text.substr(pos)
                                       : text.substr(pos, comma - pos);
            if (k + 1 < num_players() && comma == std::string_view::npos) return std::nullopt;
            if (k + 1 == num_players() && comma != std::string_view::npos) return std::nullopt;
            const auto& labels = players_[k].strategies;
            auto it = std::find(labels.begin(), labels.end(), std::string(tok));
            if (it == labels.end()) return std::nullopt;
            s.push_back(static_cast<int>(it - labels.begin()));
            pos = comma + 1;
        }
        return s;
    }

    Game with_payoffs(std::vector<double> payoffs) const {
        return create(players_, std::move(payoffs));
    }

    const std::vector<double>& raw_payoffs() const { return payoffs_; }

    void check_profile(const Profile& s) const {
        if (static_cast<int>(s.size()) != num_players())
            throw std::out_of_range("profile has wrong number of coordinates");
        for (int k = 0; k < num_players(); ++k)
            if (s[k] < 0 || s[k] >= dims_[k])
                throw std::out_of_range("strategy index out of range for player " + std::to_string(k));
    }

private:
    Game(std::vector<PlayerDef> players, std::vector<int> dims, std::vector<double> payoffs,
         long long num_profiles)
        : players_(std::move(players)),
          dims_(std::move(dims)),
          payoffs_(std::move(payoffs)),
          num_profiles_(num_profiles) {}

    std::vector<PlayerDef> players_;
    std::vector<int> dims_;
    std::vector<double> payoffs_;
    long long num_profiles_ = 0;
};

/// All profiles equal to `s` except player `k`'s coordinate, ascending by strategy.
inline std::vector<Profile> unilateral_deviations(const Game& game, const Profile& s, int player) {
    game.check_profile(s);
    if (player < 0 || player >= game.num_players())
        throw std::out_of_range("player index out of range");
    std::vector<Profile> out;
    out.reserve(game.num_strategies(player) - 1);
    for (int i = 0; i < game.num_strategies(player); ++i) {
        if (i == s[player]) continue;
        Profile d = s;
        d[player] = i;
        out.push_back(std::move(d));
    }
    return out;
}

inline bool is_pure_nash(const Game& game, const Profile& s) {
    const long long base = game.profile_index(s);
    for (int k = 0; k < game.num_players(); ++k) {
        const double own = game.payoff_at(base, k);
        for (const Profile& d : unilateral_deviations(game, s, k))
            if (own < game.payoff(d, k) - kNashComparisonTol) return false;
    }
    return true;
}

/// Brute force over all profiles, ascending flat-index order.
inline std::vector<Profile> enumerate_pure_nash(const Game& game) {
    if (game.num_profiles() > kMaxOracleProfiles)
        throw std::invalid_argument("game too large for brute-force NE enumeration");
    std::vector<Profile> out;
    for (long long p = 0; p < game.num_profiles(); ++p) {
        Profile s = game.profile_at(p);
        if (is_pure_nash(game, s)) out.push_back(std::move(s));
    }
    return out;
}

struct PerturbationEntry {
    int player = 0;
    Profile profile;
    double delta = 0.0;
};

/// Sparse signed payoff edits, one net delta per (player, profile) key.
/// Entries are kept sorted by (player, profile) for deterministic output.
class PerturbationSet {
public:
    PerturbationSet() = default;

    static PerturbationSet from_entries(std::vector<PerturbationEntry> entries) {
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            if (a.player != b.player) return a.player < b.player;
            return a.profile < b.profile;
        });
        for (size_t i = 0; i + 1 < entries.size(); ++i)
            if (entries[i].player == entries[i + 1].player &&
                entries[i].profile == entries[i + 1].profile)
                throw std::invalid_argument("duplicate (player, profile) perturbation key");
        for (const auto& e : entries) {
            if (!std::isfinite(e.delta) || e.delta == 0.0)
                throw std::invalid_argument("perturbation deltas must be finite and nonzero");
        }
        PerturbationSet ps;
        ps.entries_ = std::move(entries);
        return ps;
    }

    const std::vector<PerturbationEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    size_t size() const { return entries_.size(); }

    double total_magnitude() const {
        double t = 0;
        for (const auto& e : entries_) t += std::abs(e.delta);
        return t;
    }

    bool touches_profile(const Profile& s) const {
        return std::any_of(entries_.begin(), entries_.end(),
                           [&](const auto& e) { return e.profile == s; });
    }

private:
    std::vector<PerturbationEntry> entries_;
};

/// Returns a new game with delta added at each listed key; the input is untouched.
inline Game apply_perturbations(const Game& game, const PerturbationSet& perturbations) {
    std::vector<double> payoffs = game.raw_payoffs();
    for (const auto& e : perturbations.entries()) {
        if (e.player < 0 || e.player >= game.num_players())
            throw std::out_of_range("perturbation player index out of range");
        const long long p = game.profile_index(e.profile);
        payoffs[p * game.num_players() + e.player] += e.delta;
    }
    return game.with_payoffs(std::move(payoffs));
}

}  // namespace nashforge
