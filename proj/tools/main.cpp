#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nashforge/bench.hpp"
#include "nashforge/detail/format.hpp"
#include "nashforge/io/game_json.hpp"
#include "nashforge/io/solution_json.hpp"
#include "nashforge/io/spec_json.hpp"
#include "nashforge/lp_export.hpp"
#include "nashforge/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;

using nashforge::detail::fmt_num;

struct SpecFlags {
    std::string spec_path;
    std::vector<std::string> desired, undesired;
    double epsilon = 0.01;
    double big_m = 0.0;
    double max_perturbation = 0.0;
    double objective_ceiling = 0.0;
    int max_solutions = -1;  // 0 means unlimited
    bool freeze = true;
    bool by_index = false;
    std::string bmax_indexing = "per_profile";
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
    cmd->add_option("--spec", f.spec_path, "spec file (JSON)");
    cmd->add_option("--desired", f.desired, "profile to make a strict NE (repeatable)");
    cmd->add_option("--undesired", f.undesired, "profile to stop being an NE (repeatable)");
    cmd->add_option("--epsilon", f.epsilon, "strictness margin");
    cmd->add_option("--big-m", f.big_m, "big-M override (auto when omitted)");
    cmd->add_flag("--freeze,!--no-freeze", f.freeze, "forbid edits to undesired cells (default on)");
    cmd->add_option("--max-perturbation", f.max_perturbation, "per-payoff edit cap");
    cmd->add_option("--max-solutions", f.max_solutions, "enumeration cap, 0 = unlimited");
    cmd->add_option("--objective-ceiling", f.objective_ceiling, "stop past this objective");
    cmd->add_option("--bmax-indexing", f.bmax_indexing, "per_profile or paper_shared")
        ->check(CLI::IsMember({"per_profile", "paper_shared"}));
    cmd->add_flag("--by-index", f.by_index, "profiles given as numeric strategy indices");
}

nashforge::EngineeringSpec resolve_spec(const CLI::App* cmd, const SpecFlags& f,
                                        const nashforge::Game& game) {
    nashforge::EngineeringSpec spec;
    if (!f.spec_path.empty()) spec = nashforge::load_spec(f.spec_path, game, f.by_index);
    for (const auto& s : f.desired)
        spec.desired.push_back(nashforge::parse_profile_text(game, s, f.by_index));
    for (const auto& s : f.undesired)
        spec.undesired.push_back(nashforge::parse_profile_text(game, s, f.by_index));
    if (cmd->count("--epsilon")) spec.epsilon = f.epsilon;
    if (cmd->count("--big-m")) spec.big_m = f.big_m;
    if (cmd->count("--freeze") || cmd->count("--no-freeze")) spec.freeze_undesired = f.freeze;
    if (cmd->count("--max-perturbation")) spec.max_perturbation = f.max_perturbation;
    if (cmd->count("--max-solutions")) {
        if (f.max_solutions == 0)
            spec.max_solutions.reset();
        else
            spec.max_solutions = f.max_solutions;
    }
    if (cmd->count("--objective-ceiling")) spec.objective_ceiling = f.objective_ceiling;
    if (cmd->count("--bmax-indexing"))
        spec.bmax_indexing = nashforge::bmax_indexing_from_string(f.bmax_indexing);
    nashforge::validate_spec(game, spec);
    return spec;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write to " + path);
    out << text;
}

void print_solution(std::ostream& os, const nashforge::Game& game, const nashforge::Solution& s,
                    size_t index) {
    os << "solution " << (index + 1) << ": objective " << fmt_num(s.objective) << "\n";
    for (const auto& e : s.perturbations.entries())
        os << "  " << game.player_name(e.player) << " @ " << game.profile_label(e.profile)
           << ": " << (e.delta > 0 ? "+" : "") << fmt_num(e.delta) << "\n";
    os << "  equilibria after engineering:";
    for (const auto& p : s.verification.full_ne_set) os << " " << game.profile_label(p);
    os << "\n";
    for (const auto& w : s.warnings) os << "  warning: " << w << "\n";
}

int cmd_analyze(const std::string& game_path) {
    const nashforge::Game game = nashforge::load_game(game_path);
    for (const auto& p : nashforge::enumerate_pure_nash(game))
        std::cout << game.profile_label(p) << "\n";
    return kExitOk;
}

int cmd_engineer(const CLI::App* cmd, const SpecFlags& flags, const std::string& game_path,
                 const std::string& out_path, bool enumerate_all) {
    const nashforge::Game game = nashforge::load_game(game_path);
    nashforge::EngineeringSpec spec = resolve_spec(cmd, flags, game);
    nashforge::EnumerationResult result;
    if (enumerate_all) {
        result = nashforge::enumerate_solutions(game, spec);
    } else {
        try {
            result.solutions.push_back(nashforge::engineer(game, spec));
            result.stopped_because = nashforge::EnumerationStop::max_solutions;
        } catch (const nashforge::InfeasibleSpecError& e) {
            result.stopped_because = nashforge::EnumerationStop::infeasible;
            result.infeasibility_note = e.what();
        }
    }
    for (size_t i = 0; i < result.solutions.size(); ++i)
        print_solution(std::cout, game, result.solutions[i], i);
    if (result.solutions.empty()) {
        std::cerr << result.infeasibility_note << "\n";
        return kExitInfeasible;
    }
    std::cout << "found " << result.solutions.size() << " solution"
              << (result.solutions.size() == 1 ? "" : "s") << " (stopped: "
              << nashforge::to_string(result.stopped_because) << ")\n";
    if (!out_path.empty())
        write_text(out_path, nashforge::enumeration_to_json(result, game).dump(2) + "\n");
    return kExitOk;
}

int cmd_verify(const CLI::App* cmd, const SpecFlags& flags, const std::string& game_path,
               const std::string& solution_path) {
    const nashforge::Game game = nashforge::load_game(game_path);
    const nashforge::EngineeringSpec spec = resolve_spec(cmd, flags, game);
    const auto doc = nashforge::load_json(solution_path, "solution");
    const auto perturbation_sets = nashforge::perturbations_from_solution_json(doc, game);
    bool all_ok = true;
    for (size_t i = 0; i < perturbation_sets.size(); ++i) {
        const auto report = nashforge::verify_perturbations(game, perturbation_sets[i], spec);
        std::cout << "solution " << (i + 1) << ": " << (report.passed() ? "PASS" : "FAIL")
                  << " (equilibria:";
        for (const auto& p : report.full_ne_set) std::cout << " " << game.profile_label(p);
        std::cout << ")\n";
        all_ok = all_ok && report.passed();
    }
    if (perturbation_sets.empty()) {
        std::cerr << "solution file holds no solutions\n";
        return kExitInfeasible;
    }
    return all_ok ? kExitOk : kExitInfeasible;
}

int cmd_export_lp(const CLI::App* cmd, const SpecFlags& flags, const std::string& game_path,
                  const std::string& out_path) {
    const nashforge::Game game = nashforge::load_game(game_path);
    const nashforge::EngineeringSpec spec = resolve_spec(cmd, flags, game);
    const std::string text = nashforge::export_lp(nashforge::build_engineering_model(game, spec));
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    return kExitOk;
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        sizes.push_back(std::stoi(tok));
    }
    return sizes;
}

int cmd_bench(const std::string& sizes_text, int repeats, std::uint64_t seed, int max_solutions,
              int workers, const std::string& csv_path, const std::string& summary_csv_path) {
    const std::vector<int> sizes = parse_sizes(sizes_text);
    nashforge::EngineeringSpec defaults = nashforge::bench_spec_defaults();
    if (max_solutions == 0)
        defaults.max_solutions.reset();
    else
        defaults.max_solutions = max_solutions;
    const nashforge::BenchReport report =
        nashforge::run_scaling_benchmark(sizes, repeats, defaults, seed, workers);
    for (const auto& line : report.run_log) std::cout << line << "\n";
    for (const auto& err : report.errors) std::cerr << err << "\n";
    std::cout << "payoffs: " << report.payoff_distribution << ", seed " << report.seed << "\n";
    for (const auto& s : report.summary)
        std::cout << "n=" << s.n << " cells=" << s.cells << " solutions=" << s.solutions_found
                  << " median_seconds=" << fmt_num(s.median_seconds) << "\n";
    std::cout << "fit: median_seconds ~ " << fmt_num(report.fit.slope) << " * cells + "
              << fmt_num(report.fit.intercept) << " (r_squared=" << fmt_num(report.fit.r_squared)
              << (report.fit.degenerate ? ", degenerate" : "") << ")\n";
    if (!csv_path.empty()) write_text(csv_path, nashforge::bench_detail_csv(report));
    if (!summary_csv_path.empty()) write_text(summary_csv_path, nashforge::bench_summary_csv(report));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reshape payoffs of finite games so chosen strategy profiles become strict "
                 "pure Nash equilibria while unwanted ones stop being equilibria"};
    app.require_subcommand(1);

    std::string game_path, solution_path, out_path;

    auto* analyze = app.add_subcommand("analyze", "list all pure-strategy Nash equilibria");
    analyze->add_option("game", game_path, "game file (JSON)")->required();

    SpecFlags eng_flags;
    auto* engineer = app.add_subcommand("engineer", "find one minimal intervention");
    engineer->add_option("game", game_path, "game file (JSON)")->required();
    engineer->add_option("-o,--output", out_path, "solution file to write");
    add_spec_flags(engineer, eng_flags);

    SpecFlags enum_flags;
    auto* enumerate = app.add_subcommand("enumerate", "enumerate alternative interventions");
    enumerate->add_option("game", game_path, "game file (JSON)")->required();
    enumerate->add_option("-o,--output", out_path, "solution file to write");
    add_spec_flags(enumerate, enum_flags);

    SpecFlags verify_flags;
    auto* verify = app.add_subcommand("verify", "re-verify a solution file with the oracle");
    verify->add_option("game", game_path, "game file (JSON)")->required();
    verify->add_option("solution", solution_path, "solution file (JSON)")->required();
    add_spec_flags(verify, verify_flags);

    SpecFlags lp_flags;
    auto* export_lp = app.add_subcommand("export-lp", "write the model in LP text format");
    export_lp->add_option("game", game_path, "game file (JSON)")->required();
    export_lp->add_option("-o,--output", out_path, "LP file to write (stdout when omitted)");
    add_spec_flags(export_lp, lp_flags);

    std::string sizes_text;
    int repeats = 3, bench_max_solutions = 16, workers = 0;
    std::uint64_t seed = 0;
    std::string csv_path, summary_csv_path;
    auto* bench = app.add_subcommand("bench", "scaling benchmark on seeded random games");
    bench->add_option("--sizes", sizes_text, "comma-separated strategy counts")->required();
    bench->add_option("--repeats", repeats, "games per size");
    bench->add_option("--seed", seed, "random seed");
    bench->add_option("--max-solutions", bench_max_solutions, "enumeration cap per game");
    bench->add_option("--workers", workers, "worker threads (default: env or processor count)");
    bench->add_option("--csv", csv_path, "per-solution CSV path");
    bench->add_option("--summary-csv", summary_csv_path, "per-size summary CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(game_path);
        if (engineer->parsed()) return cmd_engineer(engineer, eng_flags, game_path, out_path, false);
        if (enumerate->parsed()) return cmd_engineer(enumerate, enum_flags, game_path, out_path, true);
        if (verify->parsed()) return cmd_verify(verify, verify_flags, game_path, solution_path);
        if (export_lp->parsed()) return cmd_export_lp(export_lp, lp_flags, game_path, out_path);
        if (bench->parsed())
            return cmd_bench(sizes_text, repeats, seed, bench_max_solutions, workers, csv_path,
                             summary_csv_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        // Solver breakdowns and oracle-verification failures are bugs, not usage.
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return kExitInputError;
}
