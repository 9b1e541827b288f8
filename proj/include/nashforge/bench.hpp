#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "nashforge/detail/format.hpp"
#include "nashforge/game.hpp"
#include "nashforge/pipeline.hpp"

namespace nashforge {

struct RandomGameInstance {
    Game game;
    Profile undesired;  // planted NE
    Profile desired;    // distinct target cell
};

namespace detail {

// splitmix64; stable across platforms, unlike distribution adapters.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix64(seed ^ 0xD1B54A32D192ED03ull)) {}
    std::uint64_t next() { return state_ = mix64(state_); }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int below(int n) { return std::min(n - 1, static_cast<int>(uniform() * n)); }

private:
    std::uint64_t state_;
};

inline std::uint64_t task_seed(std::uint64_t seed, int n, int repeat) {
    return mix64(mix64(seed + 0x1000003ull * static_cast<std::uint64_t>(n)) +
                 static_cast<std::uint64_t>(repeat));
}

}  // namespace detail

/// Two-player n-by-n game with i.i.d. uniform[-10,10] payoffs and one profile
/// planted as a strict NE by raising both of its payoffs one above the best
/// alternative in their row/column contexts.
inline RandomGameInstance generate_random_game(int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random games need at least 2 strategies");
    detail::Rng rng(seed);
    std::vector<std::string> labels;
    for (int i = 1; i <= n; ++i) labels.push_back("S" + std::to_string(i));
    std::vector<double> payoffs(static_cast<size_t>(n) * n * 2);
    for (size_t idx = 0; idx < payoffs.size(); ++idx) payoffs[idx] = rng.uniform(-10.0, 10.0);

    const int r = rng.below(n), c = rng.below(n);
    double col_best = -std::numeric_limits<double>::infinity();
    double row_best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (i != r) col_best = std::max(col_best, payoffs[(static_cast<size_t>(i) * n + c) * 2]);
    for (int j = 0; j < n; ++j)
        if (j != c) row_best = std::max(row_best, payoffs[(static_cast<size_t>(r) * n + j) * 2 + 1]);
    payoffs[(static_cast<size_t>(r) * n + c) * 2] = col_best + 1.0;
    payoffs[(static_cast<size_t>(r) * n + c) * 2 + 1] = row_best + 1.0;

    int dr = r, dc = c;
    while (dr == r && dc == c) {
        dr = rng.below(n);
        dc = rng.below(n);
    }
    Game game = Game::create({{"P1", labels}, {"P2", labels}}, std::move(payoffs));
    return {std::move(game), Profile{r, c}, Profile{dr, dc}};
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    bool degenerate = false;
};

/// Ordinary least squares with r^2 = 1 - SS_res/SS_tot; constant-y or
/// single-x inputs report r^2 = 1 with the degeneracy flag set.
inline LinearFit linear_fit_r2(const std::vector<std::pair<double, double>>& points) {
    LinearFit fit;
    if (points.empty()) {
        fit.degenerate = true;
        return fit;
    }
    double mx = 0, my = 0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= points.size();
    my /= points.size();
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) {
        fit.degenerate = true;
        fit.intercept = my;
        return fit;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (const auto& [x, y] : points) {
        const double e = y - (fit.intercept + fit.slope * x);
        ss_res += e * e;
        ss_tot += (y - my) * (y - my);
    }
    if (ss_tot == 0.0) {
        fit.degenerate = true;
        fit.r_squared = 1.0;
    } else {
        fit.r_squared = 1.0 - ss_res / ss_tot;
    }
    return fit;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

struct BenchRow {
    int n = 0;
    long long cells = 0;
    int repeat = 0;
    int solution_index = 0;
    double seconds = 0.0;
    double objective = 0.0;
};

struct BenchSizeSummary {
    int n = 0;
    long long cells = 0;
    double median_seconds = 0.0;
    int solutions_found = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchSizeSummary> summary;
    LinearFit fit;
    std::uint64_t seed = 0;
    std::string payoff_distribution = "uniform[-10,10]";
    std::vector<std::string> run_log;  // one line per (n, repeat): count and terminator
    std::vector<std::string> errors;
};

inline EngineeringSpec bench_spec_defaults() {
    EngineeringSpec spec;
    spec.epsilon = 0.01;
    spec.freeze_undesired = true;
    spec.max_solutions = 16;
    return spec;
}

inline int bench_worker_count() {
    if (const char* env = std::getenv("NASHFORGE_BENCH_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Runs enumerate_solutions over seeded random games of each size and reports
/// per-solution solve times plus an OLS fit of median time against cell count.
/// Tasks are independent and scheduled on a small worker pool; results merge
/// by task slot, so everything except the timings is schedule-independent.
inline BenchReport run_scaling_benchmark(const std::vector<int>& sizes, int repeats,
                                         const EngineeringSpec& spec_defaults,
                                         std::uint64_t seed, int workers = 0) {
    if (sizes.empty()) throw std::invalid_argument("benchmark needs at least one size");
    if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
    for (int n : sizes)
        if (n < 2) throw std::invalid_argument("benchmark sizes must be at least 2");

    struct Task {
        int n = 0, repeat = 0;
        std::vector<BenchRow> rows;
        std::string log, error;
    };
    std::vector<Task> tasks;
    for (int n : sizes)
        for (int rep = 0; rep < repeats; ++rep) {
            Task t;
            t.n = n;
            t.repeat = rep;
            tasks.push_back(std::move(t));
        }

    auto run_task = [&](Task& task) {
        try {
            RandomGameInstance inst =
                generate_random_game(task.n, detail::task_seed(seed, task.n, task.repeat));
            EngineeringSpec spec = spec_defaults;
            spec.desired = {inst.desired};
            spec.undesired = {inst.undesired};
            EnumerationResult result = enumerate_solutions(inst.game, spec);
            for (size_t i = 0; i < result.solutions.size(); ++i) {
                const Solution& s = result.solutions[i];
                task.rows.push_back({task.n, static_cast<long long>(task.n) * task.n,
                                     task.repeat, static_cast<int>(i), s.stats.wall_seconds,
                                     s.objective});
            }
            std::ostringstream os;
            os << "n=" << task.n << " repeat=" << task.repeat
               << " solutions=" << result.solutions.size() << " stop=";
            switch (result.stopped_because) {
                case EnumerationStop::infeasible: os << "infeasible"; break;
                case EnumerationStop::max_solutions: os << "max_solutions"; break;
                case EnumerationStop::objective_ceiling: os << "objective_ceiling"; break;
                case EnumerationStop::empty_support: os << "empty_support"; break;
            }
            task.log = os.str();
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "n=" << task.n << " repeat=" << task.repeat << " failed: " << e.what();
            task.error = os.str();
        }
    };

    int pool = workers > 0 ? workers : bench_worker_count();
    pool = std::min<int>(pool, static_cast<int>(tasks.size()));
    if (pool <= 1) {
        for (auto& t : tasks) run_task(t);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> threads;
        for (int t = 0; t < pool; ++t)
            threads.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    run_task(tasks[i]);
            });
        for (auto& th : threads) th.join();
    }

    BenchReport report;
    report.seed = seed;
    for (const auto& t : tasks) {
        report.rows.insert(report.rows.end(), t.rows.begin(), t.rows.end());
        if (!t.log.empty()) report.run_log.push_back(t.log);
        if (!t.error.empty()) report.errors.push_back(t.error);
    }
    std::vector<std::pair<double, double>> fit_points;
    for (int n : sizes) {
        std::vector<double> times;
        int found = 0;
        for (const auto& row : report.rows)
            if (row.n == n) {
                times.push_back(row.seconds);
                ++found;
            }
        if (times.empty()) continue;
        BenchSizeSummary s;
        s.n = n;
        s.cells = static_cast<long long>(n) * n;
        s.median_seconds = median(times);
        s.solutions_found = found;
        report.summary.push_back(s);
        fit_points.push_back({static_cast<double>(s.cells), s.median_seconds});
    }
    report.fit = linear_fit_r2(fit_points);
    return report;
}

inline std::string bench_detail_csv(const BenchReport& report) {
    std::string out = "n,cells,repeat,solution_index,seconds,objective\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.cells) + "," +
               std::to_string(r.repeat) + "," + std::to_string(r.solution_index) + "," +
               detail::fmt_num(r.seconds) + "," + detail::fmt_num(r.objective) + "\n";
    }
    return out;
}

inline std::string bench_summary_csv(const BenchReport& report) {
    std::string out = "n,cells,median_seconds\n";
    for (const auto& s : report.summary)
        out += std::to_string(s.n) + "," + std::to_string(s.cells) + "," +
               detail::fmt_num(s.median_seconds) + "\n";
    return out;
}

}  // namespace nashforge
