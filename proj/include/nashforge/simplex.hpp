#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "nashforge/milp_model.hpp"

namespace nashforge {

enum class LpStatus { optimal, infeasible, unbounded };

/// Basis snapshot for warm starts. Basic entries are structural ids, or
/// -(row+1) for the slack of that row, so a snapshot survives model growth.
struct Basis {
    std::vector<int> basic;
    std::vector<std::uint8_t> struct_status;
    std::vector<std::uint8_t> slack_status;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> values;  // structural variables, by model id
    Basis basis;
    long long iterations = 0;
};

struct SimplexLimits {
    double feasibility_tol = 1e-7;
    double optimality_tol = 1e-9;
    int stall_limit = 300;      // non-improving iterations before Bland's rule
    int refactor_interval = 100;  // eta-file length before refactorizing
    long long max_iterations = 2'000'000;
};

/// Bounded-variable primal simplex over a MilpModel, binaries relaxed to [0,1].
///
/// Columns are stored sparse; the basis is kept as a sparse LU factorization
/// plus a product-form eta file, refactorized periodically. Phase 1 drives out
/// bound violations with a composite infeasibility objective, so any starting
/// basis (the cold slack basis or a warm hint after bound changes) is usable.
class SimplexSolver {
    enum Status : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFreeNonbasic = 3 };
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    struct Eta {  // elementary transformation from one pivot: column w at row r
        int row = -1;
        double pivot = 1.0;
        std::vector<std::pair<int, double>> terms;  // nonzeros of w excluding the pivot row
    };

public:
    explicit SimplexSolver(const MilpModel& model, SimplexLimits limits = {})
        : limits_(limits),
          nstruct_(static_cast<int>(model.variables.size())),
          m_(static_cast<int>(model.constraints.size())),
          ncols_(nstruct_ + m_) {
        cols_.resize(ncols_);
        lo_.resize(ncols_);
        up_.resize(ncols_);
        cost_.assign(ncols_, 0.0);
        for (int j = 0; j < nstruct_; ++j) {
            const auto& v = model.variables[j];
            if (v.kind == VarKind::binary) {
                lo_[j] = 0.0;
                up_[j] = 1.0;
            } else {
                lo_[j] = v.lower;
                up_[j] = v.upper;
            }
            cost_[j] = model.objective[j];
        }
        rhs_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            const auto& c = model.constraints[i];
            rhs_[i] = c.rhs;
            for (const auto& [id, coef] : c.terms) cols_[id].push_back({i, coef});
            const int slack = nstruct_ + i;
            cols_[slack].push_back({i, 1.0});
            switch (c.sense) {
                case Sense::le: lo_[slack] = 0.0; up_[slack] = kInf; break;
                case Sense::ge: lo_[slack] = -kInf; up_[slack] = 0.0; break;
                case Sense::eq: lo_[slack] = 0.0; up_[slack] = 0.0; break;
            }
        }
        xb_.resize(m_);
        y_.resize(m_);
        w_.resize(m_);
        scratch_.resize(m_);
        reset_to_slack_basis();
    }

    int num_rows() const { return m_; }
    int num_structural() const { return nstruct_; }

    // Bound changes keep the factorization valid; only values need refreshing.
    void set_var_bounds(int j, double lo, double hi) {
        lo_[j] = lo;
        up_[j] = hi;
        if (status_[j] == kAtLower || status_[j] == kAtUpper) status_[j] = pick_bound_status(j);
        dirty_values_ = true;
    }

    double lower_bound(int j) const { return lo_[j]; }
    double upper_bound(int j) const { return up_[j]; }

    void reset_to_slack_basis() {
        status_.resize(ncols_);
        for (int j = 0; j < ncols_; ++j) status_[j] = pick_bound_status(j);
        basic_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            basic_[i] = nstruct_ + i;
            status_[nstruct_ + i] = kBasic;
        }
        factorized_ = false;
        allow_reset_ = false;  // resetting again cannot help
        dirty_values_ = true;
    }

    void set_basis(const Basis& hint) {
        status_.resize(ncols_);
        for (int j = 0; j < ncols_; ++j) status_[j] = pick_bound_status(j);
        for (int j = 0; j < nstruct_ && j < static_cast<int>(hint.struct_status.size()); ++j)
            if (hint.struct_status[j] == kAtUpper && up_[j] < kInf && lo_[j] != up_[j])
                status_[j] = kAtUpper;
        for (int i = 0; i < m_ && i < static_cast<int>(hint.slack_status.size()); ++i) {
            const int j = nstruct_ + i;
            if (hint.slack_status[i] == kAtUpper && up_[j] < kInf && lo_[j] != up_[j])
                status_[j] = kAtUpper;
        }
        basic_.assign(m_, -1);
        std::vector<char> used(ncols_, 0);
        for (int i = 0; i < m_ && i < static_cast<int>(hint.basic.size()); ++i) {
            const int enc = hint.basic[i];
            int var = -1;
            if (enc >= 0 && enc < nstruct_) var = enc;
            else if (enc < 0 && -(enc + 1) < m_) var = nstruct_ + (-(enc + 1));
            if (var >= 0 && !used[var]) {
                basic_[i] = var;
                used[var] = 1;
            }
        }
        for (int i = 0; i < m_; ++i) {  // fill gaps with unused slacks, own row first
            if (basic_[i] >= 0) continue;
            if (!used[nstruct_ + i]) {
                basic_[i] = nstruct_ + i;
                used[nstruct_ + i] = 1;
            }
        }
        int next_slack = 0;
        for (int i = 0; i < m_; ++i) {
            if (basic_[i] >= 0) continue;
            while (used[nstruct_ + next_slack]) ++next_slack;
            basic_[i] = nstruct_ + next_slack;
            used[nstruct_ + next_slack] = 1;
        }
        for (int i = 0; i < m_; ++i) status_[basic_[i]] = kBasic;
        factorized_ = false;
        allow_reset_ = true;
        dirty_values_ = true;
    }

    Basis snapshot_basis() const {
        Basis b;
        b.basic.resize(m_);
        for (int i = 0; i < m_; ++i)
            b.basic[i] = basic_[i] < nstruct_ ? basic_[i] : -((basic_[i] - nstruct_) + 1);
        b.struct_status.assign(status_.begin(), status_.begin() + nstruct_);
        b.slack_status.assign(status_.begin() + nstruct_, status_.end());
        return b;
    }

    /// Re-optimizes from the current basis and bound state.
    LpSolution solve() {
        bland_ = false;
        stall_count_ = 0;
        for (int round = 0; round < 3; ++round) {
            if (!factorized_) factorize();
            if (dirty_values_) compute_basic_values();
            LpStatus st = run_phase(true);
            if (st == LpStatus::infeasible && !etas_.empty()) {
                // Re-prove from a fresh factorization before trusting it.
                factorize();
                compute_basic_values();
                st = run_phase(true);
            }
            if (st == LpStatus::optimal) st = run_phase(false);
            if (st != LpStatus::optimal) return finish(st);
            factorize();
            compute_basic_values();
            if (max_violation() <= limits_.feasibility_tol) return finish(st);
            // Drifted during the solve; refine from the fresh factorization.
        }
        throw std::runtime_error("simplex numerical instability: refinement failed");
    }

    long long total_iterations() const { return iterations_; }

private:
    Status pick_bound_status(int j) const {
        if (lo_[j] == up_[j]) return kAtLower;
        if (lo_[j] > -kInf) return kAtLower;
        if (up_[j] < kInf) return kAtUpper;
        return kFreeNonbasic;
    }

    double nonbasic_value(int j) const {
        switch (status_[j]) {
            case kAtLower: return lo_[j];
            case kAtUpper: return up_[j];
            case kFreeNonbasic: return 0.0;
            default: throw std::logic_error("basic variable has no nonbasic value");
        }
    }

    void factorize() {
        etas_.clear();
        if (m_ == 0) {
            factorized_ = true;
            return;
        }
        std::vector<Eigen::Triplet<double>> trips;
        for (int i = 0; i < m_; ++i)
            for (const auto& [row, coef] : cols_[basic_[i]]) trips.push_back({row, i, coef});
        Eigen::SparseMatrix<double> B(m_, m_);
        B.setFromTriplets(trips.begin(), trips.end());
        lu_.compute(B);
        if (lu_.info() != Eigen::Success) {
            if (!allow_reset_)
                throw std::runtime_error("singular basis: numerical breakdown");
            reset_to_slack_basis();  // always factorizable
            factorize();
            return;
        }
        factorized_ = true;
        allow_reset_ = true;
    }

    // x <- B^{-1} x through the LU factors and the eta file.
    void ftran(Eigen::VectorXd& x) {
        if (m_ == 0) return;
        solve_tmp_ = lu_.solve(x);
        x.swap(solve_tmp_);
        for (const Eta& e : etas_) {
            const double d = x(e.row) / e.pivot;
            if (d != 0.0) {
                for (const auto& [i, wi] : e.terms) x(i) -= wi * d;
            }
            x(e.row) = d;
        }
    }

    // y <- B^{-T} y: eta transposes in reverse order, then the LU transpose.
    void btran(Eigen::VectorXd& y) {
        if (m_ == 0) return;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double dot = it->pivot * y(it->row);
            for (const auto& [i, wi] : it->terms) dot += wi * y(i);
            y(it->row) -= (dot - y(it->row)) / it->pivot;
        }
        solve_tmp_ = lu_.transpose().solve(y);
        y.swap(solve_tmp_);
    }

    void compute_basic_values() {
        scratch_.setZero();
        for (int i = 0; i < m_; ++i) scratch_(i) = rhs_[i];
        for (int j = 0; j < ncols_; ++j) {
            if (status_[j] == kBasic) continue;
            const double xj = nonbasic_value(j);
            if (xj == 0.0) continue;
            for (const auto& [row, coef] : cols_[j]) scratch_(row) -= coef * xj;
        }
        ftran(scratch_);
        xb_ = scratch_;
        dirty_values_ = false;
    }

    double max_violation() const {
        double v = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int j = basic_[i];
            v = std::max(v, lo_[j] - xb_(i));
            v = std::max(v, xb_(i) - up_[j]);
        }
        return v;
    }

    double infeasibility_sum() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int j = basic_[i];
            if (xb_(i) < lo_[j]) s += lo_[j] - xb_(i);
            if (xb_(i) > up_[j]) s += xb_(i) - up_[j];
        }
        return s;
    }

    double current_objective() const {
        double obj = 0.0;
        for (int i = 0; i < m_; ++i) obj += cost_[basic_[i]] * xb_(i);
        for (int j = 0; j < ncols_; ++j)
            if (status_[j] != kBasic && cost_[j] != 0.0) obj += cost_[j] * nonbasic_value(j);
        return obj;
    }

    double reduced_cost(int j, const Eigen::VectorXd& y, bool phase1) const {
        double d = phase1 ? 0.0 : cost_[j];
        for (const auto& [row, coef] : cols_[j]) d -= y(row) * coef;
        return d;
    }

    LpStatus run_phase(bool phase1) {
        const double ftol = limits_.feasibility_tol;
        const double dtol = limits_.optimality_tol;
        double last_measure = kInf;
        for (;;) {
            if (phase1 && max_violation() <= ftol) return LpStatus::optimal;
            if (++iterations_ > limits_.max_iterations)
                throw std::runtime_error("simplex iteration limit exceeded");
            if (static_cast<int>(etas_.size()) >= limits_.refactor_interval) {
                factorize();
                compute_basic_values();
            }

            // Dual vector: composite infeasibility costs in phase 1, model costs in phase 2.
            y_.setZero();
            if (phase1) {
                for (int i = 0; i < m_; ++i) {
                    const int j = basic_[i];
                    if (xb_(i) < lo_[j] - ftol) y_(i) = -1.0;
                    else if (xb_(i) > up_[j] + ftol) y_(i) = 1.0;
                }
            } else {
                for (int i = 0; i < m_; ++i) y_(i) = cost_[basic_[i]];
            }
            btran(y_);

            // Pricing: Dantzig by default, Bland once stalled.
            int enter = -1, dir = 0;
            double best = dtol;
            for (int j = 0; j < ncols_; ++j) {
                if (status_[j] == kBasic || lo_[j] == up_[j]) continue;
                const double d = reduced_cost(j, y_, phase1);
                int cand = 0;
                if (status_[j] == kAtLower && d < -dtol) cand = +1;
                else if (status_[j] == kAtUpper && d > dtol) cand = -1;
                else if (status_[j] == kFreeNonbasic && std::abs(d) > dtol) cand = d > 0 ? -1 : +1;
                if (!cand) continue;
                if (bland_) {
                    enter = j;
                    dir = cand;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    enter = j;
                    dir = cand;
                }
            }
            if (enter < 0)
                return !phase1 || max_violation() <= ftol ? LpStatus::optimal : LpStatus::infeasible;

            // FTRAN; basic i then moves at rate -dir*w_i per unit entering step.
            w_.setZero();
            for (const auto& [row, coef] : cols_[enter]) w_(row) += coef;
            ftran(w_);

            double tmax = up_[enter] - lo_[enter];  // bound-flip distance, inf for free columns
            int leave = -1;
            Status leave_at = kAtLower;
            for (int i = 0; i < m_; ++i) {
                const double rate = -dir * w_(i);
                if (std::abs(rate) < 1e-10) continue;
                const int bj = basic_[i];
                double t = kInf;
                Status hit = kAtLower;
                const bool below = phase1 && xb_(i) < lo_[bj] - ftol;
                const bool above = phase1 && xb_(i) > up_[bj] + ftol;
                if (below) {  // infeasible: first stop is its violated bound
                    if (rate > 0) { t = (lo_[bj] - xb_(i)) / rate; hit = kAtLower; }
                } else if (above) {
                    if (rate < 0) { t = (up_[bj] - xb_(i)) / rate; hit = kAtUpper; }
                } else if (rate > 0) {
                    if (up_[bj] < kInf) { t = (up_[bj] - xb_(i)) / rate; hit = kAtUpper; }
                } else {
                    if (lo_[bj] > -kInf) { t = (lo_[bj] - xb_(i)) / rate; hit = kAtLower; }
                }
                if (t == kInf) continue;
                if (t < 0) t = 0;
                if (t > tmax + 1e-9) continue;
                const bool strictly_tighter = leave < 0 || t < tmax - 1e-9;
                if (strictly_tighter || better_leave(i, leave)) {
                    tmax = std::min(tmax, t);
                    leave = i;
                    leave_at = hit;
                }
            }

            if (leave < 0 && tmax == kInf) {
                if (phase1) throw std::runtime_error("phase-1 ray: numerical breakdown");
                return LpStatus::unbounded;
            }

            const double measure = phase1 ? infeasibility_sum() : current_objective();
            if (measure < last_measure - 1e-12) {
                stall_count_ = 0;
                last_measure = measure;
            } else if (++stall_count_ > limits_.stall_limit) {
                bland_ = true;
            }

            if (leave < 0) {  // bound flip
                xb_.noalias() -= (dir * tmax) * w_;
                status_[enter] = status_[enter] == kAtLower ? kAtUpper : kAtLower;
                continue;
            }

            const double enter_start = nonbasic_value(enter);
            xb_.noalias() -= (dir * tmax) * w_;
            const int out = basic_[leave];
            status_[out] = (lo_[out] == -kInf && up_[out] == kInf) ? kFreeNonbasic : leave_at;
            basic_[leave] = enter;
            status_[enter] = kBasic;
            xb_(leave) = enter_start + dir * tmax;

            // Extend the eta file with this pivot.
            Eta eta;
            eta.row = leave;
            eta.pivot = w_(leave);
            for (int i = 0; i < m_; ++i)
                if (i != leave && std::abs(w_(i)) > 1e-12) eta.terms.push_back({i, w_(i)});
            etas_.push_back(std::move(eta));
        }
    }

    // Leaving-row preference among (near-)ties: largest pivot magnitude for
    // stability, or lowest variable index when Bland's rule is engaged.
    bool better_leave(int cand_row, int incumbent_row) const {
        if (bland_) return basic_[cand_row] < basic_[incumbent_row];
        return std::abs(w_(cand_row)) > std::abs(w_(incumbent_row));
    }

    LpSolution finish(LpStatus st) {
        LpSolution sol;
        sol.status = st;
        sol.iterations = iterations_;
        sol.basis = snapshot_basis();
        if (st != LpStatus::optimal) return sol;
        std::vector<double> all(ncols_);
        for (int j = 0; j < ncols_; ++j) all[j] = status_[j] == kBasic ? 0.0 : nonbasic_value(j);
        for (int i = 0; i < m_; ++i) all[basic_[i]] = xb_(i);
        sol.values.assign(all.begin(), all.begin() + nstruct_);
        double obj = 0.0;
        for (int j = 0; j < nstruct_; ++j) obj += cost_[j] * all[j];
        sol.objective = obj;

        // Independent feasibility audit by direct substitution.
        Eigen::VectorXd resid = Eigen::VectorXd::Zero(m_);
        for (int i = 0; i < m_; ++i) resid(i) = -rhs_[i];
        for (int j = 0; j < ncols_; ++j) {
            if (all[j] == 0.0) continue;
            for (const auto& [row, coef] : cols_[j]) resid(row) += coef * all[j];
        }
        double worst = m_ > 0 ? resid.cwiseAbs().maxCoeff() : 0.0;
        for (int j = 0; j < ncols_; ++j) {
            if (lo_[j] > -kInf) worst = std::max(worst, lo_[j] - all[j]);
            if (up_[j] < kInf) worst = std::max(worst, all[j] - up_[j]);
        }
        if (worst > 1e-6)
            throw std::runtime_error("simplex numerical instability: residual " +
                                     std::to_string(worst));
        return sol;
    }

    SimplexLimits limits_;
    int nstruct_ = 0, m_ = 0, ncols_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lo_, up_, cost_, rhs_;
    std::vector<Status> status_;
    std::vector<int> basic_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    std::vector<Eta> etas_;
    Eigen::VectorXd xb_, y_, w_, scratch_;
    Eigen::VectorXd solve_tmp_;
    bool factorized_ = false;
    bool dirty_values_ = true;
    bool allow_reset_ = true;
    bool bland_ = false;
    int stall_count_ = 0;
    long long iterations_ = 0;
};

/// Solves the LP relaxation with the given binaries pinned to 0/1 and every
/// other binary relaxed to [0,1].
inline LpSolution solve_lp(const MilpModel& model, const std::map<int, int>& fixed_binaries = {}) {
    SimplexSolver solver(model);
    for (const auto& [id, v] : fixed_binaries) {
        if (id < 0 || id >= static_cast<int>(model.variables.size()) ||
            model.variables[id].kind != VarKind::binary)
            throw std::invalid_argument("fixed_binaries must reference binary variables");
        solver.set_var_bounds(id, static_cast<double>(v), static_cast<double>(v));
    }
    return solver.solve();
}

}  // namespace nashforge
