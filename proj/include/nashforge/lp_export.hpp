#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "nashforge/detail/format.hpp"
#include "nashforge/milp_model.hpp"

namespace nashforge {

namespace detail {

inline void append_terms(std::string& out, const std::vector<std::pair<int, double>>& terms,
                         const MilpModel& model) {
    bool first = true;
    for (const auto& [id, coef] : terms) {
        const double mag = std::abs(coef);
        if (first) {
            if (coef < 0) out += "- ";
            first = false;
        } else {
            out += coef < 0 ? " - " : " + ";
        }
        if (mag != 1.0) {
            out += fmt_num(mag);
            out += ' ';
        }
        out += model.var_name(id);
    }
}

}  // namespace detail

/// CPLEX-style LP text: Minimize / Subject To / Bounds / Binaries sections.
inline std::string export_lp(const MilpModel& model) {
    const double inf = std::numeric_limits<double>::infinity();
    std::string out;
    out += "Minimize\n obj: ";
    {
        std::vector<std::pair<int, double>> obj_terms;
        for (size_t j = 0; j < model.objective.size(); ++j)
            if (model.objective[j] != 0.0) obj_terms.push_back({static_cast<int>(j), model.objective[j]});
        detail::append_terms(out, obj_terms, model);
    }
    out += "\nSubject To\n";
    for (size_t i = 0; i < model.constraints.size(); ++i) {
        const auto& c = model.constraints[i];
        out += " c" + std::to_string(i) + ": ";
        detail::append_terms(out, c.terms, model);
        if (c.terms.empty()) out += "0";
        switch (c.sense) {
            case Sense::le: out += " <= "; break;
            case Sense::ge: out += " >= "; break;
            case Sense::eq: out += " = "; break;
        }
        out += detail::fmt_num(c.rhs);
        out += '\n';
    }
    out += "Bounds\n";
    for (size_t j = 0; j < model.variables.size(); ++j) {
        const auto& v = model.variables[j];
        if (v.kind == VarKind::binary) continue;
        const std::string name = model.var_name(static_cast<int>(j));
        if (v.lower == -inf && v.upper == inf) {
            out += " " + name + " free\n";
        } else if (v.lower == v.upper) {
            out += " " + name + " = " + detail::fmt_num(v.lower) + "\n";
        } else if (v.upper == inf) {
            out += " " + name + " >= " + detail::fmt_num(v.lower) + "\n";
        } else {
            out += " " + detail::fmt_num(v.lower) + " <= " + name + " <= " +
                   detail::fmt_num(v.upper) + "\n";
        }
    }
    bool any_binary = false;
    for (const auto& v : model.variables)
        if (v.kind == VarKind::binary) { any_binary = true; break; }
    if (any_binary) {
        out += "Binaries\n";
        for (size_t j = 0; j < model.variables.size(); ++j)
            if (model.variables[j].kind == VarKind::binary)
                out += " " + model.var_name(static_cast<int>(j)) + "\n";
    }
    out += "End\n";
    return out;
}

}  // namespace nashforge
