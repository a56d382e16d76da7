#pragma once

#include "statcp/propagate.hpp"

#include <optional>

namespace statcp {

struct SearchConfig {
    double eps = 1e-6;        // real split threshold: width <= max(eps, eps*|mid|)
    double tau_feas = 1e-9;   // constraint residual tolerance
    double eps_obj = 1e-3;    // absolute optimality gap
    long long node_limit = -1;
    double time_limit_ms = -1.0;
};

enum class OutcomeKind { Feasible, Infeasible, ResourceLimit };

struct Solution {
    std::vector<Interval> assignment; // per VarId; integers are point intervals
    std::optional<Interval> objective_value;
    long long nodes = 0;
    double wall_ms = 0.0;

    double value(VarId v) const { return assignment[v].mid(); }
};

struct Outcome {
    OutcomeKind kind;
    std::optional<Solution> solution;
    long long nodes = 0;
    double wall_ms = 0.0;

    bool feasible() const { return kind == OutcomeKind::Feasible; }
};

// Depth-first branch-and-prune. Finite search variables first
// (smallest-domain, min-value binary branching), then reals by largest
// relative width, midpoint split. `start` optionally overrides the initial
// domains (used to fix parameters for region scans / coverage).
Outcome solve_satisfaction(const Model& m, const SearchConfig& cfg,
                           const std::vector<Domain>* start = nullptr);

// Best-first branch-and-bound on the model's objective; reports an
// eps_obj-optimal solution with its objective interval.
Outcome optimize(const Model& m, const SearchConfig& cfg,
                 const std::vector<Domain>* start = nullptr);

} // namespace statcp
