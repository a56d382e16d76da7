#pragma once

#include "statcp/model.hpp"

#include <vector>

namespace statcp {

// m half-open bins [boundaries[j], boundaries[j+1]), j = 0..m-1.
struct BinStructure {
    std::vector<double> boundaries; // strictly increasing, size m+1

    int bins() const { return static_cast<int>(boundaries.size()) - 1; }
    static BinStructure uniform(double lo, double hi, int m);
    void validate() const;
    // Bin index (1-based) of a ground value, 0 if outside all bins.
    int locate(double x) const;
};

// c_j = |{i : x_i = v_j}|. With closed=true every x_i must take a listed
// value; open permits outside values (then sum(c) <= n). Counting-bounds
// propagation in both directions.
void post_global_cardinality(Model& m, const std::vector<VarId>& xs,
                             const std::vector<long long>& values,
                             const std::vector<VarId>& counts, bool closed);

// bin_counts decomposition: allocation variables a_i linked to x_i by
// interval membership, then global_cardinality over the a_i. Allocation
// value 0 is the "outside every bin" sentinel (open variant); closed forces
// membership. Returns the allocation variable ids.
std::vector<VarId> post_bin_counts(Model& m, const std::vector<VarId>& xs,
                                   const BinStructure& bins, const std::vector<VarId>& counts,
                                   bool closed = false);

struct ContingencyVars {
    std::vector<std::vector<VarId>> cells; // m1 x m2
    std::vector<VarId> row_marginals;      // h_i
    std::vector<VarId> col_marginals;      // w_j
};

// Reified pair-membership sums define the cells; marginals are linear sums.
// Creates cell/marginal variables inside the model.
ContingencyVars post_contingency(Model& m,
                                 const std::vector<std::pair<VarId, VarId>>& pairs,
                                 const BinStructure& rowBins, const BinStructure& colBins);

// --- propagators (exposed for tests) ---

// Channels one value variable to its bin-allocation variable.
struct BinAllocate : Propagator {
    VarId x;
    std::vector<double> bounds;
    VarId alloc;
    bool closed;
    void propagate(PropContext& ctx) const override;
    void collect_vars(std::vector<VarId>& out) const override;
};

struct Gcc : Propagator {
    std::vector<VarId> xs;
    std::vector<long long> values;
    std::vector<VarId> counts;
    bool closed;
    void propagate(PropContext& ctx) const override;
    void collect_vars(std::vector<VarId>& out) const override;
};

// b = 1 <=> x1 in [rlo, rhi) and x2 in [clo, chi).
struct CellMember : Propagator {
    VarId x1, x2;
    double rlo, rhi, clo, chi;
    VarId bvar;
    void propagate(PropContext& ctx) const override;
    void collect_vars(std::vector<VarId>& out) const override;
};

} // namespace statcp
