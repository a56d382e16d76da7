#pragma once

#include "statcp/model.hpp"

#include <vector>

namespace statcp {

enum class StatisticKind { Mean, Variance, StdDev, StdErr, Covariance };

// Posts the defining identity of the statistic over X (and Y for Covariance)
// with result variable r. Denominators are the sample (n-1) form. Identities
// are posted multiplied through (no divisions), and StdDev is posted as
// r^2 = variance, r >= 0. Auxiliary variables are created as needed.
void post_statistic(Model& m, StatisticKind kind, const std::vector<VarId>& X, VarId r);
void post_statistic(Model& m, StatisticKind kind, const std::vector<VarId>& X,
                    const std::vector<VarId>& Y, VarId r);

// Helpers used by several statistical constraints: create-and-constrain a
// mean / variance variable over X. Bounds are derived from the data hulls.
VarId make_mean_var(Model& m, const std::vector<VarId>& X, const std::string& name);
VarId make_variance_var(Model& m, const std::vector<VarId>& X, const std::string& name);

} // namespace statcp
