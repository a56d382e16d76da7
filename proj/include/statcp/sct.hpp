#pragma once

#include "statcp/counting.hpp"
#include "statcp/model.hpp"

#include <optional>
#include <vector>

namespace statcp {

// Tail of the alternative hypothesis. Eq is the two-sided fail-to-reject
// band. Ne (reject region, a disjunction) is only meaningful for the F test,
// where it selects the two-tailed quantile pair like Eq; elsewhere it is
// rejected.
enum class Tail { Le, Ge, Eq, Ne };

struct TestSpec {
    double alpha;
    Tail tail = Tail::Eq;
};

// Fail-to-reject band of the one-sample t test:
//   m + se * T^-1_{n-1}(alpha/2) <= mu <= m - se * T^-1_{n-1}(alpha/2)
// (one-sided tails post the single bound with quantile 1-alpha). A zero
// sample deviation collapses the band to mu = m automatically.
void post_t_test(Model& m, const std::vector<VarId>& X, VarId mu, const TestSpec& spec);

struct GofVars {
    std::vector<VarId> counts;
    std::vector<VarId> allocs;
};

// Chi-squared goodness of fit: bin_counts over X, then
//   s = sum_j (c_j - t_j)^2 / t_j,   with t_j >= t_min enforced at posting.
// Test form (spec present) adds s <= ChiSquared(m-1) quantile at 1-alpha.
inline constexpr double kGofTargetMin = 1e-6;
GofVars post_chi2_gof(Model& m, const std::vector<VarId>& X, const BinStructure& bins,
                      const std::vector<VarId>& targets, VarId s,
                      const std::optional<TestSpec>& spec = std::nullopt,
                      bool closed_bins = false);

// Chi-squared test of independence on pairs binned into a m1 x m2 grid:
//   s = sum_ij (c_ij - h_i w_j / n)^2 / (h_i w_j / n),
// a term being 0 when its expected count is 0. Test form adds
// s <= ChiSquared((m1-1)(m2-1)) quantile at 1-alpha.
ContingencyVars post_chi2_independence(Model& m,
                                       const std::vector<std::pair<VarId, VarId>>& pairs,
                                       const BinStructure& rowBins, const BinStructure& colBins,
                                       VarId s,
                                       const std::optional<TestSpec>& spec = std::nullopt);

// Fisher's ratio s = variance(X1) / variance(X2); the test form bounds s by
// F(n1-1, n2-1) quantiles (two-tailed for Eq/Ne, single bound otherwise).
void post_f_ratio(Model& m, const std::vector<VarId>& X1, const std::vector<VarId>& X2, VarId s,
                  const std::optional<TestSpec>& spec = std::nullopt);

// Hotelling quadratic forms, s = n (xbar - mu)' M^-1 (xbar - mu).
// Chi2Known: M = Sigma is supplied (entries may be expressions of decision
// variables); test form bounds s by ChiSquared(p). T2Sample: M = S is built
// from the data through covariance constraints; test form bounds s by
// HotellingT2(p, n-1).
struct HotellingVars {
    std::vector<VarId> xbar;
    std::vector<std::vector<VarId>> cov;     // the matrix that was inverted
    std::vector<std::vector<VarId>> cov_inv; // its inverse entries
};
HotellingVars post_hotelling_chi2(Model& m, const std::vector<std::vector<VarId>>& X,
                                  const std::vector<VarId>& mu,
                                  const std::vector<std::vector<VarId>>& Sigma, VarId s,
                                  const std::optional<TestSpec>& spec = std::nullopt);
HotellingVars post_hotelling_t2(Model& m, const std::vector<std::vector<VarId>>& X,
                                const std::vector<VarId>& mu, VarId s,
                                const std::optional<TestSpec>& spec = std::nullopt);

// Forward propagator for the independence statistic (handles the zero
// expected-count guard, which a plain expression cannot).
struct Chi2IndepStat : Propagator {
    std::vector<std::vector<VarId>> cells;
    std::vector<VarId> rows, cols;
    int n;
    VarId s;
    void propagate(PropContext& ctx) const override;
    void collect_vars(std::vector<VarId>& out) const override;
};

} // namespace statcp
