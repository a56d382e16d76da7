#pragma once

#include "statcp/counting.hpp"
#include "statcp/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace statcp {

// Raw data accepted by the model builders; each builder reads the field(s) it
// documents and ignores the rest.
struct Dataset {
    std::vector<double> variates;            // indexed observations v_t, t = 1..T
    std::vector<double> series;              // time series x_t, t = 1..T (x_0 = 0)
    std::vector<std::vector<double>> groups; // equally sized sample groups
    std::vector<std::vector<int>> onehot;    // N rows of k 0/1 category indicators
};

enum class LinearVariant { KnownSigma, UnknownSigma };
enum class MultinomialVariant { Chi2Known, T2Sample };
// Degrees of freedom for the known-sigma linear model: Paper keeps all T,
// Fitted subtracts the three fitted parameters (narrower, non-nominal region).
enum class DfPolicy { Paper, Fitted };

struct ObjectiveSpec {
    bool minimize = true;
    std::string param = "s";
};

struct ModelParams {
    double alpha = 0.05;
    std::optional<BinStructure> bins;  // goodness-of-fit bin structure
    std::optional<BinStructure> bins2; // second structure (independence models)
    double sigma = 0.0;                // known noise deviation where required
    DfPolicy df_policy = DfPolicy::Paper;
    std::optional<ObjectiveSpec> objective; // default: minimize "s"
    // Extra parameter equalities (e.g. {"mu2","mu3"}) posted before finalize.
    std::vector<std::pair<std::string, std::string>> equalities;
    // Per-parameter [lo,hi] overrides; lo == hi fixes the parameter.
    std::map<std::string, std::pair<double, double>> bounds;
};

// A finalized model plus the name -> variable map of its statistical
// parameters (always includes the statistic "s" when one exists).
struct BuiltModel {
    Model model;
    std::map<std::string, VarId> params;
    VarId s = -1;

    VarId param(const std::string& name) const; // throws on unknown name
};

// v_t = a t + b + noise; normal-CDF bin targets, chi-squared goodness of fit.
// Parameters: a, b, sigma, s.
BuiltModel build_linear_fit(const Dataset& data, const ModelParams& params);

// Same error structure, but the test is a quadratic-form chi-squared with
// known sigma (params.sigma) or the univariate t-squared with sample
// variance. Parameters: a, b, s.
BuiltModel build_linear_fit_appendix(const Dataset& data, const ModelParams& params,
                                     LinearVariant variant);

// x_t = c + beta x_{t-1} + Poisson(lambda) noise; Poisson bin targets,
// chi-squared goodness of fit. Parameters: c, beta, lambda, s.
BuiltModel build_ar1(const Dataset& data, const ModelParams& params);

// Two series; chi-squared independence test on the paired errors.
// Parameters: c1, beta1, c2, beta2, s.
BuiltModel build_ar1_independence(const Dataset& data1, const Dataset& data2,
                                  const ModelParams& params);

// One-way analysis of variance over equally sized groups; pure satisfaction
// model (rejection = infeasible). Parameters: sb (between), sw (within), f.
BuiltModel build_anova(const Dataset& data, const ModelParams& params);

// Group means as a multivariate normal mean vector under the t-squared test.
// Parameters: mu1..mum, s.
BuiltModel build_multivariate_mean(const Dataset& data, const ModelParams& params);

// Simultaneous confidence region for multinomial event probabilities; the
// one-hot matrix is trimmed by dropping the last category column.
// Parameters: p1..pk, s.
BuiltModel build_multinomial_ci(const Dataset& data, const ModelParams& params,
                                MultinomialVariant variant);

// Closed-form per-category simultaneous intervals: the two roots of
// (N+Q) p^2 - (2 c_j + Q) p + c_j^2 / N = 0 with Q the chi-squared(k-1)
// quantile at 1 - alpha, clipped to [0,1].
std::vector<Interval> quesenberry_hurst_ci(const std::vector<long long>& counts, double alpha);

} // namespace statcp
