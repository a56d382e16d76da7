#pragma once

#include "statcp/models.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace statcp {

// Deterministic replicate-indexed generator: replicate i always uses the
// stream seeded with (seed + i), so results are independent of scheduling.
// Uniforms and the derived variates are computed here rather than through
// std distributions, whose output is implementation-defined; the mt19937_64
// engine itself is pinned by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();                    // (0, 1)
    double normal(double mu, double sd); // inverse-CDF sampling
    long long poisson(double lambda);    // CDF inversion walk

private:
    std::mt19937_64 eng_;
};

enum class CoverageModel { LinearNormal, Ar1Poisson, Multinomial };

struct CoverageSpec {
    CoverageModel model = CoverageModel::LinearNormal;
    long long replicates = 200;
    double alpha = 0.05;
    std::uint64_t seed = 1;

    // linear-normal truth and shape
    double a = 1.0, b = -5.0, sigma = 5.0;
    int T = 20;
    // AR(1)-Poisson truth (shares T)
    double c = 5.0, beta = 0.5, lambda = 5.0;
    // multinomial truth
    std::vector<double> probs = {0.3, 0.5, 0.2};
    int N = 10;

    std::optional<BinStructure> bins; // defaults chosen per model when unset
};

struct CoverageReport {
    long long replicates = 0;
    long long hits = 0;
    double alpha = 0.0;

    double coverage() const { return replicates ? static_cast<double>(hits) / replicates : 0.0; }
    double nominal() const { return 1.0 - alpha; }
    // binomial standard error of the empirical coverage at the nominal rate
    double binom_se() const;
    // |empirical - nominal| in binomial-SE units
    double deviation_se_units() const;
};

// Generate one replicate dataset from the truth parameters.
Dataset generate_dataset(const CoverageSpec& spec, std::uint64_t replicate);

// Truth-fixed feasibility of one replicate.
bool replicate_hit(const CoverageSpec& spec, std::uint64_t replicate);

// Serial reference implementation.
CoverageReport run_coverage_serial(const CoverageSpec& spec);
// Parallel over replicates (OpenMP when available). threads <= 0: default.
CoverageReport run_coverage(const CoverageSpec& spec, int threads = 0);

} // namespace statcp
