#include "statcp/coverage.hpp"

#include "statcp/dist.hpp"
#include "statcp/propagate.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace statcp {

double Rng::uniform() {
    // 53-bit mantissa draw, strictly inside (0, 1)
    double u = (eng_() >> 11) * 0x1.0p-53;
    return u == 0.0 ? 0x1.0p-53 : u;
}

double Rng::normal(double mu, double sd) {
    return mu + sd * quantile(DistSpec::normal(0.0, 1.0), uniform());
}

long long Rng::poisson(double lambda) {
    double u = uniform();
    double p = std::exp(-lambda), acc = p;
    long long k = 0;
    while (u > acc && k < 100000) {
        ++k;
        p *= lambda / static_cast<double>(k);
        acc += p;
    }
    return k;
}

namespace {

BinStructure default_bins(const CoverageSpec& spec) {
    if (spec.bins) return *spec.bins;
    if (spec.model == CoverageModel::LinearNormal) return BinStructure::uniform(-10, 10, 5);
    // Poisson noise: unit bins where the rate-5 expected counts stay above
    // the usual chi-squared rule of thumb; sparse tail bins would inflate
    // the statistic and cost nominal coverage.
    return BinStructure::uniform(1, 10, 9);
}

} // namespace

Dataset generate_dataset(const CoverageSpec& spec, std::uint64_t replicate) {
    Rng rng(spec.seed + replicate);
    Dataset d;
    switch (spec.model) {
    case CoverageModel::LinearNormal:
        for (int t = 1; t <= spec.T; ++t)
            d.variates.push_back(spec.a * t + spec.b + rng.normal(0.0, spec.sigma));
        break;
    case CoverageModel::Ar1Poisson: {
        double prev = 0.0;
        for (int t = 1; t <= spec.T; ++t) {
            double x = spec.c + spec.beta * prev + static_cast<double>(rng.poisson(spec.lambda));
            d.series.push_back(x);
            prev = x;
        }
        break;
    }
    case CoverageModel::Multinomial:
        for (int i = 0; i < spec.N; ++i) {
            double u = rng.uniform(), acc = 0.0;
            int k = static_cast<int>(spec.probs.size());
            std::vector<int> row(k, 0);
            int pick = k - 1;
            for (int j = 0; j < k; ++j) {
                acc += spec.probs[j];
                if (u <= acc) {
                    pick = j;
                    break;
                }
            }
            row[pick] = 1;
            d.onehot.push_back(row);
        }
        break;
    }
    return d;
}

bool replicate_hit(const CoverageSpec& spec, std::uint64_t replicate) {
    Dataset d = generate_dataset(spec, replicate);
    ModelParams p;
    p.alpha = spec.alpha;
    BuiltModel bm;
    switch (spec.model) {
    case CoverageModel::LinearNormal:
        p.bins = default_bins(spec);
        p.bounds["a"] = {spec.a, spec.a};
        p.bounds["b"] = {spec.b, spec.b};
        p.bounds["sigma"] = {spec.sigma, spec.sigma};
        bm = build_linear_fit(d, p);
        break;
    case CoverageModel::Ar1Poisson:
        p.bins = default_bins(spec);
        p.bounds["c"] = {spec.c, spec.c};
        p.bounds["beta"] = {spec.beta, spec.beta};
        p.bounds["lambda"] = {spec.lambda, spec.lambda};
        bm = build_ar1(d, p);
        break;
    case CoverageModel::Multinomial:
        for (size_t j = 0; j < spec.probs.size(); ++j)
            p.bounds["p" + std::to_string(j + 1)] = {spec.probs[j], spec.probs[j]};
        bm = build_multinomial_ci(d, p, MultinomialVariant::Chi2Known);
        break;
    }
    // the truth pins every statistical parameter, so propagation decides
    auto doms = bm.model.initial_domains();
    return propagate(bm.model, doms) != PropOutcome::Fail;
}

CoverageReport run_coverage_serial(const CoverageSpec& spec) {
    if (spec.replicates < 0) throw std::invalid_argument("negative replicate count");
    CoverageReport rep;
    rep.replicates = spec.replicates;
    rep.alpha = spec.alpha;
    for (long long i = 0; i < spec.replicates; ++i)
        if (replicate_hit(spec, static_cast<std::uint64_t>(i))) ++rep.hits;
    return rep;
}

CoverageReport run_coverage(const CoverageSpec& spec, int threads) {
    if (spec.replicates < 0) throw std::invalid_argument("negative replicate count");
    CoverageReport rep;
    rep.replicates = spec.replicates;
    rep.alpha = spec.alpha;
    long long hits = 0;
    const long long M = spec.replicates;
#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt) reduction(+ : hits)
    for (long long i = 0; i < M; ++i)
        if (replicate_hit(spec, static_cast<std::uint64_t>(i))) ++hits;
#else
    (void)threads;
    for (long long i = 0; i < M; ++i)
        if (replicate_hit(spec, static_cast<std::uint64_t>(i))) ++hits;
#endif
    rep.hits = hits;
    return rep;
}

double CoverageReport::binom_se() const {
    if (replicates <= 0) return 0.0;
    return std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(replicates));
}

double CoverageReport::deviation_se_units() const {
    double se = binom_se();
    if (se == 0.0) return 0.0;
    return std::fabs(coverage() - nominal()) / se;
}

} // namespace statcp
