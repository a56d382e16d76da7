#include "CLI11.hpp"
#include "json.hpp"

#include "statcp/coverage.hpp"
#include "statcp/models.hpp"
#include "statcp/region.hpp"
#include "statcp/solver.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using nlohmann::json;
using namespace statcp;

namespace {

constexpr int kExitOk = 0, kExitInput = 1, kExitInfeasible = 2, kExitResource = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_input(const std::string& msg) { throw InputError(msg); }

int env_threads() {
    const char* v = std::getenv("STATCP_THREADS");
    if (!v) return 0;
    try {
        return std::max(0, std::stoi(v));
    } catch (...) {
        return 0;
    }
}

struct Options {
    std::string model;
    std::string data_path;
    double alpha = 0.05;
    std::string bins, bins2;
    double sigma = 0.0;
    std::string df_policy = "paper";
    std::string variant = "t2";
    std::vector<std::string> fixes;
    std::vector<std::string> constraints;
    std::string objective;
    std::string param;    // ci target
    std::string grid;     // region axes
    long long replicates = 200;
    std::uint64_t seed = 1;
    double epsilon = 1e-6;
    double time_limit = 60.0; // seconds
};

BinStructure parse_bins(const std::string& s) {
    double lo, hi;
    int m;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> lo >> c1 >> hi >> c2 >> m) || c1 != ':' || c2 != ':' || m < 1 || !(lo < hi))
        fail_input("bad bin spec '" + s + "' (want lo:hi:m)");
    return BinStructure::uniform(lo, hi, m);
}

std::pair<std::string, double> parse_fix(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos) fail_input("bad --fix '" + s + "' (want name=value)");
    try {
        return {s.substr(0, eq), std::stod(s.substr(eq + 1))};
    } catch (...) {
        fail_input("bad --fix value in '" + s + "'");
    }
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_input("cannot open data file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail_input(std::string("data file is not valid JSON: ") + e.what());
    }
    return j;
}

std::vector<double> as_doubles(const json& a, const std::string& what) {
    if (!a.is_array()) fail_input(what + " must be an array");
    std::vector<double> out;
    for (const auto& v : a) {
        if (!v.is_number()) fail_input(what + " must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

Dataset load_dataset(const json& j) {
    Dataset d;
    if (j.contains("variates")) d.variates = as_doubles(j["variates"], "variates");
    if (j.contains("series")) d.series = as_doubles(j["series"], "series");
    if (j.contains("groups")) {
        if (!j["groups"].is_array()) fail_input("groups must be an array of arrays");
        for (const auto& g : j["groups"]) d.groups.push_back(as_doubles(g, "group"));
    }
    if (j.contains("onehot")) {
        if (!j["onehot"].is_array()) fail_input("onehot must be an array of arrays");
        for (const auto& r : j["onehot"]) {
            if (!r.is_array()) fail_input("onehot rows must be arrays");
            std::vector<int> row;
            for (const auto& v : r) {
                if (!v.is_number_integer()) fail_input("onehot entries must be integers");
                row.push_back(v.get<int>());
            }
            d.onehot.push_back(row);
        }
    }
    return d;
}

ModelParams make_params(const Options& o) {
    ModelParams p;
    p.alpha = o.alpha;
    if (!o.bins.empty()) p.bins = parse_bins(o.bins);
    if (!o.bins2.empty()) p.bins2 = parse_bins(o.bins2);
    p.sigma = o.sigma;
    if (o.df_policy == "paper")
        p.df_policy = DfPolicy::Paper;
    else if (o.df_policy == "fitted")
        p.df_policy = DfPolicy::Fitted;
    else
        fail_input("bad --df-policy '" + o.df_policy + "' (want paper|fitted)");
    for (const auto& f : o.fixes) {
        auto [name, val] = parse_fix(f);
        p.bounds[name] = {val, val};
    }
    for (const auto& c : o.constraints) {
        auto eq = c.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == c.size())
            fail_input("bad --constrain '" + c + "' (want name1=name2)");
        p.equalities.push_back({c.substr(0, eq), c.substr(eq + 1)});
    }
    if (!o.objective.empty()) {
        auto col = o.objective.find(':');
        std::string dir = o.objective.substr(0, col);
        if (col == std::string::npos || (dir != "min" && dir != "max"))
            fail_input("bad --objective '" + o.objective + "' (want min|max:name)");
        p.objective = ObjectiveSpec{dir == "min", o.objective.substr(col + 1)};
    }
    return p;
}

void default_bins(const Options& o, ModelParams& p) {
    if (o.model == "linear" && !p.bins) p.bins = BinStructure::uniform(-10, 10, 5);
    if ((o.model == "ar1" || o.model == "ar1-indep") && !p.bins)
        p.bins = BinStructure::uniform(0, 15, 15);
    if (o.model == "ar1-indep" && !p.bins2) p.bins2 = *p.bins;
}

BuiltModel build_named(const Options& o, ModelParams p) {
    json j = load_json(o.data_path);
    Dataset d = load_dataset(j);
    try {
        if (o.model == "linear") return build_linear_fit(d, p);
        if (o.model == "linear-known-sigma")
            return build_linear_fit_appendix(d, p, LinearVariant::KnownSigma);
        if (o.model == "linear-unknown-sigma")
            return build_linear_fit_appendix(d, p, LinearVariant::UnknownSigma);
        if (o.model == "ar1") return build_ar1(d, p);
        if (o.model == "ar1-indep") {
            if (!j.contains("series2")) fail_input("ar1-indep needs a 'series2' field");
            Dataset d2;
            d2.series = as_doubles(j["series2"], "series2");
            return build_ar1_independence(d, d2, p);
        }
        if (o.model == "anova") return build_anova(d, p);
        if (o.model == "hotelling-mean") return build_multivariate_mean(d, p);
        if (o.model == "multinomial") {
            if (o.variant != "t2" && o.variant != "chi2")
                fail_input("bad --variant '" + o.variant + "' (want t2|chi2)");
            return build_multinomial_ci(d, p,
                                        o.variant == "t2" ? MultinomialVariant::T2Sample
                                                          : MultinomialVariant::Chi2Known);
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail_input(e.what());
    }
    fail_input("unknown model '" + o.model + "'");
}

SearchConfig make_config(const Options& o) {
    SearchConfig cfg;
    cfg.eps = o.epsilon;
    cfg.time_limit_ms = o.time_limit > 0 ? o.time_limit * 1000.0 : -1.0;
    return cfg;
}

json param_values(const BuiltModel& bm, const Solution& sol) {
    json out = json::object();
    for (const auto& [name, var] : bm.params) out[name] = sol.assignment[var].mid();
    return out;
}

int status_exit(OutcomeKind k) {
    switch (k) {
    case OutcomeKind::Feasible: return kExitOk;
    case OutcomeKind::Infeasible: return kExitInfeasible;
    default: return kExitResource;
    }
}

const char* status_name(OutcomeKind k) {
    switch (k) {
    case OutcomeKind::Feasible: return "feasible";
    case OutcomeKind::Infeasible: return "infeasible";
    default: return "resource-limit";
    }
}

int cmd_fit(const Options& o) {
    ModelParams p = make_params(o);
    default_bins(o, p);
    BuiltModel bm = build_named(o, p);
    SearchConfig cfg = make_config(o);
    Outcome out = bm.model.objective() ? optimize(bm.model, cfg)
                                       : solve_satisfaction(bm.model, cfg);
    json rep = {{"model", o.model},
                {"status", status_name(out.kind)},
                {"nodes", out.nodes},
                {"wall_ms", out.wall_ms}};
    if (out.solution) {
        rep["params"] = param_values(bm, *out.solution);
        if (bm.s >= 0) {
            Interval s = out.solution->assignment[bm.s];
            rep["statistic"] = {{"lo", s.lo}, {"hi", s.hi}};
        }
        if (out.solution->objective_value)
            rep["objective"] = {{"lo", out.solution->objective_value->lo},
                                {"hi", out.solution->objective_value->hi}};
    }
    std::cout << rep.dump(2) << "\n";
    return status_exit(out.kind);
}

int cmd_ci(const Options& o) {
    if (o.param.empty()) fail_input("ci needs --param");
    SearchConfig cfg = make_config(o);
    double ends[2];
    json runs = json::array();
    OutcomeKind worst = OutcomeKind::Feasible;
    for (int side = 0; side < 2; ++side) {
        Options oo = o;
        oo.objective = (side == 0 ? "min:" : "max:") + o.param;
        ModelParams p = make_params(oo);
        default_bins(oo, p);
        BuiltModel bm = build_named(oo, p);
        Outcome out = optimize(bm.model, cfg);
        if (out.kind == OutcomeKind::Infeasible) {
            json rep = {{"model", o.model}, {"param", o.param}, {"status", "infeasible"}};
            std::cout << rep.dump(2) << "\n";
            return kExitInfeasible;
        }
        if (!out.solution) return kExitResource;
        ends[side] = out.solution->value(bm.param(o.param));
        runs.push_back({{"status", status_name(out.kind)},
                        {"nodes", out.nodes},
                        {"wall_ms", out.wall_ms}});
        if (out.kind != OutcomeKind::Feasible) worst = out.kind;
    }
    json rep = {{"model", o.model},
                {"param", o.param},
                {"interval", {ends[0], ends[1]}},
                {"eps_obj", SearchConfig{}.eps_obj},
                {"runs", runs}};
    std::cout << rep.dump(2) << "\n";
    return status_exit(worst);
}

int cmd_region(const Options& o) {
    if (o.grid.empty()) fail_input("region needs --grid x=lo:hi:n,y=lo:hi:n");
    ModelParams p = make_params(o);
    default_bins(o, p);
    BuiltModel bm = build_named(o, p);
    RegionSpec spec;
    spec.s = bm.s;
    std::istringstream in(o.grid);
    std::string axis;
    int n_axes = 0;
    while (std::getline(in, axis, ',')) {
        auto eq = axis.find('=');
        if (eq == std::string::npos) fail_input("bad --grid axis '" + axis + "'");
        std::string name = axis.substr(0, eq);
        double lo, hi;
        int n;
        char c1, c2;
        std::istringstream as(axis.substr(eq + 1));
        if (!(as >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
            fail_input("bad --grid range '" + axis + "' (want name=lo:hi:n)");
        VarId v;
        try {
            v = bm.param(name);
        } catch (const std::invalid_argument& e) {
            fail_input(e.what());
        }
        if (n_axes == 0) {
            spec.x = v;
            spec.xlo = lo;
            spec.xhi = hi;
            spec.nx = n;
        } else {
            spec.y = v;
            spec.ylo = lo;
            spec.yhi = hi;
            spec.ny = n;
        }
        ++n_axes;
    }
    if (n_axes != 2) fail_input("--grid needs exactly two axes");
    RegionGrid g = scan_region(bm.model, spec, make_config(o), env_threads());
    std::cout << g.to_csv();
    return kExitOk;
}

int cmd_coverage(const Options& o) {
    CoverageSpec spec;
    if (o.model == "linear")
        spec.model = CoverageModel::LinearNormal;
    else if (o.model == "ar1")
        spec.model = CoverageModel::Ar1Poisson;
    else if (o.model == "multinomial")
        spec.model = CoverageModel::Multinomial;
    else
        fail_input("coverage supports models linear|ar1|multinomial");
    spec.replicates = o.replicates;
    spec.alpha = o.alpha;
    spec.seed = o.seed;
    if (!o.bins.empty()) spec.bins = parse_bins(o.bins);
    for (const auto& f : o.fixes) {
        auto [name, val] = parse_fix(f);
        if (name == "a") spec.a = val;
        else if (name == "b") spec.b = val;
        else if (name == "sigma") spec.sigma = val;
        else if (name == "c") spec.c = val;
        else if (name == "beta") spec.beta = val;
        else if (name == "lambda") spec.lambda = val;
        else if (name == "T") spec.T = static_cast<int>(val);
        else if (name == "N") spec.N = static_cast<int>(val);
        else fail_input("unknown truth parameter '" + name + "'");
    }
    if (o.replicates < 0) fail_input("--replicates must be >= 0");
    CoverageReport rep = run_coverage(spec, env_threads());
    json out = {{"model", o.model},
                {"replicates", rep.replicates},
                {"hits", rep.hits},
                {"coverage", rep.coverage()},
                {"nominal", rep.nominal()},
                {"binom_se", rep.binom_se()},
                {"deviation_se_units", rep.deviation_se_units()}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"declarative-statistics models: fit, confidence intervals, region scans, coverage"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* c, bool needs_data) {
        c->add_option("model", o.model, "model name")->required();
        auto* d = c->add_option("data", o.data_path, "dataset JSON file");
        if (needs_data) d->required();
        c->add_option("--alpha", o.alpha, "significance level");
        c->add_option("--bins", o.bins, "bin structure lo:hi:m");
        c->add_option("--bins2", o.bins2, "second bin structure (independence models)");
        c->add_option("--sigma", o.sigma, "known noise deviation");
        c->add_option("--df-policy", o.df_policy, "paper|fitted");
        c->add_option("--variant", o.variant, "multinomial variant t2|chi2");
        c->add_option("--fix", o.fixes, "fix a parameter, name=value");
        c->add_option("--constrain", o.constraints, "equate parameters, name1=name2");
        c->add_option("--epsilon", o.epsilon, "branching width threshold");
        c->add_option("--time-limit", o.time_limit, "seconds per search");
        c->add_option("--seed", o.seed, "generator seed");
    };

    auto* fit = app.add_subcommand("fit", "minimize the statistic (or check feasibility)");
    add_common(fit, true);
    fit->add_option("--objective", o.objective, "override objective, min|max:name");

    auto* ci = app.add_subcommand("ci", "confidence interval for one parameter");
    add_common(ci, true);
    ci->add_option("--param", o.param, "target parameter")->required();

    auto* region = app.add_subcommand("region", "feasibility scan over two parameters");
    add_common(region, true);
    region->add_option("--grid", o.grid, "x=lo:hi:n,y=lo:hi:n")->required();

    auto* coverage = app.add_subcommand("coverage", "Monte Carlo truth-fixed coverage");
    add_common(coverage, false);
    coverage->add_option("--replicates", o.replicates, "number of replicates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return kExitInput;
    }

    try {
        if (fit->parsed()) return cmd_fit(o);
        if (ci->parsed()) return cmd_ci(o);
        if (region->parsed()) return cmd_region(o);
        return cmd_coverage(o);
    } catch (const InputError& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return kExitInput;
    }
}
