// Benchmark: serial region scan vs the OpenMP scan on the linear-fit model,
// verifying the two produce identical grids.
#include "statcp/models.hpp"
#include "statcp/region.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <vector>

#include "json.hpp"

using namespace statcp;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

} // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 48;
    if (n < 1) n = 48;

    std::vector<double> variates;
    {
        std::ifstream in("data/linear_variates.json");
        if (!in) in.open("../data/linear_variates.json");
        if (!in) {
            std::fprintf(stderr, "run from the repository root (needs data/linear_variates.json)\n");
            return 1;
        }
        nlohmann::json j;
        in >> j;
        for (const auto& v : j["variates"]) variates.push_back(v.get<double>());
    }

    Dataset d;
    d.variates = variates;
    ModelParams p;
    p.bins = BinStructure::uniform(-10, 10, 5);
    p.bounds["sigma"] = {5.0, 5.0};
    BuiltModel bm = build_linear_fit(d, p);

    RegionSpec spec;
    spec.x = bm.param("a");
    spec.y = bm.param("b");
    spec.s = bm.s;
    spec.xlo = -1;
    spec.xhi = 3;
    spec.ylo = -20;
    spec.yhi = 10;
    spec.nx = spec.ny = n;

    SearchConfig cfg;
    double t0 = now_ms();
    RegionGrid serial = scan_region_serial(bm.model, spec, cfg);
    double t1 = now_ms();
    RegionGrid parallel = scan_region(bm.model, spec, cfg);
    double t2 = now_ms();

    int feas = 0;
    for (const auto& c : serial.cells) feas += c.feasible;
    std::printf("grid %dx%d (%d cells, %d feasible)\n", n, n, n * n, feas);
    std::printf("serial:   %8.1f ms\n", t1 - t0);
    std::printf("parallel: %8.1f ms  (speedup %.2fx)\n", t2 - t1, (t1 - t0) / (t2 - t1));
    if (!(serial == parallel)) {
        std::printf("MISMATCH between serial and parallel grids\n");
        return 1;
    }
    std::printf("grids identical\n");
    return 0;
}
