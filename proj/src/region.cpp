#include "statcp/region.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace statcp {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool pin(std::vector<Domain>& doms, VarId v, double val) {
    Domain& d = doms[v];
    if (d.integral) {
        long long iv = static_cast<long long>(std::llround(val));
        if (!d.contains_int(iv)) return false;
        d.set = {iv};
        d.sync_hull();
    } else {
        if (!d.box.contains(val)) return false;
        d.box = Interval(val);
    }
    return true;
}

RegionGrid::Cell eval_cell(const Model& m, const RegionSpec& spec, const SearchConfig& cfg,
                           double cx, double cy) {
    RegionGrid::Cell cell;
    std::vector<Domain> doms = m.initial_domains();
    if (!pin(doms, spec.x, cx) || !pin(doms, spec.y, cy)) return cell;
    Outcome out = solve_satisfaction(m, cfg, &doms);
    if (out.kind == OutcomeKind::Feasible) {
        cell.feasible = true;
        if (spec.s >= 0) cell.best_s = out.solution->assignment[spec.s].mid();
    }
    return cell;
}

RegionGrid make_grid(const RegionSpec& spec) {
    if (spec.nx < 1 || spec.ny < 1) throw std::invalid_argument("grid needs >= 1 cell per axis");
    if (spec.x < 0 || spec.y < 0) throw std::invalid_argument("scan parameters unset");
    RegionGrid g;
    for (int i = 0; i < spec.nx; ++i)
        g.xs.push_back(spec.xlo + (i + 0.5) * (spec.xhi - spec.xlo) / spec.nx);
    for (int j = 0; j < spec.ny; ++j)
        g.ys.push_back(spec.ylo + (j + 0.5) * (spec.yhi - spec.ylo) / spec.ny);
    g.cells.resize(static_cast<size_t>(spec.nx) * spec.ny);
    return g;
}

} // namespace

std::string RegionGrid::to_csv() const {
    std::string out = "x,y,feasible,best_s\n";
    for (int iy = 0; iy < ny(); ++iy)
        for (int ix = 0; ix < nx(); ++ix) {
            const Cell& c = at(ix, iy);
            out += fmt(xs[ix]) + "," + fmt(ys[iy]) + "," + (c.feasible ? "1" : "0") + ",";
            if (c.feasible) out += fmt(c.best_s);
            out += "\n";
        }
    return out;
}

RegionGrid RegionGrid::parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,y,feasible,best_s")
        throw std::invalid_argument("bad region CSV header");
    struct Row {
        double x, y, s;
        bool feasible;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f[4];
        for (int i = 0; i < 4; ++i)
            if (!std::getline(ls, f[i], ',') && i < 3)
                throw std::invalid_argument("short region CSV row");
        Row r;
        r.x = std::stod(f[0]);
        r.y = std::stod(f[1]);
        if (f[2] != "0" && f[2] != "1") throw std::invalid_argument("bad feasible flag");
        r.feasible = f[2] == "1";
        r.s = 0.0;
        if (r.feasible) {
            if (f[3].empty()) throw std::invalid_argument("feasible cell without statistic");
            r.s = std::stod(f[3]);
        } else if (!f[3].empty()) {
            throw std::invalid_argument("infeasible cell with statistic");
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw std::invalid_argument("empty region CSV");
    size_t nx = rows.size();
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i].x == rows[0].x) {
            nx = i;
            break;
        }
    if (rows.size() % nx != 0) throw std::invalid_argument("ragged region CSV");
    RegionGrid g;
    for (size_t i = 0; i < nx; ++i) g.xs.push_back(rows[i].x);
    for (size_t j = 0; j < rows.size() / nx; ++j) g.ys.push_back(rows[j * nx].y);
    for (const Row& r : rows) {
        size_t i = g.cells.size();
        if (r.x != g.xs[i % nx] || r.y != g.ys[i / nx])
            throw std::invalid_argument("inconsistent region CSV grid");
        g.cells.push_back({r.feasible, r.s});
    }
    return g;
}

bool RegionGrid::operator==(const RegionGrid& o) const {
    if (xs != o.xs || ys != o.ys || cells.size() != o.cells.size()) return false;
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i].feasible != o.cells[i].feasible ||
            (cells[i].feasible && cells[i].best_s != o.cells[i].best_s))
            return false;
    return true;
}

RegionGrid scan_region_serial(const Model& m, const RegionSpec& spec, const SearchConfig& cfg) {
    RegionGrid g = make_grid(spec);
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix)
            g.cells[static_cast<size_t>(iy) * spec.nx + ix] =
                eval_cell(m, spec, cfg, g.xs[ix], g.ys[iy]);
    return g;
}

RegionGrid scan_region(const Model& m, const RegionSpec& spec, const SearchConfig& cfg,
                       int threads) {
    RegionGrid g = make_grid(spec);
    const int total = spec.nx * spec.ny;
#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int i = 0; i < total; ++i)
        g.cells[i] = eval_cell(m, spec, cfg, g.xs[i % spec.nx], g.ys[i / spec.nx]);
#else
    (void)threads;
    for (int i = 0; i < total; ++i)
        g.cells[i] = eval_cell(m, spec, cfg, g.xs[i % spec.nx], g.ys[i / spec.nx]);
#endif
    return g;
}

} // namespace statcp
