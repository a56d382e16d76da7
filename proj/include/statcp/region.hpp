#pragma once

#include "statcp/solver.hpp"

#include <string>
#include <vector>

namespace statcp {

// Rectangular scan of a two-parameter projection of the feasible region.
// Cells are laid out row-major with x varying fastest; the stored cell
// centers are authoritative (CSV round-trips exactly).
struct RegionGrid {
    std::vector<double> xs, ys; // cell-center coordinates

    struct Cell {
        bool feasible = false;
        double best_s = 0.0; // statistic at the found point; meaningless when infeasible
    };
    std::vector<Cell> cells; // size xs.size() * ys.size()

    int nx() const { return static_cast<int>(xs.size()); }
    int ny() const { return static_cast<int>(ys.size()); }
    const Cell& at(int ix, int iy) const { return cells[iy * nx() + ix]; }

    // "x,y,feasible,best_s" with best_s empty on infeasible cells.
    std::string to_csv() const;
    static RegionGrid parse_csv(const std::string& text);

    bool operator==(const RegionGrid& o) const;
};

struct RegionSpec {
    VarId x = -1, y = -1; // the scanned parameters
    VarId s = -1;         // statistic to report, or -1
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    int nx = 1, ny = 1;
};

// Serial reference implementation: one satisfaction search per cell with
// (x, y) pinned to the cell center.
RegionGrid scan_region_serial(const Model& m, const RegionSpec& spec, const SearchConfig& cfg);

// Parallel scan over independent cells (OpenMP when available; falls back to
// the serial path). threads <= 0 uses the runtime default.
RegionGrid scan_region(const Model& m, const RegionSpec& spec, const SearchConfig& cfg,
                       int threads = 0);

} // namespace statcp
