#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlslab/diagnostics.hpp"
#include "nlslab/field.hpp"

namespace nlslab {

/// Portable binary-free snapshot format: one grid header line, one column
/// header, then one row per snapshot with interleaved re/im samples,
///   # grid dim=<d> points=<N> half_width=<L>
///   time,re0,im0,re1,im1,...
///   <t>,<re>,<im>,...
/// Sample order is the grid's row-major order (axis 0 fastest).
inline void write_snapshots_csv(const std::string& path, const Grid& grid,
                                const std::vector<std::pair<double, std::vector<cdouble>>>& rows) {
    std::ofstream os(path);
    if (!os) throw error("write_snapshots_csv: cannot open " + path);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", grid.half_width());
    os << "# grid dim=" << grid.dim() << " points=" << grid.points_per_axis() << " half_width=" << buf << "\n";
    os << "time";
    for (std::size_t i = 0; i < grid.size(); ++i) os << ",re" << i << ",im" << i;
    os << "\n";
    for (const auto& [t, vals] : rows) {
        if (vals.size() != grid.size()) throw std::invalid_argument("write_snapshots_csv: row size mismatch");
        std::snprintf(buf, sizeof(buf), "%.17g", t);
        os << buf;
        for (const auto& v : vals) {
            std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", v.real(), v.imag());
            os << buf;
        }
        os << "\n";
    }
}

inline void write_field_csv(const std::string& path, const WaveField& f) {
    write_snapshots_csv(path, f.grid, {{f.time_tag, f.values}});
}

struct SnapshotFile {
    Grid grid;
    std::vector<std::pair<double, std::vector<cdouble>>> rows;
};

inline SnapshotFile read_snapshots_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw error("read_snapshots_csv: cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw error("read_snapshots_csv: empty file " + path);
    int dim = 0, npts = 0;
    double L = 0.0;
    if (std::sscanf(line.c_str(), "# grid dim=%d points=%d half_width=%lf", &dim, &npts, &L) != 3)
        throw error("read_snapshots_csv: malformed grid header in " + path);
    SnapshotFile out{Grid::make(dim, npts, L), {}};
    std::getline(is, line); // column header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        double t = std::stod(cell);
        std::vector<cdouble> vals;
        vals.reserve(out.grid.size());
        while (std::getline(ss, cell, ',')) {
            double re = std::stod(cell);
            if (!std::getline(ss, cell, ',')) throw error("read_snapshots_csv: odd sample count in " + path);
            vals.emplace_back(re, std::stod(cell));
        }
        if (vals.size() != out.grid.size()) throw error("read_snapshots_csv: row size mismatch in " + path);
        out.rows.emplace_back(t, std::move(vals));
    }
    return out;
}

inline WaveField read_field_csv(const std::string& path) {
    SnapshotFile f = read_snapshots_csv(path);
    if (f.rows.empty()) throw error("read_field_csv: no snapshot rows in " + path);
    return WaveField(f.grid, f.rows.front().second, f.rows.front().first);
}

/// Diagnostics series in the fixed column order.
inline void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRecord>& records) {
    std::ofstream os(path);
    if (!os) throw error("write_diagnostics_csv: cannot open " + path);
    os << DiagnosticRecord::csv_header() << "\n";
    for (const auto& r : records) os << r.csv_row() << "\n";
}

} // namespace nlslab
