#ifndef EQROM_GRID_HPP
#define EQROM_GRID_HPP

#include <Eigen/Core>

#include "eqrom/errors.hpp"

namespace eqrom {

/// Periodic rectangular grid [0,Lx) x [0,Ly) with Nx x Ny equispaced points.
/// Mesh counts must be even. Point (i,j) sits at (i*hx, j*hy).
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
        if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0)
            throw ConfigError("Grid2D: Nx and Ny must be positive even integers");
        if (!(lx > 0.0) || !(ly > 0.0))
            throw ConfigError("Grid2D: Lx and Ly must be positive");
    }

    int size() const { return nx * ny; }
    double hx() const { return lx / nx; }
    double hy() const { return ly / ny; }
    /// Quadrature weight of one cell; the discrete inner product is
    /// (f,g) = hx*hy * sum_ij f_ij g_ij.
    double cell_weight() const { return hx() * hy(); }
    double x(int i) const { return i * hx(); }
    double y(int j) const { return j * hy(); }

    bool operator==(const Grid2D&) const = default;
};

/// Real-valued discrete field on a Grid2D. Values are stored flat with the
/// x-index fastest: flat index = j*Nx + i for grid point (x_i, y_j).
struct Field {
    Grid2D grid;
    Eigen::VectorXd values;

    Field() = default;
    explicit Field(const Grid2D& g) : grid(g), values(Eigen::VectorXd::Zero(g.size())) {}
    Field(const Grid2D& g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size())
            throw DimensionError("Field: value count does not match grid size");
    }

    int size() const { return grid.size(); }
    double& operator()(int i, int j) { return values[static_cast<Eigen::Index>(j) * grid.nx + i]; }
    double operator()(int i, int j) const { return values[static_cast<Eigen::Index>(j) * grid.nx + i]; }
};

inline void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
    if (!(a == b)) throw DimensionError(std::string(where) + ": grid mismatch");
}

}  // namespace eqrom

#endif
