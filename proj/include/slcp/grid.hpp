#pragma once

#include "slcp/smalldense.hpp"

#include <functional>
#include <vector>

namespace slcp {

// Uniform rectangular lattice on an axis-aligned box, boundary nodes
// included. Node (i, j) sits at (xmin + i*hx, ymin + j*hy).
struct Grid2D {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;

    static Grid2D make(double xmin, double xmax, double ymin, double ymax, int nx, int ny);
    static Grid2D unit_box(int n) { return make(-1.0, 1.0, -1.0, 1.0, n, n); }

    double x(int i) const { return xmin + i * hx; }
    double y(int j) const { return ymin + j * hy; }
    bool interior(int i, int j) const { return i >= 1 && i <= nx - 2 && j >= 1 && j <= ny - 2; }
    int node_count() const { return nx * ny; }
    int interior_count() const { return (nx - 2) * (ny - 2); }
};

// Scalar field on a Grid2D, row-major in i (x index) then j.
class GridField {
public:
    GridField() = default;
    GridField(const Grid2D& g, double fill = 0.0)
        : grid_(g), values_(static_cast<std::size_t>(g.node_count()), fill) {}

    const Grid2D& grid() const { return grid_; }
    double operator()(int i, int j) const { return values_[idx(i, j)]; }
    double& at(int i, int j) { return values_[idx(i, j)]; }
    const std::vector<double>& raw() const { return values_; }
    std::vector<double>& raw() { return values_; }
    bool finite() const;
    double max_abs() const;

    GridField& operator+=(const GridField& o);
    GridField& axpy(double a, const GridField& o); // this += a*o

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid_.ny) + static_cast<std::size_t>(j); }
    Grid2D grid_;
    std::vector<double> values_;
};

// Central first differences at an interior node.
std::array<double, 2> fd_gradient(const GridField& f, int i, int j);

// Central second differences; the cross term uses the 4-point stencil.
SymMatrix fd_hessian(const GridField& f, int i, int j);

// Overwrite the boundary ring (corners included) with phi(x, y).
GridField apply_dirichlet(const GridField& f, const std::function<double(double, double)>& phi);

// Overwrite the boundary ring with the boundary values of another field.
GridField apply_dirichlet(const GridField& f, const GridField& phi);

} // namespace slcp
