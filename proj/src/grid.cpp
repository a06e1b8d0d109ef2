#include "slcp/grid.hpp"
#include "slcp/errors.hpp"

#include <cmath>

namespace slcp {

Grid2D Grid2D::make(double xmin, double xmax, double ymin, double ymax, int nx, int ny) {
    if (nx < 5 || ny < 5) throw Error("Grid2D: need at least 5 nodes per axis");
    if (!(xmax > xmin && ymax > ymin)) throw Error("Grid2D: empty box");
    Grid2D g;
    g.xmin = xmin; g.xmax = xmax; g.ymin = ymin; g.ymax = ymax;
    g.nx = nx; g.ny = ny;
    g.hx = (xmax - xmin) / (nx - 1);
    g.hy = (ymax - ymin) / (ny - 1);
    return g;
}

bool GridField::finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

GridField& GridField::operator+=(const GridField& o) {
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

GridField& GridField::axpy(double a, const GridField& o) {
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * o.values_[k];
    return *this;
}

std::array<double, 2> fd_gradient(const GridField& f, int i, int j) {
    const Grid2D& g = f.grid();
    if (!g.interior(i, j)) throw BoundaryNode("fd_gradient");
    return {(f(i + 1, j) - f(i - 1, j)) / (2.0 * g.hx),
            (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.hy)};
}

SymMatrix fd_hessian(const GridField& f, int i, int j) {
    const Grid2D& g = f.grid();
    if (!g.interior(i, j)) throw BoundaryNode("fd_hessian");
    SymMatrix h(2);
    h.set(0, 0, (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (g.hx * g.hx));
    h.set(1, 1, (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (g.hy * g.hy));
    h.set(0, 1, (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) / (4.0 * g.hx * g.hy));
    return h;
}

GridField apply_dirichlet(const GridField& f, const std::function<double(double, double)>& phi) {
    GridField out = f;
    const Grid2D& g = f.grid();
    for (int i = 0; i < g.nx; ++i) {
        out.at(i, 0) = phi(g.x(i), g.y(0));
        out.at(i, g.ny - 1) = phi(g.x(i), g.y(g.ny - 1));
    }
    for (int j = 0; j < g.ny; ++j) {
        out.at(0, j) = phi(g.x(0), g.y(j));
        out.at(g.nx - 1, j) = phi(g.x(g.nx - 1), g.y(j));
    }
    return out;
}

GridField apply_dirichlet(const GridField& f, const GridField& phi) {
    GridField out = f;
    const Grid2D& g = f.grid();
    for (int i = 0; i < g.nx; ++i) {
        out.at(i, 0) = phi(i, 0);
        out.at(i, g.ny - 1) = phi(i, g.ny - 1);
    }
    for (int j = 0; j < g.ny; ++j) {
        out.at(0, j) = phi(0, j);
        out.at(g.nx - 1, j) = phi(g.nx - 1, j);
    }
    return out;
}

} // namespace slcp
