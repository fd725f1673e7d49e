#include "fracchs/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracchs {

Grid Grid::line(int n0, double length) {
    Grid g;
    g.dims = 1;
    g.n = {n0, 1};
    g.extent = {length, 1.0};
    validate(g);
    return g;
}

Grid Grid::rect(int n0, int n1, double length0, double length1) {
    Grid g;
    g.dims = 2;
    g.n = {n0, n1};
    g.extent = {length0, length1};
    validate(g);
    return g;
}

void validate(const Grid& grid) {
    if (grid.dims != 1 && grid.dims != 2)
        throw std::invalid_argument("grid: dimension must be 1 or 2, got " + std::to_string(grid.dims));
    for (int axis = 0; axis < grid.dims; ++axis) {
        const int n = grid.n[axis];
        if (n < 4 || (n & (n - 1)) != 0)
            throw std::invalid_argument("grid: points per axis must be a power of two >= 4, got " +
                                        std::to_string(n));
        if (!(grid.extent[axis] > 0.0) || !std::isfinite(grid.extent[axis]))
            throw std::invalid_argument("grid: axis lengths must be positive");
    }
    if (grid.dims == 1 && (grid.n[1] != 1 || grid.extent[1] != 1.0))
        throw std::invalid_argument("grid: unused second axis must have n = 1 and L = 1");
    if (double(grid.n[0]) * double(grid.n[1]) > double(std::numeric_limits<Eigen::Index>::max()))
        throw std::invalid_argument("grid: point count overflows the index type");
}

}  // namespace fracchs
