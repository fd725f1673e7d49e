#ifndef FRACCHS_GRID_HPP
#define FRACCHS_GRID_HPP

#include <array>
#include <cstdint>

#include <Eigen/Core>

namespace fracchs {

/// Mode index (k0, k1). Unused axes carry 0.
using ModeIndex = std::array<int, 2>;

/**
 * Cell-centred tensor grid on the rectangle [0, L0] x [0, L1].
 *
 * Points sit at x_j = (j + 1/2) h with h = L / n, which is the natural grid
 * of the type-II cosine and sine transforms. In one dimension the second
 * axis is inert (n[1] == 1, extent[1] == 1).
 */
struct Grid {
    int dims = 1;
    std::array<int, 2> n{64, 1};
    std::array<double, 2> extent{1.0, 1.0};

    static Grid line(int n0, double length);
    static Grid rect(int n0, int n1, double length0, double length1);

    double spacing(int axis) const { return extent[axis] / n[axis]; }
    double point(int axis, int j) const { return (j + 0.5) * spacing(axis); }
    Eigen::Index size() const { return Eigen::Index(n[0]) * n[1]; }
    /// |Omega|
    double volume() const { return extent[0] * (dims == 2 ? extent[1] : 1.0); }
    /// Quadrature weight of a single point.
    double cell_volume() const { return volume() / double(size()); }

    bool operator==(const Grid&) const = default;
};

/// Throws std::invalid_argument if the grid violates its invariants
/// (d in {1,2}, n_i >= 4 and a power of two, L_i > 0).
void validate(const Grid& grid);

}  // namespace fracchs

#endif  // FRACCHS_GRID_HPP
