#ifndef FRACCHS_FIELD_HPP
#define FRACCHS_FIELD_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "fracchs/grid.hpp"

namespace fracchs {

/// Grid-sampled scalar field, one double per point, row-major (axis 0 slowest).
struct RealField {
    Grid grid;
    Eigen::ArrayXd values;

    RealField() = default;
    explicit RealField(const Grid& g) : grid(g), values(Eigen::ArrayXd::Zero(g.size())) {}
    RealField(const Grid& g, Eigen::ArrayXd v);

    static RealField constant(const Grid& g, double value);

    /// Sample f(x0, x1) at the grid points (x1 = 0 in one dimension).
    template <typename F>
    static RealField sample(const Grid& g, F&& f) {
        RealField out(g);
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j)
                out.values(Eigen::Index(i) * g.n[1] + j) =
                    f(g.point(0, i), g.dims == 2 ? g.point(1, j) : 0.0);
        return out;
    }

    bool all_finite() const { return values.allFinite(); }
};

/// Coefficients in the orthonormal Neumann eigenbasis, indexed like RealField.
///
/// Normalization: coeffs[k] = (u, e_k)_{L^2}, with e_k the L^2-orthonormal
/// cosine eigenfunctions. Hence coeffs[0] = mean(u) * sqrt(|Omega|).
struct SpectralCoeffs {
    Grid grid;
    Eigen::ArrayXd coeffs;

    SpectralCoeffs() = default;
    explicit SpectralCoeffs(const Grid& g) : grid(g), coeffs(Eigen::ArrayXd::Zero(g.size())) {}
    SpectralCoeffs(const Grid& g, Eigen::ArrayXd c);

    double& operator()(const ModeIndex& k) { return coeffs(Eigen::Index(k[0]) * grid.n[1] + k[1]); }
    double operator()(const ModeIndex& k) const {
        return coeffs(Eigen::Index(k[0]) * grid.n[1] + k[1]);
    }
};

struct VectorField {
    Grid grid;
    std::vector<Eigen::ArrayXd> components;

    VectorField() = default;
    explicit VectorField(const Grid& g)
        : grid(g), components(std::size_t(g.dims), Eigen::ArrayXd::Zero(g.size())) {}

    int dims() const { return int(components.size()); }
    RealField component(int axis) const { return RealField(grid, components[std::size_t(axis)]); }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("field grids do not match");
}

// Pointwise algebra. Operands must share a grid.
RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(const RealField& a, const RealField& b);
RealField operator*(double a, const RealField& b);
RealField operator+(const RealField& a, double b);

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
/// Scalar field times vector field, pointwise.
VectorField operator*(const RealField& a, const VectorField& v);
VectorField operator*(double a, const VectorField& v);
/// Pointwise dot product.
RealField dot(const VectorField& a, const VectorField& b);

}  // namespace fracchs

#endif  // FRACCHS_FIELD_HPP
