#include "fracchs/field.hpp"

#include <string>

namespace fracchs {

RealField::RealField(const Grid& g, Eigen::ArrayXd v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
        throw std::invalid_argument("RealField: expected " + std::to_string(grid.size()) +
                                    " values, got " + std::to_string(values.size()));
}

RealField RealField::constant(const Grid& g, double value) {
    return RealField(g, Eigen::ArrayXd::Constant(g.size(), value));
}

SpectralCoeffs::SpectralCoeffs(const Grid& g, Eigen::ArrayXd c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.size())
        throw std::invalid_argument("SpectralCoeffs: size does not match grid");
}

RealField operator+(const RealField& a, const RealField& b) {
    require_same_grid(a.grid, b.grid);
    return RealField(a.grid, a.values + b.values);
}

RealField operator-(const RealField& a, const RealField& b) {
    require_same_grid(a.grid, b.grid);
    return RealField(a.grid, a.values - b.values);
}

RealField operator*(const RealField& a, const RealField& b) {
    require_same_grid(a.grid, b.grid);
    return RealField(a.grid, a.values * b.values);
}

RealField operator*(double a, const RealField& b) { return RealField(b.grid, a * b.values); }

RealField operator+(const RealField& a, double b) { return RealField(a.grid, a.values + b); }

VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid);
    VectorField out(a.grid);
    for (int i = 0; i < a.dims(); ++i) out.components[i] = a.components[i] + b.components[i];
    return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid);
    VectorField out(a.grid);
    for (int i = 0; i < a.dims(); ++i) out.components[i] = a.components[i] - b.components[i];
    return out;
}

VectorField operator*(const RealField& a, const VectorField& v) {
    require_same_grid(a.grid, v.grid);
    VectorField out(v.grid);
    for (int i = 0; i < v.dims(); ++i) out.components[i] = a.values * v.components[i];
    return out;
}

VectorField operator*(double a, const VectorField& v) {
    VectorField out = v;
    for (auto& c : out.components) c *= a;
    return out;
}

RealField dot(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid);
    RealField out(a.grid);
    for (int i = 0; i < a.dims(); ++i) out.values += a.components[i] * b.components[i];
    return out;
}

}  // namespace fracchs
