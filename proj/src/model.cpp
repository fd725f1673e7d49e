#include "fracchs/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracchs/spectral.hpp"

namespace fracchs {

double Mobility::raw(double phi) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::polynomial: {
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * phi + *it;
            return acc;
        }
        case Kind::tabulated: {
            const int m = int(coeffs.size());
            if (m < 2) throw std::invalid_argument("tabulated mobility needs at least two nodes");
            const double x = std::clamp(phi, 0.0, 1.0) * (m - 1);
            const int i = std::min(int(x), m - 2);
            const double t = x - i;
            auto node = [&](int j) { return coeffs[std::size_t(std::clamp(j, 0, m - 1))]; };
            // Catmull-Rom tangents, one-sided at the ends.
            auto tangent = [&](int j) {
                if (j == 0) return node(1) - node(0);
                if (j == m - 1) return node(m - 1) - node(m - 2);
                return 0.5 * (node(j + 1) - node(j - 1));
            };
            const double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * node(i) + (t3 - 2 * t2 + t) * tangent(i) +
                   (-2 * t3 + 3 * t2) * node(i + 1) + (t3 - t2) * tangent(i + 1);
        }
    }
    return value;
}

void validate(const ModelParams& p) {
    if (!(p.s >= 0.5 && p.s < 1.0))
        throw std::invalid_argument("s must satisfy 1/2 <= s < 1, got " + std::to_string(p.s));
    if (!(p.gamma > 0.0 && p.gamma <= 1.0))
        throw std::invalid_argument("gamma must satisfy 0 < gamma <= 1");
    validate(p.pot);
    validate(p.grid);
    for (int axis = 0; axis < p.grid.dims; ++axis)
        if (p.modes[axis] < 0 || p.modes[axis] > p.grid.n[axis])
            throw std::invalid_argument("retained modes must lie in [0, n]");
    if (p.mobility.kind == Mobility::Kind::polynomial && p.mobility.coeffs.empty())
        throw std::invalid_argument("polynomial mobility needs coefficients");
    if (p.mobility.kind == Mobility::Kind::tabulated && p.mobility.coeffs.size() < 2)
        throw std::invalid_argument("tabulated mobility needs at least two nodes");
}

ModeIndex retained_modes(const ModelParams& p) {
    ModeIndex keep = two_thirds_modes(p.grid);
    for (int axis = 0; axis < p.grid.dims; ++axis)
        if (p.modes[axis] > 0) keep[axis] = p.modes[axis];
    return keep;
}

RealField mobility_eval(const RealField& phi, const ModelParams& p) {
    RealField out(phi.grid);
    const double lo = p.gamma, hi = 1.0 / p.gamma;
    if (p.mobility.kind == Mobility::Kind::constant) {
        out.values.setConstant(std::clamp(p.mobility.value, lo, hi));
        return out;
    }
    for (Eigen::Index i = 0; i < phi.values.size(); ++i)
        out.values(i) = std::clamp(p.mobility.raw(phi.values(i)), lo, hi);
    return out;
}

RealField chemical_potential(const State& st, const ModelParams& p) {
    RealField local(st.phi.grid);
    for (Eigen::Index i = 0; i < local.values.size(); ++i)
        local.values(i) = dphi_f_delta(st.phi.values(i), st.c.values(i), p.pot);
    return apply_neg_laplacian_power(st.phi, p.s) + local +
           p.pot.delta * apply_neg_laplacian_power(st.phi, 1.0);
}

namespace {

RealField truncated_c(const RealField& c, double eps) {
    RealField out(c.grid);
    for (Eigen::Index i = 0; i < c.values.size(); ++i) out.values(i) = truncate_eps(c.values(i), eps);
    return out;
}

}  // namespace

VectorField joint_flux_velocity(const State& st, const RealField& mu, const ModelParams& p) {
    const VectorField grad_w = gradient(st.c) - gradient(st.phi);
    return gradient(mu) - truncated_c(st.c, p.pot.eps) * grad_w;
}

FluxTerms flux_terms(const State& st, const ModelParams& p) {
    require_same_grid(st.phi.grid, st.c.grid);
    const ModeIndex keep = retained_modes(p);
    FluxTerms f;
    f.mu = project_modes(chemical_potential(st, p), keep);
    f.mobility = mobility_eval(st.phi, p);
    f.c_trunc = truncated_c(st.c, p.pot.eps);
    f.nutrient = RealField(st.phi.grid);
    for (Eigen::Index i = 0; i < st.phi.values.size(); ++i)
        f.nutrient.values(i) = f.c_trunc.values(i) * std::exp(-truncate_unit(st.phi.values(i)));
    f.grad_phi = gradient(st.phi);
    f.grad_c = gradient(st.c);
    f.grad_w = f.grad_c - f.grad_phi;
    f.velocity = gradient(f.mu) - f.c_trunc * f.grad_w;
    return f;
}

Rhs rhs(const State& st, const ModelParams& p) {
    const ModeIndex keep = retained_modes(p);
    const FluxTerms f = flux_terms(st, p);
    const VectorField flux = f.mobility * f.velocity;
    // delta Delta c = div(delta grad c) exactly, so it joins the flux.
    const VectorField c_flux = f.nutrient * f.grad_w - f.c_trunc * flux + p.pot.delta * f.grad_c;
    Rhs out;
    out.dphi_dt = divergence(flux, keep);
    out.dc_dt = divergence(c_flux, keep);
    return out;
}

}  // namespace fracchs
