#ifndef FRACCHS_MODEL_HPP
#define FRACCHS_MODEL_HPP

#include <optional>
#include <vector>

#include "fracchs/field.hpp"
#include "fracchs/potential.hpp"

namespace fracchs {

/// Mobility M(phi) before the [gamma, 1/gamma] clamp.
struct Mobility {
    enum class Kind { constant, polynomial, tabulated };

    Kind kind = Kind::constant;
    double value = 1.0;
    /// Polynomial: M(phi) = sum_i coeffs[i] phi^i.
    /// Tabulated: values at equispaced nodes on [0, 1], cubic Hermite
    /// (Catmull-Rom) interpolation, phi clamped to [0, 1].
    std::vector<double> coeffs;

    double raw(double phi) const;

    bool operator==(const Mobility&) const = default;
};

struct ModelParams {
    double s = 0.75;
    PotentialParams pot;
    Mobility mobility;
    double gamma = 1.0;
    Grid grid = Grid::line(128, 6.283185307179586);
    /// Retained modes per axis (Galerkin truncation / dealiasing); 0 selects the 2/3 rule.
    ModeIndex modes{0, 0};

    bool operator==(const ModelParams&) const = default;
};

/// Throws std::invalid_argument for 1/2 <= s < 1, 0 < gamma <= 1, valid grid,
/// potential and mode counts.
void validate(const ModelParams& p);

/// Effective retained modes (the 2/3 rule where the configured count is 0).
ModeIndex retained_modes(const ModelParams& p);

struct State {
    RealField phi;
    RealField c;
    double t = 0.0;
    std::optional<RealField> mu_cache;
};

/// Pointwise M(phi), clamped into [gamma, 1/gamma].
RealField mobility_eval(const RealField& phi, const ModelParams& p);

/// mu = (-Delta)^s phi + d_phi f_delta(phi, c) - delta Delta phi, nodal.
RealField chemical_potential(const State& st, const ModelParams& p);

/// v = grad mu - [c]_+^eps grad(d_c f_delta) with grad(d_c f_delta) = grad c - grad phi.
VectorField joint_flux_velocity(const State& st, const RealField& mu, const ModelParams& p);

/// Every flux ingredient of one right-hand-side evaluation. Shared by the
/// dynamics and by the energy diagnostics so both see identical fluxes.
struct FluxTerms {
    RealField mu;           // projected onto the retained modes
    RealField mobility;     // M(phi), clamped
    RealField c_trunc;      // [c]_+^eps
    RealField nutrient;     // [c]_+^eps exp(-[phi]_+^1)
    VectorField grad_w;     // grad d_c f_delta = grad c - grad phi
    VectorField grad_c;
    VectorField grad_phi;
    VectorField velocity;   // grad mu - [c]_+^eps grad_w
};

FluxTerms flux_terms(const State& st, const ModelParams& p);

struct Rhs {
    RealField dphi_dt;
    RealField dc_dt;
};

/// Right-hand side of the regularized system, projected onto the retained modes.
Rhs rhs(const State& st, const ModelParams& p);

}  // namespace fracchs

#endif  // FRACCHS_MODEL_HPP
