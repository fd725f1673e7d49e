#include "fracchs/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracchs/spectral.hpp"

namespace fracchs {

void validate(const StepperConfig& cfg, double gamma) {
    if (!(cfg.dt_min > 0.0 && cfg.dt_min <= cfg.dt_init && cfg.dt_init <= cfg.dt_max))
        throw std::invalid_argument("stepper: need 0 < dt_min <= dt_init <= dt_max");
    if (!(cfg.stab_kappa >= 1.0 / gamma)) throw std::invalid_argument("stepper: stab_kappa must be >= 1/gamma");
    if (!(cfg.energy_tol > 0.0)) throw std::invalid_argument("stepper: energy_tol must be positive");
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
        throw std::invalid_argument("stepper: t_end must be finite and nonnegative");
}

std::optional<State> step(const State& st, double dt, const ModelParams& p, const StepperConfig& cfg) {
    const Grid& g = st.phi.grid;
    const ModeIndex keep = retained_modes(p);
    const Rhs f = rhs(st, p);

    const Eigen::ArrayXd lam = eigenvalues(g);
    const double delta = p.pot.delta;
    const Eigen::ArrayXd implicit_phi = cfg.stab_kappa * (lam.pow(1.0 + p.s) + delta * lam.square());
    const Eigen::ArrayXd implicit_c = delta * lam;

    const SpectralCoeffs phi0 = dct_forward(st.phi);
    const SpectralCoeffs c0 = dct_forward(st.c);
    const SpectralCoeffs fphi = dct_forward(f.dphi_dt);
    const SpectralCoeffs fc = dct_forward(f.dc_dt);

    SpectralCoeffs phi1(g), c1(g);
    phi1.coeffs = (phi0.coeffs + dt * (fphi.coeffs + implicit_phi * phi0.coeffs)) / (1.0 + dt * implicit_phi);
    c1.coeffs = (c0.coeffs + dt * (fc.coeffs + implicit_c * c0.coeffs)) / (1.0 + dt * implicit_c);
    // The mean is conserved exactly.
    phi1.coeffs(0) = phi0.coeffs(0);
    c1.coeffs(0) = c0.coeffs(0);

    State next;
    next.phi = dct_inverse(project_modes(phi1, keep));
    next.c = dct_inverse(project_modes(c1, keep));
    next.t = st.t + dt;
    if (!next.phi.all_finite() || !next.c.all_finite()) return std::nullopt;
    return next;
}

AdaptDecision adapt(const EnergyReport& prev, const EnergyReport& next, double dt,
                    const StepperConfig& cfg, int& accept_streak) {
    AdaptDecision d;
    d.residual = energy_residual(prev, next);
    d.budget = cfg.energy_tol * residual_scale(prev, next);
    const double coupling = 0.5 * (prev.coupling + next.coupling);
    const double excess_growth = (next.energy - prev.energy) / dt - coupling;
    d.accepted = std::isfinite(d.residual) && std::abs(d.residual) <= d.budget && excess_growth <= d.budget;
    if (!d.accepted) {
        accept_streak = 0;
        d.dt_next = 0.5 * dt;
        return d;
    }
    d.dt_next = dt;
    if (++accept_streak >= 5) {
        accept_streak = 0;
        d.dt_next = std::min(1.2 * dt, cfg.dt_max);
    }
    return d;
}

void validate_initial_state(const State& st0) {
    constexpr double tol = 1e-12;
    if (!st0.phi.all_finite() || !st0.c.all_finite())
        throw std::invalid_argument("initial state is not finite");
    require_same_grid(st0.phi.grid, st0.c.grid);
    if (st0.phi.values.minCoeff() < -tol || st0.phi.values.maxCoeff() > 1.0 + tol)
        throw std::invalid_argument("initial phi must lie in [0, 1]");
    const double m = mean(st0.phi);
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("initial phi mean must lie in (0, 1)");
    if (st0.c.values.minCoeff() < -tol) throw std::invalid_argument("initial c must be nonnegative");
}

namespace {

std::string dump(const State& st, double dt, const EnergyReport& r, const AdaptDecision& d) {
    std::ostringstream os;
    os << "time step fell below dt_min at t = " << format_real(st.t) << " (dt = " << format_real(dt)
       << ", residual = " << format_real(d.residual) << ", budget = " << format_real(d.budget)
       << ", energy = " << format_real(r.energy) << ", phi in [" << format_real(r.phi_min) << ", "
       << format_real(r.phi_max) << "], c_min = " << format_real(r.c_min) << ")";
    return os.str();
}

}  // namespace

RunResult run(const State& st0, const ModelParams& p, const StepperConfig& cfg,
              const RunOptions& options) {
    validate(p);
    validate(cfg, p.gamma);
    validate_initial_state(st0);
    if (!(options.output_every > 0.0)) throw std::invalid_argument("output cadence must be positive");

    RunResult result;
    State cur = st0;
    EnergyReport rep = report(cur, p, options.eta);
    int index = 0;
    result.reports.push_back(rep);
    if (options.on_output) options.on_output(index, rep, cur);

    double dt = cfg.dt_init;
    int streak = 0;
    long output_k = 1;
    while (cur.t < cfg.t_end) {
        const double target = std::min(double(output_k) * options.output_every, cfg.t_end);
        double h = dt;
        bool landing = false;
        if (cur.t + h >= target - 1e-12 * std::max(1.0, target)) {
            h = target - cur.t;
            landing = true;
        }

        std::optional<State> trial = step(cur, h, p, cfg);
        if (!trial && !cfg.adaptive)
            throw IntegrationError("non-finite update in fixed-dt mode at t = " + format_real(cur.t));

        AdaptDecision decision;
        EnergyReport next_rep;
        if (trial) {
            if (landing) trial->t = target;
            next_rep = report(*trial, p, options.eta);
            decision = adapt(rep, next_rep, h, cfg, streak);
        } else {
            streak = 0;
            decision.dt_next = 0.5 * h;
            decision.residual = std::numeric_limits<double>::quiet_NaN();
        }

        if (cfg.adaptive && !decision.accepted) {
            ++result.rejected;
            dt = decision.dt_next;
            if (dt < cfg.dt_min) throw IntegrationError(dump(cur, dt, rep, decision));
            continue;
        }

        result.steps.push_back({trial->t, h, decision.residual, decision.budget});
        if (cfg.adaptive) dt = landing ? std::max(dt, std::min(decision.dt_next, cfg.dt_max)) : decision.dt_next;
        cur = std::move(*trial);
        rep = next_rep;
        if (landing) {
            ++output_k;
            result.reports.push_back(rep);
            if (options.on_output) options.on_output(++index, rep, cur);
        }
    }
    result.final_state = std::move(cur);
    return result;
}

}  // namespace fracchs
