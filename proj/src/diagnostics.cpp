#include "fracchs/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fracchs/spectral.hpp"

namespace fracchs {

EnergyReport report(const State& st, const ModelParams& p, double eta) {
    if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("eta must satisfy 0 < eta < 1/2");
    const FluxTerms f = flux_terms(st, p);
    const double w = st.phi.grid.cell_volume();
    const double delta = p.pot.delta;

    EnergyReport r;
    r.t = st.t;

    double local = 0.0;
    for (Eigen::Index i = 0; i < st.phi.values.size(); ++i)
        local += f_delta_energy(st.phi.values(i), st.c.values(i), p.pot);
    const double frac = hs_seminorm(st.phi, p.s);
    r.energy = 0.5 * frac * frac + w * local + 0.5 * delta * w * dot(f.grad_phi, f.grad_phi).values.sum();

    r.diss_flux = w * (f.mobility.values * dot(f.velocity, f.velocity).values).sum();
    r.diss_nutrient = w * (f.nutrient.values * dot(f.grad_w, f.grad_w).values).sum();
    r.diss_artificial = delta * w * dot(f.grad_c, f.grad_c).values.sum();
    r.coupling = -delta * w * dot(f.grad_c, f.grad_w).values.sum();

    r.mass_phi = mean(st.phi);
    r.mass_c = mean(st.c);
    r.phi_min = st.phi.values.minCoeff();
    r.phi_max = st.phi.values.maxCoeff();
    r.c_min = st.c.values.minCoeff();
    r.hs_norm_phi = hs_seminorm(st.phi, 2.0 * p.s);
    r.mu_w14_norm = lp_norm(f.mu, 4.0 / 3.0) + lp_norm(gradient(f.mu), 4.0 / 3.0);

    Eigen::Index outside = 0;
    for (Eigen::Index i = 0; i < st.phi.values.size(); ++i)
        if (st.phi.values(i) < eta || st.phi.values(i) > 1.0 - eta) ++outside;
    r.phase_violation = double(outside) / double(st.phi.values.size());
    return r;
}

double energy_residual(const EnergyReport& r0, const EnergyReport& r1) {
    const double dt = r1.t - r0.t;
    if (!(dt > 0.0)) throw std::invalid_argument("energy_residual: time increment must be positive");
    const double diss = 0.5 * (r0.diss_flux + r0.diss_nutrient + r1.diss_flux + r1.diss_nutrient);
    const double coupling = 0.5 * (r0.coupling + r1.coupling);
    return (r1.energy - r0.energy) / dt + diss - coupling;
}

double residual_scale(const EnergyReport& r0, const EnergyReport& r1) {
    return 1.0 + std::abs(r1.energy) +
           0.5 * (r0.diss_flux + r0.diss_nutrient + r1.diss_flux + r1.diss_nutrient);
}

double ConvexTestFunction::derivative(double u) const {
    const double x = u - 0.5;
    switch (kind) {
        case Kind::quadratic:
            return 2.0 * scale * x;
        case Kind::huber:
            return scale * x / std::sqrt(1.0 + (x / width) * (x / width));
    }
    return 0.0;
}

double stroock_varopoulos_check(const RealField& u, double s, const ConvexTestFunction& f) {
    if (!(f.scale >= 0.0) || !(f.width > 0.0))
        throw std::invalid_argument("stroock_varopoulos_check: test function is not convex");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("stroock_varopoulos_check: need 0 < s < 1");
    RealField fprime(u.grid);
    for (Eigen::Index i = 0; i < u.values.size(); ++i) fprime.values(i) = f.derivative(u.values(i));
    return inner_product(fprime, apply_neg_laplacian_power(u, s));
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string report_csv_header() {
    return "t,energy,diss_flux,diss_nutrient,diss_artificial,coupling,mass_phi,mass_c,phi_min,"
           "phi_max,c_min,hs_norm_phi,mu_w14_norm,phase_violation";
}

std::string report_csv_row(const EnergyReport& r) {
    const double fields[] = {r.t,        r.energy,  r.diss_flux, r.diss_nutrient, r.diss_artificial,
                             r.coupling, r.mass_phi, r.mass_c,   r.phi_min,       r.phi_max,
                             r.c_min,    r.hs_norm_phi, r.mu_w14_norm, r.phase_violation};
    std::string row;
    for (double x : fields) {
        if (!row.empty()) row += ',';
        row += format_real(x);
    }
    return row;
}

}  // namespace fracchs
