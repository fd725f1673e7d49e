#ifndef FRACCHS_DIAGNOSTICS_HPP
#define FRACCHS_DIAGNOSTICS_HPP

#include <string>

#include "fracchs/model.hpp"

namespace fracchs {

/// Monitored quantities of the regularized energy law at one time.
struct EnergyReport {
    double t = 0.0;
    /// E_delta = int 1/2 |(-Delta)^{s/2} phi|^2 + f_delta(phi, c) + delta/2 |grad phi|^2
    double energy = 0.0;
    /// D1 = int M(phi) |grad mu - [c]_+^eps grad d_c f_delta|^2
    double diss_flux = 0.0;
    /// D2 = int [c]_+^eps exp(-[phi]_+^1) |grad d_c f_delta|^2
    double diss_nutrient = 0.0;
    /// delta int |grad c|^2
    double diss_artificial = 0.0;
    /// R_delta = -delta int grad c . grad(c - phi), the right-hand side of the energy law
    double coupling = 0.0;
    double mass_phi = 0.0;
    double mass_c = 0.0;
    double phi_min = 0.0;
    double phi_max = 0.0;
    double c_min = 0.0;
    /// ||(-Delta)^s phi||_{L^2}
    double hs_norm_phi = 0.0;
    /// ||mu||_{L^{4/3}} + ||grad mu||_{L^{4/3}}
    double mu_w14_norm = 0.0;
    /// |{phi < eta} u {phi > 1 - eta}| / |Omega|
    double phase_violation = 0.0;

    bool operator==(const EnergyReport&) const = default;
};

/// Throws std::invalid_argument unless 0 < eta < 1/2.
EnergyReport report(const State& st, const ModelParams& p, double eta);

/// Discrete energy law residual between two reports:
///   (E1 - E0) / (t1 - t0) + avg(D1 + D2) - avg(R_delta).
/// The artificial dissipation is part of R_delta and is not added again.
double energy_residual(const EnergyReport& r0, const EnergyReport& r1);

/// Tolerance scale for the residual: 1 + |E1| + avg(D1 + D2).
double residual_scale(const EnergyReport& r0, const EnergyReport& r1);

/// Convex test functions with F(1/2) = F'(1/2) = 0 and bounded F''.
struct ConvexTestFunction {
    enum class Kind {
        quadratic,  ///< scale (u - 1/2)^2
        huber,      ///< scale w^2 (sqrt(1 + ((u - 1/2)/w)^2) - 1), smoothed Huber
    };
    Kind kind = Kind::quadratic;
    double scale = 1.0;
    double width = 0.1;

    double derivative(double u) const;
};

/// int F'(u) (-Delta)^s u dx. Throws std::invalid_argument for a non-convex
/// descriptor (scale < 0, width <= 0) or s outside (0, 1).
double stroock_varopoulos_check(const RealField& u, double s, const ConvexTestFunction& f);

/// CSV time-series schema shared by `run` and the sweep outputs.
std::string report_csv_header();
std::string report_csv_row(const EnergyReport& r);
/// "%.17g" formatting used by every CSV writer.
std::string format_real(double x);

}  // namespace fracchs

#endif  // FRACCHS_DIAGNOSTICS_HPP
