#ifndef FRACCHS_SWEEP_HPP
#define FRACCHS_SWEEP_HPP

#include <string>
#include <vector>

#include "fracchs/integrator.hpp"

namespace fracchs {

/// One parameter level of a convergence sweep.
struct Scenario {
    double value = 0.0;  ///< the swept parameter value, for the table only
    ModelParams model;
    StepperConfig stepper;
    State init;
    RunOptions options;
};

struct SweepRow {
    int level = 0;
    double value = 0.0;
    /// L^2(Omega_T) distance to the previous level (NaN for level 0),
    /// trapezoid rule over the shared output times.
    double diff_phi = 0.0;
    double diff_c = 0.0;
    double phase_violation = 0.0;  ///< at t_end
    double sup_hs_norm_phi = 0.0;
    double sup_mu_w14_norm = 0.0;
    double int_dissipation = 0.0;  ///< int_0^T (D1 + D2) dt, trapezoid over outputs
};

struct SampledTrajectory {
    std::vector<double> times;
    std::vector<RealField> phi;
    std::vector<RealField> c;
    std::vector<EnergyReport> reports;
};

/// sqrt(int_0^T ||a(t) - b(t)||^2 dt) over matching sample times.
double space_time_distance(const std::vector<double>& times, const std::vector<RealField>& a,
                           const std::vector<RealField>& b);

/// Runs every scenario (up to `threads` at once) and tabulates consecutive
/// differences. Throws std::invalid_argument when scenarios do not share
/// grid, horizon and output cadence.
std::vector<SweepRow> sweep(const std::vector<Scenario>& scenarios, int threads = 1);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

}  // namespace fracchs

#endif  // FRACCHS_SWEEP_HPP
