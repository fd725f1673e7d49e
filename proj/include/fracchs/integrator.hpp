#ifndef FRACCHS_INTEGRATOR_HPP
#define FRACCHS_INTEGRATOR_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fracchs/diagnostics.hpp"
#include "fracchs/model.hpp"

namespace fracchs {

struct StepperConfig {
    double dt_init = 1e-3;
    double dt_min = 1e-10;
    double dt_max = 5e-2;
    /// Stabilization of the implicit fractional operator, kappa >= max M = 1/gamma.
    double stab_kappa = 1.0;
    double energy_tol = 1e-3;
    double t_end = 1.0;
    /// Fixed-dt mode (false) takes every step at dt_init and never rejects.
    bool adaptive = true;

    bool operator==(const StepperConfig&) const = default;
};

void validate(const StepperConfig& cfg, double gamma);

/// One first-order IMEX step. The diagonal operators
///   kappa ((-Delta)^{1+s} + delta (-Delta)^2)   for phi,
///   delta (-Delta)                              for c
/// are implicit, the remainder of the right-hand side explicit.
/// Returns nullopt when the update is not finite.
std::optional<State> step(const State& st, double dt, const ModelParams& p, const StepperConfig& cfg);

struct AdaptDecision {
    bool accepted = false;
    double dt_next = 0.0;
    double residual = 0.0;
    double budget = 0.0;
};

/// Energy-law step control. `accept_streak` counts consecutive accepts and
/// is updated in place; dt grows by 1.2 after every 5 accepts and halves on
/// rejection.
AdaptDecision adapt(const EnergyReport& prev, const EnergyReport& next, double dt,
                    const StepperConfig& cfg, int& accept_streak);

struct StepRecord {
    double t = 0.0;  ///< time at the end of the step
    double dt = 0.0;
    double residual = 0.0;
    double budget = 0.0;
};

struct RunResult {
    State final_state;
    std::vector<EnergyReport> reports;  ///< at t = 0 and every output time
    std::vector<StepRecord> steps;      ///< accepted steps only
    long rejected = 0;
};

struct RunOptions {
    /// Output cadence in time units; output times are k * output_every and t_end.
    double output_every = 0.1;
    double eta = 1e-3;
    std::function<void(int index, const EnergyReport&, const State&)> on_output;
};

/// Failure that ends a run: dt dropped below dt_min, or a fixed-dt step blew up.
class IntegrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument unless 0 <= phi0 <= 1, 0 < mean(phi0) < 1, c0 >= 0.
void validate_initial_state(const State& st0);

RunResult run(const State& st0, const ModelParams& p, const StepperConfig& cfg,
              const RunOptions& options);

}  // namespace fracchs

#endif  // FRACCHS_INTEGRATOR_HPP
