#ifndef FRACCHS_CONFIG_HPP
#define FRACCHS_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fracchs/integrator.hpp"
#include "fracchs/model.hpp"

namespace fracchs {

struct InitConfig {
    double phi_mean = 0.5;
    double c_mean = 0.1;
    /// Max |noise| of the band-limited perturbation of phi.
    double amplitude = 0.01;
    /// Noise uses modes 0 < |k|_inf <= band.
    int band = 8;
    std::uint64_t seed = 1;
    /// Height of the nonnegative cosine bump added to c.
    double c_bump = 0.0;
    /// Optional low-pass filter on phi0 (0 = off).
    int mollify_modes = 0;

    bool operator==(const InitConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "fracchs_out";
    double report_every = 0.05;
    /// Write snapshots every k-th report (0: initial snapshot only).
    int snapshot_every = 0;
    double eta = 1e-3;

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    ModelParams model;
    StepperConfig stepper;
    InitConfig init;
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;
};

class ConfigError : public std::runtime_error {
  public:
    enum class Kind { syntax, unknown_key, type_mismatch, constraint };

    ConfigError(Kind kind, std::string key, int line, const std::string& message);

    Kind kind() const { return kind_; }
    const std::string& key() const { return key_; }
    /// 1-based line of the offending entry, 0 when the value is a default.
    int line() const { return line_; }

  private:
    Kind kind_;
    std::string key_;
    int line_;
};

/// Parses `key = value` text with `#` comments and the sections
/// [model], [stepper], [init], [output]. Unset keys keep their defaults;
/// stab_kappa defaults to 1/gamma. The result is fully validated.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Emits every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// Initial state: phi0 = clamp(phi_mean + band-limited noise) projected onto
/// the retained modes and re-centred to mean phi_mean; c0 = c_mean + bump.
State make_initial_state(const RunConfig& cfg);

}  // namespace fracchs

#endif  // FRACCHS_CONFIG_HPP
