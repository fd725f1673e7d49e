// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracchs/commands.hpp"
#include "fracchs/config.hpp"
#include "fracchs/diagnostics.hpp"
#include "fracchs/integrator.hpp"
#include "fracchs/potential.hpp"
#include "fracchs/spectral.hpp"
#include "fracchs/sweep.hpp"

using namespace fracchs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

class Fields {
  public:
    explicit Fields(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * double(rng_() >> 11) * 0x1.0p-53; }

    RealField band_limited(const Grid& g, int band, double offset, double scale) {
        SpectralCoeffs c(g);
        for (int i = 0; i <= std::min(band, g.n[0] - 1); ++i)
            for (int j = 0; j <= std::min(band, g.n[1] - 1); ++j) c({i, j}) = scale * uniform(-1.0, 1.0);
        RealField u = dct_inverse(c);
        u.values += offset;
        return u;
    }

  private:
    std::mt19937_64 rng_;
};

const Grid line64 = Grid::line(64, 2.0);
const Grid square32 = Grid::rect(32, 32, 1.0, 1.5);

Outcome operator_exactness() {
    double worst = 0.0;
    for (const Grid& g : {line64, square32})
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j) {
                if (i == 0 && j == 0) continue;
                SpectralCoeffs c(g);
                c({i, j}) = 1.0;
                const RealField e = dct_inverse(c);
                for (double s : {0.5, 0.75, 0.9})
                    for (double sigma : {s / 2, s, 1.0, (1 + s) / 2}) {
                        const Eigen::ArrayXd want = std::pow(eigenvalue({i, j}, g), sigma) * e.values;
                        const Eigen::ArrayXd got = apply_neg_laplacian_power(e, sigma).values;
                        worst = std::max(worst, (got - want).abs().maxCoeff() / want.abs().maxCoeff());
                    }
            }
    return {worst <= 1e-12, fmt("max relative error %.2e (bound 1e-12)", worst)};
}

Outcome semigroup_duality() {
    Fields rng(101);
    double semigroup = 0.0, duality = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Grid& g = trial % 2 == 0 ? line64 : square32;
        const RealField u = rng.band_limited(g, 8, rng.uniform(-1.0, 1.0), 1.0);
        const double s = rng.uniform(0.5, 1.0), sigma = rng.uniform(0.25, 1.0);
        const double a = rng.uniform(0.1, 0.5), b = rng.uniform(0.1, 0.5);
        const RealField direct = apply_neg_laplacian_power(u, s);
        const RealField halves = apply_neg_laplacian_power(apply_neg_laplacian_power(u, s / 2), s / 2);
        const RealField composed = apply_neg_laplacian_power(apply_neg_laplacian_power(u, a), b);
        const RealField sum = apply_neg_laplacian_power(u, a + b);
        semigroup = std::max({semigroup, (halves.values - direct.values).abs().maxCoeff(),
                              (composed.values - sum.values).abs().maxCoeff()});
        const double lhs = inner_product(direct, apply_neg_laplacian_power(u, sigma));
        const double rhs = std::pow(hs_seminorm(u, s + sigma), 2);
        duality = std::max(duality, std::abs(lhs - rhs) / rhs);
    }
    return {semigroup <= 1e-10 && duality <= 1e-10,
            fmt("semigroup max error %.2e, duality relative error %.2e (bounds 1e-10)", semigroup, duality)};
}

Outcome positivity() {
    Fields rng(202);
    const ConvexTestFunction fs[] = {{ConvexTestFunction::Kind::quadratic, 1.0, 0.1},
                                     {ConvexTestFunction::Kind::huber, 2.0, 0.2}};
    double worst = -INFINITY;
    for (int trial = 0; trial < 100; ++trial) {
        const Grid& g = trial % 2 == 0 ? line64 : square32;
        const RealField u = rng.band_limited(g, 10, rng.uniform(0.0, 1.0), rng.uniform(0.05, 0.5));
        const double norm2 = std::pow(l2_norm(u), 2);
        for (double s : {0.5, 0.75, 0.9})
            for (const auto& f : fs) worst = std::max(worst, -stroock_varopoulos_check(u, s, f) / norm2);
    }
    return {worst <= 1e-10, fmt("min of check / |u|^2 = %.2e (bound -1e-10)", -worst)};
}

Outcome potential_suite() {
    const double deltas[] = {1e-1, 1e-2, 1e-3};
    double convexity = 0.0, monotone = 0.0, sign = 0.0, min_order = INFINITY;
    for (double delta : deltas) {
        const PotentialParams p{delta, 1e-3, 10.0};
        for (int i = 0; i <= 3000; ++i) {
            const double x = -1.0 + 3.0 * i / 3000.0;
            const double h = 1e-3;
            convexity = std::max({convexity, -f1_delta_double_prime(x, p),
                                  -(f1_delta(x + h, p) - 2 * f1_delta(x, p) + f1_delta(x - h, p))});
            const double d = f1_delta_prime(x, p);
            if (x < 0.5) sign = std::max(sign, d);
            if (x > 0.5) sign = std::max(sign, -d);
        }
        if (f1_delta_prime(0.5, p) != 0.0) sign = std::max(sign, std::abs(f1_delta_prime(0.5, p)));

        // Central differences of f1_delta at two step sizes.
        const double h0 = delta / 10;
        double err[2] = {0.0, 0.0};
        for (int level = 0; level < 2; ++level) {
            const double h = h0 / (1 << level);
            for (int i = 0; i < 1000; ++i) {
                const double x = -0.5 + 2.0 * (i + 0.5) / 1000.0;
                const double d1 = (f1_delta(x + h, p) - f1_delta(x - h, p)) / (2 * h);
                err[level] = std::max(err[level], std::abs(d1 - f1_delta_prime(x, p)));
            }
        }
        min_order = std::min(min_order, std::log2(err[0] / err[1]));
    }
    for (int i = 1; i <= 1000; ++i) {
        const double x = (i - 0.5) / 1000.0;
        for (int a = 0; a + 1 < 3; ++a) {
            const PotentialParams coarse{deltas[a], 1e-3, 10.0}, fine{deltas[a + 1], 1e-3, 10.0};
            monotone = std::max({monotone, f1_delta(x, coarse) - f1_delta(x, fine),
                                 std::abs(f1_delta_prime(x, coarse)) - std::abs(f1_delta_prime(x, fine))});
        }
    }
    const bool ok = convexity <= 1e-12 && monotone <= 0.0 && sign <= 0.0 && min_order >= 1.9;
    std::string detail = fmt("convexity defect %.1e, monotonicity defect %.1e, sign defect %.1e", convexity, monotone,
                             sign);
    detail += fmt(", central-difference order %.2f", min_order);
    return {ok, detail};
}

RunConfig conservation_config() {
    RunConfig cfg;  // 1D, n = 128, delta = eps = 1e-3
    cfg.model.grid = Grid::line(128, 6.283185307179586);
    cfg.model.pot.delta = 1e-3;
    cfg.model.pot.eps = 1e-3;
    cfg.stepper.t_end = 1.0;
    cfg.init.amplitude = 0.3;
    cfg.init.band = 12;
    cfg.init.c_bump = 0.5;
    return cfg;
}

RunResult run_config(const RunConfig& cfg, double every) {
    RunOptions options;
    options.output_every = every;
    options.eta = cfg.output.eta;
    return run(make_initial_state(cfg), cfg.model, cfg.stepper, options);
}

Outcome conservation() {
    const RunConfig cfg = conservation_config();
    const RunResult res = run_config(cfg, 0.01);
    const double m_phi = res.reports.front().mass_phi, m_c = res.reports.front().mass_c;
    double drift_phi = 0.0, drift_c = 0.0;
    for (const EnergyReport& r : res.reports) {
        drift_phi = std::max(drift_phi, std::abs(r.mass_phi - m_phi) / std::abs(m_phi));
        drift_c = std::max(drift_c, std::abs(r.mass_c - m_c) / std::abs(m_c));
    }
    const bool ok = drift_phi <= 1e-10 && drift_c <= 1e-10 && res.final_state.t == cfg.stepper.t_end;
    return {ok, fmt("relative drift phi %.2e, c %.2e over %.0f outputs (bound 1e-10)", drift_phi, drift_c,
                    double(res.reports.size()))};
}

Outcome energy_law() {
    RunConfig cfg = conservation_config();
    const RunResult adaptive = run_config(cfg, 0.05);
    long violations = 0;
    for (const StepRecord& st : adaptive.steps)
        if (!(std::abs(st.residual) <= st.budget)) ++violations;

    cfg.stepper.adaptive = false;
    cfg.stepper.t_end = 0.025;
    std::vector<double> worst;
    double dt = 2e-4;
    for (int level = 0; level < 4; ++level, dt /= 2) {
        cfg.stepper.dt_init = dt;
        cfg.stepper.dt_min = dt;
        const RunResult fixed = run_config(cfg, 0.0125);
        double m = 0.0;
        for (const StepRecord& st : fixed.steps) m = std::max(m, std::abs(st.residual));
        worst.push_back(m);
    }
    double min_order = INFINITY;
    for (std::size_t i = 0; i + 1 < worst.size(); ++i) min_order = std::min(min_order, std::log2(worst[i] / worst[i + 1]));

    std::string detail = fmt("%.0f accepted steps, %.0f over budget; ", double(adaptive.steps.size()), double(violations));
    detail += "fixed-dt max residuals";
    for (double w : worst) detail += fmt(" %.3e", w);
    detail += fmt(", min observed order %.2f (bound 0.9)", min_order);
    return {violations == 0 && min_order >= 0.9, detail};
}

struct SweepOutcome {
    std::vector<SweepRow> rows;
    std::vector<double> sup_violation;
};

SweepOutcome run_sweep(const RunConfig& base, const std::function<void(RunConfig&, double)>& set,
                       const std::vector<double>& values) {
    SweepOutcome out;
    out.sup_violation.assign(values.size(), 0.0);
    std::vector<Scenario> scenarios;
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunConfig cfg = base;
        set(cfg, values[i]);
        Scenario sc;
        sc.value = values[i];
        sc.model = cfg.model;
        sc.stepper = cfg.stepper;
        sc.init = make_initial_state(cfg);
        sc.options.output_every = cfg.output.report_every;
        sc.options.eta = cfg.output.eta;
        double* sup = &out.sup_violation[i];
        sc.options.on_output = [sup](int, const EnergyReport& r, const State&) { *sup = std::max(*sup, r.phase_violation); };
        scenarios.push_back(std::move(sc));
    }
    out.rows = sweep(scenarios, thread_budget());
    return out;
}

Outcome delta_sweep() {
    RunConfig base;
    base.init.amplitude = 0.5;
    base.init.band = 6;
    base.init.c_bump = 0.5;
    base.stepper.t_end = 0.5;
    base.output.report_every = 0.01;
    base.output.eta = 1e-3;
    const SweepOutcome sw = run_sweep(base, [](RunConfig& c, double v) { c.model.pot.delta = v; }, {1e-1, 1e-2, 1e-3});
    const auto& r = sw.rows;
    const bool diffs = r[2].diff_phi < r[1].diff_phi && r[2].diff_c < r[1].diff_c;
    const bool phase = r[1].phase_violation <= r[0].phase_violation && r[2].phase_violation <= r[1].phase_violation &&
                       sw.sup_violation[1] <= sw.sup_violation[0] && sw.sup_violation[2] <= sw.sup_violation[1];
    const double bound = 2.0 * r[0].sup_hs_norm_phi;
    const bool hs = r[1].sup_hs_norm_phi <= bound && r[2].sup_hs_norm_phi <= bound;
    std::string detail = fmt("diff_phi %.3e > %.3e", r[1].diff_phi, r[2].diff_phi);
    detail += fmt(", diff_c %.3e > %.3e", r[1].diff_c, r[2].diff_c);
    detail += fmt(", sup phase violation %.4f %.4f %.4f", sw.sup_violation[0], sw.sup_violation[1], sw.sup_violation[2]);
    detail += fmt(", sup hs_norm_phi ratio %.3f", std::max(r[1].sup_hs_norm_phi, r[2].sup_hs_norm_phi) / r[0].sup_hs_norm_phi);
    return {diffs && phase && hs, detail};
}

Outcome mode_sweep() {
    RunConfig base;
    base.model.grid = Grid::line(128, 6.283185307179586);
    base.init.amplitude = 0.3;
    base.init.band = 20;
    base.init.c_bump = 0.5;
    base.stepper.t_end = 0.2;
    base.output.report_every = 0.01;
    const SweepOutcome sw = run_sweep(base, [](RunConfig& c, double v) { c.model.modes = {int(v), 0}; }, {16, 32, 64});
    const auto& r = sw.rows;
    const bool ok = r[2].diff_phi < r[1].diff_phi && r[2].diff_c < r[1].diff_c;
    std::string detail = fmt("diff_phi %.3e > %.3e", r[1].diff_phi, r[2].diff_phi);
    detail += fmt(", diff_c %.3e > %.3e", r[1].diff_c, r[2].diff_c);
    return {ok, detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "fracchs_acceptance_determinism";
    fs::remove_all(root);
    RunConfig cfg = conservation_config();
    cfg.stepper.t_end = 0.3;
    cfg.output.report_every = 0.05;
    cfg.output.snapshot_every = 2;
    std::ostringstream log;
    for (const char* name : {"a", "b"}) {
        cfg.output.directory = (root / name).string();
        if (cmd_run(cfg, log) != exit_ok) return {false, "run failed: " + log.str()};
    }
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        const std::string file = entry.path().filename().string();
        if (file == "config.resolved") continue;
        if (slurp(entry.path()) != slurp(root / "b" / file)) return {false, file + " differs"};
        ++compared;
    }
    fs::remove_all(root);
    return {compared >= 3, fmt("%.0f files byte-identical", compared)};
}

struct Criterion {
    const char* name;
    double time_limit;
    Outcome (*body)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"operator exactness", 5, operator_exactness},
        {"semigroup and duality", 5, semigroup_duality},
        {"fractional positivity", 10, positivity},
        {"potential regularization", 5, potential_suite},
        {"conservation", 30, conservation},
        {"discrete energy law", 120, energy_law},
        {"delta sweep", 300, delta_sweep},
        {"mode sweep", 180, mode_sweep},
        {"determinism", 600, determinism},
    };
    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.body();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = out.passed && secs < c.time_limit;
        failures += ok ? 0 : 1;
        std::printf("%s %d %-26s %7.2fs (limit %.0fs)  %s\n", ok ? "PASS" : "FAIL", index, c.name, secs, c.time_limit,
                    out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
