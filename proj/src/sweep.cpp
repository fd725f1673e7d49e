#include "fracchs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "fracchs/spectral.hpp"

namespace fracchs {

double space_time_distance(const std::vector<double>& times, const std::vector<RealField>& a,
                           const std::vector<RealField>& b) {
    if (a.size() != times.size() || b.size() != times.size())
        throw std::invalid_argument("space_time_distance: sample counts differ");
    std::vector<double> sq(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double d = l2_norm(a[k] - b[k]);
        sq[k] = d * d;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        acc += 0.5 * (times[k + 1] - times[k]) * (sq[k] + sq[k + 1]);
    return std::sqrt(acc);
}

namespace {

SampledTrajectory run_sampled(const Scenario& sc) {
    SampledTrajectory traj;
    RunOptions options = sc.options;
    options.on_output = [&](int index, const EnergyReport& r, const State& st) {
        traj.times.push_back(st.t);
        traj.phi.push_back(st.phi);
        traj.c.push_back(st.c);
        traj.reports.push_back(r);
        if (sc.options.on_output) sc.options.on_output(index, r, st);
    };
    run(sc.init, sc.model, sc.stepper, options);
    return traj;
}

void check_compatible(const std::vector<Scenario>& scenarios) {
    if (scenarios.empty()) throw std::invalid_argument("sweep: no scenarios");
    const Scenario& base = scenarios.front();
    for (const Scenario& sc : scenarios) {
        if (!(sc.model.grid == base.model.grid) || !(sc.init.phi.grid == base.model.grid) ||
            !(sc.init.c.grid == base.model.grid))
            throw std::invalid_argument("sweep: scenarios must share one grid");
        if (sc.stepper.t_end != base.stepper.t_end || sc.options.output_every != base.options.output_every)
            throw std::invalid_argument("sweep: scenarios must share horizon and output cadence");
    }
}

}  // namespace

std::vector<SweepRow> sweep(const std::vector<Scenario>& scenarios, int threads) {
    check_compatible(scenarios);
    const std::size_t count = scenarios.size();
    std::vector<SampledTrajectory> trajs(count);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                trajs[i] = run_sampled(scenarios[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int workers = std::clamp(threads, 1, int(count));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<SweepRow> rows(count);
    for (std::size_t i = 0; i < count; ++i) {
        const SampledTrajectory& tr = trajs[i];
        SweepRow& row = rows[i];
        row.level = int(i);
        row.value = scenarios[i].value;
        row.phase_violation = tr.reports.back().phase_violation;
        for (const EnergyReport& r : tr.reports) {
            row.sup_hs_norm_phi = std::max(row.sup_hs_norm_phi, r.hs_norm_phi);
            row.sup_mu_w14_norm = std::max(row.sup_mu_w14_norm, r.mu_w14_norm);
        }
        for (std::size_t k = 0; k + 1 < tr.reports.size(); ++k) {
            const EnergyReport& a = tr.reports[k];
            const EnergyReport& b = tr.reports[k + 1];
            row.int_dissipation +=
                0.5 * (b.t - a.t) * (a.diss_flux + a.diss_nutrient + b.diss_flux + b.diss_nutrient);
        }
        if (i == 0) {
            row.diff_phi = row.diff_c = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const SampledTrajectory& prev = trajs[i - 1];
        if (prev.times != tr.times) throw std::runtime_error("sweep: output times differ between levels");
        row.diff_phi = space_time_distance(tr.times, prev.phi, tr.phi);
        row.diff_c = space_time_distance(tr.times, prev.c, tr.c);
    }
    return rows;
}

std::string sweep_csv_header() {
    return "level,value,diff_phi,diff_c,phase_violation,sup_hs_norm_phi,sup_mu_w14_norm,int_dissipation";
}

std::string sweep_csv_row(const SweepRow& r) {
    return std::to_string(r.level) + "," + format_real(r.value) + "," + format_real(r.diff_phi) + "," +
           format_real(r.diff_c) + "," + format_real(r.phase_violation) + "," +
           format_real(r.sup_hs_norm_phi) + "," + format_real(r.sup_mu_w14_norm) + "," +
           format_real(r.int_dissipation);
}

}  // namespace fracchs
