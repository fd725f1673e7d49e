#include "fracchs/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "fracchs/spectral.hpp"
#include "fracchs/sweep.hpp"

namespace fracchs {
namespace fs = std::filesystem;

namespace {

// Appends whole lines and flushes after each, so readers never see a partial row.
class LineWriter {
  public:
    explicit LineWriter(const fs::path& path) : path_(path), out_(path, std::ios::trunc) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
    }
    void line(const std::string& text) {
        const std::string full = text + "\n";
        out_.write(full.data(), std::streamsize(full.size()));
        out_.flush();
        if (!out_) throw std::runtime_error("write failed: " + path_.string());
    }

  private:
    fs::path path_;
    std::ofstream out_;
};

std::string snapshot_name(int index, const char* field) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_%04d_%s.bin", index, field);
    return buf;
}

RunOptions output_sink(const RunConfig& cfg, const fs::path& dir, std::shared_ptr<LineWriter> csv) {
    RunOptions options;
    options.output_every = cfg.output.report_every;
    options.eta = cfg.output.eta;
    const int every = cfg.output.snapshot_every;
    options.on_output = [csv, dir, every](int index, const EnergyReport& r, const State& st) {
        csv->line(report_csv_row(r));
        if (index == 0 || (every > 0 && index % every == 0)) {
            write_snapshot(dir / snapshot_name(index, "phi"), st.phi);
            write_snapshot(dir / snapshot_name(index, "c"), st.c);
        }
    };
    return options;
}

std::shared_ptr<LineWriter> open_trajectory(const RunConfig& cfg, const fs::path& dir) {
    fs::create_directories(dir);
    {
        std::ofstream resolved(dir / "config.resolved", std::ios::trunc);
        resolved << serialize_config(cfg);
        if (!resolved) throw std::runtime_error("cannot write " + (dir / "config.resolved").string());
    }
    auto csv = std::make_shared<LineWriter>(dir / "trajectory.csv");
    csv->line(report_csv_header());
    return csv;
}

template <typename F>
int guarded(std::ostream& log, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "configuration error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::invalid_argument& e) {
        log << "invalid input: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        log << "run failed: " << e.what() << "\n";
        return exit_runtime;
    }
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, [&] {
        const fs::path dir = cfg.output.directory;
        auto csv = open_trajectory(cfg, dir);
        const State init = make_initial_state(cfg);
        const RunResult res = run(init, cfg.model, cfg.stepper, output_sink(cfg, dir, csv));
        log << "run: t_end = " << format_real(res.final_state.t) << ", accepted steps = " << res.steps.size()
            << ", rejected = " << res.rejected << ", output in " << dir.string() << "\n";
        return int(exit_ok);
    });
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "modes") return SweepAxis::modes;
    if (name == "delta") return SweepAxis::delta;
    if (name == "eps") return SweepAxis::eps;
    throw std::invalid_argument("sweep axis must be modes, delta or eps, got '" + name + "'");
}

int cmd_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values, int threads,
              std::ostream& log) {
    return guarded(log, [&] {
        if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
        const fs::path dir = cfg.output.directory;
        std::vector<Scenario> scenarios;
        std::vector<std::shared_ptr<LineWriter>> writers;
        for (std::size_t i = 0; i < values.size(); ++i) {
            RunConfig level = cfg;
            const double v = values[i];
            switch (axis) {
                case SweepAxis::modes:
                    if (v != std::floor(v) || v < 1 || v > cfg.model.grid.n[0])
                        throw std::invalid_argument("mode counts must be integers in [1, n]");
                    level.model.modes = {int(v), cfg.model.grid.dims == 2 ? int(v) : 0};
                    break;
                case SweepAxis::delta:
                    level.model.pot.delta = v;
                    break;
                case SweepAxis::eps:
                    level.model.pot.eps = v;
                    break;
            }
            validate(level.model);
            const fs::path sub = dir / ("level_" + std::to_string(i));
            level.output.directory = sub.string();
            writers.push_back(open_trajectory(level, sub));
            Scenario sc;
            sc.value = v;
            sc.model = level.model;
            sc.stepper = level.stepper;
            sc.init = make_initial_state(level);
            sc.options = output_sink(level, sub, writers.back());
            scenarios.push_back(std::move(sc));
        }
        const std::vector<SweepRow> rows = sweep(scenarios, threads);
        LineWriter table(dir / "sweep.csv");
        table.line(sweep_csv_header());
        for (const SweepRow& row : rows) table.line(sweep_csv_row(row));
        log << "sweep: " << rows.size() << " levels, table in " << (dir / "sweep.csv").string() << "\n";
        return int(exit_ok);
    });
}

int cmd_verify(std::uint64_t seed, std::ostream& log) {
    return guarded(log, [&] {
        const std::vector<VerifyCheck> checks = verify_suite(seed);
        bool all = true;
        char buf[256];
        for (const VerifyCheck& c : checks) {
            std::snprintf(buf, sizeof buf, "%-4s %-48s worst %.3e  bound %.3e\n", c.passed ? "PASS" : "FAIL",
                          c.name.c_str(), c.worst, c.threshold);
            log << buf;
            all = all && c.passed;
        }
        log << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
        return all ? int(exit_ok) : int(exit_runtime);
    });
}

int thread_budget() {
    int hw = int(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("FRACCHS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) return cap;
    }
    return hw;
}

}  // namespace fracchs
