#include "fracchs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "fracchs/diagnostics.hpp"
#include "fracchs/spectral.hpp"

namespace fracchs {

ConfigError::ConfigError(Kind kind, std::string key, int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      kind_(kind),
      key_(std::move(key)),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Raw values collected from the text; parsing and validation happen afterwards
// so that defaults and cross-key constraints are handled in one place.
struct Entry {
    std::string value;
    int line = 0;
};

class Reader {
  public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    int line(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void real(const std::string& key, double& out) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return;
        out = parse_real(key, it->second.value, it->second.line);
    }

    template <typename Int>
    void integer(const std::string& key, Int& out) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return;
        const std::string& v = it->second.value;
        Int x{};
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || ptr != v.data() + v.size())
            throw ConfigError(ConfigError::Kind::type_mismatch, leaf(key), it->second.line,
                              key + ": expected an integer, got '" + v + "'");
        out = x;
    }

    void boolean(const std::string& key, bool& out) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return;
        const std::string& v = it->second.value;
        if (v == "true")
            out = true;
        else if (v == "false")
            out = false;
        else
            throw ConfigError(ConfigError::Kind::type_mismatch, leaf(key), it->second.line,
                              key + ": expected true or false, got '" + v + "'");
    }

    void text(const std::string& key, std::string& out) const {
        auto it = entries_.find(key);
        if (it != entries_.end()) out = it->second.value;
    }

    void real_list(const std::string& key, std::vector<double>& out) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return;
        out.clear();
        std::string_view rest = it->second.value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string item(trim(rest.substr(0, comma)));
            out.push_back(parse_real(key, item, it->second.line));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }

  private:
    static std::string leaf(const std::string& key) { return key.substr(key.find('.') + 1); }

    static double parse_real(const std::string& key, const std::string& v, int line) {
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
            throw ConfigError(ConfigError::Kind::type_mismatch, leaf(key), line,
                              key + ": expected a finite number, got '" + v + "'");
        return x;
    }

    std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "model.dims",         "model.n",           "model.n2",          "model.length",
        "model.length2",      "model.s",           "model.delta",       "model.eps",
        "model.k_cut",        "model.gamma",       "model.mobility",    "model.mobility_value",
        "model.mobility_coeffs", "model.modes",    "model.modes2",      "stepper.dt_init",
        "stepper.dt_min",     "stepper.dt_max",    "stepper.stab_kappa", "stepper.energy_tol",
        "stepper.t_end",      "stepper.adaptive",  "init.phi_mean",     "init.c_mean",
        "init.amplitude",     "init.band",         "init.seed",         "init.c_bump",
        "init.mollify_modes", "output.directory",  "output.report_every", "output.snapshot_every",
        "output.eta"};
    return keys;
}

std::map<std::string, Entry> tokenize(std::string_view text) {
    std::map<std::string, Entry> entries;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(ConfigError::Kind::syntax, "", line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "model" && section != "stepper" && section != "init" && section != "output")
                throw ConfigError(ConfigError::Kind::unknown_key, section, line_no,
                                  "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(ConfigError::Kind::syntax, "", line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        const std::string full = section.empty() ? key : section + "." + key;
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), full) == keys.end())
            throw ConfigError(ConfigError::Kind::unknown_key, key, line_no,
                              "unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
        if (entries.count(full))
            throw ConfigError(ConfigError::Kind::syntax, key, line_no, "duplicate key '" + key + "'");
        entries[full] = {value, line_no};
    }
    return entries;
}

void require(bool ok, const Reader& r, const std::string& full_key, const std::string& message) {
    if (ok) return;
    const std::string key = full_key.substr(full_key.find('.') + 1);
    throw ConfigError(ConfigError::Kind::constraint, key, r.line(full_key), key + ": " + message);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    const Reader r(tokenize(text));
    RunConfig cfg;

    int dims = 1, n = 128, n2 = 0;
    double length = 2.0 * 3.141592653589793, length2 = 0.0;
    r.integer("model.dims", dims);
    r.integer("model.n", n);
    r.integer("model.n2", n2);
    r.real("model.length", length);
    r.real("model.length2", length2);
    require(dims == 1 || dims == 2, r, "model.dims", "must be 1 or 2");
    require(n >= 4 && (n & (n - 1)) == 0, r, "model.n", "must be a power of two >= 4");
    require(length > 0.0, r, "model.length", "must be positive");
    if (dims == 2) {
        if (n2 == 0) n2 = n;
        if (length2 == 0.0) length2 = length;
        require(n2 >= 4 && (n2 & (n2 - 1)) == 0, r, "model.n2", "must be a power of two >= 4");
        require(length2 > 0.0, r, "model.length2", "must be positive");
        cfg.model.grid = Grid::rect(n, n2, length, length2);
    } else {
        require(!r.has("model.n2") && !r.has("model.length2") && !r.has("model.modes2"), r,
                r.has("model.n2") ? "model.n2" : (r.has("model.length2") ? "model.length2" : "model.modes2"),
                "only valid when dims = 2");
        cfg.model.grid = Grid::line(n, length);
    }

    ModelParams& m = cfg.model;
    r.real("model.s", m.s);
    r.real("model.delta", m.pot.delta);
    r.real("model.eps", m.pot.eps);
    r.real("model.k_cut", m.pot.k_cut);
    r.real("model.gamma", m.gamma);
    require(m.s >= 0.5 && m.s < 1.0, r, "model.s", "s must satisfy 1/2 <= s < 1");
    require(m.pot.delta > 0.0 && m.pot.delta <= 0.25, r, "model.delta", "must satisfy 0 < delta <= 1/4");
    require(m.pot.eps > 0.0 && m.pot.eps < 1.0, r, "model.eps", "must satisfy 0 < eps < 1");
    require(m.pot.k_cut >= 1.0, r, "model.k_cut", "must be >= 1");
    require(m.gamma > 0.0 && m.gamma <= 1.0, r, "model.gamma", "must satisfy 0 < gamma <= 1");

    std::string mobility = "constant";
    r.text("model.mobility", mobility);
    r.real("model.mobility_value", m.mobility.value);
    r.real_list("model.mobility_coeffs", m.mobility.coeffs);
    if (mobility == "constant") {
        m.mobility.kind = Mobility::Kind::constant;
        require(m.mobility.value > 0.0, r, "model.mobility_value", "must be positive");
    } else if (mobility == "polynomial") {
        m.mobility.kind = Mobility::Kind::polynomial;
        require(!m.mobility.coeffs.empty(), r, "model.mobility_coeffs", "polynomial mobility needs coefficients");
    } else if (mobility == "tabulated") {
        m.mobility.kind = Mobility::Kind::tabulated;
        require(m.mobility.coeffs.size() >= 2, r, "model.mobility_coeffs", "tabulated mobility needs >= 2 values");
    } else {
        throw ConfigError(ConfigError::Kind::type_mismatch, "mobility", r.line("model.mobility"),
                          "mobility: expected constant, polynomial or tabulated, got '" + mobility + "'");
    }

    r.integer("model.modes", m.modes[0]);
    require(m.modes[0] >= 0 && m.modes[0] <= m.grid.n[0], r, "model.modes", "must lie in [0, n]");
    if (dims == 2) {
        m.modes[1] = m.modes[0];
        r.integer("model.modes2", m.modes[1]);
        require(m.modes[1] >= 0 && m.modes[1] <= m.grid.n[1], r, "model.modes2", "must lie in [0, n2]");
    }

    StepperConfig& st = cfg.stepper;
    st.stab_kappa = 1.0 / m.gamma;
    r.real("stepper.dt_init", st.dt_init);
    r.real("stepper.dt_min", st.dt_min);
    r.real("stepper.dt_max", st.dt_max);
    r.real("stepper.stab_kappa", st.stab_kappa);
    r.real("stepper.energy_tol", st.energy_tol);
    r.real("stepper.t_end", st.t_end);
    r.boolean("stepper.adaptive", st.adaptive);
    require(st.dt_min > 0.0, r, "stepper.dt_min", "must be positive");
    require(st.dt_init >= st.dt_min, r, "stepper.dt_init", "must be >= dt_min");
    require(st.dt_max >= st.dt_init, r, "stepper.dt_max", "must be >= dt_init");
    require(st.stab_kappa >= 1.0 / m.gamma, r, "stepper.stab_kappa", "must be >= 1/gamma");
    require(st.energy_tol > 0.0, r, "stepper.energy_tol", "must be positive");
    require(st.t_end >= 0.0, r, "stepper.t_end", "must be nonnegative");

    InitConfig& in = cfg.init;
    r.real("init.phi_mean", in.phi_mean);
    r.real("init.c_mean", in.c_mean);
    r.real("init.amplitude", in.amplitude);
    r.integer("init.band", in.band);
    r.integer("init.seed", in.seed);
    r.real("init.c_bump", in.c_bump);
    r.integer("init.mollify_modes", in.mollify_modes);
    require(in.phi_mean > 0.0 && in.phi_mean < 1.0, r, "init.phi_mean", "must satisfy 0 < phi_mean < 1");
    require(in.c_mean >= 0.0, r, "init.c_mean", "must be nonnegative");
    require(in.amplitude >= 0.0, r, "init.amplitude", "must be nonnegative");
    require(in.phi_mean - in.amplitude >= 0.0 && in.phi_mean + in.amplitude <= 1.0, r, "init.amplitude",
            "phi_mean +/- amplitude must stay within [0, 1]");
    require(in.band >= 1 && in.band < m.grid.n[0] && (dims == 1 || in.band < m.grid.n[1]), r, "init.band",
            "must lie in [1, n)");
    require(in.c_bump >= 0.0, r, "init.c_bump", "must be nonnegative");
    require(in.mollify_modes >= 0, r, "init.mollify_modes", "must be nonnegative");

    OutputConfig& out = cfg.output;
    r.text("output.directory", out.directory);
    r.real("output.report_every", out.report_every);
    r.integer("output.snapshot_every", out.snapshot_every);
    r.real("output.eta", out.eta);
    require(!out.directory.empty(), r, "output.directory", "must not be empty");
    require(out.report_every > 0.0, r, "output.report_every", "must be positive");
    require(out.snapshot_every >= 0, r, "output.snapshot_every", "must be nonnegative");
    require(out.eta > 0.0 && out.eta < 0.5, r, "output.eta", "must satisfy 0 < eta < 1/2");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const RunConfig& cfg) {
    const ModelParams& m = cfg.model;
    std::ostringstream os;
    auto real = [&](const char* key, double v) { os << key << " = " << format_real(v) << "\n"; };
    os << "[model]\n";
    os << "dims = " << m.grid.dims << "\n";
    os << "n = " << m.grid.n[0] << "\n";
    real("length", m.grid.extent[0]);
    if (m.grid.dims == 2) {
        os << "n2 = " << m.grid.n[1] << "\n";
        real("length2", m.grid.extent[1]);
    }
    real("s", m.s);
    real("delta", m.pot.delta);
    real("eps", m.pot.eps);
    real("k_cut", m.pot.k_cut);
    real("gamma", m.gamma);
    switch (m.mobility.kind) {
        case Mobility::Kind::constant: os << "mobility = constant\n"; break;
        case Mobility::Kind::polynomial: os << "mobility = polynomial\n"; break;
        case Mobility::Kind::tabulated: os << "mobility = tabulated\n"; break;
    }
    real("mobility_value", m.mobility.value);
    if (!m.mobility.coeffs.empty()) {
        os << "mobility_coeffs = ";
        for (std::size_t i = 0; i < m.mobility.coeffs.size(); ++i)
            os << (i ? ", " : "") << format_real(m.mobility.coeffs[i]);
        os << "\n";
    }
    os << "modes = " << m.modes[0] << "\n";
    if (m.grid.dims == 2) os << "modes2 = " << m.modes[1] << "\n";

    const StepperConfig& st = cfg.stepper;
    os << "\n[stepper]\n";
    real("dt_init", st.dt_init);
    real("dt_min", st.dt_min);
    real("dt_max", st.dt_max);
    real("stab_kappa", st.stab_kappa);
    real("energy_tol", st.energy_tol);
    real("t_end", st.t_end);
    os << "adaptive = " << (st.adaptive ? "true" : "false") << "\n";

    const InitConfig& in = cfg.init;
    os << "\n[init]\n";
    real("phi_mean", in.phi_mean);
    real("c_mean", in.c_mean);
    real("amplitude", in.amplitude);
    os << "band = " << in.band << "\n";
    os << "seed = " << in.seed << "\n";
    real("c_bump", in.c_bump);
    os << "mollify_modes = " << in.mollify_modes << "\n";

    const OutputConfig& out = cfg.output;
    os << "\n[output]\n";
    os << "directory = " << out.directory << "\n";
    real("report_every", out.report_every);
    os << "snapshot_every = " << out.snapshot_every << "\n";
    real("eta", out.eta);
    return os.str();
}

namespace {

// Uniform on [-1, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double uniform_pm1(std::mt19937_64& rng) { return 2.0 * double(rng() >> 11) * 0x1.0p-53 - 1.0; }

}  // namespace

State make_initial_state(const RunConfig& cfg) {
    const Grid& g = cfg.model.grid;
    const InitConfig& in = cfg.init;
    const ModeIndex keep = retained_modes(cfg.model);

    SpectralCoeffs noise(g);
    std::mt19937_64 rng(in.seed);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            const bool inside = i <= in.band && j <= in.band;
            const double u = uniform_pm1(rng);
            if (inside && (i != 0 || j != 0)) noise({i, j}) = u;
        }
    RealField perturbation = dct_inverse(noise);
    const double peak = perturbation.values.abs().maxCoeff();
    if (in.amplitude > 0.0 && peak > 0.0)
        perturbation.values *= in.amplitude / peak;
    else
        perturbation.values.setZero();

    State st;
    st.phi = RealField(g, (in.phi_mean + perturbation.values).cwiseMax(0.0).cwiseMin(1.0));
    if (in.mollify_modes > 0) st.phi = project_modes(st.phi, {in.mollify_modes, in.mollify_modes});
    st.phi = project_modes(st.phi, keep);
    st.phi.values += in.phi_mean - mean(st.phi);

    const double l0 = g.extent[0], l1 = g.extent[1];
    st.c = RealField::sample(g, [&](double x0, double x1) {
        double bump = 0.5 * (1.0 + std::cos(3.141592653589793 * x0 / l0));
        if (g.dims == 2) bump *= 0.5 * (1.0 + std::cos(3.141592653589793 * x1 / l1));
        return std::max(0.0, in.c_mean + in.c_bump * bump);
    });
    if (in.c_bump > 0.0) st.c = project_modes(st.c, keep);
    st.t = 0.0;
    return st;
}

}  // namespace fracchs
