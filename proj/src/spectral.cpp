#include "fracchs/spectral.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <Eigen/Dense>

namespace fracchs {
namespace {

// Transforms accumulate in extended precision and round once on output, which
// keeps high-mode round-off from being amplified by large eigenvalue powers.
using Ext = long double;
using ArrayE = Eigen::Array<Ext, Eigen::Dynamic, 1>;
using RowMatE = Eigen::Matrix<Ext, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr Ext pi_ext = 3.141592653589793238462643383279502884L;

// Per-axis transform matrices for n cell-centred points on [0, L].
struct AxisBasis {
    RowMatE cos_analysis;   // (k, j): h e_k(x_j)
    RowMatE cos_synthesis;  // (j, k): e_k(x_j)
    RowMatE sin_analysis;   // (k, j): h s_k(x_j), row 0 and mode n dropped
    RowMatE sin_synthesis;  // (j, k): s_k(x_j), column 0 zero
    ArrayE wavenumber;   // k pi / L
};

AxisBasis build_axis_basis(int n, double length) {
    const Ext len = length;
    const Ext h = len / n;
    const Ext a0 = 1.0L / std::sqrt(len);
    const Ext ak = std::sqrt(2.0L / len);
    AxisBasis b;
    b.cos_synthesis.resize(n, n);
    b.sin_synthesis = RowMatE::Zero(n, n);
    b.wavenumber.resize(n);
    for (int k = 0; k < n; ++k) {
        b.wavenumber(k) = k * pi_ext / len;
        for (int j = 0; j < n; ++j) {
            // reduce k (2j + 1) modulo 4n so the argument stays in [0, 2 pi)
            const long m = (long(k) * (2 * j + 1)) % (4L * n);
            const Ext arg = pi_ext * Ext(m) / Ext(2 * n);
            b.cos_synthesis(j, k) = (k == 0 ? a0 : ak) * std::cos(arg);
            if (k > 0) b.sin_synthesis(j, k) = ak * std::sin(arg);
        }
    }
    b.cos_analysis = h * b.cos_synthesis.transpose();
    b.sin_analysis = h * b.sin_synthesis.transpose();
    return b;
}

const AxisBasis& axis_basis(int n, double length) {
    static std::mutex mutex;
    static std::map<std::pair<int, double>, std::unique_ptr<AxisBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{n, length}];
    if (!slot) slot = std::make_unique<AxisBasis>(build_axis_basis(n, length));
    return *slot;
}

const AxisBasis& basis(const Grid& g, int axis) { return axis_basis(g.n[axis], g.extent[axis]); }

ArrayE widen(const Eigen::ArrayXd& a) { return a.cast<Ext>(); }
Eigen::ArrayXd narrow(const ArrayE& a) { return a.cast<double>(); }

// out(i, j) = sum_k a(i, k) b(j, k) for row-major a (p x K) and b (q x K).
// Blocked 2 x 2 so that four independent sums are in flight.
void multiply_transposed(const Ext* a, const Ext* b, Ext* out, int p, int q, int K) {
    int i = 0;
    for (; i + 1 < p; i += 2) {
        const Ext* a0 = a + std::ptrdiff_t(i) * K;
        const Ext* a1 = a0 + K;
        int j = 0;
        for (; j + 1 < q; j += 2) {
            const Ext* b0 = b + std::ptrdiff_t(j) * K;
            const Ext* b1 = b0 + K;
            Ext s00 = 0, s01 = 0, s10 = 0, s11 = 0;
            for (int k = 0; k < K; ++k) {
                s00 += a0[k] * b0[k];
                s01 += a0[k] * b1[k];
                s10 += a1[k] * b0[k];
                s11 += a1[k] * b1[k];
            }
            out[std::ptrdiff_t(i) * q + j] = s00;
            out[std::ptrdiff_t(i) * q + j + 1] = s01;
            out[std::ptrdiff_t(i + 1) * q + j] = s10;
            out[std::ptrdiff_t(i + 1) * q + j + 1] = s11;
        }
        for (; j < q; ++j) {
            const Ext* b0 = b + std::ptrdiff_t(j) * K;
            Ext s0 = 0, s1 = 0;
            for (int k = 0; k < K; ++k) {
                s0 += a0[k] * b0[k];
                s1 += a1[k] * b0[k];
            }
            out[std::ptrdiff_t(i) * q + j] = s0;
            out[std::ptrdiff_t(i + 1) * q + j] = s1;
        }
    }
    for (; i < p; ++i)
        for (int j = 0; j < q; ++j) {
            Ext acc = 0;
            for (int k = 0; k < K; ++k) acc += a[std::ptrdiff_t(i) * K + k] * b[std::ptrdiff_t(j) * K + k];
            out[std::ptrdiff_t(i) * q + j] = acc;
        }
}

// Applies the per-axis matrix m along `axis` of the row-major n0 x n1 data.
ArrayE apply_axis(const RowMatE& m, const ArrayE& data, const Grid& g, int axis) {
    if (axis >= g.dims) return data;
    const int n0 = g.n[0], n1 = g.n[1];
    ArrayE out(data.size());
    if (axis == 0) {
        // out^T = data^T m^T
        RowMatE dt = Eigen::Map<const RowMatE>(data.data(), n0, n1).transpose();
        RowMatE rt(n1, n0);
        multiply_transposed(dt.data(), m.data(), rt.data(), n1, n0, n0);
        Eigen::Map<RowMatE>(out.data(), n0, n1) = rt.transpose();
    } else {
        multiply_transposed(data.data(), m.data(), out.data(), n0, n1, n1);
    }
    return out;
}

// Multiplies each entry by factor(k_axis).
void scale_axis(ArrayE& data, const ArrayE& factor, const Grid& g, int axis) {
    Eigen::Map<RowMatE> r(data.data(), g.n[0], g.n[1]);
    if (axis == 0)
        r = (factor.matrix().asDiagonal() * r).eval();
    else
        r = (r * factor.matrix().asDiagonal()).eval();
}

ArrayE cos_analysis(const ArrayE& values, const Grid& g) {
    return apply_axis(basis(g, 1).cos_analysis, apply_axis(basis(g, 0).cos_analysis, values, g, 0), g, 1);
}

ArrayE cos_synthesis(const ArrayE& coeffs, const Grid& g) {
    return apply_axis(basis(g, 1).cos_synthesis, apply_axis(basis(g, 0).cos_synthesis, coeffs, g, 0), g, 1);
}

ArrayE eigenvalues_ext(const Grid& grid) {
    const ArrayE w0 = basis(grid, 0).wavenumber.square();
    if (grid.dims == 1) return w0;
    const ArrayE w1 = basis(grid, 1).wavenumber.square();
    ArrayE lam(grid.size());
    for (int i = 0; i < grid.n[0]; ++i) lam.segment(Eigen::Index(i) * grid.n[1], grid.n[1]) = w0(i) + w1;
    return lam;
}

RealField from_symbol(const RealField& u, const ArrayE& symbol) {
    const ArrayE c = cos_analysis(widen(u.values), u.grid) * symbol;
    return RealField(u.grid, narrow(cos_synthesis(c, u.grid)));
}

// lambda^sigma with the zero mode removed; recently used symbols are cached.
ArrayE power_symbol(const Grid& g, double sigma) {
    using Key = std::tuple<int, int, int, double, double, double>;
    static std::mutex mutex;
    static std::map<Key, ArrayE> cache;
    const Key key{g.dims, g.n[0], g.n[1], g.extent[0], g.extent[1], sigma};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    ArrayE sym = eigenvalues_ext(g).pow(Ext(sigma));
    sym(0) = 0.0L;
    std::lock_guard lock(mutex);
    if (cache.size() >= 64) cache.clear();
    cache.emplace(key, sym);
    return sym;
}

}  // namespace

SpectralCoeffs dct_forward(const RealField& u) {
    return SpectralCoeffs(u.grid, narrow(cos_analysis(widen(u.values), u.grid)));
}

RealField dct_inverse(const SpectralCoeffs& coeffs) {
    return RealField(coeffs.grid, narrow(cos_synthesis(widen(coeffs.coeffs), coeffs.grid)));
}

double eigenvalue(const ModeIndex& k, const Grid& grid) {
    Ext lam = 0.0L;
    for (int axis = 0; axis < grid.dims; ++axis) {
        if (k[axis] < 0 || k[axis] >= grid.n[axis])
            throw std::out_of_range("eigenvalue: mode index outside the grid");
        const Ext w = k[axis] * pi_ext / grid.extent[axis];
        lam += w * w;
    }
    return double(lam);
}

Eigen::ArrayXd eigenvalues(const Grid& grid) { return narrow(eigenvalues_ext(grid)); }

RealField apply_neg_laplacian_power(const RealField& u, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("apply_neg_laplacian_power: exponent must be positive");
    return from_symbol(u, power_symbol(u.grid, sigma));
}

RealField laplacian(const RealField& u) { return from_symbol(u, -eigenvalues_ext(u.grid)); }

VectorField gradient(const RealField& u) {
    const Grid& g = u.grid;
    const ArrayE coeffs = cos_analysis(widen(u.values), g);
    VectorField out(g);
    for (int a = 0; a < g.dims; ++a) {
        ArrayE c = coeffs;
        scale_axis(c, -basis(g, a).wavenumber, g, a);
        for (int axis = 0; axis < g.dims; ++axis) {
            const AxisBasis& b = basis(g, axis);
            c = apply_axis(axis == a ? b.sin_synthesis : b.cos_synthesis, c, g, axis);
        }
        out.components[a] = narrow(c);
    }
    return out;
}

namespace {

void zero_outside(ArrayE& coeffs, const Grid& g, const ModeIndex& keep) {
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            if (i >= keep[0] || (g.dims == 2 && j >= keep[1])) coeffs(Eigen::Index(i) * g.n[1] + j) = 0.0L;
}

ArrayE divergence_coeffs(const VectorField& v) {
    const Grid& g = v.grid;
    ArrayE total = ArrayE::Zero(g.size());
    for (int a = 0; a < v.dims(); ++a) {
        ArrayE c = widen(v.components[a]);
        for (int axis = 0; axis < g.dims; ++axis) {
            const AxisBasis& b = basis(g, axis);
            c = apply_axis(axis == a ? b.sin_analysis : b.cos_analysis, c, g, axis);
        }
        scale_axis(c, basis(g, a).wavenumber, g, a);
        total += c;
    }
    return total;
}

}  // namespace

RealField divergence(const VectorField& v) {
    return RealField(v.grid, narrow(cos_synthesis(divergence_coeffs(v), v.grid)));
}

RealField divergence(const VectorField& v, const ModeIndex& keep) {
    ArrayE c = divergence_coeffs(v);
    zero_outside(c, v.grid, keep);
    return RealField(v.grid, narrow(cos_synthesis(c, v.grid)));
}

SpectralCoeffs project_modes(const SpectralCoeffs& u, const ModeIndex& keep) {
    SpectralCoeffs out = u;
    const Grid& g = u.grid;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            if (i >= keep[0] || (g.dims == 2 && j >= keep[1])) out({i, j}) = 0.0;
    return out;
}

RealField project_modes(const RealField& u, const ModeIndex& keep) {
    return dct_inverse(project_modes(dct_forward(u), keep));
}

ModeIndex two_thirds_modes(const Grid& grid) {
    ModeIndex keep{1, 1};
    for (int axis = 0; axis < grid.dims; ++axis) keep[axis] = (2 * grid.n[axis]) / 3;
    return keep;
}

double mean(const RealField& u) { return double(widen(u.values).sum() / Ext(u.values.size())); }

double inner_product(const RealField& u, const RealField& w) {
    require_same_grid(u.grid, w.grid);
    return double(Ext(u.grid.cell_volume()) * (widen(u.values) * widen(w.values)).sum());
}

double l2_norm(const RealField& u) { return std::sqrt(inner_product(u, u)); }

double hs_seminorm(const RealField& u, double sigma) {
    const ArrayE c = cos_analysis(widen(u.values), u.grid);
    return double(std::sqrt((power_symbol(u.grid, sigma) * c.square()).sum()));
}

double lp_norm(const RealField& u, double p) {
    return std::pow(u.grid.cell_volume() * u.values.abs().pow(p).sum(), 1.0 / p);
}

double lp_norm(const VectorField& v, double p) {
    Eigen::ArrayXd mag2 = Eigen::ArrayXd::Zero(v.grid.size());
    for (const auto& c : v.components) mag2 += c.square();
    return std::pow(v.grid.cell_volume() * mag2.sqrt().pow(p).sum(), 1.0 / p);
}

namespace {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const RealField& u) {
    const Grid& g = u.grid;
    std::string header = "FRACCHS v1 " + std::to_string(g.dims) + " " + std::to_string(g.n[0]);
    if (g.dims == 2) header += " " + std::to_string(g.n[1]);
    header += " " + format_double(g.extent[0]);
    if (g.dims == 2) header += " " + format_double(g.extent[1]);
    header += "\n";

    std::string payload(std::size_t(u.values.size()) * sizeof(double), '\0');
    for (Eigen::Index i = 0; i < u.values.size(); ++i) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(u.values(i));
        for (int b = 0; b < 8; ++b) payload[std::size_t(i) * 8 + b] = char((bits >> (8 * b)) & 0xff);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path.string());
    out << header;
    out.write(payload.data(), std::streamsize(payload.size()));
    if (!out) throw std::runtime_error("failed writing snapshot: " + path.string());
}

RealField read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty snapshot: " + path.string());

    std::istringstream hs(header);
    std::string magic, version;
    Grid g;
    hs >> magic >> version >> g.dims;
    if (magic != "FRACCHS" || version != "v1" || (g.dims != 1 && g.dims != 2))
        throw std::runtime_error("bad snapshot header in " + path.string());
    hs >> g.n[0];
    if (g.dims == 2) hs >> g.n[1];
    hs >> g.extent[0];
    if (g.dims == 2) hs >> g.extent[1];
    if (!hs) throw std::runtime_error("truncated snapshot header in " + path.string());
    validate(g);

    std::string payload(std::size_t(g.size()) * 8, '\0');
    in.read(payload.data(), std::streamsize(payload.size()));
    if (in.gcount() != std::streamsize(payload.size()) || in.peek() != std::char_traits<char>::eof())
        throw std::runtime_error("snapshot payload size mismatch in " + path.string());

    RealField u(g);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
            bits |= std::uint64_t(static_cast<unsigned char>(payload[std::size_t(i) * 8 + b])) << (8 * b);
        u.values(i) = std::bit_cast<double>(bits);
    }
    return u;
}

}  // namespace fracchs
