#include <algorithm>
#include <cmath>
#include <random>

#include "fracchs/commands.hpp"
#include "fracchs/diagnostics.hpp"
#include "fracchs/potential.hpp"
#include "fracchs/spectral.hpp"

namespace fracchs {
namespace {

class FieldSampler {
  public:
    explicit FieldSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * double(rng_() >> 11) * 0x1.0p-53; }

    // Random field with coefficients on modes |k|_inf <= band.
    RealField band_limited(const Grid& g, int band, double offset = 0.0, double scale = 1.0) {
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

double rel_err(const RealField& got, const RealField& want) {
    const double scale = std::max(want.values.abs().maxCoeff(), 1e-300);
    return (got.values - want.values).abs().maxCoeff() / scale;
}

const Grid& line_grid() {
    static const Grid g = Grid::line(64, 2.0);
    return g;
}
const Grid& square_grid() {
    static const Grid g = Grid::rect(32, 32, 1.0, 1.5);
    return g;
}

VerifyCheck check(std::string name, double worst, double bound) {
    return {std::move(name), worst <= bound, worst, bound};
}

}  // namespace

std::vector<VerifyCheck> verify_suite(std::uint64_t seed) {
    std::vector<VerifyCheck> out;
    FieldSampler rng(seed);
    const Grid grids[] = {line_grid(), square_grid()};

    {
        double worst = 0.0;
        for (const Grid& g : grids)
            for (int trial = 0; trial < 5; ++trial) {
                const RealField u = rng.band_limited(g, g.n[0] - 1);
                worst = std::max(worst, rel_err(dct_inverse(dct_forward(u)), u));
            }
        out.push_back(check("transform round trip", worst, 1e-12));
    }
    {
        double worst = 0.0;
        for (const Grid& g : grids)
            for (double s : {0.5, 0.75, 0.9})
                for (double sigma : {s / 2, s, 1.0, (1 + s) / 2})
                    for (int i = 0; i < g.n[0]; ++i)
                        for (int j = 0; j < g.n[1]; ++j) {
                            if (i == 0 && j == 0) continue;
                            SpectralCoeffs c(g);
                            c({i, j}) = 1.0;
                            const RealField e = dct_inverse(c);
                            const RealField want = std::pow(eigenvalue({i, j}, g), sigma) * e;
                            worst = std::max(worst, rel_err(apply_neg_laplacian_power(e, sigma), want));
                        }
        out.push_back(check("eigenrelation (-Delta)^sigma e_k", worst, 1e-12));
    }
    {
        double semigroup = 0.0, duality = 0.0, annihilation = 0.0;
        for (const Grid& g : grids)
            for (int trial = 0; trial < 25; ++trial) {
                const RealField u = rng.band_limited(g, 8);
                const double s = rng.uniform(0.5, 1.0), sigma = rng.uniform(0.25, 1.0);
                const RealField once = apply_neg_laplacian_power(u, s + sigma);
                const RealField twice = apply_neg_laplacian_power(apply_neg_laplacian_power(u, s), sigma);
                semigroup = std::max(semigroup, rel_err(twice, once));
                const double lhs = inner_product(apply_neg_laplacian_power(u, s), apply_neg_laplacian_power(u, sigma));
                const double rhs = std::pow(hs_seminorm(u, s + sigma), 2);
                duality = std::max(duality, std::abs(lhs - rhs) / rhs);
                annihilation = std::max(annihilation, std::abs(mean(apply_neg_laplacian_power(u, s))));
            }
        out.push_back(check("semigroup (-Delta)^a (-Delta)^b", semigroup, 1e-10));
        out.push_back(check("duality identity", duality, 1e-10));
        out.push_back(check("mean annihilation", annihilation, 1e-13));
    }
    {
        double adjoint = 0.0, lap = 0.0;
        for (const Grid& g : grids)
            for (int trial = 0; trial < 5; ++trial) {
                const RealField u = rng.band_limited(g, 10);
                const RealField w = rng.band_limited(g, 10);
                const VectorField gw = gradient(w);
                const double lhs = inner_product(u, divergence(gw));
                double rhs = 0.0;
                const VectorField gu = gradient(u);
                for (int a = 0; a < g.dims; ++a) rhs -= inner_product(gu.component(a), gw.component(a));
                adjoint = std::max(adjoint, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                lap = std::max(lap, rel_err(divergence(gu), laplacian(u)));
            }
        out.push_back(check("divergence = -gradient^T", adjoint, 1e-11));
        out.push_back(check("divergence(gradient) = Laplacian", lap, 1e-11));
    }
    {
        double worst = 0.0;
        const ConvexTestFunction fs[] = {{ConvexTestFunction::Kind::quadratic, 1.0, 0.1},
                                         {ConvexTestFunction::Kind::huber, 1.0, 0.25}};
        for (const Grid& g : grids)
            for (double s : {0.5, 0.75, 0.9})
                for (const auto& f : fs)
                    for (int trial = 0; trial < 20; ++trial) {
                        const RealField u = rng.band_limited(g, 6, rng.uniform(0.0, 1.0), 0.3);
                        const double norm2 = std::pow(l2_norm(u), 2);
                        worst = std::max(worst, -stroock_varopoulos_check(u, s, f) / norm2);
                    }
        out.push_back(check("fractional positivity -int F'(u)(-Delta)^s u / |u|^2", worst, 1e-10));
    }
    {
        double convexity = 0.0, monotone = 0.0, sign = 0.0, lipschitz = 0.0;
        for (double delta : {1e-1, 1e-2, 1e-3}) {
            const PotentialParams p{delta, 1e-3, 10.0};
            const double h = 1e-3;
            for (double x = -1.0; x <= 2.0; x += h) {
                const double second = f1_delta(x + h, p) - 2 * f1_delta(x, p) + f1_delta(x - h, p);
                convexity = std::max(convexity, -second);
                const double d = f1_delta_prime(x, p);
                sign = std::max(sign, x <= 0.5 ? d : -d);
                const double slope = (f1_delta_prime(x + h, p) - d) / h;
                lipschitz = std::max(lipschitz, slope * delta * (1 - delta) - 1.0);
            }
        }
        for (int i = 1; i < 1000; ++i) {
            const double x = i / 1000.0;
            const PotentialParams coarse{1e-1, 1e-3, 10.0}, mid{1e-2, 1e-3, 10.0}, fine{1e-3, 1e-3, 10.0};
            monotone = std::max({monotone, f1_delta(x, coarse) - f1_delta(x, mid), f1_delta(x, mid) - f1_delta(x, fine),
                                 std::abs(f1_delta_prime(x, coarse)) - std::abs(f1_delta_prime(x, mid)),
                                 std::abs(f1_delta_prime(x, mid)) - std::abs(f1_delta_prime(x, fine))});
        }
        out.push_back(check("f1_delta convexity (neg. second difference)", convexity, 1e-12));
        out.push_back(check("f1_delta monotone in delta", monotone, 1e-14));
        out.push_back(check("f1_delta' sign pattern", sign, 0.0));
        out.push_back(check("f1_delta' Lipschitz 1/(delta(1-delta))", lipschitz, 1e-6));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = rng.uniform(-3.0, 3.0), y = rng.uniform(-3.0, 3.0);
            const double ops[][2] = {{truncate_unit(x), truncate_unit(y)},
                                     {truncate_eps(x, 0.5), truncate_eps(y, 0.5)},
                                     {h_k(x, 1.5), h_k(y, 1.5)}};
            for (const auto& o : ops) worst = std::max(worst, std::abs(o[0] - o[1]) - std::abs(x - y));
            worst = std::max({worst, std::abs(truncate_unit(truncate_unit(x)) - truncate_unit(x)),
                              std::abs(truncate_eps(truncate_eps(x, 0.5), 0.5) - truncate_eps(x, 0.5)),
                              std::abs(h_k(h_k(x, 1.5), 1.5) - h_k(x, 1.5))});
        }
        out.push_back(check("truncations 1-Lipschitz and idempotent", worst, 0.0));
    }
    return out;
}

}  // namespace fracchs
