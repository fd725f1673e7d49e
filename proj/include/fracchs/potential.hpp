#ifndef FRACCHS_POTENTIAL_HPP
#define FRACCHS_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>
#include <string>

/**
 * Flory-Huggins free energy density
 *
 *   f(phi, c) = phi log phi + (1 - phi) log(1 - phi) + phi (1 - phi)
 *               + c^2 / 2 + c (1 - phi) + log 2
 *
 * split into the singular convex part f1 (which carries the log 2) and the
 * smooth part f2, together with a C^1 regularization f1_delta of f1 defined
 * on all of R.
 *
 * f1_delta coincides with f1 on [delta, 1 - delta] and is continued outside
 * by the second-order Taylor polynomial of f1 at the nearest breakpoint.
 * Its derivative is therefore piecewise log/linear, nondecreasing, with
 * global Lipschitz constant f1''(delta) = 1 / (delta (1 - delta)).
 *
 * All scalar functions are templated on the floating-point type.
 */
namespace fracchs {

struct PotentialParams {
    double delta = 1e-3;
    double eps = 1e-3;
    double k_cut = 10.0;

    bool operator==(const PotentialParams&) const = default;
};

inline void validate(const PotentialParams& p) {
    if (!(p.delta > 0.0 && p.delta <= 0.25))
        throw std::invalid_argument("delta must satisfy 0 < delta <= 1/4");
    if (!(p.eps > 0.0 && p.eps < 1.0)) throw std::invalid_argument("eps must satisfy 0 < eps < 1");
    if (!(p.k_cut >= 1.0)) throw std::invalid_argument("k_cut must be >= 1");
}

namespace detail {

template <std::floating_point Real>
void require_open_unit(Real phi, const char* what) {
    if (!(phi > Real(0) && phi < Real(1)))
        throw std::domain_error(std::string(what) + ": phi must lie in (0, 1)");
}

template <std::floating_point Real>
Real f1_unchecked(Real x) {
    return x * std::log(x) + (Real(1) - x) * std::log(Real(1) - x) + std::numbers::ln2_v<Real>;
}

template <std::floating_point Real>
Real f1_prime_unchecked(Real x) {
    return std::log(x) - std::log(Real(1) - x);
}

}  // namespace detail

/// f1(phi) = phi log phi + (1 - phi) log(1 - phi) + log 2 on (0, 1).
template <std::floating_point Real>
Real f1(Real phi) {
    detail::require_open_unit(phi, "f1");
    return detail::f1_unchecked(phi);
}

template <std::floating_point Real>
Real f1_prime(Real phi) {
    detail::require_open_unit(phi, "f1_prime");
    return detail::f1_prime_unchecked(phi);
}

template <std::floating_point Real>
Real f1_double_prime(Real phi) {
    detail::require_open_unit(phi, "f1_double_prime");
    return Real(1) / (phi * (Real(1) - phi));
}

/// Smooth part phi(1 - phi) + c^2/2 + c(1 - phi).
template <std::floating_point Real>
Real f2(Real phi, Real c) {
    return phi * (Real(1) - phi) + c * c / Real(2) + c * (Real(1) - phi);
}

template <std::floating_point Real>
Real f_energy(Real phi, Real c) {
    detail::require_open_unit(phi, "f_energy");
    return detail::f1_unchecked(phi) + f2(phi, c);
}

/// d f / d phi = f1'(phi) + 1 - 2 phi - c.
template <std::floating_point Real>
Real dphi_f(Real phi, Real c) {
    return f1_prime(phi) + Real(1) - Real(2) * phi - c;
}

/// d f / d c = c + 1 - phi; valid for every (phi, c), also for f_delta.
template <std::floating_point Real>
Real dc_f(Real phi, Real c) {
    return c + Real(1) - phi;
}

template <std::floating_point Real>
Real f1_delta_prime(Real phi, const PotentialParams& p) {
    const Real d = Real(p.delta);
    if (phi < d) return detail::f1_prime_unchecked(d) + (phi - d) / (d * (Real(1) - d));
    if (phi > Real(1) - d)
        return detail::f1_prime_unchecked(Real(1) - d) + (phi - (Real(1) - d)) / (d * (Real(1) - d));
    return detail::f1_prime_unchecked(phi);
}

template <std::floating_point Real>
Real f1_delta_double_prime(Real phi, const PotentialParams& p) {
    const Real d = Real(p.delta);
    if (phi < d || phi > Real(1) - d) return Real(1) / (d * (Real(1) - d));
    return Real(1) / (phi * (Real(1) - phi));
}

template <std::floating_point Real>
Real f1_delta(Real phi, const PotentialParams& p) {
    const Real d = Real(p.delta);
    const Real curv = Real(1) / (d * (Real(1) - d));
    Real x0;
    if (phi < d)
        x0 = d;
    else if (phi > Real(1) - d)
        x0 = Real(1) - d;
    else
        return detail::f1_unchecked(phi);
    const Real t = phi - x0;
    return detail::f1_unchecked(x0) + detail::f1_prime_unchecked(x0) * t + curv * t * t / Real(2);
}

/// f_delta(phi, c) = f1_delta(phi) + f2(phi, c).
template <std::floating_point Real>
Real f_delta_energy(Real phi, Real c, const PotentialParams& p) {
    return f1_delta(phi, p) + f2(phi, c);
}

template <std::floating_point Real>
Real dphi_f_delta(Real phi, Real c, const PotentialParams& p) {
    return f1_delta_prime(phi, p) + Real(1) - Real(2) * phi - c;
}

/// [x]_+^1 = min{1, max{0, x}}.
template <std::floating_point Real>
Real truncate_unit(Real x) {
    return std::clamp(x, Real(0), Real(1));
}

/// [x]_+^eps = min{1/eps, max{0, x}}.
template <std::floating_point Real>
Real truncate_eps(Real x, double eps) {
    return std::clamp(x, Real(0), Real(1) / Real(eps));
}

/// h_k(x) = max{-k, min{k, x}}.
template <std::floating_point Real>
Real h_k(Real x, double k) {
    return std::clamp(x, Real(-k), Real(k));
}

}  // namespace fracchs

#endif  // FRACCHS_POTENTIAL_HPP
