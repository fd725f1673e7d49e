#ifndef FRACCHS_SPECTRAL_HPP
#define FRACCHS_SPECTRAL_HPP

#include <filesystem>

#include "fracchs/field.hpp"

/**
 * Cosine-basis spectral calculus on a rectangle with homogeneous Neumann
 * boundary conditions.
 *
 * The Neumann eigenfunctions are e_k(x) = prod_i a_{k_i} cos(k_i pi x_i / L_i)
 * with a_0 = 1/sqrt(L_i) and a_k = sqrt(2/L_i), so that (e_k, e_m) = delta_km.
 * On the cell-centred grid the midpoint rule reproduces these inner products
 * exactly for k_i, m_i < n_i, which makes every transform an orthogonal map
 * between grid values (weighted by the cell volume) and coefficients.
 *
 * Derivatives map cosine modes onto sine modes sqrt(2/L) sin(k pi x / L),
 * k = 1..n-1, sampled on the same grid. The divergence is the exact discrete
 * adjoint of the gradient: sum_h u div(v) = -sum_h grad(u) . v.
 */
namespace fracchs {

SpectralCoeffs dct_forward(const RealField& u);
RealField dct_inverse(const SpectralCoeffs& coeffs);

/// lambda_k = sum_i (k_i pi / L_i)^2.
double eigenvalue(const ModeIndex& k, const Grid& grid);
/// Eigenvalues for every mode, flattened in coefficient order.
Eigen::ArrayXd eigenvalues(const Grid& grid);

/// sum_{k != 0} lambda_k^sigma (u, e_k) e_k. Throws std::invalid_argument if sigma <= 0.
RealField apply_neg_laplacian_power(const RealField& u, double sigma);
/// Delta u = -(-Delta) u.
RealField laplacian(const RealField& u);

VectorField gradient(const RealField& u);
RealField divergence(const VectorField& v);
/// P_keep divergence(v), projected before the synthesis so the zero mode stays exactly zero.
RealField divergence(const VectorField& v, const ModeIndex& keep);

/// Orthogonal projection onto modes with k_i < keep_i (Galerkin truncation).
RealField project_modes(const RealField& u, const ModeIndex& keep);
SpectralCoeffs project_modes(const SpectralCoeffs& u, const ModeIndex& keep);
/// Default retained modes: the 2/3 rule, floor(2 n_i / 3) per axis.
ModeIndex two_thirds_modes(const Grid& grid);

double mean(const RealField& u);
double inner_product(const RealField& u, const RealField& w);
double l2_norm(const RealField& u);
/// (sum_k lambda_k^sigma |(u, e_k)|^2)^{1/2} = ||(-Delta)^{sigma/2} u||.
double hs_seminorm(const RealField& u, double sigma);
/// (sum_h |u|^p)^{1/p} with midpoint weights.
double lp_norm(const RealField& u, double p);
/// L^p norm of the Euclidean magnitude of v.
double lp_norm(const VectorField& v, double p);

// Field snapshot files: an ASCII header line
//   FRACCHS v1 <d> <n1> [n2] <L1> [L2]
// followed by the values as raw little-endian doubles, row-major.
void write_snapshot(const std::filesystem::path& path, const RealField& u);
RealField read_snapshot(const std::filesystem::path& path);

}  // namespace fracchs

#endif  // FRACCHS_SPECTRAL_HPP
