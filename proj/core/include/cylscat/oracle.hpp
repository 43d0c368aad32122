#pragma once

#include <span>
#include <vector>

#include "cylscat/model.hpp"
#include "cylscat/polar_op.hpp"

namespace cylscat {

/// Concentric dielectric layers centered on the origin; radii strictly
/// ascending, material i fills radii[i-1] < r <= radii[i].
struct LayeredCylinderSpec {
    std::vector<double> radii;
    std::vector<double> eps_r;
    std::vector<double> sigma;
};

/// Harmonic scattering coefficients a_n (n = 0..n_max) of the exact TM
/// solution for plane-wave incidence exp(-j k_b x): the exterior field is
/// E^i + sum_n (-j)^n a_n H_n^(2)(k_b rho) e^{j n phi} with a_{-n} = a_n.
std::vector<Complex> analytic_harmonic_coeffs(const LayeredCylinderSpec& cyl,
                                              const Background& bg, double freq_hz,
                                              int n_max);

/// Exact scattered field on the observation circle via the transfer-matrix
/// cylindrical-harmonic series; truncation at ceil(|k| r) + 20 with a
/// 1e-12 tail check (throws std::runtime_error on non-convergence).
std::vector<Complex> analytic_scattered(const LayeredCylinderSpec& cyl,
                                        const Background& bg, double freq_hz,
                                        const ObservationCircle& circle);

struct EvalPoint {
    double x, y;
};

/// Brute-force A_z: pulse-cell integration of (-j/4) H_0^(2)(k |r - r'|)
/// against the source, cell by cell, adaptive quadrature near/inside cells.
std::vector<Complex> direct_quadrature_potential(const PolarGrid& grid, Complex kb,
                                                 const PolarField& source,
                                                 std::span<const EvalPoint> eval,
                                                 double rel_tol = 1e-7);
std::vector<Complex> direct_quadrature_potential(const CartesianGrid& grid, Complex kb,
                                                 const std::vector<Complex>& source,
                                                 std::span<const EvalPoint> eval,
                                                 double rel_tol = 1e-7);

/// Eq.-defined error metric ||ref - computed|| / ||ref|| (L2); throws
/// std::domain_error on a zero-norm reference.
double relative_error(std::span<const Complex> reference,
                      std::span<const Complex> computed);

/// G_eff = 4 N2 Mx Ny log2(4 Mx Ny) / (N1 Mrho Nphi log2 Nphi).
double efficiency_gain(int n2_iters, int mx, int ny, int n1_iters, int m_rho,
                       int n_phi);

struct ComparisonMetrics {
    double err_polar = 0.0;
    double err_cartesian = 0.0;
    double time_ratio = 0.0;  // T_2D / T_1D
    double gain = 0.0;
    int iters_polar = 0;
    int iters_cartesian = 0;
};

}  // namespace cylscat
