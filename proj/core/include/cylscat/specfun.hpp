#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cylscat/scaled.hpp"

namespace cylscat {

/// Selects the cylinder-function family G_n: J_n or H_n^(2) = J_n - j Y_n.
enum class CylKind { bessel_j, hankel2 };

/// Radial integration interval [lower, upper] with the background wavenumber
/// that scales the cylinder-function argument.
struct RingInterval {
    double lower = 0.0;   // meters, >= 0
    double upper = 0.0;   // meters, >= lower
    Complex k{0.0, 0.0};  // rad/m, Re > 0, Im <= 0 under e^{jwt}
};

/// Counters for the non-default evaluation paths taken while building ring
/// integrals. Aggregated per table build; never fatal.
struct SpecfunDiag {
    std::int64_t quad_fallbacks = 0;   // recursion/series cancellation rescues
    std::int64_t series_entries = 0;   // high-order series path uses
    std::int64_t asym_log_branch = 0;  // n = 2 Hankel log antiderivative hits

    void merge(const SpecfunDiag& o) {
        quad_fallbacks += o.quad_fallbacks;
        series_entries += o.series_entries;
        asym_log_branch += o.asym_log_branch;
    }
};

// ---------------------------------------------------------------------------
// Cylinder functions of integer order and complex argument.
// ---------------------------------------------------------------------------

/// J_n(z). Negative orders via J_{-n} = (-1)^n J_n.
Complex cyl_j(int n, Complex z);

/// Y_n(z), z != 0. Negative orders via Y_{-n} = (-1)^n Y_n.
Complex cyl_y(int n, Complex z);

/// G_n per kind; throws std::domain_error for Hankel2 at z = 0 or any
/// non-finite argument.
Complex cyl_fn(CylKind kind, int n, Complex z);

/// Same as cyl_fn but in scaled form, valid at orders/arguments where the
/// plain value over- or underflows.
ScaledComplex cyl_fn_scaled(CylKind kind, int n, Complex z);

/// out[n] = J_n(z) for n = 0..nmax, one downward-recurrence pass.
void cyl_j_scaled_batch(Complex z, int nmax, std::span<ScaledComplex> out);

/// out[n] = Y_n(z) for n = 0..nmax, upward recurrence with rescaling.
void cyl_y_scaled_batch(Complex z, int nmax, std::span<ScaledComplex> out);

// ---------------------------------------------------------------------------
// Struve functions H_0, H_1.
// ---------------------------------------------------------------------------

/// Configurable practicality bound for the Struve power series argument.
double struve_arg_limit();
void set_struve_arg_limit(double limit);

/// Struve H_0(u) or H_1(u), real argument. Alternating power series summed to
/// 1e-15 relative; arguments beyond ~25 switch to the large-argument
/// Y_n-plus-asymptotic-tail evaluation. |u| > struve_arg_limit() throws
/// std::range_error.
double struve(int order, double u);

/// Analytic continuation used by the closed-form ring integrals (complex k).
Complex struve_c(int order, Complex z);

// ---------------------------------------------------------------------------
// Closed-form integrals of the zeroth/first-order cylinder functions.
// All integrate over rho' in [iv.lower, iv.upper] with argument k*rho'.
// ---------------------------------------------------------------------------

/// Integral of G_0(k rho') d rho'.
Complex integral_g0(CylKind kind, const RingInterval& iv);

/// Integral of rho' G_0(k rho') d rho' = [rho'/k G_1]; the Hankel lower
/// endpoint at 0 uses the limit rho' H_1^(2)(k rho') -> 2j/(pi k).
Complex integral_rho_g0(CylKind kind, const RingInterval& iv);

/// Integral of G_1(k rho') d rho' = [-G_0/k]; Hankel2 requires lower > 0.
Complex integral_g1(CylKind kind, const RingInterval& iv);

/// Integral of rho' G_1(k rho') d rho' (Struve-based closed form).
Complex integral_rho_g1(CylKind kind, const RingInterval& iv);

// ---------------------------------------------------------------------------
// General-order ring integrals.
// ---------------------------------------------------------------------------

/// Integral of rho' G_n(k rho') d rho'. Closed forms for n <= 1, upward
/// recursion in the oscillatory regime, exact series integration for
/// n > |k| upper, adaptive-quadrature fallback on detected cancellation.
ScaledComplex ring_integral_scaled(CylKind kind, int n, const RingInterval& iv,
                                   SpecfunDiag* diag = nullptr);
Complex ring_integral(CylKind kind, int n, const RingInterval& iv,
                      SpecfunDiag* diag = nullptr);

/// Companion without the rho' weight (the first right-hand terms of the
/// order-lowering recursions need it).
ScaledComplex ring_integral_plain_scaled(CylKind kind, int n, const RingInterval& iv,
                                         SpecfunDiag* diag = nullptr);
Complex ring_integral_plain(CylKind kind, int n, const RingInterval& iv,
                            SpecfunDiag* diag = nullptr);

/// weighted[n] = integral of rho' G_n over iv for n = 0..nmax, sharing the
/// recursion chains across orders. Entry point for table precomputation.
void ring_integral_batch(CylKind kind, const RingInterval& iv, int nmax,
                         std::span<ScaledComplex> weighted,
                         SpecfunDiag* diag = nullptr);

/// Large-order small-argument regime predicate for the closed asymptotic
/// forms below.
bool asymptotic_regime(int n, const RingInterval& iv);

/// Leading-order asymptotic evaluation of the weighted ring integral,
/// a_n = (e k/(2n))^n carried in log-magnitude form. The Hankel branch at
/// n = 2 replaces the vanishing (-n+2) denominator by the logarithmic
/// antiderivative and flags it in the diagnostics.
ScaledComplex asymptotic_ring_integral(CylKind kind, int n, const RingInterval& iv,
                                       SpecfunDiag* diag = nullptr);

}  // namespace cylscat
