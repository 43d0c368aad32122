#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cylscat/fft.hpp"
#include "cylscat/model.hpp"
#include "cylscat/specfun.hpp"

namespace cylscat {

/// Complex samples at polar cell centers (rho_{m-1/2}, phi_k); ring-major.
struct PolarField {
    int rings = 0, angles = 0;
    std::vector<Complex> v;

    PolarField() = default;
    PolarField(int m, int n) : rings(m), angles(n), v(static_cast<size_t>(m) * n) {}
    Complex& at(int m, int k) { return v[static_cast<size_t>(m - 1) * angles + k]; }
    Complex at(int m, int k) const { return v[static_cast<size_t>(m - 1) * angles + k]; }
};

/// Per-ring angular Fourier coefficients, bin-indexed: bin b holds harmonic
/// n = b for b <= N/2 and n = b - N above, i.e. n in [-N/2+1, N/2].
struct HarmonicField {
    int rings = 0, angles = 0;
    std::vector<Complex> c;

    HarmonicField() = default;
    HarmonicField(int m, int n) : rings(m), angles(n), c(static_cast<size_t>(m) * n) {}
    Complex& at(int m, int b) { return c[static_cast<size_t>(m - 1) * angles + b]; }
    Complex at(int m, int b) const { return c[static_cast<size_t>(m - 1) * angles + b]; }
    int harmonic(int b) const { return b <= angles / 2 ? b : b - angles; }
};

/// Background-only tables: per-(ring, |n|) integrals of rho' J_n and
/// rho' H_n^(2) over full and half ring intervals, plus the midpoint factors
/// (-j pi/2) J_n(k rho_{m-1/2}) and (-j pi/2) H_n^(2)(k rho_{m-1/2}).
/// Entries are scaled; negative harmonics use the (-1)^n reflection.
/// The innermost full Hankel interval [0, rho_1] is divergent for n >= 2 and
/// never consumed by the sweeps; those slots hold zero.
struct RingIntegralTable {
    PolarGrid grid;
    Complex k{};
    int half_orders = 0;  // tables run n = 0..half_orders = angles/2

    std::vector<ScaledComplex> pj_full, pj_half_lower;
    std::vector<ScaledComplex> ph_full, ph_half_upper;
    std::vector<ScaledComplex> hank_mid, bess_mid;  // merge factor folded in
    SpecfunDiag diag;

    size_t idx(int m, int n) const {
        return static_cast<size_t>(m - 1) * (half_orders + 1) + n;
    }
};

RingIntegralTable precompute_tables(const PolarGrid& grid, Complex kb);

/// The 1D-FFT polar matrix-vector product A_z = ApplyPotential(phi_z):
/// angular spectrum per ring, recursive outward/inward harmonic sweeps
/// against the precomputed tables, merge, inverse transform. Also evaluates
/// the exterior field analytically from the rim accumulator.
class PolarOperator {
  public:
    PolarOperator(const PolarGrid& grid, Complex kb);

    const PolarGrid& grid() const { return grid_; }
    Complex kb() const { return table_.k; }
    const RingIntegralTable& table() const { return table_; }

    HarmonicField angular_spectrum(const PolarField& f) const;
    PolarField synthesize(const HarmonicField& h) const;

    /// Outward sweep; out(m,b) = A~out at ring midpoints. rim (optional)
    /// receives B~out(rho_M, n) per bin for the exterior formula.
    void accumulate_outward(const HarmonicField& spec, HarmonicField& out,
                            std::vector<ScaledComplex>* rim = nullptr) const;
    void accumulate_inward(const HarmonicField& spec, HarmonicField& out) const;

    PolarField apply_potential(const PolarField& source) const;

    std::vector<ScaledComplex> rim_accumulator(const PolarField& source) const;

    /// A~out(rho_obs, n) per bin from the rim accumulator; rho_obs >= rho_M.
    std::vector<Complex> exterior_spectrum(const std::vector<ScaledComplex>& rim,
                                           double rho_obs) const;

    /// A_z at the observation circle's sample angles (single post-processing
    /// pass, no further sweeps).
    std::vector<Complex> exterior_potential(const PolarField& source,
                                            const ObservationCircle& circle) const;

    /// Eq.-level model of the per-product complex multiplication count.
    static std::uint64_t count_mults_1d(int rings, int angles);

    /// Instrumented count: sweep/merge/twiddle multiplies counted directly,
    /// transforms booked at the radix-2 (N/2) log2 N butterfly model.
    std::uint64_t empirical_mults() const { return mults_; }
    void reset_mults() const { mults_ = 0; }

  private:
    PolarGrid grid_;
    RingIntegralTable table_;
    Dft1d dft_;
    std::vector<Complex> fwd_twiddle_, bwd_twiddle_;
    // per-|n| fast path: every table entry/factor within plain double range
    std::vector<char> plain_ok_;
    std::vector<Complex> pj_full_d_, pj_half_d_, ph_full_d_, ph_half_d_;
    std::vector<Complex> hank_mid_d_, bess_mid_d_;
    std::uint64_t fft_model_cost_;  // (N/2) log2 N
    mutable std::uint64_t mults_ = 0;
};

}  // namespace cylscat
