#include "cylscat/polar_op.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace cylscat {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr Complex kMergeFactor{0.0, -0.5 * kPi};  // -j pi / 2

int log2_exact(int n) {
    if (n <= 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("angular sample count must be a power of two");
    return std::countr_zero(static_cast<unsigned>(n));
}

double reflect_sig(int n) { return (n < 0 && (std::abs(n) & 1)) ? -1.0 : 1.0; }
}  // namespace

RingIntegralTable precompute_tables(const PolarGrid& grid, Complex kb) {
    if (grid.rings < 1) throw std::invalid_argument("polar grid needs >= 1 ring");
    log2_exact(grid.angles);
    RingIntegralTable t;
    t.grid = grid;
    t.k = kb;
    t.half_orders = grid.angles / 2;
    const int no = t.half_orders;
    const size_t per_ring = static_cast<size_t>(no) + 1;
    const size_t total = per_ring * grid.rings;
    t.pj_full.resize(total);
    t.pj_half_lower.resize(total);
    t.ph_full.resize(total);
    t.ph_half_upper.resize(total);
    t.hank_mid.resize(total);
    t.bess_mid.resize(total);

    std::vector<ScaledComplex> jb(per_ring), yb(per_ring);
    for (int m = 1; m <= grid.rings; ++m) {
        const double lo = grid.edge(m - 1), hi = grid.edge(m), mid = grid.mid(m);
        ring_integral_batch(CylKind::bessel_j, {lo, hi, kb}, no,
                            {&t.pj_full[t.idx(m, 0)], per_ring}, &t.diag);
        ring_integral_batch(CylKind::bessel_j, {lo, mid, kb}, no,
                            {&t.pj_half_lower[t.idx(m, 0)], per_ring}, &t.diag);
        // m = 1 full Hankel interval starts at rho = 0: the batch fills the
        // finite limit entries (n <= 1) and zeros the divergent orders.
        ring_integral_batch(CylKind::hankel2, {lo, hi, kb}, no,
                            {&t.ph_full[t.idx(m, 0)], per_ring}, &t.diag);
        ring_integral_batch(CylKind::hankel2, {mid, hi, kb}, no,
                            {&t.ph_half_upper[t.idx(m, 0)], per_ring}, &t.diag);

        cyl_j_scaled_batch(kb * mid, no, jb);
        cyl_y_scaled_batch(kb * mid, no, yb);
        for (int n = 0; n <= no; ++n) {
            t.bess_mid[t.idx(m, n)] = sc_mul(jb[n], kMergeFactor);
            t.hank_mid[t.idx(m, n)] =
                sc_mul(sc_add(jb[n], sc_mul(yb[n], -kImagUnit)), kMergeFactor);
        }
    }
    return t;
}

PolarOperator::PolarOperator(const PolarGrid& grid, Complex kb)
    : grid_(grid), table_(precompute_tables(grid, kb)), dft_(grid.angles) {
    const int n = grid_.angles;
    const int l2 = log2_exact(n);
    fft_model_cost_ = static_cast<std::uint64_t>(n / 2) * l2;
    fwd_twiddle_.resize(n);
    bwd_twiddle_.resize(n);
    HarmonicField probe(1, n);
    for (int b = 0; b < n; ++b) {
        double ph = kPi * probe.harmonic(b) / n;
        fwd_twiddle_[b] = std::polar(1.0 / n, -ph);
        bwd_twiddle_[b] = std::polar(1.0, ph);
    }

    // Fast path per |n|: plain doubles whenever every entry and factor stays
    // comfortably inside double range (products add exponents).
    const int no = table_.half_orders;
    plain_ok_.assign(no + 1, 1);
    auto scan = [&](const std::vector<ScaledComplex>& a) {
        for (int m = 1; m <= grid_.rings; ++m)
            for (int nn = 0; nn <= no; ++nn) {
                const ScaledComplex& s = a[table_.idx(m, nn)];
                if (!s.is_zero() && std::llabs(s.exp) > 480) plain_ok_[nn] = 0;
            }
    };
    scan(table_.pj_full);
    scan(table_.pj_half_lower);
    scan(table_.ph_full);
    scan(table_.ph_half_upper);
    scan(table_.hank_mid);
    scan(table_.bess_mid);
    auto mirror = [&](const std::vector<ScaledComplex>& a, std::vector<Complex>& d) {
        d.resize(a.size());
        for (size_t i = 0; i < a.size(); ++i) d[i] = sc_to_complex(a[i]);
    };
    mirror(table_.pj_full, pj_full_d_);
    mirror(table_.pj_half_lower, pj_half_d_);
    mirror(table_.ph_full, ph_full_d_);
    mirror(table_.ph_half_upper, ph_half_d_);
    mirror(table_.hank_mid, hank_mid_d_);
    mirror(table_.bess_mid, bess_mid_d_);
}

HarmonicField PolarOperator::angular_spectrum(const PolarField& f) const {
    if (f.rings != grid_.rings || f.angles != grid_.angles)
        throw std::invalid_argument("angular_spectrum: field dims mismatch grid");
    HarmonicField h(f.rings, f.angles);
    const int n = grid_.angles;
    for (int m = 1; m <= f.rings; ++m) {
        dft_.forward(&f.v[static_cast<size_t>(m - 1) * n],
                     &h.c[static_cast<size_t>(m - 1) * n]);
        Complex* row = &h.c[static_cast<size_t>(m - 1) * n];
        for (int b = 0; b < n; ++b) row[b] *= fwd_twiddle_[b];
    }
    mults_ += static_cast<std::uint64_t>(f.rings) * (fft_model_cost_ + n);
    return h;
}

PolarField PolarOperator::synthesize(const HarmonicField& h) const {
    if (h.rings != grid_.rings || h.angles != grid_.angles)
        throw std::invalid_argument("synthesize: field dims mismatch grid");
    PolarField f(h.rings, h.angles);
    const int n = grid_.angles;
    std::vector<Complex> row(n);
    for (int m = 1; m <= h.rings; ++m) {
        const Complex* src = &h.c[static_cast<size_t>(m - 1) * n];
        for (int b = 0; b < n; ++b) row[b] = src[b] * bwd_twiddle_[b];
        dft_.inverse(row.data(), &f.v[static_cast<size_t>(m - 1) * n]);
    }
    mults_ += static_cast<std::uint64_t>(h.rings) * (fft_model_cost_ + n);
    return f;
}

void PolarOperator::accumulate_outward(const HarmonicField& spec, HarmonicField& out,
                                       std::vector<ScaledComplex>* rim) const {
    const int nb = grid_.angles;
    const int rings = grid_.rings;
    out = HarmonicField(rings, nb);
    if (rim) rim->assign(nb, sc_zero());
    for (int b = 0; b < nb; ++b) {
        const int n = out.harmonic(b);
        const int a = std::abs(n);
        // (-1)^n reflection signs cancel pairwise in factor x table products;
        // the rim keeps its single sign.
        if (plain_ok_[a]) {
            Complex acc{0.0, 0.0};
            for (int m = 1; m <= rings; ++m) {
                const size_t i = table_.idx(m, a);
                const Complex phi = spec.at(m, b);
                out.at(m, b) = hank_mid_d_[i] * (acc + phi * pj_half_d_[i]);
                acc += phi * pj_full_d_[i];
            }
            if (rim) (*rim)[b] = sc_mul(sc_from(acc), reflect_sig(n));
        } else {
            ScaledComplex acc = sc_zero();
            for (int m = 1; m <= rings; ++m) {
                const size_t i = table_.idx(m, a);
                const Complex phi = spec.at(m, b);
                ScaledComplex mid = sc_add(acc, sc_mul(table_.pj_half_lower[i], phi));
                out.at(m, b) = sc_to_complex(sc_mul(table_.hank_mid[i], mid));
                acc = sc_add(acc, sc_mul(table_.pj_full[i], phi));
            }
            if (rim) (*rim)[b] = sc_mul(acc, reflect_sig(n));
        }
    }
    mults_ += static_cast<std::uint64_t>(rings) * nb * 3;  // 2 table + 1 merge
}

void PolarOperator::accumulate_inward(const HarmonicField& spec, HarmonicField& out) const {
    const int nb = grid_.angles;
    const int rings = grid_.rings;
    out = HarmonicField(rings, nb);
    for (int b = 0; b < nb; ++b) {
        const int a = std::abs(out.harmonic(b));
        if (plain_ok_[a]) {
            Complex acc{0.0, 0.0};
            for (int m = rings; m >= 1; --m) {
                const size_t i = table_.idx(m, a);
                const Complex phi = spec.at(m, b);
                out.at(m, b) = bess_mid_d_[i] * (acc + phi * ph_half_d_[i]);
                // the m = 1 full interval (divergent slot) is never consumed
                if (m > 1) acc += phi * ph_full_d_[i];
            }
        } else {
            ScaledComplex acc = sc_zero();
            for (int m = rings; m >= 1; --m) {
                const size_t i = table_.idx(m, a);
                const Complex phi = spec.at(m, b);
                ScaledComplex mid = sc_add(acc, sc_mul(table_.ph_half_upper[i], phi));
                out.at(m, b) = sc_to_complex(sc_mul(table_.bess_mid[i], mid));
                if (m > 1) acc = sc_add(acc, sc_mul(table_.ph_full[i], phi));
            }
        }
    }
    mults_ += static_cast<std::uint64_t>(rings) * nb * 3;
}

PolarField PolarOperator::apply_potential(const PolarField& source) const {
    HarmonicField spec = angular_spectrum(source);
    HarmonicField out, in;
    accumulate_outward(spec, out);
    accumulate_inward(spec, in);
    for (size_t i = 0; i < out.c.size(); ++i) out.c[i] += in.c[i];
    return synthesize(out);
}

std::vector<ScaledComplex> PolarOperator::rim_accumulator(const PolarField& source) const {
    HarmonicField spec = angular_spectrum(source);
    HarmonicField out;
    std::vector<ScaledComplex> rim;
    accumulate_outward(spec, out, &rim);
    return rim;
}

std::vector<Complex> PolarOperator::exterior_spectrum(
    const std::vector<ScaledComplex>& rim, double rho_obs) const {
    if (rho_obs < grid_.radius * (1.0 - 1e-12))
        throw std::domain_error("exterior_spectrum: rho_obs inside the embedding disk");
    const int nb = grid_.angles;
    const int no = table_.half_orders;
    std::vector<ScaledComplex> jb(no + 1), yb(no + 1);
    cyl_j_scaled_batch(table_.k * rho_obs, no, jb);
    cyl_y_scaled_batch(table_.k * rho_obs, no, yb);
    HarmonicField probe(1, nb);
    std::vector<Complex> out(nb);
    for (int b = 0; b < nb; ++b) {
        const int n = probe.harmonic(b);
        const int a = std::abs(n);
        ScaledComplex h = sc_add(jb[a], sc_mul(yb[a], -kImagUnit));
        out[b] = sc_to_complex(
            sc_mul(sc_mul(sc_mul(h, rim[b]), reflect_sig(n)), kMergeFactor));
    }
    mults_ += static_cast<std::uint64_t>(nb) * 2;
    return out;
}

std::vector<Complex> PolarOperator::exterior_potential(
    const PolarField& source, const ObservationCircle& circle) const {
    std::vector<Complex> spec = exterior_spectrum(rim_accumulator(source), circle.radius);
    const int nb = grid_.angles;
    HarmonicField probe(1, nb);
    std::vector<Complex> field(circle.samples, Complex{0.0, 0.0});
    for (int q = 0; q < circle.samples; ++q) {
        const double phi = circle.angle(q);
        Complex s{0.0, 0.0};
        for (int b = 0; b < nb; ++b)
            s += spec[b] * std::polar(1.0, probe.harmonic(b) * phi);
        field[q] = s;
    }
    mults_ += static_cast<std::uint64_t>(circle.samples) * nb;
    return field;
}

std::uint64_t PolarOperator::count_mults_1d(int rings, int angles) {
    const int l2 = log2_exact(angles);
    const std::uint64_t mn = static_cast<std::uint64_t>(rings) * angles;
    return 2 * mn * l2 + 2 * mn;
}

}  // namespace cylscat
