#include "cylscat/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cylscat/quadrature.hpp"

namespace cylscat {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

using LComplex = std::complex<long double>;

bool finite_c(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// ---------------------------------------------------------------------------
// J_0, J_1, Y_0, Y_1 of complex argument: long-double power series for
// moderate |z|, Hankel asymptotic expansion beyond.
// ---------------------------------------------------------------------------

struct Cyl01 {
    Complex j0, j1, y0, y1;
};

Cyl01 cyl01_series(Complex zz) {
    const LComplex z(zz.real(), zz.imag());
    const LComplex half_z = z * 0.5L;
    const LComplex q = half_z * half_z;
    const LComplex log_half_z = std::log(half_z);
    const long double gamma_l = static_cast<long double>(kEulerGamma);

    LComplex j0 = 1.0L, t0 = 1.0L;
    LComplex j1s = 1.0L, t1 = 1.0L;  // J1 = (z/2) * j1s
    LComplex y0s = 0.0L;             // sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2
    LComplex y1s = 0.0L;             // sum_k (-1)^k (psi(k+1)+psi(k+2)) q^k/(k!(k+1)!)
    long double hk = 0.0L;           // H_k
    LComplex u0 = 1.0L, u1 = 1.0L;
    y1s = (-2.0L * gamma_l + 1.0L);  // k = 0 term: psi(1)+psi(2) = 1-2g, sign +
    for (int k = 1; k <= 200; ++k) {
        t0 *= -q / LComplex(static_cast<long double>(k) * k);
        t1 *= -q / LComplex(static_cast<long double>(k) * (k + 1.0L));
        j0 += t0;
        j1s += t1;
        u0 *= q / LComplex(static_cast<long double>(k) * k);
        u1 *= q / LComplex(static_cast<long double>(k) * (k + 1.0L));
        hk += 1.0L / k;
        long double sgn = (k % 2 == 0) ? -1.0L : 1.0L;
        y0s += sgn * hk * u0;
        // psi(k+1)+psi(k+2) = -2g + H_k + H_{k+1}
        long double psum = -2.0L * gamma_l + 2.0L * hk + 1.0L / (k + 1.0L);
        y1s += -sgn * psum * u1;
        if (std::abs(t0) < 1e-22L * std::abs(j0) &&
            std::abs(t1) < 1e-22L * std::abs(j1s) && k > 4)
            break;
    }
    const LComplex j1 = half_z * j1s;
    const long double two_over_pi = 2.0L / static_cast<long double>(kPi);
    LComplex y0 = two_over_pi * ((log_half_z + gamma_l) * j0 + y0s);
    LComplex y1 = two_over_pi * log_half_z * j1 - two_over_pi / z -
                  (half_z / static_cast<long double>(kPi)) * y1s;
    auto dc = [](LComplex v) {
        return Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    };
    return {dc(j0), dc(j1), dc(y0), dc(y1)};
}

// Large-argument Hankel expansion H_nu^{(1,2)} = sqrt(2/(pi z)) e^{+-j w}
// sum_k (+-j)^k a_k(nu)/z^k, truncated at the smallest term.
Complex hankel_asym_sum(int nu, Complex z, double sgn) {
    const double mu = 4.0 * nu * nu;
    Complex sum = 1.0, term = 1.0;
    double prev = 1e300;
    for (int k = 1; k <= 40; ++k) {
        double odd = 2.0 * k - 1.0;
        term *= Complex(0.0, sgn) * (mu - odd * odd) / (8.0 * k * z);
        double mag = std::abs(term);
        if (mag > prev) break;  // past the optimal truncation point
        sum += term;
        if (mag < 1e-17 * std::abs(sum)) break;
        prev = mag;
    }
    return sum;
}

Cyl01 cyl01_asym(Complex z) {
    Cyl01 r;
    const Complex pref = std::sqrt(2.0 / (kPi * z));
    for (int nu = 0; nu <= 1; ++nu) {
        Complex w = z - (0.5 * nu + 0.25) * kPi;
        Complex e1 = std::exp(kImagUnit * w);
        Complex e2 = std::exp(-kImagUnit * w);
        Complex h1 = pref * e1 * hankel_asym_sum(nu, z, +1.0);
        Complex h2 = pref * e2 * hankel_asym_sum(nu, z, -1.0);
        Complex j = 0.5 * (h1 + h2);
        Complex y = (h1 - h2) / (2.0 * kImagUnit);
        if (nu == 0) {
            r.j0 = j;
            r.y0 = y;
        } else {
            r.j1 = j;
            r.y1 = y;
        }
    }
    return r;
}

Cyl01 cyl01(Complex z) {
    return std::abs(z) < 16.0 ? cyl01_series(z) : cyl01_asym(z);
}

int reflect_sign(int n) { return (n % 2 != 0) ? -1 : 1; }

}  // namespace

// ---------------------------------------------------------------------------
// Batched evaluations.
// ---------------------------------------------------------------------------

void cyl_j_scaled_batch(Complex z, int nmax, std::span<ScaledComplex> out) {
    const double az = std::abs(z);
    if (az == 0.0) {
        out[0] = sc_one();
        for (int n = 1; n <= nmax; ++n) out[n] = sc_zero();
        return;
    }
    if (az < 1e-250) {
        // Leading series term only; the q-correction is below double epsilon.
        ScaledComplex t = sc_one();
        out[0] = t;
        for (int n = 1; n <= nmax; ++n) {
            t = sc_mul(t, z / (2.0 * n));
            out[n] = t;
        }
        return;
    }

    const double big = std::max(static_cast<double>(nmax), az);
    int start = static_cast<int>(big) + 16 + static_cast<int>(2.0 * std::sqrt(40.0 * (big + 1.0)));
    start += start % 2;  // even start keeps the normalization sum aligned

    Complex vp{0.0, 0.0};  // v_{m+1}
    Complex vc{1e-40, 0.0};
    std::int64_t shift = 0;  // true v = v_stored * 2^shift
    ScaledComplex sum = sc_zero();
    for (int m = start; m >= 0; --m) {
        if (m <= nmax) out[m] = {vc, shift};
        if (m % 2 == 0) {
            ScaledComplex c = sc_normalize(vc, shift);
            sum = sc_add(sum, m == 0 ? c : sc_ldexp(c, 1));
        }
        if (m > 0) {
            Complex vm = (2.0 * m / z) * vc - vp;
            vp = vc;
            vc = vm;
            double mag = std::max(std::fabs(vc.real()), std::fabs(vc.imag()));
            if (mag > 1e260) {
                vc *= 0x1p-900;
                vp *= 0x1p-900;
                shift += 900;
            }
        }
    }
    ScaledComplex inv = sc_div(sc_one(), sum);
    for (int n = 0; n <= nmax; ++n) out[n] = sc_mul(sc_normalize(out[n].frac, out[n].exp), inv);
}

void cyl_y_scaled_batch(Complex z, int nmax, std::span<ScaledComplex> out) {
    Cyl01 c = cyl01(z);
    out[0] = sc_from(c.y0);
    if (nmax >= 1) out[1] = sc_from(c.y1);
    for (int m = 1; m < nmax; ++m)
        out[m + 1] = sc_sub(sc_mul(out[m], 2.0 * m / z), out[m - 1]);
}

Complex cyl_j(int n, Complex z) {
    if (n < 0) return static_cast<double>(reflect_sign(-n)) * cyl_j(-n, z);
    if (n <= 1) {
        Cyl01 c = cyl01(z);
        return n == 0 ? c.j0 : c.j1;
    }
    std::vector<ScaledComplex> buf(n + 1);
    cyl_j_scaled_batch(z, n, buf);
    return sc_to_complex(buf[n]);
}

Complex cyl_y(int n, Complex z) {
    if (n < 0) return static_cast<double>(reflect_sign(-n)) * cyl_y(-n, z);
    if (n <= 1) {
        Cyl01 c = cyl01(z);
        return n == 0 ? c.y0 : c.y1;
    }
    std::vector<ScaledComplex> buf(n + 1);
    cyl_y_scaled_batch(z, n, buf);
    return sc_to_complex(buf[n]);
}

Complex cyl_fn(CylKind kind, int n, Complex z) {
    if (!finite_c(z)) throw std::domain_error("cyl_fn: non-finite argument");
    if (kind == CylKind::bessel_j) return cyl_j(n, z);
    if (z == Complex{0.0, 0.0})
        throw std::domain_error("cyl_fn: Hankel2 singular at zero argument");
    return cyl_j(n, z) - kImagUnit * cyl_y(n, z);
}

ScaledComplex cyl_fn_scaled(CylKind kind, int n, Complex z) {
    if (!finite_c(z)) throw std::domain_error("cyl_fn_scaled: non-finite argument");
    const int m = std::abs(n);
    const double sgn = (n < 0) ? reflect_sign(m) : 1;
    std::vector<ScaledComplex> jb(m + 1);
    cyl_j_scaled_batch(z, m, jb);
    if (kind == CylKind::bessel_j) return sc_mul(jb[m], sgn);
    if (z == Complex{0.0, 0.0})
        throw std::domain_error("cyl_fn_scaled: Hankel2 singular at zero argument");
    std::vector<ScaledComplex> yb(m + 1);
    cyl_y_scaled_batch(z, m, yb);
    return sc_mul(sc_add(jb[m], sc_mul(yb[m], -kImagUnit)), sgn);
}

// ---------------------------------------------------------------------------
// Struve H_0, H_1.
// ---------------------------------------------------------------------------

namespace {
double g_struve_limit = 60.0;

LComplex struve_series(int order, LComplex z) {
    LComplex sum, t;
    if (order == 0) {
        t = z;
        sum = t;
        for (int m = 1; m <= 200; ++m) {
            double odd = 2.0 * m + 1.0;
            t *= -(z * z) / LComplex(odd * odd);
            sum += t;
            if (std::abs(t) < 1e-15L * std::abs(sum)) break;
        }
    } else {
        t = z * z / 3.0L;
        sum = t;
        for (int m = 1; m <= 200; ++m) {
            t *= -(z * z) / LComplex((2.0 * m + 1.0) * (2.0 * m + 3.0));
            sum += t;
            if (std::abs(t) < 1e-15L * std::abs(sum)) break;
        }
    }
    return (2.0L / static_cast<long double>(kPi)) * sum;
}

// DLMF 11.6.1 tail: H_nu(z) - Y_nu(z), asymptotic in 1/z.
Complex struve_tail(int order, Complex z) {
    Complex term, sum;
    if (order == 0) {
        term = 2.0 / (kPi * z);
        sum = term;
        for (int k = 0; k < 30; ++k) {
            Complex next = term * (-(k + 0.5) * (k + 0.5) * 4.0 / (z * z));
            if (std::abs(next) >= std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
    } else {
        term = 2.0 / kPi;
        sum = term;
        for (int k = 0; k < 30; ++k) {
            Complex next = term * ((0.25 - k * k) * 4.0 / (z * z));
            if (std::abs(next) >= std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
    }
    return sum;
}
}  // namespace

double struve_arg_limit() { return g_struve_limit; }
void set_struve_arg_limit(double limit) { g_struve_limit = limit; }

Complex struve_c(int order, Complex z) {
    if (order != 0 && order != 1) throw std::invalid_argument("struve: order must be 0 or 1");
    if (!finite_c(z)) throw std::domain_error("struve: non-finite argument");
    if (std::abs(z) <= 23.0) {
        LComplex v = struve_series(order, LComplex(z.real(), z.imag()));
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    return cyl_y(order, z) + struve_tail(order, z);
}

double struve(int order, double u) {
    if (order != 0 && order != 1) throw std::invalid_argument("struve: order must be 0 or 1");
    if (!std::isfinite(u)) throw std::domain_error("struve: non-finite argument");
    if (std::fabs(u) > g_struve_limit)
        throw std::range_error(
            "struve: |arg| = " + std::to_string(std::fabs(u)) +
            " beyond series practicality bound " + std::to_string(g_struve_limit) +
            "; use an asymptotic evaluation for large arguments");
    double sgn = 1.0;
    if (u < 0.0) {
        // H_0 is odd, H_1 is even.
        sgn = (order == 0) ? -1.0 : 1.0;
        u = -u;
    }
    return sgn * struve_c(order, Complex(u, 0.0)).real();
}

// ---------------------------------------------------------------------------
// Closed-form integrals (A&S 11.1.7-style antiderivatives).
// ---------------------------------------------------------------------------

namespace {

struct G01 {
    Complex g0, g1;
};

G01 g01(CylKind kind, Complex u) {
    Cyl01 c = cyl01(u);
    if (kind == CylKind::bessel_j) return {c.j0, c.j1};
    return {c.j0 - kImagUnit * c.y0, c.j1 - kImagUnit * c.y1};
}

void check_interval(const RingInterval& iv) {
    if (!(iv.lower >= 0.0) || !(iv.upper >= iv.lower) || !std::isfinite(iv.upper))
        throw std::domain_error("ring interval: require 0 <= lower <= upper, finite");
    if (!finite_c(iv.k) || iv.k == Complex{0.0, 0.0})
        throw std::domain_error("ring interval: wavenumber must be finite and nonzero");
}

// [rho G_0 + (pi rho/2)(H_0 G_1 - H_1 G_0)] evaluated at rho (Struve H).
Complex antider_g0(CylKind kind, Complex k, double rho) {
    if (rho == 0.0) return {0.0, 0.0};
    Complex u = k * rho;
    G01 g = g01(kind, u);
    Complex hs0 = struve_c(0, u);
    Complex hs1 = struve_c(1, u);
    return rho * g.g0 + 0.5 * kPi * rho * (hs0 * g.g1 - hs1 * g.g0);
}

// (pi rho/2)(H_0 G_1 - H_1 G_0) evaluated at rho.
Complex antider_rho_g1(CylKind kind, Complex k, double rho) {
    if (rho == 0.0) return {0.0, 0.0};
    Complex u = k * rho;
    G01 g = g01(kind, u);
    Complex hs0 = struve_c(0, u);
    Complex hs1 = struve_c(1, u);
    return 0.5 * kPi * rho * (hs0 * g.g1 - hs1 * g.g0);
}

}  // namespace

Complex integral_g0(CylKind kind, const RingInterval& iv) {
    check_interval(iv);
    if (iv.lower == iv.upper) return {0.0, 0.0};
    return antider_g0(kind, iv.k, iv.upper) - antider_g0(kind, iv.k, iv.lower);
}

Complex integral_rho_g0(CylKind kind, const RingInterval& iv) {
    check_interval(iv);
    if (iv.lower == iv.upper) return {0.0, 0.0};
    auto endpoint = [&](double rho) -> Complex {
        if (rho == 0.0) {
            // lim rho' H_1^(2)(k rho') = 2j/(pi k); the J_1 limit is 0.
            if (kind == CylKind::hankel2) return 2.0 * kImagUnit / (kPi * iv.k * iv.k);
            return {0.0, 0.0};
        }
        return (rho / iv.k) * g01(kind, iv.k * rho).g1;
    };
    return endpoint(iv.upper) - endpoint(iv.lower);
}

Complex integral_g1(CylKind kind, const RingInterval& iv) {
    check_interval(iv);
    if (iv.lower == iv.upper) return {0.0, 0.0};
    if (kind == CylKind::hankel2 && iv.lower == 0.0)
        throw std::domain_error("integral_g1: Hankel2 integral divergent at lower = 0");
    auto g0_at = [&](double rho) -> Complex {
        if (rho == 0.0) return {1.0, 0.0};  // J_0(0)
        return g01(kind, iv.k * rho).g0;
    };
    return -(g0_at(iv.upper) - g0_at(iv.lower)) / iv.k;
}

Complex integral_rho_g1(CylKind kind, const RingInterval& iv) {
    check_interval(iv);
    if (iv.lower == iv.upper) return {0.0, 0.0};
    return (antider_rho_g1(kind, iv.k, iv.upper) - antider_rho_g1(kind, iv.k, iv.lower)) /
           iv.k;
}

// ---------------------------------------------------------------------------
// Exact series integration, n above the oscillatory regime.
// ---------------------------------------------------------------------------

namespace {

// [rho^{p+1}/(p+1)] over the interval, scaled.
ScaledComplex power_moment(double a, double b, std::int64_t p) {
    ScaledComplex hi = sc_pow_real(b, p + 1);
    ScaledComplex lo = (a == 0.0) ? sc_zero() : sc_pow_real(a, p + 1);
    return sc_mul(sc_sub(hi, lo), 1.0 / static_cast<double>(p + 1));
}

// [rho^{p+1} (L(rho)/(p+1) - 1/(p+1)^2)] with L(rho) = log(alpha rho).
ScaledComplex log_moment(double a, double b, std::int64_t p, Complex log_alpha) {
    const double q = static_cast<double>(p + 1);
    auto at = [&](double rho) -> ScaledComplex {
        if (rho == 0.0) return sc_zero();
        Complex coef = (log_alpha + std::log(rho)) / q - 1.0 / (q * q);
        return sc_mul(sc_pow_real(rho, p + 1), coef);
    };
    return sc_sub(at(b), at(a));
}

struct SeriesResult {
    ScaledComplex value;
    double cancel_bits;  // log2(max term / |sum|)
};

// integral of rho^w J_n(k rho) over [a, b] by term-by-term integration of the
// power series, all magnitudes carried in scaled form.
SeriesResult series_integral_j(int n, const RingInterval& iv, int w) {
    ScaledComplex pref = sc_one();  // (k/2)^n / n!
    for (int i = 1; i <= n; ++i) pref = sc_mul(pref, iv.k / (2.0 * i));
    const Complex ratio_base = -(iv.k * iv.k) * 0.25;

    ScaledComplex sum = sc_zero();
    ScaledComplex coef = pref;
    double max_log = -1e308;
    int tiny_streak = 0;
    for (int j = 0; j <= 600; ++j) {
        std::int64_t p = n + 2 * j + w;
        ScaledComplex term = sc_mul(coef, power_moment(iv.lower, iv.upper, p));
        sum = sc_add(sum, term);
        double tl = sc_log2_abs(term);
        max_log = std::max(max_log, tl);
        if (!sum.is_zero() && tl < sc_log2_abs(sum) - 64.0) {
            if (++tiny_streak >= 2) break;
        } else {
            tiny_streak = 0;
        }
        coef = sc_mul(coef, ratio_base / ((j + 1.0) * (n + j + 1.0)));
    }
    double cancel = sum.is_zero() ? 200.0 : max_log - sc_log2_abs(sum);
    return {sum, cancel};
}

// integral of rho^w Y_n(k rho) over [a, b]; requires a > 0 when the finite
// sum produces non-positive rho exponents.
SeriesResult series_integral_y(int n, const RingInterval& iv, int w) {
    const Complex log_half_k = std::log(iv.k * 0.5);
    const double a = iv.lower, b = iv.upper;

    // (2/pi) log-part: sum_j c_j (k/2)^{n+2j} * log-moment
    ScaledComplex log_part = sc_zero();
    {
        ScaledComplex coef = sc_one();
        for (int i = 1; i <= n; ++i) coef = sc_mul(coef, iv.k / (2.0 * i));
        const Complex rbase = -(iv.k * iv.k) * 0.25;
        int tiny = 0;
        for (int j = 0; j <= 600; ++j) {
            std::int64_t p = n + 2 * j + w;
            ScaledComplex term = sc_mul(coef, log_moment(a, b, p, log_half_k));
            log_part = sc_add(log_part, term);
            if (!log_part.is_zero() &&
                sc_log2_abs(term) < sc_log2_abs(log_part) - 64.0) {
                if (++tiny >= 2) break;
            } else {
                tiny = 0;
            }
            coef = sc_mul(coef, rbase / ((j + 1.0) * (n + j + 1.0)));
        }
        log_part = sc_mul(log_part, 2.0 / kPi);
    }

    // -(1/pi) finite part: sum_{i=0}^{n-1} (n-i-1)!/i! (k/2)^{2i-n} moment
    ScaledComplex fin_part = sc_zero();
    double fin_max = -1e308;
    {
        ScaledComplex fac = sc_one();  // (n-1)!
        for (int i = 2; i <= n - 1; ++i) fac = sc_mul(fac, static_cast<double>(i));
        ScaledComplex kpow = sc_pow_complex(iv.k * 0.5, -n);
        const Complex k2 = iv.k * iv.k * 0.25;
        for (int i = 0; i <= n - 1; ++i) {
            std::int64_t p = 2 * i - n + w;
            ScaledComplex mom;
            if (p == -1)
                mom = sc_from(Complex(std::log(b / a), 0.0));
            else
                mom = power_moment(a, b, p);
            ScaledComplex term = sc_mul(sc_mul(fac, kpow), mom);
            fin_part = sc_add(fin_part, term);
            fin_max = std::max(fin_max, sc_log2_abs(term));
            if (i < n - 1) {
                fac = sc_mul(fac, 1.0 / ((n - 1.0 - i) * (i + 1.0)));
                kpow = sc_mul(kpow, k2);
            }
        }
        fin_part = sc_mul(fin_part, -1.0 / kPi);
    }

    // -(1/pi) psi part: sum_i (-1)^i (psi(i+1)+psi(n+i+1)) (k/2)^{n+2i}/(i!(n+i)!)
    ScaledComplex psi_part = sc_zero();
    {
        ScaledComplex coef = sc_one();  // (k/2)^n / n! running with alternating sign
        for (int i = 1; i <= n; ++i) coef = sc_mul(coef, iv.k / (2.0 * i));
        double h_i = 0.0;
        double h_ni = 0.0;
        for (int i = 1; i <= n; ++i) h_ni += 1.0 / i;
        const Complex rbase = -(iv.k * iv.k) * 0.25;
        int tiny = 0;
        for (int i = 0; i <= 600; ++i) {
            double psi_sum = -2.0 * kEulerGamma + h_i + h_ni;
            std::int64_t p = n + 2 * i + w;
            ScaledComplex term = sc_mul(sc_mul(coef, psi_sum), power_moment(a, b, p));
            psi_part = sc_add(psi_part, term);
            if (!psi_part.is_zero() &&
                sc_log2_abs(term) < sc_log2_abs(psi_part) - 64.0) {
                if (++tiny >= 2) break;
            } else {
                tiny = 0;
            }
            coef = sc_mul(coef, rbase / ((i + 1.0) * (n + i + 1.0)));
            h_i += 1.0 / (i + 1.0);
            h_ni += 1.0 / (n + i + 1.0);
        }
        psi_part = sc_mul(psi_part, -1.0 / kPi);
    }

    ScaledComplex sum = sc_add(sc_add(log_part, fin_part), psi_part);
    double cancel = sum.is_zero() ? 200.0 : fin_max - sc_log2_abs(sum);
    return {sum, cancel};
}

Complex quad_ring_integral(CylKind kind, int n, const RingInterval& iv, int w) {
    auto f = [&](double rho) -> Complex {
        Complex g = cyl_fn(kind, n, iv.k * rho);
        return (w == 1) ? rho * g : g;
    };
    // Tolerance anchored to the integrand scale at a few probe points.
    double scale = 0.0;
    for (double t : {0.05, 0.35, 0.65, 0.95})
        scale = std::max(scale, std::abs(f(iv.lower + t * (iv.upper - iv.lower))));
    QuadOptions opt;
    opt.abs_tol = 1e-12 * (iv.upper - iv.lower) * std::max(scale, 1e-300);
    opt.rel_tol = 1e-12;
    return integrate_gk(f, iv.lower, iv.upper, opt);
}

constexpr double kCancelBits = 26.6;  // 1e-8 result/intermediate detector

// Series entry with cancellation rescue.
ScaledComplex series_entry(CylKind kind, int n, const RingInterval& iv, int w,
                           SpecfunDiag* diag) {
    if (diag) diag->series_entries++;
    SeriesResult j = series_integral_j(n, iv, w);
    if (kind == CylKind::bessel_j) {
        if (j.cancel_bits > kCancelBits) {
            if (diag) diag->quad_fallbacks++;
            return sc_from(quad_ring_integral(kind, n, iv, w));
        }
        return j.value;
    }
    SeriesResult y = series_integral_y(n, iv, w);
    ScaledComplex h = sc_add(j.value, sc_mul(y.value, -kImagUnit));
    if (std::max(j.cancel_bits, y.cancel_bits) > kCancelBits) {
        if (diag) diag->quad_fallbacks++;
        return sc_from(quad_ring_integral(kind, n, iv, w));
    }
    return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ring-integral batch: recursion in the oscillatory regime, series above it.
// ---------------------------------------------------------------------------

void ring_integral_batch(CylKind kind, const RingInterval& iv, int nmax,
                         std::span<ScaledComplex> weighted, SpecfunDiag* diag) {
    check_interval(iv);
    if (iv.lower == iv.upper || iv.upper == 0.0) {
        for (int n = 0; n <= nmax; ++n) weighted[n] = sc_zero();
        return;
    }
    const bool hankel_from_zero = (kind == CylKind::hankel2 && iv.lower == 0.0);

    weighted[0] = sc_from(integral_rho_g0(kind, iv));
    if (nmax >= 1) weighted[1] = sc_from(integral_rho_g1(kind, iv));
    if (nmax <= 1) return;

    if (hankel_from_zero) {
        // Divergent for n >= 2; callers must not consume these (the polar
        // sweeps never touch the innermost full Hankel interval).
        for (int n = 2; n <= nmax; ++n) weighted[n] = sc_zero();
        return;
    }

    const double xb = std::abs(iv.k) * iv.upper;
    const int n_rec = std::min(nmax, static_cast<int>(std::floor(xb)));

    if (n_rec >= 2) {
        // Endpoint values G_m(k rho) for the plain-integral recursion.
        std::vector<ScaledComplex> ga(n_rec), gb(n_rec);
        {
            std::vector<ScaledComplex> jb(n_rec), yb(n_rec);
            cyl_j_scaled_batch(iv.k * iv.upper, n_rec - 1, jb);
            if (kind == CylKind::hankel2) cyl_y_scaled_batch(iv.k * iv.upper, n_rec - 1, yb);
            for (int m = 0; m < n_rec; ++m)
                gb[m] = (kind == CylKind::bessel_j)
                            ? jb[m]
                            : sc_add(jb[m], sc_mul(yb[m], -kImagUnit));
            if (iv.lower == 0.0) {
                ga[0] = sc_one();
                for (int m = 1; m < n_rec; ++m) ga[m] = sc_zero();
            } else {
                cyl_j_scaled_batch(iv.k * iv.lower, n_rec - 1, jb);
                if (kind == CylKind::hankel2)
                    cyl_y_scaled_batch(iv.k * iv.lower, n_rec - 1, yb);
                for (int m = 0; m < n_rec; ++m)
                    ga[m] = (kind == CylKind::bessel_j)
                                ? jb[m]
                                : sc_add(jb[m], sc_mul(yb[m], -kImagUnit));
            }
        }

        ScaledComplex pl_m2 = sc_from(integral_g0(kind, iv));  // plain integral, n-2
        ScaledComplex pl_m1 = sc_from(integral_g1(kind, iv));  // plain integral, n-1
        const Complex inv_k2 = 2.0 / iv.k;
        for (int n = 2; n <= n_rec; ++n) {
            // (19): weighted_n = (2(n-1)/k) plain_{n-1} - weighted_{n-2}
            ScaledComplex lead = sc_mul(pl_m1, (n - 1.0) * inv_k2);
            ScaledComplex wn = sc_sub(lead, weighted[n - 2]);
            double top = std::max(sc_log2_abs(lead), sc_log2_abs(weighted[n - 2]));
            if (!wn.is_zero() && top - sc_log2_abs(wn) > kCancelBits) {
                if (diag) diag->quad_fallbacks++;
                wn = sc_from(quad_ring_integral(kind, n, iv, 1));
            } else if (wn.is_zero() && top > -1e307) {
                if (diag) diag->quad_fallbacks++;
                wn = sc_from(quad_ring_integral(kind, n, iv, 1));
            }
            weighted[n] = wn;

            // (20)/(23): plain_n = plain_{n-2} - (2/k)[G_{n-1}]
            ScaledComplex edge = sc_mul(sc_sub(gb[n - 1], ga[n - 1]), inv_k2);
            ScaledComplex pn = sc_sub(pl_m2, edge);
            double ptop = std::max(sc_log2_abs(pl_m2), sc_log2_abs(edge));
            if (!pn.is_zero() && ptop - sc_log2_abs(pn) > kCancelBits) {
                if (diag) diag->quad_fallbacks++;
                pn = sc_from(quad_ring_integral(kind, n, iv, 0));
            }
            pl_m2 = pl_m1;
            pl_m1 = pn;
        }
    }

    for (int n = std::max(2, n_rec + 1); n <= nmax; ++n)
        weighted[n] = series_entry(kind, n, iv, 1, diag);
}

ScaledComplex ring_integral_scaled(CylKind kind, int n, const RingInterval& iv,
                                   SpecfunDiag* diag) {
    if (n < 0) throw std::domain_error("ring_integral: order must be >= 0");
    check_interval(iv);
    if (iv.lower == iv.upper) return sc_zero();
    if (kind == CylKind::hankel2 && iv.lower == 0.0 && n >= 2)
        throw std::domain_error("ring_integral: Hankel2 integral divergent from rho = 0");
    if (n == 0) return sc_from(integral_rho_g0(kind, iv));
    if (n == 1) return sc_from(integral_rho_g1(kind, iv));
    const double xb = std::abs(iv.k) * iv.upper;
    if (n > static_cast<int>(std::floor(xb))) return series_entry(kind, n, iv, 1, diag);
    std::vector<ScaledComplex> buf(n + 1);
    ring_integral_batch(kind, iv, n, buf, diag);
    return buf[n];
}

Complex ring_integral(CylKind kind, int n, const RingInterval& iv, SpecfunDiag* diag) {
    return sc_to_complex(ring_integral_scaled(kind, n, iv, diag));
}

ScaledComplex ring_integral_plain_scaled(CylKind kind, int n, const RingInterval& iv,
                                         SpecfunDiag* diag) {
    if (n < 0) throw std::domain_error("ring_integral_plain: order must be >= 0");
    check_interval(iv);
    if (iv.lower == iv.upper) return sc_zero();
    if (kind == CylKind::hankel2 && iv.lower == 0.0 && n >= 1)
        throw std::domain_error(
            "ring_integral_plain: Hankel2 integral divergent from rho = 0");
    if (n == 0) return sc_from(integral_g0(kind, iv));
    if (n == 1) return sc_from(integral_g1(kind, iv));
    const double xb = std::abs(iv.k) * iv.upper;
    if (n > static_cast<int>(std::floor(xb))) return series_entry(kind, n, iv, 0, diag);
    // Plain-integral chain (20)/(23) up to n.
    ScaledComplex pl_m2 = sc_from(integral_g0(kind, iv));
    ScaledComplex pl_m1 = sc_from(integral_g1(kind, iv));
    const Complex inv_k2 = 2.0 / iv.k;
    ScaledComplex pn;
    for (int m = 2; m <= n; ++m) {
        Complex ga = (iv.lower == 0.0) ? Complex(m - 1 == 0 ? 1.0 : 0.0, 0.0)
                                       : cyl_fn(kind, m - 1, iv.k * iv.lower);
        Complex gb = cyl_fn(kind, m - 1, iv.k * iv.upper);
        ScaledComplex edge = sc_mul(sc_from(gb - ga), inv_k2);
        pn = sc_sub(pl_m2, edge);
        double top = std::max(sc_log2_abs(pl_m2), sc_log2_abs(edge));
        if (!pn.is_zero() && top - sc_log2_abs(pn) > kCancelBits) {
            if (diag) diag->quad_fallbacks++;
            pn = sc_from(quad_ring_integral(kind, m, iv, 0));
        }
        pl_m2 = pl_m1;
        pl_m1 = pn;
    }
    return pl_m1;
}

Complex ring_integral_plain(CylKind kind, int n, const RingInterval& iv,
                            SpecfunDiag* diag) {
    return sc_to_complex(ring_integral_plain_scaled(kind, n, iv, diag));
}

// ---------------------------------------------------------------------------
// Appendix asymptotic forms.
// ---------------------------------------------------------------------------

bool asymptotic_regime(int n, const RingInterval& iv) {
    if (n < 12) return false;
    const double e = 2.718281828459045;
    return e * std::abs(iv.k) * iv.upper / (2.0 * n) < 0.25;
}

ScaledComplex asymptotic_ring_integral(CylKind kind, int n, const RingInterval& iv,
                                       SpecfunDiag* diag) {
    if (n < 1) throw std::domain_error("asymptotic_ring_integral: order must be >= 1");
    check_interval(iv);
    if (iv.lower == iv.upper) return sc_zero();
    const double e = 2.718281828459045;
    const Complex base = e * iv.k / (2.0 * n);
    const double pref = 1.0 / std::sqrt(2.0 * kPi * n);

    ScaledComplex an = sc_pow_complex(base, n);
    ScaledComplex grow = sc_mul(
        sc_mul(an, sc_sub(sc_pow_real(iv.upper, n + 2), sc_pow_real(iv.lower, n + 2))),
        pref / (n + 2.0));
    if (kind == CylKind::bessel_j) return grow;

    if (iv.lower == 0.0)
        throw std::domain_error("asymptotic_ring_integral: Hankel2 divergent from 0");
    ScaledComplex inv_an = sc_pow_complex(base, -n);
    ScaledComplex decay;
    if (n == 2) {
        // (-n+2) denominator vanishes; the rho'^{-n+1} integrand integrates
        // to a logarithm instead.
        if (diag) diag->asym_log_branch++;
        decay = sc_mul(inv_an, Complex(0.0, 2.0 * pref * std::log(iv.upper / iv.lower)));
    } else {
        ScaledComplex mom =
            sc_sub(sc_pow_real(iv.upper, -n + 2), sc_pow_real(iv.lower, -n + 2));
        decay = sc_mul(sc_mul(inv_an, mom), Complex(0.0, 2.0 * pref / (-n + 2.0)));
    }
    return sc_add(grow, decay);
}

}  // namespace cylscat
