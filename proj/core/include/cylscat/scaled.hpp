#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

namespace cylscat {

using Complex = std::complex<double>;

constexpr Complex kImagUnit{0.0, 1.0};

/// Complex value stored as frac * 2^exp so that intermediates far outside
/// double range (high-order cylinder functions, ring-integral tables) stay
/// representable. frac is kept normalized with max(|re|,|im|) in [1, 2).
struct ScaledComplex {
    Complex frac{0.0, 0.0};
    std::int64_t exp{0};

    bool is_zero() const { return frac == Complex{0.0, 0.0}; }
};

inline ScaledComplex sc_normalize(Complex f, std::int64_t e) {
    double m = std::max(std::fabs(f.real()), std::fabs(f.imag()));
    if (m == 0.0 || !std::isfinite(m)) return {f, 0};
    int k = std::ilogb(m);
    if (k != 0) {
        f = {std::ldexp(f.real(), -k), std::ldexp(f.imag(), -k)};
        e += k;
    }
    return {f, e};
}

inline ScaledComplex sc_from(Complex v) { return sc_normalize(v, 0); }
inline ScaledComplex sc_from(double v) { return sc_normalize(Complex(v, 0.0), 0); }
inline ScaledComplex sc_zero() { return {}; }
inline ScaledComplex sc_one() { return {Complex(1.0, 0.0), 0}; }

/// Collapse to a plain complex; saturates to inf/0 outside double range.
inline Complex sc_to_complex(const ScaledComplex& s) {
    if (s.is_zero()) return {0.0, 0.0};
    int e = static_cast<int>(std::clamp<std::int64_t>(s.exp, -4400, 4400));
    return {std::ldexp(s.frac.real(), e), std::ldexp(s.frac.imag(), e)};
}

inline ScaledComplex sc_mul(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return sc_normalize(a.frac * b.frac, a.exp + b.exp);
}

inline ScaledComplex sc_mul(const ScaledComplex& a, Complex c) {
    if (a.is_zero() || c == Complex{0.0, 0.0}) return {};
    return sc_normalize(a.frac * c, a.exp);
}

inline ScaledComplex sc_mul(const ScaledComplex& a, double c) {
    return sc_mul(a, Complex(c, 0.0));
}

inline ScaledComplex sc_div(const ScaledComplex& a, const ScaledComplex& b) {
    return sc_normalize(a.frac / b.frac, a.exp - b.exp);
}

inline ScaledComplex sc_neg(const ScaledComplex& a) { return {-a.frac, a.exp}; }

inline ScaledComplex sc_add(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::int64_t d = a.exp - b.exp;
    // Beyond ~2^1080 apart the smaller operand is invisible in double.
    if (d > 1080) return a;
    if (d < -1080) return b;
    if (d >= 0) {
        Complex f = a.frac + Complex(std::ldexp(b.frac.real(), static_cast<int>(-d)),
                                     std::ldexp(b.frac.imag(), static_cast<int>(-d)));
        return sc_normalize(f, a.exp);
    }
    Complex f = b.frac + Complex(std::ldexp(a.frac.real(), static_cast<int>(d)),
                                 std::ldexp(a.frac.imag(), static_cast<int>(d)));
    return sc_normalize(f, b.exp);
}

inline ScaledComplex sc_sub(const ScaledComplex& a, const ScaledComplex& b) {
    return sc_add(a, sc_neg(b));
}

inline ScaledComplex sc_ldexp(const ScaledComplex& a, std::int64_t k) {
    if (a.is_zero()) return a;
    return {a.frac, a.exp + k};
}

/// log2 of the magnitude; -inf for zero.
inline double sc_log2_abs(const ScaledComplex& a) {
    if (a.is_zero()) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(a.exp) + std::log2(std::abs(a.frac));
}

/// value = base^p for base > 0, carried in scaled form (p may be large).
inline ScaledComplex sc_pow_real(double base, std::int64_t p) {
    if (base == 0.0) return p == 0 ? sc_one() : sc_zero();
    double l2 = static_cast<double>(p) * std::log2(base);
    double fl = std::floor(l2);
    return sc_normalize(Complex(std::exp2(l2 - fl), 0.0), static_cast<std::int64_t>(fl));
}

/// value = z^p for complex z != 0 (principal branch of the argument).
inline ScaledComplex sc_pow_complex(Complex z, std::int64_t p) {
    if (z == Complex{0.0, 0.0}) return p == 0 ? sc_one() : sc_zero();
    double l2 = static_cast<double>(p) * std::log2(std::abs(z));
    double ph = static_cast<double>(p) * std::arg(z);
    double fl = std::floor(l2);
    Complex f = std::exp2(l2 - fl) * Complex(std::cos(ph), std::sin(ph));
    return sc_normalize(f, static_cast<std::int64_t>(fl));
}

}  // namespace cylscat
