#include "cylscat/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "cylscat/quadrature.hpp"
#include "cylscat/specfun.hpp"

namespace cylscat {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

struct JY {
    Complex j, jp, y, yp;  // value and derivative wrt the argument
};

JY jy_pair(int n, Complex z) {
    Complex jm = cyl_j(n == 0 ? 1 : n - 1, z);
    Complex jn = cyl_j(n, z);
    Complex jq = cyl_j(n + 1, z);
    Complex ym = cyl_y(n == 0 ? 1 : n - 1, z);
    Complex yn = cyl_y(n, z);
    Complex yq = cyl_y(n + 1, z);
    if (n == 0) {
        return {jn, -jq, yn, -yq};
    }
    return {jn, 0.5 * (jm - jq), yn, 0.5 * (ym - yq)};
}
}  // namespace

std::vector<Complex> analytic_harmonic_coeffs(const LayeredCylinderSpec& cyl,
                                              const Background& bg, double freq_hz,
                                              int n_max) {
    const size_t nl = cyl.radii.size();
    if (nl == 0 || cyl.eps_r.size() != nl || cyl.sigma.size() != nl)
        throw std::invalid_argument("layered cylinder: radii/eps/sigma sizes mismatch");
    for (size_t i = 1; i < nl; ++i)
        if (!(cyl.radii[i] > cyl.radii[i - 1]))
            throw std::invalid_argument("layered cylinder: radii must be ascending");

    const Complex kb = wavenumber(bg, freq_hz);
    std::vector<Complex> kl(nl);
    for (size_t i = 0; i < nl; ++i) {
        kl[i] = std::sqrt(squared_wavenumber(cyl.eps_r[i], cyl.sigma[i], freq_hz));
        if (kl[i].real() < 0.0) kl[i] = -kl[i];
    }

    std::vector<Complex> a(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        // March the regular interior solution outward: field c J + d Y in
        // each layer, d = 0 innermost; continuity of E_z and dE_z/drho.
        Complex c{1.0, 0.0}, d{0.0, 0.0};
        Complex v, vd;
        for (size_t i = 0; i < nl; ++i) {
            const double r = cyl.radii[i];
            JY in = jy_pair(n, kl[i] * r);
            v = c * in.j + d * in.y;
            vd = kl[i] * (c * in.jp + d * in.yp);
            const Complex knext = (i + 1 < nl) ? kl[i + 1] : kb;
            if (i + 1 < nl) {
                JY out = jy_pair(n, knext * r);
                // Cramer with the Wronskian J Y' - J' Y = 2/(pi z):
                // determinant of [J, Y; k J', k Y'] = 2/(pi r).
                const Complex det = 2.0 / (kPi * r);
                Complex cn = (v * knext * out.yp - vd * out.y) / det;
                Complex dn = (vd * out.j - v * knext * out.jp) / det;
                double s = std::max(std::abs(cn), std::abs(dn));
                if (s > 0.0) {
                    cn /= s;
                    dn /= s;
                }
                c = cn;
                d = dn;
            }
        }
        // Outer boundary: alpha (c J + d Y)(k_l R) = J_n(kb R) + a H_n(kb R),
        // same for the radial derivative; eliminate alpha.
        const double rN = cyl.radii.back();
        JY ob = jy_pair(n, kb * rN);
        Complex hn = ob.j - kImagUnit * ob.y;
        Complex hnp = ob.jp - kImagUnit * ob.yp;
        Complex num = v * kb * ob.jp - vd * ob.j;
        Complex den = vd * hn - v * kb * hnp;
        a[n] = num / den;
    }
    return a;
}

std::vector<Complex> analytic_scattered(const LayeredCylinderSpec& cyl,
                                        const Background& bg, double freq_hz,
                                        const ObservationCircle& circle) {
    const Complex kb = wavenumber(bg, freq_hz);
    const double r_out = cyl.radii.back();
    if (circle.radius < r_out)
        throw std::domain_error("analytic_scattered: circle inside the cylinder");

    double kmax = std::abs(kb);
    for (size_t i = 0; i < cyl.eps_r.size(); ++i)
        kmax = std::max(kmax, std::abs(std::sqrt(squared_wavenumber(
                                  cyl.eps_r[i], cyl.sigma[i], freq_hz))));
    int n_max = static_cast<int>(std::ceil(kmax * r_out)) + 20;

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<Complex> a = analytic_harmonic_coeffs(cyl, bg, freq_hz, n_max);
        // Tail check on the harmonic content at the observation radius.
        double peak = 0.0;
        std::vector<double> mag(n_max + 1);
        for (int n = 0; n <= n_max; ++n) {
            mag[n] = std::abs(a[n] * cyl_fn(CylKind::hankel2, n, kb * circle.radius));
            peak = std::max(peak, mag[n]);
        }
        bool tail_ok = peak == 0.0;
        if (peak > 0.0) {
            double tail = std::max(mag[n_max], mag[n_max - 1]);
            tail_ok = tail < 1e-12 * peak;
        }
        if (!tail_ok) {
            if (attempt == 1)
                throw std::runtime_error(
                    "analytic_scattered: harmonic series did not converge");
            n_max *= 2;
            continue;
        }

        std::vector<Complex> field(circle.samples, Complex{0.0, 0.0});
        for (int q = 0; q < circle.samples; ++q) {
            const double phi = circle.angle(q);
            Complex s = a[0] * cyl_fn(CylKind::hankel2, 0, kb * circle.radius);
            Complex mj{1.0, 0.0};  // (-j)^n
            for (int n = 1; n <= n_max; ++n) {
                mj *= -kImagUnit;
                Complex hn = cyl_fn(CylKind::hankel2, n, kb * circle.radius);
                s += 2.0 * mj * a[n] * hn * std::cos(n * phi);
            }
            field[q] = s;
        }
        return field;
    }
    throw std::runtime_error("analytic_scattered: unreachable");
}

// ---------------------------------------------------------------------------
// Brute-force quadrature of the vector potential.
// ---------------------------------------------------------------------------

namespace {

// Integral of (-j/4) H_0^(2)(k |r_obs - r'|) over one polar cell
// [r0,r1]x[p0,p1], splitting at the observation point when it lies inside
// (corner singularities behave under adaptive bisection).
Complex polar_cell_green(Complex kb, double r0, double r1, double p0, double p1,
                         double ox, double oy, double rel_tol) {
    const double orho = std::hypot(ox, oy);
    double ophi = std::atan2(oy, ox);
    // bring the observation angle into the cell's periodic window [p0, p0+2pi)
    while (ophi < p0) ophi += 2.0 * kPi;
    while (ophi >= p0 + 2.0 * kPi) ophi -= 2.0 * kPi;

    auto integrand = [&](double rho, double phi) -> Complex {
        double dx = rho * std::cos(phi) - ox;
        double dy = rho * std::sin(phi) - oy;
        double d = std::hypot(dx, dy);
        if (d == 0.0) return {0.0, 0.0};
        return rho * cyl_fn(CylKind::hankel2, 0, kb * d);
    };
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-16;
    opt.max_depth = 20;

    std::vector<double> rsplit{r0, r1}, psplit{p0, p1};
    const bool inside_r = orho > r0 && orho < r1;
    const bool inside_p = ophi > p0 && ophi < p1;
    if (inside_r && inside_p) {
        rsplit = {r0, orho, r1};
        psplit = {p0, ophi, p1};
    }
    Complex sum{0.0, 0.0};
    for (size_t i = 0; i + 1 < rsplit.size(); ++i)
        for (size_t j = 0; j + 1 < psplit.size(); ++j)
            sum += integrate_gk_2d(integrand, rsplit[i], rsplit[i + 1], psplit[j],
                                   psplit[j + 1], opt);
    return Complex(0.0, -0.25) * sum;
}

Complex cart_cell_green(Complex kb, double cx, double cy, double h, double ox,
                        double oy, double rel_tol) {
    auto integrand = [&](double x, double y) -> Complex {
        double d = std::hypot(x - ox, y - oy);
        if (d == 0.0) return {0.0, 0.0};
        return cyl_fn(CylKind::hankel2, 0, kb * d);
    };
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-16;
    opt.max_depth = 20;
    const double x0 = cx - 0.5 * h, x1 = cx + 0.5 * h;
    const double y0 = cy - 0.5 * h, y1 = cy + 0.5 * h;
    std::vector<double> xs{x0, x1}, ys{y0, y1};
    if (ox > x0 && ox < x1 && oy > y0 && oy < y1) {
        xs = {x0, ox, x1};
        ys = {y0, oy, y1};
    }
    Complex sum{0.0, 0.0};
    for (size_t i = 0; i + 1 < xs.size(); ++i)
        for (size_t j = 0; j + 1 < ys.size(); ++j)
            sum += integrate_gk_2d(integrand, xs[i], xs[i + 1], ys[j], ys[j + 1], opt);
    return Complex(0.0, -0.25) * sum;
}

}  // namespace

std::vector<Complex> direct_quadrature_potential(const PolarGrid& grid, Complex kb,
                                                 const PolarField& source,
                                                 std::span<const EvalPoint> eval,
                                                 double rel_tol) {
    std::vector<Complex> out(eval.size(), Complex{0.0, 0.0});
    const double dphi = 2.0 * kPi / grid.angles;
    for (size_t e = 0; e < eval.size(); ++e) {
        Complex s{0.0, 0.0};
        for (int m = 1; m <= grid.rings; ++m) {
            for (int k = 0; k < grid.angles; ++k) {
                Complex phi_z = source.at(m, k);
                if (phi_z == Complex{0.0, 0.0}) continue;
                double p0 = grid.angle(k) - 0.5 * dphi;
                s += phi_z * polar_cell_green(kb, grid.edge(m - 1), grid.edge(m), p0,
                                              p0 + dphi, eval[e].x, eval[e].y, rel_tol);
            }
        }
        out[e] = s;
    }
    return out;
}

std::vector<Complex> direct_quadrature_potential(const CartesianGrid& grid, Complex kb,
                                                 const std::vector<Complex>& source,
                                                 std::span<const EvalPoint> eval,
                                                 double rel_tol) {
    std::vector<Complex> out(eval.size(), Complex{0.0, 0.0});
    for (size_t e = 0; e < eval.size(); ++e) {
        Complex s{0.0, 0.0};
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                Complex phi_z = source[grid.index(i, j)];
                if (phi_z == Complex{0.0, 0.0}) continue;
                s += phi_z * cart_cell_green(kb, grid.x(i), grid.y(j), grid.cell,
                                             eval[e].x, eval[e].y, rel_tol);
            }
        out[e] = s;
    }
    return out;
}

double relative_error(std::span<const Complex> reference,
                      std::span<const Complex> computed) {
    if (reference.size() != computed.size())
        throw std::invalid_argument("relative_error: size mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < reference.size(); ++i) {
        num += std::norm(reference[i] - computed[i]);
        den += std::norm(reference[i]);
    }
    if (den == 0.0) throw std::domain_error("relative_error: zero-norm reference");
    return std::sqrt(num / den);
}

double efficiency_gain(int n2_iters, int mx, int ny, int n1_iters, int m_rho,
                       int n_phi) {
    if (n2_iters <= 0 || n1_iters <= 0 || mx <= 0 || ny <= 0 || m_rho <= 0 || n_phi <= 0)
        throw std::invalid_argument("efficiency_gain: arguments must be positive");
    const double num = 4.0 * n2_iters * static_cast<double>(mx) * ny *
                       std::log2(4.0 * static_cast<double>(mx) * ny);
    const double den = static_cast<double>(n1_iters) * static_cast<double>(m_rho) *
                       n_phi * std::log2(static_cast<double>(n_phi));
    return num / den;
}

}  // namespace cylscat
