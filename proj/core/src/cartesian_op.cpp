#include "cylscat/cartesian_op.hpp"

#include <cmath>
#include <stdexcept>

#include "cylscat/quadrature.hpp"
#include "cylscat/specfun.hpp"

namespace cylscat {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// 2-D quadrature of (-j/4) H_0^(2)(k |r_obs - r'|) over the circular cell of
// radius a at the origin, observation at (dx, dy). Polar coordinates about
// the cell center; the rho' weight tames the log singularity.
Complex green_disk_quadrature(Complex k, double a, double dx, double dy) {
    QuadOptions opt;
    opt.abs_tol = 1e-14 * a * a;
    opt.rel_tol = 1e-10;
    auto f = [&](double rho, double phi) -> Complex {
        double px = rho * std::cos(phi) - dx;
        double py = rho * std::sin(phi) - dy;
        double d = std::hypot(px, py);
        if (d == 0.0) return {0.0, 0.0};
        return rho * cyl_fn(CylKind::hankel2, 0, k * d);
    };
    Complex v = integrate_gk_2d(f, 0.0, a, 0.0, 2.0 * kPi, opt);
    return Complex(0.0, -0.25) * v;
}
}  // namespace

Complex CartesianOperator::green_cell(double dist) const {
    const Complex pref = -kImagUnit * kPi * a_eq_ / (2.0 * kb_);
    if (dist == 0.0)
        return pref * cyl_fn(CylKind::hankel2, 1, kb_ * a_eq_) - 1.0 / (kb_ * kb_);
    return pref * cyl_fn(CylKind::bessel_j, 1, kb_ * a_eq_) *
           cyl_fn(CylKind::hankel2, 0, kb_ * dist);
}

CartesianOperator::CartesianOperator(const CartesianGrid& grid, Complex kb)
    : grid_(grid),
      kb_(kb),
      a_eq_(grid.cell / std::sqrt(kPi)),
      px_(2 * grid.nx),
      py_(2 * grid.ny),
      dft_(2 * grid.nx, 2 * grid.ny) {
    if (grid.nx < 1 || grid.ny < 1 || !(grid.cell > 0.0))
        throw std::invalid_argument("cartesian grid: need nx, ny >= 1 and cell > 0");

    // Closed forms gated by quadrature before use: three probe cells.
    struct Probe {
        int dx, dy;
    };
    for (Probe p : {Probe{0, 0}, Probe{1, 0}, Probe{2, 2}}) {
        double dist = grid.cell * std::hypot(static_cast<double>(p.dx),
                                             static_cast<double>(p.dy));
        Complex closed = green_cell(dist);
        Complex quad = green_disk_quadrature(kb_, a_eq_, p.dx * grid.cell, p.dy * grid.cell);
        if (std::abs(closed - quad) > 1e-6 * std::abs(quad))
            throw std::runtime_error(
                "cartesian kernel self-check failed: closed form disagrees with "
                "quadrature of the Green function over the equivalent cell");
    }

    // Circulant embedding: wrapped displacement indices on the padded grid.
    std::vector<Complex> g(static_cast<size_t>(px_) * py_);
    for (int i = 0; i < px_; ++i) {
        int dx = (i <= grid.nx) ? i : i - px_;
        for (int j = 0; j < py_; ++j) {
            int dy = (j <= grid.ny) ? j : j - py_;
            double dist = grid.cell * std::hypot(static_cast<double>(dx),
                                                 static_cast<double>(dy));
            g[static_cast<size_t>(i) * py_ + j] = green_cell(dist);
        }
    }
    kernel_spectrum_.resize(g.size());
    dft_.forward(g.data(), kernel_spectrum_.data());

    const double pn = static_cast<double>(px_) * py_;
    fft_model_cost_ = static_cast<std::uint64_t>(std::llround(0.5 * pn * std::log2(pn)));
}

std::vector<Complex> CartesianOperator::apply_potential(
    const std::vector<Complex>& source) const {
    if (source.size() != static_cast<size_t>(grid_.cells()))
        throw std::invalid_argument("apply_potential: source dims mismatch grid");
    std::vector<Complex> pad(static_cast<size_t>(px_) * py_, Complex{0.0, 0.0});
    for (int i = 0; i < grid_.nx; ++i)
        for (int j = 0; j < grid_.ny; ++j)
            pad[static_cast<size_t>(i) * py_ + j] = source[grid_.index(i, j)];

    std::vector<Complex> spec(pad.size());
    dft_.forward(pad.data(), spec.data());
    const double scale = 1.0 / (static_cast<double>(px_) * py_);
    for (size_t i = 0; i < spec.size(); ++i) spec[i] *= kernel_spectrum_[i];
    dft_.inverse(spec.data(), pad.data());

    std::vector<Complex> out(static_cast<size_t>(grid_.cells()));
    for (int i = 0; i < grid_.nx; ++i)
        for (int j = 0; j < grid_.ny; ++j)
            out[grid_.index(i, j)] = pad[static_cast<size_t>(i) * py_ + j] * scale;

    mults_ += 2 * fft_model_cost_ + static_cast<std::uint64_t>(px_) * py_;
    return out;
}

std::vector<Complex> CartesianOperator::exterior_potential(
    const std::vector<Complex>& source, const ObservationCircle& circle) const {
    if (circle.radius <
        0.5 * grid_.cell * std::hypot(static_cast<double>(grid_.nx),
                                      static_cast<double>(grid_.ny)) *
            (1.0 - 1e-12))
        throw std::domain_error("exterior_potential: circle intersects the grid");
    std::vector<Complex> out(circle.samples, Complex{0.0, 0.0});
    const Complex offcell =
        -kImagUnit * kPi * a_eq_ / (2.0 * kb_) * cyl_fn(CylKind::bessel_j, 1, kb_ * a_eq_);
    for (int q = 0; q < circle.samples; ++q) {
        double ox = circle.radius * std::cos(circle.angle(q));
        double oy = circle.radius * std::sin(circle.angle(q));
        Complex s{0.0, 0.0};
        for (int i = 0; i < grid_.nx; ++i)
            for (int j = 0; j < grid_.ny; ++j) {
                Complex phi = source[grid_.index(i, j)];
                if (phi == Complex{0.0, 0.0}) continue;
                double d = std::hypot(ox - grid_.x(i), oy - grid_.y(j));
                s += phi * cyl_fn(CylKind::hankel2, 0, kb_ * d);
            }
        out[q] = offcell * s;
    }
    return out;
}

std::uint64_t CartesianOperator::count_mults_2d(int nx, int ny) {
    const double mn = static_cast<double>(nx) * ny;
    return static_cast<std::uint64_t>(
        std::llround(8.0 * mn * std::log2(4.0 * mn) + 4.0 * mn));
}

}  // namespace cylscat
