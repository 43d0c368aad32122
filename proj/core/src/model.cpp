#include "cylscat/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cylscat {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

struct PointMaterial {
    double eps_r, sigma;
    bool hit;
};

PointMaterial shape_material(const Shape& s, double x, double y) {
    return std::visit(
        [&](const auto& sh) -> PointMaterial {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, CircleShape>) {
                double dx = x - sh.cx, dy = y - sh.cy;
                if (dx * dx + dy * dy <= sh.radius * sh.radius)
                    return {sh.eps_r, sh.sigma, true};
            } else if constexpr (std::is_same_v<T, RectShape>) {
                if (std::fabs(x - sh.cx) <= sh.half_w && std::fabs(y - sh.cy) <= sh.half_h)
                    return {sh.eps_r, sh.sigma, true};
            } else if constexpr (std::is_same_v<T, LayeredShape>) {
                double r = std::hypot(x - sh.cx, y - sh.cy);
                for (size_t i = 0; i < sh.radii.size(); ++i)
                    if (r <= sh.radii[i]) return {sh.eps_r[i], sh.sigma[i], true};
            } else if constexpr (std::is_same_v<T, RasterShape>) {
                int c = static_cast<int>(std::floor((x - sh.x0) / sh.cell));
                int r = static_cast<int>(std::floor((y - sh.y0) / sh.cell));
                if (r >= 0 && r < sh.rows && c >= 0 && c < sh.cols)
                    return {sh.eps_r[static_cast<size_t>(r) * sh.cols + c], sh.sigma, true};
            }
            return {1.0, 0.0, false};
        },
        s);
}

double shape_bound(const Shape& s) {
    return std::visit(
        [](const auto& sh) -> double {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, CircleShape>) {
                return std::hypot(sh.cx, sh.cy) + sh.radius;
            } else if constexpr (std::is_same_v<T, RectShape>) {
                return std::hypot(sh.cx, sh.cy) + std::hypot(sh.half_w, sh.half_h);
            } else if constexpr (std::is_same_v<T, LayeredShape>) {
                double r = sh.radii.empty() ? 0.0 : sh.radii.back();
                return std::hypot(sh.cx, sh.cy) + r;
            } else {
                const RasterShape& rs = sh;
                double x1 = rs.x0 + rs.cols * rs.cell, y1 = rs.y0 + rs.rows * rs.cell;
                double b = 0;
                for (double cx : {rs.x0, x1})
                    for (double cy : {rs.y0, y1}) b = std::max(b, std::hypot(cx, cy));
                return b;
            }
        },
        s);
}

double shape_max_eps(const Shape& s) {
    return std::visit(
        [](const auto& sh) -> double {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, LayeredShape>) {
                double m = 1.0;
                for (double e : sh.eps_r) m = std::max(m, e);
                return m;
            } else if constexpr (std::is_same_v<T, RasterShape>) {
                double m = 1.0;
                for (double e : sh.eps_r) m = std::max(m, e);
                return m;
            } else {
                return sh.eps_r;
            }
        },
        s);
}

}  // namespace

Complex squared_wavenumber(double eps_r, double sigma, double freq_hz) {
    double w = 2.0 * kPi * freq_hz;
    return Complex(w * w * kMu0 * kEps0 * eps_r, -w * kMu0 * sigma);
}

Complex wavenumber(const Background& bg, double freq_hz) {
    if (!(freq_hz > 0.0)) throw std::invalid_argument("wavenumber: frequency must be > 0");
    Complex k = std::sqrt(squared_wavenumber(bg.eps_r, bg.sigma, freq_hz));
    if (k.real() < 0.0) k = -k;
    return k;
}

std::pair<double, double> MaterialMap::material_at(double x, double y,
                                                   const Background& bg) const {
    // Later shapes paint over earlier ones.
    for (auto it = shapes_.rbegin(); it != shapes_.rend(); ++it) {
        PointMaterial m = shape_material(*it, x, y);
        if (m.hit) return {m.eps_r, m.sigma};
    }
    return {bg.eps_r, bg.sigma};
}

double MaterialMap::max_eps_r(const Background& bg) const {
    double m = bg.eps_r;
    for (const Shape& s : shapes_) m = std::max(m, shape_max_eps(s));
    return m;
}

double MaterialMap::bounding_radius() const {
    double b = 0;
    for (const Shape& s : shapes_) b = std::max(b, shape_bound(s));
    return b;
}

Complex contrast_at(const MaterialMap& map, const Background& bg, double freq_hz,
                    double x, double y) {
    auto [eps, sig] = map.material_at(x, y, bg);
    if (eps == bg.eps_r && sig == bg.sigma) return {0.0, 0.0};
    return squared_wavenumber(eps, sig, freq_hz) /
               squared_wavenumber(bg.eps_r, bg.sigma, freq_hz) -
           1.0;
}

double max_cell_size(const MaterialMap& map, const Background& bg, double freq_hz,
                     double feature) {
    double eps_max = map.max_eps_r(bg);
    double lambda_min = (kSpeedOfLight / freq_hz) / std::sqrt(eps_max);
    double bound = lambda_min / 10.0;
    if (feature > 0.0) bound = std::min(bound, feature / 2.0);
    return bound;
}

Complex incident_at(Complex kb, double x) {
    return std::exp(-kImagUnit * kb * x);
}

std::vector<Complex> incident_field_polar(const PolarGrid& g, Complex kb) {
    std::vector<Complex> f(static_cast<size_t>(g.cells()));
    for (int m = 1; m <= g.rings; ++m) {
        double rho = g.mid(m);
        for (int k = 0; k < g.angles; ++k)
            f[g.index(m, k)] = incident_at(kb, rho * std::cos(g.angle(k)));
    }
    return f;
}

std::vector<Complex> incident_field_cartesian(const CartesianGrid& g, Complex kb) {
    std::vector<Complex> f(static_cast<size_t>(g.cells()));
    for (int i = 0; i < g.nx; ++i) {
        Complex v = incident_at(kb, g.x(i));
        for (int j = 0; j < g.ny; ++j) f[g.index(i, j)] = v;
    }
    return f;
}

std::vector<Complex> sample_contrast_polar(const MaterialMap& map, const PolarGrid& g,
                                           const Background& bg, double freq_hz) {
    if (map.bounding_radius() > g.radius * (1.0 + 1e-12))
        throw std::invalid_argument(
            "sample_contrast_polar: object support extends beyond the embedding disk");
    std::vector<Complex> chi(static_cast<size_t>(g.cells()));
    for (int m = 1; m <= g.rings; ++m) {
        double rho = g.mid(m);
        for (int k = 0; k < g.angles; ++k) {
            double phi = g.angle(k);
            chi[g.index(m, k)] =
                contrast_at(map, bg, freq_hz, rho * std::cos(phi), rho * std::sin(phi));
        }
    }
    return chi;
}

std::vector<Complex> sample_contrast_cartesian(const MaterialMap& map,
                                               const CartesianGrid& g,
                                               const Background& bg, double freq_hz) {
    double half_w = 0.5 * g.nx * g.cell, half_h = 0.5 * g.ny * g.cell;
    if (map.bounding_radius() > std::min(half_w, half_h) * (1.0 + 1e-12) + 0.5 * g.cell)
        throw std::invalid_argument(
            "sample_contrast_cartesian: object support extends beyond the grid");
    std::vector<Complex> chi(static_cast<size_t>(g.cells()));
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            chi[g.index(i, j)] = contrast_at(map, bg, freq_hz, g.x(i), g.y(j));
    return chi;
}

int auto_angles(double kb_abs, double radius, double eps_max, double delta) {
    double harmonic = 2.0 * std::ceil(kb_abs * radius * std::sqrt(eps_max)) + 16.0;
    double arc = 2.0 * kPi * radius / delta;
    double need = std::max(harmonic, arc);
    int n = 2;
    while (n < need) n *= 2;
    return n;
}

}  // namespace cylscat
