#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cylscat/scaled.hpp"

namespace cylscat {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kMu0 = 1.25663706212e-6;
constexpr double kEps0 = 8.8541878128e-12;

/// Homogeneous background medium; permeability fixed at mu_0.
struct Background {
    double eps_r = 1.0;  // relative permittivity, >= 1 typical
    double sigma = 0.0;  // conductivity S/m, >= 0
};

/// k_b with Re > 0, Im <= 0 under the e^{jwt} convention:
/// k_b^2 = w^2 mu_b eps_b - j w mu_b sigma_b.
Complex wavenumber(const Background& bg, double freq_hz);

/// k^2(eps_r, sigma) at angular frequency of freq_hz.
Complex squared_wavenumber(double eps_r, double sigma, double freq_hz);

// ---------------------------------------------------------------------------
// Material shapes. Later shapes paint over earlier ones.
// ---------------------------------------------------------------------------

struct CircleShape {
    double cx = 0, cy = 0, radius = 0;
    double eps_r = 1, sigma = 0;
};

struct RectShape {
    double cx = 0, cy = 0, half_w = 0, half_h = 0;
    double eps_r = 1, sigma = 0;
};

/// Concentric layers at (cx, cy): material i applies for r < radii[i]
/// (first matching layer wins, innermost first, radii ascending).
struct LayeredShape {
    double cx = 0, cy = 0;
    std::vector<double> radii;
    std::vector<double> eps_r;
    std::vector<double> sigma;
};

/// Row-major eps_r matrix on a uniform raster, nearest-neighbor lookup.
struct RasterShape {
    double x0 = 0, y0 = 0;  // lower-left corner of cell (0,0)
    double cell = 0;
    int rows = 0, cols = 0;
    std::vector<double> eps_r;  // rows*cols, row r = y0 + r*cell .. +cell
    double sigma = 0;
};

using Shape = std::variant<CircleShape, RectShape, LayeredShape, RasterShape>;

class MaterialMap {
  public:
    void add(Shape s) { shapes_.push_back(std::move(s)); }
    const std::vector<Shape>& shapes() const { return shapes_; }
    bool empty() const { return shapes_.empty(); }

    /// (eps_r, sigma) at a point; background where no shape contains it.
    std::pair<double, double> material_at(double x, double y, const Background& bg) const;

    double max_eps_r(const Background& bg) const;

    /// Radius around the origin enclosing every shape (object support bound).
    double bounding_radius() const;

  private:
    std::vector<Shape> shapes_;
};

/// chi(r) = k^2(r)/k_b^2 - 1; zero on background material.
Complex contrast_at(const MaterialMap& map, const Background& bg, double freq_hz,
                    double x, double y);

/// Discretization bound min(lambda_min/10, feature/2) with
/// lambda_min = (c/f)/sqrt(eps_r_max). feature <= 0 means "no feature bound".
double max_cell_size(const MaterialMap& map, const Background& bg, double freq_hz,
                     double feature);

// ---------------------------------------------------------------------------
// Grids.
// ---------------------------------------------------------------------------

/// Uniform polar discretization of the embedding disk: rings of thickness
/// radius/rings, cell centers at (rho_{m-1/2}, phi_k), phi_k = (k+1/2) 2pi/N.
struct PolarGrid {
    double radius = 0;
    int rings = 0;
    int angles = 0;  // power of two

    double thickness() const { return radius / rings; }
    double edge(int m) const { return m * thickness(); }          // m = 0..rings
    double mid(int m) const { return (m - 0.5) * thickness(); }   // m = 1..rings
    double angle(int k) const { return (k + 0.5) * 2.0 * 3.141592653589793238462643 / angles; }
    int cells() const { return rings * angles; }
    int index(int m, int k) const { return (m - 1) * angles + k; }
};

/// Square-cell Cartesian grid centered on the origin.
struct CartesianGrid {
    int nx = 0, ny = 0;
    double cell = 0;

    double x(int i) const { return (i - 0.5 * (nx - 1)) * cell; }
    double y(int j) const { return (j - 0.5 * (ny - 1)) * cell; }
    int cells() const { return nx * ny; }
    int index(int i, int j) const { return i * ny + j; }
};

struct ObservationCircle {
    double radius = 0;
    int samples = 0;
    double angle(int q) const { return q * 2.0 * 3.141592653589793238462643 / samples; }
};

// ---------------------------------------------------------------------------
// Field sampling.
// ---------------------------------------------------------------------------

/// Plane wave E_z^i = exp(-j k_b x), unit amplitude, +x travel.
Complex incident_at(Complex kb, double x);
std::vector<Complex> incident_field_polar(const PolarGrid& g, Complex kb);
std::vector<Complex> incident_field_cartesian(const CartesianGrid& g, Complex kb);

/// chi sampled at cell centers; throws std::invalid_argument when the object
/// support extends beyond the embedding disk/rectangle.
std::vector<Complex> sample_contrast_polar(const MaterialMap& map, const PolarGrid& g,
                                           const Background& bg, double freq_hz);
std::vector<Complex> sample_contrast_cartesian(const MaterialMap& map,
                                               const CartesianGrid& g,
                                               const Background& bg, double freq_hz);

/// Smallest power of two >= max(2 ceil(|k_b| a sqrt(eps_max)) + 16, 2 pi a / delta).
int auto_angles(double kb_abs, double radius, double eps_max, double delta);

}  // namespace cylscat
