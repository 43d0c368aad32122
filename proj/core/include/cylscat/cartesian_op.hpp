#pragma once

#include <cstdint>
#include <vector>

#include "cylscat/fft.hpp"
#include "cylscat/model.hpp"

namespace cylscat {

/// Conventional zero-padded 2-D FFT convolution MVP with equal-area
/// equivalent circular cells (a_eq = cell/sqrt(pi)). The kernel depends only
/// on (background, frequency, grid); its closed forms are verified against
/// 2-D quadrature of the Green function at construction.
class CartesianOperator {
  public:
    CartesianOperator(const CartesianGrid& grid, Complex kb);

    const CartesianGrid& grid() const { return grid_; }
    Complex kb() const { return kb_; }
    double equivalent_radius() const { return a_eq_; }

    /// Cell-integrated Green coefficient: self entry at dist == 0, otherwise
    /// (-j pi a/(2k)) J_1(k a) H_0^(2)(k dist).
    Complex green_cell(double dist) const;

    /// a_z = crop(IFFT(FFT(kernel) . FFT(pad(source)))), source nx*ny.
    std::vector<Complex> apply_potential(const std::vector<Complex>& source) const;

    /// A_z at exterior points by direct kernel summation over all cells
    /// (no analytic shortcut exists for the Cartesian method).
    std::vector<Complex> exterior_potential(const std::vector<Complex>& source,
                                            const ObservationCircle& circle) const;

    static std::uint64_t count_mults_2d(int nx, int ny);

    std::uint64_t empirical_mults() const { return mults_; }
    void reset_mults() const { mults_ = 0; }

  private:
    CartesianGrid grid_;
    Complex kb_;
    double a_eq_;
    int px_, py_;  // padded dims, exactly 2 nx x 2 ny
    std::vector<Complex> kernel_spectrum_;
    Dft2d dft_;
    std::uint64_t fft_model_cost_;
    mutable std::uint64_t mults_ = 0;
};

}  // namespace cylscat
