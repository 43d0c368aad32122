#pragma once

#include <memory>

#include "cylscat/scaled.hpp"

namespace cylscat {

/// Complex-to-complex 1-D DFT of fixed size (FFTW backend, FFTW_ESTIMATE
/// plans for run-to-run reproducibility). forward applies e^{-j2pi nk/N},
/// inverse the unnormalized e^{+j2pi nk/N}.
class Dft1d {
  public:
    explicit Dft1d(int n);
    ~Dft1d();
    Dft1d(Dft1d&&) noexcept;
    Dft1d& operator=(Dft1d&&) noexcept;
    Dft1d(const Dft1d&) = delete;
    Dft1d& operator=(const Dft1d&) = delete;

    int size() const;
    void forward(const Complex* in, Complex* out) const;
    void inverse(const Complex* in, Complex* out) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Complex-to-complex 2-D DFT, row-major (nx rows, ny columns).
class Dft2d {
  public:
    Dft2d(int nx, int ny);
    ~Dft2d();
    Dft2d(Dft2d&&) noexcept;
    Dft2d& operator=(Dft2d&&) noexcept;
    Dft2d(const Dft2d&) = delete;
    Dft2d& operator=(const Dft2d&) = delete;

    int nx() const;
    int ny() const;
    void forward(const Complex* in, Complex* out) const;
    void inverse(const Complex* in, Complex* out) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cylscat
