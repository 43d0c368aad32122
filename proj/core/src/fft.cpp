#include "cylscat/fft.hpp"

#include <fftw3.h>

#include <cstring>

namespace cylscat {

struct Dft1d::Impl {
    int n;
    fftw_complex* buf;
    fftw_plan fwd;
    fftw_plan bwd;
};

Dft1d::Dft1d(int n) : impl_(std::make_unique<Impl>()) {
    impl_->n = n;
    impl_->buf = fftw_alloc_complex(static_cast<size_t>(n));
    impl_->fwd = fftw_plan_dft_1d(n, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_1d(n, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Dft1d::~Dft1d() {
    if (!impl_) return;
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->buf);
}

Dft1d::Dft1d(Dft1d&&) noexcept = default;
Dft1d& Dft1d::operator=(Dft1d&&) noexcept = default;

int Dft1d::size() const { return impl_->n; }

void Dft1d::forward(const Complex* in, Complex* out) const {
    std::memcpy(impl_->buf, in, sizeof(Complex) * impl_->n);
    fftw_execute(impl_->fwd);
    std::memcpy(out, impl_->buf, sizeof(Complex) * impl_->n);
}

void Dft1d::inverse(const Complex* in, Complex* out) const {
    std::memcpy(impl_->buf, in, sizeof(Complex) * impl_->n);
    fftw_execute(impl_->bwd);
    std::memcpy(out, impl_->buf, sizeof(Complex) * impl_->n);
}

struct Dft2d::Impl {
    int nx, ny;
    fftw_complex* buf;
    fftw_plan fwd;
    fftw_plan bwd;
};

Dft2d::Dft2d(int nx, int ny) : impl_(std::make_unique<Impl>()) {
    impl_->nx = nx;
    impl_->ny = ny;
    impl_->buf = fftw_alloc_complex(static_cast<size_t>(nx) * ny);
    impl_->fwd = fftw_plan_dft_2d(nx, ny, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_2d(nx, ny, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Dft2d::~Dft2d() {
    if (!impl_) return;
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->buf);
}

Dft2d::Dft2d(Dft2d&&) noexcept = default;
Dft2d& Dft2d::operator=(Dft2d&&) noexcept = default;

int Dft2d::nx() const { return impl_->nx; }
int Dft2d::ny() const { return impl_->ny; }

void Dft2d::forward(const Complex* in, Complex* out) const {
    size_t bytes = sizeof(Complex) * impl_->nx * impl_->ny;
    std::memcpy(impl_->buf, in, bytes);
    fftw_execute(impl_->fwd);
    std::memcpy(out, impl_->buf, bytes);
}

void Dft2d::inverse(const Complex* in, Complex* out) const {
    size_t bytes = sizeof(Complex) * impl_->nx * impl_->ny;
    std::memcpy(impl_->buf, in, bytes);
    fftw_execute(impl_->bwd);
    std::memcpy(out, impl_->buf, bytes);
}

}  // namespace cylscat
