#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "usdeconv/grid.hpp"

namespace usdeconv {

/// Real-to-complex 2D FFT workspace for one grid size. Owns FFTW plans and
/// aligned buffers; not thread-safe, so each thread keeps its own (the blur
/// operator does this transparently).
class Fft2d {
public:
    Fft2d(std::size_t rows, std::size_t cols);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t spectrum_cols() const { return cols_ / 2 + 1; }
    std::size_t spectrum_size() const { return rows_ * spectrum_cols(); }

    /// out has rows x (cols/2 + 1) entries, unnormalized.
    void forward(const double* in, std::complex<double>* out);
    /// Inverse transform including the 1/(rows*cols) normalization.
    void inverse(const std::complex<double>* in, double* out);

private:
    struct Impl;
    std::size_t rows_;
    std::size_t cols_;
    std::unique_ptr<Impl> impl_;
};

/// Cyclic (circulant) blur: forward multiplies by the OTF in frequency
/// space, adjoint by its conjugate. The PSF is zero-padded to the grid size
/// with its center sample moved to index (0,0), so convolution is centered.
class CyclicBlurOperator {
public:
    /// normalize=true rescales the kernel to unit sum (unit DC gain) before
    /// the OTF is built.
    CyclicBlurOperator(const ImageGrid& psf, std::size_t rows, std::size_t cols,
                       bool normalize = true);

    ImageGrid forward(const ImageGrid& x) const;
    ImageGrid adjoint(const ImageGrid& y) const;

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    /// The effective kernel on the target grid (padded, centered at (0,0),
    /// normalized if requested): what forward() actually convolves with.
    const ImageGrid& padded_psf() const { return padded_; }
    const std::vector<std::complex<double>>& otf() const { return otf_; }
    /// Squared operator norm, max_f |OTF(f)|^2.
    double norm_sq() const { return norm_sq_; }

private:
    ImageGrid apply(const ImageGrid& in, bool conjugate) const;

    std::size_t rows_;
    std::size_t cols_;
    ImageGrid padded_;
    std::vector<std::complex<double>> otf_;
    double norm_sq_ = 0.0;
};

/// Isotropic Gaussian kernel exp(-(dr^2+dc^2)/(2 variance)) sampled on an
/// odd size x size lattice and normalized to unit sum.
ImageGrid gaussian_psf(std::size_t size, double variance);

} // namespace usdeconv
