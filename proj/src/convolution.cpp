#include "usdeconv/convolution.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace usdeconv {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

Fft2d& thread_workspace(std::size_t rows, std::size_t cols) {
    thread_local std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Fft2d>> cache;
    auto& slot = cache[{rows, cols}];
    if (!slot) slot = std::make_unique<Fft2d>(rows, cols);
    return *slot;
}

} // namespace

struct Fft2d::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

Fft2d::Fft2d(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), impl_(std::make_unique<Impl>()) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("fft: empty dimension");
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->real = fftw_alloc_real(rows * cols);
    impl_->spec = fftw_alloc_complex(spectrum_size());
    if (!impl_->real || !impl_->spec) throw std::bad_alloc();
    const int nr = static_cast<int>(rows);
    const int nc = static_cast<int>(cols);
    // FFTW_ESTIMATE keeps plans deterministic run-to-run
    impl_->fwd = fftw_plan_dft_r2c_2d(nr, nc, impl_->real, impl_->spec, FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_2d(nr, nc, impl_->spec, impl_->real, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->inv) throw std::runtime_error("fft: plan creation failed");
}

Fft2d::~Fft2d() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->inv) fftw_destroy_plan(impl_->inv);
    if (impl_->real) fftw_free(impl_->real);
    if (impl_->spec) fftw_free(impl_->spec);
}

void Fft2d::forward(const double* in, std::complex<double>* out) {
    std::memcpy(impl_->real, in, sizeof(double) * rows_ * cols_);
    fftw_execute(impl_->fwd);
    // std::complex<double> is layout-compatible with fftw_complex
    std::memcpy(reinterpret_cast<double*>(out), impl_->spec,
                sizeof(fftw_complex) * spectrum_size());
}

void Fft2d::inverse(const std::complex<double>* in, double* out) {
    std::memcpy(impl_->spec, reinterpret_cast<const double*>(in),
                sizeof(fftw_complex) * spectrum_size());
    fftw_execute(impl_->inv);
    const double scale = 1.0 / static_cast<double>(rows_ * cols_);
    for (std::size_t i = 0; i < rows_ * cols_; ++i) out[i] = impl_->real[i] * scale;
}

CyclicBlurOperator::CyclicBlurOperator(const ImageGrid& psf, std::size_t rows, std::size_t cols,
                                       bool normalize)
    : rows_(rows), cols_(cols), padded_(rows, cols, 0.0) {
    if (psf.rows > rows || psf.cols > cols)
        throw std::invalid_argument("blur operator: psf larger than grid");
    double sum = 0.0;
    for (double v : psf.data) sum += v;
    double gain = 1.0;
    if (normalize) {
        if (std::fabs(sum) < 1e-300)
            throw std::invalid_argument("blur operator: psf sum too close to zero to normalize");
        gain = 1.0 / sum;
    }
    // center sample relocated to (0,0) by circular shift
    const std::size_t center_r = (psf.rows - 1) / 2;
    const std::size_t center_c = (psf.cols - 1) / 2;
    for (std::size_t r = 0; r < psf.rows; ++r)
        for (std::size_t c = 0; c < psf.cols; ++c) {
            const std::size_t rr = (r + rows_ - (center_r % rows_)) % rows_;
            const std::size_t cc = (c + cols_ - (center_c % cols_)) % cols_;
            padded_.at(rr, cc) += psf.at(r, c) * gain;
        }
    Fft2d& fft = thread_workspace(rows_, cols_);
    otf_.resize(fft.spectrum_size());
    fft.forward(padded_.data.data(), otf_.data());
    for (const auto& v : otf_) norm_sq_ = std::max(norm_sq_, std::norm(v));
}

ImageGrid CyclicBlurOperator::apply(const ImageGrid& in, bool conjugate) const {
    if (in.rows != rows_ || in.cols != cols_)
        throw std::invalid_argument("blur operator: dimension mismatch");
    Fft2d& fft = thread_workspace(rows_, cols_);
    std::vector<std::complex<double>> spec(fft.spectrum_size());
    fft.forward(in.data.data(), spec.data());
    if (conjugate)
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= std::conj(otf_[i]);
    else
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= otf_[i];
    ImageGrid out(rows_, cols_, 0.0);
    fft.inverse(spec.data(), out.data.data());
    return out;
}

ImageGrid CyclicBlurOperator::forward(const ImageGrid& x) const { return apply(x, false); }

ImageGrid CyclicBlurOperator::adjoint(const ImageGrid& y) const { return apply(y, true); }

ImageGrid gaussian_psf(std::size_t size, double variance) {
    if (size == 0 || size % 2 == 0)
        throw std::invalid_argument("gaussian psf: size must be odd");
    if (!(variance > 0.0)) throw std::invalid_argument("gaussian psf: variance must be positive");
    ImageGrid psf(size, size, 0.0);
    const double half = static_cast<double>(size - 1) / 2.0;
    double sum = 0.0;
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) {
            const double dr = static_cast<double>(r) - half;
            const double dc = static_cast<double>(c) - half;
            const double v = std::exp(-(dr * dr + dc * dc) / (2.0 * variance));
            psf.at(r, c) = v;
            sum += v;
        }
    for (double& v : psf.data) v /= sum;
    return psf;
}

} // namespace usdeconv
