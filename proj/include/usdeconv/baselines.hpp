#pragma once

#include <vector>

#include "usdeconv/convolution.hpp"
#include "usdeconv/grid.hpp"

namespace usdeconv {

/// Tikhonov-regularized deconvolution (H^T H + lambda I)^{-1} H^T y,
/// computed exactly in the frequency domain.
ImageGrid l2_deconvolve(const ImageGrid& y, const CyclicBlurOperator& op, double lambda);

struct L1Result {
    ImageGrid x;
    std::vector<double> objective; // 0.5 |y-Hx|^2 + lambda |x|_1 per iteration
    int iterations = 0;
    bool converged = false;
};

/// Iterative shrinkage-thresholding for 0.5 |y-Hx|^2 + lambda |x|_1 with
/// step 1/|H|^2; stops when the relative objective decrease drops below tol.
/// accelerate=true switches to the FISTA momentum variant.
L1Result l1_deconvolve(const ImageGrid& y, const CyclicBlurOperator& op, double lambda,
                       int max_iter = 500, double tol = 1e-8, bool accelerate = false);

} // namespace usdeconv
