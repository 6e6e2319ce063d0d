#pragma once

#include <span>

#include "usdeconv/rng.hpp"

namespace usdeconv {

/// Shape/scale pair of one generalized Gaussian mixture component.
/// The shape support is the open-left interval (0, 3]: 0 is degenerate,
/// 3 is the upper end of the flat hyperprior.
struct GgdClassParams {
    double shape = 1.0;
    double scale = 1.0;
};

struct InverseGammaParams {
    double shape = 1.0;
    double scale = 1.0;
};

void validate(const GgdClassParams& p);
void validate(const InverseGammaParams& p);

/// log p(x) for the generalized Gaussian density
///   p(x) = 1 / (2 gamma^{1/xi} Gamma(1 + 1/xi)) * exp(-|x|^xi / gamma).
double ggd_log_pdf(double x, const GgdClassParams& p);

/// Draw from the generalized Gaussian via X = s (gamma G)^{1/xi},
/// G ~ Gamma(1/xi, 1), s a uniform sign.
double ggd_sample(const GgdClassParams& p, RngStream& rng);

/// Standard normal draw (Box-Muller).
double standard_normal_sample(RngStream& rng);

/// Gamma(shape, unit scale) draw via Marsaglia-Tsang, with the
/// G_{a+1} U^{1/a} boost for shape < 1.
double gamma_sample(double shape, RngStream& rng);

/// Inverse gamma draw; 1/X is Gamma(shape, rate scale).
double inverse_gamma_sample(const InverseGammaParams& p, RngStream& rng);

/// Normal(mean, variance) restricted and renormalized to (lo, hi).
/// Rejection from the parent normal while acceptance stays practical,
/// Robert's translated-exponential proposal otherwise.
double truncated_normal_sample(double mean, double variance, double lo, double hi,
                               RngStream& rng);

/// Log density of the truncated normal above, including the normalizer
/// Phi((hi-m)/s) - Phi((lo-m)/s). Returns -infinity outside (lo, hi).
double truncated_normal_log_pdf(double x, double mean, double variance, double lo, double hi);

/// Draw an index with the given probabilities. Weights must be
/// nonnegative, finite, and sum to 1 within 1e-9.
std::size_t categorical_sample(std::span<const double> weights, RngStream& rng);

/// Uniform integer in [lo, hi], unbiased.
int uniform_int_sample(int lo, int hi, RngStream& rng);

/// Standard normal CDF.
double normal_cdf(double x);

} // namespace usdeconv
