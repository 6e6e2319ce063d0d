#pragma once

#include <span>
#include <string>
#include <vector>

#include "usdeconv/gibbs.hpp"
#include "usdeconv/grid.hpp"

namespace usdeconv {

/// Marginal MAP labels: argmax_k count(n, k), ties broken toward the
/// smallest class index (recorded in n_ties if given).
LabelField map_labels(const PosteriorAccumulators& acc, std::size_t* n_ties = nullptr);

/// Conditional posterior mean of the TRF, per pixel over the iterations whose
/// label matched the MAP label. Pixels with zero conditioning count are an
/// error unless lenient, where they fall back to the unconditioned mean and
/// are reported through fallback_pixels.
ImageGrid mmse_reflectivity(const PosteriorAccumulators& acc, const LabelField& z_hat,
                            bool lenient = false,
                            std::vector<std::size_t>* fallback_pixels = nullptr);

struct ScalarSummary {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Sample mean and (n-1)-normalized standard deviation of a retained trace.
ScalarSummary mmse_scalar(std::span<const double> trace);

struct Histogram {
    std::vector<double> edges;  // n_bins + 1 ascending edges
    std::vector<long> counts;   // n_bins
};

/// Equal-width bins spanning [min, max] of the trace.
Histogram histogram(std::span<const double> trace, int n_bins);

void write_histogram_csv(const std::string& path, const Histogram& hist);

/// Column k (0-based) of a retained per-class trace laid out row-major.
std::vector<double> trace_column(std::span<const double> flat, int k_classes, int k);

} // namespace usdeconv
