#pragma once

#include <optional>
#include <string>

#include "usdeconv/grid.hpp"

namespace usdeconv {

struct MetricsReport {
    double isnr_db = 0.0;
    double nrmse = 0.0;
    double psnr_db = 0.0;
    double mssim = 0.0;
    std::optional<double> oa;
    std::optional<double> cnr;
    std::optional<double> rg;
};

/// 10 log10(|x - y|^2 / |x - xhat|^2); +inf sentinel on perfect recovery.
double isnr(const ImageGrid& x, const ImageGrid& y, const ImageGrid& x_hat);

/// sqrt(|x - xhat|^2 / |x|^2).
double nrmse(const ImageGrid& x, const ImageGrid& x_hat);

/// 10 log10(peak^2 / MSE) with peak the global maximum over both images;
/// +inf sentinel when MSE is zero.
double psnr(const ImageGrid& x, const ImageGrid& x_hat);

/// Mean SSIM over non-overlapping 8x8 windows; C1 = (0.01 Lr)^2 and
/// C2 = (0.03 Lr)^2 with Lr the dynamic range of x.
double mssim(const ImageGrid& x, const ImageGrid& x_hat, std::size_t window = 8);

/// Fraction of matching labels, maximized over class permutations (label
/// switching makes raw indices arbitrary). Both fields must share K <= 8.
double overall_accuracy(const LabelField& z_true, const LabelField& z_hat);

/// |mu1 - mu2| / sqrt(sigma1^2 + sigma2^2) over two rectangular regions.
double cnr(const ImageGrid& grid, const RegionMask& region1, const RegionMask& region2);

/// Ratio of -3 dB autocorrelation areas A(y) / A(x_hat). The autocorrelation
/// is computed cyclically via the FFT of the mean-removed image's power
/// spectrum, peak-normalized; the area counts pixels above the threshold
/// (0.5 by default, the -3 dB point in power).
double resolution_gain(const ImageGrid& y, const ImageGrid& x_hat, double threshold = 0.5);

/// -3 dB autocorrelation pixel area of one image (the A(.) above).
std::size_t autocorrelation_area(const ImageGrid& g, double threshold = 0.5);

void write_metrics_csv(const std::string& path, const MetricsReport& report);
std::string format_metrics(const MetricsReport& report);

} // namespace usdeconv
