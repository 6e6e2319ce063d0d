#include "usdeconv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "usdeconv/convolution.hpp"

namespace usdeconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_dims(const ImageGrid& a, const ImageGrid& b, const char* what) {
    if (!a.same_dims(b)) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double squared_distance(const ImageGrid& a, const ImageGrid& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        s += d * d;
    }
    return s;
}

double squared_norm(const ImageGrid& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return s;
}

} // namespace

double isnr(const ImageGrid& x, const ImageGrid& y, const ImageGrid& x_hat) {
    require_same_dims(x, y, "isnr");
    require_same_dims(x, x_hat, "isnr");
    const double err_obs = squared_distance(x, y);
    const double err_est = squared_distance(x, x_hat);
    if (err_est == 0.0) return kInf;
    return 10.0 * std::log10(err_obs / err_est);
}

double nrmse(const ImageGrid& x, const ImageGrid& x_hat) {
    require_same_dims(x, x_hat, "nrmse");
    const double denom = squared_norm(x);
    if (denom == 0.0) throw std::invalid_argument("nrmse: reference image has zero norm");
    return std::sqrt(squared_distance(x, x_hat) / denom);
}

double psnr(const ImageGrid& x, const ImageGrid& x_hat) {
    require_same_dims(x, x_hat, "psnr");
    const double mse = squared_distance(x, x_hat) / static_cast<double>(x.size());
    if (mse == 0.0) return kInf;
    double peak = -kInf;
    for (double v : x.data) peak = std::max(peak, v);
    for (double v : x_hat.data) peak = std::max(peak, v);
    return 10.0 * std::log10(peak * peak / mse);
}

double mssim(const ImageGrid& x, const ImageGrid& x_hat, std::size_t window) {
    require_same_dims(x, x_hat, "mssim");
    if (window < 2 || x.rows < window || x.cols < window)
        throw std::invalid_argument("mssim: image smaller than SSIM window");
    auto [mn, mx] = std::minmax_element(x.data.begin(), x.data.end());
    const double range = *mx - *mn;
    if (!(range > 0.0)) throw std::invalid_argument("mssim: degenerate dynamic range");
    const double c1 = (0.01 * range) * (0.01 * range);
    const double c2 = (0.03 * range) * (0.03 * range);
    const double n = static_cast<double>(window * window);

    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t r0 = 0; r0 + window <= x.rows; r0 += window)
        for (std::size_t c0 = 0; c0 + window <= x.cols; c0 += window) {
            double sx = 0.0, sy = 0.0;
            for (std::size_t r = 0; r < window; ++r)
                for (std::size_t c = 0; c < window; ++c) {
                    sx += x.at(r0 + r, c0 + c);
                    sy += x_hat.at(r0 + r, c0 + c);
                }
            const double mux = sx / n;
            const double muy = sy / n;
            double vx = 0.0, vy = 0.0, cov = 0.0;
            for (std::size_t r = 0; r < window; ++r)
                for (std::size_t c = 0; c < window; ++c) {
                    const double dx = x.at(r0 + r, c0 + c) - mux;
                    const double dy = x_hat.at(r0 + r, c0 + c) - muy;
                    vx += dx * dx;
                    vy += dy * dy;
                    cov += dx * dy;
                }
            vx /= n - 1.0;
            vy /= n - 1.0;
            cov /= n - 1.0;
            const double ssim = ((2.0 * mux * muy + c1) * (2.0 * cov + c2)) /
                                ((mux * mux + muy * muy + c1) * (vx + vy + c2));
            total += ssim;
            ++count;
        }
    return total / static_cast<double>(count);
}

double overall_accuracy(const LabelField& z_true, const LabelField& z_hat) {
    if (z_true.rows != z_hat.rows || z_true.cols != z_hat.cols)
        throw std::invalid_argument("overall_accuracy: dimension mismatch");
    if (z_true.k_classes != z_hat.k_classes)
        throw std::invalid_argument("overall_accuracy: class count mismatch");
    const int k = z_true.k_classes;
    if (k > 8) throw std::invalid_argument("overall_accuracy: K too large for exhaustive alignment");
    // confusion counts, then best permutation of estimated classes
    std::vector<long> confusion(static_cast<std::size_t>(k) * k, 0);
    for (std::size_t i = 0; i < z_true.size(); ++i)
        ++confusion[static_cast<std::size_t>(z_true.labels[i] - 1) * k + (z_hat.labels[i] - 1)];
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    long best = 0;
    do {
        long matches = 0;
        for (int t = 0; t < k; ++t) matches += confusion[static_cast<std::size_t>(t) * k + perm[t]];
        best = std::max(best, matches);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(z_true.size());
}

double cnr(const ImageGrid& grid, const RegionMask& region1, const RegionMask& region2) {
    const auto [mu1, sd1] = extract_region(grid, region1);
    const auto [mu2, sd2] = extract_region(grid, region2);
    const double denom = sd1 * sd1 + sd2 * sd2;
    if (denom == 0.0) throw std::invalid_argument("cnr: both regions are constant");
    return std::fabs(mu1 - mu2) / std::sqrt(denom);
}

std::size_t autocorrelation_area(const ImageGrid& g, double threshold) {
    double mean = 0.0;
    for (double v : g.data) mean += v;
    mean /= static_cast<double>(g.size());
    ImageGrid centered = g;
    for (double& v : centered.data) v -= mean;
    if (squared_norm(centered) == 0.0)
        throw std::invalid_argument("autocorrelation: zero-energy input");
    Fft2d fft(g.rows, g.cols);
    std::vector<std::complex<double>> spec(fft.spectrum_size());
    fft.forward(centered.data.data(), spec.data());
    for (auto& v : spec) v = std::norm(v);
    ImageGrid acor(g.rows, g.cols, 0.0);
    fft.inverse(spec.data(), acor.data.data());
    const double peak = acor.data[0]; // zero lag
    std::size_t area = 0;
    for (double v : acor.data)
        if (v / peak > threshold) ++area;
    return area;
}

double resolution_gain(const ImageGrid& y, const ImageGrid& x_hat, double threshold) {
    require_same_dims(y, x_hat, "resolution_gain");
    const auto area_obs = autocorrelation_area(y, threshold);
    const auto area_est = autocorrelation_area(x_hat, threshold);
    return static_cast<double>(area_obs) / static_cast<double>(area_est);
}

void write_metrics_csv(const std::string& path, const MetricsReport& report) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("metrics: cannot open " + path + " for writing");
    os.precision(17);
    os << "metric,value\n";
    os << "isnr_db," << report.isnr_db << "\n";
    os << "nrmse," << report.nrmse << "\n";
    os << "psnr_db," << report.psnr_db << "\n";
    os << "mssim," << report.mssim << "\n";
    if (report.oa) os << "oa," << *report.oa << "\n";
    if (report.cnr) os << "cnr," << *report.cnr << "\n";
    if (report.rg) os << "rg," << *report.rg << "\n";
}

std::string format_metrics(const MetricsReport& report) {
    std::ostringstream os;
    os.precision(4);
    os << "ISNR  = " << report.isnr_db << " dB\n";
    os << "NRMSE = " << report.nrmse << "\n";
    os << "PSNR  = " << report.psnr_db << " dB\n";
    os << "MSSIM = " << report.mssim << "\n";
    if (report.oa) os << "OA    = " << *report.oa << "\n";
    if (report.cnr) os << "CNR   = " << *report.cnr << "\n";
    if (report.rg) os << "RG    = " << *report.rg << "\n";
    return os.str();
}

} // namespace usdeconv
