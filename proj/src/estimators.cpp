#include "usdeconv/estimators.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace usdeconv {

LabelField map_labels(const PosteriorAccumulators& acc, std::size_t* n_ties) {
    if (acc.retained < 1) throw std::invalid_argument("map_labels: empty accumulators");
    const int k = acc.k;
    const std::size_t n = acc.rows * acc.cols;
    std::vector<int> labels(n);
    std::size_t ties = 0;
    for (std::size_t p = 0; p < n; ++p) {
        int best = 0;
        std::uint32_t best_count = acc.z_count[p * static_cast<std::size_t>(k)];
        bool tie = false;
        for (int c = 1; c < k; ++c) {
            const std::uint32_t count = acc.z_count[p * static_cast<std::size_t>(k) + c];
            if (count > best_count) {
                best = c;
                best_count = count;
                tie = false;
            } else if (count == best_count) {
                tie = true;
            }
        }
        if (tie) ++ties;
        labels[p] = best + 1;
    }
    if (n_ties) *n_ties = ties;
    return LabelField(acc.rows, acc.cols, k, std::move(labels));
}

ImageGrid mmse_reflectivity(const PosteriorAccumulators& acc, const LabelField& z_hat,
                            bool lenient, std::vector<std::size_t>* fallback_pixels) {
    if (acc.retained < 1) throw std::invalid_argument("mmse: empty accumulators");
    if (z_hat.rows != acc.rows || z_hat.cols != acc.cols || z_hat.k_classes != acc.k)
        throw std::invalid_argument("mmse: label field does not match accumulators");
    const int k = acc.k;
    const std::size_t n = acc.rows * acc.cols;
    ImageGrid out(acc.rows, acc.cols, 0.0);
    std::vector<std::size_t> missing;
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t slot =
            p * static_cast<std::size_t>(k) + static_cast<std::size_t>(z_hat.labels[p] - 1);
        const std::uint32_t count = acc.z_count[slot];
        if (count > 0) {
            out.data[p] = acc.x_sum[slot] / static_cast<double>(count);
        } else if (lenient) {
            // unconditioned running mean of the pixel
            double sum = 0.0;
            std::uint64_t total = 0;
            for (int c = 0; c < k; ++c) {
                sum += acc.x_sum[p * static_cast<std::size_t>(k) + c];
                total += acc.z_count[p * static_cast<std::size_t>(k) + c];
            }
            out.data[p] = sum / static_cast<double>(total);
            missing.push_back(p);
        } else {
            missing.push_back(p);
        }
    }
    if (!missing.empty() && !lenient) {
        std::ostringstream os;
        os << "mmse: " << missing.size()
           << " pixel(s) have no retained draw under their MAP label (chain too short); first:";
        for (std::size_t i = 0; i < missing.size() && i < 8; ++i) os << ' ' << missing[i];
        throw std::runtime_error(os.str());
    }
    if (fallback_pixels) *fallback_pixels = std::move(missing);
    return out;
}

ScalarSummary mmse_scalar(std::span<const double> trace) {
    if (trace.empty()) throw std::invalid_argument("mmse_scalar: empty trace");
    double mean = 0.0;
    for (double v : trace) mean += v;
    mean /= static_cast<double>(trace.size());
    if (trace.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : trace) {
        const double d = v - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / static_cast<double>(trace.size() - 1))};
}

Histogram histogram(std::span<const double> trace, int n_bins) {
    if (trace.empty()) throw std::invalid_argument("histogram: empty trace");
    if (n_bins < 1) throw std::invalid_argument("histogram: need at least one bin");
    double lo = trace[0], hi = trace[0];
    for (double v : trace) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (int b = 0; b <= n_bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + width * b;
    h.edges.back() = hi;
    for (double v : trace) {
        std::size_t bin = 0;
        if (width > 0.0) {
            bin = static_cast<std::size_t>((v - lo) / width);
            if (bin >= static_cast<std::size_t>(n_bins)) bin = static_cast<std::size_t>(n_bins) - 1;
        }
        ++h.counts[bin];
    }
    return h;
}

void write_histogram_csv(const std::string& path, const Histogram& hist) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("histogram: cannot open " + path + " for writing");
    os.precision(17);
    os << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
        os << hist.edges[b] << ',' << hist.edges[b + 1] << ',' << hist.counts[b] << '\n';
}

std::vector<double> trace_column(std::span<const double> flat, int k_classes, int k) {
    if (k_classes < 1 || k < 0 || k >= k_classes)
        throw std::invalid_argument("trace_column: bad class index");
    std::vector<double> out;
    out.reserve(flat.size() / static_cast<std::size_t>(k_classes));
    for (std::size_t i = static_cast<std::size_t>(k); i < flat.size();
         i += static_cast<std::size_t>(k_classes))
        out.push_back(flat[i]);
    return out;
}

} // namespace usdeconv
