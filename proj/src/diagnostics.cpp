#include "usdeconv/diagnostics.hpp"

#include <fstream>
#include <stdexcept>

namespace usdeconv {

double psrf(const std::vector<std::vector<double>>& chains) {
    const std::size_t c = chains.size();
    if (c < 2) throw std::invalid_argument("psrf: need at least 2 chains");
    const std::size_t m = chains[0].size();
    if (m < 2) throw std::invalid_argument("psrf: need at least 2 samples per chain");
    for (const auto& chain : chains)
        if (chain.size() != m) throw std::invalid_argument("psrf: chains must have equal length");

    std::vector<double> chain_mean(c, 0.0);
    double grand_mean = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        for (double v : chains[i]) chain_mean[i] += v;
        chain_mean[i] /= static_cast<double>(m);
        grand_mean += chain_mean[i];
    }
    grand_mean /= static_cast<double>(c);

    double between = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        const double d = grand_mean - chain_mean[i];
        between += d * d;
    }
    between *= static_cast<double>(m) / static_cast<double>(c - 1);

    double within = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        double s = 0.0;
        for (double v : chains[i]) {
            const double d = chain_mean[i] - v;
            s += d * d;
        }
        within += s / static_cast<double>(m - 1);
    }
    within /= static_cast<double>(c);
    if (!(within > 0.0)) throw std::invalid_argument("psrf: degenerate trace (zero within-chain variance)");

    const double md = static_cast<double>(m);
    const double cd = static_cast<double>(c);
    return (md - 1.0) / md + (cd + 1.0) / (cd * md) * (between / within);
}

bool PsrfReport::all_below(double threshold) const {
    for (const auto& [name, value] : entries)
        if (!(value < threshold)) return false;
    return true;
}

void write_psrf_csv(const std::string& path, const PsrfReport& report, double threshold) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("psrf: cannot open " + path + " for writing");
    os.precision(17);
    os << "variable,psrf,pass\n";
    for (const auto& [name, value] : report.entries)
        os << name << ',' << value << ',' << (value < threshold ? "yes" : "no") << '\n';
}

} // namespace usdeconv
