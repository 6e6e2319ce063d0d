#pragma once

#include <string>
#include <utility>
#include <vector>

namespace usdeconv {

/// Potential scale reduction factor for one scalar variable from C >= 2
/// chains of M >= 2 retained samples each:
///   PSRF = (M-1)/M + (C+1)/(C M) * B/W
/// with B the between-chain and W the within-chain variance. Values below
/// 1.2 indicate convergence.
double psrf(const std::vector<std::vector<double>>& chains);

struct PsrfReport {
    std::vector<std::pair<std::string, double>> entries;
    bool all_below(double threshold) const;
};

void write_psrf_csv(const std::string& path, const PsrfReport& report, double threshold = 1.2);

} // namespace usdeconv
