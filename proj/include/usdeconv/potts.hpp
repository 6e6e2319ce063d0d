#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "usdeconv/grid.hpp"

namespace usdeconv {

/// First-order (4-nearest) Potts field configuration. beta is the
/// granularity coefficient; beta = 0 makes the prior uniform.
struct PottsConfig {
    double beta = 1.0;
    int k_classes = 1;
};

void validate(const PottsConfig& cfg);

/// In-bounds 4-neighborhood of pixel n (linear row-major index). Boundary
/// pixels get truncated neighborhoods; labels do not wrap even though the
/// blur is cyclic.
std::vector<std::size_t> neighbors(std::size_t n, std::size_t rows, std::size_t cols);

/// Inline variant for hot loops: fills out[0..count) and returns count.
inline int neighbors_inline(std::size_t n, std::size_t rows, std::size_t cols,
                            std::array<std::size_t, 4>& out) {
    const std::size_t r = n / cols;
    const std::size_t c = n % cols;
    int count = 0;
    if (r > 0) out[count++] = n - cols;
    if (r + 1 < rows) out[count++] = n + cols;
    if (c > 0) out[count++] = n - 1;
    if (c + 1 < cols) out[count++] = n + 1;
    return count;
}

/// beta * (number of neighbors of n currently labeled k): the Potts part of
/// the label conditional.
double local_log_weight(std::size_t n, int k, const LabelField& z, const PottsConfig& cfg);

/// Double sum over ordered neighbor pairs, beta * sum_n sum_{n' in V(n)}
/// delta(z_n - z_{n'}); each unordered edge is counted twice. The single
/// counting matching the local conditionals is potts_energy / 2.
double potts_energy(const LabelField& z, const PottsConfig& cfg);

} // namespace usdeconv
