#include "usdeconv/potts.hpp"

#include <stdexcept>

namespace usdeconv {

void validate(const PottsConfig& cfg) {
    if (!(cfg.beta >= 0.0)) throw std::invalid_argument("potts: beta must be >= 0");
    if (cfg.k_classes < 1) throw std::invalid_argument("potts: k_classes must be >= 1");
}

std::vector<std::size_t> neighbors(std::size_t n, std::size_t rows, std::size_t cols) {
    if (n >= rows * cols) throw std::out_of_range("potts: pixel index out of bounds");
    std::array<std::size_t, 4> buf{};
    const int count = neighbors_inline(n, rows, cols, buf);
    return std::vector<std::size_t>(buf.begin(), buf.begin() + count);
}

double local_log_weight(std::size_t n, int k, const LabelField& z, const PottsConfig& cfg) {
    validate(cfg);
    if (n >= z.size()) throw std::out_of_range("potts: pixel index out of bounds");
    if (k < 1 || k > z.k_classes) throw std::invalid_argument("potts: class out of range");
    std::array<std::size_t, 4> buf{};
    const int count = neighbors_inline(n, z.rows, z.cols, buf);
    int agree = 0;
    for (int i = 0; i < count; ++i)
        if (z.labels[buf[i]] == k) ++agree;
    return cfg.beta * static_cast<double>(agree);
}

double potts_energy(const LabelField& z, const PottsConfig& cfg) {
    validate(cfg);
    long agree = 0;
    for (std::size_t r = 0; r < z.rows; ++r)
        for (std::size_t c = 0; c < z.cols; ++c) {
            const int label = z.at(r, c);
            // count each unordered edge once, double below
            if (c + 1 < z.cols && z.at(r, c + 1) == label) ++agree;
            if (r + 1 < z.rows && z.at(r + 1, c) == label) ++agree;
        }
    return cfg.beta * 2.0 * static_cast<double>(agree);
}

} // namespace usdeconv
