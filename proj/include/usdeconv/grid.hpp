#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace usdeconv {

/// Dense real-valued 2D field stored row-major, origin at the top-left
/// corner. Pixel (r, c) lives at linear index r * cols + c.
struct ImageGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    ImageGrid() = default;
    ImageGrid(std::size_t r, std::size_t c, double fill = 0.0);
    ImageGrid(std::size_t r, std::size_t c, std::vector<double> values);

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return data.size(); }
    bool same_dims(const ImageGrid& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

/// Per-pixel class assignment on the same row-major grid; labels in {1..K}.
struct LabelField {
    std::size_t rows = 0;
    std::size_t cols = 0;
    int k_classes = 1;
    std::vector<int> labels;

    LabelField() = default;
    LabelField(std::size_t r, std::size_t c, int k, int fill = 1);
    LabelField(std::size_t r, std::size_t c, int k, std::vector<int> values);

    int& at(std::size_t r, std::size_t c) { return labels[r * cols + c]; }
    int at(std::size_t r, std::size_t c) const { return labels[r * cols + c]; }
    std::size_t size() const { return labels.size(); }
};

/// Axis-aligned rectangle in pixel coordinates, used to pick CNR regions.
struct RegionMask {
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    std::size_t height = 0;
    std::size_t width = 0;
};

ImageGrid read_matrix(const std::string& path);
void write_matrix(const std::string& path, const ImageGrid& grid);

LabelField read_labels(const std::string& path);
void write_labels(const std::string& path, const LabelField& field);

/// Plain-text export for plotting: one line per grid row, comma separated,
/// 17 significant digits.
void write_csv(const std::string& path, const ImageGrid& grid);

/// Sample mean and standard deviation (1/(n-1) normalization) of the pixels
/// inside the mask. The mask must be in bounds and cover at least 2 pixels.
std::pair<double, double> extract_region(const ImageGrid& grid, const RegionMask& mask);

} // namespace usdeconv
